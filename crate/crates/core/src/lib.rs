pub mod align;
pub mod fol;
pub mod molgen;
pub mod owl;
pub mod par;
pub mod reasoner;
pub mod translate;
