use std::time::Duration;

use fowl_core::fol::{TptpProblem, TptpUnit};
use fowl_core::molgen::{generate, to_smiles, Atom, BondOrder, EntryMode, MolecularGraph, MolgenEntry};
use fowl_prover::{prove, Answer, Options};
use proptest::prelude::*;

const ELEMENTS: [&str; 3] = ["C", "N", "O"];

fn graph() -> impl Strategy<Value = MolecularGraph> {
    (2..=5usize).prop_flat_map(|n| {
        let atoms = prop::collection::vec(prop::sample::select(&ELEMENTS[..]), n);
        let parents = prop::collection::vec((any::<prop::sample::Index>(), 0..3usize), n - 1);
        (atoms, parents).prop_map(|(atoms, parents)| {
            let mut g = MolecularGraph {
                atoms: atoms.into_iter().map(|e| Atom { element: Some(e.to_string()), charge: 0 }).collect(),
                bonds: Vec::new(),
            };
            for (k, (p, o)) in parents.into_iter().enumerate() {
                g.add_bond(k + 1, p.index(k + 1), BondOrder::ALL[o]);
            }
            g
        })
    })
}

/// The subgraph induced by the first `size` atoms reached from `start`.
fn connected_part(g: &MolecularGraph, start: usize, size: usize) -> MolecularGraph {
    let mut order = vec![start];
    let mut k = 0;
    while k < order.len() && order.len() < size {
        let mut next: Vec<usize> = g.neighbours(order[k]).map(|(j, _)| j).filter(|j| !order.contains(j)).collect();
        next.sort();
        for j in next {
            if order.len() < size {
                order.push(j);
            }
        }
        k += 1;
    }
    let mut sub = MolecularGraph { atoms: order.iter().map(|&i| g.atoms[i].clone()).collect(), bonds: Vec::new() };
    for (a, &i) in order.iter().enumerate() {
        for (b, &j) in order.iter().enumerate() {
            if let Some(o) = g.bond(i, j) {
                sub.add_bond(a, b, o);
            }
        }
    }
    sub
}

fn verdict(instance: &MolecularGraph, class: &MolecularGraph) -> Answer {
    let entry = |id: &str, graph: &MolecularGraph, mode| MolgenEntry {
        id: id.into(),
        smiles: to_smiles(graph),
        mode,
        graph: graph.clone(),
    };
    let out = generate(&[entry("CHEBI:1", instance, EntryMode::Instance), entry("CHEBI:2", class, EntryMode::Class)])
        .unwrap();
    let mut units = out.axioms.units;
    let (name, goal) = out.conjectures[0].clone();
    units.push(TptpUnit::conjecture(name, goal));
    let opts = Options { timeout: Duration::from_secs(20), ..Options::default() };
    prove(&TptpProblem::new(units), &opts).answer
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn connected_subgraphs_are_members(g in graph(), start in any::<prop::sample::Index>(), size in 1..=3usize) {
        let sub = connected_part(&g, start.index(g.atoms.len()), size);
        prop_assert_eq!(verdict(&g, &sub), Answer::Theorem);
    }

    #[test]
    fn foreign_elements_are_not_members(g in graph()) {
        let class = MolecularGraph { atoms: vec![Atom { element: Some("S".into()), charge: 0 }], bonds: Vec::new() };
        prop_assert_eq!(verdict(&g, &class), Answer::CounterSatisfiable);
    }
}
