mod common;

use std::collections::BTreeSet;

use common::*;
use flipcalc::explorer::{
    classify_unicyclic, enumerate_forms, isotropy_generators, orbit, EnumerateOptions, MoveSet,
    OrbitOptions, TruncatedGraph, UnicyclicClass,
};
use flipcalc::ribbon::{automorphisms, canonical_form, examples, unmarked_canonical_form};
use flipcalc::MarkedGraph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Each unmarked type contributes `3V / |Aut|` marked forms.
#[test]
fn census_matches_automorphism_count() {
    for v in [2, 4, 6] {
        let forms = enumerate_forms(v, EnumerateOptions::default()).unwrap();
        let types: BTreeSet<_> = forms
            .iter()
            .map(|f| unmarked_canonical_form(&f.to_marked().graph).unwrap())
            .collect();
        let expected: usize = types
            .iter()
            .map(|t| 3 * v / automorphisms(&t.to_marked().graph).unwrap().len())
            .sum();
        assert_eq!(forms.len(), expected, "V = {v}");
    }
}

#[test]
fn random_graphs_are_enumerated() {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    let forms: BTreeSet<_> = enumerate_forms(6, EnumerateOptions::default())
        .unwrap()
        .into_iter()
        .collect();
    for _ in 0..500 {
        let g = random_graph(&mut r, 6);
        let doe = random_dart(&mut r, &g);
        assert!(forms.contains(&canonical_form(&MarkedGraph { graph: g, doe }).unwrap()));
    }
}

#[test]
fn orbits_are_deterministic() {
    let m = examples::marked(examples::nonplanar_theta(), 1);
    let opts = OrbitOptions {
        max_nodes: Some(40),
        max_depth: None,
    };
    let a = serde_json::to_string(&orbit(&m, MoveSet::ALL, opts).unwrap()).unwrap();
    let b = serde_json::to_string(&orbit(&m, MoveSet::ALL, opts).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn isotropy_tables_replay() {
    let m = examples::marked(examples::nonplanar_theta(), 1);
    let gens = isotropy_generators(&m, 3, MoveSet::FLIP_DOE).unwrap();
    assert!(gens[0].is_identity);
    for g in &gens[1..] {
        let t = flipcalc::groupoid::loop_automorphism(&m, &g.moves).unwrap();
        assert_eq!(t, g.table);
        assert!(!t.is_identity());
    }
}

#[test]
fn unicyclic_documents() {
    let uniform = "darts 8\nsigma (1 3 2)(4 6 5)(7)(8)\niota (2 4)(5 1)(3 7)(6 8)\n";
    let mixed = "darts 8\nsigma (1 3 2)(4 5 6)(7)(8)\niota (2 4)(5 1)(3 7)(6 8)\n";
    let g = TruncatedGraph::parse(uniform).unwrap();
    assert_eq!(
        classify_unicyclic(&g).unwrap(),
        UnicyclicClass::FInfinityLike
    );
    let g = TruncatedGraph::parse(mixed).unwrap();
    assert_eq!(classify_unicyclic(&g).unwrap(), UnicyclicClass::Chark);
}
