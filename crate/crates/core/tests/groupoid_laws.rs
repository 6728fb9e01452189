mod common;

use common::*;
use flipcalc::groupoid::{
    apply_iso, compose, cyclic_reduce, induced_iso, inverse, puncture_loop, reduce, GroupoidWord,
    IsoChain,
};
use flipcalc::moves::Move;
use flipcalc::{Dart, MarkedGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A flippable dart of `g`, if any.
fn flippable<R: Rng>(r: &mut R, g: &flipcalc::RibbonGraph) -> Option<Dart> {
    let ds: Vec<Dart> = g.darts().filter(|&d| !g.is_loop(d)).collect();
    (!ds.is_empty()).then(|| ds[r.gen_range(0..ds.len())])
}

fn rotations(w: &GroupoidWord) -> Vec<Vec<flipcalc::groupoid::HalfStep>> {
    let l = w.letters();
    (0..l.len())
        .step_by(2)
        .map(|k| {
            let mut r = l.to_vec();
            r.rotate_left(k);
            r
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_confluent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_shuffled_graph(&mut r, 6);
        let from = random_dart(&mut r, &g);
        let corners = r.gen_range(0..20);
        let letters = random_walk_letters(&mut r, &g, from, corners);
        let w = reduce(&g, &letters, Some(from)).unwrap();
        for _ in 0..16 {
            prop_assert_eq!(reduce_in_random_order(&mut r, &letters), w.letters().to_vec());
        }
    }

    #[test]
    fn groupoid_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_shuffled_graph(&mut r, 6);
        let u = random_word(&mut r, &g, None, 8);
        let v = random_word(&mut r, &g, Some(u.end()), 8);
        let w = random_word(&mut r, &g, Some(v.end()), 8);
        let uv_w = compose(&compose(&u, &v).unwrap(), &w).unwrap();
        let u_vw = compose(&u, &compose(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(&uv_w, &u_vw);
        let id_s = GroupoidWord::identity(&g, u.start());
        let id_e = GroupoidWord::identity(&g, u.end());
        prop_assert_eq!(compose(&id_s, &u).unwrap(), u.clone());
        prop_assert_eq!(compose(&u, &id_e).unwrap(), u.clone());
        prop_assert_eq!(compose(&u, &inverse(&u)).unwrap(), id_s);
        prop_assert_eq!(compose(&inverse(&u), &u).unwrap(), id_e);
        prop_assert_eq!(inverse(&inverse(&u)), u.clone());
        // a reduced random path stays reduced
        prop_assert_eq!(reduce(&g, u.letters(), Some(u.start())).unwrap(), u);
    }

    #[test]
    fn induced_isos_are_functors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_shuffled_graph(&mut r, 8);
        let Some(f) = flippable(&mut r, &g) else { return Ok(()); };
        let m = MarkedGraph { graph: g.clone(), doe: Dart(1) };
        let iso = induced_iso(Move::Flip(f), &m).unwrap();
        let h = &iso.target.graph;
        for _ in 0..8 {
            let u = random_word(&mut r, &g, None, 10);
            let v = random_word(&mut r, &g, Some(u.end()), 10);
            let lhs = apply_iso(&iso, &compose(&u, &v).unwrap());
            let rhs = compose(&apply_iso(&iso, &u), &apply_iso(&iso, &v)).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(apply_iso(&iso, &inverse(&u)), inverse(&apply_iso(&iso, &u)));
            // images are genuine paths of the flipped graph
            prop_assert!(reduce(h, lhs.letters(), Some(lhs.start())).is_ok());
        }
    }

    #[test]
    fn flip_cube_inverts_a_flip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_shuffled_graph(&mut r, 8);
        let Some(f) = flippable(&mut r, &g) else { return Ok(()); };
        let m = MarkedGraph { graph: g.clone(), doe: random_dart(&mut r, &g) };
        let chain = IsoChain::new(&m, &[Move::Flip(f); 4]).unwrap();
        prop_assert_eq!(&chain.isos.last().unwrap().target, &m);
        for _ in 0..8 {
            let u = random_word(&mut r, &g, None, 10);
            prop_assert_eq!(chain.apply(&u), u);
        }
    }

    #[test]
    fn puncture_loops_go_to_puncture_loops(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_shuffled_graph(&mut r, 8);
        let m = MarkedGraph { graph: g.clone(), doe: Dart(1) };
        let s: Vec<Move> = (0..r.gen_range(1..4))
            .filter_map(|_| flippable(&mut r, &g).map(Move::Flip))
            .collect();
        let Ok(chain) = IsoChain::new(&m, &s) else { return Ok(()); };
        let Some(last) = chain.isos.last() else { return Ok(()); };
        let h = &last.target.graph;
        let targets: Vec<_> = h
            .darts()
            .map(|d| puncture_loop(h, d).unwrap().letters().to_vec())
            .collect();
        for p in g.punctures() {
            let img = cyclic_reduce(h, &chain.apply(&puncture_loop(&g, p.darts[0]).unwrap()));
            prop_assert!(rotations(&img).iter().any(|rot| targets.contains(rot)));
        }
    }
}
