//! Random graphs and words shared by the integration suites.
#![allow(dead_code)]

use flipcalc::groupoid::{reduce, GroupoidWord, HalfStep};
use flipcalc::{Dart, RibbonGraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// A uniformly random perfect matching on `3v` darts with the standard
/// rotation `(1 2 3)(4 5 6)…`, resampled until connected.
pub fn random_graph<R: Rng>(rng: &mut R, v: usize) -> RibbonGraph {
    let n = 3 * v;
    let sigma: Vec<u32> = (0..n as u32)
        .map(|i| if i % 3 == 2 { i - 1 } else { i + 2 })
        .collect();
    loop {
        let mut darts: Vec<u32> = (1..=n as u32).collect();
        darts.shuffle(rng);
        let mut iota = vec![0u32; n];
        for pair in darts.chunks(2) {
            iota[pair[0] as usize - 1] = pair[1];
            iota[pair[1] as usize - 1] = pair[0];
        }
        let g = RibbonGraph::new(sigma.clone(), iota).unwrap();
        if g.is_connected() {
            return g;
        }
    }
}

/// A random graph with an even vertex count in `2..=max_v`, relabeled by a
/// random permutation so the rotation is not always standard.
pub fn random_shuffled_graph<R: Rng>(rng: &mut R, max_v: usize) -> RibbonGraph {
    let v = 2 * rng.gen_range(1..=max_v / 2);
    let g = random_graph(rng, v);
    g.relabel(&random_perm(rng, g.dart_count()))
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<u32> {
    let mut p: Vec<u32> = (1..=n as u32).collect();
    p.shuffle(rng);
    p
}

pub fn random_dart<R: Rng>(rng: &mut R, g: &RibbonGraph) -> Dart {
    Dart(rng.gen_range(1..=g.dart_count() as u32))
}

/// A reduced path of `corners` corners starting on the edge of `from`.
pub fn random_reduced_letters<R: Rng>(
    rng: &mut R,
    g: &RibbonGraph,
    from: Dart,
    corners: usize,
) -> Vec<HalfStep> {
    let mut out = Vec::with_capacity(2 * corners);
    let mut d = if rng.gen() { from } else { g.iota(from) };
    for _ in 0..corners {
        let q = if rng.gen() {
            g.sigma(d)
        } else {
            g.sigma(g.sigma(d))
        };
        out.push(HalfStep::into_vertex(d));
        out.push(HalfStep::out_of_vertex(q));
        d = g.iota(q);
    }
    out
}

/// A reduced word with fewer than `max_corners` corners, starting on the
/// edge of `from` or on a random edge.
pub fn random_word<R: Rng>(
    rng: &mut R,
    g: &RibbonGraph,
    from: Option<Dart>,
    max_corners: usize,
) -> GroupoidWord {
    let from = from.unwrap_or_else(|| random_dart(rng, g));
    let corners = rng.gen_range(0..max_corners);
    let letters = random_reduced_letters(rng, g, from, corners);
    reduce(g, &letters, Some(from)).unwrap()
}

/// A valid but generally unreduced letter sequence: every step may backtrack.
pub fn random_walk_letters<R: Rng>(
    rng: &mut R,
    g: &RibbonGraph,
    from: Dart,
    corners: usize,
) -> Vec<HalfStep> {
    let mut out = Vec::with_capacity(2 * corners);
    let mut on = from;
    for _ in 0..corners {
        let d = if rng.gen() { on } else { g.iota(on) };
        let q = match rng.gen_range(0..3) {
            0 => d,
            1 => g.sigma(d),
            _ => g.sigma(g.sigma(d)),
        };
        out.push(HalfStep::into_vertex(d));
        out.push(HalfStep::out_of_vertex(q));
        on = q;
    }
    out
}

/// Reduction by cancelling a randomly chosen adjacent inverse pair until
/// none is left.
pub fn reduce_in_random_order<R: Rng>(rng: &mut R, letters: &[HalfStep]) -> Vec<HalfStep> {
    let mut w = letters.to_vec();
    loop {
        let spots: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&i| w[i + 1] == w[i].inverse())
            .collect();
        let Some(&i) = spots.choose(rng) else {
            return w;
        };
        w.drain(i..i + 2);
    }
}
