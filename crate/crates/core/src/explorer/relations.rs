//! Certificates for the local relations among flips.

use serde::Serialize;

use crate::error::Result;
use crate::groupoid::{inner_witness, loop_automorphism};
use crate::moves::{apply_sequence, flip_graph, Move, MoveSequence};
use crate::ribbon::{
    canonical_form, isomorphism, unmarked_canonical_form, Dart, MarkedGraph, RibbonGraph,
};

use super::orbit::doe_word;

/// Corner bound for the conjugating path at the doe edge.
const INNER_SEARCH: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub dart: Dart,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareCheck {
    pub first: Dart,
    pub second: Dart,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PentagonWitness {
    /// Edge representatives of the two alternating edges.
    pub edges: (Dart, Dart),
    /// The five flip darts, in order.
    pub flips: [Dart; 5],
    /// Whether the loop closed by a doe word acts on the groupoid by an inner
    /// automorphism; `None` when no doe choice closes it.
    pub inner: Option<bool>,
}

impl PentagonWitness {
    pub fn moves(&self) -> MoveSequence {
        self.flips.iter().map(|&d| Move::Flip(d)).collect()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// Loop edges, which cannot be flipped.
    pub skipped_loops: Vec<Dart>,
    pub involution: Vec<EdgeCheck>,
    pub order4: Vec<EdgeCheck>,
    pub commuting_squares: Vec<SquareCheck>,
    /// Adjacent edge pairs searched for a pentagon.
    pub pentagon_pairs: Vec<(Dart, Dart)>,
    pub pentagons: Vec<PentagonWitness>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.involution.iter().all(|c| c.holds)
            && self.order4.iter().all(|c| c.holds)
            && self.commuting_squares.iter().all(|c| c.holds)
    }
}

/// `flip(flip(g, f1), f1)` equals `g` with `f1`, `f2` swapped.
pub fn check_involution(g: &RibbonGraph, f1: Dart) -> Result<bool> {
    let (h, _) = flip_graph(g, f1)?;
    let (h, _) = flip_graph(&h, f1)?;
    let f2 = g.iota(f1);
    let swap = |d: Dart| {
        if d == f1 {
            f2
        } else if d == f2 {
            f1
        } else {
            d
        }
    };
    let exact = g.darts().all(|d| h.sigma(swap(d)) == swap(g.sigma(d)));
    Ok(exact && unmarked_canonical_form(&h)? == unmarked_canonical_form(g)?)
}

pub fn check_order4(m: &MarkedGraph, f1: Dart) -> Result<bool> {
    let r = apply_sequence(m, &[Move::Flip(f1); 4])?;
    Ok(r.graph == m.graph && canonical_form(&r)? == canonical_form(m)?)
}

fn shares_vertex(g: &RibbonGraph, e: Dart, f: Dart) -> bool {
    let ve = [g.vertex_of(e), g.vertex_of(g.iota(e))];
    let vf = [g.vertex_of(f), g.vertex_of(g.iota(f))];
    ve.iter().any(|v| vf.contains(v))
}

fn shared_vertices(g: &RibbonGraph, e: Dart, f: Dart) -> usize {
    let mut ve = vec![g.vertex_of(e), g.vertex_of(g.iota(e))];
    ve.dedup();
    let vf = [g.vertex_of(f), g.vertex_of(g.iota(f))];
    ve.iter().filter(|v| vf.contains(v)).count()
}

/// 5-flip sequences alternating between the edges of `e` and `f` (either
/// may go first, any dart of each edge at each step) that come back to the
/// unmarked type of `g`.
pub fn pentagon_search(g: &RibbonGraph, e: Dart, f: Dart) -> Result<Vec<PentagonWitness>> {
    let target = unmarked_canonical_form(g)?;
    let mut out = Vec::new();
    for (first, second) in [(e, f), (f, e)] {
        for choice in 0u32..32 {
            let mut h = g.clone();
            let mut flips = [Dart(0); 5];
            let mut ok = true;
            for (k, slot) in flips.iter_mut().enumerate() {
                let base = if k % 2 == 0 { first } else { second };
                let d = if choice >> k & 1 == 1 {
                    g.iota(base)
                } else {
                    base
                };
                if h.is_loop(d) {
                    ok = false;
                    break;
                }
                h = flip_graph(&h, d)?.0;
                *slot = d;
            }
            if ok && unmarked_canonical_form(&h)? == target {
                out.push(PentagonWitness {
                    edges: (g.edge_of(e), g.edge_of(f)),
                    flips,
                    inner: None,
                });
            }
        }
    }
    Ok(out)
}

/// Closes a pentagon into a loop at `m` by appending the doe word that
/// restores the doe-matched type. Returns `None` if the doe cannot be matched.
pub fn close_with_doe_word(m: &MarkedGraph, w: &PentagonWitness) -> Result<Option<MoveSequence>> {
    let mut s = w.moves();
    let end = apply_sequence(m, &s)?;
    for d in end.graph.darts() {
        let cand = MarkedGraph {
            graph: end.graph.clone(),
            doe: d,
        };
        if isomorphism(&cand, m)?.is_some() {
            s.extend(doe_word(&end, d)?);
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn certify_relations(m: &MarkedGraph) -> Result<RelationReport> {
    let g = &m.graph;
    g.ensure_connected()?;
    let mut rep = RelationReport::default();
    let edges: Vec<Dart> = g.edges().into_iter().map(|[a, _]| a).collect();
    let flippable: Vec<Dart> = edges.iter().copied().filter(|&e| !g.is_loop(e)).collect();
    rep.skipped_loops = edges.iter().copied().filter(|&e| g.is_loop(e)).collect();
    for &e in &flippable {
        rep.involution.push(EdgeCheck {
            dart: e,
            holds: check_involution(g, e)?,
        });
        rep.order4.push(EdgeCheck {
            dart: e,
            holds: check_order4(m, e)?,
        });
    }
    for (i, &e) in flippable.iter().enumerate() {
        for &f in &flippable[i + 1..] {
            if !shares_vertex(g, e, f) {
                let ef = flip_graph(&flip_graph(g, e)?.0, f)?.0;
                let fe = flip_graph(&flip_graph(g, f)?.0, e)?.0;
                rep.commuting_squares.push(SquareCheck {
                    first: e,
                    second: f,
                    holds: ef == fe,
                });
            } else if shared_vertices(g, e, f) == 1 {
                rep.pentagon_pairs.push((e, f));
                for mut w in pentagon_search(g, e, f)? {
                    if let Some(s) = close_with_doe_word(m, &w)? {
                        let t = loop_automorphism(m, &s)?;
                        w.inner = Some(inner_witness(g, &t, m.doe, INNER_SEARCH).is_some());
                    }
                    rep.pentagons.push(w);
                }
            }
        }
    }
    Ok(rep)
}
