//! Flips, shuffles and doe moves as rewrites of `(sigma, iota, doe)`.
//!
//! None of the moves renames darts, so the dart correspondence between a graph
//! and its image is always the identity. A flip at `f1` with `f2 = iota(f1)`,
//! `A = sigma(f1)`, `B = sigma²(f1)`, `D = sigma(f2)`, `C = sigma²(f2)` replaces
//! the vertices `(f1 A B)` and `(f2 D C)` by `(f1 B D)` and `(f2 C A)`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::ribbon::{Dart, MarkedGraph, RibbonGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DoeKind {
    /// `doe ↦ iota(doe)`
    Invert,
    /// `doe ↦ sigma(doe)`
    Rotate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    Flip(Dart),
    /// Reverses the rotation at the vertex containing the dart.
    Shuffle(Dart),
    Doe(DoeKind),
}

impl Move {
    /// Rewrites the move along a dart map (`map[d-1]` is the image of `d`).
    pub fn transport(self, map: &[Dart]) -> Move {
        match self {
            Move::Flip(d) => Move::Flip(map[d.idx()]),
            Move::Shuffle(d) => Move::Shuffle(map[d.idx()]),
            doe => doe,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Flip(d) => write!(f, "flip {d}"),
            Move::Shuffle(d) => write!(f, "shuffle {d}"),
            Move::Doe(DoeKind::Invert) => write!(f, "doe invert"),
            Move::Doe(DoeKind::Rotate) => write!(f, "doe rotate"),
        }
    }
}

pub type MoveSequence = Vec<Move>;

/// The six darts around a flipped edge, named as in the module docs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlipRecord {
    pub f1: Dart,
    pub f2: Dart,
    pub a: Dart,
    pub b: Dart,
    pub c: Dart,
    pub d: Dart,
}

impl FlipRecord {
    fn of(g: &RibbonGraph, f1: Dart) -> FlipRecord {
        let f2 = g.iota(f1);
        FlipRecord {
            f1,
            f2,
            a: g.sigma(f1),
            b: g.sigma_inv(f1),
            c: g.sigma_inv(f2),
            d: g.sigma(f2),
        }
    }
}

pub fn can_flip(m: &MarkedGraph, f1: Dart) -> Result<bool> {
    m.graph.check_dart(f1)?;
    Ok(!m.graph.is_loop(f1))
}

pub fn flip_graph(g: &RibbonGraph, f1: Dart) -> Result<(RibbonGraph, FlipRecord)> {
    g.check_dart(f1)?;
    if g.is_loop(f1) {
        return Err(Error::UnflippableLoop(f1.0));
    }
    let r = FlipRecord::of(g, f1);
    let mut sigma = g.sigma_images().to_vec();
    let mut set = |x: Dart, y: Dart| sigma[x.idx()] = y.0;
    set(r.f1, r.b);
    set(r.b, r.d);
    set(r.d, r.f1);
    set(r.f2, r.c);
    set(r.c, r.a);
    set(r.a, r.f2);
    Ok((g.with_sigma(sigma), r))
}

/// Flips the edge of `f1`. The doe keeps its dart identity.
pub fn flip(m: &MarkedGraph, f1: Dart) -> Result<(MarkedGraph, FlipRecord)> {
    let (graph, rec) = flip_graph(&m.graph, f1)?;
    Ok((MarkedGraph { graph, doe: m.doe }, rec))
}

pub fn shuffle_graph(g: &RibbonGraph, v: Dart) -> Result<RibbonGraph> {
    g.check_dart(v)?;
    let (a, b, c) = (v, g.sigma(v), g.sigma_inv(v));
    let mut sigma = g.sigma_images().to_vec();
    sigma[a.idx()] = c.0;
    sigma[c.idx()] = b.0;
    sigma[b.idx()] = a.0;
    Ok(g.with_sigma(sigma))
}

pub fn shuffle(m: &MarkedGraph, v: Dart) -> Result<MarkedGraph> {
    Ok(MarkedGraph {
        graph: shuffle_graph(&m.graph, v)?,
        doe: m.doe,
    })
}

pub fn doe_move(m: &MarkedGraph, kind: DoeKind) -> MarkedGraph {
    let doe = match kind {
        DoeKind::Invert => m.graph.iota(m.doe),
        DoeKind::Rotate => m.graph.sigma(m.doe),
    };
    MarkedGraph {
        graph: m.graph.clone(),
        doe,
    }
}

pub fn apply_move(m: &MarkedGraph, mv: Move) -> Result<MarkedGraph> {
    match mv {
        Move::Flip(d) => flip(m, d).map(|(g, _)| g),
        Move::Shuffle(v) => shuffle(m, v),
        Move::Doe(k) => Ok(doe_move(m, k)),
    }
}

pub fn apply_sequence(m: &MarkedGraph, s: &[Move]) -> Result<MarkedGraph> {
    s.iter()
        .enumerate()
        .try_fold(m.clone(), |cur, (index, &mv)| {
            apply_move(&cur, mv).map_err(|e| Error::InapplicableMove {
                index,
                reason: e.to_string(),
            })
        })
}

/// A sequence undoing `s` when applied to `apply_sequence(m, s)`. Flips are
/// undone by three more flips of the same dart, rotations by two rotations.
pub fn invert_sequence(s: &[Move], m: &MarkedGraph) -> Result<MoveSequence> {
    apply_sequence(m, s)?;
    Ok(inverse_moves(s))
}

pub(crate) fn inverse_moves(s: &[Move]) -> MoveSequence {
    s.iter()
        .rev()
        .flat_map(|&mv| match mv {
            Move::Flip(_) => vec![mv; 3],
            Move::Shuffle(_) | Move::Doe(DoeKind::Invert) => vec![mv],
            Move::Doe(DoeKind::Rotate) => vec![mv; 2],
        })
        .collect()
}

/// Parses a move script: one of `flip <dart>`, `shuffle <dart>`,
/// `doe invert|rotate` per line; `#` starts a comment.
pub fn parse_script(text: &str) -> Result<MoveSequence> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let words: Vec<&str> = content.split_whitespace().collect();
        let dart = |w: &str| {
            w.parse::<u32>()
                .map(Dart)
                .map_err(|_| err(format!("bad dart id {w:?}")))
        };
        let mv = match words.as_slice() {
            ["flip", d] => Move::Flip(dart(d)?),
            ["shuffle", d] => Move::Shuffle(dart(d)?),
            ["doe", "invert"] => Move::Doe(DoeKind::Invert),
            ["doe", "rotate"] => Move::Doe(DoeKind::Rotate),
            _ => return Err(err(format!("unrecognized move {content:?}"))),
        };
        out.push(mv);
    }
    Ok(out)
}

pub fn format_script(s: &[Move]) -> String {
    s.iter().map(|m| format!("{m}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::examples::*;
    use crate::ribbon::{canonical_form, unmarked_canonical_form};

    #[test]
    fn can_flip_examples() {
        let m = marked(dumbbell(), 1);
        assert!(can_flip(&m, Dart(3)).unwrap());
        assert!(!can_flip(&m, Dart(1)).unwrap());
        let t = marked(nonplanar_theta(), 1);
        assert!(t.graph.darts().all(|d| can_flip(&t, d).unwrap()));
        assert_eq!(can_flip(&m, Dart(9)), Err(Error::UnknownDart(9)));
    }

    #[test]
    fn dumbbell_bar_flip_gives_planar_theta() {
        let (m, rec) = flip(&marked(dumbbell(), 1), Dart(3)).unwrap();
        assert_eq!(m.graph.sigma_cycles(), vec![vec![1, 6, 5], vec![2, 4, 3]]);
        assert_eq!(m.graph.iota_images(), dumbbell().iota_images());
        assert_eq!(
            (rec.a, rec.b, rec.c, rec.d),
            (Dart(1), Dart(2), Dart(5), Dart(4))
        );
        let i = m.invariants().unwrap();
        assert_eq!((i.faces, i.genus), (3, 0));
        assert_eq!(
            unmarked_canonical_form(&m.graph),
            unmarked_canonical_form(&planar_theta())
        );
    }

    #[test]
    fn loop_flip_rejected() {
        assert_eq!(
            flip(&marked(dumbbell(), 1), Dart(2)).unwrap_err(),
            Error::UnflippableLoop(2)
        );
    }

    #[test]
    fn double_flip_swaps_darts() {
        let m = marked(nonplanar_theta(), 2);
        let (m1, _) = flip(&m, Dart(1)).unwrap();
        let (m2, _) = flip(&m1, Dart(1)).unwrap();
        let swap: Vec<u32> = m
            .graph
            .darts()
            .map(|d| match d.0 {
                1 => 4,
                4 => 1,
                x => x,
            })
            .collect();
        assert_eq!(m2.graph, m.graph.relabel(&swap));
        assert_eq!(
            unmarked_canonical_form(&m2.graph),
            unmarked_canonical_form(&m.graph)
        );
        let m4 = apply_sequence(&m, &[Move::Flip(Dart(1)); 4]).unwrap();
        assert_eq!(m4, m);
    }

    #[test]
    fn shuffle_examples() {
        let m = marked(planar_theta(), 1);
        for v in [Dart(1), Dart(4)] {
            let s = shuffle(&m, v).unwrap();
            let i = s.invariants().unwrap();
            assert_eq!((i.genus, i.punctures, i.rank), (1, 1, 2));
            assert_eq!(shuffle(&s, v).unwrap(), m);
        }
    }

    #[test]
    fn doe_moves_have_expected_orders() {
        let m = marked(dumbbell(), 3);
        let r3 = apply_sequence(&m, &[Move::Doe(DoeKind::Rotate); 3]).unwrap();
        assert_eq!(r3, m);
        let i2 = apply_sequence(&m, &[Move::Doe(DoeKind::Invert); 2]).unwrap();
        assert_eq!(i2, m);
        // BFS over doe words reaches every dart.
        let mut seen = std::collections::BTreeSet::from([m.doe]);
        let mut frontier = vec![m.clone()];
        while let Some(cur) = frontier.pop() {
            for k in [DoeKind::Invert, DoeKind::Rotate] {
                let next = doe_move(&cur, k);
                if seen.insert(next.doe) {
                    frontier.push(next);
                }
            }
        }
        assert_eq!(seen.len(), 6);
    }

    #[test]
    fn inverse_sequences() {
        let m = marked(dumbbell(), 4);
        let s = vec![
            Move::Flip(Dart(3)),
            Move::Doe(DoeKind::Rotate),
            Move::Shuffle(Dart(2)),
            Move::Flip(Dart(1)),
            Move::Doe(DoeKind::Invert),
        ];
        let t = invert_sequence(&s, &m).unwrap();
        let back = apply_sequence(&apply_sequence(&m, &s).unwrap(), &t).unwrap();
        assert_eq!(canonical_form(&back), canonical_form(&m));
        assert_eq!(apply_sequence(&m, &[]).unwrap(), m);
    }

    #[test]
    fn inapplicable_move_reports_index() {
        let m = marked(dumbbell(), 1);
        let e = apply_sequence(&m, &[Move::Doe(DoeKind::Rotate), Move::Flip(Dart(1))]);
        assert!(matches!(e, Err(Error::InapplicableMove { index: 1, .. })));
    }

    #[test]
    fn script_round_trip() {
        let text = "flip 3\nshuffle 4\ndoe invert\ndoe rotate\n";
        let s = parse_script(text).unwrap();
        assert_eq!(format_script(&s), text);
        assert!(matches!(
            parse_script("flip\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
