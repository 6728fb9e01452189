//! Breadth-first orbits of marked graphs under a chosen move set.
//!
//! Every node keeps the concrete graph reached from the basepoint along the
//! BFS tree, with dart identities carried through, together with the move
//! path that produced it. Arcs are recorded in the dart coordinates of their
//! source node. Frontiers are expanded in parallel and merged in frontier
//! order, so the output does not depend on the thread count.

use serde::Serialize;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::moves::{apply_move, DoeKind, Move, MoveSequence};
use crate::par;
use crate::ribbon::{canonical_form, CanonicalForm, Dart, MarkedGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoveSet {
    pub flip: bool,
    pub shuffle: bool,
    pub doe: bool,
}

impl MoveSet {
    pub const NONE: MoveSet = MoveSet {
        flip: false,
        shuffle: false,
        doe: false,
    };
    pub const FLIP_DOE: MoveSet = MoveSet {
        flip: true,
        shuffle: false,
        doe: true,
    };
    pub const ALL: MoveSet = MoveSet {
        flip: true,
        shuffle: true,
        doe: true,
    };

    /// Every applicable move of the set at `m`, in a fixed order.
    pub fn moves_at(&self, m: &MarkedGraph) -> Vec<Move> {
        let g = &m.graph;
        let mut out = Vec::new();
        if self.flip {
            out.extend(g.darts().filter(|&d| !g.is_loop(d)).map(Move::Flip));
        }
        if self.shuffle {
            out.extend(g.vertices().into_iter().map(|[v, _, _]| Move::Shuffle(v)));
        }
        if self.doe {
            out.push(Move::Doe(DoeKind::Invert));
            out.push(Move::Doe(DoeKind::Rotate));
        }
        out
    }
}

impl FromStr for MoveSet {
    type Err = Error;

    /// Comma-separated subset of `flip,shuffle,doe`; empty means none.
    fn from_str(s: &str) -> Result<Self> {
        let mut set = MoveSet::NONE;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "flip" | "flips" => set.flip = true,
                "shuffle" | "shuffles" => set.shuffle = true,
                "doe" => set.doe = true,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unknown move family {other:?}"),
                    })
                }
            }
        }
        Ok(set)
    }
}

impl fmt::Display for MoveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = [
            (self.flip, "flip"),
            (self.shuffle, "shuffle"),
            (self.doe, "doe"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OrbitOptions {
    pub max_nodes: Option<usize>,
    pub max_depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitNode {
    pub form: CanonicalForm,
    pub depth: usize,
    /// Moves from the basepoint along the BFS tree.
    pub path: MoveSequence,
    /// The graph reached by `path`, darts carried from the basepoint.
    #[serde(skip)]
    pub graph: MarkedGraph,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OrbitArc {
    pub from: usize,
    pub to: usize,
    /// Move in the dart coordinates of `nodes[from].graph`.
    pub mv: Move,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitGraph {
    pub moves: MoveSet,
    pub nodes: Vec<OrbitNode>,
    pub arcs: Vec<OrbitArc>,
    /// False when a budget stopped the search early.
    pub complete: bool,
    /// Nodes discovered but not expanded when the search stopped.
    pub frontier: usize,
}

impl OrbitGraph {
    pub fn basepoint(&self) -> &CanonicalForm {
        &self.nodes[0].form
    }

    pub fn forms(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.nodes.iter().map(|n| &n.form)
    }

    pub fn index_of(&self, f: &CanonicalForm) -> Option<usize> {
        self.nodes.iter().position(|n| &n.form == f)
    }
}

pub fn orbit(m: &MarkedGraph, moves: MoveSet, opts: OrbitOptions) -> Result<OrbitGraph> {
    m.graph.ensure_connected()?;
    m.graph.check_dart(m.doe)?;
    let base = canonical_form(m)?;
    let mut index: HashMap<CanonicalForm, usize> = HashMap::from([(base.clone(), 0)]);
    let mut nodes = vec![OrbitNode {
        form: base,
        depth: 0,
        path: Vec::new(),
        graph: m.clone(),
    }];
    let mut arcs = Vec::new();
    let mut frontier: Vec<usize> = vec![0];
    let mut complete = true;
    let mut depth = 0;
    while !frontier.is_empty() {
        if opts.max_depth.is_some_and(|d| depth >= d) {
            // Unexpanded nodes might still have unseen neighbours.
            complete = frontier
                .iter()
                .all(|&i| moves.moves_at(&nodes[i].graph).is_empty());
            break;
        }
        let expanded: Vec<Vec<(Move, MarkedGraph, CanonicalForm)>> = par::map(&frontier, |&i| {
            let g = &nodes[i].graph;
            moves
                .moves_at(g)
                .into_iter()
                .map(|mv| {
                    let next = apply_move(g, mv).expect("generated moves apply");
                    let form = canonical_form(&next).expect("moves keep connectivity");
                    (mv, next, form)
                })
                .collect()
        });
        let mut next_frontier = Vec::new();
        let mut stopped = false;
        for (&i, outs) in frontier.iter().zip(expanded) {
            for (mv, graph, form) in outs {
                let to = match index.get(&form) {
                    Some(&j) => j,
                    None => {
                        if opts.max_nodes.is_some_and(|b| nodes.len() >= b) {
                            stopped = true;
                            continue;
                        }
                        let j = nodes.len();
                        let mut path = nodes[i].path.clone();
                        path.push(mv);
                        index.insert(form.clone(), j);
                        nodes.push(OrbitNode {
                            form,
                            depth: depth + 1,
                            path,
                            graph,
                        });
                        next_frontier.push(j);
                        j
                    }
                };
                arcs.push(OrbitArc { from: i, to, mv });
            }
        }
        frontier = next_frontier;
        depth += 1;
        if stopped {
            complete = false;
            break;
        }
    }
    arcs.sort();
    Ok(OrbitGraph {
        moves,
        nodes,
        arcs,
        frontier: if complete { 0 } else { frontier.len() },
        complete,
    })
}

/// Canonical forms in the orbit, sorted.
pub fn orbit_forms(m: &MarkedGraph, moves: MoveSet) -> Result<Vec<CanonicalForm>> {
    let mut forms: Vec<CanonicalForm> = orbit(m, moves, OrbitOptions::default())?
        .nodes
        .into_iter()
        .map(|n| n.form)
        .collect();
    forms.sort_unstable();
    Ok(forms)
}

/// Splits a set of marked forms into orbits. Each orbit is sorted; orbits
/// are ordered by their least element.
pub fn orbit_partition(forms: &[CanonicalForm], moves: MoveSet) -> Result<Vec<Vec<CanonicalForm>>> {
    let mut sorted = forms.to_vec();
    sorted.sort_unstable();
    let mut assigned: HashSet<CanonicalForm> = HashSet::new();
    let mut parts = Vec::new();
    for f in &sorted {
        if assigned.contains(f) {
            continue;
        }
        let orb = orbit_forms(&f.to_marked(), moves)?;
        assigned.extend(orb.iter().cloned());
        parts.push(orb);
    }
    Ok(parts)
}

/// The doe-move word carrying the doe of `m` to `target`.
pub fn doe_word(m: &MarkedGraph, target: Dart) -> Result<MoveSequence> {
    let g = &m.graph;
    g.check_dart(target)?;
    let mut prev: HashMap<Dart, (Dart, DoeKind)> = HashMap::new();
    let mut queue = std::collections::VecDeque::from([m.doe]);
    let mut seen = vec![false; g.dart_count()];
    seen[m.doe.idx()] = true;
    while let Some(d) = queue.pop_front() {
        if d == target {
            let mut word = Vec::new();
            let mut cur = d;
            while cur != m.doe {
                let (p, k) = prev[&cur];
                word.push(Move::Doe(k));
                cur = p;
            }
            word.reverse();
            return Ok(word);
        }
        for (next, k) in [(g.iota(d), DoeKind::Invert), (g.sigma(d), DoeKind::Rotate)] {
            if !seen[next.idx()] {
                seen[next.idx()] = true;
                prev.insert(next, (d, k));
                queue.push_back(next);
            }
        }
    }
    Err(Error::Disconnected)
}
