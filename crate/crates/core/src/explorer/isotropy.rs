//! Loops at a basepoint of the move groupoid and their action on Π̃₁.
//!
//! Loops come from a depth-bounded BFS tree: each non-tree arc `u → v` closes
//! the cycle `path(u) · μ · path(v)⁻¹`, with the return leg renamed along the
//! doe-matching isomorphism between the two concrete graphs that represent
//! `v`. Loops are then compared by the automorphism table they induce.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{identity_table, inner_witness, loop_automorphism, AutomorphismTable};
use crate::moves::{apply_move, inverse_moves, MoveSequence};
use crate::ribbon::{isomorphism, MarkedGraph};

use super::orbit::{orbit, MoveSet, OrbitOptions};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyGenerator {
    pub moves: MoveSequence,
    pub table: AutomorphismTable,
    pub is_identity: bool,
    /// Conjugation by paths, hence trivial as a mapping class.
    pub is_inner: bool,
}

/// Corner bound for the conjugating path at the doe edge.
const INNER_SEARCH: usize = 3;

/// The empty loop first, then one loop per distinct non-identity table, in
/// order of discovery. Inner tables are kept but flagged.
pub fn isotropy_generators(
    m: &MarkedGraph,
    depth: usize,
    moves: MoveSet,
) -> Result<Vec<IsotropyGenerator>> {
    let o = orbit(
        m,
        moves,
        OrbitOptions {
            max_nodes: None,
            max_depth: Some(depth),
        },
    )?;
    let mut out = vec![IsotropyGenerator {
        moves: Vec::new(),
        table: identity_table(&m.graph),
        is_identity: true,
        is_inner: true,
    }];
    for a in &o.arcs {
        let (u, v) = (&o.nodes[a.from], &o.nodes[a.to]);
        let is_tree_arc = v.depth == u.depth + 1
            && v.path.len() == u.path.len() + 1
            && v.path[..u.path.len()] == u.path[..]
            && v.path.last() == Some(&a.mv);
        if is_tree_arc {
            continue;
        }
        let there = apply_move(&u.graph, a.mv)?;
        let phi = isomorphism(&v.graph, &there)?.ok_or(Error::NotALoop)?;
        let mut lp = u.path.clone();
        lp.push(a.mv);
        lp.extend(
            inverse_moves(&v.path)
                .into_iter()
                .map(|mv| mv.transport(&phi)),
        );
        let table = loop_automorphism(m, &lp)?;
        if table.is_identity() || out.iter().any(|g| g.table == table) {
            continue;
        }
        let is_inner = inner_witness(&m.graph, &table, m.doe, INNER_SEARCH).is_some();
        out.push(IsotropyGenerator {
            moves: lp,
            table,
            is_identity: false,
            is_inner,
        });
    }
    Ok(out)
}
