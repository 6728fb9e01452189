//! Canonical labeling of marked ribbon graphs.
//!
//! The doe gets label 1. Darts are processed in label order; processing `d`
//! hands the next free labels to `sigma(d)`, `sigma²(d)` and `iota(d)`, in that
//! order, whenever they are still unlabeled. The encoding lists, for labels
//! `1..=2E`, the pair (label of `sigma(d)`, label of `iota(d)`).

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

use super::{Dart, MarkedGraph, RibbonGraph};
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub encoding: Vec<u32>,
}

impl CanonicalForm {
    pub fn dart_count(&self) -> usize {
        self.encoding.len() / 2
    }

    /// The representative graph on labels `1..=2E`, doe at label 1.
    pub fn to_marked(&self) -> MarkedGraph {
        let n = self.dart_count();
        let sigma = (0..n).map(|i| self.encoding[2 * i]).collect();
        let iota = (0..n).map(|i| self.encoding[2 * i + 1]).collect();
        MarkedGraph {
            graph: RibbonGraph::new_unchecked(sigma, iota),
            doe: Dart(1),
        }
    }
}

/// Scratch buffers so hot loops do not reallocate.
pub(crate) struct Labeler {
    label: Vec<u32>,
    order: Vec<u32>,
}

impl Labeler {
    pub(crate) fn new(n: usize) -> Self {
        Labeler {
            label: vec![0; n],
            order: Vec::with_capacity(n),
        }
    }

    /// Runs the labeling; returns `false` if some dart stayed unreachable.
    pub(crate) fn run(&mut self, g: &RibbonGraph, doe: Dart) -> bool {
        let n = g.dart_count();
        if self.label.len() != n {
            self.label.resize(n, 0);
        }
        self.label.iter_mut().for_each(|l| *l = 0);
        self.order.clear();
        let sigma = g.sigma_images();
        let iota = g.iota_images();
        self.label[doe.idx()] = 1;
        self.order.push(doe.0);
        let mut head = 0;
        while head < self.order.len() {
            let d = self.order[head] as usize - 1;
            head += 1;
            let s1 = sigma[d];
            let s2 = sigma[s1 as usize - 1];
            for x in [s1, s2, iota[d]] {
                let slot = &mut self.label[x as usize - 1];
                if *slot == 0 {
                    self.order.push(x);
                    *slot = self.order.len() as u32;
                }
            }
        }
        self.order.len() == n
    }

    pub(crate) fn encode(&self, g: &RibbonGraph) -> Vec<u32> {
        let mut enc = Vec::with_capacity(2 * self.order.len());
        for &d in &self.order {
            let d = Dart(d);
            enc.push(self.label[g.sigma(d).idx()]);
            enc.push(self.label[g.iota(d).idx()]);
        }
        enc
    }

    pub(crate) fn order(&self) -> &[u32] {
        &self.order
    }
}

/// Darts in label order: `result[i]` carries label `i + 1`.
pub fn canonical_labeling(g: &RibbonGraph, doe: Dart) -> Result<Vec<Dart>> {
    g.check_dart(doe)?;
    let mut lab = Labeler::new(g.dart_count());
    if !lab.run(g, doe) {
        return Err(Error::Disconnected);
    }
    Ok(lab.order().iter().map(|&d| Dart(d)).collect())
}

pub fn canonical_form(m: &MarkedGraph) -> Result<CanonicalForm> {
    m.graph.check_dart(m.doe)?;
    let mut lab = Labeler::new(m.graph.dart_count());
    if !lab.run(&m.graph, m.doe) {
        return Err(Error::Disconnected);
    }
    Ok(CanonicalForm {
        encoding: lab.encode(&m.graph),
    })
}

/// Canonical form of the unmarked graph: the least encoding over all doe choices.
pub fn unmarked_canonical_form(g: &RibbonGraph) -> Result<CanonicalForm> {
    g.ensure_connected()?;
    let mut lab = Labeler::new(g.dart_count());
    let encoding = g
        .darts()
        .map(|d| {
            lab.run(g, d);
            lab.encode(g)
        })
        .min()
        .expect("nonempty graph");
    Ok(CanonicalForm { encoding })
}

pub fn are_isomorphic(m1: &MarkedGraph, m2: &MarkedGraph) -> Result<bool> {
    Ok(canonical_form(m1)? == canonical_form(m2)?)
}

/// The unique doe-preserving isomorphism `m1 → m2`, as `map[d-1] = image of d`.
pub fn isomorphism(m1: &MarkedGraph, m2: &MarkedGraph) -> Result<Option<Vec<Dart>>> {
    if m1.graph.dart_count() != m2.graph.dart_count() {
        return Ok(None);
    }
    let l1 = canonical_labeling(&m1.graph, m1.doe)?;
    let l2 = canonical_labeling(&m2.graph, m2.doe)?;
    if canonical_form(m1)? != canonical_form(m2)? {
        return Ok(None);
    }
    let mut map = vec![Dart(0); l1.len()];
    for (a, b) in l1.iter().zip(&l2) {
        map[a.idx()] = *b;
    }
    Ok(Some(map))
}

/// All automorphisms of `g` (dart bijections commuting with sigma and iota),
/// found by transporting the doe. The identity comes first.
pub fn automorphisms(g: &RibbonGraph) -> Result<Vec<Vec<Dart>>> {
    g.ensure_connected()?;
    let base = canonical_labeling(g, Dart(1))?;
    let base_form = canonical_form(&MarkedGraph {
        graph: g.clone(),
        doe: Dart(1),
    })?;
    let mut out = Vec::new();
    let mut lab = Labeler::new(g.dart_count());
    for d in g.darts() {
        lab.run(g, d);
        if lab.encode(g) == base_form.encoding {
            let mut map = vec![Dart(0); base.len()];
            for (a, &b) in base.iter().zip(lab.order()) {
                map[a.idx()] = Dart(b);
            }
            out.push(map);
        }
    }
    Ok(out)
}

/// Canonical forms reachable from `m` by doe moves (`doe ↦ iota(doe)`,
/// `doe ↦ sigma(doe)`).
pub fn doe_orbit(m: &MarkedGraph) -> Result<BTreeSet<CanonicalForm>> {
    m.graph.ensure_connected()?;
    m.graph.check_dart(m.doe)?;
    let g = &m.graph;
    let mut seen = vec![false; g.dart_count()];
    let mut queue = VecDeque::from([m.doe]);
    seen[m.doe.idx()] = true;
    let mut forms = BTreeSet::new();
    let mut lab = Labeler::new(g.dart_count());
    while let Some(d) = queue.pop_front() {
        lab.run(g, d);
        forms.insert(CanonicalForm {
            encoding: lab.encode(g),
        });
        for next in [g.iota(d), g.sigma(d)] {
            if !seen[next.idx()] {
                seen[next.idx()] = true;
                queue.push_back(next);
            }
        }
    }
    Ok(forms)
}

/// Canonical form of the underlying multigraph (vertex/edge incidence only).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MultigraphForm {
    pub vertex_count: usize,
    /// Sorted `(u, v)` pairs with `u <= v`; loops appear as `(u, u)`.
    pub edges: Vec<(u32, u32)>,
}

/// Forgets the cyclic orders. Two trivalent graphs have the same underlying
/// multigraph iff some choice of rotations makes them isomorphic as ribbon
/// graphs, so we minimise the ribbon encoding over all `2^V` rotation systems
/// and read the incidence structure off the minimiser. Exponential in `V`.
pub fn forget_ribbon(g: &RibbonGraph) -> Result<MultigraphForm> {
    g.ensure_connected()?;
    let vertices = g.vertices();
    let v = vertices.len();
    let choices: Vec<u64> = (0..1u64 << v).collect();
    let best = par::map(&choices, |&mask| {
        let mut sigma = g.sigma_images().to_vec();
        for (i, [a, b, c]) in vertices.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sigma[a.idx()] = c.0;
                sigma[c.idx()] = b.0;
                sigma[b.idx()] = a.0;
            }
        }
        let h = g.with_sigma(sigma);
        let mut lab = Labeler::new(h.dart_count());
        h.darts()
            .map(|d| {
                lab.run(&h, d);
                lab.encode(&h)
            })
            .min()
            .expect("nonempty")
    })
    .into_iter()
    .min()
    .expect("at least one rotation system");
    let rep = CanonicalForm { encoding: best }.to_marked().graph;
    // Vertex numbers follow label order, which is canonical.
    let mut vertex_id = vec![0u32; rep.dart_count()];
    let mut next = 0;
    for d in rep.darts() {
        let root = rep.vertex_of(d);
        if root == d {
            next += 1;
            vertex_id[d.idx()] = next;
        }
    }
    let vid = |d: Dart| vertex_id[rep.vertex_of(d).idx()];
    let mut edges: Vec<(u32, u32)> = rep
        .edges()
        .into_iter()
        .map(|[a, b]| {
            let (x, y) = (vid(a), vid(b));
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    Ok(MultigraphForm {
        vertex_count: v,
        edges,
    })
}
