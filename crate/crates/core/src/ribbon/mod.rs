//! Dart-based trivalent ribbon graphs.
//!
//! A finite ribbon graph is stored as two permutations of the darts `1..=2E`:
//! the vertex rotation `sigma` (counterclockwise successor at a vertex) and the
//! edge pairing `iota`. Faces, which we call punctures, are the orbits of
//! `lambda = sigma ∘ iota`: arriving at a vertex along a dart, the walk leaves
//! along the next dart counterclockwise, i.e. it always turns left.

mod canonical;
pub(crate) mod text;

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

pub use canonical::{
    are_isomorphic, automorphisms, canonical_form, canonical_labeling, doe_orbit, forget_ribbon,
    isomorphism, unmarked_canonical_form, CanonicalForm, MultigraphForm,
};
pub use text::{parse, parse_json, serialize, to_dot, to_json, validate_document, GraphDocument};

/// A dart (half-edge). Finite graphs number their darts `1..=2E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dart(pub u32);

impl Dart {
    #[inline]
    pub(crate) fn idx(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One violated invariant reported by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub witness: Option<u32>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.witness {
            Some(w) => write!(f, "{} (witness dart {})", self.invariant, w),
            None => write!(f, "{}", self.invariant),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Whether `<sigma, iota>` acts transitively. Only meaningful when both
    /// arrays are permutations; `false` otherwise.
    pub connected: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn first_error(&self) -> Error {
        Error::InvalidGraph(
            self.violations
                .first()
                .map(|v| v.to_string())
                .unwrap_or_default(),
        )
    }
}

fn is_permutation(p: &[u32]) -> std::result::Result<(), u32> {
    let n = p.len() as u32;
    let mut seen = vec![false; p.len()];
    for (i, &x) in p.iter().enumerate() {
        if x == 0 || x > n || std::mem::replace(&mut seen[x as usize - 1], true) {
            return Err(i as u32 + 1);
        }
    }
    Ok(())
}

fn transitive(sigma: &[u32], iota: &[u32]) -> bool {
    let n = sigma.len();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(d) = stack.pop() {
        for next in [sigma[d] as usize - 1, iota[d] as usize - 1] {
            if !seen[next] {
                seen[next] = true;
                count += 1;
                stack.push(next);
            }
        }
    }
    count == n
}

/// Checks raw permutation data against every ribbon-graph invariant.
///
/// `sigma[d-1]` and `iota[d-1]` are the images of dart `d`.
pub fn validate(sigma: &[u32], iota: &[u32]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut push = |invariant: &str, witness: Option<u32>| {
        violations.push(Violation {
            invariant: invariant.to_string(),
            witness,
        })
    };
    if sigma.is_empty() && iota.is_empty() {
        push("graph must be nonempty", None);
        return ValidationReport {
            violations,
            connected: false,
        };
    }
    if sigma.len() != iota.len() {
        push("sigma and iota act on different dart counts", None);
        return ValidationReport {
            violations,
            connected: false,
        };
    }
    if !sigma.len().is_multiple_of(2) {
        push("dart count must be even", None);
    }
    let sigma_ok = match is_permutation(sigma) {
        Ok(()) => true,
        Err(w) => {
            push("sigma is not a bijection", Some(w));
            false
        }
    };
    let iota_ok = match is_permutation(iota) {
        Ok(()) => true,
        Err(w) => {
            push("iota is not a bijection", Some(w));
            false
        }
    };
    if iota_ok {
        if let Some(d) = (1..=iota.len() as u32).find(|&d| iota[d as usize - 1] == d) {
            push("iota not fixed-point-free", Some(d));
        }
        if let Some(d) =
            (1..=iota.len() as u32).find(|&d| iota[iota[d as usize - 1] as usize - 1] != d)
        {
            push("iota not an involution", Some(d));
        }
    }
    if sigma_ok {
        let mut seen = vec![false; sigma.len()];
        for start in 0..sigma.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                len += 1;
                d = sigma[d] as usize - 1;
            }
            if len != 3 {
                push("vertex of degree ≠ 3", Some(start as u32 + 1));
                break;
            }
        }
    }
    let connected = sigma_ok && iota_ok && transitive(sigma, iota);
    ValidationReport {
        violations,
        connected,
    }
}

/// A finite trivalent ribbon graph. Construction validates every invariant
/// except connectivity, which is checked by the operations that need it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RibbonGraph {
    sigma: Vec<u32>,
    iota: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub genus: usize,
    pub punctures: usize,
    pub rank: usize,
}

/// A left-turning loop: an orbit of `lambda = sigma ∘ iota`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Puncture {
    pub darts: Vec<Dart>,
    /// Edge labels (minimal dart of each edge) along the cycle.
    pub edges: Vec<Dart>,
    pub finite: bool,
}

impl Puncture {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }
}

impl RibbonGraph {
    pub fn new(sigma: Vec<u32>, iota: Vec<u32>) -> Result<Self> {
        let report = validate(&sigma, &iota);
        if !report.is_valid() {
            return Err(report.first_error());
        }
        Ok(RibbonGraph { sigma, iota })
    }

    pub(crate) fn new_unchecked(sigma: Vec<u32>, iota: Vec<u32>) -> Self {
        debug_assert!(validate(&sigma, &iota).is_valid());
        RibbonGraph { sigma, iota }
    }

    /// Builds a graph on darts `1..=n` from cycle lists.
    pub fn from_cycles(n: usize, sigma: &[&[u32]], iota: &[&[u32]]) -> Result<Self> {
        let s = permutation_from_cycles(n, sigma.iter().map(|c| c.to_vec()))
            .map_err(|m| Error::InvalidGraph(format!("sigma: {m}")))?;
        let i = permutation_from_cycles(n, iota.iter().map(|c| c.to_vec()))
            .map_err(|m| Error::InvalidGraph(format!("iota: {m}")))?;
        RibbonGraph::new(s, i)
    }

    #[inline]
    pub fn dart_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (1..=self.sigma.len() as u32).map(Dart)
    }

    pub fn contains(&self, d: Dart) -> bool {
        d.0 >= 1 && d.idx() < self.sigma.len()
    }

    pub fn check_dart(&self, d: Dart) -> Result<()> {
        if self.contains(d) {
            Ok(())
        } else {
            Err(Error::UnknownDart(d.0))
        }
    }

    #[inline]
    pub fn sigma(&self, d: Dart) -> Dart {
        Dart(self.sigma[d.idx()])
    }

    #[inline]
    pub fn sigma_inv(&self, d: Dart) -> Dart {
        self.sigma(self.sigma(d))
    }

    #[inline]
    pub fn iota(&self, d: Dart) -> Dart {
        Dart(self.iota[d.idx()])
    }

    /// Left-turn successor `sigma(iota(d))`.
    #[inline]
    pub fn lambda(&self, d: Dart) -> Dart {
        self.sigma(self.iota(d))
    }

    pub fn sigma_images(&self) -> &[u32] {
        &self.sigma
    }

    pub fn iota_images(&self) -> &[u32] {
        &self.iota
    }

    /// Vertex label: the minimal dart of the sigma-orbit.
    pub fn vertex_of(&self, d: Dart) -> Dart {
        let a = self.sigma(d);
        let b = self.sigma(a);
        d.min(a).min(b)
    }

    /// Edge label: the minimal dart of the iota-orbit.
    pub fn edge_of(&self, d: Dart) -> Dart {
        d.min(self.iota(d))
    }

    pub fn vertex_count(&self) -> usize {
        self.sigma.len() / 3
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    /// Sigma-orbits, each starting at its minimal dart, sorted.
    pub fn vertices(&self) -> Vec<[Dart; 3]> {
        self.darts()
            .filter(|&d| self.vertex_of(d) == d)
            .map(|d| [d, self.sigma(d), self.sigma_inv(d)])
            .collect()
    }

    pub fn edges(&self) -> Vec<[Dart; 2]> {
        self.darts()
            .filter(|&d| d < self.iota(d))
            .map(|d| [d, self.iota(d)])
            .collect()
    }

    pub fn is_loop(&self, d: Dart) -> bool {
        self.vertex_of(d) == self.vertex_of(self.iota(d))
    }

    pub fn is_connected(&self) -> bool {
        transitive(&self.sigma, &self.iota)
    }

    pub(crate) fn ensure_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.sigma, &self.iota)
    }

    pub fn punctures(&self) -> Vec<Puncture> {
        let n = self.dart_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in self.darts() {
            if seen[start.idx()] {
                continue;
            }
            let mut darts = Vec::new();
            let mut d = start;
            while !seen[d.idx()] {
                seen[d.idx()] = true;
                darts.push(d);
                d = self.lambda(d);
            }
            let edges = darts.iter().map(|&x| self.edge_of(x)).collect();
            out.push(Puncture {
                darts,
                edges,
                finite: true,
            });
        }
        out
    }

    /// Index of the puncture containing each dart, in [`Self::punctures`] order.
    pub fn puncture_index(&self) -> Vec<usize> {
        let mut idx = vec![usize::MAX; self.dart_count()];
        for (i, p) in self.punctures().iter().enumerate() {
            for d in &p.darts {
                idx[d.idx()] = i;
            }
        }
        idx
    }

    pub fn invariants(&self) -> Result<Invariants> {
        self.ensure_connected()?;
        let v = self.vertex_count();
        let e = self.edge_count();
        let f = self.punctures().len();
        // V - E + F = 2 - 2g
        let chi = v as i64 - e as i64 + f as i64;
        debug_assert!(chi <= 2 && chi % 2 == 0);
        Ok(Invariants {
            vertices: v,
            edges: e,
            faces: f,
            genus: ((2 - chi) / 2) as usize,
            punctures: f,
            rank: e - v + 1,
        })
    }

    /// Applies a dart relabeling `perm` (old dart `d` becomes `perm[d-1]`).
    pub fn relabel(&self, perm: &[u32]) -> RibbonGraph {
        let n = self.dart_count();
        let mut sigma = vec![0; n];
        let mut iota = vec![0; n];
        for d in 0..n {
            let nd = perm[d] as usize - 1;
            sigma[nd] = perm[self.sigma[d] as usize - 1];
            iota[nd] = perm[self.iota[d] as usize - 1];
        }
        RibbonGraph { sigma, iota }
    }

    pub(crate) fn with_sigma(&self, sigma: Vec<u32>) -> RibbonGraph {
        RibbonGraph::new_unchecked(sigma, self.iota.clone())
    }

    pub fn sigma_cycles(&self) -> Vec<Vec<u32>> {
        cycles_of(&self.sigma)
    }

    pub fn iota_cycles(&self) -> Vec<Vec<u32>> {
        cycles_of(&self.iota)
    }
}

/// Cycles of a permutation, each rotated to start at its minimum, sorted by
/// that minimum.
pub fn cycles_of(p: &[u32]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            cycle.push(d as u32 + 1);
            d = p[d] as usize - 1;
        }
        out.push(cycle);
    }
    out
}

pub(crate) fn permutation_from_cycles(
    n: usize,
    cycles: impl IntoIterator<Item = Vec<u32>>,
) -> std::result::Result<Vec<u32>, String> {
    let mut p = vec![0u32; n];
    for cycle in cycles {
        for (i, &x) in cycle.iter().enumerate() {
            if x == 0 || x as usize > n {
                return Err(format!("dart {x} out of range 1..={n}"));
            }
            if p[x as usize - 1] != 0 {
                return Err(format!("dart {x} appears twice; not a bijection"));
            }
            p[x as usize - 1] = cycle[(i + 1) % cycle.len()];
        }
    }
    if let Some(missing) = p.iter().position(|&x| x == 0) {
        return Err(format!("dart {} missing; not a bijection", missing + 1));
    }
    Ok(p)
}

/// A ribbon graph with a distinguished dart (the doe).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkedGraph {
    pub graph: RibbonGraph,
    pub doe: Dart,
}

impl MarkedGraph {
    pub fn new(graph: RibbonGraph, doe: Dart) -> Result<Self> {
        if !graph.contains(doe) {
            return Err(Error::DoeNotADart(doe.0));
        }
        Ok(MarkedGraph { graph, doe })
    }

    pub fn invariants(&self) -> Result<Invariants> {
        self.graph.invariants()
    }

    pub fn canonical_form(&self) -> Result<CanonicalForm> {
        canonical_form(self)
    }
}

/// Small named graphs used throughout tests, docs and the CLI.
pub mod examples {
    use super::*;

    /// Planar theta: spine of the thrice-punctured sphere.
    pub fn planar_theta() -> RibbonGraph {
        RibbonGraph::from_cycles(6, &[&[1, 2, 3], &[4, 6, 5]], &[&[1, 4], &[2, 5], &[3, 6]])
            .expect("valid")
    }

    /// Nonplanar theta: spine of the once-punctured torus.
    pub fn nonplanar_theta() -> RibbonGraph {
        RibbonGraph::from_cycles(6, &[&[1, 2, 3], &[4, 5, 6]], &[&[1, 4], &[2, 5], &[3, 6]])
            .expect("valid")
    }

    /// Two loops joined by a bar (the bar is the edge `{3, 6}`).
    pub fn dumbbell() -> RibbonGraph {
        RibbonGraph::from_cycles(6, &[&[1, 2, 3], &[4, 5, 6]], &[&[1, 2], &[4, 5], &[3, 6]])
            .expect("valid")
    }

    pub fn marked(g: RibbonGraph, doe: u32) -> MarkedGraph {
        MarkedGraph::new(g, Dart(doe)).expect("doe in range")
    }
}
