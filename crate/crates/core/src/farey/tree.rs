//! The infinite trivalent Farey tree as a PSL₂(ℤ)-torsor, and circle maps
//! induced by flip sequences on it.
//!
//! Darts are matrices `g`; `σ(g) = gU`, `ι(g) = gS`, and the puncture on the
//! left of `g` is `g(∞)`. Flips are recorded in a [`TreePatch`] of `σ`
//! overrides, so only the finitely many touched darts are ever stored.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{ExtRational, Ppsl2Element, Psl2Mat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FareyDart(pub Psl2Mat);

impl FareyDart {
    pub const DOE: FareyDart = FareyDart(Psl2Mat::IDENTITY);

    pub fn sigma(&self) -> FareyDart {
        FareyDart(self.0.mul(&Psl2Mat::U))
    }

    pub fn iota(&self) -> FareyDart {
        FareyDart(self.0.mul(&Psl2Mat::S))
    }

    pub fn lambda(&self) -> FareyDart {
        self.iota().sigma()
    }

    /// Canonical representative of the vertex: least of `g, gU, gU²`.
    pub fn vertex(&self) -> FareyDart {
        let s = self.sigma();
        (*self).min(s).min(s.sigma())
    }

    /// Canonical representative of the edge: least of `g, gS`.
    pub fn edge(&self) -> FareyDart {
        (*self).min(self.iota())
    }

    /// The neighbouring darts `σ(g)` and `ι(g)`.
    pub fn neighbors(&self) -> [FareyDart; 2] {
        [self.sigma(), self.iota()]
    }
}

/// The puncture (cusp) on the left of a dart.
pub fn puncture_rational(d: FareyDart) -> ExtRational {
    d.0.moebius(ExtRational::INFINITY)
}

/// Generators of PSL₂(ℤ) ≅ ℤ/2 ∗ ℤ/3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    S,
    U,
}

impl Gen {
    fn mat(self) -> Psl2Mat {
        match self {
            Gen::S => Psl2Mat::S,
            Gen::U => Psl2Mat::U,
        }
    }
}

/// A word in `S, U` whose product is `g`, via the Euclidean algorithm on the
/// first column. `T = U²S` and `T⁻¹ = SU`.
pub(crate) fn word_of(g: &Psl2Mat) -> Vec<Gen> {
    let mut out = Vec::new();
    let push_t = |out: &mut Vec<Gen>, k: i128| {
        let unit: &[Gen] = if k >= 0 {
            &[Gen::U, Gen::U, Gen::S]
        } else {
            &[Gen::S, Gen::U]
        };
        for _ in 0..k.unsigned_abs() {
            out.extend_from_slice(unit);
        }
    };
    let mut m = *g;
    // m = T^q · S · (S⁻¹ T^{-q} m), and the new lower-left entry is a − qc.
    while m.c != 0 {
        let q = m.a.div_euclid(m.c);
        push_t(&mut out, q);
        out.push(Gen::S);
        let t_neg_q = Psl2Mat {
            a: 1,
            b: -q,
            c: 0,
            d: 1,
        };
        m = Psl2Mat::S.inv().mul(&t_neg_q.mul(&m));
    }
    push_t(&mut out, m.b);
    reduce_word(&out)
}

/// Free reduction in ℤ/2 ∗ ℤ/3: cancels `SS` and `UUU`.
pub(crate) fn reduce_word(w: &[Gen]) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::with_capacity(w.len());
    for &x in w {
        out.push(x);
        loop {
            let n = out.len();
            if n >= 2 && out[n - 1] == Gen::S && out[n - 2] == Gen::S {
                out.truncate(n - 2);
            } else if n >= 3 && out[n - 3..].iter().all(|&g| g == Gen::U) {
                out.truncate(n - 3);
            } else {
                break;
            }
        }
    }
    out
}

/// Finite record of flips applied to the Farey tree: `σ′` overrides on
/// persistent dart identities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreePatch {
    overrides: HashMap<FareyDart, FareyDart>,
}

impl TreePatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.overrides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.overrides.is_empty()
    }

    pub fn sigma(&self, d: FareyDart) -> FareyDart {
        self.overrides.get(&d).copied().unwrap_or_else(|| d.sigma())
    }

    pub fn iota(&self, d: FareyDart) -> FareyDart {
        d.iota()
    }

    fn set_sigma(&mut self, d: FareyDart, image: FareyDart) {
        if image == d.sigma() {
            self.overrides.remove(&d);
        } else {
            self.overrides.insert(d, image);
        }
    }

    /// Flips the edge of `f1` in the patched tree.
    pub fn flip(&mut self, f1: FareyDart) {
        let f2 = f1.iota();
        let a = self.sigma(f1);
        let b = self.sigma(a);
        let d = self.sigma(f2);
        let c = self.sigma(d);
        for (x, y) in [(f1, b), (b, d), (d, f1), (f2, c), (c, a), (a, f2)] {
            self.set_sigma(x, y);
        }
    }

    /// The persistent dart reached from the doe by following `w` with the
    /// patched `σ′` and `ι`.
    pub fn follow(&self, w: &[Gen]) -> FareyDart {
        w.iter().fold(FareyDart::DOE, |z, g| match g {
            Gen::S => self.iota(z),
            Gen::U => self.sigma(z),
        })
    }

    pub fn touched(&self) -> impl Iterator<Item = FareyDart> + '_ {
        self.overrides.keys().copied()
    }

    /// The induced circle map: re-identify the patched tree with the Farey
    /// tree by the isomorphism fixing the doe, and read off where each
    /// puncture goes.
    pub fn circle_map(&self) -> Result<Ppsl2Element> {
        // Vertices the patch can see: touched vertices, the doe vertex and
        // the tree paths between them.
        let mut verts: BTreeSet<FareyDart> = BTreeSet::new();
        verts.insert(FareyDart::DOE.vertex());
        let seeds: Vec<FareyDart> = self.touched().map(|d| d.vertex()).collect();
        for v in seeds {
            let mut cur = FareyDart::DOE;
            verts.insert(cur.vertex());
            for g in word_of(&v.0) {
                cur = FareyDart(cur.0.mul(&g.mat()));
                verts.insert(cur.vertex());
            }
        }
        let core: HashSet<FareyDart> = verts
            .iter()
            .flat_map(|v| [*v, v.sigma(), v.sigma().sigma()])
            .collect();

        // ψ: patched core → Farey tree with ψ(doe) = I.
        let mut psi: HashMap<FareyDart, Psl2Mat> = HashMap::new();
        psi.insert(FareyDart::DOE, Psl2Mat::IDENTITY);
        let mut queue = VecDeque::from([FareyDart::DOE]);
        let mut exits = Vec::new();
        while let Some(z) = queue.pop_front() {
            let pz = psi[&z];
            let s = self.sigma(z);
            if !core.contains(&s) {
                return Err(Error::InvalidElement(format!(
                    "patch leaks outside its hull at {}",
                    z.0
                )));
            }
            if let std::collections::hash_map::Entry::Vacant(e) = psi.entry(s) {
                e.insert(pz.mul(&Psl2Mat::U));
                queue.push_back(s);
            }
            let i = self.iota(z);
            let pi = pz.mul(&Psl2Mat::S);
            if core.contains(&i) {
                if let std::collections::hash_map::Entry::Vacant(e) = psi.entry(i) {
                    e.insert(pi);
                    queue.push_back(i);
                }
            } else {
                exits.push((i, pi));
            }
        }
        // Each exit dart y bounds a branch whose cusps fill the arc
        // [y(0), y(∞)]; the branch is carried rigidly by ψ(y)·y⁻¹.
        Ppsl2Element::from_pieces(
            exits
                .into_iter()
                .map(|(y, py)| (y.0.moebius(ExtRational::ZERO), py.mul(&y.0.inv()))),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlipMapOptions {
    /// Upper bound on stored `σ′` overrides.
    pub max_patch: usize,
}

impl Default for FlipMapOptions {
    fn default() -> Self {
        FlipMapOptions { max_patch: 1 << 16 }
    }
}

/// The circle homeomorphism induced by a single flip at `x` on the Farey
/// tree with doe `I`.
pub fn single_flip_map(x: FareyDart) -> Result<Ppsl2Element> {
    flip_sequence_to_circle_map(&[x])
}

/// The element of PPSL₂(ℤ) induced by flipping at each target in turn.
/// Each target is named in the coordinates of the tree as re-identified with
/// the Farey tree after the previous flips (doe fixed at `I`).
pub fn flip_sequence_to_circle_map(targets: &[FareyDart]) -> Result<Ppsl2Element> {
    flip_sequence_to_circle_map_with(targets, FlipMapOptions::default())
}

pub fn flip_sequence_to_circle_map_with(
    targets: &[FareyDart],
    opts: FlipMapOptions,
) -> Result<Ppsl2Element> {
    let mut patch = TreePatch::new();
    for x in targets {
        let persistent = patch.follow(&word_of(&x.0));
        patch.flip(persistent);
        if patch.len() > opts.max_patch {
            return Err(Error::Budget(format!(
                "flip patch exceeded {} overrides",
                opts.max_patch
            )));
        }
    }
    patch.circle_map()
}
