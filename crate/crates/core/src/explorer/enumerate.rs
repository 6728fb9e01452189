//! Exhaustive enumeration of marked connected trivalent ribbon graphs.
//!
//! Rather than generating graphs and canonicalizing, we run the canonical
//! labeling procedure backwards: each branch of the search fixes one more
//! unknown `sigma` or `iota` image in label space, choosing either a fresh
//! label or an already-labeled dart whose image is still open. Every complete
//! branch is a canonical encoding, and distinct branches give distinct
//! encodings, so there is nothing to deduplicate.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::par;
use crate::ribbon::CanonicalForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub max_vertices: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_vertices: 8 }
    }
}

/// Marked forms grouped by `(genus, punctures)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeCensus {
    pub vertices: usize,
    pub classes: BTreeMap<(usize, usize), Vec<CanonicalForm>>,
}

impl TypeCensus {
    pub fn total(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn all(&self) -> impl Iterator<Item = &CanonicalForm> {
        self.classes.values().flatten()
    }

    pub fn to_classes(&self) -> Vec<TypeClass> {
        self.classes
            .iter()
            .map(|(&(genus, punctures), forms)| TypeClass {
                genus,
                punctures,
                forms: forms.clone(),
            })
            .collect()
    }
}

/// One `(genus, punctures)` class of a [`TypeCensus`], for serialization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeClass {
    pub genus: usize,
    pub punctures: usize,
    pub forms: Vec<CanonicalForm>,
}

/// Partial encoding in label space; `0` marks an open slot.
#[derive(Clone)]
struct State {
    sigma: Vec<u32>,
    iota: Vec<u32>,
    /// labels handed out so far
    used: u32,
    /// next label to process
    cursor: u32,
}

impl State {
    fn new(n: usize) -> Self {
        State {
            sigma: vec![0; n],
            iota: vec![0; n],
            used: 1,
            cursor: 1,
        }
    }

    fn n(&self) -> u32 {
        self.sigma.len() as u32
    }

    fn open_sigma(&self, x: u32) -> bool {
        self.sigma[x as usize - 1] == 0
    }

    fn open_iota(&self, x: u32) -> bool {
        self.iota[x as usize - 1] == 0
    }

    /// Candidates for an image slot: a fresh label, or a labeled dart whose
    /// slot of the given kind is open.
    fn candidates(&self, exclude: &[u32], open: impl Fn(u32) -> bool) -> Vec<Option<u32>> {
        let mut out = Vec::new();
        if self.used < self.n() {
            out.push(None);
        }
        out.extend(
            (1..=self.used)
                .filter(|x| !exclude.contains(x) && open(*x))
                .map(Some),
        );
        out
    }

    fn take(&mut self, c: Option<u32>) -> u32 {
        c.unwrap_or_else(|| {
            self.used += 1;
            self.used
        })
    }

    /// Children obtained by processing the label at the cursor.
    fn expand(&self) -> Vec<State> {
        let p = self.cursor;
        let mut after_sigma = Vec::new();
        if self.open_sigma(p) {
            for c1 in self.candidates(&[p], |x| self.open_sigma(x)) {
                let mut s = self.clone();
                let s1 = s.take(c1);
                for c2 in s.candidates(&[p, s1], |x| s.open_sigma(x)) {
                    let mut t = s.clone();
                    let s2 = t.take(c2);
                    t.sigma[p as usize - 1] = s1;
                    t.sigma[s1 as usize - 1] = s2;
                    t.sigma[s2 as usize - 1] = p;
                    after_sigma.push(t);
                }
            }
        } else {
            after_sigma.push(self.clone());
        }
        let mut out = Vec::new();
        for s in after_sigma {
            if s.open_iota(p) {
                for c in s.candidates(&[p], |x| s.open_iota(x)) {
                    let mut t = s.clone();
                    let q = t.take(c);
                    t.iota[p as usize - 1] = q;
                    t.iota[q as usize - 1] = p;
                    t.cursor += 1;
                    out.push(t);
                }
            } else {
                let mut t = s;
                t.cursor += 1;
                out.push(t);
            }
        }
        out
    }

    fn is_complete(&self) -> bool {
        self.cursor > self.n()
    }

    fn encoding(&self) -> CanonicalForm {
        let mut enc = Vec::with_capacity(2 * self.sigma.len());
        for (s, i) in self.sigma.iter().zip(&self.iota) {
            enc.push(*s);
            enc.push(*i);
        }
        CanonicalForm { encoding: enc }
    }
}

fn dfs(root: State, out: &mut Vec<CanonicalForm>) {
    let mut stack = vec![root];
    while let Some(s) = stack.pop() {
        if s.is_complete() {
            out.push(s.encoding());
            continue;
        }
        // A processed label must already exist; otherwise the labeling
        // stalled, i.e. the graph would be disconnected.
        if s.cursor > s.used {
            continue;
        }
        stack.extend(s.expand());
    }
}

/// All canonical forms of marked graphs with `v` vertices, sorted.
pub fn enumerate_forms(v: usize, opts: EnumerateOptions) -> Result<Vec<CanonicalForm>> {
    if v % 2 == 1 {
        return Err(Error::OddVertexCount(v));
    }
    if v > opts.max_vertices {
        return Err(Error::BoundExceeded {
            count: v,
            bound: opts.max_vertices,
        });
    }
    if v == 0 {
        return Ok(Vec::new());
    }
    let n = 3 * v;
    // Shard: expand breadth-first until there is enough work to spread.
    let mut frontier = vec![State::new(n)];
    let mut done = Vec::new();
    while frontier.len() < 256 && !frontier.is_empty() {
        let mut next = Vec::new();
        for s in frontier {
            if s.is_complete() {
                done.push(s.encoding());
            } else if s.cursor <= s.used {
                next.extend(s.expand());
            }
        }
        frontier = next;
    }
    let mut forms = par::flat_map(&frontier, |s| {
        let mut out = Vec::new();
        dfs(s.clone(), &mut out);
        out
    });
    forms.extend(done);
    forms.sort_unstable();
    Ok(forms)
}

/// [`enumerate_forms`] grouped by `(genus, punctures)`.
pub fn enumerate_types(v: usize, opts: EnumerateOptions) -> Result<TypeCensus> {
    let forms = enumerate_forms(v, opts)?;
    let keyed = par::map(&forms, |f| {
        let inv = f.to_marked().graph.invariants().expect("connected");
        (inv.genus, inv.punctures)
    });
    let mut census = TypeCensus {
        vertices: v,
        classes: BTreeMap::new(),
    };
    for (f, k) in forms.into_iter().zip(keyed) {
        census.classes.entry(k).or_default().push(f);
    }
    Ok(census)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::examples::*;
    use crate::ribbon::{
        canonical_form, doe_orbit, unmarked_canonical_form, Dart, MarkedGraph, RibbonGraph,
    };
    use std::collections::BTreeSet;

    /// Brute force: fix sigma, try every perfect matching as iota, keep the
    /// connected ones and canonicalize at every doe.
    fn brute_force(v: usize) -> BTreeSet<CanonicalForm> {
        let n = 3 * v;
        let sigma: Vec<u32> = (0..n as u32)
            .map(|i| if i % 3 == 2 { i - 1 } else { i + 2 })
            .collect();
        let mut out = BTreeSet::new();
        let mut iota = vec![0u32; n];
        fn matchings(iota: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
            let Some(i) = iota.iter().position(|&x| x == 0) else {
                f(iota);
                return;
            };
            for j in i + 1..iota.len() {
                if iota[j] == 0 {
                    iota[i] = j as u32 + 1;
                    iota[j] = i as u32 + 1;
                    matchings(iota, f);
                    iota[i] = 0;
                    iota[j] = 0;
                }
            }
        }
        matchings(&mut iota, &mut |io| {
            let g = RibbonGraph::new(sigma.clone(), io.to_vec()).unwrap();
            if !g.is_connected() {
                return;
            }
            for d in g.darts() {
                out.insert(
                    canonical_form(&MarkedGraph {
                        graph: g.clone(),
                        doe: d,
                    })
                    .unwrap(),
                );
            }
        });
        out
    }

    #[test]
    fn matches_brute_force() {
        for v in [2, 4] {
            let fast: BTreeSet<_> = enumerate_forms(v, EnumerateOptions::default())
                .unwrap()
                .into_iter()
                .collect();
            assert_eq!(fast, brute_force(v), "V = {v}");
        }
    }

    #[test]
    fn v2_is_three_unmarked_types() {
        let census = enumerate_types(2, EnumerateOptions::default()).unwrap();
        let unmarked: BTreeSet<_> = census
            .all()
            .map(|f| unmarked_canonical_form(&f.to_marked().graph).unwrap())
            .collect();
        let expected: BTreeSet<_> = [planar_theta(), nonplanar_theta(), dumbbell()]
            .iter()
            .map(|g| unmarked_canonical_form(g).unwrap())
            .collect();
        assert_eq!(unmarked, expected);
        // marked count = sum of doe-orbit sizes = 6/|Aut| per type
        let marked: usize = [planar_theta(), nonplanar_theta(), dumbbell()]
            .into_iter()
            .map(|g| {
                doe_orbit(&MarkedGraph {
                    graph: g,
                    doe: Dart(1),
                })
                .unwrap()
                .len()
            })
            .sum();
        assert_eq!(census.total(), marked);
        assert_eq!(
            census.classes[&(0, 3)].len() + census.classes[&(1, 1)].len(),
            marked
        );
    }

    #[test]
    fn rejections() {
        assert_eq!(
            enumerate_forms(3, EnumerateOptions::default()),
            Err(Error::OddVertexCount(3))
        );
        assert!(matches!(
            enumerate_forms(10, EnumerateOptions::default()),
            Err(Error::BoundExceeded { .. })
        ));
    }
}
