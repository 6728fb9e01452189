//! Recognizing charks among unicyclic graphs.
//!
//! Input is a finite truncation: trivalent vertices plus univalent stubs
//! where infinite branches were cut. The graph must have exactly one cycle.
//! Walking the cycle in one direction, each cycle vertex sends its branch to
//! the left or to the right of the cycle; the graph looks like the Farey tree
//! with a single cycle when all branches agree, and is a chark otherwise.

use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};
use crate::ribbon::text::{parse_err, parse_raw};
use crate::ribbon::{permutation_from_cycles, Dart};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnicyclicClass {
    FInfinityLike,
    Chark,
}

impl fmt::Display for UnicyclicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnicyclicClass::FInfinityLike => "F-infinity-like",
            UnicyclicClass::Chark => "chark",
        })
    }
}

/// A ribbon graph whose vertices have degree 3 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGraph {
    sigma: Vec<u32>,
    iota: Vec<u32>,
}

impl TruncatedGraph {
    pub fn new(sigma: Vec<u32>, iota: Vec<u32>) -> Result<Self> {
        let n = sigma.len();
        if iota.len() != n || n == 0 {
            return Err(Error::InvalidGraph(
                "sigma and iota must have equal nonzero length".into(),
            ));
        }
        let is_perm = |p: &[u32]| {
            let mut seen = vec![false; n];
            p.iter().all(|&x| {
                x >= 1 && (x as usize) <= n && !std::mem::replace(&mut seen[x as usize - 1], true)
            })
        };
        if !is_perm(&sigma) || !is_perm(&iota) {
            return Err(Error::InvalidGraph("not a permutation".into()));
        }
        for d in 0..n {
            let i = iota[d] as usize - 1;
            if i == d || iota[i] as usize - 1 != d {
                return Err(Error::InvalidGraph(format!(
                    "iota is not a fixed-point-free involution at dart {}",
                    d + 1
                )));
            }
        }
        let g = TruncatedGraph { sigma, iota };
        for d in g.darts() {
            let k = g.degree(d);
            if k != 1 && k != 3 {
                return Err(Error::InvalidGraph(format!(
                    "vertex at dart {d} has degree {k}"
                )));
            }
        }
        Ok(g)
    }

    pub fn from_cycles(n: usize, sigma: &[&[u32]], iota: &[&[u32]]) -> Result<Self> {
        let s = permutation_from_cycles(n, sigma.iter().map(|c| c.to_vec()))
            .map_err(|m| Error::InvalidGraph(format!("sigma: {m}")))?;
        let i = permutation_from_cycles(n, iota.iter().map(|c| c.to_vec()))
            .map_err(|m| Error::InvalidGraph(format!("iota: {m}")))?;
        TruncatedGraph::new(s, i)
    }

    /// The usual document format, with `(d)` allowed in `sigma` for a stub.
    pub fn parse(text: &str) -> Result<Self> {
        let raw = parse_raw(text)?;
        let s = permutation_from_cycles(raw.darts, raw.sigma.cycles)
            .map_err(|m| parse_err(raw.sigma.line, format!("sigma: {m}")))?;
        let i = permutation_from_cycles(raw.darts, raw.iota.cycles)
            .map_err(|m| parse_err(raw.iota.line, format!("iota: {m}")))?;
        TruncatedGraph::new(s, i)
    }

    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        (1..=self.sigma.len() as u32).map(Dart)
    }

    pub fn sigma(&self, d: Dart) -> Dart {
        Dart(self.sigma[d.idx()])
    }

    pub fn iota(&self, d: Dart) -> Dart {
        Dart(self.iota[d.idx()])
    }

    fn degree(&self, d: Dart) -> usize {
        let mut k = 1;
        let mut x = self.sigma(d);
        while x != d {
            k += 1;
            x = self.sigma(x);
        }
        k
    }

    fn vertex_of(&self, d: Dart) -> Dart {
        let mut m = d;
        let mut x = self.sigma(d);
        while x != d {
            m = m.min(x);
            x = self.sigma(x);
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let n = self.sigma.len();
        let mut seen = vec![false; n];
        let mut stack = vec![Dart(1)];
        seen[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [self.sigma(d), self.iota(d)] {
                if !seen[x.idx()] {
                    seen[x.idx()] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        count == n
    }

    /// `E − V + 1` of a connected graph.
    pub fn rank(&self) -> Result<i64> {
        if !self.is_connected() {
            return Err(Error::Disconnected);
        }
        let e = self.sigma.len() / 2;
        let v = self.darts().filter(|&d| self.vertex_of(d) == d).count();
        Ok(e as i64 - v as i64 + 1)
    }

    /// Darts of the unique cycle, one per cycle vertex, each pointing along
    /// the cycle in a consistent direction. Requires rank 1.
    pub fn cycle(&self) -> Result<Vec<Dart>> {
        let r = self.rank()?;
        if r != 1 {
            return Err(Error::RankMismatch(r));
        }
        let n = self.sigma.len();
        // Strip pendant edges until only the cycle remains.
        let mut alive = vec![true; n];
        let mut live_degree: Vec<usize> = self.darts().map(|d| self.degree(d)).collect();
        let mut queue: Vec<Dart> = self.darts().filter(|&d| self.degree(d) == 1).collect();
        while let Some(d) = queue.pop() {
            if !alive[d.idx()] || live_degree[d.idx()] != 1 {
                continue;
            }
            // d is the only live dart at its vertex
            let e = self.iota(d);
            alive[d.idx()] = false;
            alive[e.idx()] = false;
            let mut x = self.sigma(e);
            while x != e {
                live_degree[x.idx()] -= 1;
                if alive[x.idx()] && live_degree[x.idx()] == 1 {
                    queue.push(x);
                }
                x = self.sigma(x);
            }
        }
        let start = self
            .darts()
            .find(|d| alive[d.idx()])
            .expect("rank 1 leaves a cycle");
        let mut out = vec![start];
        let mut d = start;
        loop {
            // arrive at the next vertex, then leave by its other live dart
            let arrive = self.iota(d);
            let mut x = self.sigma(arrive);
            while !alive[x.idx()] {
                x = self.sigma(x);
            }
            if x == start {
                break;
            }
            out.push(x);
            d = x;
        }
        Ok(out)
    }
}

/// Classifies a rank-1 truncation by the side of the cycle its branches use.
pub fn classify_unicyclic(g: &TruncatedGraph) -> Result<UnicyclicClass> {
    let cycle = g.cycle()?;
    let k = cycle.len();
    // At each cycle vertex the branch is the dart that is neither the
    // arriving nor the leaving cycle dart. It sits on the left exactly when
    // sigma(arrive) is the branch.
    let side = |i: usize| {
        let arrive = g.iota(cycle[(i + k - 1) % k]);
        g.sigma(arrive) != cycle[i]
    };
    let first = side(0);
    if (1..k).all(|i| side(i) == first) {
        Ok(UnicyclicClass::FInfinityLike)
    } else {
        Ok(UnicyclicClass::Chark)
    }
}
