//! Exact PSL₂(ℤ) arithmetic and the Farey-tree dictionary.
//!
//! Entries are `i128`; every product is overflow-checked and panics with a
//! clear message rather than wrapping. Circle points are extended rationals
//! `p/q` with `∞ = 1/0`, cyclically ordered by increasing real value through ∞.

mod ppsl2;
mod qmark;
mod tree;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use ppsl2::{Ppsl2Element, Ppsl2Piece};
pub use qmark::{
    question_mark, question_mark_circle, question_mark_inv, question_mark_inv_circle, CircleDyadic,
    Dyadic,
};
pub use tree::{
    flip_sequence_to_circle_map, flip_sequence_to_circle_map_with, puncture_rational,
    single_flip_map, FareyDart, FlipMapOptions, Gen, TreePatch,
};

fn ck_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("PSL2(Z) entry overflow")
}

fn ck_add(a: i128, b: i128) -> i128 {
    a.checked_add(b).expect("PSL2(Z) entry overflow")
}

/// An element of PSL₂(ℤ), stored with the sign normalised so that `c > 0`,
/// or `c = 0` and `d > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Psl2Mat {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Psl2Mat {
    pub const IDENTITY: Psl2Mat = Psl2Mat {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// Order 2: `[[0,-1],[1,0]]`.
    pub const S: Psl2Mat = Psl2Mat {
        a: 0,
        b: -1,
        c: 1,
        d: 0,
    };
    /// Order 3: `[[0,-1],[1,-1]]`.
    pub const U: Psl2Mat = Psl2Mat {
        a: 0,
        b: -1,
        c: 1,
        d: -1,
    };
    /// Translation `x ↦ x + 1`.
    pub const T: Psl2Mat = Psl2Mat {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };

    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or(Error::Overflow)?;
        if det != 1 {
            return Err(Error::OutOfDomain(format!(
                "determinant of [[{a},{b}],[{c},{d}]] is {det}, expected 1"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    fn normalized(a: i128, b: i128, c: i128, d: i128) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            Psl2Mat {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Psl2Mat { a, b, c, d }
        }
    }

    pub fn mul(&self, o: &Psl2Mat) -> Psl2Mat {
        Self::normalized(
            ck_add(ck_mul(self.a, o.a), ck_mul(self.b, o.c)),
            ck_add(ck_mul(self.a, o.b), ck_mul(self.b, o.d)),
            ck_add(ck_mul(self.c, o.a), ck_mul(self.d, o.c)),
            ck_add(ck_mul(self.c, o.b), ck_mul(self.d, o.d)),
        )
    }

    pub fn inv(&self) -> Psl2Mat {
        Self::normalized(self.d, -self.b, -self.c, self.a)
    }

    pub fn pow(&self, k: i64) -> Psl2Mat {
        let base = if k < 0 { self.inv() } else { *self };
        (0..k.unsigned_abs()).fold(Psl2Mat::IDENTITY, |acc, _| acc.mul(&base))
    }

    pub fn is_identity(&self) -> bool {
        *self == Psl2Mat::IDENTITY
    }

    /// Möbius action `x ↦ (ax + b)/(cx + d)` on `ℚ ∪ {∞}`.
    pub fn moebius(&self, r: ExtRational) -> ExtRational {
        ExtRational::new_unchecked(
            ck_add(ck_mul(self.a, r.p), ck_mul(self.b, r.q)),
            ck_add(ck_mul(self.c, r.p), ck_mul(self.d, r.q)),
        )
    }
}

impl fmt::Display for Psl2Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Psl2Mat {
    type Err = Error;

    /// Parses `[[a,b],[c,d]]` (whitespace allowed).
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::OutOfDomain(format!("bad matrix literal {s:?}"));
        let inner = cleaned
            .strip_prefix("[[")
            .and_then(|t| t.strip_suffix("]]"))
            .ok_or_else(bad)?;
        let nums = inner
            .replace("],[", ",")
            .split(',')
            .map(|t| t.parse::<i128>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        match nums.as_slice() {
            &[a, b, c, d] => Psl2Mat::new(a, b, c, d),
            _ => Err(bad()),
        }
    }
}

/// A point of `ℚ ∪ {∞}`: `p/q` in lowest terms with `q >= 0`; `∞ = 1/0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExtRational {
    p: i128,
    q: i128,
}

impl ExtRational {
    pub const INFINITY: ExtRational = ExtRational { p: 1, q: 0 };
    pub const ZERO: ExtRational = ExtRational { p: 0, q: 1 };
    pub const ONE: ExtRational = ExtRational { p: 1, q: 1 };

    pub fn new(p: i128, q: i128) -> Result<Self> {
        if p == 0 && q == 0 {
            return Err(Error::OutOfDomain("0/0 is not a point".into()));
        }
        Ok(Self::new_unchecked(p, q))
    }

    fn new_unchecked(p: i128, q: i128) -> Self {
        if q == 0 {
            return ExtRational::INFINITY;
        }
        let g = p.gcd(&q);
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 {
            p = -p;
            q = -q;
        }
        ExtRational { p, q }
    }

    pub fn integer(n: i128) -> Self {
        ExtRational { p: n, q: 1 }
    }

    pub fn numer(&self) -> i128 {
        self.p
    }

    pub fn denom(&self) -> i128 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    /// `⌊p/q⌋` for finite points.
    pub fn floor(&self) -> Option<i128> {
        (!self.is_infinite()).then(|| Integer::div_floor(&self.p, &self.q))
    }

    pub fn sub_integer(&self, n: i128) -> Self {
        if self.is_infinite() {
            return *self;
        }
        ExtRational::new_unchecked(ck_add(self.p, -ck_mul(n, self.q)), self.q)
    }

    pub fn mediant(&self, o: &ExtRational) -> Result<Self> {
        let p = self.p.checked_add(o.p).ok_or(Error::Overflow)?;
        let q = self.q.checked_add(o.q).ok_or(Error::Overflow)?;
        Ok(ExtRational::new_unchecked(p, q))
    }

    /// Strict counterclockwise order of three points on the circle.
    pub fn cyclic(a: &ExtRational, b: &ExtRational, c: &ExtRational) -> bool {
        (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
    }
}

/// Linear order on the circle cut open just after ∞: finite rationals
/// ascending, then ∞.
impl Ord for ExtRational {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self.is_infinite(), o.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => ck_mul(self.p, o.q).cmp(&ck_mul(o.p, self.q)),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.q {
            0 => f.write_str("inf"),
            1 => write!(f, "{}", self.p),
            q => write!(f, "{}/{}", self.p, q),
        }
    }
}

impl FromStr for ExtRational {
    type Err = Error;

    /// Parses `p/q`, an integer, or `inf`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(ExtRational::INFINITY);
        }
        let bad = || Error::OutOfDomain(format!("bad rational literal {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i128>().map_err(|_| bad())?,
                q.trim().parse::<i128>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i128>().map_err(|_| bad())?, 1),
        };
        ExtRational::new(p, q)
    }
}
