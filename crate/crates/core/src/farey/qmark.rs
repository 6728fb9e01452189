//! Minkowski's question-mark function on exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::ExtRational;
use crate::error::{Error, Result};

/// An exact dyadic rational `num / 2^exp`, reduced so that `num` is odd
/// whenever `exp > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigInt,
    exp: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, exp: u32) -> Self {
        let mut num = num.into();
        let mut exp = exp;
        while exp > 0 && num.is_even() {
            num >>= 1u32;
            exp -= 1;
        }
        if num.is_zero() {
            exp = 0;
        }
        Dyadic { num, exp }
    }

    pub fn integer(n: i128) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    /// Numerator after rescaling to denominator `2^e` (`e >= self.exp`).
    fn scaled(&self, e: u32) -> BigInt {
        &self.num << (e - self.exp)
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        let e = self.exp.max(o.exp);
        Dyadic::new(self.scaled(e) + o.scaled(e), e)
    }

    pub fn half(&self) -> Dyadic {
        Dyadic::new(self.num.clone(), self.exp + 1)
    }

    /// `(⌊x⌋, x − ⌊x⌋)`.
    pub fn split_floor(&self) -> (BigInt, Dyadic) {
        let den = BigInt::one() << self.exp;
        let (q, r) = self.num.div_mod_floor(&den);
        (q, Dyadic::new(r, self.exp))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let e = self.exp.max(o.exp);
        self.scaled(e).cmp(&o.scaled(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Parses `n` or `n/2^k` written out, e.g. `3/8`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::OutOfDomain(format!("not a dyadic rational: {s:?}"));
        let (n, d) = match s.trim().split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let num: BigInt = n.parse().map_err(|_| bad())?;
        let mut den: BigInt = d.parse().map_err(|_| bad())?;
        if !den.is_positive() {
            return Err(bad());
        }
        let mut exp = 0u32;
        while den.is_even() {
            den >>= 1u32;
            exp += 1;
        }
        if !den.is_one() {
            return Err(bad());
        }
        Ok(Dyadic::new(num, exp))
    }
}

/// A point of the dyadic circle `ℤ[1/2] ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CircleDyadic {
    Finite(Dyadic),
    Infinity,
}

impl fmt::Display for CircleDyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CircleDyadic::Finite(d) => d.fmt(f),
            CircleDyadic::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for CircleDyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("inf") {
            Ok(CircleDyadic::Infinity)
        } else {
            s.parse().map(CircleDyadic::Finite)
        }
    }
}

/// Continued-fraction partial quotients of `p/q` with `0 < p/q <= 1`.
fn partial_quotients(mut p: i128, mut q: i128) -> Vec<i128> {
    let mut out = Vec::new();
    // p/q = 1/(q/p): first quotient is ⌊q/p⌋
    while p != 0 {
        out.push(q / p);
        let r = q % p;
        q = p;
        p = r;
    }
    out
}

/// `?(x)` for `x ∈ [0, 1]`: with `x = [0; a₁, …, a_k]`,
/// `?(x) = Σⱼ (−1)^{j+1} 2^{1 − (a₁ + … + aⱼ)}`.
pub fn question_mark(x: ExtRational) -> Result<Dyadic> {
    if x.is_infinite() || x < ExtRational::ZERO || x > ExtRational::ONE {
        return Err(Error::OutOfDomain(format!("?({x}) needs 0 <= x <= 1")));
    }
    if x == ExtRational::ZERO {
        return Ok(Dyadic::integer(0));
    }
    let a = partial_quotients(x.numer(), x.denom());
    let mut sums = Vec::with_capacity(a.len());
    let mut s: u64 = 0;
    for &ai in &a {
        s = s
            .checked_add(u64::try_from(ai).map_err(|_| Error::Overflow)?)
            .ok_or(Error::Overflow)?;
        sums.push(s);
    }
    let top = u32::try_from(s - 1).map_err(|_| Error::Overflow)?;
    let mut total = BigInt::zero();
    for (j, &sj) in sums.iter().enumerate() {
        let term = BigInt::one() << (top as u64 - (sj - 1));
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(Dyadic::new(total, top))
}

/// Inverse of `?` on `[0, 1]`, by Stern–Brocot descent: the dyadic midpoint
/// of the current interval corresponds to the mediant of its rational ends.
pub fn question_mark_inv(y: &Dyadic) -> Result<ExtRational> {
    let zero = Dyadic::integer(0);
    let one = Dyadic::integer(1);
    if *y < zero || *y > one {
        return Err(Error::OutOfDomain(format!("?⁻¹({y}) needs 0 <= y <= 1")));
    }
    let e = y.exponent();
    let target = y.scaled(e);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::one() << e);
    let (mut l, mut r) = (ExtRational::ZERO, ExtRational::ONE);
    loop {
        if target == lo {
            return Ok(l);
        }
        if target == hi {
            return Ok(r);
        }
        let mid: BigInt = (&lo + &hi) >> 1u32;
        let med = l.mediant(&r)?;
        match target.cmp(&mid) {
            Ordering::Equal => return Ok(med),
            Ordering::Less => {
                hi = mid;
                r = med;
            }
            Ordering::Greater => {
                lo = mid;
                l = med;
            }
        }
    }
}

/// Extension to the circle: `x ↦ ⌊x⌋ + ?(x − ⌊x⌋)`, `∞ ↦ ∞`.
pub fn question_mark_circle(x: ExtRational) -> Result<CircleDyadic> {
    let Some(n) = x.floor() else {
        return Ok(CircleDyadic::Infinity);
    };
    let frac = question_mark(x.sub_integer(n))?;
    Ok(CircleDyadic::Finite(frac.add(&Dyadic::integer(n))))
}

pub fn question_mark_inv_circle(y: &CircleDyadic) -> Result<ExtRational> {
    let CircleDyadic::Finite(y) = y else {
        return Ok(ExtRational::INFINITY);
    };
    let (n, frac) = y.split_floor();
    let n = i128::try_from(n).map_err(|_| Error::Overflow)?;
    let base = question_mark_inv(&frac)?;
    ExtRational::new(
        base.numer()
            .checked_add(n.checked_mul(base.denom()).ok_or(Error::Overflow)?)
            .ok_or(Error::Overflow)?,
        base.denom(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> ExtRational {
        s.parse().unwrap()
    }

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    /// Independent recursive route: ? maps the Stern–Brocot mediant of
    /// neighbours a/b, c/d to the midpoint of their images.
    fn sb_oracle(x: ExtRational) -> Dyadic {
        fn go(x: ExtRational, l: ExtRational, r: ExtRational, ql: Dyadic, qr: Dyadic) -> Dyadic {
            let m = ExtRational::new(l.numer() + r.numer(), l.denom() + r.denom()).unwrap();
            let qm = ql.add(&qr).half();
            match x.cmp(&m) {
                Ordering::Equal => qm,
                Ordering::Less => go(x, l, m, ql, qm),
                Ordering::Greater => go(x, m, r, qm, qr),
            }
        }
        if x == ExtRational::ZERO {
            return Dyadic::integer(0);
        }
        if x == ExtRational::ONE {
            return Dyadic::integer(1);
        }
        go(
            x,
            ExtRational::ZERO,
            ExtRational::ONE,
            Dyadic::integer(0),
            Dyadic::integer(1),
        )
    }

    #[test]
    fn known_values() {
        assert_eq!(question_mark(r("1/3")).unwrap(), d("1/4"));
        assert_eq!(question_mark(r("1/2")).unwrap(), d("1/2"));
        assert_eq!(question_mark(r("2/3")).unwrap(), d("3/4"));
        assert_eq!(question_mark(r("2/5")).unwrap(), d("3/8"));
        assert_eq!(question_mark(r("1")).unwrap(), d("1"));
        assert_eq!(question_mark(r("0")).unwrap(), d("0"));
        assert!(question_mark(r("3/2")).is_err());
        assert_eq!(question_mark(r("1/3")).unwrap().to_string(), "1/4");
    }

    #[test]
    fn circle_extension() {
        assert_eq!(question_mark_circle(r("-2/3")).unwrap().to_string(), "-3/4");
        assert_eq!(
            question_mark_circle(ExtRational::INFINITY).unwrap(),
            CircleDyadic::Infinity
        );
        assert_eq!(
            question_mark_inv_circle(&"-3/4".parse().unwrap()).unwrap(),
            r("-2/3")
        );
    }

    fn unit_rational() -> impl Strategy<Value = ExtRational> {
        (1i128..400).prop_flat_map(|q| (0..=q).prop_map(move |p| ExtRational::new(p, q).unwrap()))
    }

    proptest! {
        #[test]
        fn matches_stern_brocot(x in unit_rational()) {
            prop_assert_eq!(question_mark(x).unwrap(), sb_oracle(x));
        }

        #[test]
        fn round_trip(x in unit_rational()) {
            prop_assert_eq!(question_mark_inv(&question_mark(x).unwrap()).unwrap(), x);
        }

        #[test]
        fn functional_identities(x in unit_rational()) {
            let q = question_mark(x).unwrap();
            let one_minus = ExtRational::new(x.denom() - x.numer(), x.denom()).unwrap();
            let flipped = question_mark(one_minus).unwrap();
            prop_assert_eq!(q.add(&flipped), Dyadic::integer(1));
            let y = ExtRational::new(x.numer(), x.numer() + x.denom()).unwrap();
            prop_assert_eq!(question_mark(y).unwrap(), q.half());
        }

        #[test]
        fn monotone(a in unit_rational(), b in unit_rational()) {
            prop_assert_eq!(
                a.cmp(&b),
                question_mark(a).unwrap().cmp(&question_mark(b).unwrap())
            );
        }

        #[test]
        fn circle_round_trip(n in -50i128..50, x in unit_rational()) {
            let y = x.sub_integer(-n);
            let q = question_mark_circle(y).unwrap();
            prop_assert_eq!(question_mark_inv_circle(&q).unwrap(), y);
        }
    }
}
