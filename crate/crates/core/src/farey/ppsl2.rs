//! Piecewise-PSL₂(ℤ) homeomorphisms of the rational circle.
//!
//! An element is a cyclic list of breakpoints `b₀ < … < b_{k−1}` (in the
//! linear order that puts ∞ last) and matrices `M_i`, with `M_i` acting on the
//! half-open counterclockwise arc `[b_i, b_{i+1})`. Elements are kept
//! normalised: breakpoints sorted, and adjacent arcs with equal matrices
//! merged, so structural equality is equality of maps.

use serde::{Deserialize, Serialize};
use std::fmt;

use super::{ExtRational, Psl2Mat};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ppsl2Piece {
    pub start: ExtRational,
    pub mat: Psl2Mat,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ppsl2Element {
    /// Empty breakpoint list means a single global matrix in `global`.
    pieces: Vec<Ppsl2Piece>,
    global: Psl2Mat,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidElement(msg.into())
}

impl Ppsl2Element {
    pub fn identity() -> Self {
        Self::global(Psl2Mat::IDENTITY)
    }

    pub fn global(m: Psl2Mat) -> Self {
        Ppsl2Element {
            pieces: Vec::new(),
            global: m,
        }
    }

    /// Builds and validates an element from `(breakpoint, matrix)` pairs in
    /// any order. Fails unless the pieces glue to a continuous,
    /// orientation-preserving bijection of the circle.
    pub fn from_pieces(pieces: impl IntoIterator<Item = (ExtRational, Psl2Mat)>) -> Result<Self> {
        let mut pieces: Vec<Ppsl2Piece> = pieces
            .into_iter()
            .map(|(start, mat)| Ppsl2Piece { start, mat })
            .collect();
        pieces.sort_by_key(|a| a.start);
        if pieces.is_empty() {
            return Err(invalid("no pieces"));
        }
        if pieces.windows(2).any(|w| w[0].start == w[1].start) {
            return Err(invalid("repeated breakpoint"));
        }
        let k = pieces.len();
        if k == 1 {
            return Ok(Self::global(pieces[0].mat));
        }
        for i in 0..k {
            let cur = &pieces[i];
            let next = &pieces[(i + 1) % k];
            if cur.mat.moebius(next.start) != next.mat.moebius(next.start) {
                return Err(invalid(format!(
                    "discontinuous at {}: {} vs {}",
                    next.start,
                    cur.mat.moebius(next.start),
                    next.mat.moebius(next.start)
                )));
            }
        }
        let images: Vec<ExtRational> = pieces.iter().map(|p| p.mat.moebius(p.start)).collect();
        // Images must wind once around the circle, counterclockwise.
        let winds_once = if k == 2 {
            images[0] != images[1]
        } else {
            (1..k - 1).all(|i| ExtRational::cyclic(&images[0], &images[i], &images[i + 1]))
        };
        if !winds_once {
            return Err(invalid("breakpoint images are not in cyclic order"));
        }
        Ok(Self::normalize(pieces))
    }

    fn normalize(pieces: Vec<Ppsl2Piece>) -> Self {
        let k = pieces.len();
        let kept: Vec<Ppsl2Piece> = (0..k)
            .filter(|&i| pieces[(i + k - 1) % k].mat != pieces[i].mat)
            .map(|i| pieces[i])
            .collect();
        if kept.is_empty() {
            Self::global(pieces[0].mat)
        } else {
            Ppsl2Element {
                global: kept[0].mat,
                pieces: kept,
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<ExtRational> {
        self.pieces.iter().map(|p| p.start).collect()
    }

    /// The pieces in cyclic order; a single piece starting at ∞ for a global
    /// element.
    pub fn pieces(&self) -> Vec<Ppsl2Piece> {
        if self.pieces.is_empty() {
            vec![Ppsl2Piece {
                start: ExtRational::INFINITY,
                mat: self.global,
            }]
        } else {
            self.pieces.clone()
        }
    }

    pub fn is_global(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.is_global() && self.global.is_identity()
    }

    /// The matrix acting at `r`.
    pub fn piece_at(&self, r: ExtRational) -> Psl2Mat {
        if self.pieces.is_empty() {
            return self.global;
        }
        let idx = self.pieces.partition_point(|p| p.start <= r);
        let i = if idx == 0 {
            self.pieces.len() - 1
        } else {
            idx - 1
        };
        self.pieces[i].mat
    }

    pub fn eval(&self, r: ExtRational) -> ExtRational {
        self.piece_at(r).moebius(r)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Ppsl2Element) -> Ppsl2Element {
        if self.is_global() && other.is_global() {
            return Self::global(self.global.mul(&other.global));
        }
        let other_inv = other.inverse();
        let mut cuts: Vec<ExtRational> = other.breakpoints();
        cuts.extend(self.breakpoints().into_iter().map(|b| other_inv.eval(b)));
        cuts.sort();
        cuts.dedup();
        let pieces = cuts
            .into_iter()
            .map(|x| Ppsl2Piece {
                start: x,
                mat: self.piece_at(other.eval(x)).mul(&other.piece_at(x)),
            })
            .collect();
        Self::normalize(pieces)
    }

    pub fn inverse(&self) -> Ppsl2Element {
        if self.is_global() {
            return Self::global(self.global.inv());
        }
        let mut pieces: Vec<Ppsl2Piece> = self
            .pieces
            .iter()
            .map(|p| Ppsl2Piece {
                start: p.mat.moebius(p.start),
                mat: p.mat.inv(),
            })
            .collect();
        pieces.sort_by_key(|a| a.start);
        Self::normalize(pieces)
    }

    pub fn pow(&self, k: i64) -> Ppsl2Element {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Self::identity(), |acc, _| acc.compose(&base))
    }

    /// Text form: one `breakpoint matrix` line per piece, or a single
    /// `all matrix` line for a global element.
    pub fn to_text(&self) -> String {
        if self.is_global() {
            return format!("all {}\n", self.global);
        }
        self.pieces
            .iter()
            .map(|p| format!("{} {}\n", p.start, p.mat))
            .collect()
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse {
                line: i + 1,
                message: m,
            };
            let (head, mat) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| err(format!("expected 'breakpoint matrix', got {line:?}")))?;
            let mat: Psl2Mat = mat.parse().map_err(|e: Error| err(e.to_string()))?;
            if head == "all" {
                pairs.push((None, mat));
            } else {
                let b: ExtRational = head.parse().map_err(|e: Error| err(e.to_string()))?;
                pairs.push((Some(b), mat));
            }
        }
        match pairs.as_slice() {
            [(None, m)] => Ok(Self::global(*m)),
            _ if pairs.iter().any(|(b, _)| b.is_none()) => {
                Err(invalid("'all' must be the only line"))
            }
            _ => Self::from_pieces(pairs.into_iter().map(|(b, m)| (b.unwrap(), m))),
        }
    }
}

impl fmt::Display for Ppsl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExtRational {
        s.parse().unwrap()
    }

    fn m(s: &str) -> Psl2Mat {
        s.parse().unwrap()
    }

    /// The order-four map that cycles the arcs cut at −1, 0, 1, ∞.
    fn four_piece() -> Ppsl2Element {
        Ppsl2Element::from_pieces([
            (r("-1"), m("[[0,-1],[1,1]]")),
            (r("0"), m("[[1,-1],[0,1]]")),
            (r("1"), m("[[1,-1],[1,0]]")),
            (r("inf"), m("[[1,0],[1,1]]")),
        ])
        .unwrap()
    }

    #[test]
    fn evaluation() {
        let f = four_piece();
        assert_eq!(f.eval(r("-1")), r("inf"));
        assert_eq!(f.eval(r("1/2")), r("-1/2"));
        assert_eq!(f.eval(r("2")), r("1/2"));
        assert_eq!(f.eval(r("-3")), r("3/2"));
        assert_eq!(f.eval(r("inf")), r("1"));
    }

    #[test]
    fn group_laws() {
        let f = four_piece();
        assert!(f.compose(&f.inverse()).is_identity());
        assert!(f.inverse().compose(&f).is_identity());
        assert!(f.pow(4).is_identity());
        assert!(!f.pow(2).is_identity());
        let t = Ppsl2Element::global(Psl2Mat::T);
        let lhs = f.compose(&t).compose(&f);
        let rhs = f.compose(&t.compose(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn merging_and_rejection() {
        let e = Ppsl2Element::from_pieces([(r("0"), Psl2Mat::T), (r("1"), Psl2Mat::T)]).unwrap();
        assert_eq!(e, Ppsl2Element::global(Psl2Mat::T));
        // discontinuous
        assert!(Ppsl2Element::from_pieces([(r("0"), Psl2Mat::T), (r("1"), Psl2Mat::S)]).is_err());
        // orientation reversing arrangement of images
        let f = four_piece();
        let bad = Ppsl2Element::from_pieces(
            f.pieces()
                .iter()
                .enumerate()
                .map(|(i, p)| (p.start, if i == 1 { Psl2Mat::IDENTITY } else { p.mat })),
        );
        assert!(bad.is_err());
    }

    #[test]
    fn text_round_trip() {
        let f = four_piece();
        assert_eq!(Ppsl2Element::parse_text(&f.to_text()).unwrap(), f);
        let g = Ppsl2Element::global(Psl2Mat::S);
        assert_eq!(g.to_text(), "all [[0,-1],[1,0]]\n");
        assert_eq!(Ppsl2Element::parse_text(&g.to_text()).unwrap(), g);
    }
}
