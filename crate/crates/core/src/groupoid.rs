//! The graph fundamental groupoid: objects are edges, morphisms are reduced
//! words of half-steps.
//!
//! Subdividing every edge at its midpoint, `(d, In)` walks from the midpoint of
//! `edge(d)` to `vertex(d)` and `(d, Out)` walks back. Non-identity words
//! alternate `In`/`Out`, start with `In` and end with `Out`; each `In`/`Out`
//! pair `(p, In)(q, Out)` is a corner at a vertex. Free reduction (deleting
//! `(d, In)(d, Out)` and `(d, Out)(d, In)`) gives unique normal forms.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::moves::{self, Move};
use crate::ribbon::{isomorphism, Dart, MarkedGraph, RibbonGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct HalfStep {
    pub dart: Dart,
    pub dir: Direction,
}

impl HalfStep {
    pub fn into_vertex(d: Dart) -> Self {
        HalfStep {
            dart: d,
            dir: Direction::In,
        }
    }

    pub fn out_of_vertex(d: Dart) -> Self {
        HalfStep {
            dart: d,
            dir: Direction::Out,
        }
    }

    pub fn inverse(self) -> Self {
        HalfStep {
            dart: self.dart,
            dir: match self.dir {
                Direction::In => Direction::Out,
                Direction::Out => Direction::In,
            },
        }
    }
}

/// A reduced groupoid word between two edges (edges named by minimal dart).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupoidWord {
    start: Dart,
    end: Dart,
    letters: Vec<HalfStep>,
}

impl GroupoidWord {
    pub fn identity(g: &RibbonGraph, edge: Dart) -> Self {
        let e = g.edge_of(edge);
        GroupoidWord {
            start: e,
            end: e,
            letters: Vec::new(),
        }
    }

    /// The corner word `(p, In)(q, Out)`, reduced (so `p == q` gives an identity).
    pub fn corner(g: &RibbonGraph, p: Dart, q: Dart) -> Result<Self> {
        reduce(
            g,
            &[HalfStep::into_vertex(p), HalfStep::out_of_vertex(q)],
            None,
        )
    }

    pub fn start(&self) -> Dart {
        self.start
    }

    pub fn end(&self) -> Dart {
        self.end
    }

    pub fn letters(&self) -> &[HalfStep] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `(p, q)` pairs, one per corner.
    pub fn corners(&self) -> impl Iterator<Item = (Dart, Dart)> + '_ {
        self.letters.chunks(2).map(|c| (c[0].dart, c[1].dart))
    }

    /// Renames darts along an isomorphism `map` onto `target`.
    pub fn transport(&self, map: &[Dart], target: &RibbonGraph) -> Self {
        let letters: Vec<HalfStep> = self
            .letters
            .iter()
            .map(|h| HalfStep {
                dart: map[h.dart.idx()],
                dir: h.dir,
            })
            .collect();
        GroupoidWord {
            start: target.edge_of(map[self.start.idx()]),
            end: target.edge_of(map[self.end.idx()]),
            letters,
        }
    }
}

impl fmt::Display for GroupoidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "[@e{}]", self.start);
        }
        f.write_str("[")?;
        for (i, h) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let sign = if h.dir == Direction::In { '+' } else { '-' };
            write!(f, "{sign}{}", h.dart)?;
        }
        f.write_str("]")
    }
}

/// A parsed word literal before validation against a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordLiteral {
    Identity(Dart),
    Letters(Vec<HalfStep>),
}

impl WordLiteral {
    pub fn resolve(&self, g: &RibbonGraph) -> Result<GroupoidWord> {
        match self {
            WordLiteral::Identity(e) => {
                g.check_dart(*e)?;
                Ok(GroupoidWord::identity(g, *e))
            }
            WordLiteral::Letters(ls) => reduce(g, ls, None),
        }
    }
}

/// Parses `[+3 -6 +1 -2]` (`+d` = `(d, In)`, `-d` = `(d, Out)`) or `[@e5]`.
pub fn parse_word(text: &str) -> Result<WordLiteral> {
    let bad = |m: &str| Error::MalformedWord(format!("{m}: {text:?}"));
    let inner = text
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| bad("expected brackets"))?
        .trim();
    if let Some(e) = inner.strip_prefix("@e") {
        let d = e.parse::<u32>().map_err(|_| bad("bad edge id"))?;
        return Ok(WordLiteral::Identity(Dart(d)));
    }
    inner
        .split_whitespace()
        .map(|tok| {
            let (dir, num) = match tok.as_bytes().first() {
                Some(b'+') => (Direction::In, &tok[1..]),
                Some(b'-') => (Direction::Out, &tok[1..]),
                _ => return Err(bad("letters must start with + or -")),
            };
            let d = num.parse::<u32>().map_err(|_| bad("bad dart id"))?;
            Ok(HalfStep { dart: Dart(d), dir })
        })
        .collect::<Result<Vec<_>>>()
        .map(WordLiteral::Letters)
}

/// Checks alternation and adjacency of an unreduced letter sequence.
pub fn check_letters(g: &RibbonGraph, letters: &[HalfStep]) -> Result<()> {
    for (i, h) in letters.iter().enumerate() {
        g.check_dart(h.dart)?;
        let want = if i % 2 == 0 {
            Direction::In
        } else {
            Direction::Out
        };
        if h.dir != want {
            return Err(Error::Adjacency { position: i });
        }
        if i > 0 {
            let prev = letters[i - 1].dart;
            let ok = match h.dir {
                Direction::Out => g.vertex_of(prev) == g.vertex_of(h.dart),
                Direction::In => g.edge_of(prev) == g.edge_of(h.dart),
            };
            if !ok {
                return Err(Error::Adjacency { position: i });
            }
        }
    }
    if !letters.len().is_multiple_of(2) {
        return Err(Error::Adjacency {
            position: letters.len(),
        });
    }
    Ok(())
}

/// Free reduction. `base` names the object when `letters` is empty.
pub fn reduce(g: &RibbonGraph, letters: &[HalfStep], base: Option<Dart>) -> Result<GroupoidWord> {
    check_letters(g, letters)?;
    let (start, end) = match (letters.first().zip(letters.last()), base) {
        (Some((f, l)), _) => (g.edge_of(f.dart), g.edge_of(l.dart)),
        (None, Some(b)) => {
            g.check_dart(b)?;
            (g.edge_of(b), g.edge_of(b))
        }
        (None, None) => {
            return Err(Error::MalformedWord(
                "empty word needs a base edge".to_string(),
            ))
        }
    };
    Ok(GroupoidWord {
        start,
        end,
        letters: free_reduce(letters),
    })
}

pub(crate) fn free_reduce(letters: &[HalfStep]) -> Vec<HalfStep> {
    let mut out: Vec<HalfStep> = Vec::with_capacity(letters.len());
    for &h in letters {
        if out.last() == Some(&h.inverse()) {
            out.pop();
        } else {
            out.push(h);
        }
    }
    out
}

pub fn compose(u: &GroupoidWord, v: &GroupoidWord) -> Result<GroupoidWord> {
    if u.end != v.start {
        return Err(Error::ObjectMismatch {
            end: u.end.0,
            start: v.start.0,
        });
    }
    let mut letters = u.letters.clone();
    letters.extend_from_slice(&v.letters);
    Ok(GroupoidWord {
        start: u.start,
        end: v.end,
        letters: free_reduce(&letters),
    })
}

pub fn inverse(u: &GroupoidWord) -> GroupoidWord {
    GroupoidWord {
        start: u.end,
        end: u.start,
        letters: u.letters.iter().rev().map(|h| h.inverse()).collect(),
    }
}

/// Cyclic reduction of a closed word, rotating past cancelled letters.
pub fn cyclic_reduce(g: &RibbonGraph, w: &GroupoidWord) -> GroupoidWord {
    let mut letters = w.letters.clone();
    let mut lo = 0;
    let mut hi = letters.len();
    while hi >= lo + 2 && letters[hi - 1].inverse() == letters[lo] {
        lo += 1;
        hi -= 1;
    }
    let mut core: Vec<HalfStep> = letters.drain(lo..hi).collect();
    if core.first().is_some_and(|h| h.dir == Direction::Out) {
        core.rotate_left(1);
    }
    match core.first() {
        Some(f) => {
            let e = g.edge_of(f.dart);
            GroupoidWord {
                start: e,
                end: e,
                letters: core,
            }
        }
        None => GroupoidWord::identity(g, w.start),
    }
}

/// The corner rewrite table induced by one move. Corners not listed map to
/// themselves; shuffles and doe moves have empty tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InducedIso {
    pub mv: Move,
    pub table: BTreeMap<(Dart, Dart), Vec<HalfStep>>,
    #[serde(skip)]
    pub source: MarkedGraph,
    #[serde(skip)]
    pub target: MarkedGraph,
}

fn path(steps: &[(Dart, Direction)]) -> Vec<HalfStep> {
    steps
        .iter()
        .map(|&(dart, dir)| HalfStep { dart, dir })
        .collect()
}

pub fn induced_iso(mv: Move, m: &MarkedGraph) -> Result<InducedIso> {
    let target = moves::apply_move(m, mv).map_err(|e| Error::InapplicableMove {
        index: 0,
        reason: e.to_string(),
    })?;
    let mut table = BTreeMap::new();
    if let Move::Flip(f1) = mv {
        use Direction::{In, Out};
        let (_, r) = moves::flip(m, f1)?;
        let (f1, f2, a, b, c, d) = (r.f1, r.f2, r.a, r.b, r.c, r.d);
        type Row = ((Dart, Dart), Vec<(Dart, Direction)>);
        let rows: [Row; 8] = [
            ((a, f1), vec![(a, In), (f2, Out)]),
            ((f1, a), vec![(f2, In), (a, Out)]),
            ((d, f2), vec![(d, In), (f1, Out)]),
            ((f2, d), vec![(f1, In), (d, Out)]),
            ((a, b), vec![(a, In), (f2, Out), (f1, In), (b, Out)]),
            ((b, a), vec![(b, In), (f1, Out), (f2, In), (a, Out)]),
            ((c, d), vec![(c, In), (f2, Out), (f1, In), (d, Out)]),
            ((d, c), vec![(d, In), (f1, Out), (f2, In), (c, Out)]),
        ];
        for (k, v) in rows {
            table.insert(k, path(&v));
        }
    }
    Ok(InducedIso {
        mv,
        table,
        source: m.clone(),
        target,
    })
}

pub fn apply_iso(iso: &InducedIso, w: &GroupoidWord) -> GroupoidWord {
    if w.is_identity() {
        return w.clone();
    }
    let mut letters = Vec::with_capacity(w.len() + 4);
    for (p, q) in w.corners() {
        match iso.table.get(&(p, q)) {
            Some(img) => letters.extend_from_slice(img),
            None => {
                letters.push(HalfStep::into_vertex(p));
                letters.push(HalfStep::out_of_vertex(q));
            }
        }
    }
    GroupoidWord {
        start: w.start,
        end: w.end,
        letters: free_reduce(&letters),
    }
}

/// Induced isomorphisms of a move sequence, applied left to right.
#[derive(Clone, Debug, Serialize)]
pub struct IsoChain {
    pub isos: Vec<InducedIso>,
}

impl IsoChain {
    pub fn new(m: &MarkedGraph, s: &[Move]) -> Result<Self> {
        let mut cur = m.clone();
        let mut isos = Vec::with_capacity(s.len());
        for (index, &mv) in s.iter().enumerate() {
            let iso = induced_iso(mv, &cur).map_err(|e| match e {
                Error::InapplicableMove { reason, .. } => Error::InapplicableMove { index, reason },
                other => other,
            })?;
            cur = iso.target.clone();
            isos.push(iso);
        }
        Ok(IsoChain { isos })
    }

    pub fn apply(&self, w: &GroupoidWord) -> GroupoidWord {
        self.isos
            .iter()
            .fold(w.clone(), |acc, iso| apply_iso(iso, &acc))
    }
}

/// The closed left-turning word of the puncture through `d`, based at `edge(d)`.
pub fn puncture_loop(g: &RibbonGraph, d: Dart) -> Result<GroupoidWord> {
    g.check_dart(d)?;
    let mut letters = Vec::new();
    let mut x = d;
    loop {
        letters.push(HalfStep::into_vertex(g.iota(x)));
        letters.push(HalfStep::out_of_vertex(g.lambda(x)));
        x = g.lambda(x);
        if x == d {
            break;
        }
    }
    let e = g.edge_of(d);
    Ok(GroupoidWord {
        start: e,
        end: e,
        letters,
    })
}

/// How punctures of a graph correspond to punctures of its image under a
/// sequence of flips and doe moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PunctureMap {
    /// Punctures of the source, as dart cycles.
    pub source: Vec<Vec<Dart>>,
    /// Punctures of the image graph.
    pub target: Vec<Vec<Dart>>,
    /// `mapping[i]` is the target puncture matched with source puncture `i`.
    pub mapping: Vec<usize>,
    /// Corner count of the cyclically reduced image of each source loop.
    pub image_lengths: Vec<usize>,
}

impl PunctureMap {
    pub fn is_bijection(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.source.len() == self.target.len()
            && self
                .mapping
                .iter()
                .all(|&j| j < hit.len() && !std::mem::replace(&mut hit[j], true))
    }
}

/// Identifies the target puncture traced by a closed word, if the word is
/// exactly one left-turning circuit.
fn match_puncture(g: &RibbonGraph, w: &GroupoidWord, index: &[usize]) -> Result<usize> {
    let corners: Vec<(Dart, Dart)> = w.corners().collect();
    if corners.is_empty() {
        return Err(Error::PunctureMismatch("loop collapsed".into()));
    }
    let mut found = None;
    for (k, &(p, q)) in corners.iter().enumerate() {
        if g.sigma(p) != q {
            return Err(Error::PunctureMismatch(format!(
                "corner ({p},{q}) is not a left turn"
            )));
        }
        let (next_p, _) = corners[(k + 1) % corners.len()];
        if next_p != g.iota(q) {
            return Err(Error::PunctureMismatch(format!(
                "corner ({p},{q}) not followed across its edge"
            )));
        }
        let j = index[g.iota(p).idx()];
        match found {
            None => found = Some(j),
            Some(f) if f != j => {
                return Err(Error::PunctureMismatch("loop visits two punctures".into()))
            }
            _ => {}
        }
    }
    Ok(found.expect("nonempty"))
}

pub fn puncture_bijection(s: &[Move], m: &MarkedGraph) -> Result<PunctureMap> {
    if s.iter().any(|mv| matches!(mv, Move::Shuffle(_))) {
        return Err(Error::ShuffleInPunctureMap);
    }
    let chain = IsoChain::new(m, s)?;
    let target = chain
        .isos
        .last()
        .map(|i| i.target.graph.clone())
        .unwrap_or_else(|| m.graph.clone());
    let source_p = m.graph.punctures();
    let target_p = target.punctures();
    let index = target.puncture_index();
    let mut mapping = Vec::new();
    let mut image_lengths = Vec::new();
    for p in &source_p {
        let w = puncture_loop(&m.graph, p.darts[0])?;
        let img = cyclic_reduce(&target, &chain.apply(&w));
        let j = match_puncture(&target, &img, &index)?;
        if img.len() / 2 != target_p[j].len() {
            return Err(Error::PunctureMismatch(format!(
                "image of puncture winds {} corners around a puncture of length {}",
                img.len() / 2,
                target_p[j].len()
            )));
        }
        mapping.push(j);
        image_lengths.push(img.len() / 2);
    }
    Ok(PunctureMap {
        source: source_p.into_iter().map(|p| p.darts).collect(),
        target: target_p.into_iter().map(|p| p.darts).collect(),
        mapping,
        image_lengths,
    })
}

/// All corner generators `(p, q)`, `p != q`, of a graph.
pub fn corner_generators(g: &RibbonGraph) -> Vec<(Dart, Dart)> {
    let mut out = Vec::with_capacity(2 * g.dart_count());
    for [a, b, c] in g.vertices() {
        for (p, q) in [(a, b), (a, c), (b, a), (b, c), (c, a), (c, b)] {
            out.push((p, q));
        }
    }
    out.sort_unstable();
    out
}

/// The action of a loop in the move groupoid on every corner generator,
/// expressed back in the coordinates of the base graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AutomorphismTable {
    pub images: BTreeMap<(Dart, Dart), GroupoidWord>,
}

impl AutomorphismTable {
    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .all(|(&(p, q), w)| w.len() == 2 && w.letters[0].dart == p && w.letters[1].dart == q)
    }

    /// Image of an arbitrary word.
    pub fn apply(&self, w: &GroupoidWord) -> GroupoidWord {
        if w.is_identity() {
            return w.clone();
        }
        let mut letters = Vec::new();
        let mut start = None;
        let mut end = w.end;
        for (p, q) in w.corners() {
            let img = &self.images[&(p, q)];
            start.get_or_insert(img.start);
            end = img.end;
            letters.extend_from_slice(&img.letters);
        }
        GroupoidWord {
            start: start.unwrap_or(w.start),
            end,
            letters: free_reduce(&letters),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &AutomorphismTable) -> AutomorphismTable {
        AutomorphismTable {
            images: self
                .images
                .iter()
                .map(|(k, w)| (*k, other.apply(w)))
                .collect(),
        }
    }
}

pub fn identity_table(g: &RibbonGraph) -> AutomorphismTable {
    AutomorphismTable {
        images: corner_generators(g)
            .into_iter()
            .map(|(p, q)| {
                (
                    (p, q),
                    GroupoidWord {
                        start: g.edge_of(p),
                        end: g.edge_of(q),
                        letters: vec![HalfStep::into_vertex(p), HalfStep::out_of_vertex(q)],
                    },
                )
            })
            .collect(),
    }
}

/// Automorphism of the groupoid of `m` induced by a loop `s` at `m`.
pub fn loop_automorphism(m: &MarkedGraph, s: &[Move]) -> Result<AutomorphismTable> {
    let chain = IsoChain::new(m, s)?;
    let end = chain
        .isos
        .last()
        .map(|i| i.target.clone())
        .unwrap_or_else(|| m.clone());
    let back = isomorphism(&end, m)?.ok_or(Error::NotALoop)?;
    let g = &m.graph;
    let images = corner_generators(g)
        .into_iter()
        .map(|(p, q)| {
            let w = GroupoidWord::corner(g, p, q).expect("corner of g");
            ((p, q), chain.apply(&w).transport(&back, g))
        })
        .collect();
    Ok(AutomorphismTable { images })
}

pub fn is_identity(a: &AutomorphismTable) -> bool {
    a.is_identity()
}

/// Reduced paths out of `edge` with exactly `corners` corners, shortest first.
fn paths_from(g: &RibbonGraph, edge: Dart, corners: usize) -> Vec<Vec<HalfStep>> {
    let mut layer: Vec<Vec<HalfStep>> = vec![Vec::new()];
    for _ in 0..corners {
        let mut next = Vec::new();
        for p in &layer {
            let here = p.last().map_or(edge, |h| h.dart);
            for d in [here, g.iota(here)] {
                if p.last() == Some(&HalfStep::out_of_vertex(d)) {
                    continue;
                }
                for q in [g.sigma(d), g.sigma_inv(d)] {
                    let mut w = p.clone();
                    w.push(HalfStep::into_vertex(d));
                    w.push(HalfStep::out_of_vertex(q));
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Decides whether `a` is conjugation by a family of paths `h_x: x → a(x)`,
/// i.e. `a(w) = h_s⁻¹ · w · h_e` for every corner `w: s → e`. Such
/// automorphisms are trivial as outer automorphisms. The path at the edge of
/// `base` is searched up to `max_corners` corners; the others follow.
pub fn inner_witness(
    g: &RibbonGraph,
    a: &AutomorphismTable,
    base: Dart,
    max_corners: usize,
) -> Option<BTreeMap<Dart, GroupoidWord>> {
    let x0 = g.edge_of(base);
    let mut image_of = BTreeMap::new();
    for (&(p, q), w) in &a.images {
        image_of.insert(g.edge_of(p), w.start);
        image_of.insert(g.edge_of(q), w.end);
    }
    let y0 = *image_of.get(&x0)?;
    for k in 0..=max_corners {
        for letters in paths_from(g, x0, k) {
            let end = letters.last().map_or(x0, |h| g.edge_of(h.dart));
            if end != y0 {
                continue;
            }
            let h0 = GroupoidWord {
                start: x0,
                end: y0,
                letters,
            };
            if let Some(h) = propagate(g, a, h0) {
                return Some(h);
            }
        }
    }
    None
}

fn propagate(
    g: &RibbonGraph,
    a: &AutomorphismTable,
    h0: GroupoidWord,
) -> Option<BTreeMap<Dart, GroupoidWord>> {
    let mut h: BTreeMap<Dart, GroupoidWord> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([h0.start]);
    h.insert(h0.start, h0);
    while let Some(s) = queue.pop_front() {
        for ((p, q), img) in &a.images {
            let e = g.edge_of(*q);
            if g.edge_of(*p) != s || h.contains_key(&e) {
                continue;
            }
            let w = GroupoidWord::corner(g, *p, *q).ok()?;
            let he = compose(&compose(&inverse(&w), &h[&s]).ok()?, img).ok()?;
            h.insert(e, he);
            queue.push_back(e);
        }
    }
    for ((p, q), img) in &a.images {
        let (s, e) = (g.edge_of(*p), g.edge_of(*q));
        let w = GroupoidWord::corner(g, *p, *q).ok()?;
        let conj = compose(&compose(&inverse(h.get(&s)?), &w).ok()?, h.get(&e)?).ok()?;
        if &conj != img {
            return None;
        }
    }
    Some(h)
}

/// Free generators of the vertex group at `base`: one loop per edge outside a
/// BFS spanning tree, `E - V + 1` in total.
pub fn fundamental_loops(g: &RibbonGraph, base: Dart) -> Result<Vec<GroupoidWord>> {
    g.ensure_connected()?;
    g.check_dart(base)?;
    let d0 = g.edge_of(base);
    // parent[v] = dart at v leading back toward the root vertex
    let root = g.vertex_of(d0);
    let n = g.dart_count();
    let mut reached = vec![false; n];
    let mut to_root: Vec<Vec<HalfStep>> = vec![Vec::new(); n];
    let mut tree_edge = vec![false; n];
    reached[root.idx()] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for x in [v, g.sigma(v), g.sigma_inv(v)] {
            let w = g.vertex_of(g.iota(x));
            if !reached[w.idx()] {
                reached[w.idx()] = true;
                tree_edge[g.edge_of(x).idx()] = true;
                // path from the root vertex to w
                let mut p = to_root[v.idx()].clone();
                p.push(HalfStep::out_of_vertex(x));
                p.push(HalfStep::into_vertex(g.iota(x)));
                to_root[w.idx()] = p;
                queue.push_back(w);
            }
        }
    }
    let from_base = |v: Dart| {
        let mut p = vec![HalfStep::into_vertex(d0)];
        p.extend_from_slice(&to_root[v.idx()]);
        p
    };
    let mut loops = Vec::new();
    for [x, y] in g.edges() {
        if tree_edge[x.idx()] {
            continue;
        }
        let mut letters = from_base(g.vertex_of(x));
        letters.push(HalfStep::out_of_vertex(x));
        letters.push(HalfStep::into_vertex(y));
        let back = from_base(g.vertex_of(y));
        letters.extend(back.iter().rev().map(|h| h.inverse()));
        loops.push(reduce(g, &letters, None)?);
    }
    Ok(loops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::DoeKind;
    use crate::ribbon::examples::*;

    fn w(g: &RibbonGraph, lit: &str) -> GroupoidWord {
        parse_word(lit).unwrap().resolve(g).unwrap()
    }

    #[test]
    fn reduction_relations() {
        let g = planar_theta();
        // (a,a) = (a)
        assert!(w(&g, "[+1 -1]").is_identity());
        // (a,b)(b,a) = (a)
        assert!(w(&g, "[+1 -2 +2 -1]").is_identity());
        // (a,b)(b,c) = (a,c)
        assert_eq!(w(&g, "[+1 -2 +2 -3]"), w(&g, "[+1 -3]"));
    }

    #[test]
    fn adjacency_errors() {
        let g = planar_theta();
        // 1 and 4 are at different vertices
        assert_eq!(
            parse_word("[+1 -4]").unwrap().resolve(&g),
            Err(Error::Adjacency { position: 1 })
        );
        // leaving via 2 then entering via 3: different edges
        assert_eq!(
            parse_word("[+1 -2 +3 -1]").unwrap().resolve(&g),
            Err(Error::Adjacency { position: 2 })
        );
        assert_eq!(
            parse_word("[-1 +1]").unwrap().resolve(&g),
            Err(Error::Adjacency { position: 0 })
        );
    }

    #[test]
    fn literal_round_trip() {
        let g = dumbbell();
        let u = w(&g, "[+3 -1 +2 -3]");
        assert_eq!(u.to_string(), "[+3 -1 +2 -3]");
        assert_eq!(w(&g, "[@e2]").to_string(), "[@e1]");
    }

    #[test]
    fn compose_and_inverse() {
        let g = dumbbell();
        let u = w(&g, "[+3 -1 +2 -3]");
        let id = GroupoidWord::identity(&g, Dart(3));
        assert_eq!(compose(&u, &id).unwrap(), u);
        assert_eq!(inverse(&inverse(&u)), u);
        assert!(compose(&u, &inverse(&u)).unwrap().is_identity());
        let other = GroupoidWord::identity(&g, Dart(1));
        assert!(matches!(
            compose(&u, &other),
            Err(Error::ObjectMismatch { .. })
        ));
    }

    #[test]
    fn flip_image_of_afc_path() {
        // dumbbell, flip the bar: f1=3, f2=6, A=1, C=5
        let m = marked(dumbbell(), 1);
        let iso = induced_iso(Move::Flip(Dart(3)), &m).unwrap();
        let afc = w(&m.graph, "[+1 -3 +6 -5]");
        let img = apply_iso(&iso, &afc);
        assert_eq!(img, w(&iso.target.graph, "[+1 -5]"));
        // (A,B) ↦ (A,f2)(f1,B)
        let ab = w(&m.graph, "[+1 -2]");
        assert_eq!(apply_iso(&iso, &ab).to_string(), "[+1 -6 +3 -2]");
    }

    fn k4() -> RibbonGraph {
        RibbonGraph::from_cycles(
            12,
            &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[10, 11, 12]],
            &[&[1, 4], &[2, 7], &[3, 10], &[5, 8], &[6, 11], &[9, 12]],
        )
        .unwrap()
    }

    #[test]
    fn words_away_from_flip_are_fixed() {
        let m = marked(k4(), 1);
        let iso = induced_iso(Move::Flip(Dart(1)), &m).unwrap();
        let star = [m.graph.vertex_of(Dart(1)), m.graph.vertex_of(Dart(4))];
        let mut away = 0;
        for (p, q) in corner_generators(&m.graph) {
            if !star.contains(&m.graph.vertex_of(p)) {
                let c = GroupoidWord::corner(&m.graph, p, q).unwrap();
                assert_eq!(apply_iso(&iso, &c), c);
                away += 1;
            }
        }
        assert_eq!(away, 12);
    }

    #[test]
    fn puncture_loops() {
        let g = dumbbell();
        let l = puncture_loop(&g, Dart(2)).unwrap();
        assert_eq!(l.to_string(), "[+1 -2]");
        assert_eq!(puncture_loop(&g, Dart(1)).unwrap().len(), 8);
    }

    #[test]
    fn puncture_bijection_through_flip() {
        let m = marked(dumbbell(), 1);
        let pm = puncture_bijection(&[Move::Flip(Dart(3))], &m).unwrap();
        assert!(pm.is_bijection());
        assert_eq!(pm.source.len(), 3);
        let id = puncture_bijection(&[], &m).unwrap();
        assert_eq!(id.mapping, vec![0, 1, 2]);
        assert_eq!(
            puncture_bijection(&[Move::Shuffle(Dart(1))], &m),
            Err(Error::ShuffleInPunctureMap)
        );
    }

    #[test]
    fn order_four_loop_is_identity() {
        let m = marked(dumbbell(), 5);
        let t = loop_automorphism(&m, &[Move::Flip(Dart(3)); 4]).unwrap();
        assert!(t.is_identity());
        assert!(loop_automorphism(&m, &[]).unwrap().is_identity());
        assert_eq!(
            loop_automorphism(&m, &[Move::Flip(Dart(3))]),
            Err(Error::NotALoop)
        );
    }

    #[test]
    fn doe_loop_on_symmetric_graph() {
        // nonplanar theta: rotating the doe three times is trivially a loop
        let m = marked(nonplanar_theta(), 1);
        let t = loop_automorphism(&m, &[Move::Doe(DoeKind::Rotate); 3]).unwrap();
        assert!(t.is_identity());
    }

    #[test]
    fn fundamental_loop_count() {
        for g in [planar_theta(), nonplanar_theta(), dumbbell()] {
            let loops = fundamental_loops(&g, Dart(3)).unwrap();
            assert_eq!(loops.len(), 2);
            for l in &loops {
                assert_eq!(l.start(), g.edge_of(Dart(3)));
                assert_eq!(l.end(), g.edge_of(Dart(3)));
                assert!(!l.is_identity());
            }
        }
    }

    #[test]
    fn cyclic_reduction() {
        let g = dumbbell();
        // the loop [+2 -1] conjugated by the bar-to-loop path [+3 -1]
        let conj = w(&g, "[+3 -1 +2 -1 +1 -3]");
        assert_eq!(conj.to_string(), "[+3 -1 +2 -3]");
        assert_eq!(cyclic_reduce(&g, &conj).to_string(), "[+2 -1]");
        let l = puncture_loop(&g, Dart(1)).unwrap();
        assert_eq!(cyclic_reduce(&g, &l), l);
    }

    #[test]
    fn inner_automorphisms() {
        let g = nonplanar_theta();
        let id = identity_table(&g);
        let h = inner_witness(&g, &id, Dart(1), 0).unwrap();
        assert!(h.values().all(GroupoidWord::is_identity));
        assert_eq!(h.len(), g.edge_count());

        // conjugate by h_x = t_x · c · t_x⁻¹, t_x a path from edge x to
        // edge 1 through the vertex of dart 1, c a loop at edge 1
        let c = fundamental_loops(&g, Dart(1)).unwrap().remove(0);
        let t = |x: Dart| {
            let e = g.edge_of(x);
            if e == Dart(1) {
                GroupoidWord::identity(&g, e)
            } else {
                GroupoidWord::corner(&g, e, Dart(1)).unwrap()
            }
        };
        let hx = |x: Dart| compose(&compose(&t(x), &c).unwrap(), &inverse(&t(x))).unwrap();
        let conj = AutomorphismTable {
            images: id
                .images
                .iter()
                .map(|(&(p, q), w)| {
                    let img = compose(&compose(&inverse(&hx(p)), w).unwrap(), &hx(q)).unwrap();
                    ((p, q), img)
                })
                .collect(),
        };
        assert!(!conj.is_identity());
        assert!(inner_witness(&g, &conj, Dart(1), 0).is_none());
        let found = inner_witness(&g, &conj, Dart(1), c.len() / 2).unwrap();
        assert_eq!(found[&Dart(1)], c);
    }
}
