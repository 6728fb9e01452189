//! Covering maps of ribbon graphs and path lifting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groupoid::{reduce, Direction, GroupoidWord, HalfStep};
use crate::ribbon::{Dart, RibbonGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringCheck {
    pub covering: bool,
    /// Fiber size when `covering` holds.
    pub degree: usize,
    pub failure: Option<String>,
}

/// Checks `ψσ_H = σ_Gψ`, `ψι_H = ι_Gψ`, surjectivity and constant fibers.
/// `psi[d-1]` is the image of cover dart `d`.
pub fn is_covering(psi: &[Dart], cover: &RibbonGraph, base: &RibbonGraph) -> CoveringCheck {
    let fail = |msg: String| CoveringCheck {
        covering: false,
        degree: 0,
        failure: Some(msg),
    };
    if psi.len() != cover.dart_count() {
        return fail(format!(
            "map has {} entries for {} darts",
            psi.len(),
            cover.dart_count()
        ));
    }
    if let Some(d) = psi.iter().find(|d| !base.contains(**d)) {
        return fail(format!("image {d} is not a base dart"));
    }
    let at = |d: Dart| psi[d.idx()];
    for d in cover.darts() {
        if at(cover.sigma(d)) != base.sigma(at(d)) {
            return fail(format!("sigma does not commute at dart {d}"));
        }
        if at(cover.iota(d)) != base.iota(at(d)) {
            return fail(format!("iota does not commute at dart {d}"));
        }
    }
    let mut fiber = vec![0usize; base.dart_count()];
    for d in psi {
        fiber[d.idx()] += 1;
    }
    if fiber.contains(&0) {
        return fail("map is not surjective".into());
    }
    if fiber.iter().any(|&k| k != fiber[0]) {
        return fail("fibers have different sizes".into());
    }
    CoveringCheck {
        covering: true,
        degree: fiber[0],
        failure: None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    pub cover: RibbonGraph,
    pub base: RibbonGraph,
    pub psi: Vec<Dart>,
    pub degree: usize,
}

impl CoveringMap {
    pub fn new(cover: RibbonGraph, base: RibbonGraph, psi: Vec<Dart>) -> Result<Self> {
        let check = is_covering(&psi, &cover, &base);
        match check.failure {
            Some(msg) => Err(Error::NotCovering(msg)),
            None => Ok(CoveringMap {
                cover,
                base,
                psi,
                degree: check.degree,
            }),
        }
    }

    pub fn image(&self, d: Dart) -> Dart {
        self.psi[d.idx()]
    }
}

/// The two-sheeted cover of `g` in which the edges of `crossing` switch
/// sheets and every other edge stays on its sheet. Sheet `k` holds darts
/// `d + k·2E`.
pub fn double_cover(g: &RibbonGraph, crossing: &[Dart]) -> Result<CoveringMap> {
    for &d in crossing {
        g.check_dart(d)?;
    }
    let n = g.dart_count() as u32;
    let crosses = |d: Dart| crossing.iter().any(|&c| g.edge_of(c) == g.edge_of(d));
    let mut sigma = Vec::with_capacity(2 * n as usize);
    let mut iota = Vec::with_capacity(2 * n as usize);
    for sheet in 0..2u32 {
        for d in g.darts() {
            sigma.push(g.sigma(d).0 + sheet * n);
            let other = if crosses(d) { 1 - sheet } else { sheet };
            iota.push(g.iota(d).0 + other * n);
        }
    }
    let cover = RibbonGraph::new(sigma, iota)?;
    let psi = (0..2 * n).map(|i| Dart(i % n + 1)).collect();
    CoveringMap::new(cover, g.clone(), psi)
}

/// A lifted word together with the cover dart whose edge it ends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lift {
    pub word: GroupoidWord,
    pub end: Dart,
}

/// Lifts `w` to the cover, starting on the edge of cover dart `start`, which
/// must lie over the start edge of `w`.
pub fn lift_word(map: &CoveringMap, w: &GroupoidWord, start: Dart) -> Result<Lift> {
    let (h, g) = (&map.cover, &map.base);
    h.check_dart(start)?;
    if g.edge_of(map.image(start)) != w.start() {
        return Err(Error::NotCovering(format!(
            "start dart {start} does not lie over edge {}",
            w.start()
        )));
    }
    let mut cur = start;
    let mut letters = Vec::with_capacity(w.len());
    for step in w.letters() {
        let d = step.dart;
        let lifted = match step.dir {
            Direction::In => {
                // the dart of the current edge lying over d
                [cur, h.iota(cur)]
                    .into_iter()
                    .find(|&x| map.image(x) == d)
                    .ok_or_else(|| Error::MalformedWord(format!("letter +{d} leaves the edge")))?
            }
            Direction::Out => {
                // turn at the current vertex the same way as downstairs
                let mut x = cur;
                let mut k = 0;
                while map.image(x) != d {
                    x = h.sigma(x);
                    k += 1;
                    if k == 3 {
                        return Err(Error::MalformedWord(format!(
                            "letter -{d} is not at the current vertex"
                        )));
                    }
                }
                x
            }
        };
        letters.push(HalfStep {
            dart: lifted,
            dir: step.dir,
        });
        cur = lifted;
    }
    let word = reduce(h, &letters, Some(start))?;
    Ok(Lift { word, end: cur })
}
