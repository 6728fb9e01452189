//! Text, structured (JSON) and DOT forms of marked graphs.
//!
//! ```text
//! darts 6
//! sigma (1 2 3)(4 5 6)
//! iota (1 2)(4 5)(3 6)
//! doe 1
//! ```
//!
//! Cycle lists may continue on following lines that start with `(`. Blank
//! lines and `#` comments are ignored. A missing `doe` line means dart 1.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{cycles_of, permutation_from_cycles, Dart, MarkedGraph, RibbonGraph};
use crate::error::{Error, Result};

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_cycles(text: &str, line: usize) -> Result<Vec<Vec<u32>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(parse_err(line, format!("expected '(' at {rest:?}")));
        };
        let close = body
            .find(')')
            .ok_or_else(|| parse_err(line, "unclosed cycle"))?;
        let cycle = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| parse_err(line, format!("bad dart id {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if cycle.is_empty() {
            return Err(parse_err(line, "empty cycle"));
        }
        cycles.push(cycle);
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}

#[derive(Default)]
pub(crate) struct Field {
    pub line: usize,
    pub cycles: Vec<Vec<u32>>,
}

/// A document split into fields, before any cycle-shape checks.
pub(crate) struct RawDocument {
    pub darts: usize,
    pub sigma: Field,
    pub iota: Field,
    pub doe: u32,
}

pub fn parse(text: &str) -> Result<MarkedGraph> {
    let raw = parse_raw(text)?;
    build(raw.darts, &raw.sigma, &raw.iota, raw.doe)
}

/// Reads a document without enforcing the graph invariants and reports
/// every violated one. Malformed syntax is still an error.
pub fn validate_document(text: &str) -> Result<super::ValidationReport> {
    let raw = parse_raw(text)?;
    let s = permutation_from_cycles(raw.darts, raw.sigma.cycles)
        .map_err(|m| parse_err(raw.sigma.line, format!("sigma: {m}")))?;
    let i = permutation_from_cycles(raw.darts, raw.iota.cycles)
        .map_err(|m| parse_err(raw.iota.line, format!("iota: {m}")))?;
    Ok(super::validate(&s, &i))
}

pub(crate) fn parse_raw(text: &str) -> Result<RawDocument> {
    let mut darts: Option<(usize, usize)> = None;
    let mut sigma: Option<Field> = None;
    let mut iota: Option<Field> = None;
    let mut doe: Option<(usize, u32)> = None;
    let mut current: Option<&'static str> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('(') {
            let field = match current {
                Some("sigma") => sigma.as_mut(),
                Some("iota") => iota.as_mut(),
                _ => None,
            }
            .ok_or_else(|| parse_err(line, "cycle list outside a sigma/iota field"))?;
            field.cycles.extend(parse_cycles(content, line)?);
            continue;
        }
        let (key, value) = content
            .split_once(char::is_whitespace)
            .map(|(k, v)| (k, v.trim()))
            .unwrap_or((content, ""));
        match key {
            "darts" => {
                let n = value
                    .parse::<usize>()
                    .map_err(|_| parse_err(line, format!("bad dart count {value:?}")))?;
                darts = Some((line, n));
                current = None;
            }
            "sigma" => {
                sigma = Some(Field {
                    line,
                    cycles: parse_cycles(value, line)?,
                });
                current = Some("sigma");
            }
            "iota" => {
                iota = Some(Field {
                    line,
                    cycles: parse_cycles(value, line)?,
                });
                current = Some("iota");
            }
            "doe" => {
                let k = value
                    .parse::<u32>()
                    .map_err(|_| parse_err(line, format!("bad doe {value:?}")))?;
                doe = Some((line, k));
                current = None;
            }
            other => return Err(parse_err(line, format!("unknown field {other:?}"))),
        }
    }

    let (dline, n) = darts.ok_or_else(|| parse_err(1, "missing 'darts N' header"))?;
    if n == 0 {
        return Err(parse_err(dline, "graph must be nonempty"));
    }
    let sigma = sigma.ok_or_else(|| parse_err(dline, "missing sigma field"))?;
    let iota = iota.ok_or_else(|| parse_err(dline, "missing iota field"))?;
    Ok(RawDocument {
        darts: n,
        sigma,
        iota,
        doe: doe.map(|(_, k)| k).unwrap_or(1),
    })
}

fn build(n: usize, sigma: &Field, iota: &Field, doe: u32) -> Result<MarkedGraph> {
    for (field, name, size) in [(sigma, "sigma", 3), (iota, "iota", 2)] {
        if let Some(c) = field.cycles.iter().find(|c| c.len() != size) {
            return Err(parse_err(
                field.line,
                format!(
                    "{name}: cycle {c:?} has length {}, expected {size}",
                    c.len()
                ),
            ));
        }
    }
    let s = permutation_from_cycles(n, sigma.cycles.iter().cloned())
        .map_err(|m| parse_err(sigma.line, format!("sigma: {m}")))?;
    let i = permutation_from_cycles(n, iota.cycles.iter().cloned())
        .map_err(|m| parse_err(iota.line, format!("iota: {m}")))?;
    let graph = RibbonGraph::new(s, i)?;
    MarkedGraph::new(graph, Dart(doe))
}

fn write_cycles(out: &mut String, cycles: &[Vec<u32>]) {
    for c in cycles {
        out.push('(');
        for (k, d) in c.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{d}");
        }
        out.push(')');
    }
}

/// Canonical text: cycles start at, and are sorted by, their minimal dart.
pub fn serialize(m: &MarkedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "darts {}", m.graph.dart_count());
    out.push_str("sigma ");
    write_cycles(&mut out, &m.graph.sigma_cycles());
    out.push_str("\niota ");
    write_cycles(&mut out, &m.graph.iota_cycles());
    let _ = writeln!(out, "\ndoe {}", m.doe);
    out
}

/// Structured form of the document format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub darts: usize,
    pub sigma: Vec<Vec<u32>>,
    pub iota: Vec<Vec<u32>>,
    #[serde(default)]
    pub doe: Option<u32>,
}

impl From<&MarkedGraph> for GraphDocument {
    fn from(m: &MarkedGraph) -> Self {
        GraphDocument {
            darts: m.graph.dart_count(),
            sigma: cycles_of(m.graph.sigma_images()),
            iota: cycles_of(m.graph.iota_images()),
            doe: Some(m.doe.0),
        }
    }
}

impl GraphDocument {
    pub fn to_marked(&self) -> Result<MarkedGraph> {
        if self.darts == 0 {
            return Err(parse_err(0, "graph must be nonempty"));
        }
        let sigma = Field {
            line: 0,
            cycles: self.sigma.clone(),
        };
        let iota = Field {
            line: 0,
            cycles: self.iota.clone(),
        };
        build(self.darts, &sigma, &iota, self.doe.unwrap_or(1))
    }
}

pub fn to_json(m: &MarkedGraph) -> String {
    serde_json_string(&GraphDocument::from(m))
}

pub fn parse_json(text: &str) -> Result<MarkedGraph> {
    let doc: GraphDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    doc.to_marked()
}

fn serde_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// DOT rendering: one node per vertex, edges labelled by their minimal dart,
/// the doe edge drawn with an arrowhead pointing away from the doe's vertex.
pub fn to_dot(m: &MarkedGraph) -> String {
    let g = &m.graph;
    let mut out = String::from("graph ribbon {\n");
    for [a, b, c] in g.vertices() {
        let _ = writeln!(out, "  v{a} [label=\"({a} {b} {c})\"];");
    }
    let doe_edge = g.edge_of(m.doe);
    for [a, b] in g.edges() {
        let (va, vb) = (g.vertex_of(a), g.vertex_of(b));
        if a == doe_edge {
            let (tail, head) = if m.doe == a { (va, vb) } else { (vb, va) };
            let _ = writeln!(
                out,
                "  v{tail} -- v{head} [label=\"{a}\", dir=forward, arrowhead=normal];"
            );
        } else {
            let _ = writeln!(out, "  v{va} -- v{vb} [label=\"{a}\"];");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::examples::*;

    const DUMBBELL: &str = "darts 6\nsigma (1 2 3)(4 5 6)\niota (1 2)(3 6)(4 5)\ndoe 1\n";

    #[test]
    fn dumbbell_document() {
        let m = parse(DUMBBELL).unwrap();
        let i = m.invariants().unwrap();
        assert_eq!(
            (i.vertices, i.edges, i.faces, i.genus, i.punctures, i.rank),
            (2, 3, 3, 0, 3, 2)
        );
        assert_eq!(serialize(&m), DUMBBELL);
    }

    #[test]
    fn multiline_cycles_and_comments() {
        let text = "# dumbbell\ndarts 6\nsigma\n  (1 2 3)\n  (4 5 6)\niota (1 2)\n (4 5)(3 6)\n";
        let m = parse(text).unwrap();
        assert_eq!(m.graph, dumbbell());
        assert_eq!(m.doe, Dart(1));
    }

    #[test]
    fn rejections() {
        assert_eq!(
            parse("darts 0\nsigma\niota\n"),
            Err(Error::Parse {
                line: 1,
                message: "graph must be nonempty".into()
            })
        );
        assert_eq!(
            parse("darts 6\nsigma (1 2 3)(4 5 6)\niota (1 2)(4 5)(3 6)\ndoe 9\n"),
            Err(Error::DoeNotADart(9))
        );
        let e = parse("darts 6\nsigma (1 2 3)(3 5 6)\niota (1 2)(4 5)(3 6)\n").unwrap_err();
        assert!(
            matches!(e, Error::Parse { line: 2, ref message } if message.contains("bijection"))
        );
        let e = parse("darts 6\nsigma (1 2)(3 4 5 6)\niota (1 2)(4 5)(3 6)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse("darts 6\nsigma (1 2 3)(4 5 6)\niota (1 2 4)(5 3 6)\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn json_and_dot() {
        let m = marked(dumbbell(), 3);
        assert_eq!(parse_json(&to_json(&m)).unwrap(), m);
        let dot = to_dot(&m);
        assert!(dot.contains("v1 -- v4 [label=\"3\", dir=forward"));
        assert_eq!(dot.matches(" -- ").count(), 3);
    }
}
