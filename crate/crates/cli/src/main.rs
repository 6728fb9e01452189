//! `flipcalc`: command-line access to ribbon graphs, flips, the edge groupoid,
//! the Farey-tree circle maps and the finite explorer.
//!
//! Graph arguments are document files (`.json` for the structured form), `-`
//! for standard input, or one of the named examples `example:dumbbell`,
//! `example:planar-theta`, `example:nonplanar-theta`.
//!
//! Exit codes: 0 on success, 1 when the library rejects the input, 2 on
//! usage errors (bad flags, unreadable files).

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use flipcalc::explorer::{
    cached_forms, certify_relations, classify_unicyclic, double_cover, enumerate_types,
    is_covering, isotropy_generators, lift_word, orbit, EnumerateOptions, MoveSet, OrbitOptions,
    TruncatedGraph, TypeCensus,
};
use flipcalc::farey::{
    flip_sequence_to_circle_map_with, question_mark_circle, question_mark_inv_circle, CircleDyadic,
    ExtRational, FareyDart, FlipMapOptions, Ppsl2Element, Psl2Mat,
};
use flipcalc::groupoid::parse_word;
use flipcalc::moves::{apply_move, parse_script, DoeKind, Move};
use flipcalc::ribbon::{
    examples, parse, parse_json, serialize, to_dot, to_json, validate_document,
};
use flipcalc::{Dart, MarkedGraph, RibbonGraph};

#[derive(Parser)]
#[command(
    name = "flipcalc",
    version,
    about = "Flip calculus on trivalent ribbon graphs"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Dot,
    Structured,
}

#[derive(Args, Clone, Copy)]
struct Budget {
    /// Stop after this many orbit nodes.
    #[arg(long)]
    budget_nodes: Option<usize>,
    /// Stop at this BFS depth.
    #[arg(long)]
    budget_depth: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document against every graph invariant.
    Validate { graph: String },
    /// Print (V, E, F, genus, punctures, rank).
    Invariants { graph: String },
    /// Flip the edge of a dart (repeatable with --times).
    Flip {
        graph: String,
        dart: u32,
        #[arg(long, default_value_t = 1)]
        times: usize,
    },
    /// Reverse the rotation at the vertex of a dart.
    Shuffle { graph: String, dart: u32 },
    /// Move the doe: `invert` or `rotate`.
    Doe { graph: String, kind: DoeArg },
    /// Apply a move script (one move per line).
    Apply { graph: String, script: String },
    /// Explore the orbit under a move set.
    Orbit {
        graph: String,
        #[arg(long, default_value = "flip,doe")]
        moves: MoveSet,
        #[command(flatten)]
        budget: Budget,
    },
    /// List all marked graphs with V vertices, grouped by (genus, punctures).
    Enumerate {
        vertices: usize,
        #[arg(long, default_value_t = EnumerateOptions::default().max_vertices)]
        max_vertices: usize,
    },
    /// Certify involution, order-4, commuting-square and pentagon relations.
    Relations { graph: String },
    /// Loops at the basepoint and the groupoid automorphisms they induce.
    Isotropy {
        graph: String,
        #[arg(long, default_value = "flip,doe")]
        moves: MoveSet,
        #[arg(long, default_value_t = 3)]
        budget_depth: usize,
    },
    /// Coverings of ribbon graphs.
    #[command(subcommand)]
    Cover(CoverCommand),
    /// Classify a rank-1 truncated graph (stubs allowed as `(d)` in sigma).
    Classify { graph: String },
    /// Farey-tree and PPSL2(Z) utilities.
    #[command(subcommand)]
    Farey(FareyCommand),
    /// Re-emit a graph in the selected format.
    Export { graph: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum DoeArg {
    Invert,
    Rotate,
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Check a dart map `psi` (images of cover darts 1, 2, ...).
    Check {
        cover: String,
        base: String,
        #[arg(long, value_delimiter = ',', required = true)]
        map: Vec<u32>,
    },
    /// Build the two-sheeted cover switching sheets along the given edges.
    Double {
        base: String,
        #[arg(long, value_delimiter = ',', required = true)]
        crossing: Vec<u32>,
        /// Lift this word, e.g. `[+3 -1 +2 -3]`.
        #[arg(long, requires = "start")]
        lift: Option<String>,
        /// Cover dart the lift starts on.
        #[arg(long)]
        start: Option<u32>,
    },
}

#[derive(Subcommand)]
enum FareyCommand {
    /// Evaluate an element (file or `-`) at a point of Q ∪ {inf}.
    Eval { element: String, x: String },
    /// Compose two elements: `first` after `second`.
    Compose { first: String, second: String },
    /// Minkowski's question-mark function on the circle.
    Qmark {
        x: String,
        #[arg(long)]
        inverse: bool,
    },
    /// Circle map of a flip sequence. Darts are S/U words (`SUU`, `I` for the
    /// doe) or matrices `[[a,b],[c,d]]`.
    Flipmap {
        darts: Vec<String>,
        #[arg(long, default_value_t = FlipMapOptions::default().max_patch)]
        max_patch: usize,
    },
}

/// A failure to report with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn read_input(src: &str) -> anyhow::Result<String> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(src).map_err(|e| usage(format!("{src}: {e}")))
}

fn load_graph(src: &str) -> anyhow::Result<MarkedGraph> {
    if let Some(name) = src.strip_prefix("example:") {
        let g = match name {
            "dumbbell" => examples::dumbbell(),
            "planar-theta" => examples::planar_theta(),
            "nonplanar-theta" => examples::nonplanar_theta(),
            _ => return Err(usage(format!("unknown example {name:?}"))),
        };
        return Ok(examples::marked(g, 1));
    }
    let text = read_input(src)?;
    let is_json = Path::new(src).extension().is_some_and(|e| e == "json")
        || text.trim_start().starts_with('{');
    let m = if is_json {
        parse_json(&text)
    } else {
        parse(&text)
    };
    m.with_context(|| format!("reading {src}"))
}

fn emit_graph(m: &MarkedGraph, format: Format) -> String {
    match format {
        Format::Text => serialize(m),
        Format::Dot => to_dot(m),
        Format::Structured => to_json(m) + "\n",
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn no_dot(format: Format, what: &str) -> anyhow::Result<()> {
    if format == Format::Dot {
        return Err(usage(format!("{what} has no DOT form")));
    }
    Ok(())
}

fn parse_point(s: &str) -> anyhow::Result<ExtRational> {
    s.parse()
        .map_err(|e: flipcalc::Error| usage(format!("bad point {s:?}: {e}")))
}

fn parse_farey_dart(s: &str) -> anyhow::Result<FareyDart> {
    if s.starts_with('[') {
        let m: Psl2Mat = s.parse()?;
        return Ok(FareyDart(m));
    }
    let mut g = Psl2Mat::IDENTITY;
    for c in s.chars() {
        g = match c {
            'S' | 's' => g.mul(&Psl2Mat::S),
            'U' | 'u' => g.mul(&Psl2Mat::U),
            'I' | 'i' => g,
            _ => return Err(usage(format!("bad generator {c:?} in {s:?}"))),
        };
    }
    Ok(FareyDart(g))
}

fn load_element(src: &str) -> anyhow::Result<Ppsl2Element> {
    Ok(Ppsl2Element::parse_text(&read_input(src)?)?)
}

fn census_text(c: &TypeCensus) -> String {
    let mut out = format!("V={} marked graphs: {}\n", c.vertices, c.total());
    for (&(g, n), forms) in &c.classes {
        let _ = writeln!(out, "  genus {g}, punctures {n}: {}", forms.len());
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let fmt = cli.format;
    Ok(match cli.command {
        Command::Validate { graph } => {
            let report = if graph.starts_with("example:") {
                load_graph(&graph)?.graph.validate()
            } else {
                validate_document(&read_input(&graph)?)?
            };
            no_dot(fmt, "a validation report")?;
            let ok = report.is_valid() && report.connected;
            let out = if fmt == Format::Structured {
                json(&report)
            } else if ok {
                "valid\n".to_string()
            } else {
                let mut s = String::new();
                for v in &report.violations {
                    let _ = writeln!(s, "violation: {v}");
                }
                if report.is_valid() {
                    s.push_str("violation: graph is not connected\n");
                }
                s
            };
            if !ok {
                print!("{out}");
                bail!(flipcalc::Error::InvalidGraph(
                    "document failed validation".into()
                ));
            }
            out
        }
        Command::Invariants { graph } => {
            let inv = load_graph(&graph)?.invariants()?;
            no_dot(fmt, "an invariants table")?;
            if fmt == Format::Structured {
                json(&inv)
            } else {
                format!(
                    "V E F genus punctures rank\n{} {} {} {} {} {}\n",
                    inv.vertices, inv.edges, inv.faces, inv.genus, inv.punctures, inv.rank
                )
            }
        }
        Command::Flip { graph, dart, times } => {
            let mut m = load_graph(&graph)?;
            for _ in 0..times {
                m = apply_move(&m, Move::Flip(Dart(dart)))?;
            }
            emit_graph(&m, fmt)
        }
        Command::Shuffle { graph, dart } => emit_graph(
            &apply_move(&load_graph(&graph)?, Move::Shuffle(Dart(dart)))?,
            fmt,
        ),
        Command::Doe { graph, kind } => {
            let kind = match kind {
                DoeArg::Invert => DoeKind::Invert,
                DoeArg::Rotate => DoeKind::Rotate,
            };
            emit_graph(&apply_move(&load_graph(&graph)?, Move::Doe(kind))?, fmt)
        }
        Command::Apply { graph, script } => {
            let m = load_graph(&graph)?;
            let s = parse_script(&read_input(&script)?)?;
            emit_graph(&flipcalc::moves::apply_sequence(&m, &s)?, fmt)
        }
        Command::Orbit {
            graph,
            moves,
            budget,
        } => {
            let m = load_graph(&graph)?;
            let opts = OrbitOptions {
                max_nodes: budget.budget_nodes,
                max_depth: budget.budget_depth,
            };
            let o = orbit(&m, moves, opts)?;
            match fmt {
                Format::Structured => json(&o),
                Format::Dot => {
                    let mut s = String::from("digraph orbit {\n");
                    for (i, n) in o.nodes.iter().enumerate() {
                        let _ = writeln!(s, "  n{i} [label=\"{i} (depth {})\"];", n.depth);
                    }
                    for a in &o.arcs {
                        let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", a.from, a.to, a.mv);
                    }
                    s + "}\n"
                }
                Format::Text => {
                    let mut s = format!(
                        "moves {}\nnodes {}\narcs {}\n",
                        o.moves,
                        o.nodes.len(),
                        o.arcs.len()
                    );
                    if o.complete {
                        s.push_str("complete\n");
                    } else {
                        let _ = writeln!(s, "partial: budget exhausted, frontier {}", o.frontier);
                    }
                    s
                }
            }
        }
        Command::Enumerate {
            vertices,
            max_vertices,
        } => {
            no_dot(fmt, "an enumeration")?;
            let opts = EnumerateOptions { max_vertices };
            // warm the on-disk memo when one is configured
            cached_forms(vertices, opts)?;
            let census = enumerate_types(vertices, opts)?;
            match fmt {
                Format::Structured => json(&census.to_classes()),
                _ => census_text(&census),
            }
        }
        Command::Relations { graph } => {
            no_dot(fmt, "a relation report")?;
            let rep = certify_relations(&load_graph(&graph)?)?;
            if fmt == Format::Structured {
                json(&rep)
            } else {
                let mut s = String::new();
                for d in &rep.skipped_loops {
                    let _ = writeln!(s, "skipped loop edge {d}");
                }
                for c in &rep.involution {
                    let _ = writeln!(s, "involution at {}: {}", c.dart, verdict(c.holds));
                }
                for c in &rep.order4 {
                    let _ = writeln!(s, "order 4 at {}: {}", c.dart, verdict(c.holds));
                }
                for c in &rep.commuting_squares {
                    let _ = writeln!(s, "square {} {}: {}", c.first, c.second, verdict(c.holds));
                }
                for w in &rep.pentagons {
                    let flips: Vec<String> = w.flips.iter().map(|d| d.to_string()).collect();
                    let inner = match w.inner {
                        Some(true) => "inner",
                        Some(false) => "outer",
                        None => "unclosed",
                    };
                    let _ = writeln!(s, "pentagon {} ({inner})", flips.join(" "));
                }
                let _ = writeln!(s, "all relations hold: {}", rep.all_hold());
                s
            }
        }
        Command::Isotropy {
            graph,
            moves,
            budget_depth,
        } => {
            no_dot(fmt, "an isotropy report")?;
            let gens = isotropy_generators(&load_graph(&graph)?, budget_depth, moves)?;
            if fmt == Format::Structured {
                json(&gens)
            } else {
                let mut s = String::new();
                for g in &gens {
                    let loop_text: Vec<String> = g.moves.iter().map(|m| m.to_string()).collect();
                    let kind = if g.is_identity {
                        "identity"
                    } else if g.is_inner {
                        "inner"
                    } else {
                        "nontrivial"
                    };
                    let _ = writeln!(s, "{kind}: [{}]", loop_text.join(", "));
                }
                s
            }
        }
        Command::Cover(c) => {
            no_dot(fmt, "a covering report")?;
            cover(c, fmt)?
        }
        Command::Classify { graph } => {
            no_dot(fmt, "a classification")?;
            let g = TruncatedGraph::parse(&read_input(&graph)?)?;
            let class = classify_unicyclic(&g)?;
            if fmt == Format::Structured {
                json(&serde_json::json!({ "class": class, "cycle": g.cycle()? }))
            } else {
                format!("{class}\n")
            }
        }
        Command::Farey(f) => {
            no_dot(fmt, "a Farey result")?;
            farey(f, fmt)?
        }
        Command::Export { graph } => emit_graph(&load_graph(&graph)?, fmt),
    })
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "FAILS"
    }
}

fn cover(c: CoverCommand, fmt: Format) -> anyhow::Result<String> {
    match c {
        CoverCommand::Check { cover, base, map } => {
            let h = load_graph(&cover)?.graph;
            let g = load_graph(&base)?.graph;
            let psi: Vec<Dart> = map.into_iter().map(Dart).collect();
            let check = is_covering(&psi, &h, &g);
            let out = if fmt == Format::Structured {
                json(&check)
            } else if check.covering {
                format!("covering of degree {}\n", check.degree)
            } else {
                format!(
                    "not a covering: {}\n",
                    check.failure.clone().unwrap_or_default()
                )
            };
            if !check.covering {
                print!("{out}");
                bail!(flipcalc::Error::NotCovering(
                    check.failure.unwrap_or_default()
                ));
            }
            Ok(out)
        }
        CoverCommand::Double {
            base,
            crossing,
            lift,
            start,
        } => {
            let g: RibbonGraph = load_graph(&base)?.graph;
            let crossing: Vec<Dart> = crossing.into_iter().map(Dart).collect();
            let map = double_cover(&g, &crossing)?;
            let cover_doc = MarkedGraph {
                graph: map.cover.clone(),
                doe: Dart(1),
            };
            let lifted = match (lift, start) {
                (Some(w), Some(s)) => {
                    let word = parse_word(&w)?.resolve(&g)?;
                    Some(lift_word(&map, &word, Dart(s))?)
                }
                _ => None,
            };
            let rank = map.cover.invariants()?.rank;
            if fmt == Format::Structured {
                return Ok(json(&serde_json::json!({
                    "cover": flipcalc::ribbon::GraphDocument::from(&cover_doc),
                    "psi": map.psi,
                    "degree": map.degree,
                    "rank": rank,
                    "lift": lifted,
                })));
            }
            let mut s = serialize(&cover_doc);
            let psi: Vec<String> = map.psi.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "# psi {}", psi.join(","));
            let _ = writeln!(s, "# degree {} rank {rank}", map.degree);
            if let Some(l) = lifted {
                let _ = writeln!(s, "# lift {} ends on dart {}", l.word, l.end);
            }
            Ok(s)
        }
    }
}

fn farey(f: FareyCommand, fmt: Format) -> anyhow::Result<String> {
    let structured = fmt == Format::Structured;
    match f {
        FareyCommand::Eval { element, x } => {
            let e = load_element(&element)?;
            let y = e.eval(parse_point(&x)?);
            Ok(if structured {
                json(&y.to_string())
            } else {
                format!("{y}\n")
            })
        }
        FareyCommand::Compose { first, second } => {
            let e = load_element(&first)?.compose(&load_element(&second)?);
            Ok(if structured { json(&e) } else { e.to_text() })
        }
        FareyCommand::Qmark { x, inverse } => {
            let out = if inverse {
                let y: CircleDyadic = x
                    .parse()
                    .map_err(|e: flipcalc::Error| usage(format!("bad dyadic {x:?}: {e}")))?;
                question_mark_inv_circle(&y)?.to_string()
            } else {
                question_mark_circle(parse_point(&x)?)?.to_string()
            };
            Ok(if structured { json(&out) } else { out + "\n" })
        }
        FareyCommand::Flipmap { darts, max_patch } => {
            let targets = darts
                .iter()
                .map(|d| parse_farey_dart(d))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let e = flip_sequence_to_circle_map_with(&targets, FlipMapOptions { max_patch })?;
            Ok(if structured { json(&e) } else { e.to_text() })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else if e
                .chain()
                .any(|c| c.downcast_ref::<flipcalc::Error>().is_some())
            {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
