//! Line-oriented text formats.
//!
//! Instances (`.bhg`):
//!
//! ```text
//! # comment
//! v a            declare vertices
//! e 1: p q       E-set with label 1
//! f p -p         F-set, default label
//! ```
//!
//! Proofs (`.prf`), one resolution step per line, `ID: CONCLUSION <- PREMISES / PIVOT`:
//!
//! ```text
//! mode: E-over-F
//! 7: p -q <- 2, 3 / C
//! 11: {} <- 9, 10 / B
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::encodings::{CnfFormula, ColoringInstance, Graph, Literal, Palette, SdrInstance};
use crate::graph::{Bihypergraph, BihypergraphBuilder, Side};
use crate::resolution::{ClauseRef, Mode, Refutation, ResolutionStep};
use crate::set::VertexSet;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

type ParseResult<T> = std::result::Result<T, ParseError>;

fn err<T>(line: usize, message: impl Into<String>) -> ParseResult<T> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-blank lines with comments stripped, numbered from 1.
fn content_lines<'a>(
    text: &'a str,
    comment: &'a [char],
) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines().enumerate().filter_map(move |(i, raw)| {
        let line = match raw.find(comment) {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn set_tokens(s: &str) -> Vec<&str> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .map(|t| t.trim_matches(|c| c == '{' || c == '}'))
        .filter(|t| !t.is_empty())
        .collect()
}

pub fn parse_bhg(text: &str) -> ParseResult<Bihypergraph> {
    let mut b = BihypergraphBuilder::new();
    for (line, content) in content_lines(text, &['#']) {
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let side = match keyword {
            "v" => {
                let names = set_tokens(rest);
                if names.is_empty() {
                    return err(line, "`v` needs a vertex name");
                }
                for name in names {
                    b.declare(name).or_else(|e| err(line, e.to_string()))?;
                }
                continue;
            }
            "e" => Side::E,
            "f" => Side::F,
            other => return err(line, format!("unknown directive `{other}`")),
        };
        let (label, names) = match rest.split_once(':') {
            Some((label, names)) => {
                let label = label.trim();
                if label.is_empty() || label.contains(char::is_whitespace) {
                    return err(line, format!("malformed label `{label}`"));
                }
                (Some(label.to_string()), names)
            }
            None => (None, rest),
        };
        b.add_set(side, label, set_tokens(names))
            .or_else(|e| err(line, e.to_string()))?;
    }
    b.build().or_else(|e| err(0, e.to_string()))
}

pub fn print_bhg(b: &Bihypergraph) -> String {
    let mut out = String::new();
    for name in b.names() {
        writeln!(out, "v {name}").unwrap();
    }
    for (side, keyword) in [(Side::E, "e"), (Side::F, "f")] {
        for (label, set) in b.family(side).iter() {
            writeln!(out, "{keyword} {label}: {}", names_of(b, set)).unwrap();
        }
    }
    out
}

fn names_of(b: &Bihypergraph, set: &VertexSet) -> String {
    if set.is_empty() {
        return "{}".to_string();
    }
    set.iter().map(|v| b.name(v)).collect::<Vec<_>>().join(" ")
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    let s = s.trim();
    match s {
        "E-over-F" | "ef" => Some(Mode::EOverF),
        "F-over-E" | "fe" => Some(Mode::FOverE),
        _ => {
            let depth = s.strip_prefix("alternating")?.trim();
            depth
                .parse()
                .ok()
                .filter(|&n: &u32| n >= 1)
                .map(Mode::Alternating)
        }
    }
}

/// Parses a proof and resolves its names and references against `b`.
pub fn parse_proof(text: &str, b: &Bihypergraph) -> ParseResult<Refutation> {
    let mut mode = None;
    let mut steps: Vec<ResolutionStep> = Vec::new();
    let mut step_ids: HashMap<String, usize> = HashMap::new();
    for (line, content) in content_lines(text, &['#']) {
        if let Some(m) = content.strip_prefix("mode:") {
            if mode.is_some() || !steps.is_empty() {
                return err(line, "the mode header must come first and appear once");
            }
            mode = Some(parse_mode(m).ok_or(ParseError {
                line,
                message: format!("unknown mode `{}`", m.trim()),
            })?);
            continue;
        }
        if mode.is_none() {
            return err(line, "missing `mode:` header");
        }
        let Some((head, tail)) = content.split_once("<-") else {
            return err(line, "expected `ID: CONCLUSION <- PREMISES / PIVOT`");
        };
        let Some((id, conclusion)) = head.split_once(':') else {
            return err(line, "missing `:` after the step id");
        };
        let id = id.trim();
        if id.is_empty() || id.contains(char::is_whitespace) {
            return err(line, format!("malformed step id `{id}`"));
        }
        if step_ids.contains_key(id) {
            return err(line, format!("duplicate step id `{id}`"));
        }
        if b.e().position(id).is_some() || b.f().position(id).is_some() {
            return err(
                line,
                format!("step id `{id}` clashes with an instance label"),
            );
        }
        let conclusion = b
            .set_of(set_tokens(conclusion))
            .or_else(|e| err(line, e.to_string()))?;
        let Some((premises, pivot)) = tail.rsplit_once('/') else {
            return err(line, "missing `/ PIVOT`");
        };
        let resolve = |name: &str| -> ParseResult<ClauseRef> {
            if let Some(&k) = step_ids.get(name) {
                return Ok(ClauseRef::Step(k));
            }
            match (b.e().position(name), b.f().position(name)) {
                (Some(i), None) => Ok(ClauseRef::Input(Side::E, i)),
                (None, Some(i)) => Ok(ClauseRef::Input(Side::F, i)),
                (Some(_), Some(_)) => {
                    err(line, format!("label `{name}` is ambiguous between E and F"))
                }
                (None, None) => err(
                    line,
                    format!("unknown reference `{name}` (references must point backwards)"),
                ),
            }
        };
        let premises = set_tokens(premises)
            .into_iter()
            .map(resolve)
            .collect::<ParseResult<Vec<_>>>()?;
        let pivot_names = set_tokens(pivot);
        let [pivot_name] = pivot_names.as_slice() else {
            return err(line, "expected exactly one pivot reference");
        };
        let pivot = resolve(pivot_name)?;
        step_ids.insert(id.to_string(), steps.len());
        steps.push(ResolutionStep {
            id: id.to_string(),
            conclusion,
            premises,
            pivot,
            pairing: None,
        });
    }
    let Some(mode) = mode else {
        return err(0, "missing `mode:` header");
    };
    Ok(Refutation { mode, steps })
}

pub fn print_proof(b: &Bihypergraph, r: &Refutation) -> String {
    let mut out = format!("mode: {}\n", r.mode);
    for step in &r.steps {
        let premises: Vec<&str> = step.premises.iter().map(|&p| r.ref_name(b, p)).collect();
        writeln!(
            out,
            "{}: {} <- {} / {}",
            step.id,
            names_of(b, &step.conclusion),
            premises.join(", "),
            r.ref_name(b, step.pivot)
        )
        .unwrap();
    }
    out
}

/// DIMACS CNF. Variable `k` is named `k`; its negative literal becomes `-k` once encoded.
pub fn parse_dimacs(text: &str) -> ParseResult<CnfFormula> {
    let mut declared: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut max_var = 0usize;
    let mut last_line = 0;
    for (line, content) in content_lines(text, &[]) {
        last_line = line;
        if content.starts_with('c') {
            continue;
        }
        if content.starts_with('%') {
            break;
        }
        if let Some(header) = content.strip_prefix('p') {
            let fields: Vec<&str> = header.split_whitespace().collect();
            match fields.as_slice() {
                ["cnf", v, c] => match (v.parse(), c.parse()) {
                    (Ok(v), Ok(c))
                        if declared.is_none() && clauses.is_empty() && current.is_empty() =>
                    {
                        declared = Some((v, c))
                    }
                    _ => return err(line, "malformed or misplaced `p cnf` header"),
                },
                _ => return err(line, "expected `p cnf VARIABLES CLAUSES`"),
            }
            continue;
        }
        for tok in content.split_whitespace() {
            let Ok(lit) = tok.parse::<i64>() else {
                return err(line, format!("`{tok}` is not an integer literal"));
            };
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if let Some((v, _)) = declared {
                if var > v {
                    return err(line, format!("variable {var} exceeds the declared {v}"));
                }
            }
            if var > u32::MAX as usize {
                return err(line, format!("variable {var} too large"));
            }
            max_var = max_var.max(var);
            let var = (var - 1) as u32;
            current.push(if lit > 0 {
                Literal::pos(var)
            } else {
                Literal::neg(var)
            });
        }
    }
    if !current.is_empty() {
        return err(last_line, "last clause is not terminated by 0");
    }
    let n = declared.map_or(max_var, |(v, _)| v);
    CnfFormula::new((1..=n).map(|k| k.to_string()).collect(), clauses)
        .or_else(|e| err(0, e.to_string()))
}

pub fn print_dimacs(c: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", c.variable_count(), c.clauses().len());
    for clause in c.clauses() {
        for l in clause {
            let v = l.var as i64 + 1;
            write!(out, "{} ", if l.positive { v } else { -v }).unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Graph coloring input: `vertex NAME`, `edge A B`, then either `colors N`
/// or one `list NAME COLOR+` per vertex.
pub fn parse_graph(text: &str) -> ParseResult<ColoringInstance> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();
    let mut colors: Option<usize> = None;
    let mut lists: HashMap<usize, Vec<String>> = HashMap::new();
    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *index.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };
    for (line, content) in content_lines(text, &['#']) {
        let toks: Vec<&str> = content.split_whitespace().collect();
        match toks.as_slice() {
            ["vertex", rest @ ..] if !rest.is_empty() => {
                for name in rest {
                    intern(name, &mut names);
                }
            }
            ["edge", a, c] => {
                if a == c {
                    return err(line, format!("self-loop on `{a}`"));
                }
                let (a, c) = (intern(a, &mut names), intern(c, &mut names));
                edges.push((a, c));
            }
            ["colors", n] => {
                let Ok(n) = n.parse::<usize>() else {
                    return err(line, format!("`{n}` is not a count"));
                };
                if n == 0 || colors.is_some() {
                    return err(line, "`colors` needs a positive count and may appear once");
                }
                colors = Some(n);
            }
            ["list", v, cs @ ..] => {
                let v = intern(v, &mut names);
                if lists
                    .insert(v, cs.iter().map(|c| c.to_string()).collect())
                    .is_some()
                {
                    return err(line, "duplicate list for a vertex");
                }
            }
            _ => return err(line, format!("unrecognized line `{content}`")),
        }
    }
    let palette = match (colors, lists.is_empty()) {
        (Some(n), true) => Palette::Uniform(n),
        (None, false) => Palette::Lists(
            (0..names.len())
                .map(|v| lists.remove(&v).unwrap_or_default())
                .collect(),
        ),
        (Some(_), false) => return err(0, "`colors` and `list` cannot be mixed"),
        (None, true) => return err(0, "missing `colors N` or `list` lines"),
    };
    let graph = Graph::new(names, edges).or_else(|e| err(0, e.to_string()))?;
    Ok(ColoringInstance { graph, palette })
}

/// SDR input: one `set INDEX: ELEM+` per line.
pub fn parse_sdr(text: &str) -> ParseResult<SdrInstance> {
    let mut indices: Vec<String> = Vec::new();
    let mut sets = Vec::new();
    for (line, content) in content_lines(text, &['#']) {
        let Some(rest) = content.strip_prefix("set") else {
            return err(line, "expected `set INDEX: ELEM+`");
        };
        let Some((index, elems)) = rest.split_once(':') else {
            return err(line, "missing `:` after the index");
        };
        let index = index.trim();
        if index.is_empty() || index.contains(char::is_whitespace) {
            return err(line, format!("malformed index `{index}`"));
        }
        if indices.iter().any(|i| i == index) {
            return err(line, format!("duplicate index `{index}`"));
        }
        indices.push(index.to_string());
        sets.push(set_tokens(elems).into_iter().map(str::to_string).collect());
    }
    Ok(SdrInstance { indices, sets })
}
