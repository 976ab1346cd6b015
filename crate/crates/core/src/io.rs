//! Text formats: the graph file and the CSV outputs of the analysis tools.
//!
//! A graph file is line oriented:
//!
//! ```text
//! spa-graph 1 n=3 p=0x1p-1 a1=0x1p+0 a2=0x1.4p+3 m=2 norm=linf seed=7 mode=fast
//! V 1 0x1.8p-2 0x1.2p-3
//! V 2 ...
//! E 2 1
//! ```
//!
//! Real numbers are written as lowercase hexadecimal floats so that a
//! round trip is bit-exact. Edges appear in creation order; the creation
//! time of an edge is its source.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Result, SpaError};
use crate::geometry::NormKind;
use crate::graph::{Edge, SpaGraph};
use crate::model::{GenerationMode, ModelParams};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "spa-graph";

/// Formats `x` like C's `%a`: `0x1.8p-2`, `-0x1p+0`, `0x0p+0`.
pub fn format_hex_f64(x: f64) -> String {
    let mut s = String::new();
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_sign_negative() {
        s.push('-');
    }
    if x.is_infinite() {
        s.push_str("inf");
        return s;
    }
    let bits = x.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i32;
    let mant = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 && mant == 0 {
        s.push_str("0x0p+0");
        return s;
    }
    let (lead, exp) = if exp_bits == 0 { (0, -1022) } else { (1, exp_bits - 1023) };
    let _ = write!(s, "0x{lead}");
    if mant != 0 {
        let digits = format!("{mant:013x}");
        let _ = write!(s, ".{}", digits.trim_end_matches('0'));
    }
    let _ = write!(s, "p{}{}", if exp >= 0 { "+" } else { "-" }, exp.abs());
    s
}

/// Parses a hexadecimal float. Only values representable exactly in an
/// `f64` (at most 53 significant bits) are accepted.
pub fn parse_hex_f64(s: &str) -> Option<f64> {
    let (neg, rest) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let rest = rest.strip_prefix("0x").or_else(|| rest.strip_prefix("0X"))?;
    let (mantissa, exp) = rest.split_once(['p', 'P'])?;
    let exp: i32 = exp.parse().ok()?;
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let mut m: u64 = 0;
    for c in int.chars().chain(frac.chars()) {
        let d = c.to_digit(16)? as u64;
        if m >> 56 != 0 {
            return None;
        }
        m = (m << 4) | d;
    }
    if m >> 53 != 0 {
        return None;
    }
    let mut e = exp.checked_sub(4 * frac.len() as i32)?;
    let mut v = m as f64;
    // Two-stage scaling so an exponent below -1022 does not underflow early.
    while e != 0 {
        let step = e.clamp(-1000, 1000);
        v *= 2f64.powi(step);
        e -= step;
    }
    if m != 0 && (v == 0.0 || v.is_infinite()) {
        return None;
    }
    Some(if neg { -v } else { v })
}

/// Header of a graph file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphFileHeader {
    pub version: u32,
    pub n: usize,
    pub params: ModelParams,
    pub mode: GenerationMode,
}

impl GraphFileHeader {
    fn to_line(&self) -> String {
        let p = &self.params;
        format!(
            "{MAGIC} {} n={} p={} a1={} a2={} m={} norm={} seed={} mode={}",
            self.version,
            self.n,
            format_hex_f64(p.p),
            format_hex_f64(p.a1),
            format_hex_f64(p.a2),
            p.dim,
            p.norm,
            p.seed,
            self.mode
        )
    }

    fn parse(line: &str) -> Result<Self> {
        let err = |message: String| SpaError::Parse { line: 1, message };
        let mut tokens = line.split_whitespace();
        if tokens.next() != Some(MAGIC) {
            return Err(err(format!("missing `{MAGIC}` header")));
        }
        let version: u32 = tokens
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| err("missing format version".into()))?;
        if version != FORMAT_VERSION {
            return Err(err(format!("unknown format version {version}")));
        }
        let (mut n, mut p, mut a1, mut a2, mut m, mut norm, mut seed, mut mode) =
            (None, None, None, None, None, None, None, None);
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| err(format!("malformed header field `{tok}`")))?;
            let bad = || err(format!("bad value for `{key}`: `{value}`"));
            match key {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad())?),
                "p" => p = Some(parse_hex_f64(value).ok_or_else(bad)?),
                "a1" => a1 = Some(parse_hex_f64(value).ok_or_else(bad)?),
                "a2" => a2 = Some(parse_hex_f64(value).ok_or_else(bad)?),
                "m" => m = Some(value.parse::<usize>().map_err(|_| bad())?),
                "norm" => norm = Some(value.parse::<NormKind>().map_err(|_| bad())?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad())?),
                "mode" => mode = Some(value.parse::<GenerationMode>().map_err(|_| bad())?),
                _ => return Err(err(format!("unknown header field `{key}`"))),
            }
        }
        let missing = |k: &str| err(format!("header field `{k}` missing"));
        let params = ModelParams {
            p: p.ok_or_else(|| missing("p"))?,
            a1: a1.ok_or_else(|| missing("a1"))?,
            a2: a2.ok_or_else(|| missing("a2"))?,
            dim: m.ok_or_else(|| missing("m"))?,
            norm: norm.ok_or_else(|| missing("norm"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
        };
        params.validate().map_err(|e| err(e.to_string()))?;
        Ok(GraphFileHeader {
            version,
            n: n.ok_or_else(|| missing("n"))?,
            params,
            mode: mode.ok_or_else(|| missing("mode"))?,
        })
    }
}

/// Writes `graph` with its generating parameters.
pub fn write_graph<W: Write>(
    graph: &SpaGraph,
    params: &ModelParams,
    mode: GenerationMode,
    sink: W,
) -> Result<()> {
    if graph.dim() != params.dim {
        return Err(SpaError::DimensionMismatch {
            left: graph.dim(),
            right: params.dim,
        });
    }
    let mut w = BufWriter::new(sink);
    let header = GraphFileHeader {
        version: FORMAT_VERSION,
        n: graph.n(),
        params: *params,
        mode,
    };
    writeln!(w, "{}", header.to_line())?;
    let mut line = String::new();
    for v in 1..=graph.n() {
        line.clear();
        let _ = write!(line, "V {v}");
        for &c in graph.position(v) {
            let _ = write!(line, " {}", format_hex_f64(c));
        }
        writeln!(w, "{line}")?;
    }
    for e in graph.edges() {
        writeln!(w, "E {} {}", e.src, e.dst)?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed graph file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub header: GraphFileHeader,
    pub graph: SpaGraph,
}

/// Reads a graph file, validating the graph invariants.
pub fn read_graph_file<R: Read>(source: R) -> Result<GraphFile> {
    let reader = BufReader::new(source);
    let mut lines = reader.lines();
    let first = lines.next().ok_or(SpaError::Parse {
        line: 1,
        message: "empty file".into(),
    })??;
    let header = GraphFileHeader::parse(&first)?;
    let dim = header.params.dim;
    let n = header.n;

    let mut positions = Vec::with_capacity(n * dim);
    let mut edges: Vec<Edge> = Vec::new();
    let mut vertices = 0usize;
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        let perr = |message: String| SpaError::Parse {
            line: line_no,
            message,
        };
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("V") => {
                if !edges.is_empty() {
                    return Err(perr("vertex line after edge lines".into()));
                }
                let id: usize = tok
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr("bad vertex id".into()))?;
                if id != vertices + 1 {
                    return Err(perr(format!("expected vertex {}, found {id}", vertices + 1)));
                }
                let before = positions.len();
                for t in tok {
                    let c = parse_hex_f64(t).ok_or_else(|| perr(format!("bad coordinate `{t}`")))?;
                    if !(0.0..1.0).contains(&c) {
                        return Err(SpaError::InvariantViolation(format!(
                            "line {line_no}: coordinate {c} outside [0,1)"
                        )));
                    }
                    positions.push(c);
                }
                if positions.len() - before != dim {
                    return Err(perr(format!(
                        "expected {dim} coordinates, found {}",
                        positions.len() - before
                    )));
                }
                vertices += 1;
            }
            Some("E") => {
                let mut num = || -> Result<usize> {
                    tok.next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| perr("bad edge endpoint".into()))
                };
                let (src, dst) = (num()?, num()?);
                if tok.next().is_some() {
                    return Err(perr("trailing tokens on edge line".into()));
                }
                let inv = |msg: String| SpaError::InvariantViolation(format!("line {line_no}: {msg}"));
                if src <= dst {
                    return Err(inv(format!("edge {src} -> {dst} must point to an older vertex")));
                }
                if dst == 0 || src > vertices {
                    return Err(inv(format!("edge {src} -> {dst} references an unknown vertex")));
                }
                if let Some(prev) = edges.last() {
                    if src < prev.src || (src == prev.src && dst <= prev.dst) {
                        return Err(inv(format!(
                            "edge {src} -> {dst} is duplicated or out of creation order"
                        )));
                    }
                }
                edges.push(Edge { src, dst });
            }
            None => continue,
            Some(other) => return Err(perr(format!("unknown record `{other}`"))),
        }
    }
    if vertices != n {
        return Err(SpaError::Parse {
            line: 1,
            message: format!("header declares n = {n} but file has {vertices} vertices"),
        });
    }
    let graph = SpaGraph::from_parts(dim, positions, edges)?;
    Ok(GraphFile { header, graph })
}

/// Reads a graph file and returns the graph with its parameters.
pub fn read_graph<R: Read>(source: R) -> Result<(SpaGraph, ModelParams)> {
    read_graph_file(source).map(|f| (f.graph, f.header.params))
}

pub fn save_graph(
    path: impl AsRef<Path>,
    graph: &SpaGraph,
    params: &ModelParams,
    mode: GenerationMode,
) -> Result<()> {
    write_graph(graph, params, mode, File::create(path)?)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<GraphFile> {
    read_graph_file(File::open(path)?)
}

/// Column types used by [`CsvSchema`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    UInt,
    Float,
    Flag,
    Text,
}

/// Column names and types of one CSV output.
#[derive(Debug, Clone, Copy)]
pub struct CsvSchema {
    pub file_name: &'static str,
    pub columns: &'static [(&'static str, ColumnType)],
}

use ColumnType::*;

pub const CC_BY_DEGREE: CsvSchema = CsvSchema {
    file_name: "cc_by_degree.csv",
    columns: &[("d", UInt), ("C", Float), ("count", UInt), ("directed_flag", Flag)],
};

pub const CC_SMOOTHED: CsvSchema = CsvSchema {
    file_name: "cc_smoothed.csv",
    columns: &[("d", UInt), ("C", Float), ("count", UInt), ("directed_flag", Flag)],
};

pub const CC_OLD_NEW: CsvSchema = CsvSchema {
    file_name: "cc_old_new.csv",
    columns: &[("d", UInt), ("C_old", Float), ("C_new", Float), ("count", UInt)],
};

pub const CC_SCATTER: CsvSchema = CsvSchema {
    file_name: "cc_scatter.csv",
    columns: &[
        ("v", UInt),
        ("in_deg", UInt),
        ("c_minus", Float),
        ("c_old", Float),
        ("c_new", Float),
    ],
};

pub const TRAJECTORY: CsvSchema = CsvSchema {
    file_name: "trajectory.csv",
    columns: &[("v", UInt), ("t", UInt), ("deg", UInt)],
};

pub const RUNTIME: CsvSchema = CsvSchema {
    file_name: "runtime.csv",
    columns: &[("n", UInt), ("mode", Text), ("seconds", Float), ("comparisons", UInt)],
};

pub const SWEEP_SUMMARY: CsvSchema = CsvSchema {
    file_name: "summary.csv",
    columns: &[
        ("p", Float),
        ("replicate", UInt),
        ("seed", UInt),
        ("n", UInt),
        ("edges", UInt),
        ("mean_out_degree", Float),
        ("max_out_degree", UInt),
    ],
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeRow {
    pub d: usize,
    #[serde(rename = "C")]
    pub c: f64,
    pub count: usize,
    pub directed_flag: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OldNewRow {
    pub d: usize,
    #[serde(rename = "C_old")]
    pub c_old: f64,
    #[serde(rename = "C_new")]
    pub c_new: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterRow {
    pub v: usize,
    pub in_deg: usize,
    pub c_minus: f64,
    pub c_old: f64,
    pub c_new: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub v: usize,
    pub t: usize,
    pub deg: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeRow {
    pub n: usize,
    pub mode: String,
    pub seconds: f64,
    pub comparisons: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub p: f64,
    pub replicate: usize,
    pub seed: u64,
    pub n: usize,
    pub edges: usize,
    pub mean_out_degree: f64,
    pub max_out_degree: usize,
}

/// Serialises `rows` with a header, even when there are no rows.
pub fn write_csv_rows<T: Serialize, W: Write>(schema: &CsvSchema, rows: &[T], sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(schema.columns.iter().map(|c| c.0))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `rows` to `dir/<schema file name>` and validates the result.
pub fn emit_csv<T: Serialize>(dir: &Path, schema: &CsvSchema, rows: &[T]) -> Result<()> {
    let path = dir.join(schema.file_name);
    write_csv_rows(schema, rows, BufWriter::new(File::create(&path)?))?;
    validate_csv(File::open(&path)?, schema)?;
    Ok(())
}

/// Checks header names and per-column types. Returns the number of rows.
pub fn validate_csv<R: Read>(source: R, schema: &CsvSchema) -> Result<usize> {
    let mut rd = csv::Reader::from_reader(source);
    let header = rd.headers()?.clone();
    let expected: Vec<_> = schema.columns.iter().map(|c| c.0).collect();
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(SpaError::Parse {
            line: 1,
            message: format!(
                "{}: header {:?}, expected {:?}",
                schema.file_name,
                header.iter().collect::<Vec<_>>(),
                expected
            ),
        });
    }
    let mut rows = 0;
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        for (value, (name, ty)) in rec.iter().zip(schema.columns) {
            let ok = match ty {
                UInt => value.parse::<u64>().is_ok(),
                Float => value.parse::<f64>().is_ok(),
                Flag => value == "0" || value == "1",
                Text => !value.is_empty(),
            };
            if !ok {
                return Err(SpaError::Parse {
                    line: i + 2,
                    message: format!("{}: column `{name}` has bad value `{value}`", schema.file_name),
                });
            }
        }
        rows += 1;
    }
    Ok(rows)
}
