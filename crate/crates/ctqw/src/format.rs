//! Text formats: edge lists, dense matrices, spectra, Wigner fields and
//! report vectors.
//!
//! CSV files start with `# key=value` metadata lines. Floats are written
//! with 17 significant digits in scientific notation, which round-trips
//! every `f64` and does not depend on locale. Lines end in `\n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use ctqw_core::analysis::Grid;
use ctqw_core::netgen::{DisorderSpec, Graph, Hamiltonian, PRNG_NAME};
use ctqw_core::wigner::{FieldPath, TimeTag, WignerField};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Ordered metadata pairs.
pub type Meta = Vec<(String, String)>;

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn push(meta: &mut Meta, key: &str, value: impl ToString) {
    meta.push((key.to_string(), value.to_string()));
}

fn write_meta(out: &mut String, meta: &Meta) {
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}={v}");
    }
}

/// Full configuration echo plus the program version.
pub fn config_meta(config: &RunConfig) -> Meta {
    let mut meta = Meta::new();
    push(&mut meta, "version", VERSION);
    for (k, v) in config.to_pairs() {
        meta.push((format!("config.{k}"), v));
    }
    meta
}

pub fn disorder_meta(meta: &mut Meta, disorder: &DisorderSpec) {
    match *disorder {
        DisorderSpec::None => push(meta, "disorder", "none"),
        DisorderSpec::Exponential { lambda } => {
            push(meta, "disorder", "exponential");
            push(meta, "lambda", lambda);
        }
        DisorderSpec::WattsStrogatz { p, seed } => {
            push(meta, "disorder", "watts-strogatz");
            push(meta, "p", p);
            push(meta, "seed", seed);
            push(meta, "prng", PRNG_NAME);
        }
    }
}

pub fn time_label(time: TimeTag) -> String {
    match time {
        TimeTag::At(t) => t.to_string(),
        TimeTag::Limit => "limit".to_string(),
    }
}

/// Field-level metadata: grid size, ring, start node, time, disorder,
/// tolerance and evaluation route.
pub fn field_meta(field: &WignerField) -> Meta {
    let mut meta = Meta::new();
    let prov = field.provenance();
    push(&mut meta, "N", field.n());
    if let Some(net) = &prov.network {
        push(&mut meta, "m", net.ring.m());
    }
    push(&mut meta, "j", field.initial_node());
    push(&mut meta, "time", time_label(field.time()));
    if let Some(net) = &prov.network {
        disorder_meta(&mut meta, &net.disorder);
    }
    if let Some(tol) = prov.tolerance {
        push(&mut meta, "tol", tol);
    }
    let path = match prov.path {
        FieldPath::Circulant => "circulant",
        FieldPath::General => "general",
        FieldPath::ClosedForm => "closed-form",
        FieldPath::EnsembleMean => "ensemble-mean",
    };
    push(&mut meta, "path", path);
    push(&mut meta, "imag_residue", field.imag_residue());
    meta
}

/// Rows are `x`, columns `k`.
pub fn field_csv(field: &WignerField, meta: &Meta) -> String {
    let n = field.n();
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push('x');
    for k in 0..n {
        let _ = write!(out, ",{k}");
    }
    out.push('\n');
    for x in 0..n {
        let _ = write!(out, "{x}");
        for &v in field.row(x) {
            out.push(',');
            out.push_str(&fmt_f64(v));
        }
        out.push('\n');
    }
    out
}

/// Parsed contents of a field CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldTable {
    pub meta: Meta,
    pub n: usize,
    /// `x`-major.
    pub values: Vec<f64>,
}

fn parse_err(path: &str, msg: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.into(),
        message: msg.into(),
    }
}

fn split_meta(line: &str) -> Option<(String, String)> {
    let rest = line.strip_prefix('#')?.trim();
    let (k, v) = rest.split_once('=')?;
    Some((k.trim().to_string(), v.trim().to_string()))
}

pub fn parse_field_csv(text: &str) -> Result<FieldTable> {
    let mut meta = Meta::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut header_seen = false;
    for line in text.lines() {
        if line.starts_with('#') {
            if let Some(kv) = split_meta(line) {
                meta.push(kv);
            }
            continue;
        }
        if !header_seen {
            header_seen = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let mut cells = line.split(',');
        let x: usize = cells
            .next()
            .and_then(|c| c.parse().ok())
            .ok_or_else(|| parse_err("<field csv>", format!("bad row label in `{line}`")))?;
        if x != rows.len() {
            return Err(parse_err("<field csv>", format!("row {x} out of order")));
        }
        let row = cells
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err("<field csv>", e.to_string()))?;
        rows.push(row);
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(parse_err("<field csv>", "field grid is not square"));
    }
    Ok(FieldTable {
        meta,
        n,
        values: rows.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldJson {
    pub meta: BTreeMap<String, String>,
    #[serde(rename = "N")]
    pub n: usize,
    /// `values[x][k]`.
    pub values: Vec<Vec<f64>>,
}

pub fn field_json(field: &WignerField, meta: &Meta) -> String {
    let doc = FieldJson {
        meta: meta.iter().cloned().collect(),
        n: field.n(),
        values: (0..field.n()).map(|x| field.row(x).to_vec()).collect(),
    };
    let mut s = serde_json::to_string(&doc).expect("field serialises");
    s.push('\n');
    s
}

pub fn parse_field_json(text: &str) -> Result<FieldJson> {
    serde_json::from_str(text).map_err(|e| parse_err("<field json>", e.to_string()))
}

/// `# N=<N>` followed by one `u,v` line per edge.
pub fn graph_csv(graph: &Graph) -> String {
    let mut out = format!("# N={}\n", graph.n());
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u},{v}");
    }
    out
}

pub fn parse_graph_csv(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') {
            if let Some((k, v)) = split_meta(line) {
                if k == "N" {
                    n = Some(v.parse().map_err(|_| parse_err("<graph csv>", "bad N"))?);
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let (u, v) = line
            .split_once(',')
            .ok_or_else(|| parse_err("<graph csv>", format!("expected `u,v`, got `{line}`")))?;
        let u: usize = u
            .trim()
            .parse()
            .map_err(|_| parse_err("<graph csv>", "bad node"))?;
        let v: usize = v
            .trim()
            .parse()
            .map_err(|_| parse_err("<graph csv>", "bad node"))?;
        edges.push((u, v));
    }
    let n = n.ok_or_else(|| parse_err("<graph csv>", "missing `# N=` header"))?;
    Ok(Graph::from_edges(n, edges)?)
}

pub fn hamiltonian_csv(h: &Hamiltonian) -> String {
    let mut out = format!("# N={}\n", h.n());
    for i in 0..h.n() {
        let row: Vec<String> = h.row(i).iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn spectrum_csv(eigenvalues: &[f64], class_ids: &[usize], meta: &Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str("index,eigenvalue,class_id\n");
    for (i, (e, c)) in eigenvalues.iter().zip(class_ids).enumerate() {
        let _ = writeln!(out, "{i},{},{c}", fmt_f64(*e));
    }
    out
}

/// Grid with row labels in the first column.
pub fn grid_csv(grid: &Grid, row_label: &str, meta: &Meta) -> String {
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str(row_label);
    for c in 0..grid.cols {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for r in 0..grid.rows {
        let _ = write!(out, "{r}");
        for c in 0..grid.cols {
            out.push(',');
            out.push_str(&fmt_f64(grid.get(r, c)));
        }
        out.push('\n');
    }
    out
}

/// Named columns of equal length, indexed by the first column.
pub fn columns_csv(index: &str, columns: &[(&str, &[f64])], meta: &Meta) -> String {
    let len = columns.first().map_or(0, |c| c.1.len());
    assert!(columns.iter().all(|c| c.1.len() == len));
    let mut out = String::new();
    write_meta(&mut out, meta);
    out.push_str(index);
    for (name, _) in columns {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for i in 0..len {
        let _ = write!(out, "{i}");
        for (_, col) in columns {
            out.push(',');
            out.push_str(&fmt_f64(col[i]));
        }
        out.push('\n');
    }
    out
}

/// Writes through a sibling temporary file and renames it into place, so a
/// reader never observes a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}
