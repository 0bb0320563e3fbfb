//! Line-oriented text formats for modules, barcodes, graded presentations
//! and interleaving certificates.
//!
//! Writers emit canonical form (lowest-terms rationals, sorted intervals,
//! single-space separators), so `parse ∘ serialize` is the identity and the
//! files are bit-exact fixtures. Parsers are lenient about rational
//! normalization (`2/4` reads as `1/2`) and strict about everything else.

use std::fmt::Write as _;
use std::path::Path;

use crate::barcode::Barcode;
use crate::error::{Error, Result};
use crate::graded::{GradedPresentation, Relation};
use crate::interleave::{CertificateKind, InterleavingCertificate, ModuleMap};
use crate::matrix::Matrix;
use crate::module::{IndexKind, TameModule};
use crate::rational::{Extended, Rational};

struct Lines<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    current: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().enumerate(),
            current: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.current,
            msg: msg.into(),
        }
    }

    fn next_line(&mut self) -> Option<&'a str> {
        for (idx, line) in self.lines.by_ref() {
            let trimmed = line.trim();
            self.current = idx + 1;
            if !trimmed.is_empty() {
                return Some(trimmed);
            }
        }
        None
    }

    fn expect_line(&mut self, what: &str) -> Result<&'a str> {
        self.next_line()
            .ok_or_else(|| self.err(format!("expected {what}, found end of input")))
    }

    /// Next line split at the expected keyword; returns the rest.
    fn keyword_line(&mut self, keyword: &str) -> Result<&'a str> {
        let line = self.expect_line(keyword)?;
        match line.strip_prefix(keyword) {
            Some(rest) if rest.is_empty() || rest.starts_with(char::is_whitespace) => {
                Ok(rest.trim_start())
            }
            _ => Err(self.err(format!("expected `{keyword} ...`, found `{line}`"))),
        }
    }
}

fn parse_tokens<T: std::str::FromStr<Err = Error>>(
    lines: &Lines<'_>,
    text: &str,
) -> Result<Vec<T>> {
    text.split_whitespace()
        .map(|tok| tok.parse().map_err(|e: Error| lines.err(e.to_string())))
        .collect()
}

fn write_tokens<T: std::fmt::Display>(out: &mut String, keyword: &str, tokens: &[T]) {
    out.push_str(keyword);
    for t in tokens {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
}

// ---------------------------------------------------------------- matrices

// `<rows>x<cols> [r00 r01; r10 r11]`, `[]` when the matrix is empty.
fn format_matrix(m: &Matrix) -> String {
    let mut body = String::new();
    if m.rows() * m.cols() > 0 {
        for i in 0..m.rows() {
            if i > 0 {
                body.push_str("; ");
            }
            for j in 0..m.cols() {
                if j > 0 {
                    body.push(' ');
                }
                let _ = write!(body, "{}", m.at(i, j));
            }
        }
    }
    format!("{}x{} [{body}]", m.rows(), m.cols())
}

fn parse_matrix(lines: &Lines<'_>, shape: &str, body: &str, p: u64) -> Result<Matrix> {
    let (rows, cols) = shape
        .split_once('x')
        .and_then(|(r, c)| Some((r.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
        .ok_or_else(|| lines.err(format!("malformed shape `{shape}`")))?;
    let body = body.trim();
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| lines.err(format!("matrix body `{body}` not bracketed")))?
        .trim();
    let mut entries: Vec<u64> = Vec::with_capacity(rows * cols);
    if !inner.is_empty() {
        for (i, row) in inner.split(';').enumerate() {
            let row_entries: Vec<u64> = row
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<u64>()
                        .map_err(|_| lines.err(format!("bad matrix entry `{tok}`")))
                })
                .collect::<Result<_>>()?;
            if row_entries.len() != cols {
                return Err(lines.err(format!(
                    "row {i} has {} entries, expected {cols}",
                    row_entries.len()
                )));
            }
            entries.extend(row_entries);
        }
    }
    if entries.len() != rows * cols {
        return Err(lines.err(format!(
            "matrix body has {} entries for shape {rows}x{cols}",
            entries.len()
        )));
    }
    Matrix::from_entries(rows, cols, p, entries)
}

// ----------------------------------------------------------------- modules

pub fn serialize_module(m: &TameModule) -> String {
    let mut out = String::new();
    out.push_str("pmod v1\n");
    let _ = writeln!(out, "field {}", m.modulus());
    let _ = writeln!(out, "kind {}", m.kind().as_str());
    write_tokens(&mut out, "grid", m.grid());
    write_tokens(&mut out, "dims", m.dims());
    for (i, map) in m.maps().iter().enumerate() {
        let _ = writeln!(out, "map {i} {}", format_matrix(map));
    }
    out
}

pub fn parse_module(text: &str) -> Result<TameModule> {
    let mut lines = Lines::new(text);
    let module = parse_module_body(&mut lines)?;
    expect_end(&mut lines)?;
    Ok(module)
}

fn expect_end(lines: &mut Lines<'_>) -> Result<()> {
    match lines.next_line() {
        None => Ok(()),
        Some(extra) => Err(lines.err(format!("unexpected trailing content `{extra}`"))),
    }
}

fn parse_module_body(lines: &mut Lines<'_>) -> Result<TameModule> {
    let header = lines.expect_line("`pmod v1`")?;
    if header != "pmod v1" {
        return Err(lines.err(format!("expected `pmod v1`, found `{header}`")));
    }
    let p: u64 = {
        let txt = lines.keyword_line("field")?;
        txt.parse()
            .map_err(|_| lines.err(format!("bad field modulus `{txt}`")))?
    };
    let kind: IndexKind = {
        let txt = lines.keyword_line("kind")?;
        txt.parse().map_err(|e: Error| lines.err(e.to_string()))?
    };
    let grid_text = lines_keyword(lines, "grid")?;
    let grid: Vec<Rational> = parse_tokens(lines, &grid_text)?;
    let dims: Vec<usize> = {
        let txt = lines.keyword_line("dims")?;
        txt.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| lines.err(format!("bad dimension `{tok}`")))
            })
            .collect::<Result<_>>()?
    };
    let mut maps = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let rest = lines.keyword_line("map")?;
        let mut parts = rest.splitn(3, char::is_whitespace);
        let idx = parts
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| lines.err("map line missing index"))?;
        if idx != i {
            return Err(lines.err(format!("map index {idx}, expected {i}")));
        }
        let shape = parts
            .next()
            .ok_or_else(|| lines.err("map line missing shape"))?;
        let body = parts
            .next()
            .ok_or_else(|| lines.err("map line missing body"))?;
        maps.push(parse_matrix(lines, shape, body, p)?);
    }
    TameModule::new(kind, p, grid, dims, maps)
}

// Helper keeping the borrow checker happy: keyword_line needs &mut, the
// token parser only needs the text.
fn lines_keyword(lines: &mut Lines<'_>, keyword: &str) -> Result<String> {
    lines.keyword_line(keyword).map(str::to_owned)
}

// ---------------------------------------------------------------- barcodes

pub fn serialize_barcode(bc: &Barcode) -> String {
    let mut out = String::new();
    out.push_str("barcode v1\n");
    let _ = writeln!(out, "kind {}", bc.kind().as_str());
    for (birth, death, mult) in bc.bars() {
        let _ = writeln!(out, "{birth} {death} {mult}");
    }
    out
}

pub fn parse_barcode(text: &str) -> Result<Barcode> {
    let mut lines = Lines::new(text);
    let header = lines.expect_line("`barcode v1`")?;
    if header != "barcode v1" {
        return Err(lines.err(format!("expected `barcode v1`, found `{header}`")));
    }
    let kind: IndexKind = {
        let txt = lines.keyword_line("kind")?;
        txt.parse().map_err(|e: Error| lines.err(e.to_string()))?
    };
    let mut bars = Vec::new();
    while let Some(line) = lines.next_line() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(lines.err(format!(
                "bar line needs `<birth> <death|inf> <mult>`, found `{line}`"
            )));
        }
        let birth: Rational = toks[0]
            .parse()
            .map_err(|e: Error| lines.err(e.to_string()))?;
        let death: Extended = toks[1]
            .parse()
            .map_err(|e: Error| lines.err(e.to_string()))?;
        let mult: usize = toks[2]
            .parse()
            .map_err(|_| lines.err(format!("bad multiplicity `{}`", toks[2])))?;
        bars.push((birth, death, mult));
    }
    Barcode::new(kind, bars)
}

// ----------------------------------------------------- graded presentations

pub fn serialize_presentation(pres: &GradedPresentation) -> String {
    let pres = pres.canonicalize();
    let mut out = String::new();
    out.push_str("grmod v1\n");
    let _ = writeln!(out, "field {}", pres.modulus());
    write_tokens(&mut out, "gens", pres.generator_degrees());
    for rel in pres.relations() {
        let coeffs = rel
            .coeffs
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(out, "rel {} [{coeffs}]", rel.degree);
    }
    out
}

pub fn parse_presentation(text: &str) -> Result<GradedPresentation> {
    let mut lines = Lines::new(text);
    let header = lines.expect_line("`grmod v1`")?;
    if header != "grmod v1" {
        return Err(lines.err(format!("expected `grmod v1`, found `{header}`")));
    }
    let p: u64 = {
        let txt = lines.keyword_line("field")?;
        txt.parse()
            .map_err(|_| lines.err(format!("bad field modulus `{txt}`")))?
    };
    let gens: Vec<usize> = {
        let txt = lines.keyword_line("gens")?;
        txt.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| lines.err(format!("bad generator degree `{tok}`")))
            })
            .collect::<Result<_>>()?
    };
    let mut rels = Vec::new();
    while let Some(line) = lines.next_line() {
        let rest = line
            .strip_prefix("rel")
            .map(str::trim_start)
            .ok_or_else(|| lines.err(format!("expected `rel ...`, found `{line}`")))?;
        let (degree, coeffs) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| lines.err("relation line missing coefficients"))?;
        let degree: usize = degree
            .parse()
            .map_err(|_| lines.err(format!("bad relation degree `{degree}`")))?;
        let inner = coeffs
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| lines.err("relation coefficients not bracketed"))?;
        let coeffs: Vec<u64> = inner
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u64>()
                    .map_err(|_| lines.err(format!("bad coefficient `{tok}`")))
            })
            .collect::<Result<_>>()?;
        rels.push(Relation { degree, coeffs });
    }
    GradedPresentation::new(p, gens, rels)
}

// ------------------------------------------------------------ certificates

/// Serializes with both modules inline, so the certificate is self-contained.
pub fn serialize_certificate(cert: &InterleavingCertificate) -> String {
    let mut out = String::new();
    out.push_str("cert v1\n");
    let _ = writeln!(out, "epsilon {}", cert.shift());
    match cert.kind() {
        CertificateKind::Strong => out.push_str("kind strong\n"),
        CertificateKind::Weak(x0) => {
            let _ = writeln!(out, "kind weak {x0}");
        }
    }
    out.push_str("source inline\n");
    out.push_str(&serialize_module(cert.left_module()));
    out.push_str("end\n");
    out.push_str("target inline\n");
    out.push_str(&serialize_module(cert.right_module()));
    out.push_str("end\n");
    for (name, map) in [("mapf", cert.f()), ("mapg", cert.g())] {
        out.push_str(name);
        out.push('\n');
        write_tokens(&mut out, "cellgrid", map.cells());
        for (k, block) in map.blocks().iter().enumerate() {
            let _ = writeln!(out, "block {k} {}", format_matrix(block));
        }
    }
    out
}

/// Parses a certificate; `source`/`target` may be `inline` blocks
/// (terminated by `end`) or paths resolved against `base_dir`.
pub fn parse_certificate(text: &str, base_dir: Option<&Path>) -> Result<InterleavingCertificate> {
    let mut lines = Lines::new(text);
    let header = lines.expect_line("`cert v1`")?;
    if header != "cert v1" {
        return Err(lines.err(format!("expected `cert v1`, found `{header}`")));
    }
    let eps: Rational = {
        let txt = lines.keyword_line("epsilon")?;
        txt.parse().map_err(|e: Error| lines.err(e.to_string()))?
    };
    let kind = {
        let txt = lines.keyword_line("kind")?;
        let mut toks = txt.split_whitespace();
        match toks.next() {
            Some("strong") => CertificateKind::Strong,
            Some("weak") => {
                let x0 = toks
                    .next()
                    .ok_or_else(|| lines.err("weak certificate missing basepoint"))?;
                CertificateKind::Weak(x0.parse().map_err(|e: Error| lines.err(e.to_string()))?)
            }
            _ => return Err(lines.err(format!("unknown certificate kind `{txt}`"))),
        }
    };
    let source = parse_module_ref(&mut lines, "source", base_dir)?;
    let target = parse_module_ref(&mut lines, "target", base_dir)?;

    let f = parse_map_section(&mut lines, "mapf", &source, &target, &eps)?;
    let g = parse_map_section(&mut lines, "mapg", &target, &source, &eps)?;
    expect_end(&mut lines)?;
    InterleavingCertificate::new(f, g, kind)
}

fn parse_module_ref(
    lines: &mut Lines<'_>,
    role: &str,
    base_dir: Option<&Path>,
) -> Result<TameModule> {
    let spec = lines.keyword_line(role)?;
    if spec == "inline" {
        return parse_module_body(lines).and_then(|m| {
            let terminator = lines.expect_line("`end`")?;
            if terminator != "end" {
                return Err(lines.err(format!(
                    "expected `end` after inline module, found `{terminator}`"
                )));
            }
            Ok(m)
        });
    }
    let path = match base_dir {
        Some(dir) => dir.join(spec),
        None => Path::new(spec).to_path_buf(),
    };
    let text = std::fs::read_to_string(&path)?;
    parse_module(&text)
}

fn parse_map_section(
    lines: &mut Lines<'_>,
    name: &str,
    source: &TameModule,
    target: &TameModule,
    eps: &Rational,
) -> Result<ModuleMap> {
    let header = lines.expect_line(name)?;
    if header != name {
        return Err(lines.err(format!("expected `{name}`, found `{header}`")));
    }
    let cells_text = lines_keyword(lines, "cellgrid")?;
    let cells: Vec<Rational> = parse_tokens(lines, &cells_text)?;
    let mut blocks = Vec::with_capacity(cells.len());
    for k in 0..cells.len() {
        let rest = lines.keyword_line("block")?;
        let mut parts = rest.splitn(3, char::is_whitespace);
        let idx = parts
            .next()
            .and_then(|t| t.parse::<usize>().ok())
            .ok_or_else(|| lines.err("block line missing index"))?;
        if idx != k {
            return Err(lines.err(format!("block index {idx}, expected {k}")));
        }
        let shape = parts
            .next()
            .ok_or_else(|| lines.err("block line missing shape"))?;
        let body = parts
            .next()
            .ok_or_else(|| lines.err("block line missing body"))?;
        blocks.push(parse_matrix(lines, shape, body, source.modulus())?);
    }
    ModuleMap::new(source.clone(), target.clone(), eps.clone(), cells, blocks)
}
