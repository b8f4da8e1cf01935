//! Text formats: function files, field files, simplex lists, partitions,
//! value vectors and collapse scripts.
//!
//! Vertices are either all non-negative integers (used as ids directly) or
//! all free-form labels, which get ids in order of first appearance.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::complex::{CellId, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::mdm::ValueVector;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Labels {
    mode: Option<LabelMode>,
    names: Vec<String>,
    ids: HashMap<String, u32>,
    frozen: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LabelMode {
    Numeric,
    Named,
}

impl Labels {
    /// Stops new labels from being registered.
    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_named(&self) -> bool {
        self.mode == Some(LabelMode::Named)
    }

    fn resolve(&mut self, token: &str) -> std::result::Result<u32, String> {
        let numeric = token.bytes().all(|b| b.is_ascii_digit());
        let mode = if numeric { LabelMode::Numeric } else { LabelMode::Named };
        match self.mode {
            None if !self.frozen => self.mode = Some(mode),
            Some(m) if m == mode => {}
            None => {}
            Some(_) => return Err(format!("vertex '{token}' mixes numeric and named vertices")),
        }
        if numeric {
            return token.parse().map_err(|_| format!("vertex id '{token}' too large"));
        }
        if let Some(&id) = self.ids.get(token) {
            return Ok(id);
        }
        if self.frozen {
            return Err(format!("unknown vertex '{token}'"));
        }
        let id = self.names.len() as u32;
        self.names.push(token.to_string());
        self.ids.insert(token.to_string(), id);
        Ok(id)
    }

    pub fn vertex_name(&self, v: u32) -> String {
        if self.is_named() {
            self.names.get(v as usize).cloned().unwrap_or_else(|| v.to_string())
        } else {
            v.to_string()
        }
    }

    /// Space-separated vertex names in id order.
    pub fn name(&self, s: &Simplex) -> String {
        s.vertices().iter().map(|&v| self.vertex_name(v)).collect::<Vec<_>>().join(" ")
    }
}

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn parse_simplex_tokens<'a>(
    tokens: impl IntoIterator<Item = &'a str>,
    labels: &mut Labels,
    line: usize,
) -> Result<Simplex> {
    let verts = tokens
        .into_iter()
        .map(|t| labels.resolve(t).map_err(|e| Error::parse(line, e)))
        .collect::<Result<Vec<u32>>>()?;
    Simplex::new(verts).map_err(|e| Error::parse(line, e.to_string()))
}

/// Exact rational from a decimal (`-1.25`, `3`, `.5`) or a fraction (`1/3`).
pub fn parse_rational(s: &str) -> std::result::Result<BigRational, String> {
    let s = s.trim();
    let bad = || format!("invalid number '{s}'");
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = parse_integer(n).ok_or_else(bad)?;
        let d: BigInt = parse_integer(d).ok_or_else(bad)?;
        if d.is_zero() {
            return Err(format!("zero denominator in '{s}'"));
        }
        return Ok(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let denom = BigInt::from(10).pow(frac.len() as u32);
    let r = BigRational::new(numer, denom);
    Ok(if neg { -r } else { r })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    t.parse().ok()
}

/// Comma-separated values, as given on the command line.
pub fn parse_vector(s: &str) -> Result<ValueVector> {
    let coords = s
        .split(',')
        .map(|t| parse_rational(t).map_err(|e| Error::parse(1, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ValueVector::new(coords))
}

#[derive(Clone, Debug)]
pub struct FunctionFile {
    pub labels: Labels,
    pub arity: usize,
    pub entries: Vec<(Simplex, ValueVector)>,
}

/// Lines `v₀ v₁ … | x₁ … x_k`; `#` starts a comment.
pub fn parse_function_file(text: &str) -> Result<FunctionFile> {
    let mut labels = Labels::default();
    let mut entries = Vec::new();
    let mut seen: HashMap<Simplex, usize> = HashMap::new();
    let mut arity = None;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let (verts, vals) = line.split_once('|').ok_or_else(|| Error::parse(n, "missing '|'"))?;
        let s = parse_simplex_tokens(verts.split_whitespace(), &mut labels, n)?;
        let coords = vals
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| Error::parse(n, e)))
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::parse(n, "no values"));
        }
        match arity {
            None => arity = Some(coords.len()),
            Some(k) if k != coords.len() => {
                return Err(Error::parse(n, format!("expected {k} values, found {}", coords.len())))
            }
            _ => {}
        }
        if let Some(prev) = seen.insert(s.clone(), n) {
            return Err(Error::parse(n, format!("simplex repeated from line {prev}")));
        }
        entries.push((s, ValueVector::new(coords)));
    }
    Ok(FunctionFile { labels, arity: arity.unwrap_or(1), entries })
}

#[derive(Clone, Debug)]
pub struct FieldFile {
    pub labels: Labels,
    pub pairs: Vec<(Simplex, Simplex)>,
    pub fixed: Vec<Simplex>,
}

impl FieldFile {
    /// Every simplex named in the file.
    pub fn simplices(&self) -> BTreeSet<Simplex> {
        self.pairs.iter().flat_map(|(a, b)| [a.clone(), b.clone()]).chain(self.fixed.iter().cloned()).collect()
    }
}

/// Lines `pair <tail> -> <head>` and `fix <simplex>`.
pub fn parse_field_file(text: &str) -> Result<FieldFile> {
    let mut labels = Labels::default();
    let mut pairs = Vec::new();
    let mut fixed = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        match words.next() {
            Some("pair") => {
                let rest: Vec<&str> = words.collect();
                let arrow = rest.iter().position(|&w| w == "->").ok_or_else(|| Error::parse(n, "missing '->'"))?;
                let tail = parse_simplex_tokens(rest[..arrow].iter().copied(), &mut labels, n)?;
                let head = parse_simplex_tokens(rest[arrow + 1..].iter().copied(), &mut labels, n)?;
                pairs.push((tail, head));
            }
            Some("fix") => fixed.push(parse_simplex_tokens(words, &mut labels, n)?),
            Some(w) => return Err(Error::parse(n, format!("unknown directive '{w}'"))),
            None => unreachable!(),
        }
    }
    Ok(FieldFile { labels, pairs, fixed })
}

/// One simplex per line, resolved against existing labels.
pub fn parse_simplex_list(text: &str, labels: &Labels) -> Result<Vec<Simplex>> {
    let mut labels = labels.clone();
    labels.freeze();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if !line.is_empty() {
            out.push(parse_simplex_tokens(line.split_whitespace(), &mut labels, i + 1)?);
        }
    }
    Ok(out)
}

/// Simplex list for a standalone complex file; labels are registered freely.
pub fn parse_complex_file(text: &str) -> Result<(Labels, Vec<Simplex>)> {
    let mut labels = Labels::default();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if !line.is_empty() {
            out.push(parse_simplex_tokens(line.split_whitespace(), &mut labels, i + 1)?);
        }
    }
    Ok((labels, out))
}

/// One block of set indices per line.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>> {
    let mut blocks = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let block = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(i + 1, format!("invalid index '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(block);
    }
    Ok(blocks)
}

/// Writes a collapse sequence as `collapse [σ] [τ]` lines.
pub fn format_collapse_script(k: &SimplicialComplex, labels: &Labels, steps: &[(CellId, CellId)]) -> String {
    steps
        .iter()
        .map(|&(a, b)| format!("collapse [{}] [{}]\n", labels.name(k.simplex(a)), labels.name(k.simplex(b))))
        .collect()
}

/// Reads `collapse [σ] [τ]` lines back.
pub fn parse_collapse_script(text: &str, labels: &Labels) -> Result<Vec<(Simplex, Simplex)>> {
    let mut labels = labels.clone();
    labels.freeze();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let rest = line.strip_prefix("collapse").ok_or_else(|| Error::parse(n, "expected 'collapse'"))?;
        let mut parts = Vec::new();
        let mut tail = rest.trim();
        while let Some(r) = tail.strip_prefix('[') {
            let end = r.find(']').ok_or_else(|| Error::parse(n, "unclosed '['"))?;
            parts.push(parse_simplex_tokens(r[..end].split_whitespace(), &mut labels, n)?);
            tail = r[end + 1..].trim_start();
        }
        if !tail.is_empty() || parts.len() != 2 {
            return Err(Error::parse(n, "expected two bracketed simplices"));
        }
        let tau = parts.pop().expect("two parts");
        let sigma = parts.pop().expect("two parts");
        out.push((sigma, tau));
    }
    Ok(out)
}
