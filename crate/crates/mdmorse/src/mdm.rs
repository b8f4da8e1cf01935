//! Vector-valued discrete Morse functions with exact rational values.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, BTreeSet};
use std::cmp::Reverse;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::complex::{CellId, CellSet, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::{DiscreteVectorField, Role};
use crate::graph::Digraph;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ValueVector(Vec<BigRational>);

impl ValueVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        ValueVector(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        ValueVector(coords.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    /// `self ⪯ other`, componentwise.
    pub fn leq(&self, other: &ValueVector) -> Result<bool> {
        self.check_arity(other)?;
        Ok(self.0.iter().zip(&other.0).all(|(a, b)| a <= b))
    }

    /// `self ⪯ other` and `self ≠ other`.
    pub fn lneq(&self, other: &ValueVector) -> Result<bool> {
        Ok(self.leq(other)? && self != other)
    }

    fn check_arity(&self, other: &ValueVector) -> Result<()> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        Ok(())
    }

    fn leq_unchecked(&self, other: &ValueVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for ValueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.strings().join(","))
    }
}

pub fn vec_leq(a: &ValueVector, b: &ValueVector) -> Result<bool> {
    a.leq(b)
}

pub fn vec_lneq(a: &ValueVector, b: &ValueVector) -> Result<bool> {
    a.lneq(b)
}

/// Membership of `v` in `Q_a^b`: `v ⪯ b` and `vᵢ > aᵢ` for some `i`.
pub fn in_q_box(v: &ValueVector, a: &ValueVector, b: &ValueVector) -> Result<bool> {
    v.check_arity(a)?;
    Ok(v.leq(b)? && v.0.iter().zip(&a.0).any(|(x, y)| x > y))
}

/// Exact decimal when the denominator allows it, `p/q` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let places = twos.max(fives);
    let scaled = r * BigRational::from_integer(BigInt::from(10).pow(places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let p = places as usize;
    let padded = format!("{digits:0>width$}", width = p + 1);
    let (int, frac) = padded.split_at(padded.len() - p);
    format!("{sign}{int}.{frac}")
}

/// One failed condition of the mdm definition at a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub simplex: CellId,
    /// 1: |H| > 1, 2: |T| > 1, 3: cofacet not strictly above, 4: facet not strictly below.
    pub condition: u8,
    pub others: Vec<CellId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MdmReport {
    pub violations: Vec<Violation>,
}

impl MdmReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct MdmFunction {
    complex: Arc<SimplicialComplex>,
    values: Vec<ValueVector>,
    arity: usize,
    validated: bool,
}

impl MdmFunction {
    /// Unvalidated function; `values[c]` is the value of cell `c`.
    pub fn new(complex: Arc<SimplicialComplex>, values: Vec<ValueVector>) -> Result<Self> {
        if values.len() != complex.len() {
            return Err(Error::InvalidInput(format!(
                "{} values for {} simplices",
                values.len(),
                complex.len()
            )));
        }
        let arity = values.first().map_or(1, ValueVector::arity);
        if arity == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        if let Some(v) = values.iter().find(|v| v.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, found: v.arity() });
        }
        Ok(MdmFunction { complex, values, arity, validated: false })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn value(&self, c: CellId) -> &ValueVector {
        &self.values[c]
    }

    pub fn values(&self) -> &[ValueVector] {
        &self.values
    }

    /// The scalar function `f_i`, unvalidated.
    pub fn component(&self, i: usize) -> MdmFunction {
        let values = self.values.iter().map(|v| ValueVector(vec![v.0[i].clone()])).collect();
        MdmFunction { complex: self.complex.clone(), values, arity: 1, validated: false }
    }

    /// `H_f(σ)`: cofacets valued at most `f(σ)`.
    pub fn lower_cofacets(&self, c: CellId) -> Vec<CellId> {
        let v = &self.values[c];
        self.complex.cofacets(c).iter().copied().filter(|&b| self.values[b].leq_unchecked(v)).collect()
    }

    /// `T_f(σ)`: facets valued at least `f(σ)`.
    pub fn upper_facets(&self, c: CellId) -> Vec<CellId> {
        let v = &self.values[c];
        self.complex.facets(c).iter().copied().filter(|&a| v.leq_unchecked(&self.values[a])).collect()
    }

    /// Runs the validator and records a passing verdict.
    pub fn validate(&mut self) -> MdmReport {
        let report = validate_mdm(self);
        self.validated = report.is_valid();
        report
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    fn require_validated(&self) -> Result<()> {
        if self.validated {
            Ok(())
        } else {
            Err(Error::NotValidated)
        }
    }

    pub fn is_critical(&self, c: CellId) -> bool {
        self.lower_cofacets(c).is_empty() && self.upper_facets(c).is_empty()
    }

    /// Critical simplices in lexicographic order; the index is the dimension.
    pub fn critical_points(&self) -> Result<Vec<CellId>> {
        self.require_validated()?;
        Ok((0..self.complex.len()).filter(|&c| self.is_critical(c)).collect())
    }

    pub fn gradient(&self) -> Result<DiscreteVectorField> {
        self.require_validated()?;
        let mut pairs = Vec::new();
        let mut fixed = Vec::new();
        for c in 0..self.complex.len() {
            let h = self.lower_cofacets(c);
            if let [b] = h[..] {
                pairs.push((c, b));
            } else if self.upper_facets(c).is_empty() {
                fixed.push(c);
            }
        }
        DiscreteVectorField::new(self.complex.clone(), &pairs, &fixed)
    }

    /// `K(a)`: closure of the cells valued at most `a`.
    pub fn sublevel(&self, a: &ValueVector) -> Result<CellSet> {
        if a.arity() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: a.arity() });
        }
        let below: CellSet = (0..self.complex.len()).filter(|&c| self.values[c].leq_unchecked(a)).collect();
        Ok(self.complex.closure(&below))
    }
}

/// All violations of the four mdm conditions.
pub fn validate_mdm(f: &MdmFunction) -> MdmReport {
    let k = &f.complex;
    let mut violations = Vec::new();
    for c in 0..k.len() {
        let h = f.lower_cofacets(c);
        let t = f.upper_facets(c);
        if h.len() > 1 {
            violations.push(Violation { simplex: c, condition: 1, others: h.clone() });
        }
        if t.len() > 1 {
            violations.push(Violation { simplex: c, condition: 2, others: t.clone() });
        }
        let v = &f.values[c];
        for &b in k.cofacets(c) {
            if !h.contains(&b) && !(v.leq_unchecked(&f.values[b]) && v != &f.values[b]) {
                violations.push(Violation { simplex: c, condition: 3, others: vec![b] });
            }
        }
        for &a in k.facets(c) {
            if !t.contains(&a) && !(f.values[a].leq_unchecked(v) && v != &f.values[a]) {
                violations.push(Violation { simplex: c, condition: 4, others: vec![a] });
            }
        }
    }
    MdmReport { violations }
}

/// Keeps an arrow only where every field has it; all other cells become fixed.
pub fn combine_component_gradients(fields: &[DiscreteVectorField]) -> Result<DiscreteVectorField> {
    let first = fields.first().ok_or_else(|| Error::InvalidInput("no fields given".into()))?;
    let k = first.complex().clone();
    if fields.iter().any(|v| v.complex() != &k) {
        return Err(Error::NotNested);
    }
    let mut pairs = Vec::new();
    let mut fixed = Vec::new();
    for c in 0..k.len() {
        let common = |r: Role| fields.iter().all(|v| v.role(c) == r);
        match first.role(c) {
            Role::Tail(h) if common(Role::Tail(h)) => pairs.push((c, h)),
            Role::Head(t) if common(Role::Head(t)) => {}
            _ => fixed.push(c),
        }
    }
    DiscreteVectorField::new(k, &pairs, &fixed)
}

/// An mdm function `(g, …, g)` whose gradient is the acyclic field `v`.
///
/// `g` numbers the paired-cell quotient of the Hasse diagram in topological
/// order, so both cells of a pair share a value and every other incidence
/// increases strictly. The result is validated before it is returned.
pub fn field_to_mdm(v: &DiscreteVectorField, k: usize) -> Result<MdmFunction> {
    if k == 0 {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    if let Some(path) = v.closed_path_simplices() {
        return Err(Error::CyclicField(path));
    }
    let cx = v.complex().clone();
    let node = |c: CellId| v.minus(c);
    let mut edges = Vec::new();
    for c in 0..cx.len() {
        for &a in cx.facets(c) {
            if v.role(a) != Role::Tail(c) {
                edges.push((node(a), node(c)));
            }
        }
    }
    let g = Digraph::from_edges(cx.len(), edges);
    let mut indeg = vec![0usize; cx.len()];
    for bs in &g.succ {
        for &b in bs {
            indeg[b] += 1;
        }
    }
    let nodes: BTreeSet<CellId> = (0..cx.len()).map(node).collect();
    let mut ready: BinaryHeap<Reverse<CellId>> =
        nodes.iter().copied().filter(|&n| indeg[n] == 0).map(Reverse).collect();
    let mut rank = vec![0i64; cx.len()];
    let mut next = 0i64;
    while let Some(Reverse(n)) = ready.pop() {
        rank[n] = next;
        next += 1;
        for &b in &g.succ[n] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                ready.push(Reverse(b));
            }
        }
    }
    debug_assert_eq!(next as usize, nodes.len());
    let values = (0..cx.len()).map(|c| ValueVector::from_ints(&vec![rank[node(c)]; k])).collect();
    let mut f = MdmFunction::new(cx, values)?;
    let report = f.validate();
    assert!(report.is_valid(), "constructed function failed validation: {report:?}");
    assert!(f.gradient()?.same_as(v), "constructed function has a different gradient");
    Ok(f)
}

impl PartialOrd for ValueVector {
    /// The componentwise partial order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.arity() != other.arity() {
            return None;
        }
        match (self.leq_unchecked(other), other.leq_unchecked(self)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }
}
