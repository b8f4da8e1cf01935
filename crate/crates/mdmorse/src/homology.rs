//! Simplicial homology of relative pairs, Conley indices, and the integer
//! polynomials used by the Morse equations.
//!
//! The boundary of `[v₀ … v_p]` is `Σ (−1)^i [v₀ … v̂ᵢ … v_p]`. Ranks are
//! computed by fraction-free elimination over the integers (equal to ranks
//! over ℚ), or over GF(2) on request.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::complex::{CellId, CellSet, SimplicialComplex};
use crate::dynamics::FlowGraph;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Coefficients {
    #[default]
    Rational,
    Gf2,
}

/// `∂_p` restricted to the relative chain groups, as sparse columns.
#[derive(Clone, Debug)]
pub struct BoundaryMatrix {
    pub dim: usize,
    /// Cells of dimension `dim − 1` indexing the rows.
    pub rows: Vec<CellId>,
    /// Cells of dimension `dim` indexing the columns.
    pub cols: Vec<CellId>,
    /// Per column, `(row index, coefficient)` pairs.
    pub entries: Vec<Vec<(usize, i64)>>,
}

/// Chain groups of `closed` modulo `sub`, graded by dimension.
fn relative_cells(k: &SimplicialComplex, closed: &CellSet, sub: &CellSet) -> Vec<Vec<CellId>> {
    let top = k.dim().map_or(0, |d| d + 1);
    let mut by_dim = vec![Vec::new(); top];
    for &c in closed.difference(sub) {
        by_dim[k.dim_of(c)].push(c);
    }
    by_dim
}

fn check_pair(k: &SimplicialComplex, closed: &CellSet, sub: &CellSet) -> Result<()> {
    if !k.is_subcomplex(closed) || !k.is_subcomplex(sub) {
        return Err(Error::NotClosed);
    }
    if !sub.is_subset(closed) {
        return Err(Error::NotNested);
    }
    Ok(())
}

/// Boundary matrices `∂_1, …, ∂_d` of the pair `(closed, sub)`.
pub fn boundary_matrices(k: &SimplicialComplex, closed: &CellSet, sub: &CellSet) -> Result<Vec<BoundaryMatrix>> {
    check_pair(k, closed, sub)?;
    let cells = relative_cells(k, closed, sub);
    let mut out = Vec::new();
    for p in 1..cells.len() {
        let row_of: HashMap<CellId, usize> = cells[p - 1].iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let entries = cells[p]
            .iter()
            .map(|&c| {
                let s = k.simplex(c);
                s.facets()
                    .enumerate()
                    .filter_map(|(i, f)| {
                        let id = k.id_of(&f).expect("complex is face-closed");
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        row_of.get(&id).map(|&r| (r, sign))
                    })
                    .collect()
            })
            .collect();
        out.push(BoundaryMatrix { dim: p, rows: cells[p - 1].clone(), cols: cells[p].clone(), entries });
    }
    Ok(out)
}

/// Whether `∂_{p} ∘ ∂_{p+1}` vanishes for every consecutive pair.
pub fn boundary_squares_vanish(mats: &[BoundaryMatrix]) -> bool {
    mats.windows(2).all(|w| {
        let (lo, hi) = (&w[0], &w[1]);
        hi.entries.iter().all(|col| {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(mid, a) in col {
                for &(r, b) in &lo.entries[mid] {
                    *acc.entry(r).or_default() += a * b;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    })
}

fn rank(m: &BoundaryMatrix, coeff: Coefficients) -> usize {
    match coeff {
        Coefficients::Rational => rank_integer(m.rows.len(), &m.entries),
        Coefficients::Gf2 => rank_gf2(m.rows.len(), &m.entries),
    }
}

/// Fraction-free elimination with pivots of least absolute value.
fn rank_integer(nrows: usize, cols: &[Vec<(usize, i64)>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols.len()]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            rows[i][j] += v;
        }
    }
    let mut rank = 0;
    for j in 0..cols.len() {
        let pivot = (rank..nrows).filter(|&i| !rows[i][j].is_zero()).min_by(|&a, &b| {
            rows[a][j].abs().cmp(&rows[b][j].abs()).then(a.cmp(&b))
        });
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest.iter_mut() {
            if row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            let mut g = BigInt::zero();
            for (x, y) in row.iter_mut().zip(prow) {
                *x = &*x * &prow[j] - &factor * y;
                g = g.gcd(x);
            }
            if g > BigInt::from(1) {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rank_gf2(nrows: usize, cols: &[Vec<(usize, i64)>]) -> usize {
    let words = cols.len().div_ceil(64);
    let mut rows = vec![vec![0u64; words]; nrows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            if v.rem_euclid(2) == 1 {
                rows[i][j / 64] ^= 1 << (j % 64);
            }
        }
    }
    let mut rank = 0;
    for j in 0..cols.len() {
        let bit = |r: &Vec<u64>| r[j / 64] >> (j % 64) & 1 == 1;
        let Some(p) = (rank..nrows).find(|&i| bit(&rows[i])) else { continue };
        rows.swap(rank, p);
        let prow = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if bit(row) {
                for (x, y) in row.iter_mut().zip(&prow) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers of `(closed, sub)`; length is the ambient dimension plus one.
pub fn betti_pair(k: &SimplicialComplex, closed: &CellSet, sub: &CellSet) -> Result<Vec<usize>> {
    betti_pair_with(k, closed, sub, Coefficients::Rational)
}

pub fn betti_pair_with(
    k: &SimplicialComplex,
    closed: &CellSet,
    sub: &CellSet,
    coeff: Coefficients,
) -> Result<Vec<usize>> {
    let mats = boundary_matrices(k, closed, sub)?;
    let cells = relative_cells(k, closed, sub);
    let ranks: Vec<usize> = mats.iter().map(|m| rank(m, coeff)).collect();
    let rank_of = |p: usize| if p >= 1 && p <= ranks.len() { ranks[p - 1] } else { 0 };
    Ok((0..cells.len()).map(|p| cells[p].len() - rank_of(p) - rank_of(p + 1)).collect())
}

/// Absolute Betti numbers of the whole complex.
pub fn betti(k: &SimplicialComplex) -> Vec<usize> {
    betti_pair(k, &k.all(), &CellSet::new()).expect("complex is closed")
}

/// Betti numbers of a subcomplex given as a cell set.
pub fn betti_of(k: &SimplicialComplex, closed: &CellSet) -> Result<Vec<usize>> {
    betti_pair(k, closed, &CellSet::new())
}

/// Homology of `(Cl S, Ex S)` for an isolated invariant `S`.
pub fn conley_index(flow: &FlowGraph, s: &CellSet) -> Result<Vec<usize>> {
    if !flow.is_isolated_invariant(s) {
        return Err(Error::NotIsolatedInvariant);
    }
    let k = flow.complex();
    betti_pair(k, &k.closure(s), &k.exit_set(s))
}

/// Polynomial in `t` with integer coefficients, lowest degree first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntPolynomial(Vec<i64>);

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn eval(&self, t: i64) -> i64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn sub(&self, other: &IntPolynomial) -> IntPolynomial {
        let n = self.0.len().max(other.0.len());
        let at = |p: &IntPolynomial, i: usize| p.0.get(i).copied().unwrap_or(0);
        IntPolynomial::new((0..n).map(|i| at(self, i) - at(other, i)).collect())
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mag = c.abs();
            let body = match (p, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "t".into(),
                (1, m) => format!("{m}t"),
                (p, 1) => format!("t^{p}"),
                (p, m) => format!("{m}t^{p}"),
            };
            match (first, c < 0) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

pub fn poly_of(betti: &[usize]) -> IntPolynomial {
    IntPolynomial::new(betti.iter().map(|&b| b as i64).collect())
}

/// `(lhs − rhs) / (1 + t)`, exactly.
pub fn poly_sub_div(lhs: &IntPolynomial, rhs: &IntPolynomial) -> Result<IntPolynomial> {
    let d = lhs.sub(rhs).0;
    if d.is_empty() {
        return Ok(IntPolynomial::default());
    }
    // synthetic division by t + 1, from the top coefficient down
    let n = d.len();
    let mut q = vec![0i64; n - 1];
    let mut carry = 0i64;
    for i in (1..n).rev() {
        carry = d[i] - carry;
        q[i - 1] = carry;
    }
    if d[0] - carry != 0 {
        return Err(Error::NotDivisible);
    }
    Ok(IntPolynomial::new(q))
}
