//! Morse equations and inequalities, collapse sequences, and the split of a
//! sublevel set `K(b)` relative to `K(a)`.

use std::collections::{BTreeSet, HashMap};

use crate::complex::{CellId, CellSet, SimplicialComplex};
use crate::dynamics::{flow_of, FlowGraph, MorseDecomposition};
use crate::error::{Error, Result};
use crate::field::{DiscreteVectorField, Role};
use crate::homology::{betti, betti_of, conley_index, poly_of, poly_sub_div, IntPolynomial};
use crate::mdm::{in_q_box, MdmFunction, ValueVector};

/// Counts `m_p`, Betti numbers `β_p(K)` and the verdicts relating them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseReport {
    pub m: Vec<usize>,
    pub betti: Vec<usize>,
    pub euler_characteristic: i64,
    /// `Q(t)` with `Σ m_p t^p − P_K(t) = (1 + t) Q(t)`.
    pub q: IntPolynomial,
    pub q_nonnegative: bool,
    pub strong: bool,
    pub weak: bool,
    pub euler: bool,
}

impl MorseReport {
    pub fn new(mut m: Vec<usize>, mut betti: Vec<usize>, euler_characteristic: i64) -> Result<Self> {
        let n = m.len().max(betti.len());
        m.resize(n, 0);
        betti.resize(n, 0);
        let q = poly_sub_div(&poly_of(&m), &poly_of(&betti))?;
        let alt = |v: &[usize], p: usize| -> i64 {
            (0..=p).map(|j| if (p - j).is_multiple_of(2) { v[j] as i64 } else { -(v[j] as i64) }).sum()
        };
        let strong = (0..n).all(|p| alt(&m, p) >= alt(&betti, p));
        let weak = (0..n).all(|p| m[p] >= betti[p]);
        let signed = |v: &[usize]| -> i64 {
            v.iter().enumerate().map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) }).sum()
        };
        let euler = signed(&m) == euler_characteristic && signed(&betti) == euler_characteristic;
        Ok(MorseReport {
            q_nonnegative: q.is_nonnegative(),
            m,
            betti,
            euler_characteristic,
            q,
            strong,
            weak,
            euler,
        })
    }

    pub fn all_hold(&self) -> bool {
        self.q_nonnegative && self.strong && self.weak && self.euler
    }
}

/// Number of critical simplices per dimension.
pub fn morse_counts(f: &MdmFunction) -> Result<Vec<usize>> {
    let k = f.complex();
    let mut m = vec![0; k.dim().map_or(0, |d| d + 1)];
    for c in f.critical_points()? {
        m[k.dim_of(c)] += 1;
    }
    Ok(m)
}

pub fn morse_report_points(f: &MdmFunction) -> Result<MorseReport> {
    let k = f.complex();
    MorseReport::new(morse_counts(f)?, betti(k), k.euler_characteristic())
}

/// Report with `m_p` the sum of the `p`-th Conley coefficients of the sets.
pub fn morse_report_decomposition(flow: &FlowGraph, m: &MorseDecomposition) -> Result<MorseReport> {
    let k = flow.complex();
    let mut counts = vec![0; k.dim().map_or(0, |d| d + 1)];
    for s in &m.sets {
        for (p, b) in conley_index(flow, s)?.into_iter().enumerate() {
            counts[p] += b;
        }
    }
    MorseReport::new(counts, betti(k), k.euler_characteristic())
}

/// Ordered elementary collapses, each given as `(free face, cofacet)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CollapseSequence {
    pub steps: Vec<(CellId, CellId)>,
}

impl CollapseSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Applies every step to `start`; fails on the first illegal one.
    pub fn replay(&self, k: &SimplicialComplex, start: &CellSet) -> Result<CellSet> {
        let mut current = start.clone();
        for &(face, cofacet) in &self.steps {
            k.collapse_within(&mut current, face, cofacet)?;
        }
        Ok(current)
    }
}

/// Collapses `from` onto `onto` along `v`.
///
/// Repeatedly takes the least cell of the remaining region with no flow
/// predecessor inside the region; such a cell is a tail whose partner is its
/// only remaining cofacet.
pub fn collapse_to(from: &CellSet, onto: &CellSet, v: &DiscreteVectorField) -> Result<CollapseSequence> {
    let k = v.complex();
    for set in [from, onto] {
        if let Some(c) = k.first_missing_face(set) {
            return Err(Error::NotSubcomplex(k.simplex(c).clone()));
        }
        if let Some(c) = (0..k.len()).find(|&c| set.contains(&v.minus(c)) != set.contains(&v.plus(c))) {
            return Err(Error::NotCompatible(k.simplex(c).clone()));
        }
    }
    if !onto.is_subset(from) {
        return Err(Error::NotNested);
    }
    let mut region: CellSet = from.difference(onto).copied().collect();
    if let Some(&c) = region.iter().find(|&&c| v.is_fixed(c)) {
        return Err(Error::FixedPointOutside(k.simplex(c).clone()));
    }
    let flow = flow_of(v);
    let mut indeg: HashMap<CellId, usize> = region.iter().map(|&c| (c, 0)).collect();
    for &c in &region {
        for &t in flow.successors(c) {
            if let Some(d) = indeg.get_mut(&t) {
                *d += 1;
            }
        }
    }
    let mut ready: BTreeSet<CellId> = region.iter().copied().filter(|c| indeg[c] == 0).collect();
    let mut current = from.clone();
    let mut seq = CollapseSequence::default();
    while let Some(c) = ready.pop_first() {
        let Role::Tail(h) = v.role(c) else {
            unreachable!("a head always has its tail as predecessor")
        };
        k.collapse_within(&mut current, c, h)?;
        seq.steps.push((c, h));
        region.remove(&c);
        region.remove(&h);
        for x in [c, h] {
            for &t in flow.successors(x) {
                if region.contains(&t) {
                    let d = indeg.get_mut(&t).expect("region cell");
                    *d -= 1;
                    if *d == 0 {
                        ready.insert(t);
                    }
                }
            }
        }
    }
    if !region.is_empty() {
        return Err(Error::CyclicRegion);
    }
    Ok(seq)
}

/// Number of V-paths from the facets of `upper` down to `lower`, capped at 2,
/// together with the cells of the path when it is unique.
fn gradient_paths(v: &DiscreteVectorField, upper: CellId, lower: CellId) -> (usize, Vec<CellId>) {
    let k = v.complex();
    let mut memo: HashMap<CellId, usize> = HashMap::new();
    fn count(
        v: &DiscreteVectorField,
        a: CellId,
        lower: CellId,
        memo: &mut HashMap<CellId, usize>,
    ) -> usize {
        if let Some(&n) = memo.get(&a) {
            return n;
        }
        let n = if a == lower {
            1
        } else if let Role::Tail(b) = v.role(a) {
            let k = v.complex();
            k.facets(b)
                .iter()
                .filter(|&&x| x != a)
                .map(|&x| count(v, x, lower, memo))
                .sum::<usize>()
                .min(2)
        } else {
            0
        };
        memo.insert(a, n);
        n
    }
    let total: usize = k.facets(upper).iter().map(|&a| count(v, a, lower, &mut memo)).sum::<usize>().min(2);
    if total != 1 {
        return (total, Vec::new());
    }
    let mut path = Vec::new();
    let mut a = *k.facets(upper).iter().find(|&&a| memo[&a] == 1).expect("unique path start");
    loop {
        path.push(a);
        if a == lower {
            break;
        }
        let Role::Tail(b) = v.role(a) else { unreachable!() };
        path.push(b);
        a = *k.facets(b).iter().find(|&&x| x != a && memo.get(&x) == Some(&1)).expect("path continues");
    }
    (1, path)
}

/// Reverses the unique V-path between critical `upper` (dim p+1) and
/// critical `lower` (dim p); both stop being critical.
pub fn cancel_critical_pair(v: &DiscreteVectorField, upper: CellId, lower: CellId) -> Result<DiscreteVectorField> {
    let k = v.complex();
    if let Some(path) = v.closed_path_simplices() {
        return Err(Error::CyclicField(path));
    }
    let refuse = |paths| Error::NotCancellable {
        upper: k.simplex(upper).clone(),
        lower: k.simplex(lower).clone(),
        paths,
    };
    if !v.is_fixed(upper) || !v.is_fixed(lower) || k.dim_of(upper) != k.dim_of(lower) + 1 {
        return Err(refuse(0));
    }
    let (n, path) = gradient_paths(v, upper, lower);
    if n != 1 {
        return Err(refuse(n));
    }
    // path = α₀ β₀ α₁ β₁ … αₙ; new pairs α₀→upper, αᵢ₊₁→βᵢ
    let on_path: BTreeSet<CellId> = path.iter().copied().collect();
    let mut pairs: Vec<(CellId, CellId)> =
        v.pairs().into_iter().filter(|(t, _)| !on_path.contains(t)).collect();
    pairs.push((path[0], upper));
    for i in (1..path.len()).step_by(2) {
        pairs.push((path[i + 1], path[i]));
    }
    let fixed: Vec<CellId> = v.fixed().into_iter().filter(|&c| c != upper && c != lower).collect();
    DiscreteVectorField::new(k.clone(), &pairs, &fixed)
}

fn require_strictly_below(f: &MdmFunction, a: &ValueVector, b: &ValueVector) -> Result<()> {
    for v in [a, b] {
        if v.arity() != f.arity() {
            return Err(Error::ArityMismatch { expected: f.arity(), found: v.arity() });
        }
    }
    if !a.lneq(b)? {
        return Err(Error::OrderViolation);
    }
    Ok(())
}

/// A collapse `K(b) ↘ K(a)` realized after cancelling critical pairs.
#[derive(Clone, Debug)]
pub struct SublevelCollapse {
    pub k_a: CellSet,
    pub k_b: CellSet,
    /// Cancelled `(upper, lower)` critical pairs, in order.
    pub cancelled: Vec<(CellId, CellId)>,
    pub field: DiscreteVectorField,
    pub sequence: CollapseSequence,
}

/// Collapses `K(b)` onto `K(a)`. Critical cells of `K(b) \ K(a)` are first
/// removed by cancelling the least pair joined by a unique gradient path,
/// repeatedly; if some critical cell cannot be cancelled the collapse fails
/// with `FixedPointOutside`.
pub fn collapse_sublevels(f: &MdmFunction, a: &ValueVector, b: &ValueVector) -> Result<SublevelCollapse> {
    require_strictly_below(f, a, b)?;
    let k = f.complex();
    let (k_a, k_b) = (f.sublevel(a)?, f.sublevel(b)?);
    let mut v = f.gradient()?;
    let mut cancelled = Vec::new();
    loop {
        let outside: Vec<CellId> = k_b.difference(&k_a).copied().filter(|&c| v.is_fixed(c)).collect();
        if outside.is_empty() {
            break;
        }
        let pick = outside.iter().find_map(|&up| {
            outside
                .iter()
                .find(|&&lo| k.dim_of(up) == k.dim_of(lo) + 1 && gradient_paths(&v, up, lo).0 == 1)
                .map(|&lo| (up, lo))
        });
        let Some((up, lo)) = pick else {
            return Err(Error::FixedPointOutside(k.simplex(outside[0]).clone()));
        };
        v = cancel_critical_pair(&v, up, lo)?;
        cancelled.push((up, lo));
    }
    let sequence = collapse_to(&k_b, &k_a, &v)?;
    Ok(SublevelCollapse { k_a, k_b, cancelled, field: v, sequence })
}

/// `K(b) = K(a) ⊔ A ⊔ M(I) ⊔ B` with its two collapses.
#[derive(Clone, Debug)]
pub struct ExtendedDecomposition {
    pub k_a: CellSet,
    pub k_b: CellSet,
    /// Critical cells valued in `Q_a^b`.
    pub critical: Vec<CellId>,
    /// Cells of `K(b) \ K(a)` that do not connect to `I`.
    pub a_part: CellSet,
    pub morse_set: CellSet,
    /// Cells of `K(b) \ M(I)` that connect to `I`.
    pub b_part: CellSet,
    /// `K(b) ↘ K(a) ∪ A ∪ M(I)`.
    pub upper_collapse: CollapseSequence,
    /// `K(a) ∪ A ↘ K(a)`.
    pub lower_collapse: CollapseSequence,
}

impl ExtendedDecomposition {
    pub fn attached(&self) -> CellSet {
        self.k_a.iter().chain(&self.a_part).chain(&self.morse_set).copied().collect()
    }

    /// Structural properties that must hold; returns the failing ones.
    pub fn invariant_failures(&self, v: &DiscreteVectorField) -> Vec<String> {
        let k = v.complex();
        let mut out = Vec::new();
        let parts = [&self.k_a, &self.a_part, &self.morse_set, &self.b_part];
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let union: CellSet = parts.iter().flat_map(|p| p.iter().copied()).collect();
        if total != union.len() {
            out.push("parts overlap".to_string());
        }
        if union != self.k_b {
            out.push("parts do not cover K(b)".to_string());
        }
        for (name, p) in [("A", &self.a_part), ("M(I)", &self.morse_set), ("B", &self.b_part)] {
            if !v.is_v_compatible(p) {
                out.push(format!("{name} is not V-compatible"));
            }
        }
        let ka_a: CellSet = self.k_a.union(&self.a_part).copied().collect();
        if !k.is_subcomplex(&ka_a) {
            out.push("K(a) ∪ A is not a subcomplex".to_string());
        }
        if !k.is_subcomplex(&self.attached()) {
            out.push("K(a) ∪ A ∪ M(I) is not a subcomplex".to_string());
        }
        if self.a_part.iter().chain(&self.b_part).any(|&c| v.is_fixed(c)) {
            out.push("A or B contains a critical cell".to_string());
        }
        out
    }

    pub fn betti_before(&self, k: &SimplicialComplex) -> Vec<usize> {
        betti_of(k, &self.k_a).expect("sublevel sets are subcomplexes")
    }

    pub fn betti_after(&self, k: &SimplicialComplex) -> Vec<usize> {
        betti_of(k, &self.k_b).expect("sublevel sets are subcomplexes")
    }
}

pub fn extended_decomposition(f: &MdmFunction, a: &ValueVector, b: &ValueVector) -> Result<ExtendedDecomposition> {
    require_strictly_below(f, a, b)?;
    let v = f.gradient()?;
    let flow = flow_of(&v);
    let (k_a, k_b) = (f.sublevel(a)?, f.sublevel(b)?);
    let mut critical = Vec::new();
    for c in f.critical_points()? {
        if in_q_box(f.value(c), a, b)? {
            critical.push(c);
        }
    }
    let i_set: CellSet = critical.iter().copied().collect();
    let morse_set = flow.connecting_set(&i_set, &i_set)?;
    let to_i = flow.backward_set(&i_set);
    let a_part = k_b.iter().copied().filter(|c| !k_a.contains(c) && !to_i.contains(c)).collect();
    let b_part = k_b.iter().copied().filter(|c| !morse_set.contains(c) && to_i.contains(c)).collect();
    let mut d = ExtendedDecomposition {
        k_a,
        k_b,
        critical,
        a_part,
        morse_set,
        b_part,
        upper_collapse: CollapseSequence::default(),
        lower_collapse: CollapseSequence::default(),
    };
    d.upper_collapse = collapse_to(&d.k_b, &d.attached(), &v)?;
    let ka_a: CellSet = d.k_a.union(&d.a_part).copied().collect();
    d.lower_collapse = collapse_to(&ka_a, &d.k_a, &v)?;
    Ok(d)
}
