//! The multivalued flow Π_V induced by a discrete vector field, and the
//! dynamical notions built on it: invariant and isolated invariant sets,
//! chain recurrence, Morse decompositions and Morse sets.
//!
//! Full solutions are bi-infinite walks. In a finite digraph a walk can be
//! extended forever forward from σ iff σ reaches a cycle, and backward iff a
//! cycle reaches σ. The cells visited infinitely often by a walk are strongly
//! connected, so α- and ω-limit sets always sit inside one basic set. All
//! checks below are phrased through these reachability facts.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::complex::{CellId, CellSet, SimplicialComplex};
use crate::error::{Error, Result};
use crate::field::{DiscreteVectorField, Role};
use crate::graph::Digraph;

#[derive(Clone, Debug)]
pub struct FlowGraph {
    field: DiscreteVectorField,
    fwd: Digraph,
    bwd: Digraph,
}

/// Indexed family of disjoint sets with a strict partial order on indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorseDecomposition {
    pub sets: Vec<CellSet>,
    /// Pairs `(r, r')` with `r < r'`, transitively closed. Solutions run from
    /// `M_{r'}` down to `M_r`.
    below: BTreeSet<(usize, usize)>,
}

impl MorseDecomposition {
    /// `relations` lists pairs `(lower, upper)`; the transitive closure is taken.
    pub fn new(sets: Vec<CellSet>, relations: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let n = sets.len();
        let g = Digraph::from_edges(n, relations.into_iter().map(|(lo, up)| (up, lo)));
        let below = g
            .closure()
            .into_iter()
            .enumerate()
            .flat_map(|(up, los)| los.into_iter().map(move |lo| (lo, up)))
            .collect();
        MorseDecomposition { sets, below }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Strict order `r < r'`.
    pub fn less(&self, r: usize, r2: usize) -> bool {
        self.below.contains(&(r, r2))
    }

    /// All strict relations as `(upper, lower)`, i.e. in flow direction.
    pub fn flows_to(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.below.iter().map(|&(lo, up)| (up, lo)).collect();
        v.sort_unstable();
        v
    }

    /// Covering relations of the order as `(upper, lower)`.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        self.flows_to()
            .into_iter()
            .filter(|&(up, lo)| !(0..self.len()).any(|m| self.less(m, up) && self.less(lo, m)))
            .collect()
    }

    pub fn order_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.below.iter().copied()
    }

    /// Index of the set containing `c`.
    pub fn index_of(&self, c: CellId) -> Option<usize> {
        self.sets.iter().position(|s| s.contains(&c))
    }
}

impl FlowGraph {
    pub fn new(field: &DiscreteVectorField) -> Self {
        let k = field.complex();
        let mut edges = Vec::new();
        for c in 0..k.len() {
            match field.role(c) {
                Role::Fixed => edges.extend(k.faces(c).into_iter().map(|t| (c, t))),
                Role::Head(t) => edges.extend(
                    k.faces(c).into_iter().filter(|&x| x != c && x != t).map(|x| (c, x)),
                ),
                Role::Tail(h) => edges.push((c, h)),
            }
        }
        let fwd = Digraph::from_edges(k.len(), edges);
        let bwd = fwd.reversed();
        FlowGraph { field: field.clone(), fwd, bwd }
    }

    pub fn field(&self) -> &DiscreteVectorField {
        &self.field
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.field.complex()
    }

    pub fn successors(&self, c: CellId) -> &[CellId] {
        &self.fwd.succ[c]
    }

    pub fn predecessors(&self, c: CellId) -> Vec<CellId> {
        let mut p = self.bwd.succ[c].clone();
        p.sort_unstable();
        p
    }

    pub fn edges(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.fwd.succ.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }

    /// A walk with at least one step leads from `from` to `to`.
    pub fn connects(&self, from: CellId, to: CellId) -> bool {
        self.fwd.reach_strict([from]).contains(&to)
    }

    /// Cells reached from `a` by walks of length at least one.
    pub fn forward_set(&self, a: &CellSet) -> CellSet {
        self.fwd.reach_strict(a.iter().copied())
    }

    /// Cells that reach `a` by walks of length at least one.
    pub fn backward_set(&self, a: &CellSet) -> CellSet {
        self.bwd.reach_strict(a.iter().copied())
    }

    /// Members of `a` through which a full solution stays inside `a`.
    pub fn invariant_part(&self, a: &CellSet) -> CellSet {
        let g = self.fwd.induced(a);
        let cyc = g.cyclic_nodes();
        let mut ahead: CellSet = g.reach_strict(cyc.iter().copied());
        ahead.extend(cyc.iter().copied());
        let mut behind: CellSet = g.reversed().reach_strict(cyc.iter().copied());
        behind.extend(cyc.iter().copied());
        ahead.intersection(&behind).copied().filter(|c| a.contains(c)).collect()
    }

    pub fn has_full_solution_through(&self, c: CellId, a: &CellSet) -> bool {
        a.contains(&c) && self.invariant_part(a).contains(&c)
    }

    pub fn is_invariant(&self, s: &CellSet) -> bool {
        self.invariant_part(s).len() == s.len()
    }

    pub fn is_isolated_invariant(&self, s: &CellSet) -> bool {
        self.isolation_failure(s).is_none()
    }

    /// Reason `s` fails to be isolated invariant, if it does.
    pub fn isolation_failure(&self, s: &CellSet) -> Option<String> {
        let k = self.complex();
        if !self.is_invariant(s) {
            return Some("not invariant".into());
        }
        let ex = k.exit_set(s);
        if !k.is_subcomplex(&ex) {
            return Some("exit set is not closed".into());
        }
        for &x in s {
            for &y in self.successors(x) {
                if ex.contains(&y) && self.successors(y).iter().any(|z| s.contains(z)) {
                    return Some(format!(
                        "solution leaves through {} and returns",
                        k.simplex(y)
                    ));
                }
            }
        }
        None
    }

    pub fn chain_recurrent_set(&self) -> CellSet {
        self.fwd.cyclic_nodes()
    }

    /// The finest Morse decomposition; sets are listed by least member.
    pub fn basic_sets(&self) -> MorseDecomposition {
        let cyc = self.chain_recurrent_set();
        let sets: Vec<CellSet> = self
            .fwd
            .sccs()
            .into_iter()
            .filter(|c| cyc.contains(&c[0]))
            .map(|c| c.into_iter().collect())
            .collect();
        let reach = self.set_reachability(&sets);
        let rel = reach.into_iter().filter(|&(up, lo)| up != lo).map(|(up, lo)| (lo, up));
        MorseDecomposition::new(sets, rel)
    }

    /// Pairs `(i, j)` with a walk from `sets[i]` to `sets[j]`.
    fn set_reachability(&self, sets: &[CellSet]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in sets.iter().enumerate() {
            let fwd = self.forward_set(a);
            for (j, b) in sets.iter().enumerate() {
                if b.iter().any(|c| fwd.contains(c)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Only fixed points recur, and only through their self-loops.
    pub fn is_acyclic(&self) -> bool {
        self.fwd
            .sccs()
            .iter()
            .all(|c| c.len() == 1 && (self.field.is_fixed(c[0]) || !self.successors(c[0]).contains(&c[0])))
    }

    /// `C(A′, A)`: cells on solutions from `a_from` to `a_to`.
    pub fn connecting_set(&self, a_from: &CellSet, a_to: &CellSet) -> Result<CellSet> {
        if !self.is_invariant(a_from) || !self.is_invariant(a_to) {
            return Err(Error::NotInvariant);
        }
        Ok(self.connecting_set_unchecked(a_from, a_to))
    }

    fn connecting_set_unchecked(&self, a_from: &CellSet, a_to: &CellSet) -> CellSet {
        let ahead = self.forward_set(a_from);
        let behind = self.backward_set(a_to);
        ahead.intersection(&behind).copied().collect()
    }

    /// `M(I)`: union of `C(M_{r′}, M_r)` over `r, r′ ∈ I`.
    pub fn morse_set(&self, m: &MorseDecomposition, indices: &[usize]) -> CellSet {
        let union: CellSet = indices.iter().flat_map(|&r| m.sets[r].iter().copied()).collect();
        self.connecting_set_unchecked(&union, &union)
    }

    /// Coarsens `m` by a partition of its index set. Fails with the block
    /// sequence of a nontrivial cycle between the induced Morse sets.
    pub fn coarsen(&self, m: &MorseDecomposition, partition: &[Vec<usize>]) -> Result<MorseDecomposition> {
        let owner = partition_owner(m.len(), partition)?;
        let mut edges = Vec::new();
        for (i, j) in self.set_reachability(&m.sets) {
            if owner[i] != owner[j] {
                edges.push((owner[i], owner[j]));
            }
        }
        let blocks = Digraph::from_edges(partition.len(), edges);
        if let Some(cycle) = blocks.least_cycle() {
            return Err(Error::CycleDetected(cycle));
        }
        let sets = partition.iter().map(|b| self.morse_set(m, b)).collect();
        let rel: Vec<(usize, usize)> = blocks
            .succ
            .iter()
            .enumerate()
            .flat_map(|(up, los)| los.iter().map(move |&lo| (lo, up)))
            .collect();
        Ok(MorseDecomposition::new(sets, rel))
    }

    pub fn is_morse_decomposition(&self, m: &MorseDecomposition) -> bool {
        self.morse_decomposition_failure(m).is_none()
    }

    /// First violated condition, phrased for humans.
    pub fn morse_decomposition_failure(&self, m: &MorseDecomposition) -> Option<String> {
        for i in 0..m.len() {
            for j in i + 1..m.len() {
                if !m.sets[i].is_disjoint(&m.sets[j]) {
                    return Some(format!("sets {i} and {j} intersect"));
                }
            }
            if let Some(why) = self.isolation_failure(&m.sets[i]) {
                return Some(format!("set {i}: {why}"));
            }
        }
        for b in self.basic_sets().sets {
            if m.sets.iter().filter(|s| b.is_subset(s)).count() != 1 {
                return Some("a basic set is not contained in exactly one set".into());
            }
        }
        for (i, s) in m.sets.iter().enumerate() {
            if &self.connecting_set_unchecked(s, s) != s {
                return Some(format!("set {i} differs from its self-connecting set"));
            }
        }
        if m.order_pairs().any(|(lo, up)| lo == up || m.less(up, lo)) {
            return Some("order is not antisymmetric".into());
        }
        for (up, lo) in self.set_reachability(&m.sets) {
            if up != lo && !m.less(lo, up) {
                return Some(format!("set {up} flows to set {lo} against the order"));
            }
        }
        None
    }
}

pub fn flow_of(field: &DiscreteVectorField) -> FlowGraph {
    FlowGraph::new(field)
}

/// Block index for every element of `0..n`.
fn partition_owner(n: usize, partition: &[Vec<usize>]) -> Result<Vec<usize>> {
    let mut owner = vec![usize::MAX; n];
    for (b, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::InvalidPartition(format!("block {b} is empty")));
        }
        for &r in block {
            if r >= n {
                return Err(Error::InvalidPartition(format!("index {r} out of range")));
            }
            if owner[r] != usize::MAX {
                return Err(Error::InvalidPartition(format!("index {r} appears twice")));
            }
            owner[r] = b;
        }
    }
    if let Some(r) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(Error::InvalidPartition(format!("index {r} is not covered")));
    }
    Ok(owner)
}
