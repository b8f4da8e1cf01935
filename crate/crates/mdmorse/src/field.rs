//! Discrete vector fields: injective partial maps sending each simplex to
//! itself or to one of its cofacets.

use std::sync::Arc;

use crate::complex::{CellId, CellSet, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// Role of a simplex under a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Fixed,
    /// In `dom V \ Fix V`; carries `V(σ)`.
    Tail(CellId),
    /// In `im V \ Fix V`; carries `V⁻¹(σ)`.
    Head(CellId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteVectorField {
    complex: Arc<SimplicialComplex>,
    roles: Vec<Role>,
}

/// Alternating sequence `α₀, β₀, α₁, …, αₙ` with `V(αᵢ) = βᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPath(pub Vec<CellId>);

impl VPath {
    pub fn is_closed(&self) -> bool {
        self.0.len() > 1 && self.0.first() == self.0.last()
    }
}

impl DiscreteVectorField {
    pub fn new(complex: Arc<SimplicialComplex>, pairs: &[(CellId, CellId)], fixed: &[CellId]) -> Result<Self> {
        let name = |c: CellId| complex.simplex(c).clone();
        let mut roles: Vec<Option<Role>> = vec![None; complex.len()];
        for &(t, h) in pairs {
            if !complex.cofacets(t).contains(&h) {
                return Err(Error::NotCofacet { tail: name(t), head: name(h) });
            }
        }
        for &(t, h) in pairs {
            match roles[h] {
                None => roles[h] = Some(Role::Head(t)),
                Some(Role::Head(_)) => return Err(Error::NotInjective { head: name(h) }),
                Some(_) => return Err(Error::Overlap(name(h))),
            }
        }
        for &(t, h) in pairs {
            if roles[t].is_some() {
                return Err(Error::Overlap(name(t)));
            }
            roles[t] = Some(Role::Tail(h));
        }
        for &c in fixed {
            if roles[c].is_some() {
                return Err(Error::Overlap(name(c)));
            }
            roles[c] = Some(Role::Fixed);
        }
        let roles = roles
            .into_iter()
            .enumerate()
            .map(|(c, r)| r.ok_or_else(|| Error::CoverageGap(name(c))))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiscreteVectorField { complex, roles })
    }

    pub fn from_simplices(
        complex: Arc<SimplicialComplex>,
        pairs: &[(Simplex, Simplex)],
        fixed: &[Simplex],
    ) -> Result<Self> {
        let pairs = pairs
            .iter()
            .map(|(t, h)| Ok((complex.require(t)?, complex.require(h)?)))
            .collect::<Result<Vec<_>>>()?;
        let fixed = fixed.iter().map(|s| complex.require(s)).collect::<Result<Vec<_>>>()?;
        Self::new(complex, &pairs, &fixed)
    }

    pub fn all_fixed(complex: Arc<SimplicialComplex>) -> Self {
        let roles = vec![Role::Fixed; complex.len()];
        DiscreteVectorField { complex, roles }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn role(&self, c: CellId) -> Role {
        self.roles[c]
    }

    pub fn is_fixed(&self, c: CellId) -> bool {
        self.roles[c] == Role::Fixed
    }

    /// `V(σ)` for `σ ∈ dom V`.
    pub fn apply(&self, c: CellId) -> Option<CellId> {
        match self.roles[c] {
            Role::Fixed => Some(c),
            Role::Tail(h) => Some(h),
            Role::Head(_) => None,
        }
    }

    /// σ⁺: `V(σ)` on the domain, σ itself otherwise.
    pub fn plus(&self, c: CellId) -> CellId {
        match self.roles[c] {
            Role::Tail(h) => h,
            _ => c,
        }
    }

    /// σ⁻: σ itself on the domain, `V⁻¹(σ)` otherwise.
    pub fn minus(&self, c: CellId) -> CellId {
        match self.roles[c] {
            Role::Head(t) => t,
            _ => c,
        }
    }

    pub fn pairs(&self) -> Vec<(CellId, CellId)> {
        self.roles
            .iter()
            .enumerate()
            .filter_map(|(c, r)| match r {
                Role::Tail(h) => Some((c, *h)),
                _ => None,
            })
            .collect()
    }

    pub fn fixed(&self) -> Vec<CellId> {
        (0..self.roles.len()).filter(|&c| self.is_fixed(c)).collect()
    }

    /// Same pairing on an equal complex.
    pub fn same_as(&self, other: &DiscreteVectorField) -> bool {
        self.complex == other.complex && self.roles == other.roles
    }

    pub fn is_v_compatible(&self, a: &CellSet) -> bool {
        self.first_incompatible(a).is_none()
    }

    /// Least σ with exactly one of σ⁻, σ⁺ in `a`.
    pub fn first_incompatible(&self, a: &CellSet) -> Option<CellId> {
        (0..self.roles.len()).find(|&c| a.contains(&self.minus(c)) != a.contains(&self.plus(c)))
    }

    pub fn is_acyclic(&self) -> bool {
        self.closed_path().is_none()
    }

    /// A nontrivial closed V-path, if any. Chosen deterministically: it
    /// starts at the least tail lying on a closed path and is shortest.
    pub fn closed_path(&self) -> Option<VPath> {
        let k = &self.complex;
        let mut edges = Vec::new();
        for (a, b) in self.pairs() {
            for &next in k.facets(b) {
                if next != a && matches!(self.roles[next], Role::Tail(_)) {
                    edges.push((a, next));
                }
            }
        }
        let tails = Digraph::from_edges(k.len(), edges);
        let cycle = tails.least_cycle()?;
        let mut cells = Vec::with_capacity(2 * cycle.len() + 1);
        for &a in &cycle {
            cells.push(a);
            cells.push(self.plus(a));
        }
        cells.push(cycle[0]);
        Some(VPath(cells))
    }

    pub fn closed_path_simplices(&self) -> Option<Vec<Simplex>> {
        self.closed_path()
            .map(|p| p.0.iter().map(|&c| self.complex.simplex(c).clone()).collect())
    }
}
