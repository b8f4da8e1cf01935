//! Finite abstract simplicial complexes.
//!
//! Every simplex of a [`SimplicialComplex`] gets a dense [`CellId`]. Ids are
//! assigned in lexicographic order of the vertex lists, so iterating a
//! [`CellSet`] visits simplices lexicographically.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

pub type CellId = usize;

/// A set of cells of one ambient complex, ordered lexicographically.
pub type CellSet = BTreeSet<CellId>;

/// Strictly ascending, non-empty list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Sorts `vertices`; rejects empty input and repeated vertices.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidSimplex("no vertices".into()));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    pub fn vertex(v: u32) -> Self {
        Simplex(vec![v])
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    /// Codimension-one faces, in the order obtained by deleting vertex 0, 1, ...
    pub fn facets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            Simplex(v)
        })
    }

    /// All non-empty faces including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex dimension too large");
        (1u32..(1 << n))
            .map(|mask| {
                Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect())
            })
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        let mut it = other.0.iter();
        self.0.iter().all(|v| it.any(|w| w == v))
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    cells: Vec<Simplex>,
    index: HashMap<Simplex, CellId>,
    facets: Vec<Vec<CellId>>,
    cofacets: Vec<Vec<CellId>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Builds a complex from a face-closed collection. Duplicates are merged.
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let sorted: BTreeSet<Simplex> = simplices.into_iter().collect();
        for s in &sorted {
            for f in s.facets() {
                if !sorted.contains(&f) {
                    return Err(Error::MissingFace { simplex: s.clone(), face: f });
                }
            }
        }
        let cells: Vec<Simplex> = sorted.into_iter().collect();
        let index: HashMap<Simplex, CellId> =
            cells.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut facets = vec![Vec::new(); cells.len()];
        let mut cofacets = vec![Vec::new(); cells.len()];
        for (i, s) in cells.iter().enumerate() {
            for f in s.facets() {
                let j = index[&f];
                facets[i].push(j);
                cofacets[j].push(i);
            }
            facets[i].sort_unstable();
        }
        // cofacets are pushed in increasing order of i already
        Ok(SimplicialComplex { cells, index, facets, cofacets })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn simplex(&self, id: CellId) -> &Simplex {
        &self.cells[id]
    }

    pub fn id_of(&self, s: &Simplex) -> Option<CellId> {
        self.index.get(s).copied()
    }

    pub fn require(&self, s: &Simplex) -> Result<CellId> {
        self.id_of(s).ok_or_else(|| Error::UnknownSimplex(s.clone()))
    }

    pub fn set_of<'a>(&self, simplices: impl IntoIterator<Item = &'a Simplex>) -> Result<CellSet> {
        simplices.into_iter().map(|s| self.require(s)).collect()
    }

    pub fn dim_of(&self, id: CellId) -> usize {
        self.cells[id].dim()
    }

    /// Largest simplex dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().map(Simplex::dim).max()
    }

    pub fn facets(&self, id: CellId) -> &[CellId] {
        &self.facets[id]
    }

    pub fn cofacets(&self, id: CellId) -> &[CellId] {
        &self.cofacets[id]
    }

    pub fn all(&self) -> CellSet {
        (0..self.len()).collect()
    }

    /// All faces of `id`, itself included.
    pub fn faces(&self, id: CellId) -> CellSet {
        let mut out = CellSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend_from_slice(&self.facets[c]);
            }
        }
        out
    }

    pub fn closure(&self, a: &CellSet) -> CellSet {
        let mut out = CellSet::new();
        let mut stack: Vec<CellId> = a.iter().copied().collect();
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.facets[c].iter().filter(|f| !out.contains(f)));
            }
        }
        out
    }

    pub fn exit_set(&self, a: &CellSet) -> CellSet {
        self.closure(a).difference(a).copied().collect()
    }

    pub fn is_subcomplex(&self, a: &CellSet) -> bool {
        self.first_missing_face(a).is_none()
    }

    /// Least member of `a` having a facet outside `a`.
    pub fn first_missing_face(&self, a: &CellSet) -> Option<CellId> {
        a.iter().copied().find(|&c| self.facets[c].iter().any(|f| !a.contains(f)))
    }

    /// Removes the free pair `(face, cofacet)` and returns the smaller complex.
    pub fn elementary_collapse(&self, face: &Simplex, cofacet: &Simplex) -> Result<SimplicialComplex> {
        let mut current = self.all();
        let (s, t) = (self.require(face)?, self.require(cofacet)?);
        self.collapse_within(&mut current, s, t)?;
        SimplicialComplex::new(current.into_iter().map(|c| self.cells[c].clone()))
    }

    /// Elementary collapse inside the subcomplex `current`.
    pub fn collapse_within(&self, current: &mut CellSet, face: CellId, cofacet: CellId) -> Result<()> {
        if !self.is_free_pair(current, face, cofacet) {
            return Err(Error::NotFreeFace {
                face: self.cells[face].clone(),
                cofacet: self.cells[cofacet].clone(),
            });
        }
        current.remove(&face);
        current.remove(&cofacet);
        Ok(())
    }

    /// `face` has exactly one cofacet inside `current`, and that cofacet is `cofacet`.
    pub fn is_free_pair(&self, current: &CellSet, face: CellId, cofacet: CellId) -> bool {
        if !current.contains(&face) || !current.contains(&cofacet) {
            return false;
        }
        let mut inside = self.cofacets[face].iter().filter(|c| current.contains(c));
        inside.next() == Some(&cofacet) && inside.next().is_none()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler_of(&self.all())
    }

    pub fn euler_of(&self, a: &CellSet) -> i64 {
        a.iter().map(|&c| if self.cells[c].dim().is_multiple_of(2) { 1 } else { -1 }).sum()
    }
}

/// Closes a list of simplices under taking faces.
pub fn close(simplices: impl IntoIterator<Item = Simplex>) -> Vec<Simplex> {
    let mut out = BTreeSet::new();
    for s in simplices {
        out.extend(s.faces());
    }
    out.into_iter().collect()
}
