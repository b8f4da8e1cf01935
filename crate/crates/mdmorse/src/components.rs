//! Critical components: classes of critical cells joined by gradient flow
//! while sharing a coordinate value, and the Morse decompositions they induce.

use crate::complex::CellId;
use crate::dynamics::{flow_of, FlowGraph, MorseDecomposition};
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::mdm::MdmFunction;
use crate::morse::{morse_report_decomposition, MorseReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalComponents {
    /// Classes sorted internally and listed by least member.
    pub classes: Vec<Vec<CellId>>,
}

impl CriticalComponents {
    pub fn class_of(&self, c: CellId) -> Option<usize> {
        self.classes.iter().position(|m| m.contains(&c))
    }
}

/// Directed edges between distinct components along the gradient flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentGraph {
    pub components: CriticalComponents,
    /// `(from, to)` class indices, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl ComponentGraph {
    /// A cycle of distinct components, if any.
    pub fn f_cycle(&self) -> Option<Vec<usize>> {
        Digraph::from_edges(self.components.classes.len(), self.edges.iter().copied()).least_cycle()
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn shares_coordinate(f: &MdmFunction, a: CellId, b: CellId) -> bool {
    f.value(a).coords().iter().zip(f.value(b).coords()).any(|(x, y)| x == y)
}

fn components_with(f: &MdmFunction, flow: &FlowGraph) -> Result<CriticalComponents> {
    let crit = f.critical_points()?;
    let mut uf = UnionFind((0..crit.len()).collect());
    for (i, &a) in crit.iter().enumerate() {
        let ahead = flow.forward_set(&[a].into());
        for (j, &b) in crit.iter().enumerate() {
            if i != j && ahead.contains(&b) && shares_coordinate(f, a, b) {
                uf.union(i, j);
            }
        }
    }
    let mut classes: Vec<Vec<CellId>> = Vec::new();
    let mut slot = vec![usize::MAX; crit.len()];
    for (i, &c) in crit.iter().enumerate() {
        let r = uf.find(i);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(c);
    }
    // crit is sorted, so classes come out sorted and ordered by least member
    Ok(CriticalComponents { classes })
}

pub fn critical_components(f: &MdmFunction) -> Result<CriticalComponents> {
    components_with(f, &flow_of(&f.gradient()?))
}

pub fn component_graph(f: &MdmFunction) -> Result<ComponentGraph> {
    let flow = flow_of(&f.gradient()?);
    let components = components_with(f, &flow)?;
    let mut edges = Vec::new();
    for (i, from) in components.classes.iter().enumerate() {
        let ahead = flow.forward_set(&from.iter().copied().collect());
        for (j, to) in components.classes.iter().enumerate() {
            if i != j && to.iter().any(|c| ahead.contains(c)) {
                edges.push((i, j));
            }
        }
    }
    Ok(ComponentGraph { components, edges })
}

pub fn is_acyclic_mdm(f: &MdmFunction) -> Result<bool> {
    Ok(component_graph(f)?.f_cycle().is_none())
}

/// Morse sets of the components; fails with an f-cycle given by the least
/// critical cell of each component on it.
pub fn component_decomposition(f: &MdmFunction) -> Result<MorseDecomposition> {
    let flow = flow_of(&f.gradient()?);
    component_decomposition_with(f, &flow)
}

fn component_decomposition_with(f: &MdmFunction, flow: &FlowGraph) -> Result<MorseDecomposition> {
    let components = components_with(f, flow)?;
    let finest = flow.basic_sets();
    let partition: Vec<Vec<usize>> = components
        .classes
        .iter()
        .map(|class| {
            class.iter().map(|&c| finest.index_of(c).expect("critical cells are basic sets")).collect()
        })
        .collect();
    flow.coarsen(&finest, &partition).map_err(|e| match e {
        Error::CycleDetected(blocks) => Error::FCycle(
            blocks.iter().map(|&b| f.complex().simplex(components.classes[b][0]).clone()).collect(),
        ),
        other => other,
    })
}

pub fn component_inequalities(f: &MdmFunction) -> Result<MorseReport> {
    let flow = flow_of(&f.gradient()?);
    let m = component_decomposition_with(f, &flow)?;
    morse_report_decomposition(&flow, &m)
}
