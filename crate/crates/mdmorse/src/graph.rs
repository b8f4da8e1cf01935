//! Small adjacency-list digraph helpers shared by the flow, field and
//! component code. Nodes are `0..n`; successor lists are kept sorted so every
//! traversal is deterministic.

use std::collections::{BTreeSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

#[derive(Clone, Debug, Default)]
pub(crate) struct Digraph {
    pub succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut sets = vec![BTreeSet::new(); n];
        for (a, b) in edges {
            sets[a].insert(b);
        }
        Digraph { succ: sets.into_iter().map(|s| s.into_iter().collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    /// Strongly connected components, each sorted, listed by least member.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.len(), 0);
        for _ in 0..self.len() {
            g.add_node(());
        }
        for (a, bs) in self.succ.iter().enumerate() {
            for &b in bs {
                g.add_edge(NodeIndex::new(a), NodeIndex::new(b), ());
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        comps.sort();
        comps
    }

    /// Nodes lying on some directed cycle (self-loops count).
    pub fn cyclic_nodes(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for c in self.sccs() {
            if c.len() > 1 || self.succ[c[0]].binary_search(&c[0]).is_ok() {
                out.extend(c);
            }
        }
        out
    }

    /// Nodes reachable from `sources` by walks with at least one edge.
    pub fn reach_strict(&self, sources: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for s in sources {
            for &t in &self.succ[s] {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &t in &self.succ[u] {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    pub fn reversed(&self) -> Digraph {
        let mut pred = vec![Vec::new(); self.len()];
        for (a, bs) in self.succ.iter().enumerate() {
            for &b in bs {
                pred[b].push(a);
            }
        }
        Digraph { succ: pred }
    }

    /// Subgraph induced on `keep`, with node ids unchanged.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> Digraph {
        let succ = (0..self.len())
            .map(|a| {
                if keep.contains(&a) {
                    self.succ[a].iter().copied().filter(|b| keep.contains(b)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Digraph { succ }
    }

    /// A cycle of length at least two through distinct nodes, ignoring
    /// self-loops. Starts at the least node lying on such a cycle and is a
    /// shortest cycle through it; returned without repeating the start.
    pub fn least_cycle(&self) -> Option<Vec<usize>> {
        let loopless = Digraph {
            succ: self
                .succ
                .iter()
                .enumerate()
                .map(|(a, bs)| bs.iter().copied().filter(|&b| b != a).collect())
                .collect(),
        };
        let comp = loopless.sccs().into_iter().filter(|c| c.len() > 1).min_by_key(|c| c[0])?;
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        let start = comp[0];
        let mut parent = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &t in &loopless.succ[u] {
                if !members.contains(&t) {
                    continue;
                }
                if t == start {
                    let mut path = vec![u];
                    let mut cur = u;
                    while cur != start {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if parent[t] == usize::MAX {
                    parent[t] = u;
                    queue.push_back(t);
                }
            }
        }
        unreachable!("strongly connected component without a cycle")
    }

    /// Transitive closure as sorted reachability sets (strict walks).
    pub fn closure(&self) -> Vec<BTreeSet<usize>> {
        (0..self.len()).map(|a| self.reach_strict([a])).collect()
    }
}
