//! Tree routing instances: the input model, its text format, and the binary normal form that the
//! solvers work on.

mod format;
mod normalize;
mod tree;

use std::collections::HashMap;

pub use format::{parse_instance, serialize_instance, serialize_instance_with_comments};
pub use normalize::{contract_root_once, normalize, NormalizedInstance};
pub(crate) use normalize::normalize_view;
pub use tree::Tree;

use crate::error::{Error, Result};

/// Vertex identifier as it appears in instance files.
pub type VertexId = u64;

/// Read-only view shared by raw and normalized instances.
pub trait TreeInstance {
    fn tree(&self) -> &Tree;
    /// Dense indices of the terminals, ascending.
    fn terminals(&self) -> &[usize];
    fn distance_bound(&self) -> u64;
    /// External id of a dense vertex index.
    fn original_id(&self, v: usize) -> VertexId;
}

/// A rooted tree with integer edge weights, a terminal set and a distance bound `D`.
///
/// Vertices are stored densely in depth-first preorder (the depot is index 0); `ids` keeps the
/// identifiers used by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingInstance {
    tree: Tree,
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    terminals: Vec<usize>,
    distance_bound: u64,
}

/// One `edge <child> <parent> <weight>` record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSpec {
    pub child: VertexId,
    pub parent: VertexId,
    pub weight: u64,
}

impl EdgeSpec {
    pub fn new(child: VertexId, parent: VertexId, weight: u64) -> Self {
        EdgeSpec { child, parent, weight }
    }
}

impl RoutingInstance {
    pub fn new(
        distance_bound: u64,
        root: VertexId,
        edges: &[EdgeSpec],
        terminals: &[VertexId],
    ) -> Result<Self> {
        if distance_bound == 0 {
            return Err(Error::InvalidArgument("distance bound must be positive".into()));
        }
        Self::build(distance_bound, root, edges, terminals)
    }

    /// Same as [`RoutingInstance::new`] but accepts `D = 0`, which arises for sub-instances.
    pub(crate) fn build(
        distance_bound: u64,
        root: VertexId,
        edges: &[EdgeSpec],
        terminals: &[VertexId],
    ) -> Result<Self> {
        let mut slot: HashMap<VertexId, usize> = HashMap::with_capacity(edges.len() + 1);
        slot.insert(root, 0);
        for e in edges {
            if slot.insert(e.child, slot.len()).is_some() {
                return Err(Error::DuplicateVertex { line: 0, id: e.child });
            }
        }
        let n = slot.len();
        let mut parent = vec![None; n];
        let mut weight = vec![0u64; n];
        for e in edges {
            let c = slot[&e.child];
            let p = *slot.get(&e.parent).ok_or(Error::Disconnected(e.parent))?;
            parent[c] = Some(p);
            weight[c] = e.weight;
        }
        let mut raw_ids = vec![0; n];
        for (&id, &s) in &slot {
            raw_ids[s] = id;
        }
        if let Some(v) = first_cyclic(&parent) {
            return Err(Error::Cyclic(raw_ids[v]));
        }
        let raw = Tree::from_parents(0, parent, weight)?;

        // relabel in preorder
        let order = raw.preorder().to_vec();
        let mut new_of = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            new_of[v] = i;
        }
        let mut parent = vec![None; n];
        let mut weight = vec![0u64; n];
        let mut ids = vec![0; n];
        for &v in &order {
            let i = new_of[v];
            parent[i] = raw.parent(v).map(|p| new_of[p]);
            weight[i] = raw.weight(v);
            ids[i] = raw_ids[v];
        }
        let tree = Tree::from_parents(0, parent, weight)?;
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut term = Vec::with_capacity(terminals.len());
        for &t in terminals {
            term.push(*index.get(&t).ok_or(Error::UnknownVertex(t))?);
        }
        term.sort_unstable();
        if let Some(w) = term.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("duplicate terminal {}", ids[w[0]])));
        }
        Ok(RoutingInstance {
            tree,
            ids,
            index,
            terminals: term,
            distance_bound,
        })
    }

    pub fn root_id(&self) -> VertexId {
        self.ids[self.tree.root()]
    }

    pub fn vertex_index(&self, id: VertexId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn terminal_ids(&self) -> Vec<VertexId> {
        self.terminals.iter().map(|&t| self.ids[t]).collect()
    }

    /// Edges in preorder of their child vertex.
    pub fn edges(&self) -> Vec<EdgeSpec> {
        (1..self.ids.len())
            .map(|v| {
                let p = self.tree.parent(v).expect("non-root");
                EdgeSpec::new(self.ids[v], self.ids[p], self.tree.weight(v))
            })
            .collect()
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> Result<u64> {
        let a = self.vertex_index(u).ok_or(Error::UnknownVertex(u))?;
        let b = self.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.tree.dist(a, b))
    }

    /// Copy with every edge weight and `D` multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<Self> {
        let edges: Vec<EdgeSpec> = self
            .edges()
            .into_iter()
            .map(|e| {
                e.weight
                    .checked_mul(factor)
                    .map(|w| EdgeSpec::new(e.child, e.parent, w))
                    .ok_or_else(|| Error::Overflow("scaled weight".into()))
            })
            .collect::<Result<_>>()?;
        let bound = self
            .distance_bound
            .checked_mul(factor)
            .ok_or_else(|| Error::Overflow("scaled bound".into()))?;
        RoutingInstance::new(bound, self.root_id(), &edges, &self.terminal_ids())
    }
}

impl TreeInstance for RoutingInstance {
    fn tree(&self) -> &Tree {
        &self.tree
    }

    fn terminals(&self) -> &[usize] {
        &self.terminals
    }

    fn distance_bound(&self) -> u64 {
        self.distance_bound
    }

    fn original_id(&self, v: usize) -> VertexId {
        self.ids[v]
    }
}

fn first_cyclic(parent: &[Option<usize>]) -> Option<usize> {
    // 0 = unvisited, 1 = on current walk, 2 = reaches the root
    let mut state = vec![0u8; parent.len()];
    for start in 0..parent.len() {
        let mut walk = Vec::new();
        let mut v = start;
        loop {
            match state[v] {
                2 => break,
                1 => return Some(v),
                _ => {}
            }
            state[v] = 1;
            walk.push(v);
            match parent[v] {
                Some(p) => v = p,
                None => break,
            }
        }
        for w in walk {
            state[w] = 2;
        }
    }
    None
}

/// Tour count plus, optionally, the terminal sets of the tours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub tour_count: usize,
    pub tours: Option<Vec<Vec<VertexId>>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn star() -> RoutingInstance {
        RoutingInstance::new(14, 0, &[EdgeSpec::new(1, 0, 3), EdgeSpec::new(2, 0, 4)], &[1, 2]).unwrap()
    }

    #[test]
    fn builds_star() {
        let inst = star();
        assert_eq!(inst.terminals().len(), 2);
        assert_eq!(inst.dist(1, 2).unwrap(), 7);
        assert_eq!(inst.dist(0, 0).unwrap(), 0);
        assert_eq!(inst.dist(0, 2).unwrap(), 4);
        assert_eq!(inst.dist(0, 9), Err(Error::UnknownVertex(9)));
    }

    #[test]
    fn relabels_in_preorder() {
        let inst = RoutingInstance::new(
            50,
            10,
            &[EdgeSpec::new(30, 20, 1), EdgeSpec::new(20, 10, 2), EdgeSpec::new(40, 10, 5)],
            &[30, 40],
        )
        .unwrap();
        assert_eq!(inst.original_id(0), 10);
        assert_eq!(inst.tree().children(0).len(), 2);
        assert_eq!(inst.tree().depth(inst.vertex_index(30).unwrap()), 3);
    }

    #[test]
    fn structural_errors() {
        let dup = RoutingInstance::new(5, 0, &[EdgeSpec::new(1, 0, 1), EdgeSpec::new(1, 0, 2)], &[]);
        assert!(matches!(dup, Err(Error::DuplicateVertex { id: 1, .. })));
        let cyc = RoutingInstance::new(5, 0, &[EdgeSpec::new(1, 2, 1), EdgeSpec::new(2, 1, 1)], &[]);
        assert!(matches!(cyc, Err(Error::Cyclic(_))));
        let dis = RoutingInstance::new(5, 0, &[EdgeSpec::new(1, 7, 1)], &[]);
        assert_eq!(dis, Err(Error::Disconnected(7)));
        let unknown = RoutingInstance::new(5, 0, &[], &[3]);
        assert_eq!(unknown, Err(Error::UnknownVertex(3)));
        assert!(RoutingInstance::new(0, 0, &[], &[]).is_err());
    }
}
