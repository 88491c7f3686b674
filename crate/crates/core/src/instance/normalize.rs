//! Reduction to the binary normal form: every leaf is a terminal, every terminal is a leaf and
//! every internal vertex has exactly two children.
//!
//! The transformation keeps the optimal tour count:
//! * subtrees without terminals are dropped;
//! * a terminal with children gets a zero-weight pendant copy that takes over the terminal role;
//! * a vertex with `k > 2` children is expanded into a chain of zero-weight copies;
//! * a non-root vertex with one child is spliced out, its two edges merged;
//! * a root with one child `v` is removed, `v` becomes the depot and `D` drops by `2 w(root, v)`.

use super::{EdgeSpec, RoutingInstance, Tree, TreeInstance, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedInstance {
    tree: Tree,
    terminals: Vec<usize>,
    is_terminal: Vec<bool>,
    distance_bound: u64,
    original: Vec<VertexId>,
}

impl NormalizedInstance {
    pub fn is_terminal(&self, v: usize) -> bool {
        self.is_terminal[v]
    }

    /// External id of every normalized vertex. Copies introduced by normalization share the id of
    /// the vertex they were copied from.
    pub fn original_map(&self) -> &[VertexId] {
        &self.original
    }

    pub fn vertex_count(&self) -> usize {
        self.tree.len()
    }

    pub fn dist(&self, u: usize, v: usize) -> Result<u64> {
        let n = self.tree.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::UnknownVertex(x as VertexId));
            }
        }
        Ok(self.tree.dist(u, v))
    }

    /// Lists every broken normal-form invariant; empty when the instance is well formed.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let t = &self.tree;
        let empty = self.terminals.is_empty() && t.len() == 1;
        for v in 0..t.len() {
            let kids = t.children(v).len();
            if kids == 0 && !self.is_terminal[v] && !empty {
                out.push(format!("leaf {v} is not a terminal"));
            }
            if kids > 0 && self.is_terminal[v] {
                out.push(format!("terminal {v} is not a leaf"));
            }
            if kids != 0 && kids != 2 {
                out.push(format!("vertex {v} has {kids} children"));
            }
            if let Some(p) = t.parent(v) {
                if t.depth(v) != t.depth(p) + t.weight(v) {
                    out.push(format!("depth of {v} inconsistent"));
                }
            }
        }
        out
    }

    /// Converts back to an ordinary instance whose vertex ids are the normalized indices.
    pub fn to_routing_instance(&self) -> Result<RoutingInstance> {
        let edges: Vec<EdgeSpec> = (0..self.tree.len())
            .filter_map(|v| {
                self.tree
                    .parent(v)
                    .map(|p| EdgeSpec::new(v as VertexId, p as VertexId, self.tree.weight(v)))
            })
            .collect();
        let terms: Vec<VertexId> = self.terminals.iter().map(|&t| t as VertexId).collect();
        RoutingInstance::build(
            self.distance_bound,
            self.tree.root() as VertexId,
            &edges,
            &terms,
        )
    }
}

impl TreeInstance for NormalizedInstance {
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
        self.original[v]
    }
}

#[derive(Debug, Clone)]
struct Node {
    parent: Option<usize>,
    weight: u64,
    children: Vec<usize>,
    terminal: bool,
    source: usize,
}

pub fn normalize(inst: &RoutingInstance) -> Result<NormalizedInstance> {
    normalize_view(inst)
}

pub(crate) fn normalize_view(inst: &impl TreeInstance) -> Result<NormalizedInstance> {
    let t = inst.tree();
    let bound = inst.distance_bound();
    for &v in inst.terminals() {
        let round_trip = t
            .depth(v)
            .checked_mul(2)
            .ok_or_else(|| Error::Overflow("terminal depth".into()))?;
        if round_trip > bound {
            return Err(Error::Infeasible {
                terminal: inst.original_id(v),
                round_trip,
                bound,
            });
        }
    }

    let n = t.len();
    let mut terminal = vec![false; n];
    for &v in inst.terminals() {
        terminal[v] = true;
    }
    let mut useful = terminal.clone();
    for v in t.postorder() {
        if useful[v] {
            if let Some(p) = t.parent(v) {
                useful[p] = true;
            }
        }
    }

    let mut nodes: Vec<Node> = (0..n)
        .map(|v| Node {
            parent: t.parent(v),
            weight: t.weight(v),
            children: t.children(v).iter().copied().filter(|&c| useful[c]).collect(),
            terminal: terminal[v],
            source: v,
        })
        .collect();

    // pendant copies for terminals that have children
    for v in 0..n {
        if nodes[v].terminal && !nodes[v].children.is_empty() {
            let copy = nodes.len();
            nodes.push(Node {
                parent: Some(v),
                weight: 0,
                children: Vec::new(),
                terminal: true,
                source: v,
            });
            nodes[v].terminal = false;
            nodes[v].children.push(copy);
        }
    }

    // binary split
    for v in 0..nodes.len() {
        if nodes[v].children.len() <= 2 {
            continue;
        }
        let kids = std::mem::take(&mut nodes[v].children);
        let mut cur = v;
        let mut i = 0;
        while kids.len() - i > 2 {
            let copy = nodes.len();
            nodes.push(Node {
                parent: Some(cur),
                weight: 0,
                children: Vec::new(),
                terminal: false,
                source: nodes[v].source,
            });
            nodes[cur].children = vec![kids[i], copy];
            nodes[kids[i]].parent = Some(cur);
            cur = copy;
            i += 1;
        }
        nodes[cur].children = kids[i..].to_vec();
        for &k in &kids[i..] {
            nodes[k].parent = Some(cur);
        }
    }

    // splice unary non-root vertices
    let root = t.root();
    for u in 0..nodes.len() {
        if u == root || !useful_node(u, &useful) || nodes[u].children.len() != 1 {
            continue;
        }
        let p = nodes[u].parent.expect("non-root");
        let c = nodes[u].children[0];
        let merged = nodes[u]
            .weight
            .checked_add(nodes[c].weight)
            .ok_or_else(|| Error::Overflow("merged edge weight".into()))?;
        nodes[c].weight = merged;
        nodes[c].parent = Some(p);
        let slot = nodes[p].children.iter().position(|&x| x == u).expect("child listed");
        nodes[p].children[slot] = c;
    }

    // contract a unary root
    let mut root = root;
    let mut bound = bound;
    while nodes[root].children.len() == 1 {
        let c = nodes[root].children[0];
        bound -= 2 * nodes[c].weight;
        nodes[c].parent = None;
        nodes[c].weight = 0;
        root = c;
    }

    // reindex in preorder
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(nodes[v].children.iter().rev());
    }
    let mut new_of = vec![usize::MAX; nodes.len()];
    for (i, &v) in order.iter().enumerate() {
        new_of[v] = i;
    }
    let parent: Vec<Option<usize>> = order.iter().map(|&v| nodes[v].parent.map(|p| new_of[p])).collect();
    let weight: Vec<u64> = order.iter().map(|&v| nodes[v].weight).collect();
    let tree = Tree::from_parents(0, parent, weight)?;
    let is_terminal: Vec<bool> = order.iter().map(|&v| nodes[v].terminal).collect();
    let terminals = (0..order.len()).filter(|&v| is_terminal[v]).collect();
    let original = order.iter().map(|&v| inst.original_id(nodes[v].source)).collect();
    Ok(NormalizedInstance {
        tree,
        terminals,
        is_terminal,
        distance_bound: bound,
        original,
    })
}

fn useful_node(u: usize, useful: &[bool]) -> bool {
    // copies are always kept; pruned originals are detached from the tree
    u >= useful.len() || useful[u]
}

/// Applies the unary-root contraction once: when the depot is a non-terminal with exactly one
/// child `v`, returns the instance rooted at `v` with `D - 2 w(root, v)`. Returns `None` when the
/// rule does not apply.
pub fn contract_root_once(inst: &RoutingInstance) -> Option<RoutingInstance> {
    let t = inst.tree();
    let root = t.root();
    if t.children(root).len() != 1 || inst.terminals().binary_search(&root).is_ok() {
        return None;
    }
    let v = t.children(root)[0];
    let bound = inst.distance_bound().checked_sub(2 * t.weight(v))?;
    let edges: Vec<EdgeSpec> = inst
        .edges()
        .into_iter()
        .filter(|e| e.child != inst.original_id(v))
        .collect();
    RoutingInstance::build(bound, inst.original_id(v), &edges, &inst.terminal_ids()).ok()
}
