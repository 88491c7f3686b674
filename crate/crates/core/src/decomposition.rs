//! Partition of a normalized tree into leaf and internal components, each coverable by at most
//! `gamma` tours under its own distance bound.
//!
//! Leaf components are the maximal subtrees `T(v)` whose local instance needs at most `gamma`
//! tours. The tree spanning the depot and their roots is cut along its maximal non-branching
//! paths, greedily from the bottom, into internal components.
//!
//! Edges are identified by their child vertex. Vertex indices of a [`NormalizedInstance`] follow a
//! depth-first preorder, so "least deep, then first in preorder" on a root-to-leaf path simply
//! means the vertex closest to the root.

use crate::error::{Error, Result};
use crate::generators::Stream;
use crate::exact::{solve_bounded, vertex_cap, DpOptions, ProfileList, ProfileTable};
use crate::instance::{normalize_view, EdgeSpec, NormalizedInstance, RoutingInstance, TreeInstance, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Leaf,
    Internal,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Leaf => "leaf",
            ComponentKind::Internal => "internal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Child endpoints of the component's edges, ascending.
    pub edges: Vec<usize>,
    pub root: usize,
    pub exit: Option<usize>,
    pub kind: ComponentKind,
    /// Terminals among the component's vertices other than the exit vertex.
    pub terminals: Vec<usize>,
    /// Minimum tours for the local instance, or `None` when more than `gamma` are needed.
    pub tours: Option<usize>,
    pub is_big: bool,
}

impl Component {
    /// Root followed by the child endpoint of every edge.
    pub fn vertices(&self) -> Vec<usize> {
        let mut vs = Vec::with_capacity(self.edges.len() + 1);
        vs.push(self.root);
        vs.extend_from_slice(&self.edges);
        vs
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        v == self.root || self.edges.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub gamma: usize,
    pub components: Vec<Component>,
    /// Component of the edge above each vertex; `None` for the depot.
    pub assignment: Vec<Option<usize>>,
    /// Places where the construction could not find a component within `gamma` tours.
    pub flags: Vec<String>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn big_count(&self) -> usize {
        self.components.iter().filter(|c| c.is_big).count()
    }

    /// Component that owns terminal `t` (the component holding the edge above it, or the
    /// edge-less leaf component rooted at it).
    pub fn component_of_terminal(&self, t: usize) -> Option<usize> {
        self.components.iter().position(|c| c.terminals.contains(&t))
    }

    /// Breaches of the partition and shape guarantees: every edge in exactly one component,
    /// components connected, leaf components closed under descendants, internal components
    /// touching the rest only at their root and exit, and every component within `gamma` tours.
    pub fn structural_violations(&self, inst: &NormalizedInstance) -> Vec<String> {
        let t = inst.tree();
        let mut out = Vec::new();
        let mut owner = vec![None; t.len()];
        for (ci, c) in self.components.iter().enumerate() {
            for &e in &c.edges {
                match owner[e] {
                    Some(other) => out.push(format!("edge {e} in components {other} and {ci}")),
                    None => owner[e] = Some(ci),
                }
            }
            for &e in &c.edges {
                let p = t.parent(e).expect("edge has a parent");
                if !c.contains_vertex(p) {
                    out.push(format!("component {ci} is not connected at edge {e}"));
                }
            }
            match (c.kind, c.exit) {
                (ComponentKind::Leaf, None) => {
                    let expected = t.subtree(c.root).len() - 1;
                    if c.edges.len() != expected {
                        out.push(format!("leaf component {ci} misses descendants of {}", c.root));
                    }
                }
                (ComponentKind::Internal, Some(x)) => {
                    if !c.contains_vertex(x) || x == c.root {
                        out.push(format!("component {ci} has exit {x} outside it"));
                    }
                }
                _ => out.push(format!("component {ci} kind does not match its exit")),
            }
            if c.tours.is_none() {
                out.push(format!("component {ci} needs more than {} tours", self.gamma));
            }
        }
        for (e, &own) in owner.iter().enumerate() {
            if t.parent(e).is_some() && own.is_none() && !self.components.is_empty() {
                out.push(format!("edge {e} is not covered"));
            }
            if own != self.assignment[e] {
                out.push(format!("assignment of edge {e} is stale"));
            }
        }
        // vertices shared between components
        let mut touching: Vec<Vec<usize>> = vec![Vec::new(); t.len()];
        for (ci, c) in self.components.iter().enumerate() {
            for v in c.vertices() {
                touching[v].push(ci);
            }
        }
        for (v, cs) in touching.iter().enumerate() {
            if cs.len() < 2 {
                continue;
            }
            for &ci in cs {
                let c = &self.components[ci];
                let allowed = v == c.root || c.exit == Some(v);
                if !allowed {
                    out.push(format!("component {ci} shares inner vertex {v}"));
                }
            }
        }
        out
    }

    /// Places where the size guarantees do not hold: a leaf component that is not big, or more
    /// than three components per big component.
    pub fn size_flags(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (ci, c) in self.components.iter().enumerate() {
            if c.kind == ComponentKind::Leaf && !c.is_big {
                out.push(format!("leaf component {ci} is not big"));
            }
        }
        if self.len() > 1 && self.len() > 3 * self.big_count() {
            out.push(format!("{} components but only {} big", self.len(), self.big_count()));
        }
        out
    }
}

/// `2 * tours >= gamma`.
pub fn classify_big(tours: usize, gamma: usize) -> bool {
    2 * tours >= gamma
}

/// Profiles of the region `T(top) \ T(exit)` under the caps of the global table.
fn region_list(inst: &NormalizedInstance, table: &ProfileTable, top: usize, exit: usize) -> ProfileList {
    let t = inst.tree();
    let mut cur = exit;
    let mut list = ProfileList::empty_subtree();
    while cur != top {
        let p = t.parent(cur).expect("exit lies below top");
        let sib = *t.children(p).iter().find(|&&c| c != cur).expect("binary vertex");
        let Some(cap) = vertex_cap(inst, p) else {
            return ProfileList::default();
        };
        list = ProfileList::merge(&list, &table.lists[sib], t.weight(cur), t.weight(sib), table.gamma, cap, table.opts);
        cur = p;
    }
    list
}

fn region_tours(inst: &NormalizedInstance, table: &ProfileTable, top: usize, exit: usize) -> Option<usize> {
    region_list(inst, table, top, exit).min_len()
}

/// Tours for the edge `(parent(top), top)` together with `T(top) \ T(exit)`.
fn hanging_region_tours(inst: &NormalizedInstance, table: &ProfileTable, top: usize, exit: usize) -> Option<usize> {
    let t = inst.tree();
    let p = t.parent(top).expect("non-root");
    let cap = vertex_cap(inst, p)?;
    let below = region_list(inst, table, top, exit);
    ProfileList::merge(&below, &ProfileList::empty_subtree(), t.weight(top), 0, table.gamma, cap, table.opts).min_len()
}

/// Region found by the construction: component root, exit, the topmost edge owned by the
/// component, and the tour count.
struct Region {
    root: usize,
    exit: Option<usize>,
    top: usize,
    tours: Option<usize>,
}

pub fn decompose(inst: &NormalizedInstance, gamma: usize) -> Result<Decomposition> {
    if gamma == 0 {
        return Err(Error::InvalidArgument("gamma must be at least 1".into()));
    }
    let t = inst.tree();
    let n = t.len();
    if inst.terminals().is_empty() {
        return Ok(Decomposition {
            gamma,
            components: Vec::new(),
            assignment: vec![None; n],
            flags: Vec::new(),
        });
    }
    let table = ProfileTable::build(inst, gamma, DpOptions::default());
    let sat: Vec<bool> = (0..n).map(|v| table.min_tours(v).is_some()).collect();

    let mut regions: Vec<Region> = Vec::new();
    let mut flags = Vec::new();
    let mut in_prime = vec![false; n];
    for &v in t.preorder() {
        let leaf_root = sat[v] && t.parent(v).is_none_or(|p| !sat[p]);
        if leaf_root {
            regions.push(Region {
                root: v,
                exit: None,
                top: v,
                tours: table.min_tours(v),
            });
            let mut x = Some(v);
            while let Some(y) = x {
                if in_prime[y] {
                    break;
                }
                in_prime[y] = true;
                x = t.parent(y);
            }
        }
    }
    let prime_children = |v: usize| t.children(v).iter().filter(|&&c| in_prime[c]).count();
    let is_leaf_root = |v: usize| sat[v] && t.parent(v).is_none_or(|p| !sat[p]);

    for &v2 in t.preorder() {
        if !in_prime[v2] || v2 == t.root() || !(is_leaf_root(v2) || prime_children(v2) >= 2) {
            continue;
        }
        // walk up to the start of the maximal path ending at v2
        let mut path = vec![v2];
        let mut v1 = t.parent(v2).expect("non-root");
        while v1 != t.root() && prime_children(v1) == 1 {
            path.push(v1);
            v1 = t.parent(v1).expect("non-root");
        }
        path.reverse(); // path[0] = v1', last = v2
        let mut exit_pos = path.len() - 1;
        loop {
            let exit = path[exit_pos];
            if region_tours(inst, &table, path[0], exit).is_some() {
                break;
            }
            let found = (1..exit_pos).find(|&i| region_tours(inst, &table, path[i], exit).is_some());
            let top = match found {
                Some(i) => i,
                None => {
                    flags.push(format!(
                        "no region above exit {exit} fits in {gamma} tours; cutting the single edge above it"
                    ));
                    exit_pos - 1
                }
            };
            regions.push(Region {
                root: path[top],
                exit: Some(exit),
                top: path[top],
                tours: region_tours(inst, &table, path[top], exit),
            });
            exit_pos = top;
        }
        let exit = path[exit_pos];
        regions.push(Region {
            root: v1,
            exit: Some(exit),
            top: path[0],
            tours: hanging_region_tours(inst, &table, path[0], exit),
        });
    }

    Ok(assemble(inst, gamma, regions, flags))
}

fn assemble(inst: &NormalizedInstance, gamma: usize, mut regions: Vec<Region>, flags: Vec<String>) -> Decomposition {
    let t = inst.tree();
    let n = t.len();
    regions.sort_by_key(|r| (r.root, r.exit));
    let mut assignment = vec![None; n];
    let mut components = Vec::with_capacity(regions.len());
    for (ci, r) in regions.iter().enumerate() {
        let (root, exit, tours) = (r.root, r.exit, r.tours);
        let below = |v: usize| exit.is_some_and(|x| t.is_ancestor(x, v) && v != x);
        let mut edges: Vec<usize> = t
            .subtree(r.top)
            .iter()
            .copied()
            .filter(|&v| v != root && !below(v))
            .collect();
        edges.sort_unstable();
        for &e in &edges {
            assignment[e] = Some(ci);
        }
        let mut terminals: Vec<usize> = std::iter::once(root)
            .chain(edges.iter().copied())
            .filter(|&v| inst.is_terminal(v) && Some(v) != exit)
            .collect();
        terminals.sort_unstable();
        components.push(Component {
            edges,
            root,
            exit,
            kind: if exit.is_some() { ComponentKind::Internal } else { ComponentKind::Leaf },
            terminals,
            tours,
            is_big: tours.is_some_and(|k| classify_big(k, gamma)),
        });
    }
    Decomposition {
        gamma,
        components,
        assignment,
        flags,
    }
}


/// A random partition with the same shape as the output of [`decompose`], ignoring tour counts:
/// leaf components at a random antichain of subtrees, and the connecting paths cut at random
/// points. Every component's tour count is computed exactly, with `gamma` set to the number of
/// terminals.
pub fn random_decomposition(inst: &NormalizedInstance, rng: &mut Stream) -> Result<Decomposition> {
    let t = inst.tree();
    let gamma = inst.terminals().len().max(1);
    if inst.terminals().is_empty() {
        return decompose(inst, gamma);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Choice {
        Off,
        Leaf,
        Branch,
        Pass,
    }
    let mut choice = vec![Choice::Off; t.len()];
    let mut stack = vec![t.root()];
    while let Some(v) = stack.pop() {
        let kids = t.children(v);
        let c = if kids.is_empty() {
            Choice::Leaf
        } else if v == t.root() {
            [Choice::Leaf, Choice::Branch, Choice::Branch][rng.index(3)]
        } else {
            [Choice::Leaf, Choice::Branch, Choice::Pass][rng.index(3)]
        };
        choice[v] = c;
        match c {
            Choice::Branch => stack.extend_from_slice(kids),
            Choice::Pass => stack.push(kids[rng.index(kids.len())]),
            _ => {}
        }
    }
    let mut regions = Vec::new();
    for &v2 in t.preorder() {
        if choice[v2] == Choice::Off || choice[v2] == Choice::Pass {
            continue;
        }
        if choice[v2] == Choice::Leaf {
            regions.push(Region {
                root: v2,
                exit: None,
                top: v2,
                tours: None,
            });
        }
        if v2 == t.root() {
            continue;
        }
        let mut path = vec![v2];
        let mut v1 = t.parent(v2).expect("non-root");
        while choice[v1] == Choice::Pass {
            path.push(v1);
            v1 = t.parent(v1).expect("pass vertices are not the root");
        }
        path.reverse();
        let mut exit = v2;
        for i in (0..path.len() - 1).rev() {
            if rng.chance(1, 2) {
                regions.push(Region {
                    root: path[i],
                    exit: Some(exit),
                    top: path[i],
                    tours: None,
                });
                exit = path[i];
            }
        }
        regions.push(Region {
            root: v1,
            exit: Some(exit),
            top: path[0],
            tours: None,
        });
    }
    let mut dec = assemble(inst, gamma, regions, Vec::new());
    for c in &mut dec.components {
        c.tours = component_tours(inst, c, gamma)?;
        c.is_big = c.tours.is_some_and(|k| classify_big(k, gamma));
    }
    Ok(dec)
}

/// The instance `(component, U_c, D - 2 dist(r, r_c))`, normalized. Vertex ids of the result refer
/// to indices of `inst`.
pub fn component_local_instance(inst: &NormalizedInstance, comp: &Component) -> Result<NormalizedInstance> {
    let t = inst.tree();
    let round_trip = 2 * t.depth(comp.root);
    let bound = match inst.distance_bound().checked_sub(round_trip) {
        Some(b) => b,
        None if comp.terminals.is_empty() => 0,
        None => {
            return Err(Error::Infeasible {
                terminal: comp.root as VertexId,
                round_trip,
                bound: inst.distance_bound(),
            })
        }
    };
    let edges: Vec<EdgeSpec> = comp
        .edges
        .iter()
        .map(|&e| EdgeSpec::new(e as VertexId, t.parent(e).expect("edge") as VertexId, t.weight(e)))
        .collect();
    let terms: Vec<VertexId> = comp.terminals.iter().map(|&v| v as VertexId).collect();
    let local = RoutingInstance::build(bound, comp.root as VertexId, &edges, &terms)?;
    normalize_view(&local)
}

/// Minimum tours of the component's local instance, or `None` above `gamma`.
pub fn component_tours(inst: &NormalizedInstance, comp: &Component, gamma: usize) -> Result<Option<usize>> {
    Ok(solve_bounded(&component_local_instance(inst, comp)?, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::normalize;

    fn build(bound: u64, edges: &[(u64, u64, u64)], terms: &[u64]) -> NormalizedInstance {
        let es: Vec<EdgeSpec> = edges.iter().map(|&(c, p, w)| EdgeSpec::new(c, p, w)).collect();
        normalize(&RoutingInstance::new(bound, 0, &es, terms).unwrap()).unwrap()
    }

    #[test]
    fn single_component_when_coverable() {
        let inst = build(14, &[(1, 0, 3), (2, 0, 4)], &[1, 2]);
        let d = decompose(&inst, 2).unwrap();
        assert_eq!(d.len(), 1);
        let c = &d.components[0];
        assert_eq!((c.kind, c.root, c.exit), (ComponentKind::Leaf, 0, None));
        assert_eq!(c.tours, Some(1));
        assert!(d.structural_violations(&inst).is_empty());
    }

    #[test]
    fn two_heavy_subtrees() {
        // two stars of three terminals each, every terminal needing its own tour
        let edges = [
            (1, 0, 5),
            (2, 0, 5),
            (11, 1, 4),
            (12, 1, 4),
            (13, 1, 4),
            (21, 2, 4),
            (22, 2, 4),
            (23, 2, 4),
        ];
        let inst = build(20, &edges, &[11, 12, 13, 21, 22, 23]);
        let d = decompose(&inst, 3).unwrap();
        assert!(d.structural_violations(&inst).is_empty(), "{:?}", d.structural_violations(&inst));
        let leaves: Vec<&Component> = d.components.iter().filter(|c| c.kind == ComponentKind::Leaf).collect();
        assert_eq!(leaves.len(), 2);
        assert!(leaves.iter().all(|c| c.tours == Some(3) && c.is_big));
        let internal = d.len() - 2;
        assert_eq!(internal, 2);
        let total: usize = d.components.iter().map(|c| c.edges.len()).sum();
        assert_eq!(total, inst.vertex_count() - 1);
        for c in &d.components {
            assert_eq!(component_tours(&inst, c, 3).unwrap(), c.tours);
        }
    }

    #[test]
    fn local_instance_bound() {
        let edges = [(1, 0, 10), (2, 0, 1), (11, 1, 2), (12, 1, 3), (21, 2, 1)];
        let inst = build(30, &edges, &[11, 12, 21]);
        let d = decompose(&inst, 1).unwrap();
        let v = inst.tree().preorder().iter().copied().find(|&v| inst.tree().depth(v) == 10).unwrap();
        let comp = d.components.iter().find(|c| c.root == v).unwrap();
        let local = component_local_instance(&inst, comp).unwrap();
        assert_eq!(local.distance_bound(), 10);
        let at_root = d.components.iter().find(|c| c.root == 0).unwrap();
        assert_eq!(component_local_instance(&inst, at_root).unwrap().distance_bound(), 30);
    }

    #[test]
    fn empty_terminal_set() {
        let inst = build(5, &[(1, 0, 1)], &[]);
        let d = decompose(&inst, 3).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn random_structures_are_partitions() {
        use crate::generators::{gen_random, DistancePolicy};
        let mut rng = Stream::new(11);
        let mut internal = 0;
        for seed in 0..200 {
            let inst = normalize(&gen_random(seed, 6, 5, DistancePolicy::default()).unwrap()).unwrap();
            let d = random_decomposition(&inst, &mut rng).unwrap();
            assert!(d.structural_violations(&inst).is_empty(), "{:?}", d.structural_violations(&inst));
            internal += d.components.iter().filter(|c| c.kind == ComponentKind::Internal).count();
            let covered: usize = d.components.iter().map(|c| c.terminals.len()).sum();
            assert_eq!(covered, inst.terminals().len());
        }
        assert!(internal > 0);
    }

    #[test]
    fn big_boundary() {
        assert!(classify_big(10, 20));
        assert!(classify_big(2, 3));
        assert!(!classify_big(1, 3));
        assert!(!classify_big(1, 20));
    }
}
