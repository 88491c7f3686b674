//! Dense rooted tree with integer edge weights.
//!
//! Vertices are `0..len()`. The edge into a vertex from its parent is identified by the child
//! vertex, so "edge `v`" always means `(parent(v), v)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    root: usize,
    parent: Vec<Option<usize>>,
    weight: Vec<u64>,
    children: Vec<Vec<usize>>,
    depth: Vec<u64>,
    level: Vec<usize>,
    preorder: Vec<usize>,
    enter: Vec<usize>,
    exit: Vec<usize>,
}

impl Tree {
    /// Builds a tree from parent links. `parent[root]` must be `None` and every other vertex must
    /// reach the root. Children keep the order in which they appear in `parent`.
    pub fn from_parents(root: usize, parent: Vec<Option<usize>>, weight: Vec<u64>) -> Result<Self> {
        let n = parent.len();
        if root >= n || weight.len() != n {
            return Err(Error::Internal("malformed parent arrays".into()));
        }
        if parent[root].is_some() {
            return Err(Error::Internal("root has a parent".into()));
        }
        let mut children = vec![Vec::new(); n];
        for (v, p) in parent.iter().enumerate() {
            match p {
                Some(p) if *p >= n => return Err(Error::Internal(format!("parent {p} out of range"))),
                Some(p) => children[*p].push(v),
                None if v != root => return Err(Error::Internal(format!("vertex {v} has no parent"))),
                None => {}
            }
        }

        let mut depth = vec![0u64; n];
        let mut level = vec![0usize; n];
        let mut preorder = Vec::with_capacity(n);
        let mut enter = vec![usize::MAX; n];
        let mut exit = vec![0usize; n];
        // (vertex, next child index)
        let mut stack = vec![(root, 0usize)];
        enter[root] = 0;
        preorder.push(root);
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&c) = children[v].get(*next) {
                *next += 1;
                depth[c] = depth[v]
                    .checked_add(weight[c])
                    .ok_or_else(|| Error::Overflow("vertex depth exceeds u64".into()))?;
                level[c] = level[v] + 1;
                enter[c] = preorder.len();
                preorder.push(c);
                stack.push((c, 0));
            } else {
                exit[v] = preorder.len();
                stack.pop();
            }
        }
        if preorder.len() != n {
            let stray = (0..n).find(|&v| enter[v] == usize::MAX).unwrap_or(0);
            return Err(Error::Internal(format!("vertex {stray} unreachable from root")));
        }
        Ok(Tree {
            root,
            parent,
            weight,
            children,
            depth,
            level,
            preorder,
            enter,
            exit,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Weight of the edge from `v` to its parent (0 for the root).
    pub fn weight(&self, v: usize) -> u64 {
        self.weight[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Weighted distance from the root.
    pub fn depth(&self, v: usize) -> u64 {
        self.depth[v]
    }

    /// Number of edges between `v` and the root.
    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    /// Position of `v` in the depth-first preorder.
    pub fn preorder_index(&self, v: usize) -> usize {
        self.enter[v]
    }

    /// Vertices such that every child comes before its parent.
    pub fn postorder(&self) -> impl Iterator<Item = usize> + '_ {
        self.preorder.iter().rev().copied()
    }

    /// True when `a` is `v` or an ancestor of `v`.
    pub fn is_ancestor(&self, a: usize, v: usize) -> bool {
        self.enter[a] <= self.enter[v] && self.enter[v] < self.exit[a]
    }

    /// Vertices of the subtree rooted at `v`, in preorder.
    pub fn subtree(&self, v: usize) -> &[usize] {
        &self.preorder[self.enter[v]..self.exit[v]]
    }

    pub fn lca(&self, mut u: usize, mut v: usize) -> usize {
        while self.level[u] > self.level[v] {
            u = self.parent[u].expect("non-root has parent");
        }
        while self.level[v] > self.level[u] {
            v = self.parent[v].expect("non-root has parent");
        }
        while u != v {
            u = self.parent[u].expect("non-root has parent");
            v = self.parent[v].expect("non-root has parent");
        }
        u
    }

    pub fn dist(&self, u: usize, v: usize) -> u64 {
        let a = self.lca(u, v);
        self.depth[u] + self.depth[v] - 2 * self.depth[a]
    }

    /// Total weight of the minimal subtree connecting `anchor` to every vertex of `targets`.
    /// Every target must be a descendant of `anchor`.
    pub fn spanning_weight(&self, anchor: usize, targets: impl IntoIterator<Item = usize>) -> u64 {
        let mut marked = vec![false; self.len()];
        marked[anchor] = true;
        let mut total = 0;
        for t in targets {
            debug_assert!(self.is_ancestor(anchor, t));
            let mut v = t;
            while !marked[v] {
                marked[v] = true;
                total += self.weight[v];
                v = self.parent[v].expect("target below anchor");
            }
        }
        total
    }

    /// Length of the shortest closed walk from the root visiting all `targets`.
    pub fn closed_walk_length(&self, targets: impl IntoIterator<Item = usize>) -> u64 {
        2 * self.spanning_weight(self.root, targets)
    }
}
