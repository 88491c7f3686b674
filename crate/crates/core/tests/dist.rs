use std::collections::VecDeque;

use dvrp_core::generators::Stream;
use dvrp_core::Tree;

fn random_tree(rng: &mut Stream, n: usize) -> Tree {
    let parent: Vec<Option<usize>> = (0..n).map(|v| (v > 0).then(|| rng.index(v))).collect();
    let weight: Vec<u64> = (0..n).map(|v| if v == 0 { 0 } else { rng.between(0, 20) }).collect();
    Tree::from_parents(0, parent, weight).unwrap()
}

fn bfs_dist(t: &Tree, from: usize) -> Vec<u64> {
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); t.len()];
    for v in 0..t.len() {
        if let Some(p) = t.parent(v) {
            adj[p].push((v, t.weight(v)));
            adj[v].push((p, t.weight(v)));
        }
    }
    let mut dist = vec![u64::MAX; t.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for &(x, w) in &adj[v] {
            if dist[x] == u64::MAX {
                dist[x] = dist[v] + w;
                queue.push_back(x);
            }
        }
    }
    dist
}

#[test]
fn lca_distance_matches_search() {
    let mut rng = Stream::new(21);
    for _ in 0..40 {
        let n = rng.between(1, 60) as usize;
        let t = random_tree(&mut rng, n);
        for u in 0..n {
            let expected = bfs_dist(&t, u);
            for (v, &d) in expected.iter().enumerate() {
                assert_eq!(t.dist(u, v), d);
            }
        }
    }
}

#[test]
fn closed_walk_is_twice_the_spanning_tree() {
    let mut rng = Stream::new(22);
    for _ in 0..200 {
        let n = rng.between(2, 30) as usize;
        let t = random_tree(&mut rng, n);
        let targets: Vec<usize> = (0..n).filter(|_| rng.chance(1, 3)).collect();
        // union of root paths
        let mut on = vec![false; n];
        for &x in &targets {
            let mut v = x;
            while let Some(p) = t.parent(v) {
                on[v] = true;
                v = p;
            }
        }
        let weight: u64 = (0..n).filter(|&v| on[v]).map(|v| t.weight(v)).sum();
        assert_eq!(t.closed_walk_length(targets.iter().copied()), 2 * weight);
    }
}
