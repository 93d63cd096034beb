//! Random curves and polarizations shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use jaccomb::curve::{Component, PointRecord};
use jaccomb::{perturb_to_general, CurveGraph, Polarization};
use rand::seq::SliceRandom;
use rand::Rng;

/// Connected multigraph on `n` vertices: a random spanning tree plus extra
/// edges, multiplicities in `1..=max_mult`.
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, max_mult: u32) -> Vec<(usize, usize, u32)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut mult = vec![vec![0u32; n]; n];
    for k in 1..n {
        let (a, b) = (order[k], order[rng.gen_range(0..k)]);
        mult[a.min(b)][a.max(b)] = rng.gen_range(1..=max_mult);
    }
    for i in 0..n {
        for j in i + 1..n {
            if mult[i][j] == 0 && rng.gen_bool(0.35) {
                mult[i][j] = rng.gen_range(1..=max_mult);
            }
        }
    }
    let mut edges = Vec::new();
    for (i, row) in mult.iter().enumerate() {
        for (j, &m) in row.iter().enumerate() {
            if m > 0 {
                edges.push((i, j, m));
            }
        }
    }
    edges
}

/// Nodal curve with `1..=max_n` components.
pub fn random_curve<R: Rng>(rng: &mut R, max_n: usize, max_mult: u32) -> CurveGraph {
    let n = rng.gen_range(1..=max_n);
    CurveGraph::nodal(n, &random_edges(rng, n, max_mult)).unwrap()
}

/// Nodal curve without separating points: every bridge gets doubled.
pub fn random_bridgeless<R: Rng>(rng: &mut R, max_n: usize, max_mult: u32) -> CurveGraph {
    let n = rng.gen_range(1..=max_n);
    if n == 1 {
        return CurveGraph::cycle(1).unwrap();
    }
    let mut edges = random_edges(rng, n, max_mult);
    loop {
        let g = CurveGraph::nodal(n, &edges).unwrap();
        let seps = g.separating_points().unwrap();
        if seps.is_empty() {
            return g;
        }
        let points = g.points().unwrap();
        for p in seps {
            let on = &points[p].on;
            let (a, b) = (on[0].min(on[1]), on[0].max(on[1]));
            for e in edges.iter_mut() {
                if (e.0, e.1) == (a, b) {
                    e.2 += 1;
                }
            }
        }
    }
}

/// A tree of `2..=max_blocks` blocks, each `I_1`, `I_3`, `I_4`, or two
/// components meeting in up to three nodes, glued along single nodes.
pub fn random_block_tree<R: Rng>(rng: &mut R, max_blocks: usize) -> CurveGraph {
    let blocks = rng.gen_range(2..=max_blocks);
    let mut n = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut self_nodes: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for _ in 0..blocks {
        let start = n;
        match rng.gen_range(0..4) {
            0 => {
                self_nodes.push(start);
                n += 1;
            }
            1 => {
                let k = rng.gen_range(2..=3);
                for _ in 0..k {
                    edges.push((start, start + 1));
                }
                n += 2;
            }
            _ => {
                let k = rng.gen_range(3..=4);
                for i in 0..k {
                    edges.push((start + i, start + (i + 1) % k));
                }
                n += k;
            }
        }
        members.push((start..n).collect());
    }
    for b in 1..blocks {
        let other = rng.gen_range(0..b);
        let x = *members[b].choose(rng).unwrap();
        let y = *members[other].choose(rng).unwrap();
        edges.push((x, y));
    }
    let mut matrix = vec![vec![0u32; n]; n];
    let mut points = Vec::new();
    for &(a, b) in &edges {
        matrix[a][b] += 1;
        matrix[b][a] += 1;
        points.push(PointRecord::node(a.min(b), a.max(b)));
    }
    for &c in &self_nodes {
        points.push(PointRecord::node(c, c));
    }
    let components = (1..=n).map(|i| Component::named(format!("C{i}"))).collect();
    CurveGraph::new(components, matrix, Some(points)).unwrap()
}

/// `q_i = a_i/den` for `i < γ − 1`, last entry fixing the total.
pub fn random_polarization<R: Rng>(rng: &mut R, n: usize, total: i64, dens: &[i64]) -> Polarization {
    let den = *dens.choose(rng).unwrap();
    let mut nums: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-3 * den..=3 * den)).collect();
    nums.push(total * den - nums.iter().sum::<i64>());
    Polarization::from_fractions(&nums, den).unwrap()
}

pub fn random_general<R: Rng>(rng: &mut R, g: &CurveGraph, total: i64) -> Polarization {
    let q = random_polarization(rng, g.num_components(), total, &[1, 2, 3, 4, 5, 6, 7, 12]);
    perturb_to_general(g, &q).unwrap()
}

/// Spanning trees of a multigraph counted from the definition: every set of
/// `γ − 1` vertex pairs forming a tree contributes the product of its
/// multiplicities.
pub fn brute_spanning_trees(g: &CurveGraph) -> u64 {
    let n = g.num_components();
    let pairs: Vec<(usize, usize, u64)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| g.intersection(i, j) > 0)
        .map(|(i, j)| (i, j, u64::from(g.intersection(i, j))))
        .collect();
    let mut total = 0;
    let mut chosen = Vec::new();
    choose(&pairs, 0, n.saturating_sub(1), &mut chosen, &mut |set| {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut weight = 1;
        for &(a, b, m) in set {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return;
            }
            parent[ra] = rb;
            weight *= m;
        }
        total += weight;
    });
    total
}

fn choose<T: Copy>(items: &[T], from: usize, k: usize, acc: &mut Vec<T>, f: &mut dyn FnMut(&[T])) {
    if acc.len() == k {
        f(acc);
        return;
    }
    for i in from..items.len() {
        if items.len() - i < k - acc.len() {
            break;
        }
        acc.push(items[i]);
        choose(items, i + 1, k, acc, f);
        acc.pop();
    }
}
