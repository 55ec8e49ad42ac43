//! Reference merge and contour trees on pixel grids, computed by sorted
//! union-find sweeps.

use std::cmp::Ordering;

use crate::field::{Connectivity, ScalarField};
use crate::graph::{Edge, MapperGraph, MapperNode};
use crate::unionfind::UnionFind;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sweep {
    /// Sublevel sets `{f <= c}`; leaves at minima.
    Join,
    /// Superlevel sets `{f >= c}`; leaves at maxima.
    Split,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Leaf,
    Merge,
    Root,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeNode {
    pub pixel: usize,
    pub value: f64,
    pub kind: NodeKind,
    /// Index into the tree's node list.
    pub parent: Option<usize>,
}

/// A pruned join or split tree: only leaves, merges and the root survive.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeTree {
    sweep: Sweep,
    nodes: Vec<MergeNode>,
}

impl MergeTree {
    pub fn sweep(&self) -> Sweep {
        self.sweep
    }

    pub fn nodes(&self) -> &[MergeNode] {
        &self.nodes
    }

    pub fn leaves(&self) -> impl Iterator<Item = &MergeNode> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Leaf)
    }

    pub fn merges(&self) -> impl Iterator<Item = &MergeNode> {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Merge)
    }

    /// Branches alive at threshold `c`: the number of components of the
    /// sublevel (join) or superlevel (split) set at `c`.
    pub fn components_at(&self, c: f64) -> usize {
        let reached = |v: f64| match self.sweep {
            Sweep::Join => v <= c,
            Sweep::Split => v >= c,
        };
        self.nodes
            .iter()
            .filter(|n| reached(n.value) && n.parent.is_none_or(|p| !reached(self.nodes[p].value)))
            .count()
    }

    /// The tree as a graph: node id = pixel index.
    pub fn to_graph(&self, field: &ScalarField) -> MapperGraph {
        let nodes = self.nodes.iter().map(|n| pixel_node(field, n.pixel)).collect();
        let edges = self
            .nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| Edge::new(n.pixel as u64, self.nodes[p].pixel as u64)))
            .collect();
        MapperGraph::from_parts(nodes, edges)
    }
}

fn pixel_node(field: &ScalarField, pixel: usize) -> MapperNode {
    let w = field.width();
    MapperNode {
        id: pixel as u64,
        interval: 0,
        pixel_count: 1,
        mean_value: field.value(pixel),
        cx: (pixel % w) as f64,
        cy: (pixel / w) as f64,
    }
}

/// Pixels in sweep order: by (value, index), reversed for the split sweep.
fn sweep_order(field: &ScalarField, sweep: Sweep) -> Vec<u32> {
    let v = field.values();
    let mut order: Vec<u32> = (0..v.len() as u32).collect();
    let cmp = |a: &u32, b: &u32| -> Ordering {
        v[*a as usize].total_cmp(&v[*b as usize]).then(a.cmp(b))
    };
    match sweep {
        Sweep::Join => order.sort_unstable_by(cmp),
        Sweep::Split => order.sort_unstable_by(|a, b| cmp(b, a)),
    }
    order
}

fn rank_of(order: &[u32]) -> Vec<u32> {
    let mut rank = vec![0u32; order.len()];
    for (r, &p) in order.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    rank
}

/// Augmented sweep: every pixel's parent is the next pixel its component
/// reaches in sweep order. Returns (parent, child count) per pixel.
fn augmented_sweep(field: &ScalarField, conn: Connectivity, sweep: Sweep) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let order = sweep_order(field, sweep);
    let rank = rank_of(&order);
    let n = field.len();
    let mut uf = UnionFind::new(n);
    // lowest (most recently swept) pixel of each component, stored at its root
    let mut head = vec![NONE; n];
    let mut parent = vec![NONE; n];
    let mut children = vec![0u32; n];
    let mut roots = Vec::with_capacity(8);
    for &p in &order {
        let p = p as usize;
        roots.clear();
        field.for_each_neighbor(p, conn, |q| {
            if rank[q] < rank[p] {
                roots.push(q);
            }
        });
        for r in roots.iter_mut() {
            *r = uf.find(*r);
        }
        roots.sort_unstable();
        roots.dedup();
        for &r in &roots {
            let h = head[r] as usize;
            parent[h] = p as u32;
            children[p] += 1;
        }
        let mut root = p;
        for &r in &roots {
            root = uf.union(root, r);
        }
        head[root] = p as u32;
    }
    (order, parent, children)
}

fn merge_sweep(field: &ScalarField, conn: Connectivity, sweep: Sweep) -> MergeTree {
    let (order, parent, children) = augmented_sweep(field, conn, sweep);
    let last = *order.last().unwrap() as usize;
    let keep = |p: usize| children[p] != 1 || p == last;
    let mut index = vec![NONE; field.len()];
    let mut nodes = Vec::new();
    for &p in &order {
        let p = p as usize;
        if keep(p) {
            index[p] = nodes.len() as u32;
            let kind = match children[p] {
                0 => NodeKind::Leaf,
                1 => NodeKind::Root,
                _ => NodeKind::Merge,
            };
            nodes.push(MergeNode {
                pixel: p,
                value: field.value(p),
                kind,
                parent: None,
            });
        }
    }
    for k in 0..nodes.len() {
        let mut q = parent[nodes[k].pixel];
        while q != NONE && !keep(q as usize) {
            q = parent[q as usize];
        }
        nodes[k].parent = (q != NONE).then(|| index[q as usize] as usize);
    }
    MergeTree { sweep, nodes }
}

/// Join tree of the sublevel sets; value ties resolved by ascending pixel index.
pub fn join_tree_sweep(field: &ScalarField, conn: Connectivity) -> MergeTree {
    merge_sweep(field, conn, Sweep::Join)
}

/// Split tree of the superlevel sets; value ties resolved by descending pixel index.
pub fn split_tree_sweep(field: &ScalarField, conn: Connectivity) -> MergeTree {
    merge_sweep(field, conn, Sweep::Split)
}

/// Contour tree by the leaf-peeling combination of the augmented join and
/// split trees, with regular (valence-2) nodes pruned.
///
/// Node ids are pixel indices; a constant field gives a single node.
pub fn contour_tree(field: &ScalarField, conn: Connectivity) -> MapperGraph {
    let n = field.len();
    let (lo, hi) = field.value_range();
    if lo == hi || n == 1 {
        return MapperGraph::new(vec![pixel_node(field, 0)], vec![]).unwrap();
    }
    let arcs = augmented_contour_arcs(field, conn);
    prune_regular(field, &arcs)
}

/// Arcs of the augmented contour tree (every pixel a node).
fn augmented_contour_arcs(field: &ScalarField, conn: Connectivity) -> Vec<(u32, u32)> {
    let n = field.len();
    // join tree: parent points up in value, children below
    let (_, mut jt_up, mut jt_below) = augmented_sweep(field, conn, Sweep::Join);
    // split tree: parent points down in value, children above
    let (_, mut st_down, mut st_above) = augmented_sweep(field, conn, Sweep::Split);
    // xor of current child ids, so a single remaining child is recoverable
    let mut jt_xor = vec![0u32; n];
    let mut st_xor = vec![0u32; n];
    for v in 0..n {
        if jt_up[v] != NONE {
            jt_xor[jt_up[v] as usize] ^= v as u32;
        }
        if st_down[v] != NONE {
            st_xor[st_down[v] as usize] ^= v as u32;
        }
    }
    let is_leaf = |v: usize, jb: &[u32], sa: &[u32]| jb[v] + sa[v] == 1;
    let mut queue: Vec<u32> = (0..n as u32)
        .filter(|&v| is_leaf(v as usize, &jt_below, &st_above))
        .collect();
    queue.reverse();
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut arcs = Vec::with_capacity(n - 1);
    while remaining > 1 {
        let v = queue.pop().expect("join and split trees are inconsistent") as usize;
        if removed[v] {
            continue;
        }
        let w;
        if st_above[v] == 0 {
            // upper leaf: a maximum of what is left
            w = st_down[v] as usize;
            st_above[w] -= 1;
            st_xor[w] ^= v as u32;
            let c = jt_xor[v];
            let p = jt_up[v];
            jt_up[c as usize] = p;
            if p != NONE {
                jt_xor[p as usize] ^= v as u32 ^ c;
            }
        } else {
            // lower leaf: a minimum of what is left
            w = jt_up[v] as usize;
            jt_below[w] -= 1;
            jt_xor[w] ^= v as u32;
            let c = st_xor[v];
            let p = st_down[v];
            st_down[c as usize] = p;
            if p != NONE {
                st_xor[p as usize] ^= v as u32 ^ c;
            }
        }
        arcs.push((v as u32, w as u32));
        removed[v] = true;
        remaining -= 1;
        if is_leaf(w, &jt_below, &st_above) {
            queue.push(w as u32);
        }
    }
    arcs
}

/// Contracts every valence-2 node of a tree given by arcs on pixel ids.
fn prune_regular(field: &ScalarField, arcs: &[(u32, u32)]) -> MapperGraph {
    let n = field.len();
    let mut start = vec![0u32; n + 1];
    for &(a, b) in arcs {
        start[a as usize + 1] += 1;
        start[b as usize + 1] += 1;
    }
    for i in 0..n {
        start[i + 1] += start[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![0u32; 2 * arcs.len()];
    for &(a, b) in arcs {
        adj[fill[a as usize] as usize] = b;
        fill[a as usize] += 1;
        adj[fill[b as usize] as usize] = a;
        fill[b as usize] += 1;
    }
    let degree = |v: usize| (start[v + 1] - start[v]) as usize;
    let neighbors = |v: usize| &adj[start[v] as usize..start[v + 1] as usize];
    let kept: Vec<usize> = (0..n).filter(|&v| degree(v) != 2).collect();
    let mut edges = Vec::new();
    for &u in &kept {
        for &first in neighbors(u) {
            let (mut prev, mut cur) = (u, first as usize);
            let mut absorbed = 0;
            while degree(cur) == 2 {
                let nb = neighbors(cur);
                let next = if nb[0] as usize == prev { nb[1] } else { nb[0] } as usize;
                prev = cur;
                cur = next;
                absorbed += 1;
            }
            if u < cur {
                edges.push(Edge::with_absorbed(u as u64, cur as u64, absorbed));
            }
        }
    }
    let nodes = kept.iter().map(|&p| pixel_node(field, p)).collect();
    MapperGraph::from_parts(nodes, edges)
}

/// Ascending distinct values of the pixels where sublevel or superlevel
/// components are born or merge, plus the global minimum and maximum.
///
/// These are the contour-tree nodes that do not have exactly one arc up and
/// one arc down.
pub fn critical_values(field: &ScalarField, conn: Connectivity) -> Vec<f64> {
    let (_, _, below) = augmented_sweep(field, conn, Sweep::Join);
    let (_, _, above) = augmented_sweep(field, conn, Sweep::Split);
    let (lo, hi) = field.value_range();
    let mut values: Vec<f64> = (0..field.len())
        .filter(|&p| below[p] != 1 || above[p] != 1)
        .map(|p| field.value(p))
        .collect();
    values.push(lo);
    values.push(hi);
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}
