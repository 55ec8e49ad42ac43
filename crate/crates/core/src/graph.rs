//! The Mapper graph: data model, topology queries, embedding and
//! isomorphism checks, and JSON/DOT serialization.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::cover::{refines, Cover};
use crate::error::{Error, Result};
use crate::field::{Connectivity, ScalarField};
use crate::mapper::{chain_regions, RegionMap};
use crate::unionfind::UnionFind;

/// Node identifier for a region: `interval * pixel_count + region_pixel`.
///
/// The region id (the smallest linear pixel index in the region) alone is not
/// unique, since one pixel can start a region in each cover part.
#[inline]
pub fn node_id(interval: usize, region: usize, pixel_count: usize) -> u64 {
    (interval as u64) * (pixel_count as u64) + region as u64
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MapperNode {
    pub id: u64,
    #[serde(rename = "interval")]
    pub interval: usize,
    #[serde(rename = "count")]
    pub pixel_count: usize,
    #[serde(rename = "mean")]
    pub mean_value: f64,
    pub cx: f64,
    pub cy: f64,
}

/// Undirected edge; `absorbed` counts pixels of nodes contracted into it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: u64,
    pub b: u64,
    pub absorbed: usize,
}

impl Edge {
    pub fn new(a: u64, b: u64) -> Edge {
        Edge::with_absorbed(a, b, 0)
    }

    pub fn with_absorbed(a: u64, b: u64, absorbed: usize) -> Edge {
        Edge {
            a: a.min(b),
            b: a.max(b),
            absorbed,
        }
    }

    pub fn is_loop(&self) -> bool {
        self.a == self.b
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let len = if self.absorbed > 0 { 3 } else { 2 };
        let mut seq = s.serialize_seq(Some(len))?;
        seq.serialize_element(&self.a)?;
        seq.serialize_element(&self.b)?;
        if self.absorbed > 0 {
            seq.serialize_element(&(self.absorbed as u64))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Edge {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Edge, D::Error> {
        struct EdgeVisitor;
        impl<'de> Visitor<'de> for EdgeVisitor {
            type Value = Edge;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("[id, id] or [id, id, absorbed]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Edge, A::Error> {
                let a: u64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let b: u64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                let absorbed: u64 = seq.next_element()?.unwrap_or(0);
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(4, &self));
                }
                Ok(Edge::with_absorbed(a, b, absorbed as usize))
            }
        }
        d.deserialize_seq(EdgeVisitor)
    }
}

/// Nodes sorted by id; edges canonical (`a <= b`) and sorted. Multi-edges
/// and self-loops are representable.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MapperGraph {
    nodes: Vec<MapperNode>,
    edges: Vec<Edge>,
}

impl MapperGraph {
    pub fn new(mut nodes: Vec<MapperNode>, edges: Vec<Edge>) -> Result<MapperGraph> {
        if !nodes.is_sorted_by_key(|n| n.id) {
            nodes.sort_unstable_by_key(|n| n.id);
        }
        if nodes.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::Parameter("duplicate node id".into()));
        }
        if let Some(n) = nodes.iter().find(|n| n.pixel_count == 0) {
            return Err(Error::Parameter(format!("node {} has no pixels", n.id)));
        }
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge::with_absorbed(e.a, e.b, e.absorbed))
            .collect();
        if !edges.is_sorted() {
            edges.sort_unstable();
        }
        let g = MapperGraph { nodes, edges };
        if let Some(e) = g
            .edges
            .iter()
            .find(|e| g.index_of(e.a).is_none() || g.index_of(e.b).is_none())
        {
            return Err(Error::Parameter(format!(
                "edge ({}, {}) references a missing node",
                e.a, e.b
            )));
        }
        Ok(g)
    }

    /// For graphs the pipeline builds itself: ids are unique, counts positive
    /// and every edge endpoint exists, so only the ordering is established.
    pub(crate) fn from_parts(mut nodes: Vec<MapperNode>, mut edges: Vec<Edge>) -> MapperGraph {
        if !nodes.is_sorted_by_key(|n| n.id) {
            nodes.sort_unstable_by_key(|n| n.id);
        }
        if !edges.is_sorted() {
            edges.sort_unstable();
        }
        MapperGraph { nodes, edges }
    }

    pub fn empty() -> MapperGraph {
        MapperGraph::default()
    }

    pub fn nodes(&self) -> &[MapperNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn index_of(&self, id: u64) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn node(&self, id: u64) -> Option<&MapperNode> {
        self.index_of(id).map(|i| &self.nodes[i])
    }

    /// Adjacency by node index; a self-loop appears twice in its node's list.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            let (a, b) = (self.index_of(e.a).unwrap(), self.index_of(e.b).unwrap());
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Degree by node index, counting edge multiplicity (self-loops count twice).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[self.index_of(e.a).unwrap()] += 1;
            deg[self.index_of(e.b).unwrap()] += 1;
        }
        deg
    }

    pub fn leaf_count(&self) -> usize {
        self.degrees().into_iter().filter(|&d| d == 1).count()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(self.index_of(e.a).unwrap(), self.index_of(e.b).unwrap());
        }
        uf.set_count()
    }

    /// First Betti number `E - V + C`.
    pub fn cycle_rank(&self) -> usize {
        self.edges.len() + self.component_count() - self.nodes.len()
    }

    pub fn is_tree(&self) -> bool {
        self.component_count() == 1 && self.cycle_rank() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<MapperGraph> {
        let raw: MapperGraph =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("graph json: {e}")))?;
        MapperGraph::new(raw.nodes, raw.edges).map_err(|e| Error::Format(e.to_string()))
    }

    /// Graphviz text. Node width grows with the square root of the pixel
    /// count and `pos` places nodes by centroid x and mean value.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph mapper {\n  node [shape=circle];\n");
        let max_count = self.nodes.iter().map(|n| n.pixel_count).max().unwrap_or(1) as f64;
        for n in &self.nodes {
            let width = 0.1 + 0.9 * (n.pixel_count as f64 / max_count).sqrt();
            let _ = writeln!(
                out,
                "  n{} [label=\"{}\", width={:.4}, pos=\"{:.3},{:.3}\", mean={}];",
                n.id,
                n.id,
                width,
                n.cx,
                n.mean_value * 100.0,
                n.mean_value
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -- n{};", e.a, e.b);
        }
        out.push_str("}\n");
        out
    }
}

fn is_tree_adj(adj: &[Vec<usize>], edge_count: usize) -> bool {
    if adj.is_empty() || edge_count + 1 != adj.len() {
        return false;
    }
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                stack.push(w);
            }
        }
    }
    reached == adj.len()
}

fn tree_centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Canonical class of the tree rooted at `root`; classes are shared through `table`.
fn rooted_class(adj: &[Vec<usize>], root: usize, table: &mut HashMap<Vec<usize>, usize>) -> usize {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root];
    parent[root] = root;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &adj[v] {
            if parent[w] == usize::MAX {
                parent[w] = v;
                stack.push(w);
            }
        }
    }
    let mut child_classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut class = vec![0; n];
    for &v in order.iter().rev() {
        let mut key = std::mem::take(&mut child_classes[v]);
        key.sort_unstable();
        let next = table.len();
        class[v] = *table.entry(key).or_insert(next);
        if v != root {
            child_classes[parent[v]].push(class[v]);
        }
    }
    class[root]
}

/// Structural isomorphism of two trees, ignoring node attributes.
pub fn tree_isomorphic(g1: &MapperGraph, g2: &MapperGraph) -> Result<bool> {
    let (a1, a2) = (g1.adjacency(), g2.adjacency());
    if !is_tree_adj(&a1, g1.edge_count()) || !is_tree_adj(&a2, g2.edge_count()) {
        return Err(Error::Parameter("tree isomorphism needs two trees".into()));
    }
    if a1.len() != a2.len() {
        return Ok(false);
    }
    let (c1, c2) = (tree_centers(&a1), tree_centers(&a2));
    if c1.len() != c2.len() {
        return Ok(false);
    }
    let mut table = HashMap::new();
    let k1 = rooted_class(&a1, c1[0], &mut table);
    Ok(c2.iter().any(|&c| rooted_class(&a2, c, &mut table) == k1))
}

/// Per-pixel memberships of a chain cover's regions, as node indices of `graph`.
struct Memberships {
    slots: [Vec<Option<usize>>; 2],
    maps: [RegionMap; 2],
}

impl Memberships {
    fn build(graph: &MapperGraph, field: &ScalarField, cover: &Cover, conn: Connectivity) -> Result<Self> {
        let (even, odd) = chain_regions(field, cover, conn)?;
        let n = field.len();
        let mut slots: [Vec<Option<usize>>; 2] = [Vec::new(), Vec::new()];
        let mut found = 0;
        for (k, map) in [&even, &odd].into_iter().enumerate() {
            slots[k] = map
                .regions()
                .iter()
                .map(|r| graph.index_of(node_id(r.interval, r.id, n)))
                .collect();
            found += slots[k].iter().filter(|s| s.is_some()).count();
        }
        if found != graph.node_count() || slots.iter().flatten().any(Option::is_none) {
            return Err(Error::Parameter(
                "graph nodes do not match the regions of this field and cover".into(),
            ));
        }
        Ok(Memberships {
            slots,
            maps: [even, odd],
        })
    }

    fn at(&self, pixel: usize) -> impl Iterator<Item = usize> + '_ {
        (0..2).filter_map(move |k| self.maps[k].slot_at(pixel).and_then(|s| self.slots[k][s]))
    }
}

/// Why an embedding check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingFailure {
    /// No fine region inside the coarse node's region has an interval inside its interval.
    NoImage { coarse: u64 },
    /// Two coarse nodes were sent to the same fine node.
    NotInjective { fine: u64 },
    /// No fine path realizes this coarse edge.
    NoPath { a: u64, b: u64 },
}

impl std::fmt::Display for EmbeddingFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmbeddingFailure::NoImage { coarse } => write!(f, "coarse node {coarse} has no image"),
            EmbeddingFailure::NotInjective { fine } => write!(f, "fine node {fine} is hit twice"),
            EmbeddingFailure::NoPath { a, b } => write!(f, "coarse edge ({a}, {b}) has no fine path"),
        }
    }
}

/// Verifies that the coarse graph embeds into the fine one.
///
/// Each coarse node `u` is sent to a fine node whose region lies inside
/// `u`'s region and whose interval lies inside `u`'s interval, preferring
/// the one containing `u`'s id pixel. The map must be injective, and every
/// coarse edge `(u, v)` must be realized by a fine path between the images
/// whose nodes all meet `u`'s or `v`'s region. Returns the node mapping as
/// `(coarse id, fine id)` pairs, or `None` when a property fails.
pub fn check_embedding(
    coarse: &MapperGraph,
    fine: &MapperGraph,
    coarse_cover: &Cover,
    fine_cover: &Cover,
    field: &ScalarField,
    conn: Connectivity,
) -> Result<Option<Vec<(u64, u64)>>> {
    Ok(embedding_report(coarse, fine, coarse_cover, fine_cover, field, conn)?.ok())
}

/// Like [`check_embedding`], but names the first property that fails.
pub fn embedding_report(
    coarse: &MapperGraph,
    fine: &MapperGraph,
    coarse_cover: &Cover,
    fine_cover: &Cover,
    field: &ScalarField,
    conn: Connectivity,
) -> Result<std::result::Result<Vec<(u64, u64)>, EmbeddingFailure>> {
    if !refines(fine_cover, coarse_cover) {
        return Err(Error::Parameter("fine cover does not refine the coarse cover".into()));
    }
    let cm = Memberships::build(coarse, field, coarse_cover, conn)?;
    let fm = Memberships::build(fine, field, fine_cover, conn)?;
    let n = field.len();

    let mut preferred: Vec<Option<usize>> = vec![None; coarse.node_count()];
    let mut fallback: Vec<Option<usize>> = vec![None; coarse.node_count()];
    let mut meets: Vec<Vec<usize>> = vec![Vec::new(); fine.node_count()];
    for p in 0..n {
        for u in cm.at(p) {
            let cu = &coarse.nodes()[u];
            let u_interval = coarse_cover.interval(cu.interval);
            for f in fm.at(p) {
                if !meets[f].contains(&u) {
                    meets[f].push(u);
                }
                let ff = &fine.nodes()[f];
                if fine_cover.interval(ff.interval).is_subset_of(&u_interval) {
                    if (cu.id % n as u64) as usize == p {
                        preferred[u] = Some(f);
                    }
                    if fallback[u].is_none_or(|g| fine.nodes()[g].id > ff.id) {
                        fallback[u] = Some(f);
                    }
                }
            }
        }
    }
    let mut phi = Vec::with_capacity(coarse.node_count());
    for u in 0..coarse.node_count() {
        match preferred[u].or(fallback[u]) {
            Some(f) => phi.push(f),
            None => {
                return Ok(Err(EmbeddingFailure::NoImage {
                    coarse: coarse.nodes()[u].id,
                }))
            }
        }
    }
    let mut images = phi.clone();
    images.sort_unstable();
    if let Some(w) = images.windows(2).find(|w| w[0] == w[1]) {
        return Ok(Err(EmbeddingFailure::NotInjective {
            fine: fine.nodes()[w[0]].id,
        }));
    }

    let fine_adj = fine.adjacency();
    let mut mark = vec![usize::MAX; fine.node_count()];
    for (k, e) in coarse.edges().iter().enumerate() {
        let (u, v) = (coarse.index_of(e.a).unwrap(), coarse.index_of(e.b).unwrap());
        let (src, dst) = (phi[u], phi[v]);
        let allowed = |f: usize| meets[f].iter().any(|&c| c == u || c == v);
        let mut queue = VecDeque::from([src]);
        mark[src] = k;
        let mut reached = src == dst;
        while let Some(x) = queue.pop_front() {
            if reached {
                break;
            }
            for &y in &fine_adj[x] {
                if mark[y] != k && allowed(y) {
                    mark[y] = k;
                    if y == dst {
                        reached = true;
                        break;
                    }
                    queue.push_back(y);
                }
            }
        }
        if !reached {
            return Ok(Err(EmbeddingFailure::NoPath { a: e.a, b: e.b }));
        }
    }
    Ok(Ok(
        phi.iter()
            .enumerate()
            .map(|(u, &f)| (coarse.nodes()[u].id, fine.nodes()[f].id))
            .collect(),
    ))
}
