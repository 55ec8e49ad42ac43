//! The Mapper pipeline on images: label pixels by cover part, find regions
//! by BFS seeded from candidate pixels, detect overlaps, and assemble the graph.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::cover::{Cover, CoverPart};
use crate::error::{Error, Result};
use crate::field::{Connectivity, ScalarField};
use crate::graph::{node_id, Edge, MapperGraph, MapperNode};

const NONE: u32 = u32::MAX;

/// Per-pixel interval index for one cover part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: usize,
    height: usize,
    labels: Vec<u32>,
}

impl LabelMap {
    /// Builds a map from explicit labels, mainly for tests and tools.
    pub fn from_labels(width: usize, height: usize, labels: &[Option<usize>]) -> Result<LabelMap> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(Error::Dimension(format!(
                "{} labels for a {width}x{height} grid",
                labels.len()
            )));
        }
        Ok(LabelMap {
            width,
            height,
            labels: labels
                .iter()
                .map(|l| l.map_or(NONE, |i| i as u32))
                .collect(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, pixel: usize) -> Option<usize> {
        let l = self.labels[pixel];
        (l != NONE).then_some(l as usize)
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != NONE).count()
    }
}

/// A row-scan pixel where the combined label pair changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub pixel: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    /// Smallest linear pixel index in the region.
    pub id: usize,
    pub interval: usize,
    pub count: usize,
    pub value_sum: f64,
    pub x_sum: f64,
    pub y_sum: f64,
}

impl Region {
    fn to_node(&self, pixel_count: usize) -> MapperNode {
        let c = self.count as f64;
        MapperNode {
            id: node_id(self.interval, self.id, pixel_count),
            interval: self.interval,
            pixel_count: self.count,
            mean_value: self.value_sum / c,
            cx: self.x_sum / c,
            cy: self.y_sum / c,
        }
    }
}

/// Regions of one cover part, sorted by id, with a per-pixel slot lookup.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionMap {
    width: usize,
    slot: Vec<u32>,
    regions: Vec<Region>,
}

impl RegionMap {
    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Position in [`RegionMap::regions`] of the region containing `pixel`.
    #[inline]
    pub fn slot_at(&self, pixel: usize) -> Option<usize> {
        let s = self.slot[pixel];
        (s != NONE).then_some(s as usize)
    }

    pub fn region_at(&self, pixel: usize) -> Option<&Region> {
        self.slot_at(pixel).map(|s| &self.regions[s])
    }

    /// Id of the region containing `pixel`.
    pub fn region_of(&self, pixel: usize) -> Option<usize> {
        self.region_at(pixel).map(|r| r.id)
    }
}

/// How the pipeline may use threads. The output never depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    /// The global rayon pool.
    #[default]
    Auto,
    Threads(usize),
}

impl Parallelism {
    /// Reads `MAPPER_THREADS`: `0` is sequential, `n` caps the pool at `n`
    /// threads, unset or unparsable uses the global pool.
    pub fn from_env() -> Parallelism {
        match std::env::var("MAPPER_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(0) => Parallelism::Sequential,
            Some(n) => Parallelism::Threads(n),
            None => Parallelism::Auto,
        }
    }

    fn is_parallel(self) -> bool {
        !matches!(self, Parallelism::Sequential | Parallelism::Threads(1))
    }

    fn run<R: Send>(self, f: impl FnOnce() -> R + Send) -> R {
        match self {
            Parallelism::Threads(n) if n > 1 => pool(n).install(f),
            _ => f(),
        }
    }
}

fn pool(threads: usize) -> Arc<rayon::ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<rayon::ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().unwrap();
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapperOptions {
    pub conn: Connectivity,
    pub parallelism: Parallelism,
    /// Nested covers only: connect every pair of overlapping levels instead
    /// of consecutive ones.
    pub full_nerve: bool,
}

impl MapperOptions {
    pub fn new(conn: Connectivity) -> MapperOptions {
        MapperOptions {
            conn,
            parallelism: Parallelism::from_env(),
            full_nerve: false,
        }
    }
}

fn label_rows(values: &[f64], out: &mut [u32], part: &CoverPart<'_>) {
    for (v, l) in values.iter().zip(out.iter_mut()) {
        *l = part.locate(*v).map_or(NONE, |i| i as u32);
    }
}

fn label_part(field: &ScalarField, part: &CoverPart<'_>, par: Parallelism) -> LabelMap {
    let mut labels = vec![NONE; field.len()];
    let w = field.width();
    if par.is_parallel() {
        let rows_per_task = (4096 / w).max(1) * w;
        labels
            .par_chunks_mut(rows_per_task)
            .zip(field.values().par_chunks(rows_per_task))
            .for_each(|(out, vals)| label_rows(vals, out, part));
    } else {
        label_rows(field.values(), &mut labels, part);
    }
    LabelMap {
        width: w,
        height: field.height(),
        labels,
    }
}

/// Labels every pixel by the interval of `part` containing its value.
///
/// Fails when some value lies in no interval of the whole cover.
pub fn label_pixels(field: &ScalarField, part: &CoverPart<'_>) -> Result<LabelMap> {
    let map = label_part(field, part, Parallelism::Sequential);
    let cover = part.cover();
    if let Some(p) = (0..field.len()).find(|&p| map.labels[p] == NONE && !cover.covers(field.value(p))) {
        return Err(Error::CoverMismatch {
            pixel: p,
            value: field.value(p),
        });
    }
    Ok(map)
}

fn check_dims(maps: &[&LabelMap]) -> (usize, usize) {
    let (w, h) = (maps[0].width, maps[0].height);
    assert!(
        maps.iter().all(|m| m.width == w && m.height == h),
        "label maps of different shapes"
    );
    (w, h)
}

fn candidates_in_row(maps: &[&LabelMap], row: usize, w: usize, out: &mut Vec<Candidate>) {
    let start = row * w;
    let unlabeled = |p: usize| maps.iter().all(|m| m.labels[p] == NONE);
    let differs = |p: usize| maps.iter().any(|m| m.labels[p] != m.labels[p - 1]);
    let mut seen_labeled = false;
    for p in start..start + w {
        if unlabeled(p) {
            continue;
        }
        if !seen_labeled || differs(p) {
            out.push(Candidate { pixel: p });
        }
        seen_labeled = true;
    }
}

fn candidates_of(maps: &[&LabelMap], par: Parallelism) -> Vec<Candidate> {
    let (w, h) = check_dims(maps);
    if par.is_parallel() {
        (0..h)
            .into_par_iter()
            .map(|row| {
                let mut v = Vec::new();
                candidates_in_row(maps, row, w, &mut v);
                v
            })
            .flatten_iter()
            .collect()
    } else {
        let mut out = Vec::new();
        for row in 0..h {
            candidates_in_row(maps, row, w, &mut out);
        }
        out
    }
}

/// Row-major scan over the (even, odd) label pairs: a pixel is a candidate
/// when it is the first labeled pixel of its row or its pair differs from
/// its left neighbor's.
pub fn find_candidates(even: &LabelMap, odd: &LabelMap) -> Vec<Candidate> {
    candidates_of(&[even, odd], Parallelism::Sequential)
}

/// Connected regions of equally labeled pixels, found by BFS from candidates.
pub fn find_regions(
    field: &ScalarField,
    labels: &LabelMap,
    candidates: &[Candidate],
    conn: Connectivity,
) -> RegionMap {
    assert_eq!(labels.labels.len(), field.len(), "label map does not match field");
    let (w, h) = (field.width(), field.height());
    let (lab, vals) = (&labels.labels[..], field.values());
    // neighbor rows are scanned one pixel wider under eight-connectivity
    let reach = usize::from(conn == Connectivity::Eight);
    let mut slot = vec![NONE; field.len()];
    // every region starts at a candidate
    let mut regions: Vec<Region> = Vec::with_capacity(candidates.len().min(field.len()));
    let mut seeds = Vec::new();
    for c in candidates {
        let label = lab[c.pixel];
        if label == NONE || slot[c.pixel] != NONE {
            continue;
        }
        let s = regions.len() as u32;
        let mut region = Region {
            id: c.pixel,
            interval: label as usize,
            count: 0,
            value_sum: 0.0,
            x_sum: 0.0,
            y_sum: 0.0,
        };
        // scanline fill: claim the whole run through a seed, then seed each
        // unclaimed run touching it in the rows above and below
        let open = |p: usize, slot: &[u32]| lab[p] == label && slot[p] == NONE;
        seeds.push(c.pixel);
        while let Some(p) = seeds.pop() {
            if slot[p] != NONE {
                continue;
            }
            let (y, row) = (p / w, p / w * w);
            let (mut l, mut r) = (p - row, p - row);
            while l > 0 && open(row + l - 1, &slot) {
                l -= 1;
            }
            while r + 1 < w && open(row + r + 1, &slot) {
                r += 1;
            }
            for x in l..=r {
                slot[row + x] = s;
                region.value_sum += vals[row + x];
            }
            let n = r - l + 1;
            region.id = region.id.min(row + l);
            region.count += n;
            region.x_sum += ((l + r) * n / 2) as f64;
            region.y_sum += (y * n) as f64;
            let (lo, hi) = (l.saturating_sub(reach), (r + reach).min(w - 1));
            for ny in [y.wrapping_sub(1), y + 1] {
                if ny >= h {
                    continue;
                }
                let mut x = lo;
                while x <= hi {
                    if open(ny * w + x, &slot) {
                        seeds.push(ny * w + x);
                        while x <= hi && open(ny * w + x, &slot) {
                            x += 1;
                        }
                    } else {
                        x += 1;
                    }
                }
            }
        }
        regions.push(region);
    }
    debug_assert!(
        (0..field.len()).all(|p| (labels.labels[p] == NONE) == (slot[p] == NONE)),
        "candidates missed a region"
    );
    if !regions.windows(2).all(|r| r[0].id < r[1].id) {
        // seeds are region minima under four-connectivity; keep ids sorted regardless
        let mut order: Vec<usize> = (0..regions.len()).collect();
        order.sort_by_key(|&i| regions[i].id);
        let mut rank = vec![0u32; regions.len()];
        for (new, &old) in order.iter().enumerate() {
            rank[old] = new as u32;
        }
        for s in slot.iter_mut().filter(|s| **s != NONE) {
            *s = rank[*s as usize];
        }
        regions = order.into_iter().map(|i| regions[i].clone()).collect();
    }
    RegionMap {
        width: w,
        slot,
        regions,
    }
}

/// Overlapping (even id, odd id) region pairs, read off the candidate pixels
/// and their left neighbors.
pub fn find_edges(
    even: &RegionMap,
    odd: &RegionMap,
    candidates: &[Candidate],
) -> BTreeSet<(usize, usize)> {
    edge_pairs(even, odd, candidates).into_iter().collect()
}

/// [`find_edges`] as a sorted, deduplicated vector.
fn edge_pairs(even: &RegionMap, odd: &RegionMap, candidates: &[Candidate]) -> Vec<(usize, usize)> {
    slot_pairs(even, odd, candidates)
        .into_iter()
        .map(|(a, b)| (even.regions[a as usize].id, odd.regions[b as usize].id))
        .collect()
}

/// Overlapping (even slot, odd slot) pairs. Slots follow region id order, so
/// sorting slots sorts ids.
fn slot_pairs(even: &RegionMap, odd: &RegionMap, candidates: &[Candidate]) -> Vec<(u32, u32)> {
    let w = even.width;
    let mut out = Vec::with_capacity(candidates.len());
    let mut probe = |p: usize| {
        let (a, b) = (even.slot[p], odd.slot[p]);
        // runs of candidates along a row often repeat the same pair
        if a != NONE && b != NONE && out.last() != Some(&(a, b)) {
            out.push((a, b));
        }
    };
    for c in candidates {
        if c.pixel % w != 0 {
            probe(c.pixel - 1);
        }
        probe(c.pixel);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Oracle for [`find_edges`]: every pixel carrying both region ids.
pub fn naive_edges(even: &RegionMap, odd: &RegionMap) -> BTreeSet<(usize, usize)> {
    (0..even.slot.len())
        .filter_map(|p| Some((even.region_of(p)?, odd.region_of(p)?)))
        .collect()
}

/// Regions of the (even, odd) parts of a chain cover.
pub fn chain_regions(
    field: &ScalarField,
    cover: &Cover,
    conn: Connectivity,
) -> Result<(RegionMap, RegionMap)> {
    let (even, odd, _) = chain_stage(field, cover, conn, Parallelism::Sequential)?;
    Ok((even, odd))
}

fn chain_stage(
    field: &ScalarField,
    cover: &Cover,
    conn: Connectivity,
    par: Parallelism,
) -> Result<(RegionMap, RegionMap, Vec<Candidate>)> {
    let (even_part, odd_part) = cover.split_even_odd()?;
    let (even, odd) = if par.is_parallel() {
        rayon::join(
            || label_part(field, &even_part, par),
            || label_part(field, &odd_part, par),
        )
    } else {
        (
            label_part(field, &even_part, par),
            label_part(field, &odd_part, par),
        )
    };
    if let Some(p) = (0..field.len()).find(|&p| even.labels[p] == NONE && odd.labels[p] == NONE) {
        return Err(Error::CoverMismatch {
            pixel: p,
            value: field.value(p),
        });
    }
    let candidates = candidates_of(&[&even, &odd], par);
    let (er, or) = if par.is_parallel() {
        rayon::join(
            || find_regions(field, &even, &candidates, conn),
            || find_regions(field, &odd, &candidates, conn),
        )
    } else {
        (
            find_regions(field, &even, &candidates, conn),
            find_regions(field, &odd, &candidates, conn),
        )
    };
    Ok((er, or, candidates))
}

fn build_chain(field: &ScalarField, cover: &Cover, opts: &MapperOptions) -> Result<MapperGraph> {
    let (even, odd, candidates) = chain_stage(field, cover, opts.conn, opts.parallelism)?;
    let n = field.len();
    // Node ids order by interval first; within a part regions are already in
    // id order, so a counting sort by interval yields sorted nodes.
    let mut next = vec![0usize; cover.len() + 1];
    for r in even.regions.iter().chain(&odd.regions) {
        next[r.interval + 1] += 1;
    }
    for i in 1..next.len() {
        next[i] += next[i - 1];
    }
    let mut nodes = vec![MapperNode::default(); even.regions.len() + odd.regions.len()];
    for r in even.regions.iter().chain(&odd.regions) {
        nodes[next[r.interval]] = r.to_node(n);
        next[r.interval] += 1;
    }
    let mut pairs: Vec<(u64, u64)> = slot_pairs(&even, &odd, &candidates)
        .into_iter()
        .map(|(a, b)| {
            let (ra, rb) = (&even.regions[a as usize], &odd.regions[b as usize]);
            let ia = node_id(ra.interval, ra.id, n);
            let ib = node_id(rb.interval, rb.id, n);
            (ia.min(ib), ia.max(ib))
        })
        .collect();
    pairs.sort_unstable();
    let edges = pairs.into_iter().map(|(a, b)| Edge::new(a, b)).collect();
    Ok(MapperGraph::from_parts(nodes, edges))
}

fn level_regions(field: &ScalarField, cover: &Cover, level: usize, conn: Connectivity) -> RegionMap {
    let iv = cover.interval(level);
    let labels = LabelMap {
        width: field.width(),
        height: field.height(),
        labels: field
            .values()
            .iter()
            .map(|&v| if iv.contains(v) { level as u32 } else { NONE })
            .collect(),
    };
    let candidates = candidates_of(&[&labels], Parallelism::Sequential);
    find_regions(field, &labels, &candidates, conn)
}

/// Nested covers: per-level thresholded regions, each linked to the region
/// containing it at the next level.
fn build_nested(field: &ScalarField, cover: &Cover, opts: &MapperOptions) -> Result<MapperGraph> {
    if let Some(p) = (0..field.len()).find(|&p| !cover.covers(field.value(p))) {
        return Err(Error::CoverMismatch {
            pixel: p,
            value: field.value(p),
        });
    }
    let n = field.len();
    let levels = cover.len();
    let batch = if opts.parallelism.is_parallel() { 8 } else { 1 };
    let mut nodes = Vec::new();
    // node index of the containing region one level up, per node
    let mut up: Vec<Option<usize>> = Vec::new();
    let mut prev: Option<(RegionMap, usize)> = None;
    let mut start = 0;
    while start < levels {
        let end = (start + batch).min(levels);
        let maps: Vec<RegionMap> = opts.parallelism.run(|| {
            if batch > 1 {
                (start..end)
                    .into_par_iter()
                    .map(|l| level_regions(field, cover, l, opts.conn))
                    .collect()
            } else {
                (start..end)
                    .map(|l| level_regions(field, cover, l, opts.conn))
                    .collect()
            }
        });
        for map in maps {
            let first = nodes.len();
            if let Some((pm, pfirst)) = &prev {
                for (k, r) in pm.regions.iter().enumerate() {
                    let s = map.slot_at(r.id).expect("nested levels contain lower levels");
                    up[pfirst + k] = Some(first + s);
                }
            }
            nodes.extend(map.regions.iter().map(|r| r.to_node(n)));
            up.resize(nodes.len(), None);
            prev = Some((map, first));
        }
        start = end;
    }
    let mut edges = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        let mut next = up[i];
        while let Some(j) = next {
            edges.push(Edge::new(node.id, nodes[j].id));
            next = if opts.full_nerve { up[j] } else { None };
        }
    }
    Ok(MapperGraph::from_parts(nodes, edges))
}

/// Builds the Mapper graph with threading taken from `MAPPER_THREADS`.
pub fn build_mapper(field: &ScalarField, cover: &Cover, conn: Connectivity) -> Result<MapperGraph> {
    build_mapper_with(field, cover, &MapperOptions::new(conn))
}

pub fn build_mapper_with(
    field: &ScalarField,
    cover: &Cover,
    opts: &MapperOptions,
) -> Result<MapperGraph> {
    if cover.style().is_nested() {
        build_nested(field, cover, opts)
    } else {
        opts.parallelism.run(|| build_chain(field, cover, opts))
    }
}

/// Contracts valence-2 nodes whose two edges lead to distinct neighbors.
///
/// The absorbed pixel counts accumulate on the replacement edge.
pub fn simplify(graph: &MapperGraph) -> MapperGraph {
    let n = graph.node_count();
    let mut edges: Vec<Option<Edge>> = graph.edges().iter().copied().map(Some).collect();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    let idx = |id: u64| graph.index_of(id).unwrap();
    for (k, e) in graph.edges().iter().enumerate() {
        incident[idx(e.a)].push(k);
        incident[idx(e.b)].push(k);
    }
    let mut removed = vec![false; n];
    let mut work: BTreeSet<usize> = (0..n).filter(|&v| incident[v].len() == 2).collect();
    while let Some(v) = work.pop_first() {
        if removed[v] {
            continue;
        }
        incident[v].retain(|&k| edges[k].is_some());
        if incident[v].len() != 2 {
            continue;
        }
        let (k1, k2) = (incident[v][0], incident[v][1]);
        let (e1, e2) = (edges[k1].unwrap(), edges[k2].unwrap());
        let me = graph.nodes()[v].id;
        let other = |e: Edge| if e.a == me { e.b } else { e.a };
        let (o1, o2) = (other(e1), other(e2));
        if k1 == k2 || o1 == o2 || o1 == me || o2 == me {
            continue;
        }
        edges[k1] = None;
        edges[k2] = None;
        removed[v] = true;
        let absorbed = e1.absorbed + e2.absorbed + graph.nodes()[v].pixel_count;
        let k = edges.len();
        edges.push(Some(Edge::with_absorbed(o1, o2, absorbed)));
        for o in [idx(o1), idx(o2)] {
            incident[o].push(k);
            incident[o].retain(|&j| edges[j].is_some());
            if incident[o].len() == 2 {
                work.insert(o);
            }
        }
    }
    let nodes = graph
        .nodes()
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(node, _)| node.clone())
        .collect();
    MapperGraph::from_parts(nodes, edges.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{join_cover, split_cover, uniform_cover};
    use crate::field::{generate_pattern, PatternKind};
    use crate::graph::MapperNode;

    const A: Option<usize> = Some(0);
    const B: Option<usize> = Some(1);
    const X: Option<usize> = None;

    fn row(values: Vec<f64>) -> ScalarField {
        ScalarField::from_values(values.len(), 1, values).unwrap()
    }

    fn ramp(n: usize) -> ScalarField {
        row((0..n).map(|i| i as f64 / (n - 1) as f64).collect())
    }

    /// Three humps above the midline: peaks at both ends and the center,
    /// valleys at the quarter points.
    fn three_humps() -> ScalarField {
        let n = 81;
        row((0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64 * 4.0;
                (t - 2.0 * ((t + 1.0) / 2.0).floor()).abs()
            })
            .map(|d| 1.0 - d)
            .collect())
    }

    fn components_1d(field: &ScalarField, inside: impl Fn(f64) -> bool) -> usize {
        let v = field.values();
        (0..v.len())
            .filter(|&i| inside(v[i]) && (i == 0 || !inside(v[i - 1])))
            .count()
    }

    #[test]
    fn label_examples() {
        let f = ScalarField::from_values(3, 3, vec![0.5; 9]).unwrap();
        let cover = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        let (even, odd) = cover.split_even_odd().unwrap();
        let e = label_pixels(&f, &even).unwrap();
        assert!((0..9).all(|p| e.get(p) == Some(1)));
        // 0.5 also lies in the overlap of U_2 and U_3
        let o = label_pixels(&f, &odd).unwrap();
        assert!((0..9).all(|p| o.get(p) == Some(2)));
        let h = ScalarField::from_values(3, 1, vec![0.1, 0.25, 0.9]).unwrap();
        let o = label_pixels(&h, &odd).unwrap();
        assert_eq!((o.get(0), o.get(1), o.get(2)), (Some(0), Some(0), None));

        let g = row(vec![0.5, 2.0]);
        match label_pixels(&g, &even) {
            Err(Error::CoverMismatch { pixel, value }) => assert_eq!((pixel, value), (1, 2.0)),
            other => panic!("expected cover mismatch, got {other:?}"),
        }
    }

    #[test]
    fn candidate_examples() {
        let even = LabelMap::from_labels(6, 1, &[A, A, A, X, X, A]).unwrap();
        let odd = LabelMap::from_labels(6, 1, &[X, X, B, B, X, X]).unwrap();
        let pix: Vec<usize> = find_candidates(&even, &odd).iter().map(|c| c.pixel).collect();
        assert_eq!(pix, vec![0, 2, 3, 5]);

        let one = LabelMap::from_labels(4, 3, &[A; 12]).unwrap();
        let none = LabelMap::from_labels(4, 3, &[X; 12]).unwrap();
        let pix: Vec<usize> = find_candidates(&one, &none).iter().map(|c| c.pixel).collect();
        assert_eq!(pix, vec![0, 4, 8]);
        assert!(find_candidates(&none, &none).is_empty());
    }

    fn regions_of(labels: &LabelMap, conn: Connectivity) -> RegionMap {
        let f = ScalarField::from_values(labels.width, labels.height, vec![0.0; labels.labels.len()])
            .unwrap();
        let none = LabelMap::from_labels(labels.width, labels.height, &vec![X; labels.labels.len()])
            .unwrap();
        let c = find_candidates(labels, &none);
        find_regions(&f, labels, &c, conn)
    }

    #[test]
    fn region_examples() {
        let strips = LabelMap::from_labels(3, 3, &[A, X, A, A, X, A, A, X, A]).unwrap();
        for conn in [Connectivity::Four, Connectivity::Eight] {
            let r = regions_of(&strips, conn);
            let counts: Vec<(usize, usize)> = r.regions().iter().map(|r| (r.id, r.count)).collect();
            assert_eq!(counts, vec![(0, 3), (2, 3)]);
        }
        let checker = LabelMap::from_labels(2, 2, &[A, X, X, A]).unwrap();
        assert_eq!(regions_of(&checker, Connectivity::Four).regions().len(), 2);
        let r8 = regions_of(&checker, Connectivity::Eight);
        assert_eq!(r8.regions().len(), 1);
        assert_eq!(r8.regions()[0].count, 2);
    }

    #[test]
    fn region_ids_are_minima_under_eight_connectivity() {
        // the anti-diagonal region is entered at pixel 2 but contains pixel 1 only later rows
        let labels = LabelMap::from_labels(3, 3, &[X, X, A, X, A, X, A, X, X]).unwrap();
        let r = regions_of(&labels, Connectivity::Eight);
        assert_eq!(r.regions().len(), 1);
        assert_eq!(r.regions()[0].id, 2);
        let v = LabelMap::from_labels(3, 2, &[A, X, A, X, A, X]).unwrap();
        let r = regions_of(&v, Connectivity::Eight);
        assert_eq!(r.regions().len(), 1);
        assert_eq!(r.region_of(4), Some(0));
    }

    #[test]
    fn region_statistics() {
        let f = ScalarField::from_values(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let labels = LabelMap::from_labels(2, 2, &[A, A, X, A]).unwrap();
        let none = LabelMap::from_labels(2, 2, &[X; 4]).unwrap();
        let r = find_regions(&f, &labels, &find_candidates(&labels, &none), Connectivity::Four);
        let reg = &r.regions()[0];
        assert_eq!((reg.count, reg.value_sum, reg.x_sum, reg.y_sum), (3, 7.0, 2.0, 1.0));
    }

    #[test]
    fn ramp_edges_form_a_path() {
        let f = ramp(100);
        let cover = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        let (even, odd, cand) = chain_stage(&f, &cover, Connectivity::Four, Parallelism::Sequential).unwrap();
        let edges = find_edges(&even, &odd, &cand);
        assert_eq!(edges, naive_edges(&even, &odd));
        let interval_pairs: BTreeSet<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| (even.region_at(a).unwrap().interval, odd.region_at(b).unwrap().interval))
            .collect();
        assert_eq!(interval_pairs, BTreeSet::from([(1, 0), (1, 2), (3, 2)]));
    }

    #[test]
    fn naive_edge_examples() {
        let f = ScalarField::from_values(2, 1, vec![0.0, 0.0]).unwrap();
        let a = LabelMap::from_labels(2, 1, &[A, X]).unwrap();
        let b = LabelMap::from_labels(2, 1, &[X, B]).unwrap();
        let both_a = LabelMap::from_labels(2, 1, &[A, A]).unwrap();
        let both_b = LabelMap::from_labels(2, 1, &[B, B]).unwrap();
        let regions = |l: &LabelMap| find_regions(&f, l, &find_candidates(&both_a, l), Connectivity::Four);
        assert!(naive_edges(&regions(&a), &regions(&b)).is_empty());
        assert_eq!(naive_edges(&regions(&both_a), &regions(&both_b)), BTreeSet::from([(0, 0)]));
    }

    #[test]
    fn one_dimensional_example() {
        let f = three_humps();
        let cover = uniform_cover((0.0, 1.0), 2, 0.25).unwrap();
        let (lo, hi) = (cover.interval(0), cover.interval(1));
        assert_eq!(components_1d(&f, |v| lo.contains(v)), 2);
        assert_eq!(components_1d(&f, |v| hi.contains(v)), 3);
        let g = build_mapper(&f, &cover, Connectivity::Four).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        assert!(g.is_tree());
        let lower = g.nodes().iter().filter(|n| n.interval == 0).count();
        assert_eq!(lower, 2);
    }

    #[test]
    fn constant_and_ramp_graphs() {
        let f = ScalarField::from_values(5, 4, vec![0.3; 20]).unwrap();
        for n in [1, 3, 7] {
            let cover = uniform_cover(f.value_range(), n, 0.2).unwrap();
            let g = build_mapper(&f, &cover, Connectivity::Four).unwrap();
            assert_eq!((g.node_count(), g.edge_count()), (1, 0));
        }
        // an even slice count puts the value on a slice boundary, inside an overlap
        let cover = uniform_cover(f.value_range(), 4, 0.2).unwrap();
        let g = build_mapper(&f, &cover, Connectivity::Four).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(simplify(&g).node_count(), 2);
        for n in [1, 2, 5, 9] {
            let cover = uniform_cover((0.0, 1.0), n, 0.25).unwrap();
            let g = build_mapper(&ramp(200), &cover, Connectivity::Four).unwrap();
            // one region per interval, one edge per occupied overlap zone
            assert_eq!((g.node_count(), g.edge_count()), (n, n - 1));
            assert!(g.is_tree());
            assert_eq!(g.leaf_count(), if n == 1 { 0 } else { 2 });
        }
    }

    #[test]
    fn node_attributes() {
        let f = ramp(100);
        let cover = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        let g = build_mapper(&f, &cover, Connectivity::Four).unwrap();
        let total: usize = g.nodes().iter().map(|n| n.pixel_count).sum();
        assert!(total > 100);
        for node in g.nodes() {
            let iv = cover.interval(node.interval);
            assert!(iv.lo < node.mean_value && node.mean_value < iv.hi);
            assert_eq!(node.cy, 0.0);
        }
    }

    #[test]
    fn nested_pipeline_on_ramp_is_a_path() {
        let f = ramp(50);
        let g = build_mapper(&f, &join_cover((0.0, 1.0), 5).unwrap(), Connectivity::Four).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        let full = build_mapper_with(
            &f,
            &split_cover((0.0, 1.0), 5).unwrap(),
            &MapperOptions {
                full_nerve: true,
                ..MapperOptions::new(Connectivity::Four)
            },
        )
        .unwrap();
        assert_eq!((full.node_count(), full.edge_count()), (5, 10));
    }

    #[test]
    fn nested_pipeline_counts_sublevel_components() {
        // two basins joined at the middle
        let f = row(vec![0.0, 1.0, 2.0, 1.0, 0.0]);
        let g = build_mapper(&f, &join_cover((0.0, 2.0), 2).unwrap(), Connectivity::Four).unwrap();
        // level 0: f < 1 -> two pixels; level 1: everything
        assert_eq!((g.node_count(), g.edge_count()), (3, 2));
        assert!(g.is_tree());
    }

    #[test]
    fn ring_gradient_has_a_cycle() {
        let f = generate_pattern(PatternKind::RingGradient, 64, 0).unwrap();
        let cover = uniform_cover(f.value_range(), 8, 0.25).unwrap();
        let g = build_mapper(&f, &cover, Connectivity::Four).unwrap();
        assert!(g.cycle_rank() >= 1);
    }

    #[test]
    fn parallel_matches_sequential() {
        let f = generate_pattern(PatternKind::Perlin, 48, 3).unwrap();
        let cover = uniform_cover(f.value_range(), 8, 0.3).unwrap();
        let run = |parallelism| {
            build_mapper_with(
                &f,
                &cover,
                &MapperOptions {
                    conn: Connectivity::Four,
                    parallelism,
                    full_nerve: false,
                },
            )
            .unwrap()
            .to_json()
        };
        let seq = run(Parallelism::Sequential);
        assert_eq!(seq, run(Parallelism::Threads(4)));
        assert_eq!(seq, run(Parallelism::Auto));
    }

    fn simple_graph(n: u64, edges: &[(u64, u64)]) -> MapperGraph {
        MapperGraph::new(
            (0..n)
                .map(|id| MapperNode {
                    id,
                    interval: 0,
                    pixel_count: 2,
                    mean_value: 0.0,
                    cx: 0.0,
                    cy: 0.0,
                })
                .collect(),
            edges.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn simplify_examples() {
        let s = simplify(&simple_graph(3, &[(0, 1), (1, 2)]));
        assert_eq!(s.node_count(), 2);
        assert_eq!(s.edges(), &[Edge::with_absorbed(0, 2, 2)]);

        let hexagon: Vec<(u64, u64)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let s = simplify(&simple_graph(6, &hexagon));
        assert_eq!((s.node_count(), s.edge_count(), s.cycle_rank()), (2, 2, 1));
        assert_eq!(s.edges()[0].a, s.edges()[1].a);
        assert_eq!(s.edges()[0].b, s.edges()[1].b);

        let star = simple_graph(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(simplify(&star), star);

        let looped = simple_graph(1, &[(0, 0)]);
        assert_eq!(simplify(&looped), looped);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_field(max: usize) -> impl Strategy<Value = ScalarField> {
            (1..=max, 1..=max).prop_flat_map(|(w, h)| {
                prop::collection::vec(0u8..12, w * h).prop_map(move |v| {
                    ScalarField::from_values(w, h, v.into_iter().map(|x| x as f64 / 11.0).collect())
                        .unwrap()
                })
            })
        }

        fn arb_conn() -> impl Strategy<Value = Connectivity> {
            prop_oneof![Just(Connectivity::Four), Just(Connectivity::Eight)]
        }

        fn flood_count(field: &ScalarField, inside: impl Fn(f64) -> bool, conn: Connectivity) -> usize {
            let mut seen = vec![false; field.len()];
            let mut count = 0;
            for s in 0..field.len() {
                if seen[s] || !inside(field.value(s)) {
                    continue;
                }
                count += 1;
                seen[s] = true;
                let mut stack = vec![s];
                while let Some(p) = stack.pop() {
                    for q in field.neighbors(p, conn).unwrap() {
                        if !seen[q] && inside(field.value(q)) {
                            seen[q] = true;
                            stack.push(q);
                        }
                    }
                }
            }
            count
        }

        proptest! {
            #[test]
            fn regions_partition_and_are_seeded(f in arb_field(12), n in 1usize..6, g in 0.05f64..0.45, conn in arb_conn()) {
                let cover = uniform_cover(f.value_range(), n, g).unwrap();
                let (ep, op) = cover.split_even_odd().unwrap();
                let even = label_pixels(&f, &ep).unwrap();
                let odd = label_pixels(&f, &op).unwrap();
                let cand = find_candidates(&even, &odd);
                for (labels, part) in [(&even, &ep), (&odd, &op)] {
                    let r = find_regions(&f, labels, &cand, conn);
                    let total: usize = r.regions().iter().map(|x| x.count).sum();
                    prop_assert_eq!(total, labels.labeled_count());
                    for reg in r.regions() {
                        prop_assert!(cand.iter().any(|c| r.region_of(c.pixel) == Some(reg.id)));
                        prop_assert_eq!(r.region_of(reg.id), Some(reg.id));
                        let members: Vec<usize> = (0..f.len()).filter(|&p| r.region_of(p) == Some(reg.id)).collect();
                        prop_assert_eq!(members[0], reg.id);
                    }
                    // region count per interval equals an independent flood fill
                    for i in part.indices() {
                        let iv = cover.interval(i);
                        let want = flood_count(&f, |v| iv.contains(v), conn);
                        let got = r.regions().iter().filter(|x| x.interval == i).count();
                        prop_assert_eq!(got, want);
                    }
                }
            }

            #[test]
            fn edges_match_oracle(f in arb_field(16), n in 1usize..9, g in 0.05f64..0.45, conn in arb_conn()) {
                let cover = uniform_cover(f.value_range(), n, g).unwrap();
                let (even, odd, cand) = chain_stage(&f, &cover, conn, Parallelism::Sequential).unwrap();
                prop_assert_eq!(find_edges(&even, &odd, &cand), naive_edges(&even, &odd));
            }

            #[test]
            fn simplify_preserves_topology(f in arb_field(14), n in 1usize..8, g in 0.05f64..0.45) {
                let cover = uniform_cover(f.value_range(), n, g).unwrap();
                let graph = build_mapper(&f, &cover, Connectivity::Four).unwrap();
                let s = simplify(&graph);
                prop_assert_eq!(s.leaf_count(), graph.leaf_count());
                prop_assert_eq!(s.component_count(), graph.component_count());
                prop_assert_eq!(s.cycle_rank(), graph.cycle_rank());
                prop_assert!(s.degrees().iter().all(|&d| d != 2) || s.cycle_rank() > 0);
                prop_assert_eq!(simplify(&s), s);
            }

            #[test]
            fn build_is_independent_of_threads(f in arb_field(20), n in 1usize..8) {
                let cover = uniform_cover(f.value_range(), n, 0.25).unwrap();
                let opts = |parallelism| MapperOptions { conn: Connectivity::Four, parallelism, full_nerve: false };
                let a = build_mapper_with(&f, &cover, &opts(Parallelism::Sequential)).unwrap();
                let b = build_mapper_with(&f, &cover, &opts(Parallelism::Threads(3))).unwrap();
                prop_assert_eq!(a.to_json(), b.to_json());
            }
        }
    }
}
