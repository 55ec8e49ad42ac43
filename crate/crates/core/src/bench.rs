//! Scaling benchmark: Mapper construction against the contour-tree sweep.

use std::io::Write;
use std::time::Instant;

use crate::cover::uniform_cover;
use crate::ctree::contour_tree;
use crate::error::{Error, Result};
use crate::field::{generate_pattern, Connectivity, PatternKind};
use crate::mapper::{build_mapper_with, MapperOptions};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub patterns: Vec<PatternKind>,
    pub sizes: Vec<usize>,
    pub slices: Vec<usize>,
    pub overlap: f64,
    pub conn: Connectivity,
    pub seed: u64,
    /// Timed repetitions per cell, after one discarded warmup run.
    pub reps: usize,
    /// Whether to time the contour-tree sweep as well.
    pub ctree: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            patterns: PatternKind::BENCH.to_vec(),
            sizes: vec![256, 512, 1024],
            slices: vec![16, 32, 64],
            overlap: 0.25,
            conn: Connectivity::Four,
            seed: 1,
            reps: 3,
            ctree: true,
        }
    }
}

/// One CSV row. Mapper rows leave `ctree_ms` empty, contour-tree rows leave
/// `slices` and `mapper_ms` empty.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub pattern: PatternKind,
    pub size: usize,
    pub slices: Option<usize>,
    pub mapper_ms: Option<f64>,
    pub ctree_ms: Option<f64>,
}

fn time_ms<R>(f: impl FnOnce() -> R) -> f64 {
    let start = Instant::now();
    std::hint::black_box(f());
    start.elapsed().as_secs_f64() * 1e3
}

/// Median wall-clock milliseconds of `reps` runs of `f`, after a warmup run.
pub fn median_ms<R>(reps: usize, mut f: impl FnMut() -> R) -> f64 {
    std::hint::black_box(f());
    median((0..reps.max(1)).map(|_| time_ms(&mut f)).collect())
}

fn median(mut times: Vec<f64>) -> f64 {
    times.sort_by(f64::total_cmp);
    let m = times.len() / 2;
    if times.len() % 2 == 1 {
        times[m]
    } else {
        (times[m - 1] + times[m]) / 2.0
    }
}

/// Runs every (pattern, size, slices) cell, one timed run at a time. The
/// repetitions of a pattern's cells are interleaved round by round, so slow
/// drift in machine state spreads evenly over the cells being compared.
/// `progress` sees each row once its median is known.
pub fn run_bench(config: &BenchConfig, mut progress: impl FnMut(&BenchRow)) -> Result<Vec<BenchRow>> {
    if config.slices.is_empty() || config.sizes.is_empty() {
        return Err(Error::Parameter("benchmark needs at least one size and slice count".into()));
    }
    let opts = MapperOptions::new(config.conn);
    let mut rows = Vec::new();
    for &pattern in &config.patterns {
        // one entry per row: (size index, slices or None for the contour tree)
        let mut cells = Vec::new();
        let mut fields = Vec::with_capacity(config.sizes.len());
        let mut covers = Vec::new();
        for (k, &size) in config.sizes.iter().enumerate() {
            let field = generate_pattern(pattern, size, config.seed)?;
            for &n in &config.slices {
                let cover = uniform_cover(field.value_range(), n, config.overlap)?;
                build_mapper_with(&field, &cover, &opts)?;
                cells.push((k, Some(n)));
                covers.push(Some(cover));
            }
            if config.ctree {
                std::hint::black_box(contour_tree(&field, config.conn));
                cells.push((k, None));
                covers.push(None);
            }
            fields.push(field);
        }
        let mut times = vec![Vec::with_capacity(config.reps); cells.len()];
        for round in 0..config.reps.max(1) {
            // rotate the starting cell so no cell always follows the same one
            // (allocator state left by the previous run affects the next)
            for j in 0..cells.len() {
                let c = (j + round) % cells.len();
                let field = &fields[cells[c].0];
                let ms = match &covers[c] {
                    Some(cover) => time_ms(|| build_mapper_with(field, cover, &opts)),
                    None => time_ms(|| contour_tree(field, config.conn)),
                };
                times[c].push(ms);
            }
        }
        for ((k, slices), t) in cells.into_iter().zip(times) {
            let ms = median(t);
            let row = BenchRow {
                pattern,
                size: config.sizes[k],
                slices,
                mapper_ms: slices.map(|_| ms),
                ctree_ms: if slices.is_none() { Some(ms) } else { None },
            };
            progress(&row);
            rows.push(row);
        }
    }
    Ok(rows)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Format(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["pattern", "size", "slices", "mapper_ms", "ctree_ms"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.pattern.name().to_string(),
            r.size.to_string(),
            opt(r.slices),
            opt(r.mapper_ms.map(|m| format!("{m:.3}"))),
            opt(r.ctree_ms.map(|m| format!("{m:.3}"))),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Format(e.to_string()))
}
