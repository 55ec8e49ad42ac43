//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig};
use crate::cover::{
    contour_cover, join_cover, join_cover_with_thresholds, refines, split_cover,
    split_cover_with_thresholds, uniform_cover, Cover,
};
use crate::ctree::{contour_tree, critical_values, join_tree_sweep, split_tree_sweep};
use crate::error::{Error, Result};
use crate::field::{generate_pattern, load_field, Channel, Connectivity, PatternKind, ScalarField};
use crate::graph::{embedding_report, tree_isomorphic, MapperGraph};
use crate::mapper::{build_mapper_with, simplify, MapperOptions};

#[derive(Debug, Parser)]
#[command(name = "topomapper", version, about = "Mapper graphs of 2D scalar fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build one Mapper graph and report its size and cycle rank.
    Compute(RunArgs),
    /// Build one graph per slice count and check each dyadic refinement.
    Multires(RunArgs),
    /// Realize the contour, join or split tree and compare it with the sweep.
    Tree(RunArgs),
    /// Time Mapper construction and the contour-tree sweep.
    Bench(BenchArgs),
    /// Write a synthetic pattern as PGM and CSV.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Uniform,
    Contour,
    Join,
    Split,
}

#[derive(Debug, Clone, Args)]
struct FieldArgs {
    /// PGM, PNG or CSV file to read.
    #[arg(long, conflicts_with = "pattern")]
    input: Option<PathBuf>,
    #[arg(long, default_value = "luminance")]
    channel: Channel,
    /// Synthetic pattern to generate instead of reading a file.
    #[arg(long)]
    pattern: Option<PatternKind>,
    #[arg(long, default_value_t = 128)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl FieldArgs {
    fn load(&self) -> Result<ScalarField> {
        match (&self.input, self.pattern) {
            (Some(path), _) => load_field(path, self.channel),
            (None, Some(kind)) => generate_pattern(kind, self.size, self.seed),
            (None, None) => Err(Error::Parameter("either --input or --pattern is required".into())),
        }
    }
}

#[derive(Debug, Clone, Args)]
struct RunArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Slice counts (uniform) or level counts (join/split), comma separated.
    #[arg(long, value_delimiter = ',', default_value = "32")]
    slices: Vec<usize>,
    /// Overlap fraction g of each uniform slice, in (0, 0.5).
    #[arg(long, default_value_t = 0.25)]
    overlap: f64,
    #[arg(long, default_value = "four")]
    conn: Connectivity,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Contract valence-2 nodes before output.
    #[arg(long)]
    simplify: bool,
    /// Nested covers: link every pair of overlapping levels.
    #[arg(long)]
    full_nerve: bool,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Writes the field values as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl RunArgs {
    fn options(&self) -> MapperOptions {
        MapperOptions {
            full_nerve: self.full_nerve,
            ..MapperOptions::new(self.conn)
        }
    }

    fn check(&self) -> Result<()> {
        if self.slices.is_empty() {
            return Err(Error::Parameter("--slices needs at least one value".into()));
        }
        if let Some(&n) = self.slices.iter().find(|&&n| n == 0) {
            return Err(Error::Parameter(format!("slice count must be positive, got {n}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args)]
struct BenchArgs {
    /// Field sizes; defaults to powers of two from 256 up to --max-size.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 2048)]
    max_size: usize,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    slices: Vec<usize>,
    #[arg(long, default_value_t = 0.25)]
    overlap: f64,
    #[arg(long, default_value = "four")]
    conn: Connectivity,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Output file; the CSV goes to stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct GenerateArgs {
    #[arg(long)]
    pattern: PatternKind,
    #[arg(long, default_value_t = 128)]
    size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path stem; `.pgm` and `.csv` are appended.
    #[arg(long)]
    out: PathBuf,
}

/// Outcome of comparing a realized Mapper tree with the sweep reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeVerdict {
    Isomorphic,
    NotIsomorphic,
    /// The simplified Mapper graph has a cycle or several components.
    NotATree,
}

impl TreeVerdict {
    pub fn label(self) -> &'static str {
        match self {
            TreeVerdict::Isomorphic => "ISOMORPHIC",
            TreeVerdict::NotIsomorphic => "NOT-ISOMORPHIC",
            TreeVerdict::NotATree => "NOT-A-TREE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Realization {
    pub cover: Cover,
    /// Simplified Mapper graph.
    pub mapper: MapperGraph,
    /// Simplified reference tree from the sweep.
    pub reference: MapperGraph,
    pub verdict: TreeVerdict,
}

/// Thresholds halfway between consecutive distinct values.
pub fn midpoint_thresholds(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.windows(2).map(|p| p[0] + (p[1] - p[0]) / 2.0).collect()
}

/// Builds the cover that realizes the tree of type `mode`: the contour cover
/// over the critical values, or a join/split cover with one threshold
/// between each pair of consecutive sweep-tree node values.
pub fn realization_cover(field: &ScalarField, mode: Mode, conn: Connectivity) -> Result<Cover> {
    let range = field.value_range();
    match mode {
        Mode::Uniform => Err(Error::Parameter(
            "tree realization needs mode contour, join or split".into(),
        )),
        Mode::Contour => {
            let margin = ((range.1 - range.0) * 1e-3).max(1e-9);
            contour_cover(&critical_values(field, conn), margin)
        }
        Mode::Join => {
            let values: Vec<f64> = join_tree_sweep(field, conn).nodes().iter().map(|n| n.value).collect();
            join_cover_with_thresholds(range, &midpoint_thresholds(&values))
        }
        Mode::Split => {
            let values: Vec<f64> = split_tree_sweep(field, conn).nodes().iter().map(|n| n.value).collect();
            split_cover_with_thresholds(range, &midpoint_thresholds(&values))
        }
    }
}

/// Runs the realization pipeline for `mode` and compares with the sweep.
pub fn realize_tree(field: &ScalarField, mode: Mode, opts: &MapperOptions) -> Result<Realization> {
    let conn = opts.conn;
    let reference = match mode {
        Mode::Contour => contour_tree(field, conn),
        Mode::Join => join_tree_sweep(field, conn).to_graph(field),
        Mode::Split => split_tree_sweep(field, conn).to_graph(field),
        Mode::Uniform => {
            return Err(Error::Parameter(
                "tree realization needs mode contour, join or split".into(),
            ))
        }
    };
    let reference = simplify(&reference);
    let (lo, hi) = field.value_range();
    if lo == hi {
        // A constant field has no critical gap to cover; both sides are one node.
        let cover = uniform_cover((lo, hi), 1, 0.25)?;
        let mapper = simplify(&build_mapper_with(field, &cover, opts)?);
        let verdict = verdict(&mapper, &reference)?;
        return Ok(Realization {
            cover,
            mapper,
            reference,
            verdict,
        });
    }
    let cover = realization_cover(field, mode, conn)?;
    let mapper = simplify(&build_mapper_with(field, &cover, opts)?);
    let verdict = verdict(&mapper, &reference)?;
    Ok(Realization {
        cover,
        mapper,
        reference,
        verdict,
    })
}

fn verdict(mapper: &MapperGraph, reference: &MapperGraph) -> Result<TreeVerdict> {
    if !mapper.is_tree() {
        return Ok(TreeVerdict::NotATree);
    }
    Ok(if tree_isomorphic(mapper, reference)? {
        TreeVerdict::Isomorphic
    } else {
        TreeVerdict::NotIsomorphic
    })
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// `out.json` with tag 16 becomes `out_16.json`.
fn tagged_path(path: &Path, tag: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{tag}"),
    };
    path.with_file_name(name)
}

fn write_outputs(args: &RunArgs, graph: &MapperGraph, tag: Option<usize>) -> Result<()> {
    let target = |p: &PathBuf| tag.map_or_else(|| p.clone(), |t| tagged_path(p, t));
    if let Some(p) = &args.json {
        write_file(&target(p), graph.to_json())?;
    }
    if let Some(p) = &args.dot {
        write_file(&target(p), graph.to_dot())?;
    }
    Ok(())
}

fn build_cover(field: &ScalarField, args: &RunArgs, n: usize) -> Result<Cover> {
    let range = field.value_range();
    match args.mode.unwrap_or(Mode::Uniform) {
        Mode::Uniform => uniform_cover(range, n, args.overlap),
        Mode::Join => join_cover(range, n),
        Mode::Split => split_cover(range, n),
        Mode::Contour => realization_cover(field, Mode::Contour, args.conn),
    }
}

fn summary(graph: &MapperGraph) -> String {
    format!(
        "nodes {} edges {} components {} cycle_rank {} leaves {}{}",
        graph.node_count(),
        graph.edge_count(),
        graph.component_count(),
        graph.cycle_rank(),
        graph.leaf_count(),
        if graph.is_tree() { " (tree)" } else { "" }
    )
}

fn load_checked(args: &RunArgs) -> Result<ScalarField> {
    args.check()?;
    let field = args.field.load()?;
    if let Some(p) = &args.csv {
        field.write_csv(p)?;
    }
    Ok(field)
}

fn cmd_compute(args: &RunArgs) -> Result<i32> {
    let field = load_checked(args)?;
    let cover = build_cover(&field, args, args.slices[0])?;
    let mut graph = build_mapper_with(&field, &cover, &args.options())?;
    if args.simplify {
        graph = simplify(&graph);
    }
    println!("{}", summary(&graph));
    write_outputs(args, &graph, None)?;
    Ok(0)
}

fn cmd_multires(args: &RunArgs) -> Result<i32> {
    let field = load_checked(args)?;
    if !matches!(args.mode, None | Some(Mode::Uniform)) {
        return Err(Error::Parameter("multires uses uniform covers only".into()));
    }
    let opts = args.options();
    let mut levels = Vec::with_capacity(args.slices.len());
    for &n in &args.slices {
        let cover = uniform_cover(field.value_range(), n, args.overlap)?;
        let graph = build_mapper_with(&field, &cover, &opts)?;
        println!("slices {n}: {}", summary(&graph));
        write_outputs(args, &graph, Some(n))?;
        levels.push((n, cover, graph));
    }
    let mut status = 0;
    for pair in levels.windows(2) {
        let ((n0, c0, g0), (n1, c1, g1)) = (&pair[0], &pair[1]);
        if !refines(c1, c0) {
            eprintln!("warning: {n1} slices do not refine {n0} slices; embedding check skipped");
            continue;
        }
        match embedding_report(g0, g1, c0, c1, &field, args.conn)? {
            Ok(map) => println!("embedding {n0} -> {n1}: PASS ({} nodes mapped)", map.len()),
            Err(why) => {
                println!("embedding {n0} -> {n1}: FAIL ({why})");
                status = 1;
            }
        }
    }
    Ok(status)
}

fn cmd_tree(args: &RunArgs) -> Result<i32> {
    let field = load_checked(args)?;
    let mode = args.mode.unwrap_or(Mode::Contour);
    let mode_name = match mode {
        Mode::Contour => "contour",
        Mode::Join => "join",
        Mode::Split => "split",
        Mode::Uniform => "uniform",
    };
    let r = realize_tree(&field, mode, &args.options())?;
    println!("mapper: {}", summary(&r.mapper));
    println!("{mode_name} tree: {}", summary(&r.reference));
    write_outputs(args, &r.mapper, None)?;
    println!("{}", r.verdict.label());
    Ok(match r.verdict {
        TreeVerdict::Isomorphic => 0,
        TreeVerdict::NotIsomorphic => 1,
        TreeVerdict::NotATree => {
            eprintln!(
                "warning: the simplified Mapper graph is not a tree (cycle rank {}); \
                 the field is probably not continuous on its domain",
                r.mapper.cycle_rank()
            );
            0
        }
    })
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let sizes = if args.sizes.is_empty() {
        std::iter::successors(Some(256usize), |s| Some(s * 2))
            .take_while(|&s| s <= args.max_size)
            .collect()
    } else {
        args.sizes.clone()
    };
    if let Some(s) = sizes.iter().find(|&&s| s > args.max_size) {
        return Err(Error::Parameter(format!(
            "size {s} exceeds --max-size {}",
            args.max_size
        )));
    }
    if args.slices.contains(&0) {
        return Err(Error::Parameter("slice count must be positive".into()));
    }
    let config = BenchConfig {
        sizes,
        slices: args.slices.clone(),
        overlap: args.overlap,
        conn: args.conn,
        seed: args.seed,
        reps: args.reps.max(1),
        ..BenchConfig::default()
    };
    let rows = bench::run_bench(&config, |r| {
        let what = match (r.slices, r.mapper_ms, r.ctree_ms) {
            (Some(n), Some(ms), _) => format!("mapper {n} slices {ms:.2} ms"),
            (_, _, Some(ms)) => format!("contour tree {ms:.2} ms"),
            _ => String::new(),
        };
        eprintln!("{} {}: {what}", r.pattern, r.size);
    })?;
    match &args.csv {
        Some(p) => {
            let file = fs::File::create(p).map_err(|source| Error::Io {
                path: p.clone(),
                source,
            })?;
            bench::write_csv(&rows, file)?;
        }
        None => bench::write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(0)
}

fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    let field = generate_pattern(args.pattern, args.size, args.seed)?;
    field.write_pgm(&args.out.with_extension("pgm"))?;
    field.write_csv(&args.out.with_extension("csv"))?;
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status: 0 on success, 1 when a requested check
/// fails, 2 on errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => cmd_compute(a),
        Command::Multires(a) => cmd_multires(a),
        Command::Tree(a) => cmd_tree(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}
