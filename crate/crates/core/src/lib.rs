//! Mapper graphs of scalar fields on 2D pixel grids.
//!
//! A field is covered by overlapping value intervals; the connected regions
//! of each interval's pre-image become nodes and overlapping regions become
//! edges. Special covers built from critical values or nested thresholds
//! reproduce the contour tree and the join/split trees, which the [`ctree`]
//! module computes independently by union-find sweeps.

pub mod bench;
pub mod cli;
pub mod cover;
pub mod ctree;
pub mod error;
pub mod field;
pub mod graph;
pub mod mapper;
mod unionfind;

pub use cover::{contour_cover, join_cover, refines, split_cover, uniform_cover, Cover, CoverStyle, Interval};
pub use ctree::{contour_tree, critical_values, join_tree_sweep, split_tree_sweep, MergeTree};
pub use error::{Error, Result};
pub use field::{generate_pattern, load_field, Channel, Connectivity, PatternKind, ScalarField};
pub use graph::{check_embedding, tree_isomorphic, MapperGraph, MapperNode};
pub use mapper::{build_mapper, build_mapper_with, simplify, MapperOptions, Parallelism};
