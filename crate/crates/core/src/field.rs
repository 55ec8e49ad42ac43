//! Scalar fields on 2D pixel grids.
//!
//! A [`ScalarField`] is the domain and height function of a Mapper run: a
//! row-major grid of finite samples plus the adjacency conventions used to
//! decide which pixels touch. Fields come from image files ([`load_field`])
//! or from the deterministic synthetic generators in [`generate_pattern`].

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pixel adjacency used when growing connected regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    /// Up, left, right, down.
    #[default]
    Four,
    /// The four edge neighbors plus the four diagonals.
    Eight,
}

impl FromStr for Connectivity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4" | "four" => Ok(Connectivity::Four),
            "8" | "eight" => Ok(Connectivity::Eight),
            other => Err(Error::Parameter(format!("unknown connectivity '{other}'"))),
        }
    }
}

/// Channel extracted when loading an image file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Channel {
    #[default]
    Luminance,
    Red,
    Green,
    Blue,
    /// Integer samples without normalization.
    Raw,
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "luminance" | "luma" => Ok(Channel::Luminance),
            "red" => Ok(Channel::Red),
            "green" => Ok(Channel::Green),
            "blue" => Ok(Channel::Blue),
            "raw" => Ok(Channel::Raw),
            other => Err(Error::Parameter(format!("unknown channel '{other}'"))),
        }
    }
}

/// Synthetic test and benchmark patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Perlin,
    Saddle,
    TwoPeaks,
    RingGradient,
    Bench1,
    Bench2,
    Bench3,
    Bench4,
}

impl PatternKind {
    pub const ALL: [PatternKind; 8] = [
        PatternKind::Perlin,
        PatternKind::Saddle,
        PatternKind::TwoPeaks,
        PatternKind::RingGradient,
        PatternKind::Bench1,
        PatternKind::Bench2,
        PatternKind::Bench3,
        PatternKind::Bench4,
    ];

    pub const BENCH: [PatternKind; 4] = [
        PatternKind::Bench1,
        PatternKind::Bench2,
        PatternKind::Bench3,
        PatternKind::Bench4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Perlin => "perlin",
            PatternKind::Saddle => "saddle",
            PatternKind::TwoPeaks => "two_peaks",
            PatternKind::RingGradient => "ring_gradient",
            PatternKind::Bench1 => "bench1",
            PatternKind::Bench2 => "bench2",
            PatternKind::Bench3 => "bench3",
            PatternKind::Bench4 => "bench4",
        }
    }

    /// Every pattern except the ring is a continuous function sampled on the grid.
    pub fn is_continuous(self) -> bool {
        self != PatternKind::RingGradient
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PatternKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown pattern '{s}'")))
    }
}

/// A width x height grid of finite samples stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn from_values(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimension(format!(
                "field must be at least 1x1, got {width}x{height}"
            )));
        }
        if values.len() != width * height {
            return Err(Error::Dimension(format!(
                "{width}x{height} field needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!(
                "value {} at pixel {i} is not finite",
                values[i]
            )));
        }
        Ok(ScalarField {
            width,
            height,
            values,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of pixels.
    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// Exact minimum and maximum sample. A constant field returns `(v, v)`.
    pub fn value_range(&self) -> (f64, f64) {
        self.values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// In-bounds neighbors of `index`: up, left, right, down, then (for
    /// eight-connectivity) up-left, up-right, down-left, down-right.
    pub fn neighbors(&self, index: usize, conn: Connectivity) -> Result<Vec<usize>> {
        if index >= self.len() {
            return Err(Error::Bounds {
                index,
                len: self.len(),
            });
        }
        let mut out = Vec::with_capacity(8);
        self.for_each_neighbor(index, conn, |j| out.push(j));
        Ok(out)
    }

    /// Allocation-free neighbor iteration in the same order as [`neighbors`](Self::neighbors).
    #[inline]
    pub fn for_each_neighbor(&self, index: usize, conn: Connectivity, mut f: impl FnMut(usize)) {
        let w = self.width;
        let x = index % w;
        let y = index / w;
        let up = y > 0;
        let down = y + 1 < self.height;
        let left = x > 0;
        let right = x + 1 < w;
        if up {
            f(index - w);
        }
        if left {
            f(index - 1);
        }
        if right {
            f(index + 1);
        }
        if down {
            f(index + w);
        }
        if conn == Connectivity::Eight {
            if up && left {
                f(index - w - 1);
            }
            if up && right {
                f(index - w + 1);
            }
            if down && left {
                f(index + w - 1);
            }
            if down && right {
                f(index + w + 1);
            }
        }
    }

    /// Comma-separated rows using the shortest exact decimal for each value.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::with_capacity(self.len() * 8);
        for row in self.values.chunks(self.width) {
            let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Binary 8-bit PGM; values are clamped to [0, 1] and quantized to 0..=255.
    pub fn to_pgm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(
            self.values
                .iter()
                .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
        );
        out
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_pgm_bytes()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Load a field from a PGM (P2/P5), PNG, or CSV file.
///
/// Integer samples map affinely onto [0, 1] (`0 -> 0.0`, `maxval -> 1.0`)
/// unless `channel` is [`Channel::Raw`]. CSV values are taken as-is and the
/// channel is ignored.
pub fn load_field(path: &Path, channel: Channel) -> Result<ScalarField> {
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return parse_pgm(&bytes, channel);
    }
    if bytes.starts_with(b"\x89PNG") {
        return decode_png(&bytes, channel);
    }
    let is_csv = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        return parse_csv(&bytes);
    }
    Err(Error::Format(format!(
        "{}: unrecognized file format",
        path.display()
    )))
}

/// Parse CSV text with one image row per line.
pub fn parse_csv(bytes: &[u8]) -> Result<ScalarField> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let mut width = None;
    let mut values = Vec::new();
    let mut height = 0;
    for record in reader.records() {
        let record = record.map_err(|e| Error::Format(format!("csv: {e}")))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Format(format!(
                    "csv row {height} has {} columns, expected {w}",
                    record.len()
                )))
            }
            Some(_) => {}
        }
        for field in record.iter() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Format(format!("csv: '{field}' is not a number")))?;
            values.push(v);
        }
        height += 1;
    }
    let width = width.ok_or_else(|| Error::Format("csv: no rows".into()))?;
    ScalarField::from_values(width, height, values)
}

struct PgmTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PgmTokens<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn next_uint(&mut self) -> Result<u32> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("pgm: expected an unsigned integer".into()))
    }
}

fn parse_pgm(bytes: &[u8], channel: Channel) -> Result<ScalarField> {
    let binary = bytes[1] == b'5';
    let mut tok = PgmTokens { bytes, pos: 2 };
    let width = tok.next_uint()? as usize;
    let height = tok.next_uint()? as usize;
    let maxval = tok.next_uint()?;
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("pgm: maxval {maxval} out of range")));
    }
    let n = width * height;
    let mut samples = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = tok.pos + 1;
        let depth = if maxval < 256 { 1 } else { 2 };
        let raster = bytes
            .get(start..start + n * depth)
            .ok_or_else(|| Error::Format("pgm: truncated raster".into()))?;
        if depth == 1 {
            samples.extend(raster.iter().map(|&b| b as u32));
        } else {
            samples.extend(
                raster
                    .chunks_exact(2)
                    .map(|c| u16::from_be_bytes([c[0], c[1]]) as u32),
            );
        }
    } else {
        for _ in 0..n {
            samples.push(tok.next_uint()?);
        }
    }
    if let Some(&s) = samples.iter().find(|&&s| s > maxval) {
        return Err(Error::Format(format!("pgm: sample {s} exceeds maxval {maxval}")));
    }
    let scale = if channel == Channel::Raw {
        1.0
    } else {
        maxval as f64
    };
    let values = samples.into_iter().map(|s| s as f64 / scale).collect();
    ScalarField::from_values(width, height, values).map_err(|e| match e {
        Error::Dimension(m) => Error::Format(format!("pgm: {m}")),
        other => other,
    })
}

fn decode_png(bytes: &[u8], channel: Channel) -> Result<ScalarField> {
    let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|e| Error::Format(format!("png: {e}")))?;
    let (width, height) = (img.width() as usize, img.height() as usize);
    let scale = if channel == Channel::Raw { 1.0 } else { 255.0 };
    let values: Vec<f64> = if img.color().has_color() {
        let rgb = img.to_rgb8();
        rgb.pixels()
            .map(|p| {
                let [r, g, b] = p.0.map(f64::from);
                let v = match channel {
                    Channel::Luminance | Channel::Raw => 0.2126 * r + 0.7152 * g + 0.0722 * b,
                    Channel::Red => r,
                    Channel::Green => g,
                    Channel::Blue => b,
                };
                v / scale
            })
            .collect()
    } else {
        img.to_luma8()
            .pixels()
            .map(|p| f64::from(p.0[0]) / scale)
            .collect()
    };
    ScalarField::from_values(width, height, values)
}

fn normalize(values: &mut [f64]) {
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = hi - lo;
    if span > 0.0 {
        for v in values.iter_mut() {
            *v = (*v - lo) / span;
        }
    } else {
        values.fill(0.0);
    }
}

const PERLIN_CELL: usize = 8;

/// Gradient noise on a lattice of `PERLIN_CELL`-pixel cells with random
/// unit gradients and quintic fade, sampled at pixel centers.
///
/// Gradient angles are continuous, so distinct pixels essentially never
/// share a value (a fixed gradient set repeats values across cells).
fn gradient_noise(size: usize, seed: u64, out: &mut [f64]) {
    let cells = size.div_ceil(PERLIN_CELL) + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grads: Vec<(f64, f64)> = (0..cells * cells)
        .map(|_| {
            let a = rng.random_range(0.0..2.0 * PI);
            (a.cos(), a.sin())
        })
        .collect();
    let fade = |t: f64| t * t * t * (t * (t * 6.0 - 15.0) + 10.0);
    let cell = PERLIN_CELL as f64;
    for (i, v) in out.iter_mut().enumerate() {
        let (x, y) = ((i % size) as f64 + 0.5, (i / size) as f64 + 0.5);
        let (gx, gy) = ((x / cell).floor(), (y / cell).floor());
        let (fx, fy) = (x / cell - gx, y / cell - gy);
        let (cx, cy) = (gx as usize, gy as usize);
        let dot = |dx: usize, dy: usize| {
            let g = grads[(cy + dy) * cells + cx + dx];
            g.0 * (fx - dx as f64) + g.1 * (fy - dy as f64)
        };
        let (u, w) = (fade(fx), fade(fy));
        let top = dot(0, 0) + u * (dot(1, 0) - dot(0, 0));
        let bottom = dot(0, 1) + u * (dot(1, 1) - dot(0, 1));
        *v = top + w * (bottom - top);
    }
}

fn gaussian(x: f64, y: f64, cx: f64, cy: f64, sigma: f64) -> f64 {
    let d2 = (x - cx).powi(2) + (y - cy).powi(2);
    (-d2 / (2.0 * sigma * sigma)).exp()
}

/// Deterministic synthetic field of `size x size` pixels normalized to [0, 1].
///
/// Only `perlin`/`bench1` depend on `seed`.
pub fn generate_pattern(kind: PatternKind, size: usize, seed: u64) -> Result<ScalarField> {
    if size < 2 {
        return Err(Error::Dimension(format!("pattern size must be >= 2, got {size}")));
    }
    let s = size as f64;
    let mut values = vec![0.0; size * size];
    let coords = (0..size * size).map(|i| ((i % size) as f64, (i / size) as f64));
    match kind {
        PatternKind::Perlin | PatternKind::Bench1 => {
            gradient_noise(size, seed, &mut values);
        }
        PatternKind::Saddle => {
            let step = 2.0 / (s - 1.0);
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                let u = -1.0 + x * step;
                let w = -1.0 + y * step;
                *v = (u * u - w * w + 1.0) / 2.0;
            }
            return ScalarField::from_values(size, size, values);
        }
        PatternKind::TwoPeaks => {
            // Sampled at pixel centres so the square's mirror symmetry is exact.
            // The bumps are s/2 apart; sigma = s/5.5 still leaves the lower one
            // a separate maximum while keeping the boundary tails resolvable.
            let sigma = s / 5.5;
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                let (x, y) = (x + 0.5, y + 0.5);
                *v = gaussian(x, y, s / 4.0, s / 2.0, sigma)
                    + 0.6 * gaussian(x, y, 3.0 * s / 4.0, s / 2.0, sigma);
            }
        }
        PatternKind::RingGradient => {
            let c = (s - 1.0) / 2.0;
            let (inner, outer) = (0.2 * s, 0.4 * s);
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                let r = ((x - c).powi(2) + (y - c).powi(2)).sqrt();
                if (inner..=outer).contains(&r) {
                    *v = x / (s - 1.0);
                }
            }
        }
        PatternKind::Bench2 => {
            let c = (s - 1.0) / 2.0;
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                let r = ((x - c).powi(2) + (y - c).powi(2)).sqrt() / s;
                *v = (2.0 * PI * 4.0 * r).sin();
            }
        }
        PatternKind::Bench3 => {
            let sigma = s / 12.0;
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                let mut acc = 0.0;
                for k in 0..16 {
                    let cx = ((k % 4) as f64 + 0.5) * s / 4.0;
                    let cy = ((k / 4) as f64 + 0.5) * s / 4.0;
                    acc += (1.0 - 0.03 * k as f64) * gaussian(x, y, cx, cy, sigma);
                }
                *v = acc;
            }
        }
        PatternKind::Bench4 => {
            for (v, (x, y)) in values.iter_mut().zip(coords) {
                *v = (8.0 * PI * x / s).sin() * (8.0 * PI * y / s).sin();
            }
        }
    }
    normalize(&mut values);
    ScalarField::from_values(size, size, values)
}
