//! Interval covers of a field's value range.
//!
//! Two families are supported. Chain covers ([`CoverStyle::Uniform`] and
//! [`CoverStyle::Contour`]) only let neighboring intervals overlap, so the
//! odd-numbered and even-numbered intervals each form a family of pairwise
//! disjoint sets ([`CoverPart`]); every pixel then gets at most one label per
//! part. Nested covers ([`CoverStyle::Join`] and [`CoverStyle::Split`]) are
//! sublevel or superlevel thresholds and go through the nested pipeline.
//!
//! Interval indices are 0-based throughout. The *odd* part holds the 1st,
//! 3rd, 5th... intervals (indices 0, 2, 4...), the *even* part the 2nd, 4th...

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl From<[f64; 2]> for Interval {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Interval { lo, hi }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(Error::Parameter(format!("empty interval ({lo}, {hi})")));
        }
        Ok(Interval { lo, hi })
    }

    #[inline]
    pub fn contains(&self, v: f64) -> bool {
        self.lo < v && v < self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo.max(other.lo) < self.hi.min(other.hi)
    }

    /// Containment of the closures, which for open intervals is containment.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverStyle {
    Uniform,
    Contour,
    Join,
    Split,
}

impl CoverStyle {
    pub fn name(self) -> &'static str {
        match self {
            CoverStyle::Uniform => "uniform",
            CoverStyle::Contour => "contour",
            CoverStyle::Join => "join",
            CoverStyle::Split => "split",
        }
    }

    pub fn is_nested(self) -> bool {
        matches!(self, CoverStyle::Join | CoverStyle::Split)
    }
}

/// Slice geometry of a uniform cover, kept for constant-time lookup.
#[derive(Debug, Clone, Copy, PartialEq)]
struct SliceGrid {
    origin: f64,
    width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    style: CoverStyle,
    intervals: Vec<Interval>,
    #[serde(skip)]
    grid: Option<SliceGrid>,
}

/// Which half of a chain cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// 1st, 3rd, ... intervals (0-based indices 0, 2, ...).
    Odd,
    /// 2nd, 4th, ... intervals (0-based indices 1, 3, ...).
    Even,
}

impl Parity {
    #[inline]
    fn first_index(self) -> usize {
        match self {
            Parity::Odd => 0,
            Parity::Even => 1,
        }
    }

    #[inline]
    pub fn of(index: usize) -> Parity {
        if index % 2 == 0 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// The odd- or even-indexed intervals of a chain cover; pairwise disjoint.
#[derive(Debug, Clone, Copy)]
pub struct CoverPart<'a> {
    cover: &'a Cover,
    parity: Parity,
}

fn expand_degenerate(range: (f64, f64)) -> Result<(f64, f64)> {
    let (a, b) = range;
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Parameter(format!("invalid range ({a}, {b})")));
    }
    if a == b {
        Ok((a - 0.5, b + 0.5))
    } else {
        Ok((a, b))
    }
}

/// Slices `[a, b]` into `n_slices` equal pieces of width `w` and widens each
/// by `overlap * w` on both sides.
pub fn uniform_cover(range: (f64, f64), n_slices: usize, overlap: f64) -> Result<Cover> {
    if n_slices == 0 {
        return Err(Error::Parameter("number of slices must be positive".into()));
    }
    if !(overlap > 0.0 && overlap < 0.5) {
        return Err(Error::Parameter(format!(
            "overlap fraction must lie in (0, 0.5), got {overlap}"
        )));
    }
    let (a, b) = expand_degenerate(range)?;
    let w = (b - a) / n_slices as f64;
    let eps = overlap * w;
    let intervals = (1..=n_slices)
        .map(|i| Interval {
            lo: a + (i - 1) as f64 * w - eps,
            hi: a + i as f64 * w + eps,
        })
        .collect();
    Ok(Cover {
        style: CoverStyle::Uniform,
        intervals,
        grid: Some(SliceGrid { origin: a, width: w }),
    })
}

/// Cover realizing the contour tree from ascending critical values.
///
/// Each gap `[t_i, t_{i+1}]` of length `D` gets `a = t+0.2D`, `d = t+0.4D`,
/// `c = t+0.6D`, `b = t+0.8D`; the cover is
/// `(t_1-eps, d_1), (a_1, b_1), (c_1, d_2), ..., (a_{n-1}, b_{n-1}), (c_{n-1}, t_n+eps)`.
pub fn contour_cover(critical_values: &[f64], margin: f64) -> Result<Cover> {
    let t = critical_values;
    if t.len() < 2 {
        return Err(Error::Parameter(format!(
            "contour cover needs at least two critical values, got {}",
            t.len()
        )));
    }
    if t.windows(2).any(|p| !(p[0] < p[1])) || t.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter(
            "critical values must be finite and strictly ascending".into(),
        ));
    }
    if !(margin > 0.0 && margin.is_finite()) {
        return Err(Error::Parameter(format!("margin must be positive, got {margin}")));
    }
    let n = t.len();
    let at = |i: usize, q: f64| t[i] + q * (t[i + 1] - t[i]);
    let mut intervals = Vec::with_capacity(2 * n - 1);
    let mut lo = t[0] - margin;
    for i in 0..n - 1 {
        intervals.push(Interval { lo, hi: at(i, 0.4) });
        intervals.push(Interval {
            lo: at(i, 0.2),
            hi: at(i, 0.8),
        });
        lo = at(i, 0.6);
    }
    intervals.push(Interval {
        lo,
        hi: t[n - 1] + margin,
    });
    Ok(Cover {
        style: CoverStyle::Contour,
        intervals,
        grid: None,
    })
}

fn uniform_thresholds(a: f64, b: f64, n: usize) -> Vec<f64> {
    (1..n).map(|i| a + i as f64 * (b - a) / n as f64).collect()
}

/// Sublevel cover `(-inf, c_i)` with `n_levels` evenly spaced thresholds;
/// the last interval reaches just past the maximum.
pub fn join_cover(range: (f64, f64), n_levels: usize) -> Result<Cover> {
    if n_levels == 0 {
        return Err(Error::Parameter("number of levels must be positive".into()));
    }
    let (a, b) = expand_degenerate(range)?;
    join_cover_with_thresholds((a, b), &uniform_thresholds(a, b, n_levels))
}

/// Superlevel cover `(c_i, +inf)`, nested so that later intervals are larger.
pub fn split_cover(range: (f64, f64), n_levels: usize) -> Result<Cover> {
    if n_levels == 0 {
        return Err(Error::Parameter("number of levels must be positive".into()));
    }
    let (a, b) = expand_degenerate(range)?;
    split_cover_with_thresholds((a, b), &uniform_thresholds(a, b, n_levels))
}

fn check_thresholds(range: (f64, f64), thresholds: &[f64]) -> Result<()> {
    if thresholds.windows(2).any(|p| !(p[0] < p[1]))
        || thresholds.iter().any(|&c| !(range.0 < c && c < range.1))
    {
        return Err(Error::Parameter(
            "thresholds must be strictly ascending and interior to the range".into(),
        ));
    }
    Ok(())
}

/// Sublevel cover with explicit interior thresholds (ascending). Produces
/// `thresholds.len() + 1` nested intervals; the extra one covers the maximum.
pub fn join_cover_with_thresholds(range: (f64, f64), thresholds: &[f64]) -> Result<Cover> {
    let (a, b) = expand_degenerate(range)?;
    check_thresholds((a, b), thresholds)?;
    let floor = a - 1.0;
    let mut intervals: Vec<Interval> = thresholds
        .iter()
        .map(|&c| Interval { lo: floor, hi: c })
        .collect();
    intervals.push(Interval {
        lo: floor,
        hi: b.next_up(),
    });
    Ok(Cover {
        style: CoverStyle::Join,
        intervals,
        grid: None,
    })
}

/// Superlevel cover with explicit interior thresholds (ascending). The first
/// interval starts at the highest threshold; the last reaches below the minimum.
pub fn split_cover_with_thresholds(range: (f64, f64), thresholds: &[f64]) -> Result<Cover> {
    let (a, b) = expand_degenerate(range)?;
    check_thresholds((a, b), thresholds)?;
    let ceil = b + 1.0;
    let mut intervals: Vec<Interval> = thresholds
        .iter()
        .rev()
        .map(|&c| Interval { lo: c, hi: ceil })
        .collect();
    intervals.push(Interval {
        lo: a.next_down(),
        hi: ceil,
    });
    Ok(Cover {
        style: CoverStyle::Split,
        intervals,
        grid: None,
    })
}

/// True iff every interval of `fine` sits inside some interval of `coarse`.
pub fn refines(fine: &Cover, coarse: &Cover) -> bool {
    fine.intervals
        .iter()
        .all(|f| coarse.intervals.iter().any(|c| f.is_subset_of(c)))
}

impl Cover {
    /// Build a chain or nested cover from raw intervals, checking the style's shape.
    pub fn from_intervals(style: CoverStyle, intervals: Vec<Interval>) -> Result<Cover> {
        let cover = Cover {
            style,
            intervals,
            grid: None,
        };
        cover.validate()?;
        Ok(cover)
    }

    fn validate(&self) -> Result<()> {
        let iv = &self.intervals;
        if iv.is_empty() {
            return Err(Error::Parameter("cover has no intervals".into()));
        }
        if iv.iter().any(|i| !(i.lo < i.hi)) {
            return Err(Error::Parameter("cover contains an empty interval".into()));
        }
        let ok = match self.style {
            CoverStyle::Uniform | CoverStyle::Contour => {
                (0..iv.len()).all(|i| {
                    (i + 1 >= iv.len() || iv[i].lo < iv[i + 1].lo && iv[i].intersects(&iv[i + 1]))
                        && (i + 2..iv.len()).all(|j| !iv[i].intersects(&iv[j]))
                })
            }
            CoverStyle::Join => iv
                .windows(2)
                .all(|p| p[0].lo == p[1].lo && p[0].hi < p[1].hi),
            CoverStyle::Split => iv
                .windows(2)
                .all(|p| p[0].hi == p[1].hi && p[0].lo > p[1].lo),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "intervals do not form a {} cover",
                self.style.name()
            )))
        }
    }

    #[inline]
    pub fn style(&self) -> CoverStyle {
        self.style
    }

    #[inline]
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval(&self, index: usize) -> Interval {
        self.intervals[index]
    }

    /// Whether any interval contains `v`.
    pub fn covers(&self, v: f64) -> bool {
        match self.style {
            CoverStyle::Join | CoverStyle::Split => {
                self.intervals.last().is_some_and(|i| i.contains(v))
            }
            CoverStyle::Uniform | CoverStyle::Contour => {
                let k = self.intervals.partition_point(|i| i.lo < v);
                (k.saturating_sub(2)..k).any(|i| self.intervals[i].contains(v))
            }
        }
    }

    /// The odd (1st, 3rd, ...) and even (2nd, 4th, ...) halves of a chain cover.
    pub fn split_even_odd(&self) -> Result<(CoverPart<'_>, CoverPart<'_>)> {
        if self.style.is_nested() {
            return Err(Error::UnsupportedStyle(self.style.name()));
        }
        Ok((
            CoverPart {
                cover: self,
                parity: Parity::Even,
            },
            CoverPart {
                cover: self,
                parity: Parity::Odd,
            },
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cover serializes")
    }

    pub fn from_json(text: &str) -> Result<Cover> {
        let cover: Cover =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("cover json: {e}")))?;
        cover.validate()?;
        Ok(cover)
    }
}

impl<'a> CoverPart<'a> {
    pub fn cover(&self) -> &'a Cover {
        self.cover
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Global 0-based indices of the intervals in this part.
    pub fn indices(&self) -> impl Iterator<Item = usize> + 'a {
        (self.parity.first_index()..self.cover.len()).step_by(2)
    }

    pub fn len(&self) -> usize {
        let n = self.cover.len();
        let first = self.parity.first_index();
        if n > first { (n - first).div_ceil(2) } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the unique interval of this part containing `v`.
    #[inline]
    pub fn locate(&self, v: f64) -> Option<usize> {
        let iv = &self.cover.intervals;
        if let Some(grid) = self.cover.grid {
            let k = ((v - grid.origin) / grid.width).floor();
            if !k.is_finite() {
                return None;
            }
            let k = k as i64;
            for i in (k - 1)..=(k + 1) {
                if i < 0 || i as usize >= iv.len() {
                    continue;
                }
                let i = i as usize;
                if Parity::of(i) == self.parity && iv[i].contains(v) {
                    return Some(i);
                }
            }
            return None;
        }
        // same-part intervals are disjoint and sorted; find the last one starting below v
        let first = self.parity.first_index();
        let count = self.len();
        let (mut lo, mut hi) = (0usize, count);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if iv[first + 2 * mid].lo < v {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if lo == 0 {
            return None;
        }
        let i = first + 2 * (lo - 1);
        iv[i].contains(v).then_some(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: &[Interval], b: &[(f64, f64)]) {
        assert_eq!(a.len(), b.len());
        for (x, &(lo, hi)) in a.iter().zip(b) {
            assert!((x.lo - lo).abs() < 1e-12 && (x.hi - hi).abs() < 1e-12, "{x:?} vs ({lo}, {hi})");
        }
    }

    fn adjacent_only(c: &Cover) -> bool {
        let iv = c.intervals();
        (0..iv.len()).all(|i| {
            (i + 1 >= iv.len() || iv[i].intersects(&iv[i + 1]))
                && (i + 2..iv.len()).all(|j| !iv[i].intersects(&iv[j]))
        })
    }

    #[test]
    fn uniform_examples() {
        let c = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        approx(
            c.intervals(),
            &[(-0.0625, 0.3125), (0.1875, 0.5625), (0.4375, 0.8125), (0.6875, 1.0625)],
        );
        let one = uniform_cover((0.0, 1.0), 1, 0.25).unwrap();
        approx(one.intervals(), &[(-0.25, 1.25)]);
        let degenerate = uniform_cover((0.5, 0.5), 2, 0.25).unwrap();
        assert_eq!(degenerate, uniform_cover((0.0, 1.0), 2, 0.25).unwrap());
    }

    #[test]
    fn uniform_parameter_errors() {
        for g in [0.0, 0.5, -0.1, 0.7] {
            assert!(matches!(uniform_cover((0.0, 1.0), 4, g), Err(Error::Parameter(_))));
        }
        assert!(matches!(uniform_cover((0.0, 1.0), 0, 0.25), Err(Error::Parameter(_))));
    }

    #[test]
    fn even_odd_parity() {
        let c = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        let (even, odd) = c.split_even_odd().unwrap();
        assert_eq!(odd.indices().collect::<Vec<_>>(), vec![0, 2]);
        assert_eq!(even.indices().collect::<Vec<_>>(), vec![1, 3]);

        let one = uniform_cover((0.0, 1.0), 1, 0.25).unwrap();
        let (even, odd) = one.split_even_odd().unwrap();
        assert_eq!(odd.indices().collect::<Vec<_>>(), vec![0]);
        assert!(even.is_empty());

        let cc = contour_cover(&[0.0, 0.5, 1.0], 0.05).unwrap();
        let (even, odd) = cc.split_even_odd().unwrap();
        assert_eq!(odd.indices().collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!(even.indices().collect::<Vec<_>>(), vec![1, 3]);

        let j = join_cover((0.0, 1.0), 3).unwrap();
        assert!(matches!(j.split_even_odd(), Err(Error::UnsupportedStyle("join"))));
    }

    #[test]
    fn locate_examples() {
        let c = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        let (even, odd) = c.split_even_odd().unwrap();
        assert_eq!(even.locate(0.5), Some(1));
        assert_eq!(even.locate(0.6), None);
        assert_eq!(odd.locate(0.6), Some(2));
        assert_eq!(odd.locate(0.25), Some(0));
        assert_eq!(odd.locate(-0.1), None);
        assert_eq!(even.locate(1.0), Some(3));
    }

    #[test]
    fn locate_agrees_with_scan_on_deserialized_cover() {
        // the JSON round trip drops the slice grid, forcing the binary-search path
        let c = uniform_cover((-2.0, 3.0), 7, 0.3).unwrap();
        let d = Cover::from_json(&c.to_json()).unwrap();
        assert_eq!(c.intervals(), d.intervals());
        let (ce, co) = c.split_even_odd().unwrap();
        let (de, d_o) = d.split_even_odd().unwrap();
        for k in 0..=1000 {
            let v = -2.5 + 6.0 * k as f64 / 1000.0;
            for (p, q) in [(ce, de), (co, d_o)] {
                let scan = p.indices().find(|&i| c.interval(i).contains(v));
                assert_eq!(p.locate(v), scan, "v={v}");
                assert_eq!(q.locate(v), scan, "v={v}");
            }
            assert_eq!(c.covers(v), c.intervals().iter().any(|i| i.contains(v)));
        }
    }

    #[test]
    fn contour_examples() {
        let c = contour_cover(&[0.0, 0.5, 1.0], 0.05).unwrap();
        approx(
            c.intervals(),
            &[(-0.05, 0.2), (0.1, 0.4), (0.3, 0.7), (0.6, 0.9), (0.8, 1.05)],
        );
        assert!(c.interval(2).contains(0.5));
        assert!(adjacent_only(&c));

        let c = contour_cover(&[0.0, 1.0], 0.1).unwrap();
        approx(c.intervals(), &[(-0.1, 0.4), (0.2, 0.8), (0.6, 1.1)]);

        assert!(matches!(contour_cover(&[0.5, 0.3], 0.1), Err(Error::Parameter(_))));
        assert!(matches!(contour_cover(&[0.5], 0.1), Err(Error::Parameter(_))));
        assert!(matches!(contour_cover(&[0.0, 1.0], 0.0), Err(Error::Parameter(_))));
    }

    #[test]
    fn nested_examples() {
        let j = join_cover((0.0, 1.0), 4).unwrap();
        approx(&j.intervals()[..3], &[(-1.0, 0.25), (-1.0, 0.5), (-1.0, 0.75)]);
        let last = j.interval(3);
        assert_eq!(last.lo, -1.0);
        assert!(last.hi > 1.0 && last.hi < 1.0 + 1e-12);
        assert!(last.contains(1.0));

        let s = split_cover((0.0, 1.0), 2).unwrap();
        assert_eq!(s.interval(0), Interval { lo: 0.5, hi: 2.0 });
        let last = s.interval(1);
        assert!(last.lo < 0.0 && last.lo > -1e-300 && last.hi == 2.0);
        assert!(last.contains(0.0));

        let one = join_cover((0.0, 1.0), 1).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one.interval(0).contains(0.0) && one.interval(0).contains(1.0));

        assert!(matches!(join_cover((0.0, 1.0), 0), Err(Error::Parameter(_))));
        assert!(matches!(split_cover((0.0, 1.0), 0), Err(Error::Parameter(_))));
        assert!(matches!(
            join_cover_with_thresholds((0.0, 1.0), &[0.6, 0.4]),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn refinement_examples() {
        let c2 = uniform_cover((0.0, 1.0), 2, 0.25).unwrap();
        let c4 = uniform_cover((0.0, 1.0), 4, 0.25).unwrap();
        assert!(refines(&c4, &c2));
        assert!(refines(&c2, &c2));
        assert!(!refines(&c2, &c4));
    }

    #[test]
    fn json_shape() {
        let c = contour_cover(&[0.0, 1.0], 0.5).unwrap();
        let text = c.to_json();
        assert_eq!(
            text,
            r#"{"style":"contour","intervals":[[-0.5,0.4],[0.2,0.8],[0.6,1.5]]}"#
        );
        assert_eq!(Cover::from_json(&text).unwrap(), c);
        assert!(Cover::from_json(r#"{"style":"join","intervals":[[0,2],[1,3]]}"#).is_err());
        assert!(Cover::from_json("nope").is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn uniform_is_adjacent_only_and_covers(
                a in -100.0f64..100.0, span in 1e-3f64..50.0, n in 1usize..40, g in 0.01f64..0.49
            ) {
                let c = uniform_cover((a, a + span), n, g).unwrap();
                prop_assert!(adjacent_only(&c));
                let (even, odd) = c.split_even_odd().unwrap();
                for k in 0..=200 {
                    let v = a + span * k as f64 / 200.0;
                    prop_assert!(even.locate(v).is_some() || odd.locate(v).is_some());
                }
            }

            #[test]
            fn dyadic_refinement(a in -10.0f64..10.0, span in 1e-2f64..10.0, k in 1usize..20, g in 0.01f64..0.49) {
                let coarse = uniform_cover((a, a + span), k, g).unwrap();
                let fine = uniform_cover((a, a + span), 2 * k, g).unwrap();
                prop_assert!(refines(&fine, &coarse));
            }

            #[test]
            fn contour_is_adjacent_only(gaps in prop::collection::vec(1e-3f64..5.0, 1..20), eps in 1e-3f64..2.0) {
                let mut t = vec![0.0];
                for g in gaps {
                    let last = *t.last().unwrap();
                    t.push(last + g);
                }
                let c = contour_cover(&t, eps).unwrap();
                prop_assert_eq!(c.len(), 2 * t.len() - 1);
                prop_assert!(adjacent_only(&c));
                for (i, &ti) in t.iter().enumerate() {
                    prop_assert!(c.interval(2 * i).contains(ti));
                }
            }

            #[test]
            fn overlap_zone_is_dual_labeled(n in 2usize..20, g in 0.01f64..0.49, u in 0.0f64..1.0) {
                let c = uniform_cover((0.0, 1.0), n, g).unwrap();
                let (even, odd) = c.split_even_odd().unwrap();
                let w = 1.0 / n as f64;
                let in_zone = (1..n).any(|i| (u - i as f64 * w).abs() < g * w);
                let both = even.locate(u).is_some() && odd.locate(u).is_some();
                // boundary rounding aside, the two characterizations match
                let near_edge = (1..n).any(|i| ((u - i as f64 * w).abs() - g * w).abs() < 1e-12);
                prop_assume!(!near_edge);
                prop_assert_eq!(in_zone, both);
            }
        }
    }
}
