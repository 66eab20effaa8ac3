//! Periodicity scans and P-position rasters for 3-column Diet Chomp.
//!
//! Lattice points are raw column triples `(a1, a2, a3)` with
//! `a1 <= a2 <= a3`. A zero first column is allowed and stripped before the
//! solver sees it.

use serde::Serialize;

use crate::closedforms::diet2_misere_bulk_conjecture;
use crate::error::{Error, Result};
use crate::position::{canonicalize, Outcome, PlayConvention, RuleSet};
use crate::solver::{MemoTable, VerificationReport};

/// Solver outcome at a raw lattice point.
pub fn lattice_outcome(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    point: &[u32],
) -> Result<Outcome> {
    let raw: Vec<u64> = point.iter().map(|&a| u64::from(a)).collect();
    let p = canonicalize(&raw, rules.family())?;
    memo.outcome(rules, convention, &p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct LatticeDirection(Vec<i64>);

impl LatticeDirection {
    pub fn new(delta: Vec<i64>) -> Result<Self> {
        if delta.iter().all(|&d| d == 0) {
            return Err(Error::InvalidDirection(format!(
                "{delta:?} is the zero vector"
            )));
        }
        Ok(LatticeDirection(delta))
    }

    pub fn delta(&self) -> &[i64] {
        &self.0
    }

    /// `base + t * delta`, or `None` if that leaves the non-negative
    /// non-decreasing region.
    pub fn step(&self, base: &[u32], t: usize) -> Option<Vec<u32>> {
        let point = base
            .iter()
            .zip(&self.0)
            .map(|(&b, &d)| u32::try_from(i64::from(b) + d * t as i64).ok())
            .collect::<Option<Vec<u32>>>()?;
        point.windows(2).all(|w| w[0] <= w[1]).then_some(point)
    }
}

/// Bounds for [`directional_period`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeConfig {
    pub probe_length: usize,
    pub max_period: usize,
    pub max_preperiod: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            probe_length: 60,
            max_period: 16,
            max_preperiod: 24,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub base: Vec<u32>,
    pub direction: LatticeDirection,
    pub preperiod: usize,
    pub period: Option<usize>,
    #[serde(skip)]
    pub probe_length: usize,
}

/// Smallest `(preperiod, period)`, ordered by preperiod first, under which
/// `seq[t + period] == seq[t]` for every sampled `t >= preperiod`.
pub fn eventual_period<T: PartialEq>(
    seq: &[T],
    max_period: usize,
    max_preperiod: usize,
) -> Option<(usize, usize)> {
    for pre in 0..=max_preperiod {
        for per in 1..=max_period {
            if per >= seq.len() {
                break;
            }
            if (pre..seq.len() - per).all(|t| seq[t] == seq[t + per]) {
                return Some((pre, per));
            }
        }
    }
    None
}

/// Samples outcomes along `base + t * direction` for `t < probe_length` and
/// reports the eventual period of that sequence.
pub fn directional_period<F>(
    mut outcome_at: F,
    base: &[u32],
    direction: &LatticeDirection,
    probe: ProbeConfig,
) -> Result<PeriodReport>
where
    F: FnMut(&[u32]) -> Result<Outcome>,
{
    let required = 2 * probe.max_period + probe.max_preperiod;
    if probe.probe_length < required {
        return Err(Error::InsufficientProbe {
            probe: probe.probe_length,
            required,
        });
    }
    if direction.delta().len() != base.len() {
        return Err(Error::InvalidDirection(format!(
            "direction has {} components but the base point has {}",
            direction.delta().len(),
            base.len()
        )));
    }
    let mut seq = Vec::with_capacity(probe.probe_length);
    for t in 0..probe.probe_length {
        let point = direction.step(base, t).ok_or_else(|| {
            Error::InvalidDirection(format!(
                "{:?} + {t}*{:?} leaves the non-decreasing region",
                base,
                direction.delta()
            ))
        })?;
        seq.push(outcome_at(&point)?);
    }
    let found = eventual_period(&seq, probe.max_period, probe.max_preperiod);
    Ok(PeriodReport {
        base: base.to_vec(),
        direction: direction.clone(),
        preperiod: found.map_or(0, |(pre, _)| pre),
        period: found.map(|(_, per)| per),
        probe_length: probe.probe_length,
    })
}

/// Column triples with `a1 <= max_a1` and `a3 - a1 <= max_extent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TripleWindow {
    pub max_a1: u32,
    pub max_extent: u32,
}

impl TripleWindow {
    pub fn points(self) -> impl Iterator<Item = [u32; 3]> {
        (0..=self.max_a1).flat_map(move |a1| {
            let top = a1 + self.max_extent;
            (a1..=top).flat_map(move |a2| (a2..=top).map(move |a3| [a1, a2, a3]))
        })
    }
}

/// Points `(a1, a1 + x, a1 + x + y)` for every `a1` in `a1s`, `x < width`,
/// `y < height`: the cells of the figure rasters.
pub fn figure_points(
    a1s: impl IntoIterator<Item = u32>,
    width: u32,
    height: u32,
) -> impl Iterator<Item = [u32; 3]> {
    a1s.into_iter().flat_map(move |a1| {
        (0..width).flat_map(move |x| (0..height).map(move |y| [a1, a1 + x, a1 + x + y]))
    })
}

/// Compares each point with its translate by `(period, period, period)`.
pub fn translation_period_check(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    points: impl IntoIterator<Item = [u32; 3]>,
    period: u32,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::default();
    for point in points {
        report.checked += 1;
        let here = lattice_outcome(memo, rules, convention, &point)?;
        let shifted = point.map(|a| a + period);
        let there = lattice_outcome(memo, rules, convention, &shifted)?;
        if here != there {
            report.fail(point, format!("{here} here but {there} at {shifted:?}"));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Axes {
    /// `x = a2 - a1`, `y = a3 - a2`; every cell is a legal position.
    #[default]
    Differences,
    /// `x = a2 - a1`, `y = a3 - a1`; cells with `y < x` are not positions
    /// and render blank, leaving a triangle.
    Absolute,
}

/// P-position raster for fixed `a1`. Cell `(0, 0)` is `(a1, a1, a1)` and
/// sits at the bottom left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FigureGrid {
    pub a1: u32,
    pub width: usize,
    pub height: usize,
    pub axes: Axes,
    cells: Vec<bool>,
}

impl FigureGrid {
    pub fn from_cells(a1: u32, width: usize, height: usize, axes: Axes, cells: Vec<bool>) -> Self {
        assert_eq!(
            cells.len(),
            width * height,
            "cell count must be width * height"
        );
        FigureGrid {
            a1,
            width,
            height,
            axes,
            cells,
        }
    }

    /// True when cell `(x, y)` is a P-position.
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.cells[y * self.width + x]
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn point(&self, x: usize, y: usize) -> Option<[u32; 3]> {
        point_for(self.a1, self.axes, x as u32, y as u32)
    }
}

fn point_for(a1: u32, axes: Axes, x: u32, y: u32) -> Option<[u32; 3]> {
    match axes {
        Axes::Differences => Some([a1, a1 + x, a1 + x + y]),
        Axes::Absolute => (y >= x).then_some([a1, a1 + x, a1 + y]),
    }
}

pub fn figure_grid(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    a1: u32,
    width: usize,
    height: usize,
) -> Result<FigureGrid> {
    figure_grid_with_axes(
        memo,
        rules,
        convention,
        a1,
        width,
        height,
        Axes::Differences,
    )
}

pub fn figure_grid_with_axes(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    a1: u32,
    width: usize,
    height: usize,
    axes: Axes,
) -> Result<FigureGrid> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidParameter(
            "figure width and height must be at least 1".into(),
        ));
    }
    let mut cells = Vec::with_capacity(width * height);
    for y in 0..height as u32 {
        for x in 0..width as u32 {
            let is_p = match point_for(a1, axes, x, y) {
                Some(point) => lattice_outcome(memo, rules, convention, &point)?.is_p(),
                None => false,
            };
            cells.push(is_p);
        }
    }
    Ok(FigureGrid::from_cells(a1, width, height, axes, cells))
}

/// Plain PBM (`P1`), top row first, `1` for P-positions.
pub fn render_pbm(grid: &FigureGrid) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", grid.width, grid.height);
    for y in (0..grid.height).rev() {
        let row: Vec<&str> = (0..grid.width)
            .map(|x| if grid.get(x, y) { "1" } else { "0" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// `#` for P-positions and `.` otherwise, top row first.
pub fn render_ascii(grid: &FigureGrid) -> String {
    let mut out = String::with_capacity((grid.width + 1) * grid.height);
    for y in (0..grid.height).rev() {
        out.extend((0..grid.width).map(|x| if grid.get(x, y) { '#' } else { '.' }));
        out.push('\n');
    }
    out
}

/// Reads a plain PBM back into `(width, height, cells)` with cells indexed
/// as in [`FigureGrid`] (bottom row first).
pub fn parse_pbm(bytes: &[u8]) -> Result<(usize, usize, Vec<bool>)> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    if tokens.next() != Some("P1") {
        return Err(Error::Parse("missing P1 magic".into()));
    }
    let mut dim = || -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse("truncated header".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))
    };
    let (width, height) = (dim()?, dim()?);
    let bits: Vec<bool> = tokens
        .flat_map(str::chars)
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bad pixel {other:?}"))),
        })
        .collect::<Result<_>>()?;
    if bits.len() != width * height {
        return Err(Error::Parse(format!(
            "expected {} pixels, found {}",
            width * height,
            bits.len()
        )));
    }
    let mut cells = vec![false; width * height];
    for (i, bit) in bits.into_iter().enumerate() {
        let (row, x) = (i / width, i % width);
        cells[(height - 1 - row) * width + x] = bit;
    }
    Ok((width, height, cells))
}

/// Regions excluded before comparing against the bulk formula.
///
/// With the raster drawn as rows of constant `a2` and NE diagonals of
/// constant `a3 - a2`, a point is excluded when `a3 - a1 < corner_radius`,
/// `a2 - a1 < bottom_rows`, or `a3 - a2 < top_diagonals`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Margins {
    pub corner_radius: u32,
    pub bottom_rows: u32,
    pub top_diagonals: u32,
}

impl Margins {
    pub const NONE: Margins = Margins {
        corner_radius: 0,
        bottom_rows: 0,
        top_diagonals: 0,
    };

    /// Smallest margins under which misère 2-Diet Chomp agrees with the bulk
    /// formula on every figure raster, found by sweep.
    pub const PINNED: Margins = Margins {
        corner_radius: 0,
        bottom_rows: 3,
        top_diagonals: 3,
    };

    pub fn excludes(&self, [a1, a2, a3]: [u32; 3]) -> bool {
        a3 - a1 < self.corner_radius || a2 - a1 < self.bottom_rows || a3 - a2 < self.top_diagonals
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgreementReport {
    pub compared: usize,
    pub excluded: usize,
    pub agreed: usize,
    pub ratio: f64,
    pub mismatches: Vec<[u32; 3]>,
}

/// Solver outcomes against `a1 + a3 - a2 ≡ 1 (mod 3)` outside `margins`.
pub fn bulk_formula_agreement(
    memo: &mut MemoTable,
    rules: RuleSet,
    convention: PlayConvention,
    points: impl IntoIterator<Item = [u32; 3]>,
    margins: Margins,
) -> Result<AgreementReport> {
    let mut report = AgreementReport {
        compared: 0,
        excluded: 0,
        agreed: 0,
        ratio: 1.0,
        mismatches: Vec::new(),
    };
    for point in points {
        if margins.excludes(point) {
            report.excluded += 1;
            continue;
        }
        report.compared += 1;
        let solved = lattice_outcome(memo, rules, convention, &point)?.is_p();
        if solved == diet2_misere_bulk_conjecture(point) {
            report.agreed += 1;
        } else {
            report.mismatches.push(point);
        }
    }
    if report.compared > 0 {
        report.ratio = report.agreed as f64 / report.compared as f64;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DIET2: RuleSet = RuleSet::DietChomp { k: 2 };

    fn grid(a1: u32, w: usize, h: usize, cells: &[bool]) -> FigureGrid {
        FigureGrid::from_cells(a1, w, h, Axes::Differences, cells.to_vec())
    }

    #[test]
    fn eventual_period_prefers_short_preperiod() {
        let seq = [5, 1, 2, 1, 2, 1, 2, 1, 2];
        assert_eq!(eventual_period(&seq, 4, 3), Some((1, 2)));
        assert_eq!(eventual_period(&[7; 10], 4, 3), Some((0, 1)));
        assert_eq!(eventual_period(&[0, 1, 2, 3, 4, 5, 6, 7], 2, 2), None);
    }

    #[test]
    fn constant_outcomes_have_period_one() {
        let dir = LatticeDirection::new(vec![0, 1, 1]).unwrap();
        let r = directional_period(|_| Ok(Outcome::N), &[4, 5, 9], &dir, ProbeConfig::default())
            .unwrap();
        assert_eq!((r.preperiod, r.period), (0, Some(1)));
    }

    #[test]
    fn single_column_misere_period_three() {
        let mut memo = MemoTable::new();
        let dir = LatticeDirection::new(vec![1]).unwrap();
        let probe = ProbeConfig {
            probe_length: 30,
            max_period: 8,
            max_preperiod: 8,
        };
        let r = directional_period(
            |pt| lattice_outcome(&mut memo, DIET2, PlayConvention::Misere, pt),
            &[0],
            &dir,
            probe,
        )
        .unwrap();
        assert_eq!((r.preperiod, r.period), (0, Some(3)));
    }

    #[test]
    fn probe_and_direction_errors() {
        let dir = LatticeDirection::new(vec![0, 0, 1]).unwrap();
        let short = ProbeConfig {
            probe_length: 10,
            ..ProbeConfig::default()
        };
        assert_eq!(
            directional_period(|_| Ok(Outcome::P), &[0, 0, 0], &dir, short),
            Err(Error::InsufficientProbe {
                probe: 10,
                required: 56
            })
        );
        assert!(LatticeDirection::new(vec![0, 0, 0]).is_err());
        let flat = LatticeDirection::new(vec![0, 1]).unwrap();
        assert!(matches!(
            directional_period(
                |_| Ok(Outcome::P),
                &[0, 0, 0],
                &flat,
                ProbeConfig::default()
            ),
            Err(Error::InvalidDirection(_))
        ));
        let down = LatticeDirection::new(vec![0, 1, 0]).unwrap();
        assert!(matches!(
            directional_period(
                |_| Ok(Outcome::P),
                &[0, 0, 3],
                &down,
                ProbeConfig::default()
            ),
            Err(Error::InvalidDirection(_))
        ));
    }

    #[test]
    fn figure_corner_cells() {
        let mut memo = MemoTable::new();
        let g = figure_grid(&mut memo, DIET2, PlayConvention::Misere, 0, 2, 2).unwrap();
        // (0,0,0) is terminal, N in misère; (0,0,1) is the single square.
        assert!(!g.get(0, 0));
        assert!(g.get(0, 1));
        let expected = lattice_outcome(&mut memo, DIET2, PlayConvention::Misere, &[0, 1, 1])
            .unwrap()
            .is_p();
        assert_eq!(g.get(1, 0), expected);
        assert_eq!(g.point(1, 1), Some([0, 1, 2]));
    }

    #[test]
    fn absolute_axes_blank_below_diagonal() {
        let mut memo = MemoTable::new();
        let g = figure_grid_with_axes(
            &mut memo,
            DIET2,
            PlayConvention::Misere,
            3,
            6,
            6,
            Axes::Absolute,
        )
        .unwrap();
        assert_eq!(g.point(4, 2), None);
        assert!(!g.get(4, 2));
        assert_eq!(g.point(2, 4), Some([3, 5, 7]));
    }

    #[test]
    fn pbm_examples() {
        assert_eq!(render_pbm(&grid(0, 1, 1, &[true])), b"P1\n1 1\n1\n");
        assert_eq!(
            render_pbm(&grid(0, 2, 1, &[false, true])),
            b"P1\n2 1\n0 1\n"
        );
        assert_eq!(
            render_pbm(&grid(0, 1, 2, &[true, false])),
            b"P1\n1 2\n0\n1\n"
        );
    }

    #[test]
    fn ascii_rows_top_first() {
        assert_eq!(
            render_ascii(&grid(0, 2, 2, &[true, false, false, true])),
            ".#\n#.\n"
        );
        assert_eq!(render_ascii(&grid(0, 1, 1, &[false])), ".\n");
    }

    #[test]
    fn pbm_parse_rejects_garbage() {
        assert!(parse_pbm(b"P4\n1 1\n1\n").is_err());
        assert!(parse_pbm(b"P1\n2 2\n1 0\n").is_err());
        assert!(parse_pbm(b"P1\n1 1\n2\n").is_err());
        let (w, h, cells) = parse_pbm(b"P1\n# comment\n2 1\n01\n").unwrap();
        assert_eq!((w, h, cells), (2, 1, vec![false, true]));
    }

    #[test]
    fn window_point_counts() {
        // a1 fixed, a1 <= a2 <= a3 <= a1 + 2: 6 points per a1.
        let w = TripleWindow {
            max_a1: 1,
            max_extent: 2,
        };
        assert_eq!(w.points().count(), 12);
        assert_eq!(figure_points(0..3, 4, 5).count(), 60);
    }

    #[test]
    fn margins_exclusion() {
        assert!(Margins::PINNED.excludes([5, 6, 8]));
        assert!(!Margins::PINNED.excludes([5, 8, 11]));
        assert!(!Margins::NONE.excludes([0, 0, 0]));
        let corner = Margins {
            corner_radius: 4,
            ..Margins::NONE
        };
        assert!(corner.excludes([2, 3, 5]));
        assert!(!corner.excludes([2, 3, 6]));
    }

    #[test]
    fn bulk_point_inside_and_outside_margins() {
        let mut memo = MemoTable::new();
        let r = bulk_formula_agreement(
            &mut memo,
            DIET2,
            PlayConvention::Misere,
            [[5, 6, 8]],
            Margins::NONE,
        )
        .unwrap();
        assert_eq!(r.compared, 1);
        let r = bulk_formula_agreement(
            &mut memo,
            DIET2,
            PlayConvention::Misere,
            [[5, 6, 8]],
            Margins::PINNED,
        )
        .unwrap();
        assert_eq!((r.compared, r.excluded, r.ratio), (0, 1, 1.0));
    }
}
