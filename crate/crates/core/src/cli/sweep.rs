//! Grid sweeps over the Horodecki 3x3 mixture and the two-qubit family.

use serde::Serialize;

use super::grid::Grid;
use crate::bipartite::{BipartiteState, Subsystem};
use crate::criteria::{self, min_partial_transpose_eigenvalue, Settings};
use crate::error::{Error, Result};
use crate::states;

/// One grid point of a sweep; `f == max(0, log_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a: f64,
    pub p: f64,
    pub n: f64,
    pub log_n: f64,
    pub f: f64,
    pub ppt_min_eig: f64,
    pub concurrence: Option<f64>,
    pub e_f: Option<f64>,
    /// PPT detects entanglement but `f == 0`.
    pub npt_undetected: bool,
}

impl SweepRow {
    pub fn evaluate(a: f64, p: f64, s: &BipartiteState, settings: &Settings) -> Result<Self> {
        let m = criteria::measures_with(s, settings)?;
        let ppt_min_eig = min_partial_transpose_eigenvalue(s, Subsystem::A)?;
        Ok(SweepRow {
            a,
            p,
            n: m.n,
            log_n: m.log_n,
            f: m.f,
            ppt_min_eig,
            concurrence: m.concurrence,
            e_f: m.e_f,
            npt_undetected: ppt_min_eig < -settings.tol && m.f == 0.0,
        })
    }
}

fn sweep(
    a_grid: &Grid,
    p_grid: &Grid,
    settings: &Settings,
    build: impl Fn(f64, f64) -> Result<BipartiteState>,
) -> Result<Vec<SweepRow>> {
    let ps = p_grid.points();
    let mut rows = Vec::with_capacity(a_grid.len() * ps.len());
    for a in a_grid.points() {
        for &p in &ps {
            rows.push(SweepRow::evaluate(a, p, &build(a, p)?, settings)?);
        }
    }
    Ok(rows)
}

/// Value of `a` at which the mixing threshold is reported.
pub const FIG1_THRESHOLD_A: f64 = 0.236;
/// Bracket searched for the `f > 0` threshold in `p`.
pub const FIG1_BRACKET: (f64, f64) = (0.99, 1.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Summary {
    /// `argmax_a f(a, p = 1)` over the a-grid.
    pub argmax_a: f64,
    pub max_f: f64,
    pub threshold_a: f64,
    /// Smallest `p` with `f > 0` at `threshold_a`.
    pub threshold_p: f64,
}

#[derive(Debug, Clone)]
pub struct Fig1Result {
    pub rows: Vec<SweepRow>,
    pub summary: Fig1Summary,
}

pub fn sweep_fig1(a_grid: &Grid, p_grid: &Grid, settings: &Settings) -> Result<Fig1Result> {
    a_grid.check_within("a", 0.0, 1.0, true, true)?;
    p_grid.check_within("p", 0.0, 1.0, false, false)?;
    let rows = sweep(a_grid, p_grid, settings, states::horodecki_mix)?;
    let (argmax_a, max_f) = fig1_peak(a_grid, settings)?;
    let threshold_p = fig1_threshold(FIG1_THRESHOLD_A, 1e-9)?;
    Ok(Fig1Result {
        rows,
        summary: Fig1Summary {
            argmax_a,
            max_f,
            threshold_a: FIG1_THRESHOLD_A,
            threshold_p,
        },
    })
}

/// `(argmax, max)` of `f(a, p = 1)` over the grid; ties keep the smaller `a`.
pub fn fig1_peak(a_grid: &Grid, settings: &Settings) -> Result<(f64, f64)> {
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for a in a_grid.points() {
        let f = criteria::measures_with(&states::horodecki3x3(a)?, settings)?.f;
        if f > best.1 {
            best = (a, f);
        }
    }
    Ok(best)
}

/// Bisection for the smallest `p` in [`FIG1_BRACKET`] with `N(rho_p) > 1`.
///
/// `N` is sampled across the bracket first; the search refuses to run if it
/// is not monotone there or the bracket does not straddle `N = 1`.
pub fn fig1_threshold(a: f64, width: f64) -> Result<f64> {
    let norm = |p: f64| criteria::realignment_norm(&states::horodecki_mix(a, p)?);
    let (mut lo, mut hi) = FIG1_BRACKET;
    let samples: Vec<f64> = (0..=20)
        .map(|k| norm(lo + (hi - lo) * k as f64 / 20.0))
        .collect::<Result<_>>()?;
    if samples.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Numerical(format!(
            "N(rho_p) is not monotone in p on [{lo}, {hi}] at a = {a}"
        )));
    }
    if samples[0] > 1.0 || samples[20] <= 1.0 {
        return Err(Error::Numerical(format!(
            "f > 0 threshold is not bracketed by [{lo}, {hi}] at a = {a} (N = {} .. {})",
            samples[0], samples[20]
        )));
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if norm(mid)? > 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Summary {
    pub points: usize,
    /// NPT points with `f == 0`.
    pub npt_undetected: usize,
    /// Grid points on `p = 1/2` or `a in {0, 1}` whose `f` is nonzero.
    pub separable_line_violations: usize,
    /// Largest `(N - 1) - E_f` over the grid.
    pub max_n_minus_one_excess: f64,
    /// Entangled points with `log N > E_f` and with `log N < E_f` (beyond `tol`).
    pub log_n_above_e_f: usize,
    pub log_n_below_e_f: usize,
}

#[derive(Debug, Clone)]
pub struct Fig2Result {
    pub rows: Vec<SweepRow>,
    pub summary: Fig2Summary,
}

pub fn on_separable_line(a: f64, p: f64) -> bool {
    (p - 0.5).abs() < 1e-12 || a.abs() < 1e-12 || (a - 1.0).abs() < 1e-12
}

pub fn sweep_fig2(a_grid: &Grid, p_grid: &Grid, settings: &Settings) -> Result<Fig2Result> {
    a_grid.check_within("a", 0.0, 1.0, false, false)?;
    p_grid.check_within("p", 0.0, 1.0, false, false)?;
    let rows = sweep(a_grid, p_grid, settings, states::two_by_two_family)?;
    let tol = settings.tol;
    let mut summary = Fig2Summary {
        points: rows.len(),
        npt_undetected: 0,
        separable_line_violations: 0,
        max_n_minus_one_excess: f64::NEG_INFINITY,
        log_n_above_e_f: 0,
        log_n_below_e_f: 0,
    };
    for r in &rows {
        let e_f = r.e_f.expect("two-qubit rows carry E_f");
        summary.npt_undetected += r.npt_undetected as usize;
        if on_separable_line(r.a, r.p) && r.f != 0.0 {
            summary.separable_line_violations += 1;
        }
        summary.max_n_minus_one_excess = summary.max_n_minus_one_excess.max((r.n - 1.0) - e_f);
        if r.concurrence.is_some_and(|c| c > tol) {
            if r.log_n > e_f + tol {
                summary.log_n_above_e_f += 1;
            } else if r.log_n < e_f - tol {
                summary.log_n_below_e_f += 1;
            }
        }
    }
    Ok(Fig2Result { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_is_clamped_log_n() {
        let g: Grid = "0.1:0.9:0.4".parse().unwrap();
        let p: Grid = "0.99:1:0.005".parse().unwrap();
        let r = sweep_fig1(&g, &p, &Settings::default()).unwrap();
        assert_eq!(r.rows.len(), 9);
        for row in &r.rows {
            assert_eq!(row.f, row.log_n.max(0.0));
            assert!(row.e_f.is_none());
        }
    }

    #[test]
    fn fig1_grid_validation() {
        let bad_a: Grid = "0:0.5:0.1".parse().unwrap();
        let p: Grid = "1".parse().unwrap();
        assert!(sweep_fig1(&bad_a, &p, &Settings::default()).is_err());
        let a: Grid = "0.2".parse().unwrap();
        let bad_p: Grid = "0.5:1.5:0.5".parse().unwrap();
        assert!(sweep_fig1(&a, &bad_p, &Settings::default()).is_err());
    }

    #[test]
    fn threshold_brackets_the_sign_change() {
        let t = fig1_threshold(0.236, 1e-8).unwrap();
        let n =
            |p: f64| criteria::realignment_norm(&states::horodecki_mix(0.236, p).unwrap()).unwrap();
        assert!(n(t) > 1.0);
        assert!(n(t - 2e-8) <= 1.0);
        assert!(fig1_threshold(1.5, 1e-6).is_err());
    }

    #[test]
    fn fig2_small_grid() {
        let g: Grid = "0:1:0.25".parse().unwrap();
        let r = sweep_fig2(&g, &g, &Settings::default()).unwrap();
        assert_eq!(r.summary.points, 25);
        assert_eq!(r.summary.separable_line_violations, 0);
        assert!(r.rows.iter().all(|row| row.e_f.is_some()));
    }
}
