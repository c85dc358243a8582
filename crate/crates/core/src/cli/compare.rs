//! Side-by-side `log N`, `N - 1`, concurrence and `E_f` for two-qubit families.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::grid::Grid;
use crate::criteria::{self, Settings};
use crate::error::{Error, Result};
use crate::states;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareFamily {
    /// Swept over the p-grid only.
    Werner2,
    TwoByTwoFamily,
}

impl FromStr for CompareFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "werner2" => Ok(CompareFamily::Werner2),
            "two_by_two_family" => Ok(CompareFamily::TwoByTwoFamily),
            other => Err(Error::Parse(format!(
                "compare supports `werner2` and `two_by_two_family`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for CompareFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareFamily::Werner2 => "werner2",
            CompareFamily::TwoByTwoFamily => "two_by_two_family",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompareRow {
    pub a: Option<f64>,
    pub p: f64,
    pub n: f64,
    pub log_n: f64,
    pub n_minus_one: f64,
    pub concurrence: f64,
    pub e_f: f64,
}

impl CompareRow {
    /// Entangled according to the concurrence (exact for two qubits).
    pub fn entangled(&self, tol: f64) -> bool {
        self.concurrence > tol
    }
}

/// Which orderings between the measures held over the grid. The ordering
/// counts cover entangled points (concurrence above `tol`) only.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareSummary {
    pub points: usize,
    pub entangled_points: usize,
    pub log_n_ge_e_f: usize,
    pub log_n_lt_e_f: usize,
    pub n_minus_one_le_e_f: usize,
    pub n_minus_one_gt_e_f: usize,
    /// `max |E_f - (N - 1)|` over entangled points.
    pub max_abs_e_f_minus_n_minus_one: f64,
    /// `max |C - (N - 1)|` over entangled points.
    pub max_abs_c_minus_n_minus_one: f64,
    /// `max (N - 1) - E_f` over all points.
    pub max_n_minus_one_excess: f64,
    /// `min log N - E_f` over entangled points.
    pub min_log_n_minus_e_f: f64,
    /// Points where `N <= 1`, `E_f == 0` and `log N <= 0` hold together,
    /// out of those where any of them vanishes.
    pub boundary_consistent: usize,
    pub boundary_points: usize,
}

pub fn compare(
    family: CompareFamily,
    a_grid: &Grid,
    p_grid: &Grid,
    settings: &Settings,
) -> Result<(Vec<CompareRow>, CompareSummary)> {
    let mut rows = Vec::new();
    match family {
        CompareFamily::Werner2 => {
            p_grid.check_within("p", -1.0 / 3.0 - 1e-12, 1.0, false, false)?;
            for p in p_grid.points() {
                rows.push(row(None, p, &states::werner2(p)?, settings)?);
            }
        }
        CompareFamily::TwoByTwoFamily => {
            a_grid.check_within("a", 0.0, 1.0, false, false)?;
            p_grid.check_within("p", 0.0, 1.0, false, false)?;
            for a in a_grid.points() {
                for p in p_grid.points() {
                    rows.push(row(
                        Some(a),
                        p,
                        &states::two_by_two_family(a, p)?,
                        settings,
                    )?);
                }
            }
        }
    }
    Ok((rows.clone(), summarize(&rows, settings.tol)))
}

fn row(
    a: Option<f64>,
    p: f64,
    s: &crate::bipartite::BipartiteState,
    settings: &Settings,
) -> Result<CompareRow> {
    let m = criteria::measures_with(s, settings)?;
    Ok(CompareRow {
        a,
        p,
        n: m.n,
        log_n: m.log_n,
        n_minus_one: m.n_minus_one,
        concurrence: m.concurrence.expect("two-qubit family"),
        e_f: m.e_f.expect("two-qubit family"),
    })
}

pub fn summarize(rows: &[CompareRow], tol: f64) -> CompareSummary {
    let mut s = CompareSummary {
        points: rows.len(),
        entangled_points: 0,
        log_n_ge_e_f: 0,
        log_n_lt_e_f: 0,
        n_minus_one_le_e_f: 0,
        n_minus_one_gt_e_f: 0,
        max_abs_e_f_minus_n_minus_one: 0.0,
        max_abs_c_minus_n_minus_one: 0.0,
        max_n_minus_one_excess: f64::NEG_INFINITY,
        min_log_n_minus_e_f: f64::INFINITY,
        boundary_consistent: 0,
        boundary_points: 0,
    };
    for r in rows {
        s.max_n_minus_one_excess = s.max_n_minus_one_excess.max(r.n_minus_one - r.e_f);
        if r.entangled(tol) {
            s.entangled_points += 1;
            if r.log_n >= r.e_f - tol {
                s.log_n_ge_e_f += 1;
            } else {
                s.log_n_lt_e_f += 1;
            }
            if r.n_minus_one <= r.e_f + tol {
                s.n_minus_one_le_e_f += 1;
            } else {
                s.n_minus_one_gt_e_f += 1;
            }
            s.max_abs_e_f_minus_n_minus_one = s
                .max_abs_e_f_minus_n_minus_one
                .max((r.e_f - r.n_minus_one).abs());
            s.max_abs_c_minus_n_minus_one = s
                .max_abs_c_minus_n_minus_one
                .max((r.concurrence - r.n_minus_one).abs());
            s.min_log_n_minus_e_f = s.min_log_n_minus_e_f.min(r.log_n - r.e_f);
        }
        let zero = [r.n_minus_one <= tol, r.e_f <= tol, r.log_n <= tol];
        if zero.iter().any(|&z| z) {
            s.boundary_points += 1;
            if zero.iter().all(|&z| z) {
                s.boundary_consistent += 1;
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn werner_rows() {
        let p: Grid = "0:1:0.1".parse().unwrap();
        let (rows, s) = compare(
            CompareFamily::Werner2,
            &Grid::single(0.0),
            &p,
            &Settings::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| r.a.is_none()));
        assert!(s.entangled_points >= 6);
        // N - 1 tracks the concurrence on entangled Werner states
        assert!(s.max_abs_c_minus_n_minus_one < 1e-9);
    }

    #[test]
    fn rejects_unknown_family() {
        assert!("isotropic".parse::<CompareFamily>().is_err());
    }
}
