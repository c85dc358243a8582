//! Entanglement tests and measures.
//!
//! The realignment criterion compares `N = ||realign(rho)||_tr` with 1; any
//! separable state has `N <= 1`, so `N > 1 + tol` certifies entanglement.
//! `log N` (base 2 by default) doubles as a rough entanglement estimate:
//! it is `-log d` for the maximally mixed state, `log d` for the maximally
//! entangled one and 0 for pure product states.

use std::fmt;

use serde::Serialize;

use crate::bipartite::{self, BipartiteState, Subsystem};
use crate::error::{Error, Result};
use crate::linalg::{self, psd_sqrt, ComplexMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Purity below `1 - PURE_TOL` counts as mixed.
pub const PURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum LogBase {
    #[default]
    Two,
    E,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" | "E" => Ok(LogBase::E),
            other => Err(Error::Parse(format!(
                "log base must be `2` or `e`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        })
    }
}

/// Detection tolerance and logarithm base shared by every test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub tol: f64,
    pub log_base: LogBase,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            log_base: LogBase::Two,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Realignment,
    Ppt,
    PureProduct,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criterion::Realignment => "realignment",
            Criterion::Ppt => "ppt",
            Criterion::PureProduct => "pure-product",
        })
    }
}

/// Verdict of one criterion.
///
/// `scalar` is `N` for realignment, the smallest partial-transpose
/// eigenvalue for PPT, and `1 - sigma_1` for the pure-state test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub detected_entangled: bool,
    pub scalar: f64,
    pub log_n: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub n: f64,
    pub log_n: f64,
    pub n_minus_one: f64,
    /// `max(0, log N)`
    pub f: f64,
    pub concurrence: Option<f64>,
    pub e_f: Option<f64>,
}

/// `N = sum of singular values of realign(rho)`.
pub fn realignment_norm(s: &BipartiteState) -> Result<f64> {
    linalg::trace_norm(&bipartite::realign(s))
}

pub fn realignment_test(s: &BipartiteState) -> Result<CriterionReport> {
    realignment_test_with(s, &Settings::default())
}

pub fn realignment_test_with(s: &BipartiteState, settings: &Settings) -> Result<CriterionReport> {
    let n = realignment_norm(s)?;
    Ok(CriterionReport {
        criterion: Criterion::Realignment,
        detected_entangled: n > 1.0 + settings.tol,
        scalar: n,
        log_n: Some(settings.log_base.log(n)),
    })
}

/// Realignment test on `rho_BA`; always agrees with the primal test.
pub fn dual_realignment_test(s: &BipartiteState) -> Result<CriterionReport> {
    dual_realignment_test_with(s, &Settings::default())
}

pub fn dual_realignment_test_with(
    s: &BipartiteState,
    settings: &Settings,
) -> Result<CriterionReport> {
    realignment_test_with(&bipartite::swap_subsystems(s), settings)
}

pub fn min_partial_transpose_eigenvalue(s: &BipartiteState, subsystem: Subsystem) -> Result<f64> {
    let pt = bipartite::partial_transpose(s, subsystem);
    let eig = linalg::hermitian_eigen(&pt)?;
    Ok(eig.values.last().copied().unwrap_or(0.0))
}

pub fn ppt_test(s: &BipartiteState, subsystem: Subsystem) -> Result<CriterionReport> {
    ppt_test_with(s, subsystem, &Settings::default())
}

pub fn ppt_test_with(
    s: &BipartiteState,
    subsystem: Subsystem,
    settings: &Settings,
) -> Result<CriterionReport> {
    let min = min_partial_transpose_eigenvalue(s, subsystem)?;
    Ok(CriterionReport {
        criterion: Criterion::Ppt,
        detected_entangled: min < -settings.tol,
        scalar: min,
        log_n: None,
    })
}

/// A pure state is a product state iff its realigned matrix has exactly one
/// nonzero singular value, equal to 1.
pub fn pure_product_test(s: &BipartiteState) -> Result<CriterionReport> {
    pure_product_test_with(s, &Settings::default())
}

pub fn pure_product_test_with(s: &BipartiteState, settings: &Settings) -> Result<CriterionReport> {
    let purity = s.purity();
    if purity < 1.0 - PURE_TOL {
        return Err(Error::Precondition(format!(
            "pure-product test needs a pure state (tr rho^2 = {purity:.12}); use the realignment test for mixed states"
        )));
    }
    let sv = linalg::singular_values(&bipartite::realign(s))?;
    let s1 = sv.first().copied().unwrap_or(0.0);
    let s2 = sv.get(1).copied().unwrap_or(0.0);
    let product = (s1 - 1.0).abs() <= settings.tol && s2 <= settings.tol;
    Ok(CriterionReport {
        criterion: Criterion::PureProduct,
        detected_entangled: !product,
        scalar: 1.0 - s1,
        log_n: None,
    })
}

pub fn measures(s: &BipartiteState) -> Result<MeasureReport> {
    measures_with(s, &Settings::default())
}

pub fn measures_with(s: &BipartiteState, settings: &Settings) -> Result<MeasureReport> {
    let n = realignment_norm(s)?;
    let log_n = settings.log_base.log(n);
    let (concurrence, e_f) = if s.dims() == (2, 2) {
        let c = concurrence(s)?;
        (Some(c), Some(ef_from_concurrence(c)))
    } else {
        (None, None)
    };
    Ok(MeasureReport {
        n,
        log_n,
        n_minus_one: n - 1.0,
        f: log_n.max(0.0),
        concurrence,
        e_f,
    })
}

fn require_two_qubits(s: &BipartiteState, what: &str) -> Result<()> {
    if s.dims() != (2, 2) {
        let (m, n) = s.dims();
        return Err(Error::Precondition(format!(
            "{what} is only defined for 2x2 systems, got {m}x{n}"
        )));
    }
    Ok(())
}

/// `sigma_y (x) sigma_y` in the computational basis.
fn spin_flip() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[-1.0, 0.0, 0.0, 0.0],
    ])
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)`.
///
/// The `l_i` are the square roots of the eigenvalues of `rho rho~` with
/// `rho~ = (Y (x) Y) rho* (Y (x) Y)`; they are computed as the singular values
/// of `sqrt(rho) sqrt(rho~)`, which avoids a non-Hermitian eigenproblem.
pub fn concurrence(s: &BipartiteState) -> Result<f64> {
    require_two_qubits(s, "concurrence")?;
    let rho = s.matrix();
    let yy = spin_flip();
    let flipped = &(&yy * &rho.conj()) * &yy;
    let m = &psd_sqrt(rho)? * &psd_sqrt(&flipped)?;
    let l = linalg::singular_values(&m)?;
    Ok((l[0] - l[1] - l[2] - l[3]).clamp(0.0, 1.0))
}

/// Binary entropy in bits.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// `E_f = h((1 + sqrt(1 - C^2)) / 2)` in ebits.
pub fn ef_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy((1.0 + (1.0 - c * c).sqrt()) / 2.0)
}

pub fn entanglement_of_formation_2x2(s: &BipartiteState) -> Result<f64> {
    require_two_qubits(s, "entanglement of formation")?;
    Ok(ef_from_concurrence(concurrence(s)?))
}
