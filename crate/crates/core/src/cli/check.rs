//! Single-state report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::bipartite::{BipartiteState, Subsystem, ValidateOptions};
use crate::criteria::{self, CriterionReport, LogBase, Settings};
use crate::error::Result;
use crate::io;
use crate::states::StateSpec;

/// Where the state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckInput {
    Spec(StateSpec),
    File(PathBuf),
}

impl CheckInput {
    /// A single token naming an existing file, or ending in `.json`, is a
    /// matrix file; anything else is parsed as a state spec.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        if let [only] = tokens {
            let t = only.as_ref();
            if t.ends_with(".json") || Path::new(t).is_file() {
                return Ok(CheckInput::File(PathBuf::from(t)));
            }
        }
        Ok(CheckInput::Spec(StateSpec::from_tokens(tokens)?))
    }

    pub fn load(&self, opts: ValidateOptions) -> Result<BipartiteState> {
        match self {
            CheckInput::Spec(spec) => spec.build(),
            CheckInput::File(path) => io::load_state(path, opts),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub report: String,
    /// Some criterion detected entanglement.
    pub detected: bool,
}

pub fn check(s: &BipartiteState, settings: &Settings) -> Result<CheckOutcome> {
    let (m, n) = s.dims();
    let measures = criteria::measures_with(s, settings)?;
    let realign = criteria::realignment_test_with(s, settings)?;
    let dual = criteria::dual_realignment_test_with(s, settings)?;
    let ppt = criteria::ppt_test_with(s, Subsystem::A, settings)?;
    let pure = if s.purity() > 1.0 - criteria::PURE_TOL {
        Some(criteria::pure_product_test_with(s, settings)?)
    } else {
        None
    };

    let mut out = String::new();
    let log = settings.log_base;
    let _ = writeln!(out, "dims           {m} x {n}");
    if s.was_normalized() {
        let _ = writeln!(out, "note           trace renormalised to 1");
    }
    let _ = writeln!(out, "N              {:.12}", measures.n);
    let log_label = match log {
        LogBase::Two => "log2 N",
        LogBase::E => "ln N",
    };
    let _ = writeln!(out, "{log_label:<15}{:.12}", measures.log_n);
    let _ = writeln!(out, "f              {:.12}", measures.f);
    let _ = writeln!(out, "ppt min eig    {:.12e}", ppt.scalar);
    if let (Some(c), Some(e)) = (measures.concurrence, measures.e_f) {
        let _ = writeln!(out, "concurrence    {c:.12}");
        let _ = writeln!(out, "E_f            {e:.12}");
    }
    let verdicts: Vec<(&str, &CriterionReport)> = [
        Some(("realignment", &realign)),
        Some(("realignment (swapped)", &dual)),
        Some(("ppt (T_A)", &ppt)),
        pure.as_ref().map(|p| ("pure product", p)),
    ]
    .into_iter()
    .flatten()
    .collect();
    for (name, r) in &verdicts {
        let v = if r.detected_entangled {
            "entangled"
        } else {
            "not detected"
        };
        let _ = writeln!(out, "{:<22} {v}", format!("{name}:"));
    }
    let detected = verdicts.iter().any(|(_, r)| r.detected_entangled);
    let _ = writeln!(
        out,
        "verdict        {}",
        if detected {
            "ENTANGLED"
        } else {
            "no entanglement detected"
        }
    );
    Ok(CheckOutcome {
        report: out,
        detected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn tiles_is_detected() {
        let o = check(&states::tiles_upb().unwrap(), &Settings::default()).unwrap();
        assert!(o.detected);
        assert!(o.report.contains("ENTANGLED"));
    }

    #[test]
    fn max_mixed_is_not() {
        let o = check(&states::max_mixed(3).unwrap(), &Settings::default()).unwrap();
        assert!(!o.detected);
    }

    #[test]
    fn input_dispatch() {
        assert!(matches!(
            CheckInput::from_tokens(&["state.json"]).unwrap(),
            CheckInput::File(_)
        ));
        assert!(matches!(
            CheckInput::from_tokens(&["max_mixed", "d=2"]).unwrap(),
            CheckInput::Spec(_)
        ));
        assert!(CheckInput::from_tokens(&["nonsense"]).is_err());
    }
}
