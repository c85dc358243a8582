//! Seeded random search: how often do realignment and PPT fire on sampled states?

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;

use crate::bipartite::Subsystem;
use crate::criteria::{self, Settings};
use crate::error::{Error, Result};
use crate::states;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// `G G^H / tr` with a Gaussian `G`.
    Mixed,
    /// Convex mixtures of 1..=20 random pure product states.
    Separable,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mixed" => Ok(SearchMode::Mixed),
            "separable" => Ok(SearchMode::Separable),
            other => Err(Error::Parse(format!(
                "search mode must be `mixed` or `separable`, got `{other}`"
            ))),
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Mixed => "mixed",
            SearchMode::Separable => "separable",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub mode: SearchMode,
    /// Rank for `Mixed` (default `m * n`).
    pub rank: Option<usize>,
    /// Fixed term count for `Separable` (default: uniform in 1..=20 per sample).
    pub terms: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchSample {
    pub index: usize,
    pub n: f64,
    pub log_n: f64,
    pub ppt_min_eig: f64,
    pub realignment_detected: bool,
    pub ppt_detected: bool,
}

/// Detection tallies. Everything except `elapsed_secs` is a pure function
/// of the configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub count: usize,
    pub realignment_only: usize,
    pub ppt_only: usize,
    pub both: usize,
    pub neither: usize,
    pub max_log_n: f64,
    /// Samples whose verdicts contradict known theory: any detection of a
    /// separable sample, or a realignment-only detection where PPT is
    /// necessary and sufficient (`m * n <= 6`).
    pub anomalies: Vec<usize>,
    pub elapsed_secs: f64,
}

impl SearchStats {
    pub fn rate(&self, k: usize) -> f64 {
        k as f64 / self.count as f64
    }

    pub fn realignment_rate(&self) -> f64 {
        self.rate(self.realignment_only + self.both)
    }

    pub fn ppt_rate(&self) -> f64 {
        self.rate(self.ppt_only + self.both)
    }

    /// Equality ignoring wall-clock time.
    pub fn same_counts(&self, other: &Self) -> bool {
        let strip = |s: &Self| SearchStats {
            elapsed_secs: 0.0,
            ..s.clone()
        };
        strip(self) == strip(other)
    }
}

pub fn search(cfg: &SearchConfig, settings: &Settings) -> Result<(SearchStats, Vec<SearchSample>)> {
    if cfg.count == 0 {
        return Err(Error::param("count", 0.0, "need at least one sample"));
    }
    let start = Instant::now();
    let mut rng = states::rng_from_seed(cfg.seed);
    let ppt_sufficient = cfg.m * cfg.n <= 6;
    let mut samples = Vec::with_capacity(cfg.count);
    let mut stats = SearchStats {
        count: cfg.count,
        realignment_only: 0,
        ppt_only: 0,
        both: 0,
        neither: 0,
        max_log_n: f64::NEG_INFINITY,
        anomalies: Vec::new(),
        elapsed_secs: 0.0,
    };
    for index in 0..cfg.count {
        let state = match cfg.mode {
            SearchMode::Mixed => {
                let rank = cfg.rank.unwrap_or(cfg.m * cfg.n);
                states::random_mixed_with(cfg.m, cfg.n, rank, &mut rng)?
            }
            SearchMode::Separable => {
                let terms = match cfg.terms {
                    Some(t) => t,
                    None => rng.gen_range(1..=20),
                };
                states::random_separable_with(cfg.m, cfg.n, terms, &mut rng)?.0
            }
        };
        let r = criteria::realignment_test_with(&state, settings)?;
        let p = criteria::ppt_test_with(&state, Subsystem::A, settings)?;
        let log_n = r.log_n.expect("realignment reports log N");
        stats.max_log_n = stats.max_log_n.max(log_n);
        match (r.detected_entangled, p.detected_entangled) {
            (true, true) => stats.both += 1,
            (true, false) => stats.realignment_only += 1,
            (false, true) => stats.ppt_only += 1,
            (false, false) => stats.neither += 1,
        }
        let anomalous = match cfg.mode {
            SearchMode::Separable => r.detected_entangled || p.detected_entangled,
            SearchMode::Mixed => ppt_sufficient && r.detected_entangled && !p.detected_entangled,
        };
        if anomalous {
            stats.anomalies.push(index);
        }
        samples.push(SearchSample {
            index,
            n: r.scalar,
            log_n,
            ppt_min_eig: p.scalar,
            realignment_detected: r.detected_entangled,
            ppt_detected: p.detected_entangled,
        });
    }
    stats.elapsed_secs = start.elapsed().as_secs_f64();
    Ok((stats, samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: SearchMode, seed: u64) -> SearchConfig {
        SearchConfig {
            m: 2,
            n: 2,
            count: 200,
            seed,
            mode,
            rank: None,
            terms: None,
        }
    }

    #[test]
    fn separable_search_detects_nothing() {
        let (s, _) = search(&cfg(SearchMode::Separable, 3), &Settings::default()).unwrap();
        assert_eq!(s.realignment_rate(), 0.0);
        assert_eq!(s.ppt_rate(), 0.0);
        assert!(s.anomalies.is_empty());
        assert_eq!(s.neither, 200);
    }

    #[test]
    fn same_seed_same_statistics() {
        let mut c = cfg(SearchMode::Mixed, 11);
        c.rank = Some(2);
        let (a, sa) = search(&c, &Settings::default()).unwrap();
        let (b, sb) = search(&c, &Settings::default()).unwrap();
        assert!(a.same_counts(&b));
        assert_eq!(sa, sb);
        assert_eq!(a.realignment_only + a.ppt_only + a.both + a.neither, 200);
    }

    #[test]
    fn rejects_empty_search() {
        let mut c = cfg(SearchMode::Mixed, 0);
        c.count = 0;
        assert!(search(&c, &Settings::default()).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("mixed".parse::<SearchMode>().unwrap(), SearchMode::Mixed);
        assert!("bruss".parse::<SearchMode>().is_err());
    }
}
