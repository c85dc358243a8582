use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Inclusive arithmetic grid written `lo:hi:step`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Grid {
    pub fn new(lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
            return Err(Error::Parse("grid bounds must be finite".into()));
        }
        if hi < lo {
            return Err(Error::Parse(format!(
                "grid upper bound {hi} is below lower bound {lo}"
            )));
        }
        if step <= 0.0 && hi > lo {
            return Err(Error::Parse(format!(
                "grid step must be positive, got {step}"
            )));
        }
        let g = Grid { lo, hi, step };
        if g.len() > 10_000_000 {
            return Err(Error::Parse(format!("grid `{g}` has too many points")));
        }
        Ok(g)
    }

    pub fn single(x: f64) -> Self {
        Grid {
            lo: x,
            hi: x,
            step: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        if self.hi == self.lo {
            return 1;
        }
        ((self.hi - self.lo) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| (self.lo + i as f64 * self.step).min(self.hi))
            .collect()
    }

    /// Checks every point lies in `[lo, hi]`, with open ends where requested.
    pub fn check_within(
        &self,
        name: &str,
        lo: f64,
        hi: f64,
        open_lo: bool,
        open_hi: bool,
    ) -> Result<()> {
        let bad_lo = if open_lo { self.lo <= lo } else { self.lo < lo };
        let bad_hi = if open_hi { self.hi >= hi } else { self.hi > hi };
        if bad_lo || bad_hi {
            return Err(Error::Parse(format!(
                "{name} grid `{self}` must lie within {}{lo}, {hi}{}",
                if open_lo { "(" } else { "[" },
                if open_hi { ")" } else { "]" }
            )));
        }
        Ok(())
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("grid `{s}`: `{t}` is not a number")))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [x] => Ok(Grid::single(num(x)?)),
            [lo, hi, step] => Grid::new(num(lo)?, num(hi)?, num(step)?),
            _ => Err(Error::Parse(format!(
                "grid `{s}` must look like lo:hi:step"
            ))),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_enumerates() {
        let g: Grid = "0:1:0.25".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g: Grid = "0.001:0.999:0.001".parse().unwrap();
        assert_eq!(g.len(), 999);
        assert!((g.points()[235] - 0.236).abs() < 1e-12);
        let g: Grid = "0.3".parse().unwrap();
        assert_eq!(g.points(), vec![0.3]);
    }

    #[test]
    fn rejects_bad_grids() {
        for bad in [
            "1:0:0.1",
            "0:1:0",
            "0:1:-1",
            "a:b:c",
            "0:1",
            "0:1:0.1:3",
            "nan:1:0.1",
        ] {
            assert!(bad.parse::<Grid>().is_err(), "{bad}");
        }
        let g: Grid = "0:1:0.5".parse().unwrap();
        assert!(g.check_within("a", 0.0, 1.0, true, false).is_err());
        assert!(g.check_within("a", 0.0, 1.0, false, false).is_ok());
    }
}
