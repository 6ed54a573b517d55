//! One-dimensional sample grids: `lo:hi:step` (linear) and `lo:hi:logN`
//! (N points per decade).

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{domain, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spacing {
    Linear(f64),
    /// Points per decade.
    Log(u32),
}

/// A closed range sampled either linearly or logarithmically.
///
/// Both ends are included; a range that does not divide evenly also gets
/// its upper end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub lo: f64,
    pub hi: f64,
    pub spacing: Spacing,
    /// Drop `lo` itself, for half-open ranges such as `(-1, 20]`.
    pub open_lo: bool,
}

const MAX_POINTS: usize = 10_000_000;

impl Grid {
    pub fn linear(lo: f64, hi: f64, step: f64) -> Result<Grid> {
        let g = Grid {
            lo,
            hi,
            spacing: Spacing::Linear(step),
            open_lo: false,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn log(lo: f64, hi: f64, per_decade: u32) -> Result<Grid> {
        let g = Grid {
            lo,
            hi,
            spacing: Spacing::Log(per_decade),
            open_lo: false,
        };
        g.validate()?;
        Ok(g)
    }

    /// A single point.
    pub fn point(x: f64) -> Grid {
        Grid {
            lo: x,
            hi: x,
            spacing: Spacing::Linear(1.0),
            open_lo: false,
        }
    }

    /// The same grid without its lower end.
    pub fn open_lower(mut self) -> Grid {
        self.open_lo = true;
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(domain("grid", self.lo, "bounds must be finite"));
        }
        if self.hi < self.lo {
            return Err(domain("grid", self.hi, "upper bound below lower bound"));
        }
        match self.spacing {
            Spacing::Linear(step) => {
                if !(step > 0.0) || !step.is_finite() {
                    return Err(domain("grid", step, "step must be positive"));
                }
                if (self.hi - self.lo) / step > MAX_POINTS as f64 {
                    return Err(domain("grid", step, "too many points"));
                }
            }
            Spacing::Log(n) => {
                if n == 0 {
                    return Err(domain("grid", 0.0, "points per decade must be positive"));
                }
                if !(self.lo > 0.0) {
                    return Err(domain("grid", self.lo, "log grid needs a positive lower bound"));
                }
                if libm::log10(self.hi / self.lo) * f64::from(n) > MAX_POINTS as f64 {
                    return Err(domain("grid", f64::from(n), "too many points"));
                }
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        match self.spacing {
            Spacing::Linear(step) => {
                let n = libm::floor((self.hi - self.lo) / step + 1e-9) as usize;
                for k in 0..=n {
                    out.push(self.lo + k as f64 * step);
                }
                if self.hi - out[out.len() - 1] > 1e-9 * step {
                    out.push(self.hi);
                }
            }
            Spacing::Log(per) => {
                let span = libm::log10(self.hi / self.lo) * f64::from(per);
                let n = libm::floor(span + 1e-9) as usize;
                let l0 = libm::log10(self.lo);
                for k in 0..=n {
                    let x = if k == 0 {
                        self.lo
                    } else {
                        libm::pow(10.0, l0 + k as f64 / f64::from(per))
                    };
                    out.push(x);
                }
                let last = out[out.len() - 1];
                if self.hi / last - 1.0 > 1e-9 {
                    out.push(self.hi);
                } else {
                    let len = out.len();
                    out[len - 1] = self.hi;
                }
            }
        }
        if self.open_lo {
            out.retain(|&x| x > self.lo);
        }
        out
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.open_lo { "(" } else { "" };
        if self.lo == self.hi && !self.open_lo {
            return write!(f, "{}", self.lo);
        }
        match self.spacing {
            Spacing::Linear(s) => write!(f, "{open}{}:{}:{}", self.lo, self.hi, s),
            Spacing::Log(n) => write!(f, "{open}{}:{}:log{}", self.lo, self.hi, n),
        }
    }
}

fn parse_num(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| domain("grid", f64::NAN, "malformed number"))
}

impl FromStr for Grid {
    type Err = Error;

    /// Accepts `x`, `lo:hi` (step 1), `lo:hi:step`, `lo:hi:logN`, and a
    /// leading `(` for an open lower end.
    fn from_str(s: &str) -> Result<Grid> {
        let (open, body) = match s.trim().strip_prefix('(') {
            Some(rest) => (true, rest),
            None => (false, s.trim()),
        };
        let parts: Vec<&str> = body.split(':').collect();
        let mut g = match parts.as_slice() {
            [x] => Grid::point(parse_num(x)?),
            [lo, hi] => Grid::linear(parse_num(lo)?, parse_num(hi)?, 1.0)?,
            [lo, hi, spec] => {
                let (lo, hi) = (parse_num(lo)?, parse_num(hi)?);
                match spec.trim().strip_prefix("log") {
                    Some(n) => {
                        let n = n
                            .parse::<u32>()
                            .map_err(|_| domain("grid", f64::NAN, "malformed points per decade"))?;
                        Grid::log(lo, hi, n)?
                    }
                    None => Grid::linear(lo, hi, parse_num(spec)?)?,
                }
            }
            _ => return Err(domain("grid", f64::NAN, "expected lo:hi:step or lo:hi:logN")),
        };
        g.open_lo = open;
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_includes_both_ends() {
        let g: Grid = "-5:5:0.25".parse().unwrap();
        let p = g.points();
        assert_eq!(p.len(), 41);
        assert_eq!(p[0], -5.0);
        assert_eq!(p[40], 5.0);
        let p = Grid::linear(0.0, 1.0, 0.3).unwrap().points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[4], 1.0);
    }

    #[test]
    fn log_grid_density() {
        let p = "0.01:100:log32".parse::<Grid>().unwrap().points();
        assert_eq!(p.len(), 129);
        assert_eq!(p[0], 0.01);
        assert_eq!(p[128], 100.0);
        assert!((p[32] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn open_lower_end() {
        let p = "(-1:20:0.0625".parse::<Grid>().unwrap().points();
        assert_eq!(p[0], -0.9375);
        assert_eq!(p.len(), 336);
    }

    #[test]
    fn malformed_grids_are_rejected() {
        for s in [
            "",
            "1:0",
            "a:b",
            "0:1:-1",
            "0:1:log0",
            "0:1:logx",
            "1:2:3:4",
            "-1:1:log8",
        ] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
        assert_eq!("3".parse::<Grid>().unwrap().points(), [3.0]);
    }
}
