//! Parameter sweeps `param=start:stop:count[:log|:lin]`.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Sweep {
    /// Sample values in sweep order, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if i == 0 {
                    self.start
                } else if i + 1 == self.count {
                    self.stop
                } else if self.log {
                    self.start * (self.stop / self.start).powf(t)
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Sweep {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Config(format!("invalid sweep '{s}': {why}"));
        let (param, range) = s.split_once('=').ok_or_else(|| bad("expected param=start:stop:count[:log]"))?;
        let fields: Vec<&str> = range.split(':').collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(bad("expected start:stop:count[:log]"));
        }
        let num = |f: &str| f.trim().parse::<f64>().map_err(|_| bad(&format!("'{f}' is not a number")));
        let start = num(fields[0])?;
        let stop = num(fields[1])?;
        let count: usize = fields[2].trim().parse().map_err(|_| bad("count must be a positive integer"))?;
        if count == 0 {
            return Err(bad("count must be positive"));
        }
        let log = match fields.get(3).map(|f| f.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(other) => return Err(bad(&format!("unknown spacing '{other}'"))),
        };
        if log && !(start > 0.0 && stop > 0.0) {
            return Err(bad("log spacing needs positive endpoints"));
        }
        Ok(Self {
            param: param.trim().to_string(),
            start,
            stop,
            count,
            log,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_log_sweep() {
        let s: Sweep = "epsilon=1e-5:1e-3:3:log".parse().unwrap();
        assert_eq!(s.param, "epsilon");
        let v = s.values();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 1e-4).abs() < 1e-18);
        assert_eq!((v[0], v[2]), (1e-5, 1e-3));
    }

    #[test]
    fn parses_linear_sweep() {
        let s: Sweep = "scale=0.2:0.05:4".parse().unwrap();
        assert!(!s.log);
        let v = s.values();
        assert_eq!((v[0], v[3]), (0.2, 0.05));
        assert!((v[1] - 0.15).abs() < 1e-15 && (v[2] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["epsilon", "epsilon=1:2", "epsilon=a:2:3", "epsilon=1:2:0", "epsilon=-1:2:3:log", "e=1:2:3:cubic"] {
            assert!(bad.parse::<Sweep>().is_err(), "{bad}");
        }
    }
}
