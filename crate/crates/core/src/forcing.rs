//! Prescribed forcing `F(t)` for the one-dimensional model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Forcing {
    Constant {
        value: f64,
    },
    /// `amplitude * sin(omega * t) + offset`
    Sinusoid {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        offset: f64,
    },
    /// Piecewise-linear interpolation of samples, held constant outside.
    Table {
        times: Vec<f64>,
        values: Vec<f64>,
    },
}

impl Forcing {
    pub fn constant(value: f64) -> Self {
        Forcing::Constant { value }
    }

    pub fn sinusoid(amplitude: f64, omega: f64, offset: f64) -> Self {
        Forcing::Sinusoid {
            amplitude,
            omega,
            offset,
        }
    }

    pub fn table(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let f = Forcing::Table { times, values };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("forcing {what} must be finite")))
            }
        };
        match self {
            Forcing::Constant { value } => finite(*value, "value"),
            Forcing::Sinusoid {
                amplitude,
                omega,
                offset,
            } => {
                finite(*amplitude, "amplitude")?;
                finite(*omega, "omega")?;
                finite(*offset, "offset")
            }
            Forcing::Table { times, values } => {
                if times.is_empty() || times.len() != values.len() {
                    return Err(Error::Config(format!(
                        "forcing table needs matching non-empty columns ({} times, {} values)",
                        times.len(),
                        values.len()
                    )));
                }
                if times.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::Config(
                        "forcing table times must be strictly increasing".into(),
                    ));
                }
                for (&t, &v) in times.iter().zip(values) {
                    finite(t, "time")?;
                    finite(v, "value")?;
                }
                Ok(())
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Forcing::Constant { value } => *value,
            Forcing::Sinusoid {
                amplitude,
                omega,
                offset,
            } => amplitude * (omega * t).sin() + offset,
            Forcing::Table { times, values } => {
                let n = times.len();
                if t <= times[0] {
                    return values[0];
                }
                if t >= times[n - 1] {
                    return values[n - 1];
                }
                let j = times.partition_point(|&s| s <= t) - 1;
                let w = (t - times[j]) / (times[j + 1] - times[j]);
                (1.0 - w) * values[j] + w * values[j + 1]
            }
        }
    }

    pub fn sample(&self, t: &[f64]) -> Vec<f64> {
        t.iter().map(|&s| self.eval(s)).collect()
    }

    /// Upper bound on `|F|` over `[0, t_final]`.
    pub fn max_abs(&self, t_final: f64) -> f64 {
        match self {
            Forcing::Constant { value } => value.abs(),
            Forcing::Sinusoid {
                amplitude, offset, ..
            } => amplitude.abs() + offset.abs(),
            Forcing::Table { times, values } => {
                let mut m = self.eval(0.0).abs().max(self.eval(t_final).abs());
                for (&s, &v) in times.iter().zip(values) {
                    if (0.0..=t_final).contains(&s) {
                        m = m.max(v.abs());
                    }
                }
                m
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinusoid_and_table() {
        let f = Forcing::sinusoid(0.02, 1.0, 0.01);
        assert!((f.eval(0.0) - 0.01).abs() < 1e-16);
        assert!((f.eval(std::f64::consts::FRAC_PI_2) - 0.03).abs() < 1e-15);
        let g = Forcing::table(vec![0.0, 1.0, 3.0], vec![1.0, 3.0, -1.0]).unwrap();
        assert_eq!(g.eval(-1.0), 1.0);
        assert_eq!(g.eval(0.5), 2.0);
        assert_eq!(g.eval(2.0), 1.0);
        assert_eq!(g.eval(9.0), -1.0);
        assert_eq!(g.max_abs(3.0), 3.0);
    }

    #[test]
    fn table_must_increase() {
        assert!(Forcing::table(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(Forcing::table(vec![0.0], vec![]).is_err());
    }
}
