//! Parameter sweeps over (M, η).

use anyhow::{bail, ensure, Result};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

/// One swept axis: `points` values from `min` to `max`, endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSpec {
    pub name: &'static str,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: Scale,
}

impl AxisSpec {
    pub fn new(name: &'static str, min: f64, max: f64, points: usize, scale: Scale) -> Result<Self> {
        ensure!(points >= 2, "axis {name}: need at least 2 points, got {points}");
        ensure!(
            min.is_finite() && max.is_finite() && min < max,
            "axis {name}: need finite min < max, got [{min}, {max}]"
        );
        if scale == Scale::Log {
            ensure!(min > 0.0, "axis {name}: log scale needs min > 0, got {min}");
        }
        Ok(AxisSpec {
            name,
            min,
            max,
            points,
            scale,
        })
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    return self.max;
                }
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }

    /// Values rounded to integers; rounding must not merge points.
    pub fn integer_values(&self) -> Result<Vec<usize>> {
        ensure!(self.min >= 0.0, "axis {}: integer axis needs min >= 0", self.name);
        let out: Vec<usize> = self.values().iter().map(|v| v.round() as usize).collect();
        if let Some(w) = out.windows(2).find(|w| w[0] == w[1]) {
            bail!(
                "axis {}: {} points collapse onto duplicate integer {} between {} and {}",
                self.name,
                self.points,
                w[0],
                self.min,
                self.max
            );
        }
        Ok(out)
    }
}

/// Row-major (M outer, η inner) grid over the channel count and efficiency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepGrid {
    pub channels: AxisSpec,
    pub eta: AxisSpec,
}

impl SweepGrid {
    pub fn new(channels: AxisSpec, eta: AxisSpec) -> Result<Self> {
        ensure!(channels.min >= 1.0, "axis M: need M >= 1, got min {}", channels.min);
        ensure!(
            eta.min > 0.0 && eta.max <= 1.0,
            "axis eta: need 0 < eta <= 1, got [{}, {}]",
            eta.min,
            eta.max
        );
        channels.integer_values()?;
        Ok(SweepGrid { channels, eta })
    }

    pub fn points(&self) -> Result<Vec<(usize, f64)>> {
        let etas = self.eta.values();
        Ok(self
            .channels
            .integer_values()?
            .into_iter()
            .flat_map(|m| etas.iter().map(move |&e| (m, e)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_axis_hits_endpoints() {
        let a = AxisSpec::new("eta", 0.02, 1.0, 50, Scale::Linear).unwrap();
        let v = a.values();
        assert_eq!(v.len(), 50);
        assert_eq!(v[0], 0.02);
        assert_eq!(v[49], 1.0);
        assert!((v[1] - 0.04).abs() < 1e-15);
    }

    #[test]
    fn log_axis() {
        let a = AxisSpec::new("M", 1.0, 1000.0, 4, Scale::Log).unwrap();
        let v = a.integer_values().unwrap();
        assert_eq!(v, vec![1, 10, 100, 1000]);
        assert!(AxisSpec::new("M", 0.0, 10.0, 4, Scale::Log).is_err());
    }

    #[test]
    fn invalid_axes() {
        assert!(AxisSpec::new("eta", 0.1, 1.0, 1, Scale::Linear).is_err());
        assert!(AxisSpec::new("eta", 1.0, 0.1, 5, Scale::Linear).is_err());
        let crowded = AxisSpec::new("M", 2.0, 4.0, 10, Scale::Linear).unwrap();
        assert!(crowded.integer_values().is_err());
    }

    #[test]
    fn grid_domain_and_order() {
        let m = AxisSpec::new("M", 2.0, 60.0, 30, Scale::Linear).unwrap();
        let e = AxisSpec::new("eta", 0.5, 1.0, 2, Scale::Linear).unwrap();
        let g = SweepGrid::new(m.clone(), e).unwrap();
        let p = g.points().unwrap();
        assert_eq!(p.len(), 60);
        assert_eq!(&p[..3], &[(2, 0.5), (2, 1.0), (4, 0.5)]);
        let bad = AxisSpec::new("eta", 0.5, 1.5, 2, Scale::Linear).unwrap();
        assert!(SweepGrid::new(m, bad).is_err());
    }
}
