use serde::Serialize;
use std::str::FromStr;

/// Largest number of points a grid may expand to.
pub const MAX_POINTS: usize = 10_000_000;

/// Evenly spaced values `start, start + step, ...` up to and including `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        // Tolerate roundoff in (stop - start) / step so the endpoint is kept.
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected start:stop:step, got {s:?}"));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.trim().parse::<f64>().map_err(|e| format!("bad number {p:?}: {e}"))?;
            if !slot.is_finite() {
                return Err(format!("grid value {p:?} is not finite"));
            }
        }
        let [start, stop, step] = v;
        if step <= 0.0 {
            return Err("grid step must be positive".into());
        }
        // A single-point grid (start == stop) is allowed.
        if stop < start {
            return Err("grid stop must not be below start".into());
        }
        if (stop - start) / step >= MAX_POINTS as f64 {
            return Err(format!("grid has more than {MAX_POINTS} points"));
        }
        Ok(Grid { start, stop, step })
    }
}
