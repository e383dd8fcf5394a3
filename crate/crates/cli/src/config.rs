use std::path::PathBuf;

use calkin_core::spectra::FredholmOptions;
use calkin_core::Complex64;

use crate::Failure;

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub tolerance: f64,
    pub nu_schedule: Vec<usize>,
    pub x_grid: usize,
    pub lambda_grid: usize,
    pub output_dir: PathBuf,
    pub base: Option<f64>,
    pub inclusion: bool,
}

impl JobConfig {
    pub fn new(
        tolerance: f64,
        nu_schedule: Vec<usize>,
        x_grid: usize,
        lambda_grid: usize,
        output_dir: PathBuf,
        base: Option<f64>,
        inclusion: bool,
    ) -> Result<Self, Failure> {
        let bad = |m: String| Err(Failure::new(2, m));
        if !(tolerance > 0.0 && tolerance < 1e-3) {
            return bad(format!("--tol {tolerance} is outside (0, 1e-3)"));
        }
        if nu_schedule.is_empty() || nu_schedule.contains(&0) {
            return bad("--nu needs positive sizes".into());
        }
        if x_grid == 0 {
            return bad("--xgrid must be positive".into());
        }
        if let Some(b) = base {
            if !(b.is_finite() && b > 0.0) {
                return bad(format!("--base {b} must be positive"));
            }
        }
        Ok(Self { tolerance, nu_schedule, x_grid, lambda_grid, output_dir, base, inclusion })
    }

    pub fn xs(&self) -> Vec<f64> {
        let n = self.x_grid;
        (1..=n).map(|k| k as f64 / (n + 1) as f64).collect()
    }

    /// `lambda_grid²` points of the square `[-r, r]²`, row by row from the
    /// bottom; a single point is the origin.
    pub fn lambdas(&self, r: f64) -> Vec<Complex64> {
        let n = self.lambda_grid;
        let coord = |k: usize| if n == 1 { 0.0 } else { -r + 2.0 * r * k as f64 / (n - 1) as f64 };
        (0..n).flat_map(|j| (0..n).map(move |i| Complex64::new(coord(i), coord(j)))).collect()
    }

    pub fn fredholm_options(&self) -> FredholmOptions {
        FredholmOptions {
            tol: self.tolerance,
            nu_schedule: self.nu_schedule.clone(),
            x_grid: self.xs(),
            ..FredholmOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(tol: f64, x: usize, l: usize) -> Result<JobConfig, Failure> {
        JobConfig::new(tol, vec![20, 40], x, l, PathBuf::from("."), None, false)
    }

    #[test]
    fn validation() {
        assert!(cfg(1e-9, 9, 41).is_ok());
        assert!(cfg(1e-9, 9, 0).is_ok());
        assert_eq!(cfg(1e-2, 9, 41).unwrap_err().code, 2);
        assert_eq!(cfg(0.0, 9, 41).unwrap_err().code, 2);
        assert_eq!(cfg(1e-9, 0, 41).unwrap_err().code, 2);
        assert!(JobConfig::new(1e-9, vec![0], 9, 41, PathBuf::from("."), None, false).is_err());
    }

    #[test]
    fn grids() {
        let c = cfg(1e-9, 9, 3).unwrap();
        let xs = c.xs();
        assert_eq!(xs.len(), 9);
        assert!((xs[0] - 0.1).abs() < 1e-15 && (xs[8] - 0.9).abs() < 1e-15);
        let l = c.lambdas(2.0);
        assert_eq!(l.len(), 9);
        assert_eq!(l[0], Complex64::new(-2.0, -2.0));
        assert_eq!(l[4], Complex64::new(0.0, 0.0));
        assert_eq!(cfg(1e-9, 9, 1).unwrap().lambdas(5.0), vec![Complex64::new(0.0, 0.0)]);
        assert!(cfg(1e-9, 9, 0).unwrap().lambdas(5.0).is_empty());
    }
}
