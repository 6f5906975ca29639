//! Log-log growth-exponent estimation.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("non-positive value at point {index}: ({x}, {y})")]
    NonPositive { index: usize, x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    /// Slope of log(value) against log(t): the growth exponent.
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Unweighted least squares of `ln y` against `ln x`.
pub fn fit_exponent(series: &[(f64, f64)]) -> Result<Fit, FitError> {
    if series.len() < 3 {
        return Err(FitError::TooFewPoints(series.len()));
    }
    for (i, &(x, y)) in series.iter().enumerate() {
        if x <= 0.0 || y <= 0.0 {
            return Err(FitError::NonPositive { index: i, x, y });
        }
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Ok(Fit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_square_series() {
        let series: Vec<(f64, f64)> = (1..=20).map(|t| (t as f64, (t * t) as f64)).collect();
        let fit = fit_exponent(&series).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_two_thirds_series() {
        let series: Vec<(f64, f64)> = [1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&t: &f64| (t, t.powf(2.0 / 3.0)))
            .collect();
        let fit = fit_exponent(&series).unwrap();
        assert!((fit.slope - 2.0 / 3.0).abs() < 1e-6, "slope {}", fit.slope);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            fit_exponent(&[(1.0, 1.0), (2.0, 2.0)]),
            Err(FitError::TooFewPoints(2))
        ));
        assert!(matches!(
            fit_exponent(&[(1.0, 1.0), (2.0, 0.0), (3.0, 2.0)]),
            Err(FitError::NonPositive { index: 1, .. })
        ));
    }
}
