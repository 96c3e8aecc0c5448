//! Least-squares line fits for log-log slopes and growth envelopes.

/// `y ≈ intercept + slope · x` by ordinary least squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest `y_i - (intercept + slope x_i)` (positive = above the line).
    pub max_upward_residual: f64,
    pub max_abs_residual: f64,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> LineFit {
    assert!(xs.len() == ys.len() && xs.len() >= 2, "need two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let mut up: f64 = f64::NEG_INFINITY;
    let mut abs: f64 = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (intercept + slope * x);
        up = up.max(r);
        abs = abs.max(r.abs());
    }
    LineFit {
        slope,
        intercept,
        max_upward_residual: up,
        max_abs_residual: abs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_recovered() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 * x - 1.0).collect();
        let fit = fit_line(&xs, &ys);
        assert!((fit.slope - 2.5).abs() < 1e-14);
        assert!((fit.intercept + 1.0).abs() < 1e-14);
        assert!(fit.max_abs_residual < 1e-13);
    }

    #[test]
    fn residuals_reported() {
        let xs = [0.0, 1.0, 2.0];
        let ys = [0.0, 1.0, 0.0];
        let fit = fit_line(&xs, &ys);
        assert!(fit.max_upward_residual > 0.0);
        assert!(fit.max_abs_residual >= fit.max_upward_residual);
    }
}
