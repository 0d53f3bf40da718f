/// Default number of grid points for angle scans over one period.
pub const DEFAULT_SCAN_POINTS: usize = 180;
/// Bracket width at which golden-section refinement stops (radians).
pub const DEFAULT_ANGLE_TOL: f64 = 1e-6;

/// Angle scan settings: a uniform grid over `[0, period)` followed by
/// golden-section refinement around the best grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleScan {
    pub points: usize,
    pub tol: f64,
}

impl Default for AngleScan {
    fn default() -> Self {
        Self {
            points: DEFAULT_SCAN_POINTS,
            tol: DEFAULT_ANGLE_TOL,
        }
    }
}

/// Minimizes a `period`-periodic function; returns `(argmin in [0, period), min)`.
/// NaN values are never selected.
pub fn minimize_periodic(f: impl Fn(f64) -> f64, period: f64, scan: AngleScan) -> (f64, f64) {
    let points = scan.points.max(3);
    let h = period / points as f64;
    let mut best = (0.0, f64::INFINITY);
    for j in 0..points {
        let x = j as f64 * h;
        let v = f(x);
        if v < best.1 {
            best = (x, v);
        }
    }
    if !best.1.is_finite() {
        return (0.0, f64::NAN);
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (best.0 - h, best.0 + h);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > scan.tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let v = f(x);
    let (x, v) = if v <= best.1 { (x, v) } else { best };
    (x.rem_euclid(period), v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn finds_shifted_cosine_minimum() {
        let target = 2.0 * PI / 3.0 + 0.0123;
        let (x, v) = minimize_periodic(|x| (2.0 * (x - target)).cos(), PI, AngleScan::default());
        assert!(
            ((x - (target + PI / 2.0)).rem_euclid(PI))
                .min(PI - (x - (target + PI / 2.0)).rem_euclid(PI))
                < 1e-5
        );
        assert!((v + 1.0).abs() < 1e-10);
    }

    #[test]
    fn wraps_at_period_edge() {
        let (x, _) = minimize_periodic(|x| -(2.0 * x).cos(), PI, AngleScan::default());
        assert!(x < 1e-5 || PI - x < 1e-5);
    }
}
