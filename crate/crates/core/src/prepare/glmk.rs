//! Fock-basis coefficients of the collective angular-momentum states `|l, m>`.
//!
//! The closed form is an alternating sum that cancels catastrophically in
//! floating point. Every term is a square root of a rational, and all terms of
//! one sum share the same irrational part, so below [`EXACT_GLMK_MAX_N`] the sum
//! is evaluated exactly and only the final `sign * sqrt(G^2)` is rounded.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AngularLabel;
use crate::error::{Error, Result};

/// Largest atom number evaluated with exact rational arithmetic by default.
pub const EXACT_GLMK_MAX_N: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GlmkMethod {
    /// Exact up to [`EXACT_GLMK_MAX_N`], log-magnitude above.
    #[default]
    Auto,
    Exact,
    LogMagnitude,
}

impl GlmkMethod {
    fn resolve(self, total_n: u32) -> GlmkMethod {
        match self {
            GlmkMethod::Auto if total_n <= EXACT_GLMK_MAX_N => GlmkMethod::Exact,
            GlmkMethod::Auto => GlmkMethod::LogMagnitude,
            m => m,
        }
    }
}

/// `ln k!` for `k <= max`.
#[derive(Debug, Clone)]
pub(crate) struct LnFactorial(Vec<f64>);

impl LnFactorial {
    pub(crate) fn new(max: u32) -> Self {
        let mut t = Vec::with_capacity(max as usize + 1);
        t.push(0.0);
        for k in 1..=max as usize {
            t.push(t[k - 1] + (k as f64).ln());
        }
        Self(t)
    }

    pub(crate) fn ln_fact(&self, k: u32) -> f64 {
        self.0[k as usize]
    }

    /// `ln C(n, k)`, `None` when the binomial vanishes.
    pub(crate) fn ln_binom(&self, n: i64, k: i64) -> Option<f64> {
        if n < 0 || k < 0 || k > n {
            return None;
        }
        Some(self.0[n as usize] - self.0[k as usize] - self.0[(n - k) as usize])
    }
}

struct Pascal(Vec<Vec<BigUint>>);

impl Pascal {
    fn new(max: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max + 1);
        rows.push(vec![BigUint::one()]);
        for n in 1..=max {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        Self(rows)
    }

    fn c(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        BigInt::from(self.0[n as usize][k as usize].clone())
    }
}

fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let (p, d) = (q.numer(), q.denom());
    let (sp, sd) = (p.sqrt(), d.sqrt());
    (&sp * &sp == *p && &sd * &sd == *d).then(|| BigRational::new(sp, sd))
}

/// Indices shared by both evaluation routes for one `(label, n0)`.
struct Terms {
    n: i64,
    l: i64,
    m: i64,
    twok: i64,
    r_lo: i64,
    r_hi: i64,
}

impl Terms {
    fn new(label: &AngularLabel, n_zero: u32) -> Self {
        let (n, l, m) = (label.total_n as i64, label.l as i64, label.m as i64);
        let twok = n_zero as i64;
        // twok - (l - |m|) is always even: n0 = N + m = l + m (mod 2)
        let r_lo = ((twok - (l - m.abs())) / 2).max(0);
        let r_hi = (twok / 2).min((n - l) / 2);
        Self {
            n,
            l,
            m,
            twok,
            r_lo,
            r_hi,
        }
    }

    /// Binomial arguments of the square-rooted product `P_r`.
    fn p_args(&self, r: i64) -> [(i64, i64); 5] {
        let Terms { n, l, twok, .. } = *self;
        [
            (2 * r, r),
            (twok, 2 * r),
            (l, twok - 2 * r),
            (n - twok, l - twok + 2 * r),
            (n - l - 2 * r, (n - l) / 2 - r),
        ]
    }

    /// Binomial arguments of the rational prefactor `M_r`.
    fn m_args(&self, r: i64) -> (i64, i64) {
        let Terms { l, m, twok, .. } = *self;
        (l - twok + 2 * r, ((l - m) - twok + 2 * r) / 2)
    }

    fn denominator_args(&self) -> [(i64, i64); 2] {
        let Terms { n, l, m, twok, .. } = *self;
        [(n - twok, (n - m - twok) / 2), (2 * l, l - m)]
    }
}

/// Evaluates all coefficients of one label.
pub(crate) struct GlmkEngine {
    label: AngularLabel,
    method: GlmkMethod,
    pascal: Option<Pascal>,
    inv_s2: Option<BigRational>,
    lnf: LnFactorial,
    ln_inv_s2: f64,
}

impl GlmkEngine {
    pub(crate) fn new(label: AngularLabel, method: GlmkMethod) -> Self {
        let method = method.resolve(label.total_n);
        let (n, l) = (label.total_n as i64, label.l as i64);
        let lnf = LnFactorial::new(2 * label.total_n + 2);
        let ln_inv_s2 = log_sum_exp((0..=(n - l) / 2).map(|j| {
            lnf.ln_binom(2 * j, j).unwrap() + lnf.ln_binom((n + l) / 2 - j, l).unwrap()
                - j as f64 * 4f64.ln()
        }));
        let (pascal, inv_s2) = if method == GlmkMethod::Exact {
            let p = Pascal::new(2 * label.total_n as usize + 2);
            let mut s = BigRational::zero();
            for j in 0..=(n - l) / 2 {
                let num = p.c(2 * j, j) * p.c((n + l) / 2 - j, l);
                s += BigRational::new(num, BigInt::from(4).pow(j as u32));
            }
            (Some(p), Some(s))
        } else {
            (None, None)
        };
        Self {
            label,
            method,
            pascal,
            inv_s2,
            lnf,
            ln_inv_s2,
        }
    }

    pub(crate) fn value(&self, n_zero: u32) -> Result<f64> {
        let t = Terms::new(&self.label, n_zero);
        match self.method {
            GlmkMethod::Exact => self.exact(&t),
            _ => Ok(self.log_magnitude(&t)),
        }
    }

    fn exact(&self, t: &Terms) -> Result<f64> {
        let p = self
            .pascal
            .as_ref()
            .expect("exact engine has a Pascal table");
        let mut base: Option<BigInt> = None;
        let mut sum = BigRational::zero();
        let mut quarter_pow = BigRational::one();
        for r in 0..=t.r_hi {
            if r > 0 {
                quarter_pow /= BigInt::from(4);
            }
            if r < t.r_lo {
                continue;
            }
            let pr = t
                .p_args(r)
                .iter()
                .fold(BigInt::one(), |acc, &(a, b)| acc * p.c(a, b));
            let (ma, mb) = t.m_args(r);
            let mr = p.c(ma, mb);
            if pr.is_zero() || mr.is_zero() {
                continue;
            }
            let b = base.get_or_insert_with(|| pr.clone());
            let ratio = BigRational::new(pr, b.clone());
            let root = exact_sqrt(&ratio).ok_or_else(|| Error::Numerical {
                block: Some(self.label.block_key()),
                reason: format!("coefficient ratio {ratio} is not a perfect square"),
            })?;
            let term = &quarter_pow * BigRational::from_integer(mr) * root;
            if r % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let Some(base) = base else { return Ok(0.0) };
        if sum.is_zero() {
            return Ok(0.0);
        }
        let [(a1, b1), (a2, b2)] = t.denominator_args();
        let den =
            self.inv_s2.clone().unwrap() * BigRational::from_integer(p.c(a1, b1) * p.c(a2, b2));
        let g2 = BigRational::from_integer(BigInt::from(2).pow(t.twok as u32) * base) * &sum * &sum
            / den;
        let mag = g2.to_f64().unwrap_or(f64::NAN).sqrt();
        Ok(if sum.is_negative() { -mag } else { mag })
    }

    fn log_magnitude(&self, t: &Terms) -> f64 {
        let lnf = &self.lnf;
        let mut terms = Vec::new();
        for r in t.r_lo..=t.r_hi {
            let lp: Option<f64> = t.p_args(r).iter().map(|&(a, b)| lnf.ln_binom(a, b)).sum();
            let (ma, mb) = t.m_args(r);
            if let (Some(lp), Some(lm)) = (lp, lnf.ln_binom(ma, mb)) {
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                terms.push((sign, 0.5 * lp + lm - r as f64 * 4f64.ln()));
            }
        }
        if terms.is_empty() {
            return 0.0;
        }
        let shift = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let scaled: f64 = terms.iter().map(|(s, e)| s * (e - shift).exp()).sum();
        if scaled == 0.0 {
            return 0.0;
        }
        let [(a1, b1), (a2, b2)] = t.denominator_args();
        let ln_den = lnf.ln_binom(a1, b1).unwrap() + lnf.ln_binom(a2, b2).unwrap();
        let ln_g =
            0.5 * t.twok as f64 * 2f64.ln() - 0.5 * self.ln_inv_s2 + shift + scaled.abs().ln()
                - 0.5 * ln_den;
        ln_g.exp().copysign(scaled)
    }
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.collect();
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi + xs.iter().map(|x| (x - hi).exp()).sum::<f64>().ln()
}

fn check_n_zero(label: &AngularLabel, n_zero: u32) -> Result<()> {
    let key = label.block_key();
    if n_zero < key.min_n_zero()
        || n_zero > key.total_n - key.magnetization.unsigned_abs()
        || !(n_zero - key.min_n_zero()).is_multiple_of(2)
    {
        return Err(Error::contract(format!(
            "n0 = {n_zero} is not a state of block {key} (2k must run over {}..={} in steps of 2)",
            key.min_n_zero(),
            key.total_n - key.magnetization.unsigned_abs()
        )));
    }
    Ok(())
}

/// `G_lmk` at `n0 = 2k` (half-integer `k` for odd `N + m`), with the sign of the
/// closed form.
pub fn glmk(label: AngularLabel, n_zero: u32) -> Result<f64> {
    glmk_with(label, n_zero, GlmkMethod::Auto)
}

pub fn glmk_with(label: AngularLabel, n_zero: u32, method: GlmkMethod) -> Result<f64> {
    check_n_zero(&label, n_zero)?;
    GlmkEngine::new(label, method).value(n_zero)
}

/// All coefficients of `|l, m>` in block order (ascending `n0`).
pub fn glmk_vector(label: AngularLabel, method: GlmkMethod) -> Result<Vec<f64>> {
    let engine = GlmkEngine::new(label, method);
    let key = label.block_key();
    (0..key.dim())
        .map(|i| engine.value(key.state_at(i).n_zero))
        .collect()
}

/// Closed form for the top multiplet `l = N`.
pub fn glmk_top(total_n: u32, m: i32, n_zero: u32) -> Result<f64> {
    let label = AngularLabel::new(total_n, total_n, m)?;
    check_n_zero(&label, n_zero)?;
    let lnf = LnFactorial::new(2 * total_n);
    let (n, m, twok) = (total_n as i64, m as i64, n_zero as i64);
    let ln = 0.5 * twok as f64 * 2f64.ln()
        + 0.5
            * (lnf.ln_binom(n, twok).unwrap()
                + lnf.ln_binom(n - twok, (n - m - twok) / 2).unwrap())
        - 0.5 * lnf.ln_binom(2 * n, n - m).unwrap();
    Ok(ln.exp())
}

/// Large-`N` form `sqrt(C(N, 2k) / 2^(N-1))` of the `l = N, m = 0` coefficients.
pub fn glmk_top_asymptotic(total_n: u32, n_zero: u32) -> f64 {
    let lnf = LnFactorial::new(total_n);
    match lnf.ln_binom(total_n as i64, n_zero as i64) {
        Some(lc) => (0.5 * (lc - (total_n as f64 - 1.0) * 2f64.ln())).exp(),
        None => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(n: u32, l: u32, m: i32) -> AngularLabel {
        AngularLabel::new(n, l, m).unwrap()
    }

    #[test]
    fn two_atoms() {
        let s3 = 3f64.sqrt();
        let g = glmk_vector(label(2, 2, 0), GlmkMethod::Exact).unwrap();
        assert!((g[0] - 1.0 / s3).abs() < 1e-15 && (g[1] - 2.0 / 6f64.sqrt()).abs() < 1e-15);
        let g = glmk_vector(label(2, 0, 0), GlmkMethod::Exact).unwrap();
        // (sqrt(2/3), -1/sqrt3) up to a global sign
        assert!((g[0].abs() - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((g[1].abs() - 1.0 / s3).abs() < 1e-15);
        assert!(g[0] * g[1] < 0.0);
    }

    #[test]
    fn exact_and_log_routes_agree_where_log_is_stable() {
        for (n, l, m) in [(12u32, 12u32, 0i32), (15, 13, -2), (20, 20, 7), (9, 5, 1)] {
            let lab = label(n, l, m);
            let a = glmk_vector(lab, GlmkMethod::Exact).unwrap();
            let b = glmk_vector(lab, GlmkMethod::LogMagnitude).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-9, "{n} {l} {m}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn top_multiplet_closed_form() {
        for n in [1u32, 4, 11, 30] {
            for m in -(n as i32)..=n as i32 {
                let lab = label(n, n, m);
                let key = lab.block_key();
                for i in 0..key.dim() {
                    let n0 = key.state_at(i).n_zero;
                    let g = glmk(lab, n0).unwrap();
                    let c = glmk_top(n, m, n0).unwrap();
                    assert!((g - c).abs() < 1e-12, "{n} {m} {n0}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_indices() {
        assert!(AngularLabel::new(4, 3, 0).is_err());
        assert!(AngularLabel::new(4, 2, 3).is_err());
        assert!(AngularLabel::new(4, 6, 0).is_err());
        let lab = label(4, 2, 0);
        assert!(glmk(lab, 1).is_err());
        assert!(glmk(lab, 6).is_err());
        assert!(glmk(lab, 4).is_ok());
    }

    #[test]
    fn ln_factorial_small() {
        let t = LnFactorial::new(10);
        assert!((t.ln_fact(5) - 120f64.ln()).abs() < 1e-14);
        assert!(t.ln_binom(3, 4).is_none());
    }
}
