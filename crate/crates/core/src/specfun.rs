//! Special-function kernel: log-gamma, associated Laguerre and Legendre
//! polynomials, power-series Bessel functions and Kummer's ₁F₁.
//!
//! All series share one truncation policy ([`SeriesControl`]): summation stops
//! once `consecutive_small` successive terms are each below `rel_tol` times the
//! running partial sum, or a term is exactly zero.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Environment variable that overrides [`SeriesControl::max_terms`].
pub const MAX_TERMS_ENV: &str = "RADOSC_MAX_TERMS";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            rel_tol: 1e-14,
            max_terms: 10_000,
            consecutive_small: 3,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, consecutive_small: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::domain(format!("rel_tol must be positive, got {rel_tol}")));
        }
        if max_terms == 0 || consecutive_small == 0 {
            return Err(Error::domain("max_terms and consecutive_small must be at least 1"));
        }
        Ok(SeriesControl {
            rel_tol,
            max_terms,
            consecutive_small,
        })
    }

    /// Defaults, with `max_terms` taken from `RADOSC_MAX_TERMS` when set.
    pub fn from_env() -> Result<Self> {
        let mut ctl = SeriesControl::default();
        if let Ok(raw) = std::env::var(MAX_TERMS_ENV) {
            let n: usize = raw
                .trim()
                .parse()
                .map_err(|_| Error::domain(format!("{MAX_TERMS_ENV}={raw:?} is not a positive integer")))?;
            ctl = SeriesControl::new(ctl.rel_tol, n, ctl.consecutive_small)?;
        }
        Ok(ctl)
    }
}

/// Tracks the stopping rule for one series.
struct Stopper {
    ctl: SeriesControl,
    small_run: usize,
}

impl Stopper {
    fn new(ctl: SeriesControl) -> Self {
        Stopper { ctl, small_run: 0 }
    }

    fn done(&mut self, term: f64, sum: f64) -> bool {
        if term == 0.0 {
            return true;
        }
        if term <= self.ctl.rel_tol * sum {
            self.small_run += 1;
        } else {
            self.small_run = 0;
        }
        self.small_run >= self.ctl.consecutive_small
    }
}

// Stirling-series coefficients B_2k / (2k (2k-1)).
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// ln Γ(x) for x > 0.
///
/// Arguments below 15 are shifted upward with the recurrence before the
/// Stirling series is applied.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut y = x;
    let mut shift = 0.0;
    if y < 15.0 {
        let mut prod = 1.0;
        while y < 15.0 {
            prod *= y;
            y += 1.0;
        }
        shift = prod.ln();
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        corr += c * pow;
        pow *= inv2;
    }
    Ok((y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + corr - shift)
}

/// ln Γ for arguments known to be positive by construction.
pub(crate) fn lgam(x: f64) -> f64 {
    log_gamma(x).expect("log_gamma argument positive by construction")
}

/// L_k^(α)(x) by the three-term recurrence in k.
pub fn assoc_laguerre(k: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..k {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// P_ℓ(x) by Bonnet's recurrence.
pub fn legendre_p(ell: u32, x: f64) -> Result<f64> {
    if !(x.abs() <= 1.0) {
        return Err(Error::domain(format!("legendre_p requires |x| <= 1, got {x}")));
    }
    let mut prev = 1.0;
    if ell == 0 {
        return Ok(prev);
    }
    let mut cur = x;
    for n in 1..ell {
        let n = f64::from(n);
        let next = ((2.0 * n + 1.0) * x * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Sum of the I_ν power series as `(mantissa, log_scale)` with
/// I_ν(x) = mantissa · exp(log_scale). Keeps large arguments finite.
fn bessel_i_scaled(nu: f64, x: f64, ctl: SeriesControl) -> Result<(f64, f64)> {
    let log_scale = nu * (0.5 * x).ln() - lgam(nu + 1.0);
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut extra = 0.0;
    let mut stop = Stopper::new(ctl);
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 1.0 + nu));
        sum += term;
        if sum > 1e280 {
            sum *= 1e-280;
            term *= 1e-280;
            extra += 280.0 * std::f64::consts::LN_10;
        }
        if stop.done(term, sum) {
            return Ok((sum, log_scale + extra));
        }
    }
    Err(Error::NonConvergence {
        what: "bessel_i",
        terms: ctl.max_terms,
    })
}

fn check_bessel_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_i requires nu >= 0 and finite x >= 0, got nu={nu}, x={x}")));
    }
    Ok(())
}

/// Modified Bessel function of the first kind, I_ν(x), from its power series.
pub fn bessel_i(nu: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    check_bessel_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let (m, s) = bessel_i_scaled(nu, x, ctl)?;
    Ok(m * s.exp())
}

/// ln I_ν(x) for x > 0; finite even where I_ν(x) itself overflows.
pub fn ln_bessel_i(nu: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    check_bessel_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 0.0 } else { f64::NEG_INFINITY });
    }
    let (m, s) = bessel_i_scaled(nu, x, ctl)?;
    Ok(m.ln() + s)
}

/// Bessel function of the first kind J_ν(w) for complex w.
///
/// The prefactor (w/2)^ν uses the principal branch, arg(w) ∈ (−π, π]. For
/// w = 2r√z with z = |z|e^{−iφ}, φ ∈ [0, 2π), the principal √z has
/// arg = −φ/2 for φ ≤ π and π − φ/2 for φ > π.
pub fn bessel_j_complex(nu: f64, w: Complex64, ctl: SeriesControl) -> Result<Complex64> {
    if !(nu >= 0.0) || !w.re.is_finite() || !w.im.is_finite() {
        return Err(Error::domain(format!("bessel_j_complex requires nu >= 0 and finite w, got nu={nu}, w={w}")));
    }
    if w == Complex64::new(0.0, 0.0) {
        return Ok(Complex64::new(if nu == 0.0 { 1.0 } else { 0.0 }, 0.0));
    }
    let half = 0.5 * w;
    let prefactor = (nu * half.ln() - lgam(nu + 1.0)).exp();
    let q = -half * half;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut stop = Stopper::new(ctl);
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 1.0 + nu));
        sum += term;
        if stop.done(term.norm(), sum.norm()) {
            return Ok(prefactor * sum);
        }
    }
    Err(Error::NonConvergence {
        what: "bessel_j_complex",
        terms: ctl.max_terms,
    })
}

/// Kummer's confluent hypergeometric function ₁F₁(a; c; x) from its power series.
pub fn hyp1f1(a: f64, c: f64, x: f64, ctl: SeriesControl) -> Result<f64> {
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(Error::Pole(format!("1F1 lower parameter c={c} is a non-positive integer")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut stop = Stopper::new(ctl);
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        term *= (a + kf) / (c + kf) * x / (kf + 1.0);
        sum += term;
        if stop.done(term.abs(), sum.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "hyp1f1",
        terms: ctl.max_terms,
    })
}
