//! Barut-Girardello and Perelomov coherent states, their closed-form
//! wavefunctions, the ξ → z maps and the SU(2) transition law.
//!
//! The complex label is written z = |z| e^{−iφ} with φ ∈ [0, 2π).

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{self, lgam, SeriesControl};
use crate::statespace::{degeneracy, QNums, StateVector};

/// Bound on the norm of the dropped tail, √(Σ_{s≥K} |c_s|²), when a series
/// state is truncated. Bounding the norm rather than the mass keeps pointwise
/// amplitudes accurate as well.
pub const TAIL_TOL: f64 = 1e-14;

/// z stored as modulus and phase, z = modulus · e^{−i phase}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZParam {
    pub modulus: f64,
    pub phase: f64,
}

impl ZParam {
    pub fn new(modulus: f64, phase: f64) -> Result<Self> {
        if !(modulus >= 0.0) || !modulus.is_finite() || !phase.is_finite() {
            return Err(Error::domain(format!("bad z parameters |z|={modulus}, phase={phase}")));
        }
        Ok(ZParam {
            modulus,
            phase: phase.rem_euclid(TAU),
        })
    }

    pub fn from_complex(z: Complex64) -> Self {
        ZParam {
            modulus: z.norm(),
            phase: if z.norm() == 0.0 { 0.0 } else { (-z.arg()).rem_euclid(TAU) },
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.modulus, -self.phase)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Barut-Girardello, label ℓ.
    BG,
    /// SU(1,1) Perelomov, label ℓ.
    SU11P,
    /// SU(2) Perelomov, label n.
    SU2P,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentSpec {
    pub family: Family,
    /// ℓ for the SU(1,1) families, n for SU(2).
    pub label: u32,
    pub z: ZParam,
    /// Minimum number of kept terms; the series families extend it as needed.
    pub trunc: Option<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherentState {
    pub state: StateVector,
    /// Number of lattice terms summed.
    pub terms: usize,
}

impl CoherentSpec {
    pub fn new(family: Family, label: u32, z: ZParam, trunc: Option<u32>) -> Result<Self> {
        match family {
            Family::SU11P if z.modulus >= 1.0 => {
                return Err(Error::domain(format!("SU(1,1) Perelomov needs |z| < 1, got {}", z.modulus)))
            }
            Family::SU2P if trunc.is_some() => {
                return Err(Error::domain("SU(2) Perelomov states are finite; no truncation applies"))
            }
            _ => {}
        }
        if trunc == Some(0) {
            return Err(Error::domain("truncation must be at least 1"));
        }
        Ok(CoherentSpec {
            family,
            label,
            z,
            trunc,
        })
    }

    pub fn with_z(&self, z: ZParam) -> Self {
        CoherentSpec { z, ..*self }
    }

    pub fn build(&self, ctl: SeriesControl) -> Result<CoherentState> {
        let z = self.z.to_complex();
        let trunc = self.trunc.unwrap_or(1);
        match self.family {
            Family::BG => bg_state(self.label, z, trunc, ctl),
            Family::SU11P => su11_perelomov_state(self.label, z, trunc, ctl),
            Family::SU2P => Ok(su2_perelomov_state(self.label, z)),
        }
    }
}

/// Accumulates series amplitudes from log-moduli until the geometric tail
/// bound on the dropped norm falls below [`TAIL_TOL`].
///
/// `log_mod2(s)` is ln|c_s|² and `ratio(s)` is |c_{s+1}|²/|c_s|², assumed
/// non-increasing once below one.
fn series_state<L, R>(ell: u32, z: Complex64, min_terms: u32, ctl: SeriesControl, what: &'static str, log_mod2: L, ratio: R) -> Result<CoherentState>
where
    L: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    let arg = z.arg();
    let mut pairs = Vec::new();
    for k in 0..ctl.max_terms {
        let s = k as f64;
        if k >= min_terms as usize {
            let q = ratio(s);
            if q < 1.0 && log_mod2(s).exp() / (1.0 - q) < TAIL_TOL * TAIL_TOL {
                return Ok(CoherentState {
                    state: StateVector::from_pairs(pairs),
                    terms: k,
                });
            }
        }
        let c = Complex64::from_polar((0.5 * log_mod2(s)).exp(), s * arg);
        pairs.push((QNums::new(k as u32, ell), c));
    }
    Err(Error::NonConvergence {
        what,
        terms: ctl.max_terms,
    })
}

/// Barut-Girardello state: eigenvector of L⁻ with eigenvalue z.
pub fn bg_state(ell: u32, z: Complex64, min_terms: u32, ctl: SeriesControl) -> Result<CoherentState> {
    let m = z.norm();
    if !m.is_finite() {
        return Err(Error::domain("z must be finite"));
    }
    if m == 0.0 {
        return Ok(CoherentState {
            state: StateVector::ket(0, ell),
            terms: 1,
        });
    }
    let l = f64::from(ell);
    let log_norm2 = (2.0 * l + 1.0) / 2.0 * m.ln() - specfun::ln_bessel_i(l + 0.5, 2.0 * m, ctl)?;
    let lm = m.ln();
    series_state(
        ell,
        z,
        min_terms,
        ctl,
        "Barut-Girardello truncation",
        |s| log_norm2 + 2.0 * s * lm - lgam(s + 1.0) - lgam(s + l + 1.5),
        |s| m * m / ((s + 1.0) * (s + l + 1.5)),
    )
}

/// SU(1,1) Perelomov state on the ℓ-hierarchy, |z| < 1.
pub fn su11_perelomov_state(ell: u32, z: Complex64, min_terms: u32, ctl: SeriesControl) -> Result<CoherentState> {
    let m = z.norm();
    if !(m < 1.0) {
        return Err(Error::domain(format!("SU(1,1) Perelomov needs |z| < 1, got {m}")));
    }
    if m == 0.0 {
        return Ok(CoherentState {
            state: StateVector::ket(0, ell),
            terms: 1,
        });
    }
    let l = f64::from(ell);
    let base = (2.0 * l + 3.0) / 2.0 * (-m * m).ln_1p() - lgam(l + 1.5);
    let lm = m.ln();
    series_state(
        ell,
        z,
        min_terms,
        ctl,
        "Perelomov truncation",
        |s| base + lgam(s + l + 1.5) - lgam(s + 1.0) + 2.0 * s * lm,
        |s| m * m * (s + l + 1.5) / (s + 1.0),
    )
}

/// SU(2) Perelomov state on the n-th energy level (finite sum).
pub fn su2_perelomov_state(n: u32, z: Complex64) -> CoherentState {
    let two_j = degeneracy(n) - 1;
    let tj = f64::from(two_j);
    let m = z.norm();
    let pairs = (0..=two_j).filter_map(|k| {
        let q = QNums::from_energy(n, n - 2 * k).expect("on the lattice by construction");
        let kf = f64::from(k);
        if m == 0.0 {
            return (k == 0).then(|| (q, Complex64::new(1.0, 0.0)));
        }
        let log_mod = -0.5 * tj * (m * m).ln_1p() + 0.5 * (lgam(tj + 1.0) - lgam(tj + 1.0 - kf) - lgam(kf + 1.0)) + kf * m.ln();
        Some((q, Complex64::from_polar(log_mod.exp(), kf * z.arg())))
    });
    CoherentState {
        state: StateVector::from_pairs(pairs),
        terms: two_j as usize + 1,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    SU11,
    SU2,
}

/// z = (ξ/|ξ|) tanh|ξ| for SU(1,1) and (ξ/|ξ|) tan|ξ| for SU(2).
pub fn xi_to_z(group: Group, xi: Complex64) -> Result<Complex64> {
    let m = xi.norm();
    if m == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let unit = xi / m;
    match group {
        Group::SU11 => Ok(unit * m.tanh()),
        Group::SU2 => {
            if m.cos().abs() < 1e-12 {
                return Err(Error::Pole(format!("tan|xi| is singular at |xi| = {m}")));
            }
            Ok(unit * m.tan())
        }
    }
}

/// Closed-form Barut-Girardello wavefunction, up to a global phase.
///
/// Uses the principal branch of √z; z = 0 is excluded.
pub fn bg_wavefunction_closed(ell: u32, z: Complex64, r: f64, ctl: SeriesControl) -> Result<Complex64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("r must be positive, got {r}")));
    }
    let m = z.norm();
    if m == 0.0 {
        return Err(Error::domain("closed form is 0/0 at z = 0; use the series state"));
    }
    let nu = f64::from(ell) + 0.5;
    let log_i = specfun::ln_bessel_i(nu, 2.0 * m, ctl)?;
    let j = specfun::bessel_j_complex(nu, 2.0 * r * z.sqrt(), ctl)?;
    let modulus = (0.5 * ((2.0 * r).ln() - log_i) + z.re - 0.5 * r * r).exp();
    Ok(Complex64::from_polar(modulus, z.im) * j)
}

/// Closed-form SU(1,1) Perelomov wavefunction with principal powers.
pub fn su11_perelomov_wavefunction_closed(ell: u32, z: Complex64, r: f64) -> Result<Complex64> {
    let m = z.norm();
    if !(m < 1.0) {
        return Err(Error::domain(format!("SU(1,1) Perelomov needs |z| < 1, got {m}")));
    }
    if !(r > 0.0) {
        return Err(Error::domain(format!("r must be positive, got {r}")));
    }
    let l = f64::from(ell);
    let one = Complex64::new(1.0, 0.0);
    let base = Complex64::new((1.0 - m * m).sqrt(), 0.0) / (one - z);
    let power = base.powf((2.0 * l + 3.0) / 2.0);
    let gauss = (-0.5 * r * r * (one + z) / (one - z)).exp();
    let radial = ((l + 1.0) * r.ln() + 0.5 * (2f64.ln() - lgam(l + 1.5))).exp();
    Ok(power * gauss * radial)
}

/// Probability of finding the SU(2) state on ℓ = n − 2r.
pub fn transition_probability(n: u32, r_index: u32, z_mod: f64) -> Result<f64> {
    let two_j = degeneracy(n) - 1;
    if r_index > two_j {
        return Err(Error::IndexOutOfRange {
            index: r_index,
            max: two_j,
        });
    }
    if !(z_mod >= 0.0) || !z_mod.is_finite() {
        return Err(Error::domain(format!("|z| must be finite and non-negative, got {z_mod}")));
    }
    if z_mod == 0.0 {
        return Ok(if r_index == 0 { 1.0 } else { 0.0 });
    }
    let (tj, rf) = (f64::from(two_j), f64::from(r_index));
    let log_p = lgam(tj + 1.0) - lgam(tj + 1.0 - rf) - lgam(rf + 1.0) + 2.0 * rf * z_mod.ln() - tj * (z_mod * z_mod).ln_1p();
    Ok(log_p.exp())
}
