//! Expectation values, quadrature variances and squeezing classification,
//! classical turning points and two-qubit concurrence.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::coherent::{su2_perelomov_state, Group, ZParam};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridResult};
use crate::operators::{apply, su2_rep_matrices, OpKind};
use crate::par::Exec;
use crate::statespace::{degeneracy, inner_product, StateVector};

/// Slack used when comparing a variance with the uncertainty bound.
pub const CLASS_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Class {
    None,
    SQ1,
    SQ2,
    Minimum,
}

impl Class {
    /// Numeric code used in grids: NONE 0, SQ1 1, SQ2 2, MINIMUM 3.
    pub fn code(self) -> f64 {
        match self {
            Class::None => 0.0,
            Class::SQ1 => 1.0,
            Class::SQ2 => 2.0,
            Class::Minimum => 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::None => "NONE",
            Class::SQ1 => "SQ1",
            Class::SQ2 => "SQ2",
            Class::Minimum => "MINIMUM",
        }
    }
}

/// Means and variances of the two quadratures plus the uncertainty bound
/// ½|⟨third generator⟩|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceReport {
    pub mean_1: f64,
    pub mean_2: f64,
    pub mean_3: f64,
    pub var_1: f64,
    pub var_2: f64,
    pub bound: f64,
    pub squeezed_1: bool,
    pub squeezed_2: bool,
    pub minimum_uncertainty: bool,
}

impl VarianceReport {
    pub fn new(mean_1: f64, mean_2: f64, mean_3: f64, var_1: f64, var_2: f64) -> Self {
        let var_1 = var_1.max(0.0);
        let var_2 = var_2.max(0.0);
        let bound = 0.5 * mean_3.abs();
        VarianceReport {
            mean_1,
            mean_2,
            mean_3,
            var_1,
            var_2,
            bound,
            squeezed_1: var_1 < bound - CLASS_TOL,
            squeezed_2: var_2 < bound - CLASS_TOL,
            minimum_uncertainty: ((var_1 * var_2).sqrt() - bound).abs() < CLASS_TOL,
        }
    }

    pub fn class(&self) -> Class {
        if self.squeezed_1 {
            Class::SQ1
        } else if self.squeezed_2 {
            Class::SQ2
        } else if self.minimum_uncertainty {
            Class::Minimum
        } else {
            Class::None
        }
    }
}

fn expect(state: &StateVector, img: &StateVector, norm2: f64) -> Complex64 {
    inner_product(state, img) / norm2
}

/// ⟨L3⟩ = Σ|c_s|²(s + (2ℓ+3)/4) / ‖ψ‖².
pub fn expect_l3(state: &StateVector) -> Result<f64> {
    let norm2 = state.norm_sqr();
    if norm2 == 0.0 {
        return Err(Error::domain("expectation value in the zero state"));
    }
    Ok(expect(state, &apply(OpKind::L3, state)?, norm2).re)
}

/// su(1,1) quadratures L1 = ½(L₊ + L₋), L2 = (L₊ − L₋)/(2i), from operator
/// applications on a single-ℓ state.
pub fn su11_variances_series(state: &StateVector) -> Result<VarianceReport> {
    state.single_ell()?;
    let norm2 = state.norm_sqr();
    if norm2 == 0.0 {
        return Err(Error::domain("variances of the zero state"));
    }
    let up = apply(OpKind::LPlus, state)?;
    let down = apply(OpKind::LMinus, state)?;
    let e_up = expect(state, &up, norm2);
    let e_down = expect(state, &down, norm2);
    let e_upup = expect(state, &apply(OpKind::LPlus, &up)?, norm2);
    let e_downdown = expect(state, &apply(OpKind::LMinus, &down)?, norm2);
    // ⟨L₊L₋⟩ = ‖L₋ψ‖², ⟨L₋L₊⟩ = ‖L₊ψ‖²
    let e_updown = down.norm_sqr() / norm2;
    let e_downup = up.norm_sqr() / norm2;
    let i2 = Complex64::new(0.0, 2.0);
    let mean_1 = (0.5 * (e_up + e_down)).re;
    let mean_2 = ((e_up - e_down) / i2).re;
    let sq_1 = 0.25 * (e_upup + e_downdown + e_updown + e_downup).re;
    let sq_2 = -0.25 * (e_upup + e_downdown - e_updown - e_downup).re;
    let mean_3 = expect(state, &apply(OpKind::L3, state)?, norm2).re;
    Ok(VarianceReport::new(
        mean_1,
        mean_2,
        mean_3,
        sq_1 - mean_1 * mean_1,
        sq_2 - mean_2 * mean_2,
    ))
}

fn check_disk(z: Complex64) -> Result<f64> {
    let m2 = z.norm_sqr();
    if !(m2 < 1.0) {
        return Err(Error::domain(format!("SU(1,1) Perelomov needs |z| < 1, got {}", z.norm())));
    }
    Ok(m2)
}

/// Closed-form report for the SU(1,1) Perelomov state.
pub fn su11_perelomov_variances_closed(ell: u32, z: Complex64) -> Result<VarianceReport> {
    let m2 = check_disk(z)?;
    let h = f64::from(ell) + 1.5;
    let d = 1.0 - m2;
    let mean_3 = 0.5 * h * (1.0 + m2) / d;
    let var_1 = 0.25 * h * (1.0 + (2.0 * z.re / d).powi(2));
    let var_2 = 0.25 * h * (1.0 + (2.0 * z.im / d).powi(2));
    Ok(VarianceReport::new(h * z.re / d, -h * z.im / d, mean_3, var_1, var_2))
}

/// j of the n-th energy level as a float.
fn level_j(n: u32) -> f64 {
    f64::from(degeneracy(n) - 1) / 2.0
}

/// Closed-form report for the SU(2) Perelomov state on level n.
pub fn su2_variances_closed(n: u32, z: Complex64) -> VarianceReport {
    let j = level_j(n);
    let m2 = z.norm_sqr();
    let d = 1.0 + m2;
    let s3_0 = -j;
    let mean_3 = s3_0 * (1.0 - m2) / d;
    let var_1 = 0.5 * ((2.0 * z.re / d).powi(2) - 1.0) * s3_0;
    let var_2 = 0.5 * ((2.0 * z.im / d).powi(2) - 1.0) * s3_0;
    VarianceReport::new(2.0 * j * z.re / d, -2.0 * j * z.im / d, mean_3, var_1, var_2)
}

/// Report from dense representation matrices applied to the SU(2) state.
pub fn su2_variances_matrix(n: u32, z: Complex64) -> VarianceReport {
    let rep = su2_rep_matrices(n);
    let st = su2_perelomov_state(n, z).state;
    let v = DVector::from_iterator(rep.dim(), rep.basis_map.iter().map(|q| st.get(*q)));
    let cplx = |m: &DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
    let sp = cplx(&rep.s_plus);
    let sm = cplx(&rep.s_minus);
    let s1 = (&sp + &sm) * Complex64::new(0.5, 0.0);
    let s2 = (&sp - &sm) * Complex64::new(0.0, -0.5);
    let s3 = cplx(&rep.s3);
    let ev = |m: &DMatrix<Complex64>| v.dotc(&(m * &v)).re;
    let (m1, m2) = (ev(&s1), ev(&s2));
    VarianceReport::new(m1, m2, ev(&s3), ev(&(&s1 * &s1)) - m1 * m1, ev(&(&s2 * &s2)) - m2 * m2)
}

/// Classification of the coherent state at every (|z|, φ) with z = |z|e^{−iφ}.
pub fn squeezing_map(group: Group, label: u32, mod_grid: &[f64], phase_grid: &[f64], exec: Exec) -> Result<GridResult> {
    if group == Group::SU11 {
        if let Some(m) = mod_grid.iter().find(|&&m| !(m < 1.0)) {
            return Err(Error::domain(format!("SU(1,1) squeezing map needs |z| < 1, got {m}")));
        }
    }
    let rows = exec.try_map(mod_grid, |&m| {
        phase_grid
            .iter()
            .map(|&phi| {
                let z = ZParam::new(m, phi)?.to_complex();
                let report = match group {
                    Group::SU11 => su11_perelomov_variances_closed(label, z)?,
                    Group::SU2 => su2_variances_closed(label, z),
                };
                Ok(report.class().code())
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    let mut g = GridResult::new_2d(
        Axis::new("modulus", mod_grid.to_vec()),
        Axis::new("phase", phase_grid.to_vec()),
        "class",
        rows,
    )?;
    let (group_name, label_name) = match group {
        Group::SU11 => ("su11", "ell"),
        Group::SU2 => ("su2", "n"),
    };
    g.meta("group", group_name);
    g.meta(label_name, label);
    g.meta("classes", "0=NONE,1=SQ1,2=SQ2,3=MINIMUM");
    g.meta("tol", CLASS_TOL);
    Ok(g)
}

/// Inner and outer classical turning points of ℓ(ℓ+1)/r² + r² at energy E.
pub fn turning_points(mean_energy: f64, ell: u32) -> Result<(f64, f64)> {
    if !(mean_energy > 0.0) || !mean_energy.is_finite() {
        return Err(Error::domain(format!("mean energy must be positive, got {mean_energy}")));
    }
    let l = f64::from(ell);
    let disc = mean_energy * mean_energy - 4.0 * l * (l + 1.0);
    if disc < 0.0 {
        return Err(Error::domain(format!(
            "no classical region for E = {mean_energy}, l = {ell}: the minimum of the effective potential is {}",
            2.0 * (l * (l + 1.0)).sqrt()
        )));
    }
    let root = disc.sqrt();
    let inner = (0.5 * (mean_energy - root)).max(0.0).sqrt();
    let outer = (0.5 * (mean_energy + root)).sqrt();
    Ok((inner, outer))
}

/// Mean energy 4⟨L3⟩ of an su(1,1) report.
pub fn mean_energy(report: &VarianceReport) -> f64 {
    4.0 * report.mean_3
}

/// 4⟨L3⟩ of a state.
pub fn mean_energy_of_state(state: &StateVector) -> Result<f64> {
    Ok(4.0 * expect_l3(state)?)
}

/// 2|ad − bc| for the two-qubit amplitudes (a, b, c, d).
pub fn concurrence(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<f64> {
    let n2 = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    if (n2 - 1.0).abs() > 1e-10 {
        return Err(Error::Normalization(n2));
    }
    // clamp roundoff above the mathematical maximum
    Ok((2.0 * (a * d - b * c).norm()).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{bg_state, su11_perelomov_state, xi_to_z};
    use crate::specfun::{bessel_i, SeriesControl};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn zp(m: f64, phi: f64) -> Complex64 {
        ZParam::new(m, phi).unwrap().to_complex()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn extremal_ket_is_minimum() {
        for ell in 0..5 {
            let r = su11_variances_series(&StateVector::ket(0, ell)).unwrap();
            let want = (2.0 * f64::from(ell) + 3.0) / 8.0;
            assert!((r.var_1 - want).abs() < 1e-14);
            assert!((r.var_2 - want).abs() < 1e-14);
            assert!(r.minimum_uncertainty);
            assert_eq!(r.class(), Class::Minimum);
        }
        let r = su11_variances_series(&StateVector::ket(1, 0)).unwrap();
        assert!((r.mean_3 - 1.75).abs() < 1e-15);
    }

    #[test]
    fn bg_minimum_uncertainty_series() {
        for &ell in &[0u32, 1, 2] {
            for &m in &[0.25, 1.0, 4.0] {
                for &phi in &[0.0, 1.0, PI] {
                    let z = zp(m, phi);
                    let st = bg_state(ell, z, 1, ctl()).unwrap().state;
                    let r = su11_variances_series(&st).unwrap();
                    assert!((r.var_1 - r.bound).abs() < 1e-9);
                    assert!((r.var_2 - r.bound).abs() < 1e-9);
                    assert!(r.minimum_uncertainty);
                    assert!((r.mean_1 - z.re).abs() < 1e-10);
                    assert!((r.mean_2 + z.im).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn bg_mean_s_is_bessel_ratio() {
        for &ell in &[0u32, 1, 2, 20] {
            for &m in &[0.5, 3.0, 8.0] {
                let st = bg_state(ell, c(m), 1, ctl()).unwrap().state;
                let mean_s: f64 = st.iter().map(|(q, a)| f64::from(q.s) * a.norm_sqr()).sum();
                let l = f64::from(ell);
                let ratio = m * bessel_i(l + 1.5, 2.0 * m, ctl()).unwrap() / bessel_i(l + 0.5, 2.0 * m, ctl()).unwrap();
                assert!((mean_s - ratio).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn perelomov_closed_examples() {
        let r = su11_perelomov_variances_closed(0, c(0.0)).unwrap();
        assert!((r.var_1 - r.bound).abs() < 1e-15 && r.minimum_uncertainty);
        let r = su11_perelomov_variances_closed(0, zp(0.5, 3.0 * FRAC_PI_2)).unwrap();
        assert!(r.squeezed_1 && !r.squeezed_2);
        let r = su11_perelomov_variances_closed(0, c(0.5)).unwrap();
        assert!(r.squeezed_2);
        assert!(su11_perelomov_variances_closed(0, c(1.0)).is_err());
    }

    #[test]
    fn perelomov_closed_matches_series() {
        for &ell in &[0u32, 1, 3] {
            for &m in &[0.0, 0.2, 0.5, 0.8] {
                for &phi in &[0.0, 0.9, FRAC_PI_2, PI, 5.0] {
                    let z = zp(m, phi);
                    let st = su11_perelomov_state(ell, z, 1, ctl()).unwrap().state;
                    let s = su11_variances_series(&st).unwrap();
                    let k = su11_perelomov_variances_closed(ell, z).unwrap();
                    for (a, b) in [
                        (s.var_1, k.var_1),
                        (s.var_2, k.var_2),
                        (s.mean_3, k.mean_3),
                        (s.mean_1, k.mean_1),
                        (s.mean_2, k.mean_2),
                    ] {
                        assert!((a - b).abs() < 1e-8, "ℓ={ell} z={z}: {a} vs {b}");
                    }
                }
            }
        }
    }

    #[test]
    fn su2_examples() {
        for &phi in &[0.0, 1.0, 2.5] {
            assert!(su2_variances_closed(2, zp(1.0, phi)).mean_3.abs() < 1e-15);
        }
        let r = su2_variances_closed(2, c(0.0));
        assert!((r.var_1 - 0.25).abs() < 1e-15 && (r.var_2 - 0.25).abs() < 1e-15);
        assert!(r.minimum_uncertainty);
        let m = su2_variances_matrix(2, c(0.0));
        assert!((m.var_1 - 0.25).abs() < 1e-15 && m.minimum_uncertainty);
        assert!(su2_variances_closed(2, c(1.8)).squeezed_1);
        let m = su2_variances_matrix(2, Complex64::new(0.0, 1.8));
        assert!(m.var_2 < m.bound);
        let r = su2_variances_matrix(1, Complex64::new(0.4, -2.0));
        assert_eq!((r.mean_3, r.var_1, r.var_2), (0.0, 0.0, 0.0));
    }

    #[test]
    fn su2_closed_matches_matrix() {
        let z = Complex64::new(0.7, 0.2);
        let (a, b) = (su2_variances_closed(4, z), su2_variances_matrix(4, z));
        assert!((a.var_1 - b.var_1).abs() < 1e-10 && (a.var_2 - b.var_2).abs() < 1e-10);
        for n in 0..=12 {
            for &m in &[0.1, 0.5, 1.0, 1.8, 4.0] {
                for k in 0..8 {
                    let z = zp(m, f64::from(k) * FRAC_PI_4 + 0.1);
                    let (a, b) = (su2_variances_closed(n, z), su2_variances_matrix(n, z));
                    for (x, y) in [
                        (a.mean_1, b.mean_1),
                        (a.mean_2, b.mean_2),
                        (a.mean_3, b.mean_3),
                        (a.var_1, b.var_1),
                        (a.var_2, b.var_2),
                    ] {
                        assert!((x - y).abs() < 1e-10, "n={n} z={z}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn squeeze_map_examples() {
        let mods: Vec<f64> = (1..=30).map(|i| f64::from(i) * 0.1).collect();
        let phases = [0.0, FRAC_PI_4, FRAC_PI_2, PI];
        let g = squeezing_map(Group::SU2, 2, &mods, &phases, Exec::Parallel).unwrap();
        for (i, &m) in mods.iter().enumerate() {
            if (m - 1.0).abs() > 1e-12 {
                assert_eq!(g.values[i][1], Class::None.code(), "|z|={m}");
            }
        }
        let i18 = mods.iter().position(|&m| (m - 1.8).abs() < 1e-12).unwrap();
        assert_eq!(g.values[i18][0], Class::SQ1.code());
        assert_eq!(g.values[i18][2], Class::SQ2.code());
        let g = squeezing_map(Group::SU11, 0, &[0.0, 0.5], &[0.0], Exec::Sequential).unwrap();
        assert_eq!(g.values[0][0], Class::Minimum.code());
        assert!(squeezing_map(Group::SU11, 0, &[1.0], &[0.0], Exec::Sequential).is_err());
    }

    #[test]
    fn squeeze_map_symmetries() {
        let mods: Vec<f64> = (1..=20).map(|i| f64::from(i) * 0.15).collect();
        let phases: Vec<f64> = (0..16).map(|k| f64::from(k) * PI / 8.0 + 0.05).collect();
        for n in [2u32, 3, 4, 7] {
            for &m in &mods {
                for &phi in &phases {
                    let a = su2_variances_closed(n, zp(m, phi));
                    let b = su2_variances_closed(n, zp(m, phi + PI));
                    assert_eq!(a.class(), b.class());
                    let inv = su2_variances_closed(n, zp(1.0 / m, phi));
                    assert!((inv.mean_3 + a.mean_3).abs() < 1e-12);
                    assert_eq!(inv.class(), a.class(), "n={n} |z|={m} φ={phi}");
                }
            }
        }
    }

    #[test]
    fn exec_strategies_agree_on_map() {
        let mods: Vec<f64> = (0..25).map(|i| f64::from(i) * 0.12).collect();
        let phases: Vec<f64> = (0..40).map(|k| f64::from(k) * 0.157).collect();
        let a = squeezing_map(Group::SU2, 3, &mods, &phases, Exec::Sequential).unwrap();
        let b = squeezing_map(Group::SU2, 3, &mods, &phases, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn turning_point_examples() {
        assert_eq!(turning_points(4.0, 0).unwrap(), (0.0, 2.0));
        let (a, b) = turning_points(3.0, 1).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 2f64.sqrt()).abs() < 1e-15);
        assert!(turning_points(2.0 * 2f64.sqrt() * 0.9, 1).is_err());
        assert!(turning_points(-1.0, 0).is_err());
    }

    #[test]
    fn mean_energy_examples() {
        assert_eq!(mean_energy_of_state(&StateVector::ket(0, 0)).unwrap(), 3.0);
        let r = su11_perelomov_variances_closed(0, c(0.0)).unwrap();
        assert_eq!(mean_energy(&r), 3.0);
        // 4⟨L3⟩ = (2ℓ+3) cosh 2|ξ| at z = tanh|ξ|
        let z = xi_to_z(Group::SU11, c(0.5)).unwrap();
        let e = mean_energy(&su11_perelomov_variances_closed(0, z).unwrap());
        assert!((e - 3.0 * 1f64.cosh()).abs() < 1e-13);
        assert!((e - 4.629_241_904_445_731).abs() < 1e-12);
    }

    #[test]
    fn concurrence_examples() {
        let h = 0.5f64.sqrt();
        assert_eq!(concurrence(c(0.6), c(0.8), c(0.0), c(0.0)).unwrap(), 0.0);
        assert_eq!(concurrence(c(0.0), c(h), c(h), c(0.0)).unwrap(), 1.0);
        assert_eq!(concurrence(c(0.5), c(0.5), c(0.5), c(0.5)).unwrap(), 0.0);
        assert!(matches!(concurrence(c(1.0), c(1.0), c(0.0), c(0.0)), Err(Error::Normalization(_))));
    }
}
