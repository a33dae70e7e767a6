//! Time evolution of coherent states. Under H = 4λL3 the label rotates as
//! z(t) = z e^{−4iλt}; the overall phase e^{−iλ(2ℓ+3)t} is dropped since
//! every output here is a density or an expectation value.
//!
//! Rows are reported against τ = 2λt with t carried alongside.

use num_complex::Complex64;

use crate::coherent::{CoherentSpec, Family, ZParam};
use crate::error::{Error, Result};
use crate::grid::{Axis, GridResult};
use crate::observables::su11_variances_series;
use crate::par::Exec;
use crate::specfun::SeriesControl;
use crate::statespace::radial_row;

pub fn evolve_z(z: Complex64, t: f64, lambda: f64) -> Complex64 {
    z * Complex64::from_polar(1.0, -4.0 * lambda * t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionSpec {
    pub family: CoherentSpec,
    pub lambda: f64,
    pub t_grid: Vec<f64>,
    pub r_grid: Vec<f64>,
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.iter().all(|x| x.is_finite()) && xs.windows(2).all(|w| w[0] < w[1])
}

impl EvolutionSpec {
    pub fn new(family: CoherentSpec, lambda: f64, t_grid: Vec<f64>, r_grid: Vec<f64>) -> Result<Self> {
        if family.family == Family::SU2P {
            return Err(Error::domain("SU(2) states span several ℓ and have no radial density"));
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::domain(format!("lambda must be positive, got {lambda}")));
        }
        if t_grid.is_empty() || !strictly_increasing(&t_grid) {
            return Err(Error::domain("t grid must be non-empty and strictly increasing"));
        }
        if r_grid.is_empty() || !strictly_increasing(&r_grid) || r_grid[0] < 0.0 {
            return Err(Error::domain("r grid must be non-empty, non-negative and strictly increasing"));
        }
        Ok(EvolutionSpec {
            family,
            lambda,
            t_grid,
            r_grid,
        })
    }

    pub fn tau_grid(&self) -> Vec<f64> {
        self.t_grid.iter().map(|t| 2.0 * self.lambda * t).collect()
    }

    fn spec_at(&self, t: f64) -> CoherentSpec {
        let z = evolve_z(self.family.z.to_complex(), t, self.lambda);
        self.family.with_z(ZParam::from_complex(z))
    }
}

/// Density |ψ(r; z(t))|² on the t × r grid, one row per time.
pub fn density_evolution(spec: &EvolutionSpec, ctl: SeriesControl, exec: Exec) -> Result<GridResult> {
    let states = exec.try_map(&spec.t_grid, |&t| spec.spec_at(t).build(ctl))?;
    let smax = states.iter().map(|c| c.state.max_s()).max().unwrap_or(0);
    let ell = spec.family.label;
    // radial table shared by every row
    let table = exec.try_map(&spec.r_grid, |&r| radial_row(ell, smax, r))?;
    let rows = exec.map(&states, |c| {
        let coeffs: Vec<(usize, Complex64)> = c.state.iter().map(|(q, a)| (q.s as usize, a)).collect();
        table
            .iter()
            .map(|u| coeffs.iter().map(|&(s, a)| a * u[s]).sum::<Complex64>().norm_sqr())
            .collect::<Vec<f64>>()
    });
    let mut g = GridResult::new_2d(
        Axis::new("tau", spec.tau_grid()),
        Axis::new("r", spec.r_grid.clone()),
        "density",
        rows,
    )?
    .with_row_aux(Axis::new("t", spec.t_grid.clone()))?;
    g.meta("family", family_name(spec.family.family));
    g.meta("ell", ell);
    g.meta("z_modulus", spec.family.z.modulus);
    g.meta("z_phase", spec.family.z.phase);
    g.meta("lambda", spec.lambda);
    g.meta("terms", smax + 1);
    Ok(g)
}

pub(crate) fn family_name(f: Family) -> &'static str {
    match f {
        Family::BG => "bg",
        Family::SU11P => "su11-perelomov",
        Family::SU2P => "su2-perelomov",
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub mean_1: f64,
    pub mean_2: f64,
}

/// Series-route ⟨L1⟩, ⟨L2⟩ along the BG orbit. With z = |z|e^{−iφ} this is
/// (|z|cos(φ + 4λt), |z|sin(φ + 4λt)).
pub fn quadrature_trajectory(spec: &EvolutionSpec, ctl: SeriesControl, exec: Exec) -> Result<Vec<TrajectoryPoint>> {
    if spec.family.family != Family::BG {
        return Err(Error::domain("quadrature trajectories are defined for the BG family"));
    }
    exec.try_map(&spec.t_grid, |&t| {
        let state = spec.spec_at(t).build(ctl)?.state;
        let rep = su11_variances_series(&state)?;
        Ok(TrajectoryPoint {
            t,
            mean_1: rep.mean_1,
            mean_2: rep.mean_2,
        })
    })
}

/// r of the row maximum for each row of a 2D density grid.
pub fn density_peaks(grid: &GridResult) -> Result<Vec<f64>> {
    let col = grid
        .col_axis
        .as_ref()
        .ok_or_else(|| Error::domain("density peaks need a 2D grid"))?;
    Ok(grid
        .values
        .iter()
        .map(|row| {
            let mut best = 0;
            for (j, v) in row.iter().enumerate() {
                if *v > row[best] {
                    best = j;
                }
            }
            col.values[best]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observables::{expect_l3, mean_energy, su11_perelomov_variances_closed, turning_points};
    use crate::quad::trapezoid;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    fn spec(family: Family, modulus: f64, phase: f64, lambda: f64, t: Vec<f64>) -> EvolutionSpec {
        let cs = CoherentSpec::new(family, 0, ZParam::new(modulus, phase).unwrap(), None).unwrap();
        EvolutionSpec::new(cs, lambda, t, linspace(0.0, 8.0, 801)).unwrap()
    }

    #[test]
    fn evolve_z_examples() {
        let z = Complex64::new(0.3, -1.1);
        assert_eq!(evolve_z(z, 0.0, 2.0), z);
        assert!((evolve_z(z, FRAC_PI_2 / 1.5, 1.5) - z).norm() < 1e-15);
        assert!((evolve_z(Complex64::new(1.0, 0.0), FRAC_PI_4 / 0.7, 0.7) + 1.0).norm() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        let cs = CoherentSpec::new(Family::BG, 0, ZParam::new(1.0, 0.0).unwrap(), None).unwrap();
        assert!(EvolutionSpec::new(cs, 0.0, vec![0.0], vec![1.0]).is_err());
        assert!(EvolutionSpec::new(cs, 1.0, vec![1.0, 0.5], vec![1.0]).is_err());
        assert!(EvolutionSpec::new(cs, 1.0, vec![0.0], vec![2.0, 2.0]).is_err());
        assert!(EvolutionSpec::new(cs, 1.0, vec![0.0], vec![-1.0, 2.0]).is_err());
        let su2 = CoherentSpec::new(Family::SU2P, 2, ZParam::new(1.0, 0.0).unwrap(), None).unwrap();
        assert!(EvolutionSpec::new(su2, 1.0, vec![0.0], vec![1.0]).is_err());
    }

    #[test]
    fn bg_density_is_periodic_in_tau() {
        // τ = 0 and τ = 2π, i.e. t = 0 and t = π/λ
        let lambda = 1.3;
        let g = density_evolution(&spec(Family::BG, 3.0, 0.0, lambda, vec![0.0, PI / lambda]), ctl(), Exec::Parallel).unwrap();
        let diff = g.values[0].iter().zip(&g.values[1]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "{diff}");
        assert!((g.row_axis.values[1] - 2.0 * PI).abs() < 1e-14);
    }

    #[test]
    fn rows_integrate_to_one() {
        let t = linspace(0.0, PI / 2.0, 9);
        for fam in [Family::BG, Family::SU11P] {
            let m = if fam == Family::BG { 2.0 } else { 0.5 };
            let sp = spec(fam, m, 0.3, 0.5, t.clone());
            let g = density_evolution(&sp, ctl(), Exec::Parallel).unwrap();
            for row in &g.values {
                assert!((trapezoid(&sp.r_grid, row) - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn perelomov_peak_goes_out_and_back() {
        // z(t) returns to z at τ = π, so the excursion peaks at τ = π/2
        let t = linspace(0.0, FRAC_PI_2, 21);
        let g = density_evolution(&spec(Family::SU11P, 0.5, 0.0, 1.0, t), ctl(), Exec::Parallel).unwrap();
        let peaks = density_peaks(&g).unwrap();
        let mid = peaks[10];
        assert!(peaks[0] < 1.0 && peaks[20] < 1.0);
        assert!(peaks[..10].windows(2).all(|w| w[0] <= w[1]));
        assert!(mid > 1.5 * peaks[0], "{peaks:?}");
        let e = mean_energy(&su11_perelomov_variances_closed(0, Complex64::new(0.5, 0.0)).unwrap());
        let (_, outer) = turning_points(e, 0).unwrap();
        assert!(mid < outer);
    }

    #[test]
    fn exec_strategies_agree() {
        let sp = spec(Family::BG, 1.5, 1.0, 1.0, linspace(0.0, 1.0, 7));
        let a = density_evolution(&sp, ctl(), Exec::Sequential).unwrap();
        let b = density_evolution(&sp, ctl(), Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bg_trajectory_is_circular() {
        let lambda = 0.8;
        let m = 2.5;
        let phi = 0.4;
        let t = linspace(0.0, 2.0, 17);
        let sp = spec(Family::BG, m, phi, lambda, t);
        let traj = quadrature_trajectory(&sp, ctl(), Exec::Parallel).unwrap();
        for p in &traj {
            let arg = phi + 4.0 * lambda * p.t;
            assert!((p.mean_1 - m * arg.cos()).abs() < 1e-10);
            assert!((p.mean_2 - m * arg.sin()).abs() < 1e-10);
            assert!((p.mean_1.hypot(p.mean_2) - m).abs() < 1e-10);
        }
        let half = quadrature_trajectory(&spec(Family::BG, m, 0.0, lambda, vec![0.0, FRAC_PI_4 / lambda]), ctl(), Exec::Sequential).unwrap();
        assert!((half[0].mean_1 - m).abs() < 1e-12 && half[0].mean_2.abs() < 1e-12);
        assert!((half[1].mean_1 + m).abs() < 1e-10);
        assert!(quadrature_trajectory(&spec(Family::SU11P, 0.5, 0.0, 1.0, vec![0.0]), ctl(), Exec::Sequential).is_err());
    }

    #[test]
    fn bg_energy_is_conserved() {
        let sp = spec(Family::BG, 2.0, 0.0, 1.0, linspace(0.0, 1.0, 5));
        let e0 = expect_l3(&sp.spec_at(0.0).build(ctl()).unwrap().state).unwrap();
        for &t in &sp.t_grid {
            let e = expect_l3(&sp.spec_at(t).build(ctl()).unwrap().state).unwrap();
            assert!((e - e0).abs() < 1e-12);
        }
    }
}
