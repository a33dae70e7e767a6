//! Quantum-number lattice, hierarchy enumeration, sparse state vectors and
//! position-representation wavefunctions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::specfun::{self, lgam, SeriesControl};

/// Amplitudes with modulus below this are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// Lattice point (s, ℓ). The principal number n = 2s + ℓ is derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QNums {
    pub s: u32,
    pub ell: u32,
}

impl QNums {
    pub const fn new(s: u32, ell: u32) -> Self {
        QNums { s, ell }
    }

    /// The ket |n, ℓ⟩_e of the energy configuration.
    pub fn from_energy(n: u32, ell: u32) -> Result<Self> {
        if ell > n || !(n - ell).is_multiple_of(2) {
            return Err(Error::domain(format!("|{n},{ell}>_e is not on the lattice")));
        }
        Ok(QNums::new((n - ell) / 2, ell))
    }

    pub fn n(self) -> u32 {
        2 * self.s + self.ell
    }
}

// Order by (ℓ, s) so single-ℓ blocks are contiguous.
impl Ord for QNums {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ell, self.s).cmp(&(other.ell, other.s))
    }
}

impl PartialOrd for QNums {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QNums {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|s={}, l={}>", self.s, self.ell)
    }
}

/// 4s + 2ℓ + 3.
pub fn energy(q: QNums) -> f64 {
    f64::from(4 * q.s + 2 * q.ell + 3)
}

/// Number of lattice points with 2s + ℓ = n.
pub fn degeneracy(n: u32) -> u32 {
    n / 2 + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HierarchyKind {
    /// Fixed ℓ.
    Vertical(u32),
    /// Fixed n.
    Horizontal(u32),
    /// Fixed s + ℓ = 2j_C.
    Diagonal(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HierarchyId {
    pub kind: HierarchyKind,
    /// Number of states kept in a vertical hierarchy (s = 0..truncation−1).
    pub truncation: Option<u32>,
}

impl HierarchyId {
    pub fn vertical(ell: u32, truncation: u32) -> Self {
        HierarchyId {
            kind: HierarchyKind::Vertical(ell),
            truncation: Some(truncation),
        }
    }

    pub fn horizontal(n: u32) -> Self {
        HierarchyId {
            kind: HierarchyKind::Horizontal(n),
            truncation: None,
        }
    }

    pub fn diagonal(two_jc: u32) -> Self {
        HierarchyId {
            kind: HierarchyKind::Diagonal(two_jc),
            truncation: None,
        }
    }
}

pub fn enumerate_hierarchy(h: HierarchyId) -> Result<Vec<QNums>> {
    match h.kind {
        HierarchyKind::Vertical(ell) => {
            let t = h.truncation.ok_or(Error::MissingTruncation)?;
            Ok((0..t).map(|s| QNums::new(s, ell)).collect())
        }
        HierarchyKind::Horizontal(n) => Ok((0..=n / 2).map(|s| QNums::new(s, n - 2 * s)).collect()),
        HierarchyKind::Diagonal(m) => Ok((0..=m).map(|ell| QNums::new(m - ell, ell)).collect()),
    }
}

/// Sparse superposition of lattice kets.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateVector {
    amps: BTreeMap<QNums, Complex64>,
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector::default()
    }

    pub fn ket(s: u32, ell: u32) -> Self {
        let mut v = StateVector::zero();
        v.amps.insert(QNums::new(s, ell), Complex64::new(1.0, 0.0));
        v
    }

    /// Builds a state from (ket, amplitude) pairs; repeated kets add up.
    pub fn from_pairs<I: IntoIterator<Item = (QNums, Complex64)>>(pairs: I) -> Self {
        let mut v = StateVector::zero();
        for (q, c) in pairs {
            v.add_to(q, c);
        }
        v.prune();
        v
    }

    pub fn add_to(&mut self, q: QNums, c: Complex64) {
        *self.amps.entry(q).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn prune(&mut self) {
        self.amps.retain(|_, c| c.norm() >= PRUNE_TOL);
    }

    pub fn get(&self, q: QNums) -> Complex64 {
        self.amps.get(&q).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (QNums, Complex64)> + '_ {
        self.amps.iter().map(|(q, c)| (*q, *c))
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: Complex64) -> Self {
        StateVector::from_pairs(self.iter().map(|(q, c)| (q, c * k)))
    }

    pub fn add(&self, other: &StateVector) -> Self {
        StateVector::from_pairs(self.iter().chain(other.iter()))
    }

    pub fn sub(&self, other: &StateVector) -> Self {
        StateVector::from_pairs(self.iter().chain(other.iter().map(|(q, c)| (q, -c))))
    }

    /// Largest entrywise modulus difference.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .keys()
            .chain(other.amps.keys())
            .map(|q| (self.get(*q) - other.get(*q)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_diff(other) <= tol
    }

    /// The common ℓ of all kets; `None` for the zero state.
    pub fn single_ell(&self) -> Result<Option<u32>> {
        let mut keys = self.amps.keys();
        let Some(first) = keys.next() else {
            return Ok(None);
        };
        match keys.find(|q| q.ell != first.ell) {
            Some(q) => Err(Error::MixedEll {
                first: first.ell,
                second: q.ell,
            }),
            None => Ok(Some(first.ell)),
        }
    }

    pub fn max_s(&self) -> u32 {
        self.amps.keys().map(|q| q.s).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&StateJson::from(self)).expect("state serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: StateJson =
            serde_json::from_str(text).map_err(|e| Error::domain(format!("bad state JSON: {e}")))?;
        Ok(parsed.into())
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    s: u32,
    ell: u32,
    re: f64,
    im: f64,
}

/// Wire form `{"entries": [{"s", "ell", "re", "im"}]}`, sorted by (ℓ, s).
#[derive(Serialize, Deserialize)]
pub struct StateJson {
    entries: Vec<EntryJson>,
}

impl From<&StateVector> for StateJson {
    fn from(v: &StateVector) -> Self {
        StateJson {
            entries: v
                .iter()
                .map(|(q, c)| EntryJson {
                    s: q.s,
                    ell: q.ell,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

impl From<StateJson> for StateVector {
    fn from(j: StateJson) -> Self {
        StateVector::from_pairs(
            j.entries
                .into_iter()
                .map(|e| (QNums::new(e.s, e.ell), Complex64::new(e.re, e.im))),
        )
    }
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        StateJson::from(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        StateJson::deserialize(de).map(Into::into)
    }
}

/// Σ conj(u) v over shared kets.
pub fn inner_product(u: &StateVector, v: &StateVector) -> Complex64 {
    u.iter().map(|(q, c)| c.conj() * v.get(q)).sum()
}

fn check_r(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(format!("radius must be finite and non-negative, got {r}")));
    }
    Ok(())
}

/// Normalized u_{sℓ}(r) = √(2Γ(s+1)/Γ(s+ℓ+3/2)) r^{ℓ+1} e^{−r²/2} L_s^{(ℓ+1/2)}(r²).
pub fn radial_wavefunction(q: QNums, r: f64) -> Result<f64> {
    check_r(r)?;
    if r == 0.0 {
        return Ok(0.0);
    }
    let s = f64::from(q.s);
    let l = f64::from(q.ell);
    let log_pref = 0.5 * (2f64.ln() + lgam(s + 1.0) - lgam(s + l + 1.5)) + (l + 1.0) * r.ln() - 0.5 * r * r;
    Ok(log_pref.exp() * specfun::assoc_laguerre(q.s, l + 0.5, r * r))
}

/// u_{0ℓ}(r), …, u_{smax,ℓ}(r) from the normalized Laguerre recurrence.
pub fn radial_row(ell: u32, smax: u32, r: f64) -> Result<Vec<f64>> {
    check_r(r)?;
    let n = smax as usize + 1;
    if r == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let l = f64::from(ell);
    let alpha = l + 0.5;
    let x = r * r;
    let mut out = Vec::with_capacity(n);
    let first = (0.5 * 2f64.ln() + (l + 1.0) * r.ln() - 0.5 * x - 0.5 * lgam(l + 1.5)).exp();
    out.push(first);
    let mut prev = 0.0;
    let mut cur = first;
    for k in 0..smax {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k * (k + alpha)).sqrt() * prev)
            / ((k + 1.0) * (k + 1.0 + alpha)).sqrt();
        out.push(next);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Θ_{ℓ,0}(θ) = √((2ℓ+1)/2) P_ℓ(cos θ).
pub fn angular_wavefunction(ell: u32, theta: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::domain(format!("theta must lie in [0, pi], got {theta}")));
    }
    let norm = ((2.0 * f64::from(ell) + 1.0) / 2.0).sqrt();
    Ok(norm * specfun::legendre_p(ell, theta.cos().clamp(-1.0, 1.0))?)
}

/// Σ_s c_s u_{sℓ}(r) on a grid; the state must carry a single ℓ.
pub fn evaluate_amplitude(state: &StateVector, r_grid: &[f64], exec: Exec) -> Result<Vec<Complex64>> {
    let Some(ell) = state.single_ell()? else {
        return Ok(vec![Complex64::new(0.0, 0.0); r_grid.len()]);
    };
    let smax = state.max_s();
    let coeffs: Vec<(usize, Complex64)> = state.iter().map(|(q, c)| (q.s as usize, c)).collect();
    exec.try_map(r_grid, |&r| {
        let row = radial_row(ell, smax, r)?;
        Ok(coeffs.iter().map(|&(s, c)| c * row[s]).sum())
    })
}

/// |Σ_s c_s u_{sℓ}(r)|² on a grid.
pub fn evaluate_density(state: &StateVector, r_grid: &[f64], exec: Exec) -> Result<Vec<f64>> {
    Ok(evaluate_amplitude(state, r_grid, exec)?
        .into_iter()
        .map(|a| a.norm_sqr())
        .collect())
}

/// General solution of the radial equation with constants γ, δ (λ = 1).
pub fn general_u(e: f64, ell: u32, gamma: f64, delta: f64, r: f64, ctl: SeriesControl) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("general_u needs r > 0, got {r}")));
    }
    let l = f64::from(ell);
    let x = r * r;
    let mut inner = 0.0;
    if gamma != 0.0 {
        inner += gamma * specfun::hyp1f1(0.5 * l + 0.75 - 0.5 * e, l + 1.5, x, ctl)?;
    }
    if delta != 0.0 {
        inner += delta * r.powf(-(2.0 * l + 1.0)) * specfun::hyp1f1(-0.5 * l + 0.25 - 0.5 * e, 0.5 - l, x, ctl)?;
    }
    Ok(r.powf(l + 1.0) * (-0.5 * x).exp() * inner)
}

/// Residual −u″ + [ℓ(ℓ+1)/r² + r² − 2E]u of the general solution, with u″
/// from a central difference of step 1e-4.
pub fn general_u_residual(e: f64, ell: u32, gamma: f64, delta: f64, r: f64, ctl: SeriesControl) -> Result<f64> {
    const H: f64 = 1e-4;
    if !(r > H) {
        return Err(Error::domain(format!("general_u_residual needs r > {H}, got {r}")));
    }
    let u = |x| general_u(e, ell, gamma, delta, x, ctl);
    let (um, u0, up) = (u(r - H)?, u(r)?, u(r + H)?);
    let d2 = (up - 2.0 * u0 + um) / (H * H);
    let l = f64::from(ell);
    Ok(-d2 + (l * (l + 1.0) / (r * r) + r * r - 2.0 * e) * u0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn energy_examples() {
        assert_eq!(energy(QNums::new(0, 0)), 3.0);
        assert_eq!(energy(QNums::new(1, 0)), 7.0);
        assert_eq!(energy(QNums::new(0, 3)), 9.0);
    }

    #[test]
    fn energy_is_twice_shifted_n() {
        for s in 0..30 {
            for ell in 0..30 {
                let q = QNums::new(s, ell);
                assert_eq!(energy(q), 2.0 * (f64::from(q.n()) + 1.5));
            }
        }
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(degeneracy(0), 1);
        assert_eq!(degeneracy(2), 2);
        assert_eq!(degeneracy(5), 3);
    }

    #[test]
    fn hierarchy_examples() {
        let h = enumerate_hierarchy(HierarchyId::horizontal(4)).unwrap();
        assert_eq!(h, vec![QNums::new(0, 4), QNums::new(1, 2), QNums::new(2, 0)]);
        let h = enumerate_hierarchy(HierarchyId::horizontal(1)).unwrap();
        assert_eq!(h, vec![QNums::new(0, 1)]);
        let h = enumerate_hierarchy(HierarchyId::diagonal(2)).unwrap();
        assert_eq!(h, vec![QNums::new(2, 0), QNums::new(1, 1), QNums::new(0, 2)]);
        let h = enumerate_hierarchy(HierarchyId::vertical(3, 3)).unwrap();
        assert_eq!(h, vec![QNums::new(0, 3), QNums::new(1, 3), QNums::new(2, 3)]);
        let missing = HierarchyId {
            kind: HierarchyKind::Vertical(0),
            truncation: None,
        };
        assert_eq!(enumerate_hierarchy(missing), Err(Error::MissingTruncation));
    }

    #[test]
    fn horizontal_length_is_degeneracy() {
        for n in 0..=40 {
            let h = enumerate_hierarchy(HierarchyId::horizontal(n)).unwrap();
            assert_eq!(h.len() as u32, degeneracy(n));
            assert!(h.iter().all(|q| q.n() == n));
        }
    }

    #[test]
    fn from_energy_roundtrip() {
        assert_eq!(QNums::from_energy(3, 1).unwrap(), QNums::new(1, 1));
        assert!(QNums::from_energy(3, 2).is_err());
        assert!(QNums::from_energy(2, 4).is_err());
    }

    #[test]
    fn radial_examples() {
        let u = radial_wavefunction(QNums::new(0, 0), 1.0).unwrap();
        assert!((u - 0.911_161_344_022_665_1).abs() < 1e-14);
        let g32 = std::f64::consts::PI.sqrt() / 2.0;
        assert!((u - (2.0 / g32).sqrt() * (-0.5f64).exp()).abs() < 1e-14);
        // leading behaviour ∝ r near the origin
        let a = radial_wavefunction(QNums::new(0, 0), 1e-6).unwrap();
        let b = radial_wavefunction(QNums::new(0, 0), 2e-6).unwrap();
        assert!((b / a - 2.0).abs() < 1e-9);
        let mut changes = 0;
        let mut prev = radial_wavefunction(QNums::new(1, 0), 1e-3).unwrap();
        for i in 2..10_000 {
            let cur = radial_wavefunction(QNums::new(1, 0), f64::from(i) * 1e-3).unwrap();
            if cur.signum() != prev.signum() && cur != 0.0 {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn recurrence_row_matches_direct_formula() {
        for &ell in &[0u32, 1, 5, 20] {
            for i in 1..60 {
                let r = f64::from(i) * 0.1;
                let row = radial_row(ell, 30, r).unwrap();
                for s in 0..=30 {
                    let direct = radial_wavefunction(QNums::new(s, ell), r).unwrap();
                    assert!((row[s as usize] - direct).abs() < 1e-10, "ℓ={ell} s={s} r={r}");
                }
            }
        }
    }

    #[test]
    fn angular_examples() {
        assert!((angular_wavefunction(0, 1.234).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(angular_wavefunction(1, std::f64::consts::FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((angular_wavefunction(2, 0.0).unwrap() - 2.5f64.sqrt()).abs() < 1e-14);
        assert!(angular_wavefunction(2, 4.0).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let k = StateVector::ket;
        assert_eq!(inner_product(&k(0, 0), &k(0, 0)), c(1.0));
        assert_eq!(inner_product(&k(0, 1), &k(1, 1)), c(0.0));
        assert_eq!(inner_product(&k(1, 1), &k(0, 3)), c(0.0));
    }

    #[test]
    fn density_examples() {
        let grid: Vec<f64> = (1..=12_000).map(|i| f64::from(i) * 1e-3).collect();
        let d = evaluate_density(&StateVector::ket(0, 0), &grid, Exec::Sequential).unwrap();
        let imax = (0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        assert!((grid[imax] - 1.0).abs() < 1.5e-3);

        let h = 0.5f64.sqrt();
        let sup = StateVector::from_pairs([(QNums::new(0, 0), c(h)), (QNums::new(1, 0), c(h))]);
        let d = evaluate_density(&sup, &grid, Exec::Parallel).unwrap();
        for (i, &r) in grid.iter().enumerate().step_by(97) {
            let u0 = radial_wavefunction(QNums::new(0, 0), r).unwrap();
            let u1 = radial_wavefunction(QNums::new(1, 0), r).unwrap();
            assert!((d[i] - 0.5 * (u0 + u1).powi(2)).abs() < 1e-13);
        }
        let mut xs = vec![0.0];
        xs.extend_from_slice(&grid);
        let mut ys = vec![0.0];
        ys.extend_from_slice(&d);
        assert!((crate::quad::trapezoid(&xs, &ys) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn mixed_ell_density_rejected() {
        let mixed = StateVector::ket(0, 0).add(&StateVector::ket(0, 1));
        assert!(matches!(
            evaluate_density(&mixed, &[1.0], Exec::Sequential),
            Err(Error::MixedEll { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let ctl = SeriesControl::default();
        assert!(general_u_residual(1.5, 0, 1.0, 0.0, 1.0, ctl).unwrap().abs() < 1e-5);
        assert!(general_u_residual(2.7, 1, 1.0, 0.0, 2.0, ctl).unwrap().abs() < 1e-5);
        assert!(general_u_residual(3.5, 0, 0.0, 1.0, 1.5, ctl).unwrap().abs() < 1e-5);
    }

    #[test]
    fn quantized_general_u_is_proportional_to_radial() {
        let ctl = SeriesControl::default();
        for &(s, ell) in &[(0u32, 0u32), (1, 0), (2, 1), (3, 2), (4, 5)] {
            let e = f64::from(2 * s + ell) + 1.5;
            let ratio = |r: f64| {
                general_u(e, ell, 1.0, 0.0, r, ctl).unwrap() / radial_wavefunction(QNums::new(s, ell), r).unwrap()
            };
            let r0 = ratio(0.5);
            for i in 0..=50 {
                let r = 0.5 + 2.5 * f64::from(i) / 50.0;
                let u = radial_wavefunction(QNums::new(s, ell), r).unwrap();
                if u.abs() < 1e-6 {
                    continue;
                }
                assert!((ratio(r) / r0 - 1.0).abs() < 1e-9, "s={s} ℓ={ell} r={r}");
            }
        }
    }

    #[test]
    fn json_shape_sorted_by_ell_then_s() {
        let v = StateVector::from_pairs([
            (QNums::new(0, 2), Complex64::new(0.5, -0.5)),
            (QNums::new(3, 0), c(0.5)),
            (QNums::new(1, 0), c(0.5)),
        ]);
        let text = v.to_json();
        assert_eq!(
            text,
            r#"{"entries":[{"s":1,"ell":0,"re":0.5,"im":0.0},{"s":3,"ell":0,"re":0.5,"im":0.0},{"s":0,"ell":2,"re":0.5,"im":-0.5}]}"#
        );
        assert_eq!(StateVector::from_json(&text).unwrap(), v);
    }

    #[test]
    fn pruning_drops_tiny_amplitudes() {
        let v = StateVector::from_pairs([(QNums::new(0, 0), c(1e-16)), (QNums::new(1, 0), c(1.0))]);
        assert_eq!(v.len(), 1);
        let z = StateVector::ket(2, 2).sub(&StateVector::ket(2, 2));
        assert!(z.is_zero());
    }
}
