//! Ladder operators on the (s, ℓ) lattice, commutator checks, finite su(2)
//! representation matrices and Dicke-like bases.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::statespace::{degeneracy, QNums, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OpKind {
    APlus,
    AMinus,
    BPlus,
    BMinus,
    LPlus,
    LMinus,
    L3,
    JPlus,
    JMinus,
    J3,
    CPlus,
    CMinus,
    C3,
    Ns,
    Nell,
}

/// Result of an operator on a single ket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KetImage {
    Zero,
    Term(f64, QNums),
}

impl OpKind {
    pub const ALL: [OpKind; 15] = [
        OpKind::APlus,
        OpKind::AMinus,
        OpKind::BPlus,
        OpKind::BMinus,
        OpKind::LPlus,
        OpKind::LMinus,
        OpKind::L3,
        OpKind::JPlus,
        OpKind::JMinus,
        OpKind::J3,
        OpKind::CPlus,
        OpKind::CMinus,
        OpKind::C3,
        OpKind::Ns,
        OpKind::Nell,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            OpKind::APlus => "a+",
            OpKind::AMinus => "a-",
            OpKind::BPlus => "b+",
            OpKind::BMinus => "b-",
            OpKind::LPlus => "L+",
            OpKind::LMinus => "L-",
            OpKind::L3 => "L3",
            OpKind::JPlus => "J+",
            OpKind::JMinus => "J-",
            OpKind::J3 => "J3",
            OpKind::CPlus => "C+",
            OpKind::CMinus => "C-",
            OpKind::C3 => "C3",
            OpKind::Ns => "Ns",
            OpKind::Nell => "Nl",
        }
    }

    /// The adjoint partner (self for the diagonal operators).
    pub fn adjoint(self) -> OpKind {
        use OpKind::*;
        match self {
            APlus => AMinus,
            AMinus => APlus,
            BPlus => BMinus,
            BMinus => BPlus,
            LPlus => LMinus,
            LMinus => LPlus,
            JPlus => JMinus,
            JMinus => JPlus,
            CPlus => CMinus,
            CMinus => CPlus,
            d => d,
        }
    }

    /// Single-ket action.
    pub fn on_ket(self, q: QNums) -> Result<KetImage> {
        use OpKind::*;
        let s = f64::from(q.s);
        let l = f64::from(q.ell);
        let unphysical = || Err(Error::Unphysical { op: self, ket: q });
        let diag = |v: f64| Ok(KetImage::Term(v, q));
        let shift = |c: f64, ds: i64, dl: i64| {
            if c == 0.0 {
                return Ok(KetImage::Zero);
            }
            let ns = i64::from(q.s) + ds;
            let nl = i64::from(q.ell) + dl;
            Ok(KetImage::Term(c, QNums::new(ns as u32, nl as u32)))
        };
        match self {
            APlus if q.ell == 0 => unphysical(),
            APlus => shift((s + 1.0).sqrt(), 1, -1),
            AMinus => shift(s.sqrt(), -1, 1),
            BPlus => shift((s + l + 1.5).sqrt(), 0, 1),
            BMinus if q.ell == 0 => unphysical(),
            BMinus => shift((s + l + 0.5).sqrt(), 0, -1),
            LPlus => shift(((s + 1.0) * (s + l + 1.5)).sqrt(), 1, 0),
            LMinus => shift((s * (s + l + 0.5)).sqrt(), -1, 0),
            L3 => diag(s + (2.0 * l + 3.0) / 4.0),
            JPlus if q.ell < 2 => unphysical(),
            JPlus => shift(((s + 1.0) * (s + l + 0.5)).sqrt(), 1, -2),
            JMinus => shift((s * (s + l + 1.5)).sqrt(), -1, 2),
            J3 => diag(-(2.0 * l + 1.0) / 4.0),
            CPlus => shift(((s + 1.0) * l).sqrt(), 1, -1),
            CMinus => shift((s * (l + 1.0)).sqrt(), -1, 1),
            C3 => diag(0.5 * (s - l)),
            Ns => diag(s),
            Nell => diag(s + l + 0.5),
        }
    }
}

impl fmt::Display for OpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for OpKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpKind::ALL
            .into_iter()
            .find(|k| k.symbol().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::domain(format!("unknown operator {s:?}")))
    }
}

/// Linear extension of [`OpKind::on_ket`], pruned.
pub fn apply(kind: OpKind, state: &StateVector) -> Result<StateVector> {
    let mut pairs = Vec::with_capacity(state.len());
    for (q, c) in state.iter() {
        if let KetImage::Term(k, target) = kind.on_ket(q)? {
            pairs.push((target, c * k));
        }
    }
    Ok(StateVector::from_pairs(pairs))
}

/// Applies the product ops[0]·ops[1]·…, rightmost first.
pub fn apply_product(ops: &[OpKind], state: &StateVector) -> Result<StateVector> {
    ops.iter().rev().try_fold(state.clone(), |acc, &k| apply(k, &acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Term {
    Identity,
    Op(OpKind),
}

/// Evaluates Σ c_i T_i on a state.
pub fn apply_combination(terms: &[(f64, Term)], state: &StateVector) -> Result<StateVector> {
    let mut out = StateVector::zero();
    for &(c, t) in terms {
        let img = match t {
            Term::Identity => state.clone(),
            Term::Op(k) => apply(k, state)?,
        };
        out = out.add(&img.scale(Complex64::new(c, 0.0)));
    }
    Ok(out)
}

/// max over kets of ‖([A, B] − expected)|ket⟩‖.
pub fn commutator_residual(a: OpKind, b: OpKind, expected: &[(f64, Term)], basis: &[QNums]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &q in basis {
        let ket = StateVector::from_pairs([(q, Complex64::new(1.0, 0.0))]);
        let ab = apply(a, &apply(b, &ket)?)?;
        let ba = apply(b, &apply(a, &ket)?)?;
        let lhs = ab.sub(&ba);
        let rhs = apply_combination(expected, &ket)?;
        worst = worst.max(lhs.sub(&rhs).norm());
    }
    Ok(worst)
}

/// One commutation relation [a, b] = Σ c_i T_i together with the smallest ℓ
/// for which both orderings stay on the physical lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub group: &'static str,
    pub a: OpKind,
    pub b: OpKind,
    pub expected: Vec<(f64, Term)>,
    pub min_ell: u32,
}

impl Relation {
    pub fn label(&self) -> String {
        let rhs = if self.expected.is_empty() {
            "0".to_string()
        } else {
            self.expected
                .iter()
                .map(|(c, t)| {
                    let name = match t {
                        Term::Identity => "I".to_string(),
                        Term::Op(k) => k.symbol().to_string(),
                    };
                    match *c {
                        1.0 => name,
                        -1.0 => format!("-{name}"),
                        c => format!("{c}{name}"),
                    }
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("[{},{}] = {}", self.a, self.b, rhs)
    }

    /// Residual over s ∈ [s_lo, s_hi], ℓ ∈ [max(ℓ_lo, min_ell), ℓ_hi].
    pub fn residual_on_box(&self, s_lo: u32, s_hi: u32, l_lo: u32, l_hi: u32) -> Result<f64> {
        let basis: Vec<QNums> = (l_lo.max(self.min_ell)..=l_hi)
            .flat_map(|l| (s_lo..=s_hi).map(move |s| QNums::new(s, l)))
            .collect();
        commutator_residual(self.a, self.b, &self.expected, &basis)
    }
}

/// Every commutation relation the library verifies.
pub fn relation_table() -> Vec<Relation> {
    use OpKind::*;
    use Term::{Identity as I, Op};
    let rel = |group, a, b, expected: Vec<(f64, Term)>, min_ell| Relation {
        group,
        a,
        b,
        expected,
        min_ell,
    };
    vec![
        rel("boson-a", AMinus, APlus, vec![(1.0, I)], 1),
        rel("boson-a", Ns, APlus, vec![(1.0, Op(APlus))], 1),
        rel("boson-a", Ns, AMinus, vec![(-1.0, Op(AMinus))], 0),
        rel("boson-b", BMinus, BPlus, vec![(1.0, I)], 1),
        rel("boson-b", Nell, BPlus, vec![(1.0, Op(BPlus))], 0),
        rel("boson-b", Nell, BMinus, vec![(-1.0, Op(BMinus))], 1),
        rel("su11", L3, LPlus, vec![(1.0, Op(LPlus))], 0),
        rel("su11", L3, LMinus, vec![(-1.0, Op(LMinus))], 0),
        rel("su11", LMinus, LPlus, vec![(2.0, Op(L3))], 0),
        rel("su11-mixed", AMinus, BMinus, vec![], 1),
        rel("su11-mixed", APlus, BPlus, vec![], 1),
        rel("su11-mixed", AMinus, BPlus, vec![], 0),
        rel("su11-mixed", BMinus, APlus, vec![], 2),
        rel("su11-mixed", LPlus, APlus, vec![], 1),
        rel("su11-mixed", LMinus, AMinus, vec![], 0),
        rel("su11-mixed", LPlus, BPlus, vec![], 0),
        rel("su11-mixed", LMinus, BMinus, vec![], 1),
        rel("su11-mixed", LPlus, AMinus, vec![(-1.0, Op(BPlus))], 0),
        rel("su11-mixed", LMinus, APlus, vec![(1.0, Op(BMinus))], 1),
        rel("su11-mixed", LPlus, BMinus, vec![(-1.0, Op(APlus))], 1),
        rel("su11-mixed", LMinus, BPlus, vec![(1.0, Op(AMinus))], 0),
        rel("su11-mixed", L3, APlus, vec![(0.5, Op(APlus))], 1),
        rel("su11-mixed", L3, AMinus, vec![(-0.5, Op(AMinus))], 0),
        rel("su11-mixed", L3, BPlus, vec![(0.5, Op(BPlus))], 0),
        rel("su11-mixed", L3, BMinus, vec![(-0.5, Op(BMinus))], 1),
        rel("su2", JMinus, JPlus, vec![(-2.0, Op(J3))], 2),
        rel("su2", J3, JPlus, vec![(1.0, Op(JPlus))], 2),
        rel("su2", J3, JMinus, vec![(-1.0, Op(JMinus))], 0),
        rel("su2-mixed", JPlus, APlus, vec![], 3),
        rel("su2-mixed", JMinus, AMinus, vec![], 0),
        rel("su2-mixed", JPlus, BMinus, vec![], 3),
        rel("su2-mixed", JMinus, BPlus, vec![], 0),
        rel("su2-mixed", JPlus, AMinus, vec![(-1.0, Op(BMinus))], 2),
        rel("su2-mixed", JMinus, APlus, vec![(1.0, Op(BPlus))], 1),
        rel("su2-mixed", JPlus, BPlus, vec![(1.0, Op(APlus))], 2),
        rel("su2-mixed", JMinus, BMinus, vec![(-1.0, Op(AMinus))], 1),
        rel("su2-mixed", J3, APlus, vec![(0.5, Op(APlus))], 1),
        rel("su2-mixed", J3, AMinus, vec![(-0.5, Op(AMinus))], 0),
        rel("su2-mixed", J3, BMinus, vec![(0.5, Op(BMinus))], 1),
        rel("su2-mixed", J3, BPlus, vec![(-0.5, Op(BPlus))], 0),
        rel("c-algebra", C3, CPlus, vec![(1.0, Op(CPlus))], 0),
        rel("c-algebra", C3, CMinus, vec![(-1.0, Op(CMinus))], 0),
        rel("c-algebra", CMinus, CPlus, vec![(-2.0, Op(C3))], 0),
    ]
}

/// Dense matrix ⟨basis_i| K |basis_j⟩. Images leaving the basis are dropped.
pub fn op_matrix(kind: OpKind, basis: &[QNums]) -> Result<DMatrix<Complex64>> {
    let n = basis.len();
    let mut m = DMatrix::zeros(n, n);
    for (j, &q) in basis.iter().enumerate() {
        if let KetImage::Term(c, target) = kind.on_ket(q)? {
            if let Some(i) = basis.iter().position(|&b| b == target) {
                m[(i, j)] = Complex64::new(c, 0.0);
            }
        }
    }
    Ok(m)
}

/// Factorization operators carrying an explicit ℓ index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexedFactor {
    /// a_ℓ, acting on the ℓ-hierarchy.
    A(i32),
    /// a†_ℓ, acting on the (ℓ+1)-hierarchy.
    ADag(i32),
    /// b_ℓ, acting on the ℓ-hierarchy.
    B(i32),
    /// b†_ℓ, acting on the (ℓ−1)-hierarchy.
    BDag(i32),
}

impl IndexedFactor {
    /// The ℓ of the kets this operator may act on.
    pub fn domain_ell(self) -> i32 {
        match self {
            IndexedFactor::A(l) | IndexedFactor::B(l) => l,
            IndexedFactor::ADag(l) => l + 1,
            IndexedFactor::BDag(l) => l - 1,
        }
    }

    fn free_index(self) -> OpKind {
        match self {
            IndexedFactor::A(_) => OpKind::AMinus,
            IndexedFactor::ADag(_) => OpKind::APlus,
            IndexedFactor::B(_) => OpKind::BMinus,
            IndexedFactor::BDag(_) => OpKind::BPlus,
        }
    }
}

/// Twice the free-index operator, after checking every ket sits at the
/// operator's ℓ.
pub fn apply_indexed(f: IndexedFactor, state: &StateVector) -> Result<StateVector> {
    if let Some((q, _)) = state.iter().find(|(q, _)| i64::from(q.ell) != i64::from(f.domain_ell())) {
        return Err(Error::domain(format!("{f:?} acts on l={} kets, got {q}", f.domain_ell())));
    }
    Ok(apply(f.free_index(), state)?.scale(Complex64::new(2.0, 0.0)))
}

/// Applies indexed factors as a product, rightmost first.
pub fn apply_indexed_product(fs: &[IndexedFactor], state: &StateVector) -> Result<StateVector> {
    fs.iter().rev().try_fold(state.clone(), |acc, &f| apply_indexed(f, &acc))
}

/// Finite su(2) generators in the Hubbard form.
#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrices {
    pub two_j: u32,
    pub s3: DMatrix<f64>,
    pub s_plus: DMatrix<f64>,
    pub s_minus: DMatrix<f64>,
    /// Lattice ket for each row; empty when the basis is supplied elsewhere.
    pub basis_map: Vec<QNums>,
}

impl RepMatrices {
    pub fn j(&self) -> f64 {
        f64::from(self.two_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }
}

/// Generators for a representation of dimension `dim` with an empty basis map.
pub fn hubbard_su2_on_basis(dim: usize) -> Result<RepMatrices> {
    if dim == 0 {
        return Err(Error::domain("representation dimension must be at least 1"));
    }
    let two_j = (dim - 1) as u32;
    let j = f64::from(two_j) / 2.0;
    let s3 = DMatrix::from_fn(dim, dim, |r, c| if r == c { j - r as f64 } else { 0.0 });
    let s_plus = DMatrix::from_fn(dim, dim, |r, c| {
        if c == r + 1 {
            let p = (r + 1) as f64;
            (p * (dim as f64 - p)).sqrt()
        } else {
            0.0
        }
    });
    let s_minus = s_plus.transpose();
    Ok(RepMatrices {
        two_j,
        s3,
        s_plus,
        s_minus,
        basis_map: Vec::new(),
    })
}

/// Generators on the n-th energy level; row p holds |n, 2p⟩_e (n even) or
/// |n, 2p+1⟩_e (n odd), p counted from 0.
pub fn su2_rep_matrices(n: u32) -> RepMatrices {
    let dim = degeneracy(n) as usize;
    let mut rep = hubbard_su2_on_basis(dim).expect("degeneracy is at least 1");
    let first = n % 2;
    rep.basis_map = (0..dim as u32)
        .map(|p| QNums::from_energy(n, first + 2 * p).expect("on the lattice by construction"))
        .collect();
    rep
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DickeCase {
    D1,
    D2,
    D3,
    D4,
    E4a,
    E4b,
}

impl FromStr for DickeCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "D1" => Ok(DickeCase::D1),
            "D2" => Ok(DickeCase::D2),
            "D3" => Ok(DickeCase::D3),
            "D4" => Ok(DickeCase::D4),
            "E4A" => Ok(DickeCase::E4a),
            "E4B" => Ok(DickeCase::E4b),
            _ => Err(Error::UnknownCase(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DickeBasis {
    pub case_id: DickeCase,
    pub chi: f64,
    /// Ordered by Hubbard row, i.e. μ = j, j−1, …, −j.
    pub vectors: Vec<StateVector>,
}

impl DickeBasis {
    pub fn generators(&self) -> RepMatrices {
        hubbard_su2_on_basis(self.vectors.len()).expect("bases are non-empty")
    }

    /// Matrix of pairwise inner products.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let n = self.vectors.len();
        DMatrix::from_fn(n, n, |i, j| crate::statespace::inner_product(&self.vectors[i], &self.vectors[j]))
    }
}

/// Equal-weight superposition of |n_k, ℓ_k⟩_e with phase e^{−ikχ} on the k-th term.
fn equal_weight(kets: &[(u32, u32)], chi: f64) -> StateVector {
    let w = 1.0 / (kets.len() as f64).sqrt();
    StateVector::from_pairs(kets.iter().enumerate().map(|(k, &(n, l))| {
        let q = QNums::from_energy(n, l).expect("fixed kets lie on the lattice");
        (q, Complex64::from_polar(w, -(k as f64) * chi))
    }))
}

fn energy_ket(n: u32, l: u32) -> StateVector {
    let q = QNums::from_energy(n, l).expect("fixed kets lie on the lattice");
    StateVector::ket(q.s, q.ell)
}

pub fn dicke_basis(case_id: DickeCase, chi: f64) -> Result<DickeBasis> {
    if !(0.0..TAU).contains(&chi) {
        return Err(Error::domain(format!("chi must lie in [0, 2pi), got {chi}")));
    }
    let e = energy_ket;
    let vectors = match case_id {
        DickeCase::D1 => vec![e(2, 0), equal_weight(&[(1, 1), (3, 1)], chi), e(2, 2)],
        DickeCase::D2 => vec![e(1, 1), equal_weight(&[(2, 2), (2, 0)], chi), e(3, 1)],
        DickeCase::D3 => vec![e(3, 1), equal_weight(&[(2, 2), (4, 2)], chi), e(3, 3)],
        DickeCase::D4 => vec![e(2, 2), equal_weight(&[(3, 3), (3, 1)], chi), e(4, 2)],
        DickeCase::E4a => vec![
            e(4, 0),
            equal_weight(&[(3, 1), (5, 1)], chi),
            equal_weight(&[(2, 2), (4, 2), (6, 2)], chi),
            equal_weight(&[(3, 3), (5, 3)], chi),
            e(4, 4),
        ],
        DickeCase::E4b => return Err(Error::UnknownCase("E4b".into())),
    };
    Ok(DickeBasis {
        case_id,
        chi,
        vectors,
    })
}

/// Amplitude 1/√2 used by the two-term intermediaries.
pub const HALF_WEIGHT: f64 = FRAC_1_SQRT_2;
