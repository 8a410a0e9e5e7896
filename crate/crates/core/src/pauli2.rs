//! Exact 2x2 machinery: coordinates in the normalized Pauli basis.
//!
//! With `X = [[0, 1], [1, 0]] / √2`, `Y = [[0, -i], [i, 0]] / √2` and
//! `Z = diag(1, -1) / √2`, every Hermitian 2x2 matrix is
//! `a₁X + a₂Y + a₃Z + tI` with real coordinates. Commutators become cross
//! products, `[A, B] = √2 i (a × b)·(X, Y, Z)`, and unitary conjugation acts
//! on `a` as a rotation in `SO(3)`. Transposition and [`psi`] are the
//! reflections `a₂ ↦ -a₂` and `a₁ ↦ -a₁`.

use crate::prelude::*;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::matcore::{tol, ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Relative tolerance of [`eq42_constraints`].
pub const CONSTRAINT_TOL: f64 = 1e-9;

/// Tolerance of the unitarity check in [`unitary_to_rotation`].
pub const UNITARY_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `[X, Y, Z]`.
pub fn pauli_basis() -> [HermitianMatrix; 3] {
    let h = FRAC_1_SQRT_2;
    let o = c(0.0, 0.0);
    let x = ComplexMatrix::from_rows([[o, c(h, 0.0)], [c(h, 0.0), o]]);
    let y = ComplexMatrix::from_rows([[o, c(0.0, -h)], [c(0.0, h), o]]);
    let z = ComplexMatrix::from_rows([[c(h, 0.0), o], [o, c(-h, 0.0)]]);
    [x, y, z].map(HermitianMatrix::symmetrize)
}

/// Coordinates `a` in `{X, Y, Z}` and the trace part `t = tr(A) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliVector {
    pub a: [f64; 3],
    pub t: f64,
}

impl PauliVector {
    pub fn traceless(a: [f64; 3]) -> Self {
        PauliVector { a, t: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        dot(&self.a, &self.a).sqrt()
    }
}

fn check_two(a: &ComplexMatrix) -> Result<()> {
    if a.dim() != 2 {
        return Err(Error::UnsupportedDimension { dim: a.dim(), reason: "Pauli coordinates are 2x2 only" });
    }
    Ok(())
}

/// `a_k = tr(A B_k)` for `B_k ∈ {X, Y, Z}`.
pub fn to_pauli(a: &HermitianMatrix) -> Result<PauliVector> {
    check_two(a)?;
    let off = a[(0, 1)];
    Ok(PauliVector {
        a: [SQRT_2 * off.re, -SQRT_2 * off.im, FRAC_1_SQRT_2 * (a[(0, 0)].re - a[(1, 1)].re)],
        t: 0.5 * (a[(0, 0)].re + a[(1, 1)].re),
    })
}

/// `a₁X + a₂Y + a₃Z + tI`.
pub fn from_pauli(v: &PauliVector) -> HermitianMatrix {
    let h = FRAC_1_SQRT_2;
    let [a1, a2, a3] = v.a;
    let off = c(h * a1, -h * a2);
    HermitianMatrix::symmetrize(ComplexMatrix::from_rows([
        [c(v.t + h * a3, 0.0), off],
        [off.conj(), c(v.t - h * a3, 0.0)],
    ]))
}

/// `√2 i (c₁X + c₂Y + c₃Z)`, the commutator carried by a cross product.
pub fn skew_from_pauli(cv: &[f64; 3]) -> ComplexMatrix {
    from_pauli(&PauliVector::traceless(*cv)).as_matrix().scale(c(0.0, SQRT_2))
}

pub fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `a × b`; trace parts drop out.
pub fn cross_commutator(a: &PauliVector, b: &PauliVector) -> PauliVector {
    PauliVector::traceless(cross(&a.a, &b.a))
}

/// A real orthogonal 3x3 matrix together with its determinant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation3 {
    pub m: [[f64; 3]; 3],
    pub det: f64,
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3::from_matrix([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        let det = dot(&m[0], &cross(&m[1], &m[2]));
        Rotation3 { m, det }
    }

    /// `diag(s₁, s₂, s₃)`.
    pub fn reflection(signs: [f64; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for k in 0..3 {
            m[k][k] = signs[k];
        }
        Rotation3::from_matrix(m)
    }

    pub fn apply(&self, v: &[f64; 3]) -> [f64; 3] {
        [dot(&self.m[0], v), dot(&self.m[1], v), dot(&self.m[2], v)]
    }

    /// `self · other`.
    pub fn compose(&self, other: &Rotation3) -> Self {
        let m = core::array::from_fn(|i| core::array::from_fn(|j| (0..3).map(|k| self.m[i][k] * other.m[k][j]).sum()));
        Rotation3::from_matrix(m)
    }

    /// `‖TᵀT - I‖_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| self.m[k][i] * self.m[k][j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }
}

/// The rotation `T` with `to_pauli(U A U*) = T · to_pauli(A)`; column `k` is
/// `to_pauli(U B_k U*)`.
pub fn unitary_to_rotation(u: &ComplexMatrix) -> Result<Rotation3> {
    check_two(u)?;
    let deviation = u.unitary_deviation();
    if deviation.is_nan() || deviation > UNITARY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let mut m = [[0.0; 3]; 3];
    for (k, b) in pauli_basis().iter().enumerate() {
        let col = to_pauli(&b.conjugate_by(u)?)?.a;
        for i in 0..3 {
            m[i][k] = col[i];
        }
    }
    Ok(Rotation3::from_matrix(m))
}

/// `[[a, c + id], [c - id, b]] ↦ [[a, -c + id], [-c - id, b]]`.
pub fn psi(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_two(a)?;
    let mut m = a.as_matrix().clone();
    let off = m[(0, 1)];
    m[(0, 1)] = c(-off.re, off.im);
    m[(1, 0)] = c(-off.re, -off.im);
    Ok(HermitianMatrix::symmetrize(m))
}

/// The four composite forms `UAU*`, `UAᵗU*`, `UΨ(A)U*`, `UΨ(A)ᵗU*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    Plain,
    Transpose,
    Psi,
    PsiTranspose,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::Plain, Form::Transpose, Form::Psi, Form::PsiTranspose];

    pub fn uses_transpose(self) -> bool {
        matches!(self, Form::Transpose | Form::PsiTranspose)
    }

    pub fn uses_psi(self) -> bool {
        matches!(self, Form::Psi | Form::PsiTranspose)
    }

    /// 1-based index used in reports.
    pub fn number(self) -> u8 {
        match self {
            Form::Plain => 1,
            Form::Transpose => 2,
            Form::Psi => 3,
            Form::PsiTranspose => 4,
        }
    }

    pub fn from_number(k: u8) -> Option<Self> {
        Form::ALL.get(usize::from(k).wrapping_sub(1)).copied()
    }
}

/// The coordinate map induced by a form with unitary `U`: `T · R`, where `R`
/// flips `a₁` for `Ψ` and `a₂` for transposition.
pub fn form_coordinate_map(form: Form, u: &ComplexMatrix) -> Result<Rotation3> {
    let r = Rotation3::reflection([
        if form.uses_psi() { -1.0 } else { 1.0 },
        if form.uses_transpose() { -1.0 } else { 1.0 },
        1.0,
    ]);
    Ok(unitary_to_rotation(u)?.compose(&r))
}

/// For `A = [[a, c + id], [c - id, b]]` and `B = [[x, w + iv], [w - iv, y]]`:
///
/// ```text
/// 4v² + (x - y)² = 4d² + (a - b)²
/// 4w² + (x - y)² = 4c² + (a - b)²
/// w² + v² = c² + d²
/// ```
///
/// each to `1e-9` relative to the larger side.
pub fn eq42_constraints(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<bool> {
    check_two(a)?;
    check_two(b)?;
    let (p, q) = (a[(0, 0)].re, a[(1, 1)].re);
    let (cc, d) = (a[(0, 1)].re, a[(0, 1)].im);
    let (x, y) = (b[(0, 0)].re, b[(1, 1)].re);
    let (w, v) = (b[(0, 1)].re, b[(0, 1)].im);
    let close = |l: f64, r: f64| (l - r).abs() <= CONSTRAINT_TOL * 1f64.max(l.abs()).max(r.abs());
    let dxy = (x - y) * (x - y);
    let dab = (p - q) * (p - q);
    Ok(close(4.0 * v * v + dxy, 4.0 * d * d + dab)
        && close(4.0 * w * w + dxy, 4.0 * cc * cc + dab)
        && close(w * w + v * v, cc * cc + d * d))
}

/// Residual of the sign relation
/// `df(ε₂η₂ce + ε₁η₁ab) + ε₁ε₂η₁η₂abce = df(ce + ab) + abce`
/// for traceless `A = [[a, c + id], [c - id, -a]]`, `B = [[b, e + if], [e - if, -b]]`
/// with sign pairs `ε = (ε₁, ε₂)` for `A` and `η = (η₁, η₂)` for `B`.
pub fn sign_relation_residual(a: &PauliVector, b: &PauliVector, eps: [f64; 2], eta: [f64; 2]) -> f64 {
    let entries = |v: &PauliVector| {
        let m = from_pauli(&PauliVector::traceless(v.a));
        (m[(0, 0)].re, m[(0, 1)].re, m[(0, 1)].im)
    };
    let (aa, cc, d) = entries(a);
    let (bb, e, f) = entries(b);
    let lhs = d * f * (eps[1] * eta[1] * cc * e + eps[0] * eta[0] * aa * bb)
        + eps[0] * eps[1] * eta[0] * eta[1] * aa * bb * cc * e;
    let rhs = d * f * (cc * e + aa * bb) + aa * bb * cc * e;
    lhs - rhs
}

/// `true` when `‖Ra × Rb‖ = ‖a × b‖` to `tol::CONSTRUCTION` (relative).
pub fn preserves_cross_norm(r: &Rotation3, a: &[f64; 3], b: &[f64; 3]) -> bool {
    let before = {
        let v = cross(a, b);
        dot(&v, &v).sqrt()
    };
    let after = {
        let v = cross(&r.apply(a), &r.apply(b));
        dot(&v, &v).sqrt()
    };
    (before - after).abs() <= tol::CONSTRUCTION * 1f64.max(before)
}
