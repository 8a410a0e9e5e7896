//! The 3x3 probe families used to exhibit a rank-three commutator `[B, C]`.

use crate::prelude::*;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::matcore::{commutator, ComplexMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Per-axis search grid of [`find_rank3_probe`].
pub const DEFAULT_GRID: [f64; 4] = [1.0, 2.0, 3.0, -1.0];

const DET_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeFamily {
    /// `[[0, t, ip], [t, 0, s], [-ip, s, 0]]`
    C,
    /// `[[0, it, p], [-it, 0, s], [p, s, 0]]`
    D,
    /// `[[0, t, p], [t, 0, is], [p, -is, 0]]`
    E,
    /// `[[0, t, p], [t̄, 0, s], [p̄, s̄, 0]]` with complex parameters.
    F,
}

impl ProbeFamily {
    pub const ALL: [ProbeFamily; 4] = [ProbeFamily::C, ProbeFamily::D, ProbeFamily::E, ProbeFamily::F];
}

/// A member of a probe family. Parameters are real for `C`, `D`, `E`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub family: ProbeFamily,
    pub t: Complex64,
    pub s: Complex64,
    pub p: Complex64,
}

impl Probe {
    pub fn real(family: ProbeFamily, t: f64, s: f64, p: f64) -> Self {
        Probe { family, t: Complex64::new(t, 0.0), s: Complex64::new(s, 0.0), p: Complex64::new(p, 0.0) }
    }

    pub fn complex(t: Complex64, s: Complex64, p: Complex64) -> Self {
        Probe { family: ProbeFamily::F, t, s, p }
    }

    /// The probe at grid point `(g1, g2, g3)`. The `F` family takes
    /// `p = g3 (1 + i)` so that `t s p̄` is not real.
    pub fn at_grid(family: ProbeFamily, g1: f64, g2: f64, g3: f64) -> Self {
        match family {
            ProbeFamily::F => Probe::complex(Complex64::new(g1, 0.0), Complex64::new(g2, 0.0), Complex64::new(g3, g3)),
            _ => Probe::real(family, g1, g2, g3),
        }
    }

    fn max_param(&self) -> f64 {
        self.t.norm().max(self.s.norm()).max(self.p.norm())
    }
}

/// The probe matrix, embedded as the leading block of a `dim`-square matrix.
pub fn probe_matrix(probe: &Probe, dim: usize) -> Result<HermitianMatrix> {
    let Probe { family, t, s, p } = *probe;
    if t.is_zero() || s.is_zero() || p.is_zero() {
        return Err(Error::InvalidArgument("probe parameters must be nonzero"));
    }
    if family != ProbeFamily::F && (t.im != 0.0 || s.im != 0.0 || p.im != 0.0) {
        return Err(Error::InvalidArgument("families C, D, E take real parameters"));
    }
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let rows = match family {
        ProbeFamily::C => [[z, t, i * p], [t, z, s], [-i * p, s, z]],
        ProbeFamily::D => [[z, i * t, p], [-i * t, z, s], [p, s, z]],
        ProbeFamily::E => [[z, t, p], [t, z, i * s], [p, -i * s, z]],
        ProbeFamily::F => [[z, t, p], [t.conj(), z, s], [p.conj(), s.conj(), z]],
    };
    HermitianMatrix::new(ComplexMatrix::from_rows(rows).embed(dim)?)
}

/// Searches `grid³` for each family in order and returns the first probe `C`
/// with `|det [B, C]| > 1e-8 · ‖B‖_max³ · max(|t|, |s|, |p|)³`.
pub fn find_rank3_probe(
    b: &HermitianMatrix,
    grid: &[f64],
    families: &[ProbeFamily],
) -> Result<Option<(Probe, HermitianMatrix)>> {
    if b.dim() != 3 {
        return Err(Error::UnsupportedDimension { dim: b.dim(), reason: "probe search runs on 3x3 blocks" });
    }
    let nonzero: Vec<f64> = grid.iter().copied().filter(|g| *g != 0.0).collect();
    let scale = b.max_abs().powi(3);
    for &family in families {
        for &g1 in &nonzero {
            for &g2 in &nonzero {
                for &g3 in &nonzero {
                    let probe = Probe::at_grid(family, g1, g2, g3);
                    let c = probe_matrix(&probe, 3)?;
                    let det = commutator(b, &c)?.det().norm();
                    if det > DET_TOL * scale * probe.max_param().powi(3) {
                        return Ok(Some((probe, c)));
                    }
                }
            }
        }
    }
    Ok(None)
}
