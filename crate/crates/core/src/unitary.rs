//! Single-qubit unitaries.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for the unitarity check on construction.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 unitary, row-major: `m[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[[Complex64; 2]; 2]", into = "[[Complex64; 2]; 2]")]
pub struct LocalUnitary {
    m: [[Complex64; 2]; 2],
}

impl TryFrom<[[Complex64; 2]; 2]> for LocalUnitary {
    type Error = Error;

    fn try_from(m: [[Complex64; 2]; 2]) -> Result<Self> {
        Self::new(m)
    }
}

impl From<LocalUnitary> for [[Complex64; 2]; 2] {
    fn from(u: LocalUnitary) -> Self {
        u.m
    }
}

/// Euler angles of `U = e^{i·phase} Rz(beta) Ry(gamma) Rz(delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZyzAngles {
    pub phase: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl LocalUnitary {
    /// Checked constructor: rejects matrices with `max|U·U† - I| > 1e-10`.
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let u = Self { m };
        let deviation = u.unitarity_deviation();
        if deviation > UNITARY_TOLERANCE || !deviation.is_finite() {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(u)
    }

    const fn raw(m: [[Complex64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub const fn identity() -> Self {
        Self::raw([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn x() -> Self {
        Self::raw([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn y() -> Self {
        Self::raw([
            [ZERO, Complex64::new(0.0, -1.0)],
            [Complex64::new(0.0, 1.0), ZERO],
        ])
    }

    pub const fn z() -> Self {
        Self::raw([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]])
    }

    pub const fn h() -> Self {
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::raw([[s, s], [s, Complex64::new(-FRAC_1_SQRT_2, 0.0)]])
    }

    pub fn s() -> Self {
        Self::phase(std::f64::consts::FRAC_PI_2)
    }

    pub fn t() -> Self {
        Self::phase(FRAC_PI_4)
    }

    pub fn tdg() -> Self {
        Self::phase(-FRAC_PI_4)
    }

    /// Square root of X: `V = ½[[1+i, 1-i], [1-i, 1+i]]`, so `V² = X`.
    pub const fn v() -> Self {
        let p = Complex64::new(0.5, 0.5);
        let q = Complex64::new(0.5, -0.5);
        Self::raw([[p, q], [q, p]])
    }

    pub const fn vdg() -> Self {
        let p = Complex64::new(0.5, -0.5);
        let q = Complex64::new(0.5, 0.5);
        Self::raw([[p, q], [q, p]])
    }

    /// `diag(1, e^{iθ})`.
    pub fn phase(theta: f64) -> Self {
        Self::raw([[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, theta)]])
    }

    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::raw([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn rz(theta: f64) -> Self {
        Self::raw([
            [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
            [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
        ])
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let m = self.m;
        Self::raw([
            [m[0][0] * factor, m[0][1] * factor],
            [m[1][0] * factor, m[1][1] * factor],
        ])
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        Self::raw([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let p = *self * self.adjoint();
        p.max_abs_diff(&Self::identity())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.m[r][c] - other.m[r][c]).norm());
            }
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// ZYZ Euler decomposition.
    pub fn zyz(&self) -> ZyzAngles {
        let m = self.m;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let phase = det.arg() / 2.0;
        // Special-unitary part: [[a, -b*], [b, a*]].
        let w = self.scaled(Complex64::from_polar(1.0, -phase));
        let a = w.m[0][0];
        let b = w.m[1][0];
        let gamma = 2.0 * b.norm().atan2(a.norm());
        let sum = -2.0 * a.arg();
        let diff = 2.0 * b.arg();
        ZyzAngles {
            phase,
            beta: (sum + diff) / 2.0,
            gamma,
            delta: (sum - diff) / 2.0,
        }
    }
}

impl Mul for LocalUnitary {
    type Output = LocalUnitary;

    fn mul(self, rhs: LocalUnitary) -> LocalUnitary {
        let a = self.m;
        let b = rhs.m;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        LocalUnitary::raw(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v_squares_to_x() {
        assert!((LocalUnitary::v() * LocalUnitary::v()).approx_eq(&LocalUnitary::x(), 1e-15));
        assert!((LocalUnitary::v() * LocalUnitary::vdg()).approx_eq(&LocalUnitary::identity(), 1e-15));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = [[ONE, ONE], [ZERO, ONE]];
        assert!(matches!(LocalUnitary::new(m), Err(Error::NonUnitary { .. })));
    }

    #[test]
    fn zyz_reconstructs_standard_gates() {
        for u in [
            LocalUnitary::x(),
            LocalUnitary::y(),
            LocalUnitary::z(),
            LocalUnitary::h(),
            LocalUnitary::v(),
            LocalUnitary::t(),
            LocalUnitary::identity(),
            LocalUnitary::ry(0.3) * LocalUnitary::rz(-1.1),
        ] {
            let ZyzAngles { phase, beta, gamma, delta } = u.zyz();
            let rebuilt = (LocalUnitary::rz(beta) * LocalUnitary::ry(gamma) * LocalUnitary::rz(delta))
                .scaled(Complex64::from_polar(1.0, phase));
            assert!(rebuilt.approx_eq(&u, 1e-12), "{u:?} -> {rebuilt:?}");
        }
    }
}
