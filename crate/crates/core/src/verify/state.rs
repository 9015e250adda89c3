use num_complex::Complex64;

use crate::circuit::Gate;
use crate::error::{Error, Result};

/// Amplitudes below this magnitude are flushed to zero when a qubit is
/// found to be back in a definite basis value.
pub const FLUSH_TOLERANCE: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense state of an `m`-qubit register; qubit `q` is bit `q` of the index.
///
/// Besides the `2^m` amplitudes the state tracks a `live` mask: every
/// non-zero amplitude sits at an index `i` with `i & !live == base`. Gates
/// only iterate over that sub-cube, so a basis input that never puts more
/// than a few qubits in superposition costs a few amplitudes per gate
/// instead of `2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    width: usize,
    base: usize,
    live: usize,
}

/// Enumerates every subset of `mask` (including 0 and `mask` itself).
fn for_each_subset(mask: usize, mut f: impl FnMut(usize)) {
    let mut sub = 0usize;
    loop {
        f(sub);
        if sub == mask {
            break;
        }
        sub = sub.wrapping_sub(mask) & mask;
    }
}

impl StateVector {
    /// `|0…0⟩` on `width` qubits.
    pub fn zero(width: usize) -> Self {
        Self::basis(width, 0)
    }

    pub fn basis(width: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << width];
        amps[index] = Complex64::new(1.0, 0.0);
        Self {
            amps,
            width,
            base: index,
            live: 0,
        }
    }

    /// Arbitrary amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::DimensionMismatch {
                width: len.max(1).ilog2() as usize,
                got: len,
            });
        }
        let width = len.trailing_zeros() as usize;
        Ok(Self {
            amps,
            width,
            base: 0,
            live: len - 1,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        let mut sum = 0.0;
        self.for_each_support(|_, a| sum += a.norm_sqr());
        sum.sqrt()
    }

    /// Visits every index of the live sub-cube with its amplitude.
    pub fn for_each_support(&self, mut f: impl FnMut(usize, Complex64)) {
        for_each_subset(self.live, |sub| {
            let i = self.base | sub;
            f(i, self.amps[i]);
        });
    }

    /// Re-initialises to a basis state, touching only the live sub-cube.
    pub(crate) fn reset_to_basis(&mut self, index: usize) {
        let (base, live) = (self.base, self.live);
        let amps = &mut self.amps;
        for_each_subset(live, |sub| amps[base | sub] = ZERO);
        self.amps[index] = Complex64::new(1.0, 0.0);
        self.base = index;
        self.live = 0;
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        let mut ctrl_mask = 0usize;
        for &c in gate.controls() {
            let bit = 1 << c;
            if self.live & bit != 0 {
                ctrl_mask |= bit;
            } else if self.base & bit == 0 {
                // A definite control at 0: the gate does nothing.
                return;
            }
        }
        let t = gate.target();
        let tbit = 1usize << t;
        if self.live & tbit == 0 {
            self.live |= tbit;
            self.base &= !tbit;
        }
        let u = gate.kind().target_unitary();
        let m = u.matrix();
        let fixed = self.base | ctrl_mask;
        let free = self.live & !ctrl_mask & !tbit;
        let amps = &mut self.amps;
        for_each_subset(free, |sub| {
            let i0 = fixed | sub;
            let i1 = i0 | tbit;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = m[0][0] * a0 + m[0][1] * a1;
            amps[i1] = m[1][0] * a0 + m[1][1] * a1;
        });
        self.try_collapse(t);
    }

    /// Drops `q` from the live mask when all weight sits on one of its values.
    fn try_collapse(&mut self, q: usize) {
        let bit = 1usize << q;
        let rest = self.live & !bit;
        let (mut max0, mut max1) = (0.0f64, 0.0f64);
        for_each_subset(rest, |sub| {
            let i = self.base | sub;
            max0 = max0.max(self.amps[i].norm());
            max1 = max1.max(self.amps[i | bit].norm());
        });
        let keep_one = if max1 <= FLUSH_TOLERANCE {
            false
        } else if max0 <= FLUSH_TOLERANCE {
            true
        } else {
            return;
        };
        let (base, amps) = (self.base, &mut self.amps);
        for_each_subset(rest, |sub| {
            let i = base | sub;
            if keep_one {
                amps[i] = ZERO;
            } else {
                amps[i | bit] = ZERO;
            }
        });
        self.live = rest;
        if keep_one {
            self.base |= bit;
        }
    }
}
