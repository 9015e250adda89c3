//! Reference actions on the computational register.
//!
//! Inputs and outputs are basis indices over the computational qubits, in
//! the order the caller lists them: bit `j` is computational qubit `j`.

use ndarray::Array2;
use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::unitary::LocalUnitary;

use super::state::{StateVector, FLUSH_TOLERANCE};

pub trait Oracle {
    /// Number of computational qubits the oracle acts on.
    fn width(&self) -> usize;

    /// Image of basis input `input` as a sparse list of amplitudes.
    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)>;

    fn describe(&self) -> String;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn width(&self) -> usize {
        (**self).width()
    }

    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)> {
        (**self).evaluate(input)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// `|b₁…bₙ, t⟩ ↦ |b₁…bₙ, t ⊕ (b₁∧…∧bₙ)⟩`; controls are bits `0..n`, target bit `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CnxOracle {
    pub n: usize,
}

pub fn oracle_cnx(n: usize) -> CnxOracle {
    CnxOracle { n }
}

impl Oracle for CnxOracle {
    fn width(&self) -> usize {
        self.n + 1
    }

    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)> {
        let all = (1usize << self.n) - 1;
        let out = if input & all == all {
            input ^ (1 << self.n)
        } else {
            input
        };
        vec![(out, Complex64::new(1.0, 0.0))]
    }

    fn describe(&self) -> String {
        format!("C^{}X", self.n)
    }
}

/// `u` applied to the target (bit `n`) when all `n` controls are set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnuOracle {
    pub n: usize,
    pub u: LocalUnitary,
}

pub fn oracle_cnu(n: usize, u: LocalUnitary) -> CnuOracle {
    CnuOracle { n, u }
}

impl Oracle for CnuOracle {
    fn width(&self) -> usize {
        self.n + 1
    }

    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)> {
        let all = (1usize << self.n) - 1;
        if input & all != all {
            return vec![(input, Complex64::new(1.0, 0.0))];
        }
        let tbit = 1usize << self.n;
        let t = usize::from(input & tbit != 0);
        let cleared = input & !tbit;
        vec![
            (cleared, self.u.entry(0, t)),
            (cleared | tbit, self.u.entry(1, t)),
        ]
    }

    fn describe(&self) -> String {
        format!("C^{}U", self.n)
    }
}

/// Oracle given by an explicit `2^k × 2^k` matrix (column = image of input).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOracle {
    matrix: Array2<Complex64>,
}

impl MatrixOracle {
    pub fn new(matrix: Array2<Complex64>) -> Self {
        assert!(matrix.is_square() && matrix.nrows().is_power_of_two());
        Self { matrix }
    }
}

impl Oracle for MatrixOracle {
    fn width(&self) -> usize {
        self.matrix.nrows().trailing_zeros() as usize
    }

    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)> {
        self.matrix
            .column(input)
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(i, &a)| (i, a))
            .collect()
    }

    fn describe(&self) -> String {
        format!("matrix[{}]", self.matrix.nrows())
    }
}

/// The action of another circuit on its computational qubits, with its
/// ancillas at 0. Output weight left on non-zero ancilla values is dropped.
#[derive(Debug, Clone)]
pub struct CircuitOracle<'a> {
    circuit: &'a Circuit,
    computational: Vec<usize>,
}

impl<'a> CircuitOracle<'a> {
    /// Computational qubits default to the circuit's controls then target.
    pub fn new(circuit: &'a Circuit) -> Self {
        Self::with_qubits(circuit, circuit.computational_qubits())
    }

    pub fn with_qubits(circuit: &'a Circuit, computational: Vec<usize>) -> Self {
        Self { circuit, computational }
    }
}

impl Oracle for CircuitOracle<'_> {
    fn width(&self) -> usize {
        self.computational.len()
    }

    fn evaluate(&self, input: usize) -> Vec<(usize, Complex64)> {
        let start = self
            .computational
            .iter()
            .enumerate()
            .filter(|(j, _)| input >> j & 1 == 1)
            .fold(0usize, |acc, (_, &q)| acc | 1 << q);
        let mut state = StateVector::basis(self.circuit.width(), start);
        for g in self.circuit.gates() {
            state.apply_gate(g);
        }
        let comp_mask: usize = self.computational.iter().map(|&q| 1 << q).sum();
        let mut out = Vec::new();
        state.for_each_support(|i, a| {
            if i & !comp_mask != 0 || a.norm() <= FLUSH_TOLERANCE {
                return;
            }
            let y = self
                .computational
                .iter()
                .enumerate()
                .filter(|(_, &q)| i >> q & 1 == 1)
                .fold(0usize, |acc, (j, _)| acc | 1 << j);
            out.push((y, a));
        });
        out
    }

    fn describe(&self) -> String {
        format!("circuit[{} gates]", self.circuit.size())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_out(o: &impl Oracle, input: usize) -> usize {
        let v = o.evaluate(input);
        assert_eq!(v.len(), 1);
        v[0].0
    }

    #[test]
    fn cnx_flips_only_when_all_controls_set() {
        let o = oracle_cnx(3);
        assert_eq!(basis_out(&o, 0b0111), 0b1111);
        assert_eq!(basis_out(&o, 0b0101), 0b0101);
        assert_eq!(basis_out(&o, 0b1111), 0b0111);
    }

    #[test]
    fn cnx_with_one_control_is_cnot() {
        let o = oracle_cnx(1);
        assert_eq!(
            (0..4).map(|i| basis_out(&o, i)).collect::<Vec<_>>(),
            vec![0b00, 0b11, 0b10, 0b01]
        );
    }

    #[test]
    fn circuit_oracle_reads_through_ancillas() {
        use crate::circuit::{Gate, QubitRole};
        // CNOT 0→1 via an ancilla at qubit 2.
        let c = Circuit::new(&[QubitRole::Control, QubitRole::Target, QubitRole::Workspace])
            .unwrap()
            .extend([Gate::cnot(0, 2), Gate::cnot(2, 1), Gate::cnot(0, 2)])
            .unwrap();
        let o = CircuitOracle::new(&c);
        assert_eq!(o.width(), 2);
        assert_eq!(basis_out(&o, 0b01), 0b11);
        assert_eq!(basis_out(&o, 0b10), 0b10);
    }

    #[test]
    fn cnu_with_z_applies_phase() {
        let o = oracle_cnu(2, LocalUnitary::z());
        let v = o.evaluate(0b111);
        let amp: Complex64 = v.iter().filter(|(i, _)| *i == 0b111).map(|(_, a)| *a).sum();
        assert_eq!(amp, Complex64::new(-1.0, 0.0));
    }
}
