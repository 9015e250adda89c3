//! Reference matrices built from Kronecker products, independent of the
//! crate's simulator. Qubit `q` is bit `q` of the basis index, so the
//! leftmost Kronecker factor is the highest qubit.
#![allow(dead_code)]

use ndarray::{array, Array2};
use num_complex::Complex64;

pub type M = Array2<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn eye(dim: usize) -> M {
    Array2::from_diag_elem(dim, c(1.0, 0.0))
}

pub fn kron(a: &M, b: &M) -> M {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `ops` placed on their qubits, identity elsewhere, over `width` qubits.
pub fn embed(width: usize, ops: &[(usize, M)]) -> M {
    let mut out = eye(1);
    for q in (0..width).rev() {
        let f = ops
            .iter()
            .find(|(p, _)| *p == q)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| eye(2));
        out = kron(&out, &f);
    }
    out
}

pub fn p0() -> M {
    array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]
}

pub fn p1() -> M {
    array![[c(0.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn x() -> M {
    array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn h() -> M {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    array![[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]
}

pub fn phase(theta: f64) -> M {
    array![[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, theta)]]
}

pub fn ry(theta: f64) -> M {
    let (s, co) = (theta / 2.0).sin_cos();
    array![[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

/// √X.
pub fn v() -> M {
    array![[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]]
}

pub fn dagger(m: &M) -> M {
    m.t().mapv(|z| z.conj())
}

/// Multi-controlled `u`: `I − P + P·U` with `P` the all-controls-set projector.
pub fn controlled(width: usize, controls: &[usize], target: usize, u: &M) -> M {
    let proj: Vec<(usize, M)> = controls.iter().map(|&q| (q, p1())).collect();
    let mut with_u = proj.clone();
    with_u.push((target, u.clone()));
    eye(1 << width) - embed(width, &proj) + embed(width, &with_u)
}

pub fn single(width: usize, q: usize, u: &M) -> M {
    embed(width, &[(q, u.clone())])
}

pub fn toffoli(width: usize, a: usize, b: usize, t: usize) -> M {
    controlled(width, &[a, b], t, &x())
}

pub fn cnot(width: usize, a: usize, t: usize) -> M {
    controlled(width, &[a], t, &x())
}

/// Product of matrices listed in circuit order (first applied first).
pub fn circuit_product(width: usize, gates: &[M]) -> M {
    gates.iter().fold(eye(1 << width), |acc, g| g.dot(&acc))
}

pub fn max_diff(a: &M, b: &M) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

use mct_core::{Circuit, Gate, GateKind};

fn local_matrix(u: &mct_core::LocalUnitary) -> M {
    let m = u.matrix();
    array![[m[0][0], m[0][1]], [m[1][0], m[1][1]]]
}

/// Matrix of one crate gate, assembled from projectors.
pub fn gate_matrix(width: usize, g: &Gate) -> M {
    let q = g.qubits();
    match g.kind() {
        GateKind::X => single(width, q[0], &x()),
        GateKind::Cnot => cnot(width, q[0], q[1]),
        GateKind::Cv => controlled(width, &q[..1], q[1], &v()),
        GateKind::Cvdg => controlled(width, &q[..1], q[1], &dagger(&v())),
        GateKind::Toffoli => toffoli(width, q[0], q[1], q[2]),
        GateKind::Mcx(_) => controlled(width, &q[..q.len() - 1], q[q.len() - 1], &x()),
        GateKind::Local(u) => single(width, q[0], &local_matrix(u)),
        GateKind::Cu(u) => controlled(width, &q[..1], q[1], &local_matrix(u)),
    }
}

pub fn circuit_matrix(circ: &Circuit) -> M {
    let w = circ.width();
    let gates: Vec<M> = circ.gates().iter().map(|g| gate_matrix(w, g)).collect();
    circuit_product(w, &gates)
}
