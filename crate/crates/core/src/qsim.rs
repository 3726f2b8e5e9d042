//! Exact statevector simulation for one- and two-qubit rounds.
//!
//! Basis index `i` encodes the ket `|i⟩` with qubit 0 as the least significant
//! bit, so a two-qubit outcome prints as `q1 q0`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

pub use num_complex::Complex64 as Complex;

/// Tolerance for exact gate algebra.
pub const ALGEBRA_TOL: f64 = 1e-12;
/// Tolerance for accumulated normalization.
pub const NORM_TOL: f64 = 1e-10;

const MAX_QUBITS: usize = 2;
const MAX_DIM: usize = 1 << MAX_QUBITS;

const ZERO: Complex = Complex::new(0.0, 0.0);
const ONE: Complex = Complex::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Identity,
    NotX,
    Hadamard,
    SqrtX,
    SqrtXInverse,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::Identity,
        GateKind::NotX,
        GateKind::Hadamard,
        GateKind::SqrtX,
        GateKind::SqrtXInverse,
    ];

    pub fn matrix(self) -> Gate2x2 {
        gate_matrix(self)
    }
}

/// A 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate2x2(pub [[Complex; 2]; 2]);

impl Gate2x2 {
    pub fn identity() -> Self {
        Gate2x2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Gate2x2) -> Gate2x2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Gate2x2(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Gate2x2 {
        let m = &self.0;
        Gate2x2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Gate2x2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().mul(self).max_abs_diff(&Gate2x2::identity()) <= tol
    }
}

pub fn gate_matrix(kind: GateKind) -> Gate2x2 {
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    let p = Complex::new(0.5, 0.5);
    let m = Complex::new(0.5, -0.5);
    match kind {
        GateKind::Identity => Gate2x2::identity(),
        GateKind::NotX => Gate2x2([[ZERO, ONE], [ONE, ZERO]]),
        GateKind::Hadamard => Gate2x2([[h, h], [h, -h]]),
        GateKind::SqrtX => Gate2x2([[p, m], [m, p]]),
        GateKind::SqrtXInverse => Gate2x2([[m, p], [p, m]]),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> Gate2x2 {
        let i = Complex::new(0.0, 1.0);
        match self {
            Pauli::X => gate_matrix(GateKind::NotX),
            Pauli::Y => Gate2x2([[ZERO, -i], [i, ZERO]]),
            Pauli::Z => Gate2x2([[ONE, ZERO], [ZERO, -ONE]]),
        }
    }
}

/// A measured computational-basis outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Outcome {
    index: usize,
    n_qubits: usize,
}

impl Outcome {
    pub fn index(self) -> usize {
        self.index
    }

    /// Bit observed on `qubit`.
    pub fn bit(self, qubit: usize) -> u8 {
        ((self.index >> qubit) & 1) as u8
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&bitstring(self.index, self.n_qubits))
    }
}

/// Highest qubit first, i.e. `|q1 q0⟩`.
fn bitstring(index: usize, n_qubits: usize) -> String {
    (0..n_qubits)
        .rev()
        .map(|q| if (index >> q) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Pure state of one or two qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: [Complex; MAX_DIM],
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCount(n_qubits));
        }
        let mut amps = [ZERO; MAX_DIM];
        amps[0] = ONE;
        Ok(Statevector { n_qubits, amps })
    }

    /// Builds a state from explicit amplitudes; length must be 2 or 4 and the
    /// vector must be finite and normalized within [`NORM_TOL`].
    pub fn from_amplitudes(amps: &[Complex]) -> Result<Self> {
        let n_qubits = match amps.len() {
            2 => 1,
            4 => 2,
            n => return Err(Error::QubitCount(n.trailing_zeros() as usize)),
        };
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
            || (norm - 1.0).abs() > NORM_TOL
        {
            return Err(Error::NotNormalized(norm));
        }
        let mut buf = [ZERO; MAX_DIM];
        buf[..amps.len()].copy_from_slice(amps);
        Ok(Statevector {
            n_qubits,
            amps: buf,
        })
    }

    /// `|bits⟩` where `bits[q]` is the value of qubit `q`.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let mut state = Statevector::new(bits.len())?;
        state.amps[0] = ZERO;
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (usize::from(b & 1) << q));
        state.amps[index] = ONE;
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps[..self.dim()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, index: usize) -> Result<()> {
        if index < self.n_qubits {
            Ok(())
        } else {
            Err(Error::QubitOutOfRange {
                index,
                n_qubits: self.n_qubits,
            })
        }
    }

    pub fn apply_1q(&self, kind: GateKind, target: usize) -> Result<Self> {
        self.apply_matrix(&gate_matrix(kind), target)
    }

    /// Applies an arbitrary 2×2 matrix to `target`.
    pub fn apply_matrix(&self, gate: &Gate2x2, target: usize) -> Result<Self> {
        self.check_qubit(target)?;
        let mut out = *self;
        let m = &gate.0;
        let stride = 1 << target;
        for i in (0..self.dim()).filter(|i| i & stride == 0) {
            let a0 = self.amps[i];
            let a1 = self.amps[i | stride];
            out.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            out.amps[i | stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        Ok(out)
    }

    pub fn apply_cnot(&self, control: usize, target: usize) -> Result<Self> {
        if self.n_qubits != 2 {
            return Err(Error::NotTwoQubits);
        }
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::SameControlTarget(control));
        }
        let mut out = *self;
        let c = 1 << control;
        let t = 1 << target;
        for i in (0..self.dim()).filter(|i| i & c != 0 && i & t == 0) {
            out.amps.swap(i, i | t);
        }
        Ok(out)
    }

    /// Outcome probabilities indexed by basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes().iter().map(|a| a.norm_sqr()).collect()
    }

    /// Outcome probabilities keyed by bitstring (`q1 q0` order).
    pub fn probability_map(&self) -> BTreeMap<String, f64> {
        self.probabilities()
            .into_iter()
            .enumerate()
            .map(|(i, p)| (bitstring(i, self.n_qubits), p))
            .collect()
    }

    /// Probability that `qubit` reads 1.
    pub fn prob_one(&self, qubit: usize) -> Result<f64> {
        self.check_qubit(qubit)?;
        Ok(self
            .probabilities()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| (i >> qubit) & 1 == 1)
            .map(|(_, p)| p)
            .sum())
    }

    /// Samples all qubits at once. The state is not collapsed.
    pub fn measure_all<R: Rng + ?Sized>(&self, rng: &mut R) -> Outcome {
        let u: f64 = rng.random();
        let probs = self.probabilities();
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, &p) in probs.iter().enumerate() {
            if p > 0.0 {
                last_nonzero = i;
                acc += p;
                if u < acc {
                    return Outcome {
                        index: i,
                        n_qubits: self.n_qubits,
                    };
                }
            }
        }
        // u landed in the rounding slack above the accumulated total
        Outcome {
            index: last_nonzero,
            n_qubits: self.n_qubits,
        }
    }

    /// Projects `qubit` onto `bit` and renormalizes. Returns the branch
    /// probability and the post-measurement state, or `None` if the branch
    /// has zero probability.
    pub fn project(&self, qubit: usize, bit: u8) -> Result<Option<(f64, Statevector)>> {
        self.check_qubit(qubit)?;
        let mask = 1 << qubit;
        let keep = |i: usize| ((i & mask != 0) as u8) == (bit & 1);
        let prob: f64 = (0..self.dim())
            .filter(|&i| keep(i))
            .map(|i| self.amps[i].norm_sqr())
            .sum();
        if prob <= 0.0 {
            return Ok(None);
        }
        let scale = 1.0 / prob.sqrt();
        let mut out = *self;
        for i in 0..self.dim() {
            out.amps[i] = if keep(i) { self.amps[i] * scale } else { ZERO };
        }
        Ok(Some((prob, out)))
    }

    /// Measures a single qubit and collapses the state onto the observed bit.
    pub fn measure_qubit<R: Rng + ?Sized>(
        &self,
        qubit: usize,
        rng: &mut R,
    ) -> Result<(u8, Statevector)> {
        let p1 = self.prob_one(qubit)?;
        let u: f64 = rng.random();
        let bit = u8::from(u < p1);
        match self.project(qubit, bit)? {
            Some((_, state)) => Ok((bit, state)),
            // only reachable through rounding at p1 ∈ {0, 1}
            None => {
                let other = bit ^ 1;
                let (_, state) = self
                    .project(qubit, other)?
                    .ok_or(Error::NotNormalized(0.0))?;
                Ok((other, state))
            }
        }
    }

    pub(crate) fn apply_pauli(&self, pauli: Pauli, target: usize) -> Result<Self> {
        self.apply_matrix(&pauli.matrix(), target)
    }

    /// Trajectory depolarizing channel: with probability `p` one of X, Y, Z
    /// (uniform) hits `target`. Always consumes two draws from `rng`.
    pub fn apply_depolarizing<R: Rng + ?Sized>(
        &self,
        p: f64,
        target: usize,
        rng: &mut R,
    ) -> Result<Self> {
        check_probability("depolarizing_p", p)?;
        self.check_qubit(target)?;
        let u: f64 = rng.random();
        let which: u8 = rng.random_range(0..3);
        if u >= p {
            return Ok(*self);
        }
        let pauli = match which {
            0 => Pauli::X,
            1 => Pauli::Y,
            _ => Pauli::Z,
        };
        self.apply_pauli(pauli, target)
    }
}

/// Flips each bit independently with probability `epsilon`. Consumes one
/// draw per bit.
pub fn flip_readout<R: Rng + ?Sized>(bits: &[u8], epsilon: f64, rng: &mut R) -> Result<Vec<u8>> {
    check_probability("readout_epsilon", epsilon)?;
    Ok(bits
        .iter()
        .map(|&b| {
            let u: f64 = rng.random();
            if u < epsilon {
                b ^ 1
            } else {
                b
            }
        })
        .collect())
}
