//! Oracles shared by the integration tests. Nothing here calls into the
//! simulator's gate or statistics code.
#![allow(dead_code)]

use num_complex::Complex64 as C;

pub type Mat = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Hand-written gate matrices, by name.
pub fn oracle_gate(name: &str) -> Mat {
    let s = 0.5f64.sqrt();
    match name {
        "I" => vec![
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ],
        "X" => vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ],
        "H" => vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]],
        "SX" => vec![
            vec![c(0.5, 0.5), c(0.5, -0.5)],
            vec![c(0.5, -0.5), c(0.5, 0.5)],
        ],
        "SXdg" => vec![
            vec![c(0.5, -0.5), c(0.5, 0.5)],
            vec![c(0.5, 0.5), c(0.5, -0.5)],
        ],
        other => panic!("unknown gate {other}"),
    }
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn matvec(a: &Mat, v: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0, 0.0); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Full-register matrix for a single-qubit gate on `target` of `n` qubits,
/// with qubit 0 least significant: `U_{n-1} ⊗ … ⊗ U_0`.
pub fn embed(gate: &Mat, target: usize, n: usize) -> Mat {
    let id = oracle_gate("I");
    let mut out: Mat = vec![vec![c(1.0, 0.0)]];
    for q in (0..n).rev() {
        out = kron(&out, if q == target { gate } else { &id });
    }
    out
}

/// Permutation matrix of CNOT on a 2-qubit register.
#[allow(clippy::needless_range_loop)]
pub fn cnot_matrix(control: usize, target: usize) -> Mat {
    let mut m = vec![vec![c(0.0, 0.0); 4]; 4];
    for i in 0..4usize {
        let j = if (i >> control) & 1 == 1 {
            i ^ (1 << target)
        } else {
            i
        };
        m[j][i] = c(1.0, 0.0);
    }
    m
}

pub fn max_abs_diff(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Deterministic xorshift64 bit source; the same generator produced the
/// frozen reference values computed offline.
pub fn xorshift_bits(seed: u64, n: usize) -> Vec<u8> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 63) as u8
        })
        .collect()
}

/// Biased variant: 1 only when the top two bits are both set (p = ¼).
pub fn xorshift_biased_bits(seed: u64, n: usize) -> Vec<u8> {
    let mut s = seed;
    (0..n)
        .map(|_| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            u8::from(s >> 62 == 3)
        })
        .collect()
}

/// O(L²) longest repeated substring (overlaps allowed): for every shift `d`
/// scan the longest run of `s[i] == s[i + d]`.
pub fn naive_longest_repeat(s: &[u8]) -> usize {
    let n = s.len();
    let mut best = 0;
    for d in 1..n {
        let mut run = 0;
        for i in 0..n - d {
            if s[i] == s[i + d] {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
    }
    best
}

/// Exact two-sided binomial p-value for L ≤ 60 by integer summation.
pub fn binomial_direct(len: u32, ones: u32) -> f64 {
    let m = ones.max(len - ones);
    let mut coeff: u128 = 1; // C(len, 0)
    let mut tail: u128 = 0;
    for j in 0..=len {
        if j >= m {
            tail += coeff;
        }
        coeff = coeff * u128::from(len - j) / u128::from(j + 1);
    }
    (2.0 * tail as f64 / 2f64.powi(len as i32)).min(1.0)
}

/// Single-qubit gate names in the order the tests map them to `GateKind`.
pub const GATE_NAMES: [&str; 5] = ["I", "X", "H", "SX", "SXdg"];

#[derive(Clone, Copy, Debug)]
pub enum Op {
    /// (index into `GATE_NAMES`, target qubit)
    Single(usize, usize),
    /// (control, target)
    Cnot(usize, usize),
}

/// Every circuit of depth ≤ `max_depth` over the five gates on each qubit,
/// plus both CNOT orientations when `n = 2`.
pub fn circuits(n: usize, max_depth: usize) -> Vec<Vec<Op>> {
    let mut alphabet: Vec<Op> = (0..GATE_NAMES.len())
        .flat_map(|g| (0..n).map(move |q| Op::Single(g, q)))
        .collect();
    if n == 2 {
        alphabet.push(Op::Cnot(0, 1));
        alphabet.push(Op::Cnot(1, 0));
    }
    let mut all = vec![vec![]];
    let mut frontier: Vec<Vec<Op>> = vec![vec![]];
    for _ in 0..max_depth {
        frontier = frontier
            .iter()
            .flat_map(|c| {
                alphabet.iter().map(move |&op| {
                    let mut next = c.clone();
                    next.push(op);
                    next
                })
            })
            .collect();
        all.extend(frontier.iter().cloned());
    }
    all
}

/// Dense unitary of a circuit on `n` qubits.
pub fn circuit_unitary(circuit: &[Op], n: usize) -> Mat {
    let mut u = embed(&oracle_gate("I"), 0, n);
    for op in circuit {
        let m = match *op {
            Op::Single(g, q) => embed(&oracle_gate(GATE_NAMES[g]), q, n),
            Op::Cnot(c, t) => cnot_matrix(c, t),
        };
        u = matmul(&m, &u);
    }
    u
}

/// Computational basis states plus one generic state with nonzero phases.
pub fn initial_states(n: usize) -> Vec<Vec<C>> {
    let dim = 1 << n;
    let mut states: Vec<Vec<C>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| c(f64::from(u8::from(i == j)), 0.0))
                .collect()
        })
        .collect();
    let raw: Vec<C> = (0..dim)
        .map(|k| c(0.3 + k as f64, 0.7 - 0.4 * k as f64))
        .collect();
    let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    states.push(raw.into_iter().map(|a| a / norm).collect());
    states
}
