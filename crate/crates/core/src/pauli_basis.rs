//! Pauli matrices, the dictionary-ordered n-qubit basis λ_0..λ_{4^n-1}, and
//! the conjugation sign tables.
//!
//! Basis element `i` is `σ_{j_1} ⊗ … ⊗ σ_{j_n} / √(2^{n-1})` where
//! `(j_1, …, j_n)` are the base-4 digits of `i`, most significant first.
//! With this normalization `tr(λ_i λ_j) = 2δ_ij` for every pair, including
//! `λ_0 = I/√(2^{n-1})`.
//!
//! The sign table records `λ_i λ_j λ_i = s_ij · λ_j / 2^{n-1}`. For one qubit
//! `s_ij = +1` iff `i = 0`, `j = 0` or `i = j`; the n-qubit table is the
//! n-fold Kronecker power of that 4x4 table.

use std::sync::OnceLock;

use crate::error::{input, Error, Result};
use crate::linalg::{kron, ComplexMatrix, I, ONE, ZERO};

/// Largest qubit count for which bases and sign tables are built.
pub const MAX_QUBITS: usize = 4;

/// One of σ_0 = I, σ_1, σ_2, σ_3.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliMatrix {
    index: u8,
    entries: ComplexMatrix,
}

impl PauliMatrix {
    pub fn index(&self) -> u8 {
        self.index
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.entries
    }
}

/// Returns σ_i for `i` in 0..=3.
pub fn pauli(index: usize) -> Result<PauliMatrix> {
    let entries = match index {
        0 => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
        1 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => return input(format!("Pauli index {index} is not in 0..=3")),
    };
    Ok(PauliMatrix {
        index: index as u8,
        entries,
    })
}

fn pauli_unchecked(index: u8) -> ComplexMatrix {
    pauli(index as usize).expect("digit in 0..=3").into_matrix()
}

/// Kronecker product of two complex matrices.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    kron(a, b)
}

/// A normalized Pauli tensor product λ_i.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisElement {
    n: usize,
    index: usize,
    digits: Vec<u8>,
    entries: ComplexMatrix,
}

impl BasisElement {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Base-4 digits of the index, most significant first.
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.entries
    }

    fn build(n: usize, index: usize) -> Self {
        let digits = base4_digits(n, index);
        let scale = 1.0 / ((1u64 << (n - 1)) as f64).sqrt();
        let product = digits
            .iter()
            .map(|&d| pauli_unchecked(d))
            .reduce(|acc, p| kron(&acc, &p))
            .expect("n >= 1");
        BasisElement {
            n,
            index,
            digits,
            entries: product.scale(scale),
        }
    }
}

fn base4_digits(n: usize, index: usize) -> Vec<u8> {
    (0..n)
        .rev()
        .map(|pos| ((index >> (2 * pos)) & 3) as u8)
        .collect()
}

/// Number of basis elements for `n` qubits, 4^n.
pub fn basis_size(n: usize) -> usize {
    1usize << (2 * n)
}

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return input("qubit count must be at least 1");
    }
    if n > MAX_QUBITS {
        return Err(Error::Resource {
            requested: n,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// All 4^n basis elements for one qubit count, built once and shared.
#[derive(Debug)]
pub struct PauliBasis {
    n: usize,
    elements: Vec<BasisElement>,
}

impl PauliBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Matrix dimension 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, index: usize) -> &BasisElement {
        &self.elements[index]
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elements
    }
}

static BASES: [OnceLock<PauliBasis>; MAX_QUBITS] = [const { OnceLock::new() }; MAX_QUBITS];

/// Cached basis for `n` qubits.
pub fn pauli_basis(n: usize) -> Result<&'static PauliBasis> {
    check_qubits(n)?;
    Ok(BASES[n - 1].get_or_init(|| PauliBasis {
        n,
        elements: (0..basis_size(n)).map(|i| BasisElement::build(n, i)).collect(),
    }))
}

/// λ_index for `n` qubits.
pub fn basis_element(n: usize, index: usize) -> Result<&'static BasisElement> {
    let basis = pauli_basis(n)?;
    if index >= basis.len() {
        return input(format!(
            "basis index {index} out of range for n = {n} (max {})",
            basis.len() - 1
        ));
    }
    Ok(basis.element(index))
}

/// One-qubit sign: σ_i σ_j σ_i = s · σ_j.
#[inline]
pub fn one_qubit_sign(i: usize, j: usize) -> i8 {
    if i == 0 || j == 0 || i == j {
        1
    } else {
        -1
    }
}

/// The (4^n)x(4^n) table of ±1 with λ_i λ_j λ_i = s_ij λ_j / 2^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignTable {
    n: usize,
    dim: usize,
    entries: Vec<i8>,
}

impl SignTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.dim + j]
    }

    /// Dense product `S v`. The fast path is [`sign_transform`].
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.entries[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(&s, x)| f64::from(s) * x)
                    .sum()
            })
            .collect()
    }

    /// Kronecker product of two sign tables.
    pub fn kronecker(&self, other: &SignTable) -> SignTable {
        let dim = self.dim * other.dim;
        let mut entries = vec![0i8; dim * dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let s = self.entry(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        entries[(i * other.dim + k) * dim + j * other.dim + l] =
                            s * other.entry(k, l);
                    }
                }
            }
        }
        SignTable {
            n: self.n + other.n,
            dim,
            entries,
        }
    }

    fn one_qubit() -> SignTable {
        let entries = (0..16).map(|k| one_qubit_sign(k / 4, k % 4)).collect();
        SignTable {
            n: 1,
            dim: 4,
            entries,
        }
    }
}

/// Sign table for `n` qubits as the Kronecker power of the one-qubit table.
pub fn sign_table(n: usize) -> Result<SignTable> {
    check_qubits(n)?;
    let base = SignTable::one_qubit();
    let mut table = base.clone();
    for _ in 1..n {
        table = table.kronecker(&base);
    }
    Ok(table)
}

/// In-place multiplication of `v` (length 4^n) by the n-qubit sign table.
///
/// Applies the 4x4 one-qubit table along each base-4 digit in turn, so the
/// cost is O(4^n · n) with no table materialized.
pub fn sign_transform(v: &mut [f64]) {
    let len = v.len();
    assert!(
        len >= 4 && len.is_power_of_two() && len.trailing_zeros().is_multiple_of(2),
        "sign_transform needs a length 4^n, got {len}"
    );
    let mut stride = 1;
    while stride < len {
        for block in (0..len).step_by(4 * stride) {
            for offset in block..block + stride {
                let a = v[offset];
                let b = v[offset + stride];
                let cc = v[offset + 2 * stride];
                let d = v[offset + 3 * stride];
                v[offset] = a + b + cc + d;
                v[offset + stride] = a + b - cc - d;
                v[offset + 2 * stride] = a - b + cc - d;
                v[offset + 3 * stride] = a - b - cc + d;
            }
        }
        stride *= 4;
    }
}
