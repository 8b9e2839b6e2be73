//! Dense row-major complex matrices over registers of qubits.
//!
//! The dimension of every matrix is a power of two; qubit index 0 is the
//! leftmost tensor factor (most significant bit of a basis index).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use super::QmathError;

/// Largest qubit register accepted by operator constructors.
pub const MAX_QUBITS: usize = 14;

/// Square complex matrix of dimension `2^k`, stored dense and row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

/// Bit position (from the least significant end) of qubit `q` in a basis
/// index over `n` qubits.
#[inline]
pub(crate) fn bit_of(qubit: usize, n_qubits: usize) -> usize {
    n_qubits - 1 - qubit
}

/// Basis index with the bits at positions `pa` and `pb` exchanged.
#[inline]
pub(crate) fn swap_bits(index: usize, pa: usize, pb: usize) -> usize {
    let ba = (index >> pa) & 1;
    let bb = (index >> pb) & 1;
    if ba == bb {
        index
    } else {
        index ^ ((1 << pa) | (1 << pb))
    }
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension. Panics if `dim` is not a power of
    /// two: non-qubit dimensions are a programming error, not an input error.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim.is_power_of_two(), "matrix dimension must be a power of two");
        Self { dim, entries: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self, QmathError> {
        if !dim.is_power_of_two() {
            return Err(QmathError::NotPowerOfTwo(dim));
        }
        if entries.len() != dim * dim {
            return Err(QmathError::BadEntryCount { found: entries.len(), expected: dim * dim });
        }
        Ok(Self { dim, entries })
    }

    /// Convenience constructor from rows of real numbers.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, QmathError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(QmathError::BadEntryCount { found: row.len(), expected: dim });
            }
            entries.extend(row.iter().map(|&x| C64::new(x, 0.0)));
        }
        Self::from_entries(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|&e| e * factor).collect() }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// Largest entry modulus of `self - other`; dimensions must match.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest elementwise deviation from the adjoint, `max |m - m†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                let dev = (self[(r, c)] - self[(c, r)].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, QmathError> {
        if self.dim != other.dim {
            return Err(QmathError::DimMismatch(self.dim, other.dim));
        }
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; `self` is the left (more significant) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let da = self.dim;
        let db = other.dim;
        let d = da * db;
        let mut out = Self::zeros(d);
        for ra in 0..da {
            for ca in 0..da {
                let a = self[(ra, ca)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for rb in 0..db {
                    for cb in 0..db {
                        out[(ra * db + rb, ca * db + cb)] = a * other[(rb, cb)];
                    }
                }
            }
        }
        out
    }

    /// Partial trace keeping the listed qubits, in ascending index order.
    /// Duplicate indices are collapsed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, QmathError> {
        let n = self.n_qubits();
        if keep.is_empty() {
            return Err(QmathError::EmptyKeepSet);
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&bad) = keep.iter().find(|&&q| q >= n) {
            return Err(QmathError::QubitOutOfRange { index: bad, qubits: n });
        }
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let kd = 1usize << keep.len();

        // Scatter tables: sub-index -> contribution to the full basis index.
        let scatter = |qubits: &[usize]| -> Vec<usize> {
            let width = qubits.len();
            (0..1usize << width)
                .map(|sub| {
                    let mut full = 0usize;
                    for (j, &q) in qubits.iter().enumerate() {
                        let bit = (sub >> (width - 1 - j)) & 1;
                        full |= bit << bit_of(q, n);
                    }
                    full
                })
                .collect()
        };
        let kept_part = scatter(&keep);
        let traced_part = scatter(&traced);

        let mut out = Self::zeros(kd);
        for r in 0..kd {
            for c in 0..kd {
                let mut sum = C64::new(0.0, 0.0);
                for &t in &traced_part {
                    sum += self[(kept_part[r] | t, kept_part[c] | t)];
                }
                out[(r, c)] = sum;
            }
        }
        Ok(out)
    }

    /// Conjugation `U m U†` by the partial-swap unitary
    /// `U = cos(strength)·1 + i·sin(strength)·S_{a,b}` without materializing
    /// `U`. With `σ` the basis permutation that exchanges qubits `a` and `b`:
    ///
    /// ```text
    /// out[i][j] = cos² m[i][j] + sin² m[σi][σj]
    ///           + i·cos·sin·(m[σi][j] - m[i][σj])
    /// ```
    pub fn apply_partial_swap(
        &self,
        strength: f64,
        a: usize,
        b: usize,
    ) -> Result<Self, QmathError> {
        let n = self.n_qubits();
        if a >= n {
            return Err(QmathError::QubitOutOfRange { index: a, qubits: n });
        }
        if b >= n {
            return Err(QmathError::QubitOutOfRange { index: b, qubits: n });
        }
        if a == b {
            return Err(QmathError::EqualQubits(a));
        }
        let (s, c) = strength.sin_cos();
        let c2 = c * c;
        let s2 = s * s;
        let ics = C64::new(0.0, c * s);
        let pa = bit_of(a, n);
        let pb = bit_of(b, n);
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            let si = swap_bits(i, pa, pb);
            for j in 0..d {
                let sj = swap_bits(j, pa, pb);
                out[(i, j)] = c2 * self[(i, j)]
                    + s2 * self[(si, sj)]
                    + ics * (self[(si, j)] - self[(i, sj)]);
            }
        }
        Ok(out)
    }
}

/// Commutator `a·b - b·a`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, QmathError> {
    if a.dim() != b.dim() {
        return Err(QmathError::DimMismatch(a.dim(), b.dim()));
    }
    Ok(&a.matmul(b)? - &b.matmul(a)?)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.dim + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix addition: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix subtraction: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: C64) -> ComplexMatrix {
        self.scale(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix(dim={})", self.dim)?;
        for r in 0..self.dim {
            write!(f, "  [")?;
            for c in 0..self.dim {
                let e = self[(r, c)];
                write!(f, " {:+.4}{:+.4}i", e.re, e.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
