use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Operator<T> {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            data: vec![C::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(
            dim,
            |r, c| if r == c { re(T::one()) } else { re(T::zero()) },
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Operator { dim, data }
    }

    pub fn from_row_major(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Operator { dim, data })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self::from_fn(N, |r, c| re(T::of(rows[r][c])))
    }

    pub fn diagonal(diag: &[C<T>]) -> Self {
        Self::from_fn(
            diag.len(),
            |r, c| if r == c { diag[r] } else { re(T::zero()) },
        )
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Result<Self> {
        if v.len() != w.len() {
            return Err(Error::DimensionMismatch {
                expected: v.len(),
                actual: w.len(),
            });
        }
        Ok(Self::from_fn(v.len(), |r, c| v[r] * w[c].conj()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of qubits when `dim` is a power of two.
    pub fn qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: C<T>) {
        self.data[r * self.dim + c] = v;
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim)
            .map(|i| self.get(i, i))
            .fold(re(T::zero()), |a, b| a + b)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(re(s))
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the high bits.
    pub fn kron(&self, other: &Self) -> Self {
        let d2 = other.dim;
        Self::from_fn(self.dim * d2, |r, c| {
            self.get(r / d2, c / d2) * other.get(r % d2, c % d2)
        })
    }

    pub fn apply_vec(&self, v: &[C<T>]) -> Result<Vec<C<T>>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| {
                (0..self.dim)
                    .map(|c| self.get(r, c) * v[c])
                    .fold(re(T::zero()), |a, b| a + b)
            })
            .collect())
    }

    /// `max |a_ij − b_ij|`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "operator dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn hermitian_deviation(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `max |U†U − I|`.
    pub fn unitarity_deviation(&self) -> T {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn commutator_norm(&self, other: &Self) -> T {
        (self * other).max_abs_diff(&(other * self))
    }

    /// Full-register matrix of `self` acting on the qubits at `positions`
    /// (zero-based, big-endian) of an `n`-qubit register.
    pub fn embed(&self, positions: &[usize], n: usize) -> Result<Self> {
        let k = positions.len();
        if self.dim != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                actual: self.dim,
            });
        }
        let full = 1usize << n;
        let bits: Vec<usize> = positions.iter().map(|&p| n - 1 - p).collect();
        let local = |x: usize| {
            bits.iter()
                .enumerate()
                .fold(0usize, |acc, (j, &b)| acc | (((x >> b) & 1) << (k - 1 - j)))
        };
        let mask: usize = bits.iter().map(|&b| 1usize << b).sum();
        Ok(Self::from_fn(full, |r, c| {
            if (r & !mask) != (c & !mask) {
                re(T::zero())
            } else {
                self.get(local(r), local(c))
            }
        }))
    }
}

impl<T: Real> Mul for &Operator<T> {
    type Output = Operator<T>;
    fn mul(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        let d = self.dim;
        let mut out = Operator::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Operator<T> {
    type Output = Operator<T>;
    fn add(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Operator<T> {
    type Output = Operator<T>;
    fn sub(self, rhs: &Operator<T>) -> Operator<T> {
        assert_eq!(self.dim, rhs.dim, "operator dimensions differ");
        Operator {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}
