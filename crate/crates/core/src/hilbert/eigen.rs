use crate::error::{Error, Result};
use crate::hilbert::Operator;
use crate::scalar::{cis, re, Real, C};

/// Eigendecomposition `A = V diag(values) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    /// Ascending.
    pub values: Vec<T>,
    /// Column `j` is the eigenvector of `values[j]`.
    pub vectors: Operator<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, j: usize) -> Vec<C<T>> {
        (0..self.vectors.dim())
            .map(|r| self.vectors.get(r, j))
            .collect()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> Operator<T> {
        let d = self.vectors.dim();
        Operator::from_fn(d, |r, c| {
            (0..d)
                .map(|j| {
                    self.vectors.get(r, j) * self.vectors.get(c, j).conj() * re(f(self.values[j]))
                })
                .fold(re(T::zero()), |a, b| a + b)
        })
    }
}

/// Cyclic complex Jacobi iteration.
///
/// Each rotation first removes the phase of the pivot, then applies a real
/// Givens rotation, so the whole update is unitary.
pub fn hermitian_eigen<T: Real>(a: &Operator<T>) -> Result<HermitianEigen<T>> {
    let dev = a.hermitian_deviation();
    let scale = a
        .as_slice()
        .iter()
        .map(|z| z.norm())
        .fold(T::zero(), T::max);
    if dev > T::hermitian_tol() * scale.max(T::one()) {
        return Err(Error::NotHermitian(dev.as_f64()));
    }
    let d = a.dim();
    // symmetrize so round-off in the input does not bias the iteration
    let mut m = Operator::from_fn(d, |r, c| {
        (a.get(r, c) + a.get(c, r).conj()).scale(T::of(0.5))
    });
    let mut v = Operator::identity(d);
    let stop = T::epsilon() * scale.max(T::min_positive_value());

    for _sweep in 0..100 {
        let off = off_diagonal(&m);
        if off <= stop {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= stop * T::of(1e-3) {
                    continue;
                }
                let phase = cis(-apq.arg());
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cth = T::one() / (T::one() + t * t).sqrt();
                let sth = t * cth;
                // J = diag phase on q, then Givens: J_pp = c, J_pq = s, J_qp = -s·φ, J_qq = c·φ
                let j = [[re(cth), re(sth)], [re(-sth) * phase, re(cth) * phase]];
                rotate_columns(&mut m, p, q, &j);
                rotate_rows_adjoint(&mut m, p, q, &j);
                rotate_columns(&mut v, p, q, &j);
                m.set(p, q, re(T::zero()));
                m.set(q, p, re(T::zero()));
                m.set(p, p, re(m.get(p, p).re));
                m.set(q, q, re(m.get(q, q).re));
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| {
        m.get(x, x)
            .re
            .partial_cmp(&m.get(y, y).re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = Operator::from_fn(d, |r, c| v.get(r, order[c]));
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal<T: Real>(m: &Operator<T>) -> T {
    let d = m.dim();
    let mut s = T::zero();
    for r in 0..d {
        for c in 0..d {
            if r != c {
                s += m.get(r, c).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// `M ← M J` on columns `p`, `q`.
fn rotate_columns<T: Real>(m: &mut Operator<T>, p: usize, q: usize, j: &[[C<T>; 2]; 2]) {
    for k in 0..m.dim() {
        let mp = m.get(k, p);
        let mq = m.get(k, q);
        m.set(k, p, mp * j[0][0] + mq * j[1][0]);
        m.set(k, q, mp * j[0][1] + mq * j[1][1]);
    }
}

/// `M ← J† M` on rows `p`, `q`.
fn rotate_rows_adjoint<T: Real>(m: &mut Operator<T>, p: usize, q: usize, j: &[[C<T>; 2]; 2]) {
    for k in 0..m.dim() {
        let mp = m.get(p, k);
        let mq = m.get(q, k);
        m.set(p, k, j[0][0].conj() * mp + j[1][0].conj() * mq);
        m.set(q, k, j[0][1].conj() * mp + j[1][1].conj() * mq);
    }
}
