use crate::error::{Error, Result};
use crate::hilbert::{
    hermitian_eigen, HermitianEigen, Operator, QubitAddress, Register, StateVector,
};
use crate::scalar::{re, Real, C};

/// Hermitian, unit-trace operator on a labeled register.
///
/// Construction enforces Hermiticity and unit trace. Positivity is reported
/// by [`DensityMatrix::min_eigenvalue`] / [`DensityMatrix::is_physical`]
/// rather than enforced, so unconstrained estimates (linear-inversion
/// tomography) can be represented and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    register: Register,
    matrix: Operator<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(register: Register, matrix: Operator<T>) -> Result<Self> {
        if matrix.dim() != register.dim() {
            return Err(Error::DimensionMismatch {
                expected: register.dim(),
                actual: matrix.dim(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > T::hermitian_tol() {
            return Err(Error::NotHermitian(dev.as_f64()));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > T::hermitian_tol() || tr.im.abs() > T::hermitian_tol() {
            return Err(Error::InvalidTrace(tr.re.as_f64()));
        }
        Ok(DensityMatrix { register, matrix })
    }

    pub fn from_pure(state: &StateVector<T>) -> Self {
        let a = state.amplitudes();
        let matrix = Operator::outer(a, a).expect("same vector");
        DensityMatrix {
            register: state.register().clone(),
            matrix,
        }
    }

    pub fn maximally_mixed(register: Register) -> Self {
        let d = register.dim();
        let matrix = Operator::identity(d).scale_real(T::one() / T::of(d as f64));
        DensityMatrix { register, matrix }
    }

    /// `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Self, w: T) -> Result<Self> {
        if self.register != other.register {
            return Err(Error::RegisterMismatch);
        }
        Ok(DensityMatrix {
            register: self.register.clone(),
            matrix: &self.matrix.scale_real(w) + &other.matrix.scale_real(T::one() - w),
        })
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn matrix(&self) -> &Operator<T> {
        &self.matrix
    }

    pub fn get(&self, r: usize, c: usize) -> C<T> {
        self.matrix.get(r, c)
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }

    /// `U ρ U†` with `op` acting on `targets`.
    pub fn conjugate(&self, op: &Operator<T>, targets: &[QubitAddress]) -> Result<Self> {
        let positions = targets
            .iter()
            .map(|&t| self.register.position(t))
            .collect::<Result<Vec<_>>>()?;
        let u = op.embed(&positions, self.register.len())?;
        Ok(DensityMatrix {
            register: self.register.clone(),
            matrix: &(&u * &self.matrix) * &u.adjoint(),
        })
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.matrix.dim())
            .map(|i| self.matrix.get(i, i).re)
            .collect()
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        hermitian_eigen(&self.matrix).expect("density matrices are Hermitian by construction")
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> Vec<T> {
        self.eigen().values
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues()[0]
    }

    pub fn is_physical(&self) -> bool {
        self.min_eigenvalue() >= -T::psd_tol()
    }

    /// Nearest physical state by clipping negative eigenvalues and renormalizing.
    pub fn clamp_to_physical(&self) -> Self {
        let e = self.eigen();
        let kept: T = e.values.iter().map(|&v| v.max(T::zero())).sum();
        let matrix = e.reconstruct_with(|v| v.max(T::zero()) / kept);
        DensityMatrix {
            register: self.register.clone(),
            matrix,
        }
    }

    /// `½ Σ|λ_i(ρ−σ)|`.
    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        if self.register.len() != other.register.len() {
            return Err(Error::RegisterMismatch);
        }
        let diff = &self.matrix - &other.matrix;
        let e = hermitian_eigen(&diff)?;
        Ok(e.values.iter().map(|v| v.abs()).sum::<T>() / T::of(2.0))
    }

    /// `⟨target|ρ|target⟩`.
    pub fn fidelity(&self, target: &StateVector<T>) -> Result<T> {
        fidelity(self, target)
    }

    pub fn partial_trace(&self, keep: &[QubitAddress]) -> Result<Self> {
        partial_trace(self, keep)
    }

    pub(crate) fn from_parts_unchecked(register: Register, matrix: Operator<T>) -> Self {
        DensityMatrix { register, matrix }
    }
}

pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, target: &StateVector<T>) -> Result<T> {
    if rho.register() != target.register() {
        return Err(Error::RegisterMismatch);
    }
    let v = rho.matrix.apply_vec(target.amplitudes())?;
    let f = target
        .amplitudes()
        .iter()
        .zip(&v)
        .map(|(a, b)| a.conj() * b)
        .fold(re(T::zero()), |x, y| x + y);
    Ok(f.re)
}

/// Reduced state on `keep`, in the order given.
pub fn partial_trace<T: Real>(
    rho: &DensityMatrix<T>,
    keep: &[QubitAddress],
) -> Result<DensityMatrix<T>> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    let reg = rho.register();
    let kept_reg = Register::new(keep.to_vec())?;
    let kept_bits = keep
        .iter()
        .map(|&q| reg.position(q).map(|p| reg.bit(p)))
        .collect::<Result<Vec<_>>>()?;
    let traced_bits: Vec<usize> = (0..reg.len())
        .map(|p| reg.bit(p))
        .filter(|b| !kept_bits.contains(b))
        .collect();
    let k = kept_bits.len();
    let t = traced_bits.len();
    let place = |a: usize, e: usize| {
        let mut idx = 0usize;
        for (j, &b) in kept_bits.iter().enumerate() {
            idx |= ((a >> (k - 1 - j)) & 1) << b;
        }
        for (j, &b) in traced_bits.iter().enumerate() {
            idx |= ((e >> (t - 1 - j)) & 1) << b;
        }
        idx
    };
    let m = Operator::from_fn(1 << k, |a, b| {
        (0..(1usize << t))
            .map(|e| rho.matrix.get(place(a, e), place(b, e)))
            .fold(re(T::zero()), |x, y| x + y)
    });
    Ok(DensityMatrix::from_parts_unchecked(kept_reg, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn reg2() -> Register {
        Register::new(vec![QubitAddress::A_PATH, QubitAddress::A_POL]).unwrap()
    }

    fn plus() -> StateVector<f64> {
        StateVector::superposition(
            Register::single(QubitAddress::A_PATH),
            &[(c(1.0, 0.0), "0"), (c(1.0, 0.0), "1")],
        )
        .unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let p = plus();
        assert!((fidelity(&DensityMatrix::from_pure(&p), &p).unwrap() - 1.0).abs() < 1e-15);
        let mixed = DensityMatrix::maximally_mixed(p.register().clone());
        assert!((fidelity(&mixed, &p).unwrap() - 0.5).abs() < 1e-15);
        let other = StateVector::<f64>::basis(Register::single(QubitAddress::A_POL), 0).unwrap();
        assert_eq!(fidelity(&mixed, &other), Err(Error::RegisterMismatch));
    }

    #[test]
    fn partial_trace_examples() {
        let s = StateVector::<f64>::from_bits(reg2(), "00").unwrap();
        let r = partial_trace(&DensityMatrix::from_pure(&s), &[QubitAddress::A_PATH]).unwrap();
        assert_eq!(r.get(0, 0).re, 1.0);
        assert_eq!(r.get(1, 1).re, 0.0);

        let bell = StateVector::superposition(reg2(), &[(c(1.0, 0.0), "00"), (c(1.0, 0.0), "11")])
            .unwrap();
        let rho = DensityMatrix::from_pure(&bell);
        for q in [QubitAddress::A_PATH, QubitAddress::A_POL] {
            let red = rho.partial_trace(&[q]).unwrap();
            let half = DensityMatrix::maximally_mixed(Register::single(q));
            assert!(red.matrix().max_abs_diff(half.matrix()) < 1e-15);
        }
        assert_eq!(rho.partial_trace(&[]), Err(Error::EmptyKeep));
        assert_eq!(
            rho.partial_trace(&[QubitAddress::B_POL]),
            Err(Error::UnknownAddress(QubitAddress::B_POL))
        );
    }

    #[test]
    fn keep_order_permutes_reduced_state() {
        let s = StateVector::<f64>::from_bits(reg2(), "01").unwrap();
        let rho = DensityMatrix::from_pure(&s);
        let swapped = rho
            .partial_trace(&[QubitAddress::A_POL, QubitAddress::A_PATH])
            .unwrap();
        // |01⟩ seen from (pol, path) is |10⟩
        assert_eq!(swapped.get(2, 2).re, 1.0);
    }

    #[test]
    fn new_validates() {
        let bad = Operator::<f64>::from_real_rows([[0.5, 0.1], [0.0, 0.5]]);
        assert!(matches!(
            DensityMatrix::new(Register::single(QubitAddress::A_PATH), bad),
            Err(Error::NotHermitian(_))
        ));
        let bad_trace = Operator::<f64>::identity(2);
        assert!(matches!(
            DensityMatrix::new(Register::single(QubitAddress::A_PATH), bad_trace),
            Err(Error::InvalidTrace(_))
        ));
    }

    #[test]
    fn clamp_removes_negative_eigenvalues() {
        let m = Operator::<f64>::from_real_rows([[1.1, 0.0], [0.0, -0.1]]);
        let rho = DensityMatrix::new(Register::single(QubitAddress::A_PATH), m).unwrap();
        assert!(!rho.is_physical());
        let fixed = rho.clamp_to_physical();
        assert!(fixed.is_physical());
        assert!((fixed.trace() - 1.0).abs() < 1e-14);
        assert!((fixed.get(0, 0).re - 1.0).abs() < 1e-14);
    }
}
