use crate::error::{Error, Result};
use crate::hilbert::{Operator, QubitAddress, Register};
use crate::scalar::{re, Real, C};

/// Unit-norm amplitude vector over a labeled register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    register: Register,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> StateVector<T> {
    /// Fails unless `amplitudes` has `2^n` entries and unit norm.
    pub fn new(register: Register, amplitudes: Vec<C<T>>) -> Result<Self> {
        check_len(&register, amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if (n2 - T::one()).abs() > T::identity_tol() * T::of(10.0) {
            return Err(Error::NotNormalized(n2.as_f64()));
        }
        Ok(StateVector {
            register,
            amplitudes,
        })
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(register: Register, amplitudes: Vec<C<T>>) -> Result<Self> {
        check_len(&register, amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if n2 <= T::zero() {
            return Err(Error::NotNormalized(0.0));
        }
        let inv = re(T::one() / n2.sqrt());
        Ok(StateVector {
            register,
            amplitudes: amplitudes.into_iter().map(|a| a * inv).collect(),
        })
    }

    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let dim = register.dim();
        if index >= dim {
            return Err(Error::OutOfRange {
                name: "basis index",
                value: index as f64,
                range: "0..2^n",
            });
        }
        let mut amps = vec![re(T::zero()); dim];
        amps[index] = re(T::one());
        Ok(StateVector {
            register,
            amplitudes: amps,
        })
    }

    /// Basis state from a bitstring such as `"0110"` (qubit 1 first).
    pub fn from_bits(register: Register, bits: &str) -> Result<Self> {
        let idx = parse_bits(bits, register.len())?;
        Self::basis(register, idx)
    }

    /// Sum of `(coefficient, bitstring)` terms, normalized.
    pub fn superposition(register: Register, terms: &[(C<T>, &str)]) -> Result<Self> {
        let mut amps = vec![re(T::zero()); register.dim()];
        for (coef, bits) in terms {
            amps[parse_bits(bits, register.len())?] += *coef;
        }
        Self::normalized(register, amps)
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, bits: &str) -> Result<C<T>> {
        Ok(self.amplitudes[parse_bits(bits, self.register.len())?])
    }

    pub fn norm_sqr(&self) -> T {
        norm_sqr(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.register != other.register {
            return Err(Error::RegisterMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .fold(re(T::zero()), |x, y| x + y))
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    /// Probability of each computational basis state.
    pub fn probabilities(&self) -> Vec<T> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply(&self, op: &Operator<T>, targets: &[QubitAddress]) -> Result<Self> {
        apply(op, targets, self)
    }

    /// Applies a whole-register matrix.
    pub fn evolve(&self, op: &Operator<T>) -> Result<Self> {
        Ok(StateVector {
            register: self.register.clone(),
            amplitudes: op.apply_vec(&self.amplitudes)?,
        })
    }

    /// Same amplitudes relabeled onto another register of equal size.
    pub fn relabel(&self, register: Register) -> Result<Self> {
        if register.len() != self.register.len() {
            return Err(Error::DimensionMismatch {
                expected: self.register.len(),
                actual: register.len(),
            });
        }
        Ok(StateVector {
            register,
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// Same state expressed on a permutation of its register.
    pub fn reorder(&self, target: &Register) -> Result<Self> {
        let n = self.register.len();
        if target.len() != n {
            return Err(Error::RegisterMismatch);
        }
        let src_bits = target
            .qubits()
            .iter()
            .map(|&q| self.register.position(q).map(|p| self.register.bit(p)))
            .collect::<Result<Vec<_>>>()?;
        let amps = (0..self.amplitudes.len())
            .map(|j| {
                let i = src_bits.iter().enumerate().fold(0usize, |acc, (pos, &b)| {
                    acc | (((j >> (n - 1 - pos)) & 1) << b)
                });
                self.amplitudes[i]
            })
            .collect();
        Ok(StateVector {
            register: target.clone(),
            amplitudes: amps,
        })
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        tensor(&[self.clone(), other.clone()])
    }
}

/// Kronecker product of states on disjoint registers, in the given order.
pub fn tensor<T: Real>(parts: &[StateVector<T>]) -> Result<StateVector<T>> {
    let mut reg = Register::new(Vec::new())?;
    let mut amps = vec![re(T::one())];
    for p in parts {
        reg = reg.concat(&p.register)?;
        amps = amps
            .iter()
            .flat_map(|&a| p.amplitudes.iter().map(move |&b| a * b))
            .collect();
    }
    Ok(StateVector {
        register: reg,
        amplitudes: amps,
    })
}

/// Applies `op` to `targets` (the first target is the most significant bit
/// of `op`'s index) with identity on the rest of the register.
pub fn apply<T: Real>(
    op: &Operator<T>,
    targets: &[QubitAddress],
    state: &StateVector<T>,
) -> Result<StateVector<T>> {
    let k = targets.len();
    if op.dim() != 1 << k {
        return Err(Error::DimensionMismatch {
            expected: 1 << k,
            actual: op.dim(),
        });
    }
    let reg = &state.register;
    let mut bits = Vec::with_capacity(k);
    for (i, &t) in targets.iter().enumerate() {
        if targets[..i].contains(&t) {
            return Err(Error::AddressCollision(t));
        }
        bits.push(reg.bit(reg.position(t)?));
    }
    let mask: usize = bits.iter().map(|&b| 1usize << b).sum();
    // full index of local sub-index `s` on top of a base index with target bits clear
    let spread = |base: usize, s: usize| {
        bits.iter()
            .enumerate()
            .fold(base, |acc, (j, &b)| acc | (((s >> (k - 1 - j)) & 1) << b))
    };
    let sub = 1usize << k;
    let mut out = vec![re(T::zero()); state.amplitudes.len()];
    let mut local = vec![re(T::zero()); sub];
    for base in (0..state.amplitudes.len()).filter(|i| i & mask == 0) {
        for (s, slot) in local.iter_mut().enumerate() {
            *slot = state.amplitudes[spread(base, s)];
        }
        for r in 0..sub {
            let mut acc = re(T::zero());
            for (cidx, &a) in local.iter().enumerate() {
                acc += op.get(r, cidx) * a;
            }
            out[spread(base, r)] = acc;
        }
    }
    Ok(StateVector {
        register: reg.clone(),
        amplitudes: out,
    })
}

fn norm_sqr<T: Real>(a: &[C<T>]) -> T {
    a.iter().map(|z| z.norm_sqr()).sum()
}

fn check_len(register: &Register, len: usize) -> Result<()> {
    if len != register.dim() {
        return Err(Error::DimensionMismatch {
            expected: register.dim(),
            actual: len,
        });
    }
    Ok(())
}

pub(crate) fn parse_bits(bits: &str, n: usize) -> Result<usize> {
    if bits.len() != n {
        return Err(Error::Parse(format!(
            "bitstring `{bits}` does not have {n} digits"
        )));
    }
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        _ => Err(Error::Parse(format!("bitstring `{bits}` contains `{ch}`"))),
    })
}
