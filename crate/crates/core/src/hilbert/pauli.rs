use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, Operator, Register, StateVector};
use crate::scalar::{c, re, Real, C};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix<T: Real>(self) -> Operator<T> {
        let (o, z) = (T::one(), T::zero());
        let data = match self {
            Pauli::I => [c(o, z), c(z, z), c(z, z), c(o, z)],
            Pauli::X => [c(z, z), c(o, z), c(o, z), c(z, z)],
            Pauli::Y => [c(z, z), c(z, -o), c(z, o), c(z, z)],
            Pauli::Z => [c(o, z), c(z, z), c(z, z), c(-o, z)],
        };
        Operator::from_row_major(2, data.to_vec()).expect("2x2")
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(ch: char) -> Result<Self> {
        match ch.to_ascii_uppercase() {
            'I' | '1' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(Error::Parse(format!("`{other}` is not a Pauli label"))),
        }
    }

    /// `(flips, phase)` with `σ|b⟩ = phase · |b ⊕ flips⟩`.
    fn action<T: Real>(self, bit: usize) -> (bool, C<T>) {
        let (o, z) = (T::one(), T::zero());
        match (self, bit) {
            (Pauli::I, _) => (false, c(o, z)),
            (Pauli::X, _) => (true, c(o, z)),
            (Pauli::Y, 0) => (true, c(z, o)),
            (Pauli::Y, _) => (true, c(z, -o)),
            (Pauli::Z, 0) => (false, c(o, z)),
            (Pauli::Z, _) => (false, c(-o, z)),
        }
    }
}

/// Tensor product of single-qubit Paulis, one per register slot (qubit 1 first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Self {
        PauliString(ops)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    /// `σ` on the zero-based `positions`, identity elsewhere.
    pub fn on(n: usize, placed: &[(usize, Pauli)]) -> Self {
        let mut v = vec![Pauli::I; n];
        for &(p, s) in placed {
            v[p] = s;
        }
        PauliString(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// Zero-based positions carrying a non-identity Pauli.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != Pauli::I)
            .map(|(i, _)| i)
            .collect()
    }

    /// Label with `1` for identity slots, e.g. `X11X`.
    pub fn involved_label(&self) -> String {
        self.0
            .iter()
            .map(|&p| if p == Pauli::I { '1' } else { p.symbol() })
            .collect()
    }

    /// Dense matrix via Kronecker products.
    pub fn to_operator<T: Real>(&self) -> Operator<T> {
        self.0
            .iter()
            .fold(Operator::identity(1), |acc, p| acc.kron(&p.matrix()))
    }

    /// Flip mask and phase of `P|index⟩`.
    pub(crate) fn act<T: Real>(&self, index: usize) -> (usize, C<T>) {
        let n = self.0.len();
        let mut flip = 0usize;
        let mut phase = re(T::one());
        for (pos, &p) in self.0.iter().enumerate() {
            let b = n - 1 - pos;
            let (f, ph) = p.action::<T>((index >> b) & 1);
            if f {
                flip |= 1 << b;
            }
            phase = phase * ph;
        }
        (index ^ flip, phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Pauli::from_symbol)
            .collect::<Result<Vec<_>>>()
            .map(PauliString)
    }
}

impl From<PauliString> for String {
    fn from(p: PauliString) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for PauliString {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Complex-weighted sum of Pauli strings on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T> {
    n: usize,
    terms: Vec<(C<T>, PauliString)>,
}

impl<T: Real> Observable<T> {
    pub fn zero(n: usize) -> Self {
        Observable {
            n,
            terms: Vec::new(),
        }
    }

    pub fn identity(n: usize, weight: T) -> Self {
        Observable {
            n,
            terms: vec![(re(weight), PauliString::identity(n))],
        }
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(C<T>, PauliString)] {
        &self.terms
    }

    pub fn push(&mut self, weight: C<T>, p: PauliString) -> Result<()> {
        if p.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: p.len(),
            });
        }
        self.terms.push((weight, p));
        Ok(())
    }

    pub fn with(mut self, weight: C<T>, p: PauliString) -> Result<Self> {
        self.push(weight, p)?;
        Ok(self)
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        Observable {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(w, p)| (*w * s, p.clone()))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Observable { n: self.n, terms })
    }

    /// `Σ|w|`, a bound on the operator norm.
    pub fn norm_bound(&self) -> T {
        self.terms.iter().map(|(w, _)| w.norm()).sum()
    }

    pub fn to_operator(&self) -> Operator<T> {
        let d = 1usize << self.n;
        self.terms.iter().fold(Operator::zeros(d), |acc, (w, p)| {
            &acc + &p.to_operator::<T>().scale(*w)
        })
    }
}

impl<T: Real> From<PauliString> for Observable<T> {
    fn from(p: PauliString) -> Self {
        Observable {
            n: p.len(),
            terms: vec![(re(T::one()), p)],
        }
    }
}

/// Anything Pauli expectations can be taken on.
pub trait QuantumState<T: Real> {
    fn register(&self) -> &Register;

    /// `⟨P⟩` evaluated by bit manipulation, without building `P`.
    fn pauli_expectation(&self, p: &PauliString) -> Result<T>;

    /// `⟨O⟩` for a whole-register matrix.
    fn operator_expectation(&self, op: &Operator<T>) -> Result<C<T>>;

    fn to_density(&self) -> DensityMatrix<T>;
}

impl<T: Real> QuantumState<T> for StateVector<T> {
    fn register(&self) -> &Register {
        StateVector::register(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<T> {
        check_len(p, self.register().len())?;
        let a = self.amplitudes();
        let total = (0..a.len()).fold(re(T::zero()), |acc, x| {
            let (y, ph) = p.act::<T>(x);
            acc + a[y].conj() * ph * a[x]
        });
        Ok(total.re)
    }

    fn operator_expectation(&self, op: &Operator<T>) -> Result<C<T>> {
        let v = op.apply_vec(self.amplitudes())?;
        Ok(self
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .fold(re(T::zero()), |x, y| x + y))
    }

    fn to_density(&self) -> DensityMatrix<T> {
        DensityMatrix::from_pure(self)
    }
}

impl<T: Real> QuantumState<T> for DensityMatrix<T> {
    fn register(&self) -> &Register {
        DensityMatrix::register(self)
    }

    fn pauli_expectation(&self, p: &PauliString) -> Result<T> {
        check_len(p, self.register().len())?;
        // tr(ρP) = Σ_a ρ[a, P(a)] · phase(a)
        let d = self.register().dim();
        let total = (0..d).fold(re(T::zero()), |acc, a| {
            let (b, ph) = p.act::<T>(a);
            acc + self.get(a, b) * ph
        });
        Ok(total.re)
    }

    fn operator_expectation(&self, op: &Operator<T>) -> Result<C<T>> {
        if op.dim() != self.register().dim() {
            return Err(Error::DimensionMismatch {
                expected: self.register().dim(),
                actual: op.dim(),
            });
        }
        Ok((self.matrix() * op).trace())
    }

    fn to_density(&self) -> DensityMatrix<T> {
        self.clone()
    }
}

fn check_len(p: &PauliString, n: usize) -> Result<()> {
    if p.len() != n {
        return Err(Error::RegisterMismatch);
    }
    Ok(())
}

/// `Σ w_k ⟨P_k⟩`, possibly complex for non-Hermitian observables.
pub fn expectation_complex<T: Real, S: QuantumState<T> + ?Sized>(
    obs: &Observable<T>,
    state: &S,
) -> Result<C<T>> {
    if obs.qubits() != state.register().len() {
        return Err(Error::RegisterMismatch);
    }
    obs.terms().iter().try_fold(re(T::zero()), |acc, (w, p)| {
        Ok(acc + *w * re(state.pauli_expectation(p)?))
    })
}

/// Real expectation; fails when the imaginary residue exceeds the Hermiticity tolerance.
pub fn expectation<T: Real, S: QuantumState<T> + ?Sized>(
    obs: &Observable<T>,
    state: &S,
) -> Result<T> {
    let z = expectation_complex(obs, state)?;
    if z.im.abs() > T::hermitian_tol() {
        return Err(Error::NonRealExpectation(z.im.as_f64()));
    }
    Ok(z.re)
}
