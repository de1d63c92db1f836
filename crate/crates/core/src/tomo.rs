//! State tomography of one or two qubits from Pauli-basis counts.
//!
//! Every qubit is measured in X, Y and Z, so a complete data set has `3ⁿ`
//! settings, each with outcomes labelled by one `+`/`-` per qubit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::counts::{derive_seed, pauli_outcome_probabilities, sample, CountRecord};
use crate::error::{Error, Result};
use crate::hilbert::{
    fidelity, DensityMatrix, Operator, Pauli, PauliString, QuantumState, Register, StateVector,
};
use crate::scalar::{c, Real, C};

pub const MAX_QUBITS: usize = 2;

/// Count records, one per measurement setting, on a labelled register.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographyInput {
    pub qubits: Register,
    pub records: Vec<CountRecord>,
}

/// The `3ⁿ` settings in lexicographic X < Y < Z order.
pub fn settings(n: usize) -> Vec<PauliString> {
    let axes = [Pauli::X, Pauli::Y, Pauli::Z];
    (0..3usize.pow(n as u32))
        .map(|mut m| {
            let mut ops = vec![Pauli::I; n];
            for slot in ops.iter_mut().rev() {
                *slot = axes[m % 3];
                m /= 3;
            }
            PauliString::new(ops)
        })
        .collect()
}

fn outcome_labels(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|m| {
            (0..n)
                .map(|j| {
                    if (m >> (n - 1 - j)) & 1 == 0 {
                        '+'
                    } else {
                        '-'
                    }
                })
                .collect()
        })
        .collect()
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::OutOfRange {
            name: "tomography qubits",
            value: n as f64,
            range: "1..=2",
        });
    }
    Ok(())
}

/// Simulated counts: setting `i` is sampled with stream `derive_seed(seed, i)`.
pub fn simulate<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
    shots: u64,
    seed: u64,
) -> Result<TomographyInput> {
    let reg = state.register().clone();
    check_qubits(reg.len())?;
    let records = settings(reg.len())
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let probs = pauli_outcome_probabilities(s, state)?;
            let total: T = probs.values().copied().sum();
            let probs: BTreeMap<String, T> =
                probs.into_iter().map(|(k, v)| (k, v / total)).collect();
            sample(&s.to_string(), &probs, shots, derive_seed(seed, i as u64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TomographyInput {
        qubits: reg,
        records,
    })
}

/// Outcome weights per setting: counts, or exact probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Observations<T> {
    register: Register,
    /// Per setting, weights in [`outcome_labels`] order.
    data: Vec<(PauliString, Vec<T>)>,
}

impl<T: Real> Observations<T> {
    pub fn from_counts(input: &TomographyInput) -> Result<Self> {
        let n = input.qubits.len();
        check_qubits(n)?;
        let labels = outcome_labels(n);
        let mut by_setting: BTreeMap<String, Vec<T>> = BTreeMap::new();
        for rec in &input.records {
            rec.validate()?;
            let s: PauliString = rec.setting.parse()?;
            if s.len() != n || s.support().len() != n {
                return Err(Error::Parse(format!(
                    "setting `{}` must name one X/Y/Z per qubit",
                    rec.setting
                )));
            }
            let slot = by_setting
                .entry(s.to_string())
                .or_insert_with(|| vec![T::zero(); labels.len()]);
            for (k, &count) in &rec.outcome_counts {
                let idx = labels
                    .iter()
                    .position(|l| l == k)
                    .ok_or_else(|| Error::UnlabeledOutcome(k.clone()))?;
                slot[idx] += T::of(count as f64);
            }
        }
        let mut data = Vec::new();
        let mut missing = Vec::new();
        for s in settings(n) {
            match by_setting.remove(&s.to_string()) {
                Some(w) => {
                    if w.iter().all(|&x| x == T::zero()) {
                        return Err(Error::EmptyRecord);
                    }
                    data.push((s, w));
                }
                None => missing.push(s.to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::IncompleteSettings(missing.join(", ")));
        }
        Ok(Observations {
            register: input.qubits.clone(),
            data,
        })
    }

    /// Exact outcome probabilities of `state` in every setting.
    pub fn exact<S: QuantumState<T> + ?Sized>(state: &S) -> Result<Self> {
        let reg = state.register().clone();
        check_qubits(reg.len())?;
        let labels = outcome_labels(reg.len());
        let data = settings(reg.len())
            .into_iter()
            .map(|s| {
                let p = pauli_outcome_probabilities(&s, state)?;
                Ok((s, labels.iter().map(|l| p[l]).collect()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Observations {
            register: reg,
            data,
        })
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    fn projectors(&self) -> Vec<(Vec<Operator<T>>, &[T])> {
        let n = self.register.len();
        self.data
            .iter()
            .map(|(s, w)| {
                let ps = (0..1usize << n).map(|m| projector(s, m)).collect();
                (ps, w.as_slice())
            })
            .collect()
    }
}

/// `⊗_q (I ± σ_q)/2` for outcome bits `m` (0 is `+`).
fn projector<T: Real>(s: &PauliString, m: usize) -> Operator<T> {
    let n = s.len();
    let half = T::of(0.5);
    s.ops()
        .iter()
        .enumerate()
        .fold(Operator::identity(1), |acc, (q, p)| {
            let sign = if (m >> (n - 1 - q)) & 1 == 0 {
                T::one()
            } else {
                -T::one()
            };
            let local = &Operator::identity(2) + &p.matrix::<T>().scale_real(sign);
            acc.kron(&local.scale_real(half))
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Linear,
    MaxLikelihood,
}

/// Optimizer bookkeeping of a maximum-likelihood fit.
#[derive(Debug, Clone, PartialEq)]
pub struct MlDiagnostics<T> {
    pub converged: bool,
    pub iterations: usize,
    /// Log-likelihood after each accepted step, starting with the initial point.
    pub trace: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult<T> {
    pub rho: DensityMatrix<T>,
    pub method: Method,
    pub log_likelihood: Option<T>,
    pub fidelity_vs_target: Option<T>,
    pub diagnostics: Option<MlDiagnostics<T>>,
}

/// `⟨target|ρ|target⟩`, also stored on the result.
pub fn fidelity_report<T: Real>(
    result: &mut ReconstructionResult<T>,
    target: &StateVector<T>,
) -> Result<T> {
    if target.register().dim() != result.rho.register().dim() {
        return Err(Error::DimensionMismatch {
            expected: result.rho.register().dim(),
            actual: target.register().dim(),
        });
    }
    let target = target.relabel(result.rho.register().clone())?;
    let f = fidelity(&result.rho, &target)?;
    result.fidelity_vs_target = Some(f);
    Ok(f)
}

/// `ρ = 2⁻ⁿ Σ_P ⟨P⟩ P`, each `⟨P⟩` averaged over the settings that measure it.
///
/// The estimate is Hermitian with unit trace but may have negative eigenvalues.
pub fn linear_reconstruct_observations<T: Real>(
    obs: &Observations<T>,
) -> Result<ReconstructionResult<T>> {
    let n = obs.register.len();
    let d = 1usize << n;
    let mut m = Operator::zeros(d);
    for idx in 0..4usize.pow(n as u32) {
        let ops: Vec<Pauli> = (0..n)
            .map(|q| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][(idx >> (2 * (n - 1 - q))) & 3])
            .collect();
        let p = PauliString::new(ops);
        let value = if p.is_identity() {
            T::one()
        } else {
            pauli_estimate(obs, &p)
        };
        m = &m + &p.to_operator::<T>().scale_real(value);
    }
    let m = m.scale_real(T::one() / T::of(d as f64));
    let m = hermitize(&m);
    let rho = DensityMatrix::new(obs.register.clone(), m)?;
    let log_likelihood = Some(log_likelihood(&rho, obs));
    Ok(ReconstructionResult {
        rho,
        method: Method::Linear,
        log_likelihood,
        fidelity_vs_target: None,
        diagnostics: None,
    })
}

pub fn linear_reconstruct<T: Real>(input: &TomographyInput) -> Result<ReconstructionResult<T>> {
    linear_reconstruct_observations(&Observations::from_counts(input)?)
}

fn pauli_estimate<T: Real>(obs: &Observations<T>, p: &PauliString) -> T {
    let n = p.len();
    let support = p.support();
    let mut sum = T::zero();
    let mut used = 0usize;
    for (s, w) in &obs.data {
        if support.iter().any(|&q| s.ops()[q] != p.ops()[q]) {
            continue;
        }
        let total: T = w.iter().copied().sum();
        let e: T = w
            .iter()
            .enumerate()
            .map(|(m, &x)| {
                let minus = support
                    .iter()
                    .filter(|&&q| (m >> (n - 1 - q)) & 1 == 1)
                    .count();
                if minus % 2 == 0 {
                    x
                } else {
                    -x
                }
            })
            .sum();
        sum += e / total;
        used += 1;
    }
    sum / T::of(used as f64)
}

fn hermitize<T: Real>(m: &Operator<T>) -> Operator<T> {
    (m + &m.adjoint()).scale_real(T::of(0.5))
}

/// `Σ n log tr(Πρ)`; `−∞` if an observed outcome has zero probability.
pub fn log_likelihood<T: Real>(rho: &DensityMatrix<T>, obs: &Observations<T>) -> T {
    let mut total = T::zero();
    for (ps, w) in obs.projectors() {
        for (p, &n) in ps.iter().zip(w) {
            if n == T::zero() {
                continue;
            }
            let prob = (p * rho.matrix()).trace().re;
            if prob <= T::zero() {
                return T::neg_infinity();
            }
            total += n * prob.ln();
        }
    }
    total
}

/// Lower-triangular `T` with `ρ = T†T / tr(T†T)`.
///
/// Parameters are `(Re, Im)` of each entry on or below the diagonal, row by row.
#[derive(Debug, Clone)]
struct Cholesky {
    d: usize,
}

impl Cholesky {
    fn len(&self) -> usize {
        self.d * (self.d + 1)
    }

    fn unpack<T: Real>(&self, x: &[T]) -> Operator<T> {
        let mut t = Operator::zeros(self.d);
        let mut k = 0;
        for a in 0..self.d {
            for b in 0..=a {
                t.set(a, b, c(x[k], x[k + 1]));
                k += 2;
            }
        }
        t
    }

    /// Parameters of a lower-triangular `T` with `T†T = a` for positive
    /// semidefinite `a`: the Cholesky factor of `a` with its index order reversed.
    fn factor<T: Real>(&self, a: &Operator<T>) -> Vec<T> {
        let d = self.d;
        let m = |i: usize, j: usize| a.get(d - 1 - i, d - 1 - j);
        let mut l = vec![vec![C::<T>::new(T::zero(), T::zero()); d]; d];
        for j in 0..d {
            let mut diag = m(j, j).re;
            for k in 0..j {
                diag -= l[j][k].norm_sqr();
            }
            if diag <= T::epsilon() {
                continue;
            }
            let ljj = diag.sqrt();
            l[j][j] = c(ljj, T::zero());
            for i in j + 1..d {
                let mut v = m(i, j);
                for k in 0..j {
                    v -= l[i][k] * l[j][k].conj();
                }
                l[i][j] = v / ljj;
            }
        }
        let mut x = Vec::with_capacity(self.len());
        for a_ in 0..d {
            for b in 0..=a_ {
                let t = l[d - 1 - b][d - 1 - a_].conj();
                x.push(t.re);
                x.push(t.im);
            }
        }
        x
    }

    fn identity<T: Real>(&self) -> Vec<T> {
        let mut x = vec![T::zero(); self.len()];
        let s = T::one() / T::of(self.d as f64).sqrt();
        let mut k = 0;
        for a in 0..self.d {
            for b in 0..=a {
                if a == b {
                    x[k] = s;
                }
                k += 2;
            }
        }
        x
    }
}

struct Likelihood<'a, T> {
    projectors: Vec<(Vec<Operator<T>>, &'a [T])>,
    total: T,
    param: Cholesky,
}

impl<'a, T: Real> Likelihood<'a, T> {
    fn new(obs: &'a Observations<T>) -> Self {
        let projectors = obs.projectors();
        let total = projectors.iter().flat_map(|(_, w)| w.iter().copied()).sum();
        Likelihood {
            projectors,
            total,
            param: Cholesky {
                d: obs.register.dim(),
            },
        }
    }

    fn gram(&self, x: &[T]) -> (Operator<T>, Operator<T>) {
        let t = self.param.unpack(x);
        let a = &t.adjoint() * &t;
        (t, a)
    }

    /// `L = Σ n log tr(ΠA) − N log tr(A)` with `A = T†T`.
    fn value(&self, x: &[T]) -> T {
        let (_, a) = self.gram(x);
        self.value_of(&a)
    }

    fn value_of(&self, a: &Operator<T>) -> T {
        let t = a.trace().re;
        if !(t > T::zero()) {
            return T::neg_infinity();
        }
        let mut l = -self.total * t.ln();
        for (ps, w) in &self.projectors {
            for (p, &n) in ps.iter().zip(w.iter()) {
                if n == T::zero() {
                    continue;
                }
                let q = (p * a).trace().re;
                if !(q > T::zero()) {
                    return T::neg_infinity();
                }
                l += n * q.ln();
            }
        }
        l
    }

    /// `∂L/∂Re T_ab = 2 Re(R T†)_ba`, `∂L/∂Im T_ab = −2 Im(R T†)_ba` with
    /// `R = Σ (n / tr(ΠA)) Π − (N / tr A) I`.
    fn gradient(&self, x: &[T]) -> Vec<T> {
        let (t, a) = self.gram(x);
        let d = self.param.d;
        let mut r = Operator::identity(d).scale_real(-self.total / a.trace().re);
        for (ps, w) in &self.projectors {
            for (p, &n) in ps.iter().zip(w.iter()) {
                if n == T::zero() {
                    continue;
                }
                let q = (p * &a).trace().re;
                r = &r + &p.scale_real(n / q);
            }
        }
        let g = &r * &t.adjoint();
        let two = T::of(2.0);
        let mut out = Vec::with_capacity(self.param.len());
        for a_ in 0..d {
            for b in 0..=a_ {
                let z = g.get(b, a_);
                out.push(two * z.re);
                out.push(-two * z.im);
            }
        }
        out
    }

    fn density(&self, x: &[T], register: &Register) -> Result<DensityMatrix<T>> {
        let (_, a) = self.gram(x);
        let a = hermitize(&a);
        let tr = a.trace().re;
        DensityMatrix::new(register.clone(), a.scale_real(T::one() / tr))
    }
}

/// Convergence contract of the maximum-likelihood fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlOptions<T> {
    pub rel_tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for MlOptions<T> {
    fn default() -> Self {
        MlOptions {
            rel_tol: T::of(1e-9),
            max_iterations: 10_000,
        }
    }
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

/// Maximum-likelihood estimate via L-BFGS ascent from `I/d`.
///
/// Each step is accepted only if it satisfies the Armijo condition, so the
/// recorded likelihood trace is non-decreasing. The relative stopping rule
/// can leave an absolute gap when counts are large; if the clamped linear
/// estimate then scores higher, the ascent restarts once from it. A run
/// that hits the iteration cap returns its best iterate with
/// `converged = false`.
pub fn ml_reconstruct_observations<T: Real>(
    obs: &Observations<T>,
    opts: MlOptions<T>,
) -> Result<ReconstructionResult<T>> {
    const MEMORY: usize = 8;
    let lk = Likelihood::new(obs);
    let mut x = lk.param.identity::<T>();
    let mut f = lk.value(&x);
    let mut g = lk.gradient(&x);
    let mut trace = vec![f];
    let mut hist: Vec<(Vec<T>, Vec<T>, T)> = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let armijo = T::of(1e-4);
    let mut restarted = false;
    loop {
        while iterations < opts.max_iterations {
            iterations += 1;
            // two-loop recursion on the ascent problem (minimizing −L)
            let mut q: Vec<T> = g.iter().map(|v| -*v).collect();
            let mut alphas = Vec::with_capacity(hist.len());
            for (s, y, rho) in hist.iter().rev() {
                let a = *rho * dot(s, &q);
                for (qi, yi) in q.iter_mut().zip(y) {
                    *qi -= a * *yi;
                }
                alphas.push(a);
            }
            let gamma = hist
                .last()
                .map(|(s, y, _)| dot(s, y) / dot(y, y))
                .unwrap_or_else(|| {
                    let gn = dot(&g, &g).sqrt();
                    if gn > T::zero() {
                        T::one() / gn
                    } else {
                        T::one()
                    }
                });
            for v in q.iter_mut() {
                *v *= gamma;
            }
            for ((s, y, rho), a) in hist.iter().zip(alphas.iter().rev()) {
                let b = *rho * dot(y, &q);
                for (qi, si) in q.iter_mut().zip(s) {
                    *qi += (*a - b) * *si;
                }
            }
            // q approximates H⁻¹(−∇L); ascent direction is −q
            let mut dir: Vec<T> = q.iter().map(|v| -*v).collect();
            let mut slope = dot(&g, &dir);
            if !(slope > T::zero()) {
                hist.clear();
                let gn = dot(&g, &g).sqrt().max(T::min_positive_value());
                dir = g.iter().map(|v| *v / gn).collect();
                slope = dot(&g, &dir);
            }
            if !(slope > T::zero()) {
                converged = true;
                break;
            }
            let mut step = T::one();
            let mut accepted = None;
            while step > T::of(1e-20) {
                let trial: Vec<T> = x
                    .iter()
                    .zip(&dir)
                    .map(|(xi, di)| *xi + step * *di)
                    .collect();
                let ft = lk.value(&trial);
                if ft.is_finite() && ft >= f + armijo * step * slope {
                    accepted = Some((trial, ft));
                    break;
                }
                step = step * T::of(0.5);
            }
            let Some((xn, fn_)) = accepted else {
                // no further ascent is resolvable at working precision
                converged = true;
                break;
            };
            let gn = lk.gradient(&xn);
            let s: Vec<T> = xn.iter().zip(&x).map(|(a, b)| *a - *b).collect();
            // y for the minimization problem: ∇(−L)(new) − ∇(−L)(old)
            let y: Vec<T> = g.iter().zip(&gn).map(|(a, b)| *a - *b).collect();
            let sy = dot(&s, &y);
            if sy > T::epsilon() * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
                hist.push((s, y, T::one() / sy));
                if hist.len() > MEMORY {
                    hist.remove(0);
                }
            }
            let change = (fn_ - f).abs() / f.abs().max(T::one());
            x = xn;
            f = fn_;
            g = gn;
            trace.push(f);
            if change < opts.rel_tol {
                converged = true;
                break;
            }
        }
        if restarted || iterations >= opts.max_iterations {
            break;
        }
        restarted = true;
        let start = linear_reconstruct_observations(obs)?
            .rho
            .clamp_to_physical();
        let xs = lk.param.factor(start.matrix());
        let fs = lk.value(&xs);
        if !(fs.is_finite() && fs > f) {
            break;
        }
        x = xs;
        f = fs;
        g = lk.gradient(&x);
        hist.clear();
        trace.push(f);
        converged = false;
    }
    let rho = lk.density(&x, &obs.register)?;
    Ok(ReconstructionResult {
        log_likelihood: Some(log_likelihood(&rho, obs)),
        rho,
        method: Method::MaxLikelihood,
        fidelity_vs_target: None,
        diagnostics: Some(MlDiagnostics {
            converged,
            iterations,
            trace,
        }),
    })
}

pub fn ml_reconstruct<T: Real>(input: &TomographyInput) -> Result<ReconstructionResult<T>> {
    ml_reconstruct_observations(&Observations::from_counts(input)?, MlOptions::default())
}

/// Analytic gradient and value of the Cholesky-parametrized likelihood, for
/// checking against finite differences.
pub fn likelihood_and_gradient<T: Real>(
    obs: &Observations<T>,
    params: &[T],
) -> Result<(T, Vec<T>)> {
    let lk = Likelihood::new(obs);
    if params.len() != lk.param.len() {
        return Err(Error::DimensionMismatch {
            expected: lk.param.len(),
            actual: params.len(),
        });
    }
    Ok((lk.value(params), lk.gradient(params)))
}

/// Number of real parameters for `n` qubits.
pub fn parameter_count(n: usize) -> usize {
    let d = 1usize << n;
    d * (d + 1)
}

/// Row-major `[re, im, re, im, …]` view of a matrix.
pub fn interleaved<T: Real>(m: &Operator<T>) -> Vec<T> {
    m.as_slice()
        .iter()
        .flat_map(|z: &C<T>| [z.re, z.im])
        .collect()
}

/// Inverse of [`interleaved`].
pub fn from_interleaved<T: Real>(dim: usize, v: &[T]) -> Result<Operator<T>> {
    if v.len() != 2 * dim * dim {
        return Err(Error::DimensionMismatch {
            expected: 2 * dim * dim,
            actual: v.len(),
        });
    }
    Operator::from_row_major(dim, v.chunks(2).map(|p| c(p[0], p[1])).collect())
}
