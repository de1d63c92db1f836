//! Simulated detector counts and their conversion back to expectation values.
//!
//! Sampling is multinomial at a fixed number of shots, driven by
//! `ChaCha8Rng::seed_from_u64(seed)`. Outcomes are drawn as a chain of
//! conditional binomials in the lexicographic order of their labels, so a
//! record depends only on `(probabilities, shots, seed)`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Operator, Pauli, PauliString, QuantumState};
use crate::scalar::{c, Real};

/// Counts collected for one measurement setting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: String,
    pub outcome_counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl CountRecord {
    /// Checks that no count exceeds what the shots allow.
    pub fn validate(&self) -> Result<()> {
        if self.total() > self.shots {
            return Err(Error::Parse(format!(
                "setting `{}`: {} counts recorded for {} shots",
                self.setting,
                self.total(),
                self.shots
            )));
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.outcome_counts.values().sum()
    }

    pub fn count(&self, outcome: &str) -> u64 {
        self.outcome_counts.get(outcome).copied().unwrap_or(0)
    }

    /// Poissonian `√n` error bar on one outcome.
    pub fn sigma(&self, outcome: &str) -> f64 {
        (self.count(outcome) as f64).sqrt()
    }
}

fn normalization_tol<T: Real>() -> T {
    T::of(1e-9).max(T::epsilon() * T::of(64.0))
}

/// Multinomial draw of `shots` events.
pub fn sample<T: Real>(
    setting: &str,
    probabilities: &BTreeMap<String, T>,
    shots: u64,
    seed: u64,
) -> Result<CountRecord> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if let Some(p) = probabilities
        .values()
        .find(|p| !(**p >= -normalization_tol::<T>()))
    {
        return Err(Error::OutOfRange {
            name: "outcome probability",
            value: p.as_f64(),
            range: "[0, 1]",
        });
    }
    let total: T = probabilities.values().copied().sum();
    if (total - T::one()).abs() > normalization_tol() {
        return Err(Error::NotNormalizedProbabilities(total.as_f64()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut remaining = shots;
    let mut mass = 1.0f64;
    let last = probabilities.len().saturating_sub(1);
    let mut outcome_counts = BTreeMap::new();
    for (i, (k, p)) in probabilities.iter().enumerate() {
        let p = p.as_f64().max(0.0);
        let n = if i == last {
            remaining
        } else if remaining == 0 || mass <= 0.0 {
            0
        } else {
            let q = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .expect("q in [0, 1]")
                .sample(&mut rng)
        };
        remaining -= n;
        mass -= p;
        outcome_counts.insert(k.clone(), n);
    }
    Ok(CountRecord {
        setting: setting.to_string(),
        outcome_counts,
        shots,
        seed,
    })
}

/// `Σ λ_o n_o / N` with its standard error.
///
/// The error is the multinomial one, `√((⟨λ²⟩ − ⟨λ⟩²)/N)` with frequencies
/// in place of probabilities, so covariances between outcomes are included.
pub fn expectation_from_counts<T: Real>(
    rec: &CountRecord,
    eigenvalues: &BTreeMap<String, T>,
) -> Result<(T, T)> {
    let n = rec.total();
    if n == 0 {
        return Err(Error::EmptyRecord);
    }
    let nf = T::of(n as f64);
    let mut m1 = T::zero();
    let mut m2 = T::zero();
    for (k, &count) in &rec.outcome_counts {
        let lambda = *eigenvalues
            .get(k)
            .ok_or_else(|| Error::UnlabeledOutcome(k.clone()))?;
        let f = T::of(count as f64) / nf;
        m1 += lambda * f;
        m2 += lambda * lambda * f;
    }
    let var = ((m2 - m1 * m1) / nf).max(T::zero());
    Ok((m1, var.sqrt()))
}

/// Independent stream seed for job `index` under a base seed (splitmix64 finalizer).
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome labels of a Pauli-string measurement: one `+`/`-` per non-identity slot.
fn outcome_labels(support: usize) -> Vec<String> {
    (0..1usize << support)
        .map(|m| {
            (0..support)
                .map(|j| {
                    if (m >> (support - 1 - j)) & 1 == 0 {
                        '+'
                    } else {
                        '-'
                    }
                })
                .collect()
        })
        .collect()
}

/// Eigenvalue (product of local signs) of each outcome label.
pub fn pauli_eigenvalues<T: Real>(p: &PauliString) -> BTreeMap<String, T> {
    outcome_labels(p.support().len())
        .into_iter()
        .map(|l| {
            let minus = l.chars().filter(|&ch| ch == '-').count();
            (l, if minus % 2 == 0 { T::one() } else { -T::one() })
        })
        .collect()
}

/// Rotation taking the eigenbasis of `p` to the computational basis.
fn to_z_basis<T: Real>(p: Pauli) -> Operator<T> {
    let h = T::FRAC_1_SQRT_2();
    let o = T::zero();
    match p {
        Pauli::X => Operator::from_row_major(2, vec![c(h, o), c(h, o), c(h, o), c(-h, o)]),
        // H·S†
        Pauli::Y => Operator::from_row_major(2, vec![c(h, o), c(o, -h), c(h, o), c(o, h)]),
        Pauli::Z | Pauli::I => Ok(Operator::identity(2)),
    }
    .expect("2x2")
}

/// Probabilities of the local `±` outcomes when every non-identity slot of
/// `p` is measured in its own eigenbasis.
pub fn pauli_outcome_probabilities<T: Real, S: QuantumState<T> + ?Sized>(
    p: &PauliString,
    state: &S,
) -> Result<BTreeMap<String, T>> {
    let reg = state.register().clone();
    if p.len() != reg.len() {
        return Err(Error::RegisterMismatch);
    }
    let support = p.support();
    let mut rho = state.to_density();
    for &pos in &support {
        rho = rho.conjugate(&to_z_basis(p.ops()[pos]), &[reg.qubits()[pos]])?;
    }
    let n = reg.len();
    let s = support.len();
    let mut probs = vec![T::zero(); 1 << s];
    for (idx, d) in rho.diagonal().into_iter().enumerate() {
        let m = support.iter().fold(0usize, |acc, &pos| {
            (acc << 1) | ((idx >> (n - 1 - pos)) & 1)
        });
        probs[m] += d;
    }
    Ok(outcome_labels(s)
        .into_iter()
        .zip(probs.into_iter().map(|v| v.max(T::zero())))
        .collect())
}

/// Samples a Pauli-string measurement and reduces it to `(value, sigma)`.
pub fn sampled_pauli_expectation<T: Real, S: QuantumState<T> + ?Sized>(
    p: &PauliString,
    state: &S,
    shots: u64,
    seed: u64,
) -> Result<(T, T, CountRecord)> {
    let probs = pauli_outcome_probabilities(p, state)?;
    let total: T = probs.values().copied().sum();
    let probs = probs.into_iter().map(|(k, v)| (k, v / total)).collect();
    let rec = sample(&p.to_string(), &probs, shots, seed)?;
    let (v, s) = expectation_from_counts(&rec, &pauli_eigenvalues(p))?;
    Ok((v, s, rec))
}
