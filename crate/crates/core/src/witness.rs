//! Structure-factor entanglement witnesses on the four-qubit Dicke register.
//!
//! Site positions default to `r_i = i` and the structure factors are
//! unnormalized sums over the six pairs. With `k = π` the pair phase is
//! `(−1)^{i−j}`.

use serde::{Deserialize, Serialize};

use crate::counts::{derive_seed, sampled_pauli_expectation};
use crate::error::{Error, Result};
use crate::hilbert::{expectation, Observable, Operator, Pauli, PauliString, QuantumState};
use crate::scalar::{cis, re, Real};

/// Number of sites the witnesses are defined for.
pub const SITES: usize = 4;

/// Pair order used by every table: 14, 24, 34, 12, 13, 23 (1-based).
pub const PAIRS: [(usize, usize); 6] = [(1, 4), (2, 4), (3, 4), (1, 2), (1, 3), (2, 3)];

/// Correlation between one Pauli axis on two sites, or a full four-site string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow<T> {
    /// Axis label, e.g. `XX` or `XXXX`.
    pub operator: String,
    /// Per-qubit string with `1` for identity, e.g. `X11X`.
    pub qubits: String,
    /// Local analysis settings, grouped as `(q1 q3)k(q2 q4)π`.
    pub settings: String,
    pub value: T,
    pub sigma: T,
}

/// Ordered list of correlation rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTable<T> {
    pub rows: Vec<CorrelationRow<T>>,
}

impl<T: Real> CorrelationTable<T> {
    /// `(value, sigma)` of the row measuring `p`.
    pub fn lookup(&self, p: &PauliString) -> Result<(T, T)> {
        let key = p.involved_label();
        self.rows
            .iter()
            .find(|r| r.qubits == key)
            .map(|r| (r.value, r.sigma))
            .ok_or(Error::MissingEntry(key))
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Sets each sigma to the binomial error `√((1 − v²)/shots)` a ±1 observable
    /// with mean `v` would show after `shots` events.
    pub fn with_shot_noise(mut self, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let n = T::of(shots as f64);
        for r in &mut self.rows {
            r.sigma = ((T::one() - r.value * r.value).max(T::zero()) / n).sqrt();
        }
        Ok(self)
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn joined(&self, other: &Self) -> Self {
        CorrelationTable {
            rows: self.rows.iter().chain(&other.rows).cloned().collect(),
        }
    }
}

/// `σ^a_i σ^a_j` on the four-site register (1-based sites).
pub fn pair_string(axis: Pauli, (i, j): (usize, usize)) -> PauliString {
    PauliString::on(SITES, &[(i - 1, axis), (j - 1, axis)])
}

/// `σ^a` on all four sites.
pub fn full_string(axis: Pauli) -> PauliString {
    PauliString::new(vec![axis; SITES])
}

/// Settings label `(q1 q3)k(q2 q4)π` of a four-site string, `1` for identity.
pub fn settings_label(p: &PauliString) -> String {
    let l: Vec<char> = p.involved_label().chars().collect();
    if l.len() != SITES {
        return p.involved_label();
    }
    format!("({}{})k({}{})π", l[0], l[2], l[1], l[3])
}

fn axes() -> [Pauli; 3] {
    [Pauli::X, Pauli::Y, Pauli::Z]
}

fn row<T: Real>(p: &PauliString, value: T, sigma: T) -> CorrelationRow<T> {
    let axis: String = p
        .ops()
        .iter()
        .filter(|o| **o != Pauli::I)
        .map(|o| o.symbol())
        .collect();
    CorrelationRow {
        operator: axis,
        qubits: p.involved_label(),
        settings: settings_label(p),
        value,
        sigma,
    }
}

fn pair_strings() -> Vec<PauliString> {
    axes()
        .iter()
        .flat_map(|&a| PAIRS.iter().map(move |&pr| pair_string(a, pr)))
        .collect()
}

fn full_strings() -> Vec<PauliString> {
    axes().iter().map(|&a| full_string(a)).collect()
}

fn exact_table<T: Real, S: QuantumState<T> + ?Sized>(
    strings: &[PauliString],
    state: &S,
) -> Result<CorrelationTable<T>> {
    let rows = strings
        .iter()
        .map(|p| Ok(row(p, state.pauli_expectation(p)?, T::zero())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationTable { rows })
}

fn sampled_table<T: Real, S: QuantumState<T> + ?Sized>(
    strings: &[PauliString],
    state: &S,
    shots: u64,
    seed: u64,
) -> Result<CorrelationTable<T>> {
    let rows = strings
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (v, s, _) =
                sampled_pauli_expectation(p, state, shots, derive_seed(seed, i as u64))?;
            Ok(row(p, v, s))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationTable { rows })
}

/// The 18 pair correlations (XX, YY, ZZ over the six pairs), exact.
pub fn correlation_table<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
) -> Result<CorrelationTable<T>> {
    exact_table(&pair_strings(), state)
}

/// The 18 pair correlations, each estimated from `shots` simulated events
/// with its own derived seed.
pub fn sampled_correlation_table<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
    shots: u64,
    seed: u64,
) -> Result<CorrelationTable<T>> {
    sampled_table(&pair_strings(), state, shots, seed)
}

/// `XXXX`, `YYYY`, `ZZZZ`, exact.
pub fn four_body_table<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
) -> Result<CorrelationTable<T>> {
    exact_table(&full_strings(), state)
}

pub fn sampled_four_body_table<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
    shots: u64,
    seed: u64,
) -> Result<CorrelationTable<T>> {
    sampled_table(&full_strings(), state, shots, derive_seed(seed, u64::MAX))
}

const MEASURED_PAIRS: [(f64, f64); 18] = [
    (-0.458, 0.013),
    (0.531, 0.012),
    (-0.384, 0.013),
    (-0.545, 0.012),
    (0.597, 0.011),
    (-0.620, 0.011),
    (-0.617, 0.009),
    (0.590, 0.009),
    (-0.528, 0.009),
    (-0.550, 0.009),
    (0.523, 0.010),
    (-0.425, 0.010),
    (-0.327, 0.024),
    (-0.304, 0.024),
    (-0.314, 0.024),
    (-0.354, 0.024),
    (-0.308, 0.024),
    (-0.315, 0.024),
];

const MEASURED_FOUR_BODY: [(f64, f64); 3] = [(0.673, 0.011), (0.635, 0.009), (0.922, 0.010)];

fn measured<T: Real>(strings: Vec<PauliString>, data: &[(f64, f64)]) -> CorrelationTable<T> {
    let rows = strings
        .iter()
        .zip(data)
        .map(|(p, &(v, s))| row(p, T::of(v), T::of(s)))
        .collect();
    CorrelationTable { rows }
}

/// Laboratory pair correlations of the phased Dicke state with their error bars.
pub fn measured_pair_table<T: Real>() -> CorrelationTable<T> {
    measured(pair_strings(), &MEASURED_PAIRS)
}

/// Laboratory four-body correlations of the phased Dicke state.
pub fn measured_four_body_table<T: Real>() -> CorrelationTable<T> {
    measured(full_strings(), &MEASURED_FOUR_BODY)
}

/// `Ŝ^{αβ}(k) = Σ_{i<j} e^{ik(r_i − r_j)} σ^α_i σ^β_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureFactorSpec<T> {
    pub alpha: Pauli,
    pub beta: Pauli,
    pub k: T,
    pub positions: Vec<T>,
    /// Divide by the number of pairs.
    pub normalized: bool,
}

impl<T: Real> StructureFactorSpec<T> {
    /// Unnormalized, sites at `1, 2, 3, 4`.
    pub fn new(alpha: Pauli, beta: Pauli, k: T) -> Self {
        let positions = (1..=SITES).map(|i| T::of(i as f64)).collect();
        StructureFactorSpec {
            alpha,
            beta,
            k,
            positions,
            normalized: false,
        }
    }

    pub fn with_positions(mut self, positions: Vec<T>) -> Self {
        self.positions = positions;
        self
    }

    pub fn normalized(mut self, normalized: bool) -> Self {
        self.normalized = normalized;
        self
    }

    pub fn sites(&self) -> usize {
        self.positions.len()
    }

    /// `e^{ik(r_i − r_j)}` for 1-based sites.
    pub fn phase(&self, i: usize, j: usize) -> crate::scalar::C<T> {
        cis(self.k * (self.positions[i - 1] - self.positions[j - 1]))
    }

    pub fn observable(&self) -> Result<Observable<T>> {
        let n = self.sites();
        if n < 2 {
            return Err(Error::OutOfRange {
                name: "sites",
                value: n as f64,
                range: ">= 2",
            });
        }
        let pairs = n * (n - 1) / 2;
        let scale = if self.normalized {
            T::one() / T::of(pairs as f64)
        } else {
            T::one()
        };
        let mut obs = Observable::zero(n);
        for i in 1..=n {
            for j in i + 1..=n {
                let s = PauliString::on(n, &[(i - 1, self.alpha), (j - 1, self.beta)]);
                obs.push(self.phase(i, j) * re(scale), s)?;
            }
        }
        Ok(obs)
    }

    pub fn operator(&self) -> Result<Operator<T>> {
        Ok(self.observable()?.to_operator())
    }
}

/// Real expectation of a structure factor; complex residues are rejected.
pub fn structure_factor<T: Real, S: QuantumState<T> + ?Sized>(
    spec: &StructureFactorSpec<T>,
    state: &S,
) -> Result<T> {
    if spec.sites() != state.register().len() {
        return Err(Error::RegisterMismatch);
    }
    expectation(&spec.observable()?, state)
}

/// `Ŝ^{aa}(k)` from tabulated pair values, with the quadrature error.
pub fn structure_factor_from_table<T: Real>(
    axis: Pauli,
    k: T,
    table: &CorrelationTable<T>,
) -> Result<(T, T)> {
    let spec = StructureFactorSpec::new(axis, axis, k);
    let mut value = T::zero();
    let mut var = T::zero();
    for &(i, j) in &PAIRS {
        let (v, s) = table.lookup(&pair_string(axis, (i, j)))?;
        let w = spec.phase(i, j).re;
        value += w * v;
        var += w * w * s * s;
    }
    Ok((value, var.sqrt()))
}

/// Which closed form of a witness was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessForm {
    /// `1 − (Ŝxx(π) + Ŝyy(π) − Ŝzz(0))/6`.
    Structural,
    /// Collective-spin operators `Ĵ²`, `Ĵ⁴` built from the structure factors.
    Collective,
    /// The literal pair/four-body expansion with constant term `2/8`.
    Expanded,
}

/// One weighted ingredient of a witness value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTerm<T> {
    /// Operator label, e.g. `X11X`, `XXXX`, or `J2x` for collective inputs.
    pub label: String,
    /// Weight multiplying the correlation, including the pair phase.
    pub weight: T,
    pub correlation: T,
    pub sigma: T,
    pub contribution: T,
}

/// Value of a witness together with its additive decomposition.
///
/// `value = constant + Σ contribution` holds by construction. Negative
/// values certify entanglement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport<T> {
    pub value: T,
    pub sigma: T,
    pub form: WitnessForm,
    pub constant: T,
    pub terms: Vec<WitnessTerm<T>>,
    pub entangled: bool,
}

impl<T: Real> WitnessReport<T> {
    fn assemble(form: WitnessForm, constant: T, inputs: Vec<(String, T, T, T)>) -> Self {
        let terms: Vec<WitnessTerm<T>> = inputs
            .into_iter()
            .map(|(label, weight, correlation, sigma)| WitnessTerm {
                label,
                weight,
                correlation,
                sigma,
                contribution: weight * correlation,
            })
            .collect();
        let value = constant + terms.iter().map(|t| t.contribution).sum::<T>();
        let sigma = terms
            .iter()
            .map(|t| (t.weight * t.sigma).powi(2))
            .sum::<T>()
            .sqrt();
        WitnessReport {
            value,
            sigma,
            form,
            constant,
            terms,
            entangled: value < T::zero(),
        }
    }

    /// Recomputes `constant + Σ contribution`.
    pub fn reassembled(&self) -> T {
        self.constant + self.terms.iter().map(|t| t.contribution).sum::<T>()
    }
}

fn staggered<T: Real>(i: usize, j: usize, axis: Pauli) -> T {
    let k = if axis == Pauli::Z { T::zero() } else { T::PI() };
    StructureFactorSpec::new(axis, axis, k).phase(i, j).re
}

/// Pair terms `(label, weight, value, sigma)` of `Σ_a c_a Ŝ^{aa}(k^a)`.
fn pair_inputs<T: Real>(
    coeffs: [T; 3],
    lookup: &dyn Fn(&PauliString) -> Result<(T, T)>,
) -> Result<Vec<(String, T, T, T)>> {
    let mut out = Vec::with_capacity(18);
    for (a, &cf) in axes().iter().zip(&coeffs) {
        for &(i, j) in &PAIRS {
            let p = pair_string(*a, (i, j));
            let (v, s) = lookup(&p)?;
            out.push((p.involved_label(), cf * staggered::<T>(i, j, *a), v, s));
        }
    }
    Ok(out)
}

fn structural<T: Real>(
    lookup: &dyn Fn(&PauliString) -> Result<(T, T)>,
) -> Result<WitnessReport<T>> {
    let sixth = T::one() / T::of(6.0);
    let inputs = pair_inputs([-sixth, -sixth, sixth], lookup)?;
    Ok(WitnessReport::assemble(
        WitnessForm::Structural,
        T::one(),
        inputs,
    ))
}

/// Structural witness of the phased Dicke state evaluated on a state.
pub fn structural_witness<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
) -> Result<WitnessReport<T>> {
    check_sites(state)?;
    structural(&|p| Ok((state.pauli_expectation(p)?, T::zero())))
}

/// Structural witness assembled from an 18-row pair table.
pub fn structural_witness_from_table<T: Real>(
    table: &CorrelationTable<T>,
) -> Result<WitnessReport<T>> {
    structural(&|p| table.lookup(p))
}

/// The structural witness as one observable.
pub fn structural_witness_observable<T: Real>() -> Result<Observable<T>> {
    let sixth = re(T::one() / T::of(6.0));
    let sxx = StructureFactorSpec::new(Pauli::X, Pauli::X, T::PI()).observable()?;
    let syy = StructureFactorSpec::new(Pauli::Y, Pauli::Y, T::PI()).observable()?;
    let szz = StructureFactorSpec::new(Pauli::Z, Pauli::Z, T::zero()).observable()?;
    Observable::identity(SITES, T::one()).plus(
        &sxx.plus(&syy)?
            .plus(&szz.scaled(re(-T::one())))?
            .scaled(-sixth),
    )
}

fn check_sites<T: Real, S: QuantumState<T> + ?Sized>(state: &S) -> Result<()> {
    if state.register().len() != SITES {
        return Err(Error::DimensionMismatch {
            expected: 1 << SITES,
            actual: state.register().dim(),
        });
    }
    Ok(())
}

/// Collective operators `Ĵ² = I + Ŝ/2` and `Ĵ⁴ = I + Ŝ + Ŝ²/4` for one axis.
pub fn collective_operators<T: Real>(axis: Pauli) -> Result<(Operator<T>, Operator<T>)> {
    let k = if axis == Pauli::Z { T::zero() } else { T::PI() };
    let s = StructureFactorSpec::new(axis, axis, k).operator()?;
    let id = Operator::identity(s.dim());
    let half = T::of(0.5);
    let j2 = &id + &s.scale_real(half);
    let j4 = &(&id + &s) + &(&s * &s).scale_real(half * half);
    Ok((j2, j4))
}

/// Weights of `(Ĵ²x, Ĵ²y, Ĵ²z, Ĵ⁴x, Ĵ⁴y, Ĵ⁴z)` and the constant term of the
/// multipartite witness.
fn collective_weights<T: Real>() -> ([T; 6], T) {
    let s = T::one() / T::of(6.0);
    (
        [s, s, T::of(31.0 / 12.0), -s, -s, T::of(-7.0 / 12.0)],
        T::of(2.0),
    )
}

/// The multipartite witness as a 16×16 operator.
pub fn wmult_operator<T: Real>() -> Result<Operator<T>> {
    let (w, c0) = collective_weights::<T>();
    let mut total = Operator::identity(1 << SITES).scale_real(c0);
    for (idx, axis) in axes().into_iter().enumerate() {
        let (j2, j4) = collective_operators::<T>(axis)?;
        total = &(&total + &j2.scale_real(w[idx])) + &j4.scale_real(w[idx + 3]);
    }
    Ok(total)
}

/// Constant term of the expansion in pair and four-body terms.
///
/// Rewriting `(Ŝ^{aa})² = 6 + 4Ŝ^{aa} + 6σ^a⊗σ^a⊗σ^a⊗σ^a` turns the collective
/// operator into `(21 − 2Ŝxx − 2Ŝyy + Ŝzz − 2XXXX − 2YYYY − 7ZZZZ)/8`; the
/// literal expansion carries `2` in place of `21`.
fn expansion_constant<T: Real>(form: WitnessForm) -> T {
    match form {
        WitnessForm::Expanded => T::of(2.0 / 8.0),
        _ => T::of(21.0 / 8.0),
    }
}

fn expanded<T: Real>(
    form: WitnessForm,
    lookup: &dyn Fn(&PauliString) -> Result<(T, T)>,
) -> Result<WitnessReport<T>> {
    let e = T::one() / T::of(8.0);
    let mut inputs = pair_inputs([-(e + e), -(e + e), e], lookup)?;
    for (axis, w) in [(Pauli::X, -2.0), (Pauli::Y, -2.0), (Pauli::Z, -7.0)] {
        let p = full_string(axis);
        let (v, s) = lookup(&p)?;
        inputs.push((p.involved_label(), T::of(w) * e, v, s));
    }
    Ok(WitnessReport::assemble(
        form,
        expansion_constant(form),
        inputs,
    ))
}

/// Multipartite witness on a state.
///
/// `Collective` takes the expectation of the operators `Ĵ²`, `Ĵ⁴` directly;
/// `Expanded` evaluates the literal pair/four-body expansion.
pub fn wmult<T: Real, S: QuantumState<T> + ?Sized>(
    state: &S,
    form: WitnessForm,
) -> Result<WitnessReport<T>> {
    check_sites(state)?;
    match form {
        WitnessForm::Collective => {
            let (w, c0) = collective_weights::<T>();
            let mut inputs = Vec::with_capacity(6);
            for (order, idx) in [(2, 0), (2, 1), (2, 2), (4, 0), (4, 1), (4, 2)] {
                let axis = axes()[idx];
                let (j2, j4) = collective_operators::<T>(axis)?;
                let op = if order == 2 { j2 } else { j4 };
                let v = state.operator_expectation(&op)?;
                if v.im.abs() > T::hermitian_tol() {
                    return Err(Error::NonRealExpectation(v.im.as_f64()));
                }
                let slot = if order == 2 { idx } else { idx + 3 };
                let label = format!("J{order}{}", axis.symbol().to_ascii_lowercase());
                inputs.push((label, w[slot], v.re, T::zero()));
            }
            Ok(WitnessReport::assemble(form, c0, inputs))
        }
        WitnessForm::Expanded => expanded(form, &|p| Ok((state.pauli_expectation(p)?, T::zero()))),
        WitnessForm::Structural => structural_witness(state),
    }
}

/// Multipartite witness from tabulated pair and four-body values.
///
/// The collective form is evaluated through its exact expansion in those
/// values, since `Ŝ²` contains four-body strings. Missing four-body rows are
/// an error for both forms.
pub fn wmult_from_tables<T: Real>(
    pairs: &CorrelationTable<T>,
    four_body: Option<&CorrelationTable<T>>,
    form: WitnessForm,
) -> Result<WitnessReport<T>> {
    let four = four_body
        .ok_or_else(|| Error::MissingEntry("four-body correlations (XXXX, YYYY, ZZZZ)".into()))?;
    let joined = pairs.joined(four);
    match form {
        WitnessForm::Structural => structural_witness_from_table(pairs),
        _ => expanded(form, &|p| joined.lookup(p)),
    }
}
