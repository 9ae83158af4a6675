//! Decides whether a joint-measurement basis teleports the unknown state
//! and derives the correction unitaries when it does.
//!
//! For each outcome `k` the residual on the receiver qubits is linear in
//! the unknown coefficients: `residual_k = M_k (alpha, beta)^T`. The two
//! columns of `M_k` are obtained by projecting the combined state built
//! from `(1, 0)` and from `(0, 1)`. A usable outcome has
//! `M_k^dagger M_k = c_k^2 I` with `c_k > 0`; then `c_k^-1 M_k E^dagger`
//! (with `E` the embedding of the coefficients into the target form) is an
//! isometry from the target span onto the residual span, and any unitary
//! completing it is a valid `U_k` with `residual_k / c_k = U_k |target>`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Only needed without std; with std linked the inherent f64 methods win.
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::basis::MeasurementBasis;
use crate::canonical::{epr_input, ghz_chain, nplet, EprForm};
use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::measure::Outcome;
use crate::protocol::UnknownCoeffs;
use crate::state::{Amplitude, StateVector};
use crate::{MAX_QUBITS, TOLERANCE};

/// Form of the state carrying the unknown coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputForm {
    Epr(EprForm),
    /// `alpha|0...0> + beta|1...1>` on `N` qubits.
    Nplet(usize),
}

impl InputForm {
    pub fn qubits(self) -> usize {
        match self {
            InputForm::Epr(_) => 2,
            InputForm::Nplet(n) => n,
        }
    }

    pub fn state(self, coeffs: &UnknownCoeffs) -> Result<StateVector> {
        match self {
            InputForm::Epr(form) => Ok(epr_input(coeffs, form)),
            InputForm::Nplet(n) => nplet(coeffs, n),
        }
    }

    /// Images of `(1, 0)` and `(0, 1)`.
    fn embedding(self) -> Result<[StateVector; 2]> {
        Ok([
            self.state(&UnknownCoeffs::real(1.0, 0.0)?)?,
            self.state(&UnknownCoeffs::real(0.0, 1.0)?)?,
        ])
    }
}

/// The 2-column linear map from `(alpha, beta)` to the residual of one
/// outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeMap {
    pub residual_qubits: usize,
    pub alpha_column: Vec<Amplitude>,
    pub beta_column: Vec<Amplitude>,
}

impl OutcomeMap {
    /// `M^dagger M`.
    pub fn gram(&self) -> [[Amplitude; 2]; 2] {
        let dot = |a: &[Amplitude], b: &[Amplitude]| -> Amplitude {
            a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
        };
        let (a, b) = (&self.alpha_column, &self.beta_column);
        [[dot(a, a), dot(a, b)], [dot(b, a), dot(b, b)]]
    }

    pub fn apply(&self, coeffs: &UnknownCoeffs) -> Vec<Amplitude> {
        self.alpha_column
            .iter()
            .zip(&self.beta_column)
            .map(|(a, b)| coeffs.alpha() * a + coeffs.beta() * b)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        let g = self.gram();
        g[0][0].re + g[1][1].re <= TOLERANCE * TOLERANCE
    }

    /// `c^2` when `M^dagger M = c^2 I` with `c^2 > TOLERANCE`.
    pub fn proportionality(&self) -> Option<f64> {
        let g = self.gram();
        let c2 = g[0][0].re;
        let uniform = g[0][1].norm() <= TOLERANCE && (g[0][0] - g[1][1]).norm() <= TOLERANCE;
        (uniform && c2 > TOLERANCE).then_some(c2)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum OutcomeProbability {
    /// Same for every input.
    Constant(f64),
    /// Depends on the unknown state through `alpha, beta`.
    StateDependent { gram: [[Amplitude; 2]; 2] },
}

impl OutcomeProbability {
    /// Probability for a particular input.
    pub fn at(&self, coeffs: &UnknownCoeffs) -> f64 {
        match self {
            OutcomeProbability::Constant(p) => *p,
            OutcomeProbability::StateDependent { gram } => {
                let v = [coeffs.alpha(), coeffs.beta()];
                let mut sum = Complex64::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        sum += v[i].conj() * gram[i][j] * v[j];
                    }
                }
                sum.re
            }
        }
    }

    /// Average over Haar-random inputs, `Tr(M^dagger M) / 2`.
    pub fn average(&self) -> f64 {
        match self {
            OutcomeProbability::Constant(p) => *p,
            OutcomeProbability::StateDependent { gram } => (gram[0][0].re + gram[1][1].re) / 2.0,
        }
    }

    pub fn is_state_dependent(&self) -> bool {
        matches!(self, OutcomeProbability::StateDependent { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InadequacyReason {
    /// These nonzero outcomes leave residuals whose recovery would need
    /// knowledge of the unknown state.
    StateDependent { outcomes: Vec<Outcome> },
    /// Usable probabilities do not add up to one.
    Incomplete { total: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Adequate,
    Inadequate(InadequacyReason),
    /// Some outcomes never occur; the remaining ones are recoverable.
    PartiallyUsable {
        usable: Vec<Outcome>,
    },
}

/// A correction `U_k` on the receiver qubits, mapping the target state to
/// the normalized residual. Receivers undo it with `U_k^dagger`.
#[derive(Clone, Debug, PartialEq)]
pub enum Correction {
    /// One 2x2 factor per receiver qubit, in qubit order.
    Local(Vec<CMatrix>),
    Dense(CMatrix),
}

impl Correction {
    pub fn to_matrix(&self) -> CMatrix {
        match self {
            Correction::Local(factors) => factors
                .iter()
                .skip(1)
                .fold(factors[0].clone(), |acc, f| acc.kron(f)),
            Correction::Dense(m) => m.clone(),
        }
    }

    pub fn local_factors(&self) -> Option<&[CMatrix]> {
        match self {
            Correction::Local(f) => Some(f),
            Correction::Dense(_) => None,
        }
    }

    /// Applies `U_k` to a receiver state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        self.act(state, false)
    }

    /// Applies `U_k^dagger` to a receiver state.
    pub fn undo(&self, state: &StateVector) -> Result<StateVector> {
        self.act(state, true)
    }

    fn act(&self, state: &StateVector, adjoint: bool) -> Result<StateVector> {
        let pick = |m: &CMatrix| if adjoint { m.adjoint() } else { m.clone() };
        match self {
            Correction::Local(factors) => {
                let mut s = state.clone();
                for (j, f) in factors.iter().enumerate() {
                    if f.max_abs_diff(&CMatrix::identity(2)) > TOLERANCE {
                        s = s.apply_matrix(&pick(f), &[j + 1])?;
                    }
                }
                Ok(s)
            }
            Correction::Dense(m) => {
                let targets: Vec<usize> = (1..=state.n_qubits()).collect();
                state.apply_matrix(&pick(m), &targets)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdequacyReport {
    pub input: InputForm,
    pub carrier_qubits: usize,
    pub maps: Vec<OutcomeMap>,
    pub verdict: Verdict,
    pub probs: Vec<OutcomeProbability>,
    /// `Some` for every outcome whose residual is recoverable.
    pub corrections: Vec<Option<Correction>>,
    pub zero_outcomes: Vec<Outcome>,
}

impl AdequacyReport {
    pub fn is_adequate(&self) -> bool {
        self.verdict == Verdict::Adequate
    }

    pub fn correction(&self, outcome: Outcome) -> Option<&Correction> {
        self.corrections
            .get(outcome.index())
            .and_then(Option::as_ref)
    }
}

fn layout(m_qubits: usize, input: InputForm, carrier: usize) -> Result<usize> {
    if carrier < 2 {
        return Err(Error::InvalidParameter(format!(
            "carrier chain needs at least 2 qubits, got {carrier}"
        )));
    }
    let total = input.qubits() + carrier;
    if total > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: total,
            max: MAX_QUBITS,
        });
    }
    let receivers = total.saturating_sub(m_qubits);
    if receivers != input.qubits() {
        return Err(Error::InvalidParameter(format!(
            "basis on {m_qubits} qubits leaves {receivers} receiver qubits, the input needs {}",
            input.qubits()
        )));
    }
    Ok(total)
}

fn outcome_maps(
    vectors: &[StateVector],
    input: InputForm,
    carrier: usize,
) -> Result<Vec<OutcomeMap>> {
    let m_qubits = vectors.first().map_or(0, StateVector::n_qubits);
    layout(m_qubits, input, carrier)?;
    let ghz = ghz_chain(carrier)?;
    let measured: Vec<usize> = (1..=m_qubits).collect();
    let [e0, e1] = input.embedding()?;
    let from_alpha = e0.tensor(&ghz)?.project_many(vectors, &measured)?;
    let from_beta = e1.tensor(&ghz)?.project_many(vectors, &measured)?;
    Ok(from_alpha
        .into_iter()
        .zip(from_beta)
        .map(|(a, b)| OutcomeMap {
            residual_qubits: a.n_qubits(),
            alpha_column: a.amps().to_vec(),
            beta_column: b.amps().to_vec(),
        })
        .collect())
}

fn derive_correction(map: &OutcomeMap, input: InputForm) -> Result<Option<Correction>> {
    let Some(c2) = map.proportionality() else {
        return Ok(None);
    };
    let c = c2.sqrt();
    let [e0, e1] = input.embedding()?;
    let image = [
        map.alpha_column.iter().map(|x| x / c).collect::<Vec<_>>(),
        map.beta_column.iter().map(|x| x / c).collect::<Vec<_>>(),
    ];
    let domain = [e0.amps().to_vec(), e1.amps().to_vec()];
    let correction = local_completion(&domain, &image, map.residual_qubits)
        .unwrap_or_else(|| Correction::Dense(dense_completion(&domain, &image)));
    Ok(Some(canonical_phase(correction)))
}

/// The correction `U_k` for one outcome, without analysing the rest of the
/// basis. `None` when the outcome is not recoverable.
pub fn correction_for(
    basis: &MeasurementBasis,
    outcome: Outcome,
    input: InputForm,
    carrier: usize,
) -> Result<Option<Correction>> {
    if outcome.index() >= basis.len() {
        return Err(Error::OutcomeOutOfRange {
            k: outcome.k(),
            count: basis.len(),
        });
    }
    correction_for_vector(basis.vector(outcome.index()), input, carrier)
}

/// The correction for the outcome associated with basis element `vector`.
pub fn correction_for_vector(
    vector: &StateVector,
    input: InputForm,
    carrier: usize,
) -> Result<Option<Correction>> {
    let map = outcome_maps(core::slice::from_ref(vector), input, carrier)?
        .pop()
        .expect("one vector, one map");
    derive_correction(&map, input)
}

/// Full adequacy analysis of `basis` measuring qubits `1..=m` of
/// `input (x) GHZ(carrier)`.
pub fn adequacy(
    basis: &MeasurementBasis,
    input: InputForm,
    carrier: usize,
) -> Result<AdequacyReport> {
    let maps = outcome_maps(basis.vectors(), input, carrier)?;
    let mut probs = Vec::with_capacity(maps.len());
    let mut corrections = Vec::with_capacity(maps.len());
    let mut zero_outcomes = Vec::new();
    let mut dependent = Vec::new();
    let mut usable = Vec::new();
    let mut total = 0.0;
    for (i, map) in maps.iter().enumerate() {
        let outcome = Outcome::from_index(i);
        if map.is_zero() {
            zero_outcomes.push(outcome);
            probs.push(OutcomeProbability::Constant(0.0));
            corrections.push(None);
            continue;
        }
        match map.proportionality() {
            Some(c2) => {
                usable.push(outcome);
                total += c2;
                probs.push(OutcomeProbability::Constant(c2));
                corrections.push(derive_correction(map, input)?);
            }
            None => {
                dependent.push(outcome);
                probs.push(OutcomeProbability::StateDependent { gram: map.gram() });
                corrections.push(None);
            }
        }
    }
    let verdict = if !dependent.is_empty() {
        Verdict::Inadequate(InadequacyReason::StateDependent {
            outcomes: dependent,
        })
    } else if (total - 1.0).abs() > TOLERANCE {
        Verdict::Inadequate(InadequacyReason::Incomplete { total })
    } else if !zero_outcomes.is_empty() {
        Verdict::PartiallyUsable { usable }
    } else {
        Verdict::Adequate
    };
    Ok(AdequacyReport {
        input,
        carrier_qubits: carrier,
        maps,
        verdict,
        probs,
        corrections,
        zero_outcomes,
    })
}

/// Index of the single unit-modulus entry, if `v` is a phased basis state.
fn monomial(v: &[Amplitude]) -> Option<(usize, Amplitude)> {
    let mut found = None;
    for (i, a) in v.iter().enumerate() {
        if a.norm() > TOLERANCE {
            if found.is_some() {
                return None;
            }
            found = Some((i, *a));
        }
    }
    found.filter(|(_, a)| (a.norm() - 1.0).abs() <= TOLERANCE)
}

/// Product completion for GHZ-class supports: the domain is spanned by two
/// computational states that differ on every qubit, and so is the image.
/// Each qubit then needs either `I` or `X`; the phases go on the first
/// qubit that flips (or the first qubit if none does).
fn local_completion(
    domain: &[Vec<Amplitude>; 2],
    image: &[Vec<Amplitude>; 2],
    qubits: usize,
) -> Option<Correction> {
    let (a, pa) = monomial(&domain[0])?;
    let (b, pb) = monomial(&domain[1])?;
    let (c, p0) = monomial(&image[0])?;
    let (d, p1) = monomial(&image[1])?;
    let all = (1usize << qubits) - 1;
    if a ^ b != all || c ^ d != all || qubits == 0 {
        return None;
    }
    // fold the domain phases into the image phases
    let (p0, p1) = (p0 / pa, p1 / pb);
    let bit = |x: usize, j: usize| (x >> (qubits - 1 - j)) & 1;
    let carrier = (0..qubits).find(|&j| bit(a, j) != bit(c, j)).unwrap_or(0);
    let one = Complex64::new(1.0, 0.0);
    let factors = (0..qubits)
        .map(|j| {
            let (from_a, from_b) = if j == carrier { (p0, p1) } else { (one, one) };
            let mut m = CMatrix::zeros(2, 2);
            m[(bit(c, j), bit(a, j))] = from_a;
            m[(bit(d, j), bit(b, j))] = from_b;
            m
        })
        .collect();
    Some(Correction::Local(factors))
}

fn project_out(v: &mut [Amplitude], basis: &[Vec<Amplitude>]) {
    for u in basis {
        let ov: Amplitude = u.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        for (vi, ui) in v.iter_mut().zip(u) {
            *vi -= ov * ui;
        }
    }
}

/// Orthonormal completion of `span` by Gram-Schmidt over the computational
/// basis.
fn complement(span: &[Vec<Amplitude>]) -> Vec<Vec<Amplitude>> {
    let dim = span[0].len();
    let mut all: Vec<Vec<Amplitude>> = span.to_vec();
    let mut out = Vec::new();
    for x in 0..dim {
        if all.len() == dim {
            break;
        }
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[x] = Complex64::new(1.0, 0.0);
        project_out(&mut v, &all);
        project_out(&mut v, &all);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            v.iter_mut().for_each(|z| *z /= norm);
            all.push(v.clone());
            out.push(v);
        }
    }
    out
}

/// `sum_j |image_j><domain_j|` plus identity on the complement when both
/// spans coincide, otherwise plus an ordered map between Gram-Schmidt
/// complements.
fn dense_completion(domain: &[Vec<Amplitude>; 2], image: &[Vec<Amplitude>; 2]) -> CMatrix {
    let dim = domain[0].len();
    let mut u = CMatrix::zeros(dim, dim);
    let add_outer = |u: &mut CMatrix, to: &[Amplitude], from: &[Amplitude]| {
        for r in 0..dim {
            if to[r] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..dim {
                u[(r, c)] += to[r] * from[c].conj();
            }
        }
    };
    add_outer(&mut u, &image[0], &domain[0]);
    add_outer(&mut u, &image[1], &domain[1]);
    let same_span = image.iter().all(|v| {
        let mut w = v.clone();
        project_out(&mut w, &domain[..]);
        w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() <= TOLERANCE
    });
    if same_span {
        let mut rest = CMatrix::identity(dim);
        for d in domain {
            for r in 0..dim {
                for c in 0..dim {
                    rest[(r, c)] -= d[r] * d[c].conj();
                }
            }
        }
        for r in 0..dim {
            for c in 0..dim {
                u[(r, c)] += rest[(r, c)];
            }
        }
    } else {
        let from = complement(&domain[..]);
        let to = complement(&image[..]);
        for (f, t) in from.iter().zip(&to) {
            add_outer(&mut u, t, f);
        }
    }
    u
}

/// Rotates the global phase so the first nonzero entry (row-major) of the
/// full matrix is real and positive.
fn canonical_phase(correction: Correction) -> Correction {
    match correction {
        Correction::Dense(m) => {
            let phase = m
                .first_nonzero(TOLERANCE)
                .map_or(Complex64::new(1.0, 0.0), |z| z / z.norm());
            Correction::Dense(m.scale(phase.conj()))
        }
        Correction::Local(mut factors) => {
            // Row 0 of a Kronecker product is the product of the factors'
            // row 0s, so its first nonzero entry is the product of theirs.
            let lead = factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| {
                acc * f
                    .row(0)
                    .iter()
                    .copied()
                    .find(|z| z.norm() > TOLERANCE)
                    .unwrap_or(acc)
            });
            let phase = lead / lead.norm();
            let carrier = factors
                .iter()
                .position(|f| f.max_abs_diff(&CMatrix::identity(2)) > TOLERANCE)
                .unwrap_or(0);
            factors[carrier] = factors[carrier].scale(phase.conj());
            Correction::Local(factors)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;

    fn epr() -> InputForm {
        InputForm::Epr(EprForm::AntiDiagonal)
    }

    #[test]
    fn pair_basis_s4_is_adequate() {
        let r = adequacy(&MeasurementBasis::pi1_23_s4(0.0), epr(), 3).unwrap();
        assert_eq!(r.verdict, Verdict::Adequate);
        for p in &r.probs {
            assert!((p.average() - 0.125).abs() < 1e-12);
            assert!(!p.is_state_dependent());
        }
        assert!(r.zero_outcomes.is_empty());
        assert!(r.corrections.iter().all(Option::is_some));
    }

    #[test]
    fn pair_basis_s2_is_state_dependent() {
        let r = adequacy(&MeasurementBasis::pi1_23_s2(), epr(), 3).unwrap();
        assert!(matches!(
            r.verdict,
            Verdict::Inadequate(InadequacyReason::StateDependent { .. })
        ));
        // |0>|Phi+_23> keeps only the alpha branch.
        let g = r.maps[0].gram();
        assert!((g[0][0].re - 0.25).abs() < 1e-12);
        assert!(g[1][1].norm() < 1e-12 && g[0][1].norm() < 1e-12);
    }

    #[test]
    fn triplet_basis_is_partially_usable() {
        let r = adequacy(&MeasurementBasis::triplet_mes(), epr(), 3).unwrap();
        let zero_k: Vec<usize> = r.zero_outcomes.iter().map(|o| o.k()).collect();
        assert_eq!(zero_k, [1, 2, 3, 4]);
        match &r.verdict {
            Verdict::PartiallyUsable { usable } => assert_eq!(usable.len(), 4),
            other => panic!("unexpected verdict {other:?}"),
        }
    }

    #[test]
    fn local_completion_matches_pauli_table() {
        let r = adequacy(&MeasurementBasis::pi1_23_s4(0.0), epr(), 3).unwrap();
        let i = CMatrix::identity(2);
        let table = [
            Gate::x().matrix().kron(&i),
            Gate::i_y().matrix().kron(&i),
            Gate::neg_i_y().matrix().kron(&i),
            Gate::neg_x().matrix().kron(&i),
            i.kron(Gate::x().matrix()),
            i.kron(Gate::neg_i_y().matrix()),
            i.kron(Gate::i_y().matrix()),
            i.kron(Gate::neg_x().matrix()),
        ];
        for (k, want) in table.iter().enumerate() {
            let got = r.corrections[k].as_ref().unwrap().to_matrix();
            assert!(got.is_unitary(1e-12));
            assert!(got.equals_up_to_phase(want, 1e-12), "k={}", k + 1);
        }
    }

    #[test]
    fn dense_completion_identity_on_shared_span() {
        // domain = image span, swapped: completion acts as identity elsewhere
        let e = |i: usize| {
            let mut v = vec![Complex64::new(0.0, 0.0); 4];
            v[i] = Complex64::new(1.0, 0.0);
            v
        };
        let u = dense_completion(&[e(1), e(2)], &[e(2), e(1)]);
        assert!(u.is_unitary(1e-12));
        assert_eq!(u[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(3, 3)], Complex64::new(1.0, 0.0));

        let s = core::f64::consts::FRAC_1_SQRT_2;
        let mixed = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ];
        let other = vec![
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-s, 0.0),
        ];
        let u = dense_completion(&[e(1), e(2)], &[mixed, other]);
        assert!(u.is_unitary(1e-12));
    }

    #[test]
    fn layout_errors() {
        let b = MeasurementBasis::pi1_23_s4(0.0);
        assert!(adequacy(&b, epr(), 4).is_err());
        assert!(adequacy(&b, epr(), 1).is_err());
        assert!(adequacy(&b, InputForm::Nplet(3), 4).is_err());
        assert!(adequacy(&b, InputForm::Nplet(3), 3).is_ok());
    }
}
