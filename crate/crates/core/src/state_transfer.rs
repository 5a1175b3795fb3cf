//! Decision procedures for state transfer: perfect state transfer
//! certification from eigenvalue supports, periodicity of base vertices of a
//! regular corona, number-theoretic refutations of periodicity, and bounded
//! searches for pretty good state transfer times.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{
    classify_support, common_field, is_square_free, perfect_sqrt, recognize_quadext, square_free_part,
    AlgebraError, Eigenvalue, QuadExt, RecognizeOptions,
};
use crate::corona_spectra::{base_branch, exact_eigenvalue, CoronaError, CoronaKernel, CoronaParams};
use crate::graphs::Generator;
use crate::spectra::{
    decompose_graph, eigenvalue_support, pst_time, strong_cospectrality, SpectraError, SpectralDecomposition,
    DEFAULT_CLUSTER_TOL,
};

/// Default tolerance for supports and strong cospectrality.
pub const DEFAULT_TRANSFER_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransferError {
    #[error("source and target must differ, both are {0}")]
    SameVertex(usize),
    #[error("support contains eigenvalues that could not be recognized exactly: {0:?}")]
    UndecidedNumeric(Vec<f64>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("expected property violated: {0}")]
    InvariantViolated(String),
    #[error("support must be nonempty")]
    EmptySupport,
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PST")]
    Pst,
    #[serde(rename = "no-PST")]
    NoPst,
    #[serde(rename = "undecided-numeric")]
    UndecidedNumeric,
    /// Outside the hypotheses of every applicable rule.
    #[serde(rename = "undecided")]
    Undecided,
}

/// The rule a verdict rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Strong cospectrality, common quadratic field and parity of gaps.
    PstCriterion,
    StrongCospectrality,
    /// Every support element is an integer or all share one `(a, Δ)`.
    PeriodicityCriterion,
    /// `n2 ≥ |θ-s+t|+1` and `n2(n1-1)² ≥ |2r1-s+t|+1`.
    NecessaryBounds,
    /// Integer gaps strictly between 0 and 3.
    SmallGapNonperiodicity,
    /// Gaps equal to `√Δ` or `2√Δ`.
    RadicalGapNonperiodicity,
    /// Integrality (or common radical) of `θ-s+t`, `Λ_θ` and `Λ_r`.
    CoronaBasePeriodicity,
    /// `K2` base with `n2` equal to 1 or a prime.
    TwoVertexBasePrimeOrder,
    /// `K2` base with even `n2`, taken from the literature.
    TwoVertexBaseEvenOrder,
    /// Times `(4l + 2/g)π` for a base graph with perfect state transfer.
    PgstIrrationalLambdaR,
    /// Times `2πl` on the cocktail party corona with odd `m`.
    PgstCocktailParty,
    /// Plain scan of candidate times with no theorem behind it.
    PgstRawScan,
    NumericRecognition,
}

/// Evidence attached to a refutation.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    NotCospectral { eigenvalue: f64 },
    SingleEigenvalue { eigenvalue: Eigenvalue },
    Unrecognized { values: Vec<f64> },
    NotPeriodic { reason: String },
    SignMismatch { eigenvalue: QuadExt, reduced_gap: i64, measured_sign: i8 },
    /// `n2 ≥ |θ-s+t|+1` fails at `theta`.
    ThetaBound { vertex: Option<usize>, theta: i64, required: i64, available: i64 },
    /// `n2(n1-1)² ≥ |2r1-s+t|+1` fails.
    TopBound { vertex: Option<usize>, required: i64, available: i64 },
    /// Two support elements whose shifted gap is small.
    PairGap { vertex: Option<usize>, first: i64, second: i64, difference: i64 },
    /// `||2r1-s+t| - (n1-1)|γ-s+t||` is small.
    TopGap { vertex: Option<usize>, gamma: i64, difference: i64 },
    /// A radicand that is not a perfect square (or a multiple of the common
    /// radical).
    Radicand { vertex: Option<usize>, origin: Option<i64>, radicand: u64, square_free_part: u64 },
    /// The square-free values of `Δ` tried for the two-vertex base.
    SquareDifferences { deltas: Vec<u64> },
    Inherited { base_vertex: usize, reason: Box<Witness> },
}

/// Support of `u` with the strong-cospectrality signs towards `v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferData {
    pub source: usize,
    pub target: usize,
    /// Strictly descending.
    pub support: Vec<Eigenvalue>,
    /// Sign of each support element (`+1`, `-1`, or `0` when undetermined).
    pub signs: Vec<i8>,
    pub strongly_cospectral: bool,
}

impl TransferData {
    /// Reads the support of `u` from a numeric decomposition, attempting
    /// exact recognition of every eigenvalue in it.
    pub fn from_decomposition(
        dec: &SpectralDecomposition,
        u: usize,
        v: usize,
        tol: f64,
        opts: RecognizeOptions,
    ) -> Result<Self, TransferError> {
        if u == v {
            return Err(TransferError::SameVertex(u));
        }
        let support = eigenvalue_support(dec, u, tol)?;
        let cospectral = strong_cospectrality(dec, u, v, tol)?;
        let values = support
            .iter()
            .map(|&r| {
                let x = dec.eigenvalues()[r];
                match dec.exact(r).or_else(|| recognize_quadext(x, opts).ok().flatten()) {
                    Some(q) => Eigenvalue::Exact(q),
                    None => Eigenvalue::approx(x),
                }
            })
            .collect();
        Ok(Self {
            source: u,
            target: v,
            support: values,
            signs: support.iter().map(|&r| cospectral.signs[r]).collect(),
            strongly_cospectral: cospectral.strongly_cospectral,
        })
    }

    /// The support of the base vertex `(u,0)` of a regular corona and its
    /// signs towards `(v,0)`, from the decomposition of `G` alone.
    pub fn from_corona(
        gdec: &SpectralDecomposition,
        params: &CoronaParams,
        u: usize,
        v: usize,
        tol: f64,
    ) -> Result<Self, TransferError> {
        if u == v {
            return Err(TransferError::SameVertex(u));
        }
        let g_support = eigenvalue_support(gdec, u, tol)?;
        let cospectral = strong_cospectrality(gdec, u, v, tol)?;
        let mut entries: Vec<(Eigenvalue, i8)> = base_branch(gdec, params)?
            .into_iter()
            .filter(|e| g_support.contains(&e.origin_index))
            .map(|e| (e.value, cospectral.signs[e.origin_index]))
            .collect();
        entries.sort_by(|x, y| y.0.to_f64().total_cmp(&x.0.to_f64()));

        // coinciding values share one projector; opposite signs break it
        let mut strongly_cospectral = cospectral.strongly_cospectral;
        let mut merged: Vec<(Eigenvalue, i8)> = Vec::with_capacity(entries.len());
        for (value, sign) in entries {
            match merged.last_mut() {
                Some(last) if same_eigenvalue(&last.0, &value) => {
                    if last.1 != sign {
                        strongly_cospectral = false;
                        last.1 = 0;
                    }
                }
                _ => merged.push((value, sign)),
            }
        }
        Ok(Self {
            source: params.base_index(u),
            target: params.base_index(v),
            support: merged.iter().map(|e| e.0).collect(),
            signs: merged.iter().map(|e| e.1).collect(),
            strongly_cospectral,
        })
    }
}

fn same_eigenvalue(x: &Eigenvalue, y: &Eigenvalue) -> bool {
    match (x.exact(), y.exact()) {
        (Some(a), Some(b)) => a == b,
        _ => (x.to_f64() - y.to_f64()).abs() <= 1e-9 * x.to_f64().abs().max(1.0),
    }
}

/// Result of a perfect state transfer decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PstReport {
    pub source: usize,
    pub target: usize,
    pub verdict: Verdict,
    pub basis: Basis,
    pub strongly_cospectral: Option<bool>,
    pub support: Vec<Eigenvalue>,
    pub signs: Vec<i8>,
    pub delta: Option<u64>,
    pub g: Option<u64>,
    pub lambda_plus: Vec<QuadExt>,
    pub lambda_minus: Vec<QuadExt>,
    /// `π/(g√Δ)` when the verdict is PST.
    pub tau0: Option<f64>,
    /// `e^{iτ0θ0}`; the amplitude `U(τ0)_{uv}` is its complex conjugate.
    pub phase: Option<Complex64>,
    pub refutation_witness: Option<Witness>,
    /// Set when the verdict relies on a result quoted rather than re-derived.
    pub provenance: Option<String>,
}

impl PstReport {
    fn refuted(source: usize, target: usize, basis: Basis, witness: Witness) -> Self {
        Self {
            source,
            target,
            verdict: Verdict::NoPst,
            basis,
            strongly_cospectral: None,
            support: Vec::new(),
            signs: Vec::new(),
            delta: None,
            g: None,
            lambda_plus: Vec::new(),
            lambda_minus: Vec::new(),
            tau0: None,
            phase: None,
            refutation_witness: Some(witness),
            provenance: None,
        }
    }

    /// The amplitude `U(τ0)_{uv}` predicted by the certificate.
    pub fn expected_amplitude(&self) -> Option<Complex64> {
        self.phase.map(|p| p.conj())
    }
}

/// Decides perfect state transfer from `u` to `v` given the support of `u`
/// and the strong-cospectrality signs.
pub fn pst_certify(data: &TransferData) -> PstReport {
    let mut report = PstReport {
        strongly_cospectral: Some(data.strongly_cospectral),
        support: data.support.clone(),
        signs: data.signs.clone(),
        ..PstReport::refuted(data.source, data.target, Basis::PstCriterion, Witness::NotCospectral { eigenvalue: 0.0 })
    };
    report.refutation_witness = None;

    if !data.strongly_cospectral {
        let at = data.signs.iter().position(|&s| s == 0).unwrap_or(0);
        report.basis = Basis::StrongCospectrality;
        report.refutation_witness =
            Some(Witness::NotCospectral { eigenvalue: data.support.get(at).map_or(f64::NAN, Eigenvalue::to_f64) });
        return report;
    }
    let unknown: Vec<f64> = data.support.iter().filter(|e| e.exact().is_none()).map(Eigenvalue::to_f64).collect();
    if !unknown.is_empty() {
        report.verdict = Verdict::UndecidedNumeric;
        report.basis = Basis::NumericRecognition;
        report.refutation_witness = Some(Witness::Unrecognized { values: unknown });
        return report;
    }
    let exact: Vec<QuadExt> = data.support.iter().filter_map(Eigenvalue::exact).collect();
    if exact.len() == 1 {
        report.refutation_witness = Some(Witness::SingleEigenvalue { eigenvalue: data.support[0] });
        return report;
    }
    let classification = match classify_support(&exact) {
        Ok(c) => c,
        Err(err) => {
            report.basis = Basis::PeriodicityCriterion;
            report.refutation_witness = Some(Witness::NotPeriodic { reason: err.to_string() });
            return report;
        }
    };
    report.delta = Some(classification.delta);
    report.g = Some(classification.g);
    report.lambda_plus = classification.lambda_plus.clone();
    report.lambda_minus = classification.lambda_minus.clone();

    for (i, value) in classification.support.iter().enumerate() {
        let at = exact.iter().position(|q| q == value).expect("classification keeps the support");
        let measured = data.signs[at];
        let expected = if classification.expects_plus(i) { 1 } else { -1 };
        if measured != expected {
            report.refutation_witness = Some(Witness::SignMismatch {
                eigenvalue: *value,
                reduced_gap: classification.reduced_gaps[i],
                measured_sign: measured,
            });
            return report;
        }
    }
    let tau0 = pst_time(classification.g, classification.delta);
    report.verdict = Verdict::Pst;
    report.tau0 = Some(tau0);
    report.phase = Some(Complex64::from_polar(1.0, tau0 * classification.support[0].to_f64()));
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodicityCase {
    IntegerCase,
    QuadraticCase,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub vertex: Option<usize>,
    pub periodic: bool,
    pub case: PeriodicityCase,
    pub delta: Option<u64>,
    pub basis: Basis,
    pub witness: Option<Witness>,
    /// For the corona rule with `2r1 + t = s`: whether `Δ` divides `n2`.
    pub delta_divides_n2: Option<bool>,
}

impl PeriodicityReport {
    fn refuted(vertex: Option<usize>, basis: Basis, witness: Witness) -> Self {
        Self {
            vertex,
            periodic: false,
            case: PeriodicityCase::Refuted,
            delta: None,
            basis,
            witness: Some(witness),
            delta_divides_n2: None,
        }
    }
}

/// A vertex is periodic iff its support consists of integers, or of
/// quadratic integers sharing one rational part and one radical.
pub fn is_periodic_vertex(support: &[Eigenvalue]) -> Result<PeriodicityReport, TransferError> {
    if support.is_empty() {
        return Err(TransferError::EmptySupport);
    }
    let unknown: Vec<f64> = support.iter().filter(|e| e.exact().is_none()).map(Eigenvalue::to_f64).collect();
    if !unknown.is_empty() {
        return Err(TransferError::UndecidedNumeric(unknown));
    }
    let exact: Vec<QuadExt> = support.iter().filter_map(Eigenvalue::exact).collect();
    Ok(match common_field(&exact) {
        Ok((delta, _)) => PeriodicityReport {
            vertex: None,
            periodic: true,
            case: if delta == 1 { PeriodicityCase::IntegerCase } else { PeriodicityCase::QuadraticCase },
            delta: Some(delta),
            basis: Basis::PeriodicityCriterion,
            witness: None,
            delta_divides_n2: None,
        },
        Err(err) => PeriodicityReport::refuted(
            None,
            Basis::PeriodicityCriterion,
            Witness::NotPeriodic { reason: err.to_string() },
        ),
    })
}

/// Support elements other than `2r1`.
fn lower_support(params: &CoronaParams, supp: &[i64]) -> Vec<i64> {
    let mut lower: Vec<i64> = supp.iter().copied().filter(|&x| x != params.top_eigenvalue()).collect();
    lower.sort_unstable_by(|a, b| b.cmp(a));
    lower.dedup();
    lower
}

/// Periodicity of a base vertex `(v,0)` of a regular corona from the
/// integral support of `v` in `G`.
///
/// When `2r1 + t ≠ s`, periodicity holds iff every `Λ_θ` and `Λ_r` is an
/// integer. When `2r1 + t = s` the quantities `θ-s+t`, `Λ_θ` and `Λ_r` must
/// all be integer multiples of one `√Δ`; `Δ = 1` is reported as the integer
/// case.
pub fn corona_base_periodicity(params: &CoronaParams, supp: &[i64]) -> Result<PeriodicityReport, TransferError> {
    corona_base_periodicity_at(params, supp, None)
}

fn corona_base_periodicity_at(
    params: &CoronaParams,
    supp: &[i64],
    vertex: Option<usize>,
) -> Result<PeriodicityReport, TransferError> {
    let lower = lower_support(params, supp);
    let radicand_witness = |origin: Option<i64>, radicand: u64| -> Result<Witness, TransferError> {
        Ok(Witness::Radicand { vertex, origin, radicand, square_free_part: square_free_part(radicand)?.1 })
    };
    let top_aligned = params.top_eigenvalue() + params.t() == params.s();

    if !top_aligned {
        for &theta in &lower {
            let d = params.theta_radicand(theta);
            if perfect_sqrt(d).is_none() {
                return Ok(PeriodicityReport::refuted(
                    vertex,
                    Basis::CoronaBasePeriodicity,
                    radicand_witness(Some(theta), d)?,
                ));
            }
        }
        let d = params.r_radicand();
        if perfect_sqrt(d).is_none() {
            return Ok(PeriodicityReport::refuted(vertex, Basis::CoronaBasePeriodicity, radicand_witness(None, d)?));
        }
        return Ok(PeriodicityReport {
            vertex,
            periodic: true,
            case: PeriodicityCase::IntegerCase,
            delta: Some(1),
            basis: Basis::CoronaBasePeriodicity,
            witness: None,
            delta_divides_n2: None,
        });
    }

    // every nonzero quantity x must satisfy x² = m²Δ for one common Δ
    let mut quantities: Vec<(Option<i64>, u64)> = Vec::new();
    for &theta in &lower {
        let e = params.shift(theta).unsigned_abs();
        quantities.push((Some(theta), e * e));
        quantities.push((Some(theta), params.theta_radicand(theta)));
    }
    quantities.push((None, params.r_radicand()));
    let mut delta = None;
    for (origin, square) in quantities {
        if square == 0 {
            continue;
        }
        let core = square_free_part(square)?.1;
        match delta {
            None => delta = Some(core),
            Some(d) if d == core => {}
            Some(_) => {
                return Ok(PeriodicityReport::refuted(
                    vertex,
                    Basis::CoronaBasePeriodicity,
                    radicand_witness(origin, square)?,
                ))
            }
        }
    }
    let delta = delta.unwrap_or(1);
    Ok(PeriodicityReport {
        vertex,
        periodic: true,
        case: if delta == 1 { PeriodicityCase::IntegerCase } else { PeriodicityCase::QuadraticCase },
        delta: Some(delta),
        basis: Basis::CoronaBasePeriodicity,
        witness: None,
        delta_divides_n2: Some(params.n2() as u64 % delta == 0),
    })
}

/// Outcome of the necessary inequalities for periodicity of `(v,0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub holds: bool,
    pub violation: Option<Witness>,
}

/// Checks `n2 ≥ |θ-s+t|+1` for every `θ ≠ 2r1` in the support and
/// `n2(n1-1)² ≥ |2r1-s+t|+1`. A violation rules out periodicity of `(v,0)`.
pub fn thm43_necessary_bounds(params: &CoronaParams, supp: &[i64]) -> BoundCheck {
    bounds_at(params, supp, None)
}

fn bounds_at(params: &CoronaParams, supp: &[i64], vertex: Option<usize>) -> BoundCheck {
    let n2 = params.n2() as i64;
    for theta in lower_support(params, supp) {
        let required = params.shift(theta).abs() + 1;
        if n2 < required {
            return BoundCheck {
                holds: false,
                violation: Some(Witness::ThetaBound { vertex, theta, required, available: n2 }),
            };
        }
    }
    let k = params.n1() as i64 - 1;
    let available = n2 * k * k;
    let required = params.shift(params.top_eigenvalue()).abs() + 1;
    if available < required {
        return BoundCheck { holds: false, violation: Some(Witness::TopBound { vertex, required, available }) };
    }
    BoundCheck { holds: true, violation: None }
}

/// Which of the gap conditions fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapCondition {
    /// Between two shifted support elements.
    Pair,
    /// Between the shifted top eigenvalue and `(n1-1)` times another.
    Top,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapCheck {
    pub nonperiodic: bool,
    pub basis: Option<Basis>,
    pub condition: Option<GapCondition>,
    pub witness: Option<Witness>,
}

/// `d ∈ {√Δ, 2√Δ}` for some square-free `Δ`, for a positive integer `d`.
fn is_radical_gap(d: i64) -> bool {
    let sq = (d * d) as u64;
    d > 0 && (is_square_free(sq) || (sq % 4 == 0 && is_square_free(sq / 4)))
}

/// Gap conditions that rule out periodicity of every vertex `(v,w)`.
///
/// Small-gap form: two support elements with `0 < |λ-s+t| - |μ-s+t| < 3`, or
/// some `γ` with `0 < ||2r1-s+t| - (n1-1)|γ-s+t|| < 3`. Radical-gap form: the
/// same differences equal to `√Δ` or `2√Δ`.
pub fn thm44_thm45_nonperiodicity(params: &CoronaParams, supp: &[i64]) -> GapCheck {
    gaps_at(params, supp, None)
}

fn gaps_at(params: &CoronaParams, supp: &[i64], vertex: Option<usize>) -> GapCheck {
    let lower = lower_support(params, supp);
    let shifted: Vec<(i64, i64)> = lower.iter().map(|&th| (th, params.shift(th).abs())).collect();
    let top = params.shift(params.top_eigenvalue()).abs();
    let k = params.n1() as i64 - 1;

    let mut pair_diffs = Vec::new();
    for &(a, ea) in &shifted {
        for &(b, eb) in &shifted {
            if a != b && ea > eb {
                pair_diffs.push((a, b, ea - eb));
            }
        }
    }
    let top_diffs: Vec<(i64, i64)> = shifted.iter().map(|&(g, eg)| (g, (top - k * eg).abs())).collect();

    for (basis, accept) in [
        (Basis::SmallGapNonperiodicity, (|d: i64| 0 < d && d < 3) as fn(i64) -> bool),
        (Basis::RadicalGapNonperiodicity, is_radical_gap as fn(i64) -> bool),
    ] {
        if let Some(&(first, second, difference)) = pair_diffs.iter().find(|p| accept(p.2)) {
            return GapCheck {
                nonperiodic: true,
                basis: Some(basis),
                condition: Some(GapCondition::Pair),
                witness: Some(Witness::PairGap { vertex, first, second, difference }),
            };
        }
        if let Some(&(gamma, difference)) = top_diffs.iter().find(|p| accept(p.1)) {
            return GapCheck {
                nonperiodic: true,
                basis: Some(basis),
                condition: Some(GapCondition::Top),
                witness: Some(Witness::TopGap { vertex, gamma, difference }),
            };
        }
    }
    GapCheck { nonperiodic: false, basis: None, condition: None, witness: None }
}

/// Verdict for `K2 ∘̃ H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoVertexReport {
    pub n2: usize,
    pub r2: usize,
    pub verdict: Verdict,
    pub basis: Option<Basis>,
    pub witness: Option<Witness>,
    pub provenance: Option<String>,
}

pub const EVEN_ORDER_PROVENANCE: &str =
    "published result for K2 coronae with an even number of inner vertices (no transfer between the two base vertices)";

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// `x = m√Δ` for an integer `m`; returns `m ≥ 0`.
fn radical_multiple(x: i64, delta: u64) -> Option<i64> {
    let sq = (x as i128 * x as i128) as u64;
    if sq % delta != 0 {
        return None;
    }
    perfect_sqrt(sq / delta).map(|m| m as i64)
}

/// Square-free `Δ | 2n2` for which `(v,0)` would be periodic in
/// `K2 ∘̃ H`: both `m_θ = (θ-s+t)/√Δ` integers and `m_θ² + 4n2/Δ`
/// perfect squares for `θ ∈ {0, 2}`.
fn two_vertex_periodic_deltas(n2: usize, r2: usize) -> (Vec<u64>, Vec<u64>) {
    let twice = 2 * n2 as u64;
    let tried: Vec<u64> = (1..=twice).filter(|d| twice % d == 0 && is_square_free(*d)).collect();
    let shift = n2 as i64 - 2 * r2 as i64 - 1;
    let hits = tried
        .iter()
        .copied()
        .filter(|&delta| {
            let l = twice / delta;
            [shift, shift + 2].iter().all(|&x| {
                radical_multiple(x, delta).is_some_and(|m| perfect_sqrt((m * m) as u64 + 2 * l).is_some())
            })
        })
        .collect();
    (tried, hits)
}

/// No perfect state transfer in `K2 ∘̃ H` when `n2` is 1 or a prime
/// (re-derived by exhausting the square-free `Δ | 2n2`), or when `n2` is even
/// (quoted). Odd composite `n2` is left undecided.
pub fn k2_corona_no_pst(n2: usize, r2: usize) -> TwoVertexReport {
    let mut report = TwoVertexReport { n2, r2, verdict: Verdict::Undecided, basis: None, witness: None, provenance: None };
    if n2 == 1 || is_prime(n2) {
        let (tried, hits) = two_vertex_periodic_deltas(n2, r2);
        if hits.is_empty() {
            report.verdict = Verdict::NoPst;
            report.basis = Some(Basis::TwoVertexBasePrimeOrder);
            report.witness = Some(Witness::SquareDifferences { deltas: tried });
            return report;
        }
    }
    if n2 % 2 == 0 {
        report.verdict = Verdict::NoPst;
        report.basis = Some(Basis::TwoVertexBaseEvenOrder);
        report.provenance = Some(EVEN_ORDER_PROVENANCE.to_string());
    }
    report
}

/// Integer support of `v` in `G`, or `None` when some element is not an
/// integer.
pub fn integral_support(gdec: &SpectralDecomposition, v: usize, tol: f64) -> Result<Option<Vec<i64>>, TransferError> {
    Ok(eigenvalue_support(gdec, v, tol)?
        .into_iter()
        .map(|r| exact_eigenvalue(gdec, r).and_then(|q| q.as_integer()))
        .collect())
}

/// The first refutation of periodicity of `(v,0)` among the necessary
/// bounds, the gap conditions and the exact base periodicity rule.
pub fn base_vertex_refutation(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    v: usize,
    tol: f64,
) -> Result<Option<(Basis, Witness)>, TransferError> {
    if params.n1() == 2 {
        let k2 = k2_corona_no_pst(params.n2(), params.r2());
        if k2.basis == Some(Basis::TwoVertexBasePrimeOrder) {
            return Ok(Some((Basis::TwoVertexBasePrimeOrder, k2.witness.expect("prime-order verdicts carry a witness"))));
        }
    }
    let Some(supp) = integral_support(gdec, v, tol)? else {
        return Ok(None);
    };
    let bounds = bounds_at(params, &supp, Some(v));
    if let Some(w) = bounds.violation {
        return Ok(Some((Basis::NecessaryBounds, w)));
    }
    let gaps = gaps_at(params, &supp, Some(v));
    if let (Some(basis), Some(w)) = (gaps.basis, gaps.witness) {
        return Ok(Some((basis, w)));
    }
    let periodicity = corona_base_periodicity_at(params, &supp, Some(v))?;
    if let Some(w) = periodicity.witness {
        return Ok(Some((Basis::CoronaBasePeriodicity, w)));
    }
    Ok(None)
}

/// Perfect state transfer between base vertices `(u,0)` and `(v,0)` of a
/// regular corona, using only the decomposition of `G`.
///
/// Refutations are tried first (two-vertex base rule, necessary bounds, gap
/// conditions, exact periodicity of both endpoints); otherwise the exact
/// closed-form support is certified directly.
pub fn certify_corona_base_pair(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    u: usize,
    v: usize,
    tol: f64,
) -> Result<PstReport, TransferError> {
    if u == v {
        return Err(TransferError::SameVertex(u));
    }
    let (cu, cv) = (params.base_index(u), params.base_index(v));
    if params.n1() == 2 {
        let k2 = k2_corona_no_pst(params.n2(), params.r2());
        if let (Verdict::NoPst, Some(basis)) = (k2.verdict, k2.basis) {
            let witness = k2.witness.unwrap_or(Witness::SquareDifferences { deltas: Vec::new() });
            let mut report = PstReport::refuted(cu, cv, basis, witness);
            report.provenance = k2.provenance;
            return Ok(report);
        }
    }
    for vertex in [u, v] {
        if let Some((basis, witness)) = base_vertex_refutation(gdec, params, vertex, tol)? {
            return Ok(PstReport::refuted(cu, cv, basis, witness));
        }
    }
    Ok(pst_certify(&TransferData::from_corona(gdec, params, u, v, tol)?))
}

impl CoronaParams {
    /// Index of `(u,0)` in the corona; base vertices come first.
    pub fn base_index(&self, u: usize) -> usize {
        u
    }
}

/// `Λ_r²` with its square-free decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RadicandReport {
    pub radicand: u64,
    pub square: u64,
    pub square_free_part: u64,
    pub irrational: bool,
}

impl RadicandReport {
    pub fn of(radicand: u64) -> Result<Self, TransferError> {
        let (square, core) = square_free_part(radicand)?;
        Ok(Self { radicand, square, square_free_part: core, irrational: core != 1 })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocktailBranch {
    /// `4(m-1)² + (2m-1)²` is a perfect square.
    PerfectSquare,
    /// Irrational, with a square-free part different from that of
    /// `(m-1)² + 1`.
    DistinctRadicals,
}

/// Best time found by a bounded PGST search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PgstSearchResult {
    pub source: usize,
    pub target: usize,
    pub target_epsilon: f64,
    pub l_bound: u64,
    pub best_l: u64,
    /// The best time is `time_multiple · π`.
    pub time_multiple: f64,
    pub time: f64,
    pub fidelity: f64,
    pub achieved: bool,
    pub theorem_applicable: bool,
    pub basis: Basis,
    pub g: Option<u64>,
    pub lambda_r: Option<RadicandReport>,
    pub branch: Option<CocktailBranch>,
    pub notes: Vec<String>,
}

/// Candidate times for a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeLattice {
    /// `T_l = (4l + 2/g)π`.
    ShiftedQuarter { g: u64 },
    /// `T_l = 2πl`.
    EvenMultiple,
}

impl TimeLattice {
    pub fn multiple(&self, l: u64) -> f64 {
        match *self {
            TimeLattice::ShiftedQuarter { g } => 4.0 * l as f64 + 2.0 / g as f64,
            TimeLattice::EvenMultiple => 2.0 * l as f64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanOutcome {
    pub best_l: u64,
    pub time_multiple: f64,
    pub fidelity: f64,
    pub achieved: bool,
}

/// Scans `l = 0..=l_bound` and keeps the first best fidelity, stopping as
/// soon as `1 - epsilon` is reached.
pub fn scan_lattice(kernel: &CoronaKernel, lattice: TimeLattice, epsilon: f64, l_bound: u64) -> ScanOutcome {
    let mut best = ScanOutcome { best_l: 0, time_multiple: lattice.multiple(0), fidelity: -1.0, achieved: false };
    for l in 0..=l_bound {
        let k = lattice.multiple(l);
        let fidelity = kernel.value_at_pi_multiple(k).norm_sqr();
        if fidelity > best.fidelity {
            best = ScanOutcome { best_l: l, time_multiple: k, fidelity, achieved: fidelity >= 1.0 - epsilon };
            if best.achieved {
                break;
            }
        }
    }
    best
}

fn search_result(
    kernel: &CoronaKernel,
    lattice: TimeLattice,
    (u, v): (usize, usize),
    epsilon: f64,
    l_bound: u64,
    basis: Basis,
) -> PgstSearchResult {
    let outcome = scan_lattice(kernel, lattice, epsilon, l_bound);
    PgstSearchResult {
        source: u,
        target: v,
        target_epsilon: epsilon,
        l_bound,
        best_l: outcome.best_l,
        time_multiple: outcome.time_multiple,
        time: outcome.time_multiple * PI,
        fidelity: outcome.fidelity,
        achieved: outcome.achieved,
        theorem_applicable: true,
        basis,
        g: match lattice {
            TimeLattice::ShiftedQuarter { g } => Some(g),
            TimeLattice::EvenMultiple => None,
        },
        lambda_r: None,
        branch: None,
        notes: Vec::new(),
    }
}

/// Re-evaluates the fidelity of a search result from the closed-form
/// transition element.
pub fn recompute_fidelity(kernel: &CoronaKernel, result: &PgstSearchResult) -> f64 {
    kernel.value_at_pi_multiple(result.time_multiple).norm_sqr()
}

/// Certifies perfect state transfer `u → v` in `G` at `π/g` and returns `g`.
fn base_pst_g(gdec: &SpectralDecomposition, u: usize, v: usize, tol: f64) -> Result<u64, TransferError> {
    let data = TransferData::from_decomposition(gdec, u, v, tol, RecognizeOptions::default())?;
    let report = pst_certify(&data);
    match (report.verdict, report.delta, report.g) {
        (Verdict::Pst, Some(1), Some(g)) => Ok(g),
        (Verdict::Pst, Some(delta), _) => Err(TransferError::Precondition(format!(
            "base graph has perfect state transfer only at an irrational multiple of π (Δ = {delta})"
        ))),
        _ => Err(TransferError::Precondition(format!(
            "base graph has no perfect state transfer from {u} to {v} ({:?})",
            report.verdict
        ))),
    }
}

/// Searches `T_l = (4l + 2/g)π` for pretty good state transfer from `(u,0)`
/// to `(v,0)` in `G ∘̃ K̄_{n2}`, where `G` has perfect state transfer at
/// `π/g` and `Λ_r` is irrational.
pub fn pgst_time_search(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    u: usize,
    v: usize,
    epsilon: f64,
    l_bound: u64,
) -> Result<PgstSearchResult, TransferError> {
    if params.r2() != 0 {
        return Err(TransferError::Precondition(format!(
            "inner graph must be edgeless, got degree {}",
            params.r2()
        )));
    }
    let g = base_pst_g(gdec, u, v, DEFAULT_TRANSFER_TOL)?;
    let lambda_r = RadicandReport::of(params.r_radicand())?;
    if !lambda_r.irrational {
        return Err(TransferError::Precondition(format!(
            "Λ_r = √{} is rational; the search requires an irrational Λ_r",
            lambda_r.radicand
        )));
    }
    if params.n1() >= 3 {
        let supp = integral_support(gdec, u, DEFAULT_TRANSFER_TOL)?
            .ok_or_else(|| TransferError::InvariantViolated("support of a PST vertex is not integral".into()))?;
        for theta in lower_support(params, &supp) {
            let d = params.theta_radicand(theta);
            if perfect_sqrt(d).is_some() {
                return Err(TransferError::InvariantViolated(format!(
                    "Λ_θ = √{d} is rational at θ = {theta}"
                )));
            }
        }
    }
    let kernel = CoronaKernel::new(gdec, params, u, v)?;
    let mut result = search_result(
        &kernel,
        TimeLattice::ShiftedQuarter { g },
        (params.base_index(u), params.base_index(v)),
        epsilon,
        l_bound,
        Basis::PgstIrrationalLambdaR,
    );
    result.lambda_r = Some(lambda_r);
    Ok(result)
}

/// The same lattice scan without checking any hypothesis; `g` defaults to
/// the base graph's PST value when it has one.
pub fn pgst_raw_scan(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    u: usize,
    v: usize,
    epsilon: f64,
    l_bound: u64,
    reason: String,
) -> Result<PgstSearchResult, TransferError> {
    let (g, note) = match base_pst_g(gdec, u, v, DEFAULT_TRANSFER_TOL) {
        Ok(g) => (g, None),
        Err(err) => (1, Some(format!("using g = 1: {err}"))),
    };
    let kernel = CoronaKernel::new(gdec, params, u, v)?;
    let mut result = search_result(
        &kernel,
        TimeLattice::ShiftedQuarter { g },
        (params.base_index(u), params.base_index(v)),
        epsilon,
        l_bound,
        Basis::PgstRawScan,
    );
    result.theorem_applicable = false;
    result.lambda_r = Some(RadicandReport::of(params.r_radicand())?);
    result.notes.push(reason);
    result.notes.extend(note);
    Ok(result)
}

/// The three radicands of the cocktail party corona with `H = K1`:
/// `4(m-1)² + (2m-1)²`, `(m-1)² + 1`, `(m-2)² + 1` (each `Λ = 2√·`).
pub fn cocktail_radicands(m: u64) -> (u64, u64, u64) {
    let (a, b, c) = (m - 1, 2 * m - 1, m - 2);
    (4 * a * a + b * b, a * a + 1, c * c + 1)
}

pub fn cocktail_branch(m: u64) -> Result<Option<CocktailBranch>, TransferError> {
    let (top, first, _) = cocktail_radicands(m);
    if perfect_sqrt(top).is_some() {
        return Ok(Some(CocktailBranch::PerfectSquare));
    }
    let (top_core, first_core) = (square_free_part(top)?.1, square_free_part(first)?.1);
    Ok((top_core != first_core).then_some(CocktailBranch::DistinctRadicals))
}

/// Searches `T = 2πl` for pretty good state transfer between the antipodal
/// base vertices `(0,0)` and `(1,0)` of `CP(m) ∘̃ K1` for odd `m > 2`.
pub fn pgst_cocktail(m: u64, epsilon: f64, l_bound: u64) -> Result<PgstSearchResult, TransferError> {
    if m <= 2 || m % 2 == 0 {
        return Err(TransferError::Precondition(format!("m must be odd and greater than 2, got {m}")));
    }
    let graph = Generator::CocktailParty(m as usize).build();
    let gdec = decompose_graph(&graph, DEFAULT_CLUSTER_TOL)?;
    let params = CoronaParams::new(2 * m as usize, 1, 2 * m as usize - 2, 0)?;
    let kernel = CoronaKernel::new(&gdec, &params, 0, 1)?;
    let branch = cocktail_branch(m)?;
    let mut result =
        search_result(&kernel, TimeLattice::EvenMultiple, (0, 1), epsilon, l_bound, Basis::PgstCocktailParty);
    result.branch = branch;
    result.lambda_r = Some(RadicandReport::of(params.r_radicand())?);
    if branch.is_none() {
        result.theorem_applicable = false;
        result.notes.push(
            "4(m-1)²+(2m-1)² is irrational with the same square-free part as (m-1)²+1; no branch applies".into(),
        );
    }
    Ok(result)
}
