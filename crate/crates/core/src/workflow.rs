//! End-to-end operations on textual targets: parse a graph or corona spec,
//! resolve vertex addresses, run a decision procedure, and render the result
//! as JSON or CSV.
//!
//! Target grammar: a generator spec (`K:n`, `C:n`, `empty:n`, `CP:m`,
//! `HQ:d`, `halved:d`), `file:PATH` for an edge list, `corona(G,H)` with
//! either form for `G` and `H`, or `cocktail-corona:m` for `CP:m ∘̃ K1`.
//! Vertices are plain indices, or `base:i` / `copy:i:j` on coronae.

use std::fmt;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::algebraic::{Eigenvalue, RecognizeOptions};
use crate::corona_spectra::{corona_full_q, corona_spectrum, CoronaEigenvalue, CoronaError, CoronaParams};
use crate::graphs::{
    generate, read_edge_list, vertex_complemented_corona, CoronaVertex, Generator, Graph, GraphError,
};
use crate::spectra::{
    decompose, decompose_graph, fmt_sig, scan_with, FidelityScan, PairKernel, SpectraError, SpectralDecomposition,
};
use crate::state_transfer::{
    base_vertex_refutation, certify_corona_base_pair, integral_support, pgst_cocktail, pgst_raw_scan,
    pgst_time_search, pst_certify, thm44_thm45_nonperiodicity, PgstSearchResult, PstReport, TransferData,
    TransferError, Verdict, Witness,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WorkflowError {
    #[error("cannot parse `{input}` at position {position}: {message}")]
    Parse { input: String, position: usize, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Corona(#[from] CoronaError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

impl WorkflowError {
    /// Process exit code: 3 for numerically undecided input, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkflowError::Transfer(TransferError::UndecidedNumeric(_)) => 3,
            _ => 2,
        }
    }

    fn parse(input: &str, position: usize, message: impl Into<String>) -> Self {
        WorkflowError::Parse { input: input.to_string(), position, message: message.into() }
    }
}

/// Tolerances, search bounds and output format shared by every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    /// Exact recognition and support/cospectrality tolerance.
    pub tolerance: f64,
    /// Eigenvalue clustering tolerance.
    pub cluster_tol: f64,
    pub l_bound: u64,
    pub epsilon: f64,
    pub t_max: f64,
    pub steps: usize,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            cluster_tol: 1e-7,
            l_bound: 1_000_000,
            epsilon: 0.01,
            t_max: 50.0,
            steps: 2000,
            format: OutputFormat::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), WorkflowError> {
        let positive = [
            ("tolerance", self.tolerance),
            ("cluster-tol", self.cluster_tol),
            ("epsilon", self.epsilon),
            ("t-max", self.t_max),
        ];
        for (name, x) in positive {
            if !(x > 0.0 && x.is_finite()) {
                return Err(WorkflowError::Config(format!("{name} must be positive, got {x}")));
            }
        }
        if self.steps < 2 {
            return Err(WorkflowError::Config(format!("steps must be at least 2, got {}", self.steps)));
        }
        Ok(())
    }

    fn recognize(&self) -> RecognizeOptions {
        RecognizeOptions { tolerance: self.tolerance, ..RecognizeOptions::default() }
    }

    /// Support and cospectrality threshold; never tighter than `1e-8`.
    fn support_tol(&self) -> f64 {
        self.tolerance.max(1e-8)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = WorkflowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(WorkflowError::Config(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

/// A parsed target.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    Graph { name: String, graph: Graph },
    Corona { g_name: String, g: Graph, h_name: String, h: Graph },
    /// `CP:m ∘̃ K1`.
    CocktailCorona { m: usize },
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Graph { name, .. } => f.write_str(name),
            Target::Corona { g_name, h_name, .. } => write!(f, "corona({g_name},{h_name})"),
            Target::CocktailCorona { m } => write!(f, "cocktail-corona:{m}"),
        }
    }
}

impl Target {
    /// The assembled graph.
    pub fn graph(&self) -> Graph {
        match self {
            Target::Graph { graph, .. } => graph.clone(),
            Target::Corona { g, h, .. } => vertex_complemented_corona(g, h),
            Target::CocktailCorona { m } => {
                vertex_complemented_corona(&Generator::CocktailParty(*m).build(), &Generator::Complete(1).build())
            }
        }
    }

    /// `(G, H)` for corona targets.
    pub fn factors(&self) -> Option<(Graph, Graph)> {
        match self {
            Target::Graph { .. } => None,
            Target::Corona { g, h, .. } => Some((g.clone(), h.clone())),
            Target::CocktailCorona { m } => {
                Some((Generator::CocktailParty(*m).build(), Generator::Complete(1).build()))
            }
        }
    }

    pub fn order(&self) -> usize {
        match self.factors() {
            Some((g, h)) => g.order() * (1 + h.order()),
            None => self.graph().order(),
        }
    }
}

fn parse_atom(input: &str, text: &str, offset: usize) -> Result<(String, Graph), WorkflowError> {
    let trimmed = text.trim();
    let lead = text.len() - text.trim_start().len();
    if trimmed.is_empty() {
        return Err(WorkflowError::parse(input, offset, "expected a graph spec"));
    }
    if let Some(path) = trimmed.strip_prefix("file:") {
        return Ok((trimmed.to_string(), read_edge_list(path)?));
    }
    let graph = generate(trimmed).map_err(|e| WorkflowError::parse(input, offset + lead, e.to_string()))?;
    Ok((trimmed.to_string(), graph))
}

/// Parses a target spec; errors report the character offset.
pub fn parse_target(input: &str) -> Result<Target, WorkflowError> {
    let text = input.trim_end();
    let lead = text.len() - text.trim_start().len();
    let body = text.trim_start();
    if let Some(rest) = body.strip_prefix("cocktail-corona:") {
        let at = lead + "cocktail-corona:".len();
        let m: usize = rest
            .trim()
            .parse()
            .map_err(|_| WorkflowError::parse(input, at, format!("expected a positive integer, got `{rest}`")))?;
        if m == 0 {
            return Err(WorkflowError::parse(input, at, "m must be positive"));
        }
        return Ok(Target::CocktailCorona { m });
    }
    if let Some(rest) = body.strip_prefix("corona(") {
        let open = lead + "corona(".len();
        let close = rest
            .rfind(')')
            .ok_or_else(|| WorkflowError::parse(input, input.len(), "missing closing `)`"))?;
        if close + 1 != rest.len() {
            return Err(WorkflowError::parse(input, open + close + 1, "unexpected text after `)`"));
        }
        let inner = &rest[..close];
        let comma = inner
            .find(',')
            .ok_or_else(|| WorkflowError::parse(input, open + close, "expected `corona(G,H)`"))?;
        let (g_name, g) = parse_atom(input, &inner[..comma], open)?;
        let (h_name, h) = parse_atom(input, &inner[comma + 1..], open + comma + 1)?;
        return Ok(Target::Corona { g_name, g, h_name, h });
    }
    let (name, graph) = parse_atom(input, body, lead)?;
    Ok(Target::Graph { name, graph })
}

/// Resolves a vertex address to a matrix index of the assembled graph.
pub fn parse_vertex(input: &str, target: &Target) -> Result<usize, WorkflowError> {
    let text = input.trim();
    let number = |part: &str, at: usize| -> Result<usize, WorkflowError> {
        part.parse().map_err(|_| WorkflowError::parse(input, at, format!("expected a vertex index, got `{part}`")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    let factors = target.factors();
    let index = match (parts.as_slice(), &factors) {
        ([plain], _) => number(plain, 0)?,
        (["base", i], Some((g, h))) => CoronaVertex::base(number(i, 5)?).index(g.order(), h.order())?,
        (["copy", i, j], Some((g, h))) => {
            let base = number(i, 5)?;
            let inner = number(j, 6 + i.len())?;
            if inner >= h.order() {
                return Err(WorkflowError::parse(
                    input,
                    6 + i.len(),
                    format!("copy vertex {inner} out of range for an inner graph on {} vertices", h.order()),
                ));
            }
            CoronaVertex::in_copy(base, inner).index(g.order(), h.order())?
        }
        (["base", ..] | ["copy", ..], None) => {
            return Err(WorkflowError::parse(input, 0, "base:/copy: addresses need a corona target"))
        }
        _ => return Err(WorkflowError::parse(input, 0, "expected INDEX, base:I or copy:I:J")),
    };
    let n = target.order();
    if index >= n {
        return Err(GraphError::VertexOutOfRange { vertex: index, n }.into());
    }
    Ok(index)
}

/// One distinct eigenvalue with its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: String,
    pub exact: Option<Eigenvalue>,
    pub approx: f64,
    pub multiplicity: usize,
}

impl SpectrumEntry {
    fn new(value: Eigenvalue, multiplicity: usize) -> Self {
        Self {
            value: value.to_string(),
            exact: value.exact().map(Eigenvalue::Exact),
            approx: value.to_f64(),
            multiplicity,
        }
    }
}

fn entries(dec: &SpectralDecomposition) -> Vec<SpectrumEntry> {
    (0..dec.len()).map(|r| SpectrumEntry::new(dec.eigenvalue(r), dec.multiplicities()[r])).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumListing {
    pub target: String,
    pub order: usize,
    pub eigenvalues: Vec<SpectrumEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// Distinct signless Laplacian eigenvalues with multiplicities, exact where
/// recognizable.
pub fn spectrum(target: &Target, cfg: &RunConfig) -> Result<SpectrumListing, WorkflowError> {
    cfg.validate()?;
    let dec = decompose_graph(&target.graph(), cfg.cluster_tol)?.recognized(cfg.recognize());
    Ok(SpectrumListing {
        target: target.to_string(),
        order: dec.order(),
        eigenvalues: entries(&dec),
        warnings: dec.warnings().to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoronaSummary {
    pub target: String,
    pub params: CoronaParams,
    pub branches: Vec<CoronaEigenvalue>,
    pub closed_form: Vec<SpectrumEntry>,
    pub oracle: Vec<SpectrumEntry>,
    /// Largest gap between the two sorted eigenvalue multisets.
    pub max_deviation: f64,
    pub multiplicities_match: bool,
}

/// Closed-form corona spectrum next to the numeric decomposition of the
/// assembled signless Laplacian.
pub fn corona_spectrum_summary(target: &Target, cfg: &RunConfig) -> Result<CoronaSummary, WorkflowError> {
    cfg.validate()?;
    let (g, h) = target
        .factors()
        .ok_or_else(|| WorkflowError::Precondition(format!("`{target}` is not a corona")))?;
    let params = CoronaParams::from_graphs(&g, &h)?;
    let gdec = decompose_graph(&g, cfg.cluster_tol)?;
    let hdec = decompose_graph(&h, cfg.cluster_tol)?;
    let closed = corona_spectrum(&gdec, &hdec, &params)?;
    let oracle = decompose(&corona_full_q(&g, &h), cfg.cluster_tol)?.recognized(cfg.recognize());

    let expand = |pairs: &mut dyn Iterator<Item = (f64, usize)>| {
        let mut xs: Vec<f64> = pairs.flat_map(|(x, m)| std::iter::repeat_n(x, m)).collect();
        xs.sort_by(f64::total_cmp);
        xs
    };
    let distinct = closed.distinct();
    let a = expand(&mut distinct.iter().map(|(e, m)| (e.to_f64(), *m)));
    let b = expand(&mut oracle.eigenvalues().iter().copied().zip(oracle.multiplicities().iter().copied()));
    let max_deviation = if a.len() == b.len() {
        a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let multiplicities_match = distinct.len() == oracle.len()
        && distinct.iter().zip(0..oracle.len()).all(|((e, m), r)| {
            *m == oracle.multiplicities()[r] && (e.to_f64() - oracle.eigenvalues()[r]).abs() < 1e-8
        });
    Ok(CoronaSummary {
        target: target.to_string(),
        params,
        branches: closed.eigenvalues().to_vec(),
        closed_form: distinct.into_iter().map(|(e, m)| SpectrumEntry::new(e, m)).collect(),
        oracle: entries(&oracle),
        max_deviation,
        multiplicities_match,
    })
}

/// Decides perfect state transfer between two vertices of any target.
///
/// Corona targets with regular, connected factors go through the corona
/// rules; a copy vertex is refuted when the gap conditions fire at its base
/// vertex, and otherwise the exact closed-form decomposition is certified.
/// Everything else is certified from a numeric decomposition.
pub fn check_pst(target: &Target, u: usize, v: usize, cfg: &RunConfig) -> Result<PstReport, WorkflowError> {
    cfg.validate()?;
    if u == v {
        return Err(TransferError::SameVertex(u).into());
    }
    let tol = cfg.support_tol();
    if let Some((g, h)) = target.factors() {
        if let Ok(params) = CoronaParams::from_graphs(&g, &h) {
            let gdec = decompose_graph(&g, cfg.cluster_tol)?;
            let (n1, n2) = (g.order(), h.order());
            let (cu, cv) = (CoronaVertex::from_index(u, n1, n2)?, CoronaVertex::from_index(v, n1, n2)?);
            if cu.inner == 0 && cv.inner == 0 {
                return Ok(certify_corona_base_pair(&gdec, &params, cu.base, cv.base, tol)?);
            }
            for (vertex, index) in [(cu, u), (cv, v)] {
                if let Some((basis, witness)) = endpoint_refutation(&gdec, &params, vertex, tol)? {
                    let mut report = pst_certify(&TransferData {
                        source: u,
                        target: v,
                        support: Vec::new(),
                        signs: Vec::new(),
                        strongly_cospectral: false,
                    });
                    report.basis = basis;
                    report.strongly_cospectral = None;
                    report.refutation_witness = Some(if vertex.inner == 0 {
                        witness
                    } else {
                        Witness::Inherited { base_vertex: vertex.base, reason: Box::new(witness) }
                    });
                    debug_assert_eq!(report.verdict, Verdict::NoPst, "vertex {index}");
                    return Ok(report);
                }
            }
            let hdec = decompose_graph(&h, cfg.cluster_tol)?;
            let dec = corona_spectrum(&gdec, &hdec, &params)?.decomposition()?;
            let data = TransferData::from_decomposition(&dec, u, v, tol, cfg.recognize())?;
            return Ok(pst_certify(&data));
        }
    }
    let dec = decompose_graph(&target.graph(), cfg.cluster_tol)?;
    let data = TransferData::from_decomposition(&dec, u, v, tol, cfg.recognize())?;
    Ok(pst_certify(&data))
}

fn endpoint_refutation(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    vertex: CoronaVertex,
    tol: f64,
) -> Result<Option<(crate::state_transfer::Basis, Witness)>, WorkflowError> {
    if vertex.inner == 0 {
        return Ok(base_vertex_refutation(gdec, params, vertex.base, tol)?);
    }
    let Some(supp) = integral_support(gdec, vertex.base, tol)? else {
        return Ok(None);
    };
    let gaps = thm44_thm45_nonperiodicity(params, &supp);
    Ok(gaps.basis.zip(gaps.witness))
}

/// Bounded PGST search between two base vertices of a corona.
///
/// `cocktail-corona:m` uses the cocktail-party lattice. Other coronae use
/// the `(4l + 2/g)π` lattice; when its hypotheses fail, the same lattice is
/// still scanned and the result is marked as not backed by a theorem.
pub fn search_pgst(target: &Target, u: usize, v: usize, cfg: &RunConfig) -> Result<PgstSearchResult, WorkflowError> {
    cfg.validate()?;
    if let Target::CocktailCorona { m } = target {
        if (u, v) != (0, 1) && (u, v) != (1, 0) {
            return Err(WorkflowError::Precondition(
                "the cocktail-party search runs between base:0 and base:1".into(),
            ));
        }
        return Ok(pgst_cocktail(*m as u64, cfg.epsilon, cfg.l_bound)?);
    }
    let (g, h) = target
        .factors()
        .ok_or_else(|| WorkflowError::Precondition(format!("`{target}` is not a corona")))?;
    let params = CoronaParams::from_graphs(&g, &h)?;
    let (n1, n2) = (g.order(), h.order());
    let (cu, cv) = (CoronaVertex::from_index(u, n1, n2)?, CoronaVertex::from_index(v, n1, n2)?);
    if cu.inner != 0 || cv.inner != 0 {
        return Err(WorkflowError::Precondition("the search runs between base vertices only".into()));
    }
    if cu.base == cv.base {
        return Err(TransferError::SameVertex(u).into());
    }
    let gdec = decompose_graph(&g, cfg.cluster_tol)?;
    match pgst_time_search(&gdec, &params, cu.base, cv.base, cfg.epsilon, cfg.l_bound) {
        Ok(result) => Ok(result),
        Err(err @ (TransferError::Precondition(_) | TransferError::InvariantViolated(_))) => {
            Ok(pgst_raw_scan(&gdec, &params, cu.base, cv.base, cfg.epsilon, cfg.l_bound, err.to_string())?)
        }
        Err(err) => Err(err.into()),
    }
}

/// Times at which to evaluate the transition amplitude.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeRequest {
    At(f64),
    Grid { t_min: f64, t_max: f64, steps: usize },
}

/// Parses `T_MIN:T_MAX:STEPS`.
pub fn parse_grid(input: &str) -> Result<TimeRequest, WorkflowError> {
    let parts: Vec<&str> = input.split(':').collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(WorkflowError::parse(input, 0, "expected T_MIN:T_MAX:STEPS"));
    };
    let t_min: f64 =
        a.trim().parse().map_err(|_| WorkflowError::parse(input, 0, format!("bad start time `{a}`")))?;
    let t_max: f64 = b
        .trim()
        .parse()
        .map_err(|_| WorkflowError::parse(input, a.len() + 1, format!("bad end time `{b}`")))?;
    let steps: usize = c
        .trim()
        .parse()
        .map_err(|_| WorkflowError::parse(input, a.len() + b.len() + 2, format!("bad step count `{c}`")))?;
    if !(t_max > t_min) || steps < 2 {
        return Err(WorkflowError::parse(input, 0, "need T_MIN < T_MAX and at least 2 steps"));
    }
    Ok(TimeRequest::Grid { t_min, t_max, steps })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FidelityOutput {
    Point { source: usize, target: usize, tau: f64, re: f64, im: f64, fidelity: f64 },
    Scan { source: usize, target: usize, scan: FidelityScan },
}

pub fn fidelity(
    target: &Target,
    u: usize,
    v: usize,
    request: TimeRequest,
    cfg: &RunConfig,
) -> Result<FidelityOutput, WorkflowError> {
    cfg.validate()?;
    let dec = decompose_graph(&target.graph(), cfg.cluster_tol)?;
    let kernel = PairKernel::new(&dec, u, v)?;
    Ok(match request {
        TimeRequest::At(tau) => {
            let value = kernel.value(tau);
            FidelityOutput::Point { source: u, target: v, tau, re: value.re, im: value.im, fidelity: value.norm_sqr() }
        }
        TimeRequest::Grid { t_min, t_max, steps } => FidelityOutput::Scan {
            source: u,
            target: v,
            scan: scan_with(|tau| kernel.fidelity(tau), t_min, t_max, steps)?,
        },
    })
}

/// Rounds every float in a JSON tree to twelve significant digits.
fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| fmt_sig(x).parse::<f64>().ok()) {
                if let Some(rounded) = serde_json::Number::from_f64(x) {
                    *n = rounded;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with floats at twelve significant digits. Non-finite floats
/// become `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut tree = serde_json::to_value(value).expect("reports serialize");
    round_floats(&mut tree);
    serde_json::to_string_pretty(&tree).expect("json values serialize")
}

fn csv_cell(value: &Value) -> String {
    let text = match value {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt_sig(x),
            _ => n.to_string(),
        },
        other => other.to_string(),
    };
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text
    }
}

/// Two-column `field,value` CSV of a report's top-level fields.
pub fn to_field_csv<T: Serialize>(value: &T) -> String {
    let mut tree = serde_json::to_value(value).expect("reports serialize");
    round_floats(&mut tree);
    let mut out = String::from("field,value\n");
    if let Value::Object(map) = tree {
        for (key, v) in &map {
            out.push_str(&format!("{key},{}\n", csv_cell(v)));
        }
    }
    out
}

impl SpectrumListing {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,approx,multiplicity\n");
        for e in &self.eigenvalues {
            out.push_str(&format!("{},{},{}\n", e.value, fmt_sig(e.approx), e.multiplicity));
        }
        out
    }
}

impl CoronaSummary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("source,value,approx,multiplicity\n");
        for (source, list) in [("closed-form", &self.closed_form), ("oracle", &self.oracle)] {
            for e in list {
                out.push_str(&format!("{source},{},{},{}\n", e.value, fmt_sig(e.approx), e.multiplicity));
            }
        }
        out
    }
}

impl FidelityOutput {
    pub fn to_csv(&self) -> String {
        match self {
            FidelityOutput::Point { tau, re, im, fidelity, .. } => format!(
                "tau,re,im,fidelity\n{},{},{},{}\n",
                fmt_sig(*tau),
                fmt_sig(*re),
                fmt_sig(*im),
                fmt_sig(*fidelity)
            ),
            FidelityOutput::Scan { scan, .. } => scan.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::QuadExt;
    use crate::state_transfer::Basis;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn parses_targets() {
        assert!(matches!(parse_target("CP:4").unwrap(), Target::Graph { .. }));
        let t = parse_target("corona(C:4, K:1)").unwrap();
        assert_eq!(t.to_string(), "corona(C:4,K:1)");
        assert_eq!(t.order(), 8);
        assert_eq!(parse_target("cocktail-corona:3").unwrap(), Target::CocktailCorona { m: 3 });
        match parse_target("corona(C:4,Q:1)") {
            Err(WorkflowError::Parse { position, .. }) => assert_eq!(position, 11),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_target("corona(C:4,K:1"), Err(WorkflowError::Parse { .. })));
        assert!(matches!(parse_target("corona(C:4)"), Err(WorkflowError::Parse { .. })));
        assert!(matches!(parse_target("cocktail-corona:x"), Err(WorkflowError::Parse { position: 16, .. })));
    }

    #[test]
    fn parses_vertices() {
        let t = parse_target("corona(C:4,K:2)").unwrap();
        assert_eq!(parse_vertex("base:2", &t).unwrap(), 2);
        assert_eq!(parse_vertex("copy:1:1", &t).unwrap(), 4 + 2 + 1);
        assert_eq!(parse_vertex("7", &t).unwrap(), 7);
        assert!(parse_vertex("copy:1:2", &t).is_err());
        assert!(parse_vertex("12", &t).is_err());
        assert!(parse_vertex("base:x", &t).is_err());
        let plain = parse_target("K:2").unwrap();
        assert!(matches!(parse_vertex("base:0", &plain), Err(WorkflowError::Parse { .. })));
    }

    #[test]
    fn spectrum_listings() {
        let listing = spectrum(&parse_target("CP:4").unwrap(), &cfg()).unwrap();
        let got: Vec<(String, usize)> = listing.eigenvalues.iter().map(|e| (e.value.clone(), e.multiplicity)).collect();
        assert_eq!(got, vec![("12".into(), 1), ("6".into(), 4), ("4".into(), 3)]);
        let empty = spectrum(&parse_target("empty:3").unwrap(), &cfg()).unwrap();
        assert_eq!(empty.eigenvalues.len(), 1);
        assert_eq!(empty.eigenvalues[0].multiplicity, 3);
        assert!(listing.to_csv().starts_with("value,approx,multiplicity\n12,12,1\n"));
    }

    #[test]
    fn corona_summaries() {
        let p4 = corona_spectrum_summary(&parse_target("corona(K:2,K:1)").unwrap(), &cfg()).unwrap();
        let values: Vec<&str> = p4.closed_form.iter().map(|e| e.value.as_str()).collect();
        assert_eq!(values, ["2+√2", "2", "2-√2", "0"]);
        assert!(p4.max_deviation < 1e-8 && p4.multiplicities_match);
        let c5 = corona_spectrum_summary(&parse_target("corona(C:5,C:5)").unwrap(), &cfg()).unwrap();
        assert_eq!(c5.closed_form.iter().map(|e| e.multiplicity).sum::<usize>(), 30);
        assert!(c5.max_deviation < 1e-8 && c5.multiplicities_match);
        assert!(corona_spectrum_summary(&parse_target("K:3").unwrap(), &cfg()).is_err());
    }

    #[test]
    fn pst_checks() {
        let cp4 = check_pst(&parse_target("CP:4").unwrap(), 0, 1, &cfg()).unwrap();
        assert_eq!(cp4.verdict, Verdict::Pst);
        assert!((cp4.tau0.unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let c4 = parse_target("corona(C:4,K:1)").unwrap();
        let r = check_pst(&c4, parse_vertex("base:0", &c4).unwrap(), parse_vertex("base:2", &c4).unwrap(), &cfg()).unwrap();
        assert_eq!((r.verdict, r.basis), (Verdict::NoPst, Basis::NecessaryBounds));
        let k2 = parse_target("corona(K:2,C:3)").unwrap();
        let r = check_pst(&k2, 0, 1, &cfg()).unwrap();
        assert_eq!((r.verdict, r.basis), (Verdict::NoPst, Basis::TwoVertexBasePrimeOrder));
    }

    #[test]
    fn copy_vertex_pairs() {
        let hq = parse_target("corona(HQ:3,K:1)").unwrap();
        let copy = parse_vertex("copy:0:0", &hq).unwrap();
        let r = check_pst(&hq, copy, parse_vertex("copy:7:0", &hq).unwrap(), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::NoPst);
        assert!(matches!(r.refutation_witness, Some(Witness::Inherited { base_vertex: 0, .. })));
        // K2 ∘̃ K1 is the path P4; its leaves are 2 and 3
        let p4 = parse_target("corona(K:2,K:1)").unwrap();
        let r = check_pst(&p4, 2, 3, &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::NoPst);
        assert!(r.support.iter().all(|e| e.exact().is_some()));
        assert!(check_pst(&p4, 1, 1, &cfg()).is_err());
    }

    #[test]
    fn pgst_searches() {
        let r = search_pgst(&parse_target("corona(CP:4,empty:1)").unwrap(), 0, 1, &cfg()).unwrap();
        assert!(r.achieved && r.theorem_applicable);
        let k2 = RunConfig { epsilon: 1e-6, l_bound: 10, ..cfg() };
        let r = search_pgst(&parse_target("corona(K:2,K:2)").unwrap(), 0, 1, &k2).unwrap();
        assert!(!r.achieved && !r.theorem_applicable);
        assert!(!r.notes.is_empty());
        let small = RunConfig { l_bound: 10_000, ..cfg() };
        assert!(search_pgst(&parse_target("cocktail-corona:3").unwrap(), 0, 1, &small).unwrap().achieved);
        assert!(search_pgst(&parse_target("CP:4").unwrap(), 0, 1, &cfg()).is_err());
    }

    #[test]
    fn fidelity_requests() {
        let k2 = parse_target("K:2").unwrap();
        match fidelity(&k2, 0, 1, TimeRequest::At(1.5707963), &cfg()).unwrap() {
            FidelityOutput::Point { fidelity, .. } => assert!((fidelity - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        match fidelity(&k2, 1, 1, TimeRequest::At(0.0), &cfg()).unwrap() {
            FidelityOutput::Point { fidelity, .. } => assert!((fidelity - 1.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        let grid = parse_grid("0:20:2000").unwrap();
        let out = fidelity(&parse_target("corona(K:2,K:1)").unwrap(), 0, 1, grid, &cfg()).unwrap();
        match &out {
            FidelityOutput::Scan { scan, .. } => assert!(scan.best_fidelity < 1.0 && scan.samples.len() == 2000),
            other => panic!("{other:?}"),
        }
        assert_eq!(out.to_csv().lines().count(), 2001);
        assert!(parse_grid("0:20").is_err() && parse_grid("5:1:10").is_err());
    }

    #[test]
    fn json_rounding_is_stable() {
        let x = Eigenvalue::Exact(QuadExt::new(4, 2, 2).unwrap());
        let text = to_json(&(1.0f64 / 3.0, x, f64::NAN));
        assert!(text.contains("0.333333333333"));
        assert!(!text.contains("0.3333333333333"));
        assert!(text.contains("null"));
        let csv = to_field_csv(&RunConfig::default());
        assert!(csv.contains("l_bound,1000000"));
        assert!(RunConfig { steps: 1, ..cfg() }.validate().is_err());
        assert!("xml".parse::<OutputFormat>().is_err());
    }
}
