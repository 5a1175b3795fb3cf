//! Closed-form signless Laplacian eigensystem of the vertex complemented
//! corona `G ∘̃ H` for regular `G` and `H`, together with the closed-form
//! transition element between base vertices.
//!
//! Vertex order follows [`crate::graphs::vertex_complemented_corona`]: the
//! `n1` base vertices first, then copy `i` of `H` at `n1 + i*n2 ..`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebraic::{AlgebraError, Eigenvalue, QuadExt};
use crate::graphs::{signless_laplacian, Graph, GraphError};
use crate::spectra::{Amplitude, SpectraError, SpectralDecomposition};

/// Relative tolerance used to snap numeric eigenvalues to integers and to
/// locate the regular eigenvalues `2r1`, `2r2`.
const SNAP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoronaError {
    #[error("the closed form needs at least two base vertices, got {0}")]
    BaseTooSmall(usize),
    #[error("{which} graph is not regular: vertex {vertex} has degree {degree}, vertex 0 has {expected}")]
    NotRegular { which: &'static str, vertex: usize, degree: usize, expected: usize },
    #[error("base graph is disconnected")]
    Disconnected,
    #[error("invalid corona parameters: {0}")]
    InvalidParams(String),
    #[error("{which} decomposition has order {got}, expected {expected}")]
    OrderMismatch { which: &'static str, got: usize, expected: usize },
    #[error("{which} decomposition lacks the regular eigenvalue {value} with an all-ones eigenvector")]
    MissingRegularEigenvalue { which: &'static str, value: usize },
    #[error("vertex {vertex} out of range for {n} base vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The constants `(n1, n2, r1, r2)` of a regular corona together with
/// `s = n1 + 2r2 - 1` and `t = n2(n1 - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoronaParams {
    n1: usize,
    n2: usize,
    r1: usize,
    r2: usize,
    s: i64,
    t: i64,
}

impl CoronaParams {
    pub fn new(n1: usize, n2: usize, r1: usize, r2: usize) -> Result<Self, CoronaError> {
        if n1 < 2 {
            return Err(CoronaError::BaseTooSmall(n1));
        }
        if n2 == 0 {
            return Err(CoronaError::InvalidParams("n2 must be positive".into()));
        }
        if r1 > n1 - 1 || r2 > n2 - 1 {
            return Err(CoronaError::InvalidParams(format!(
                "degrees ({r1}, {r2}) exceed orders ({n1}, {n2}) minus one"
            )));
        }
        // keeps every radicand below 2^63
        if (n1 as u128) * (n2 as u128) > 1_000_000_000 {
            return Err(CoronaError::InvalidParams(format!("n1*n2 = {} is too large", n1 * n2)));
        }
        let s = (n1 + 2 * r2) as i64 - 1;
        let t = (n2 * (n1 - 1)) as i64;
        Ok(Self { n1, n2, r1, r2, s, t })
    }

    /// Reads the parameters off the graphs, checking that `g` is connected
    /// and both graphs are regular.
    pub fn from_graphs(g: &Graph, h: &Graph) -> Result<Self, CoronaError> {
        let r1 = regular_degree("base", g)?;
        let r2 = regular_degree("inner", h)?;
        if g.order() >= 2 && !g.is_connected() {
            return Err(CoronaError::Disconnected);
        }
        Self::new(g.order(), h.order(), r1, r2)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn r1(&self) -> usize {
        self.r1
    }

    pub fn r2(&self) -> usize {
        self.r2
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn order(&self) -> usize {
        self.n1 * (1 + self.n2)
    }

    pub fn top_eigenvalue(&self) -> i64 {
        2 * self.r1 as i64
    }

    /// `θ - s + t`.
    pub fn shift(&self, theta: i64) -> i64 {
        theta - self.s + self.t
    }

    /// `Λ_θ² = (θ - s + t)² + 4n2`.
    pub fn theta_radicand(&self, theta: i64) -> u64 {
        let e = self.shift(theta) as i128;
        (e * e + 4 * self.n2 as i128) as u64
    }

    /// `Λ_r² = (2r1 - s + t)² + 4n2(n1 - 1)²`.
    pub fn r_radicand(&self) -> u64 {
        let e = self.shift(self.top_eigenvalue()) as i128;
        let k = (self.n1 - 1) as i128;
        (e * e + 4 * self.n2 as i128 * k * k) as u64
    }

    /// Weight of the copy block in the lifted eigenvector: `1` for `θ±`,
    /// `1 - n1` for `r±`.
    fn tail(&self, top: bool) -> f64 {
        if top {
            1.0 - self.n1 as f64
        } else {
            1.0
        }
    }

    /// `(s - θ+)(s - θ-)`: `-n2`, or `-n2(n1-1)²` for the `r` pair.
    fn head_product(&self, top: bool) -> f64 {
        let k = self.n1 as f64 - 1.0;
        if top {
            -(self.n2 as f64) * k * k
        } else {
            -(self.n2 as f64)
        }
    }
}

fn regular_degree(which: &'static str, g: &Graph) -> Result<usize, CoronaError> {
    match g.irregular_vertex() {
        None => Ok(g.degree(0)),
        Some(vertex) => Err(CoronaError::NotRegular {
            which,
            vertex,
            degree: g.degree(vertex),
            expected: g.degree(0),
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchKind {
    HShift,
    ThetaPlus,
    ThetaMinus,
    RPlus,
    RMinus,
}

impl BranchKind {
    pub fn is_base_branch(&self) -> bool {
        !matches!(self, BranchKind::HShift)
    }
}

/// One closed-form eigenvalue of the corona.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoronaEigenvalue {
    pub kind: BranchKind,
    pub value: Eigenvalue,
    /// The eigenvalue `μ` of `H` or `θ` of `G` this one comes from.
    pub origin: Eigenvalue,
    pub multiplicity: usize,
    /// `Λ²` when it is an integer; absent for the `H`-shift branch.
    pub radicand: Option<u64>,
    /// Index of the origin in the `G` or `H` decomposition.
    #[serde(skip)]
    pub origin_index: usize,
    #[serde(skip)]
    pub lambda: Option<f64>,
}

impl CoronaEigenvalue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum ProjectorBlock {
    /// `I ⊗ P` on the copies, zero on the base.
    Copies(DMatrix<f64>),
    /// `F ⊗ K` where `K = [[h², h·w·jᵀ], [h·w·j, w²J]] / (h² + n2 w²)`.
    Lifted { base: DMatrix<f64>, head: f64, tail: f64 },
}

/// Materializes corona eigenprojectors on demand from blocks of `F_μ(H)` or
/// `F_θ(G)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoronaProjectorFactory {
    n1: usize,
    n2: usize,
    blocks: Vec<ProjectorBlock>,
}

impl CoronaProjectorFactory {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn order(&self) -> usize {
        self.n1 * (1 + self.n2)
    }

    /// Entry `(i, j)` of projector `k` without materializing it.
    pub fn entry(&self, k: usize, i: usize, j: usize) -> f64 {
        let (n1, n2) = (self.n1, self.n2);
        let split = |x: usize| if x < n1 { (x, None) } else { ((x - n1) / n2, Some((x - n1) % n2)) };
        let ((bi, wi), (bj, wj)) = (split(i), split(j));
        match &self.blocks[k] {
            ProjectorBlock::Copies(p) => match (wi, wj) {
                (Some(x), Some(y)) if bi == bj => p[(x, y)],
                _ => 0.0,
            },
            ProjectorBlock::Lifted { base, head, tail } => {
                let norm = head * head + n2 as f64 * tail * tail;
                let factor = |w: Option<usize>| if w.is_none() { *head } else { *tail };
                base[(bi, bj)] * factor(wi) * factor(wj) / norm
            }
        }
    }

    pub fn materialize(&self, k: usize) -> DMatrix<f64> {
        let (n1, n2) = (self.n1, self.n2);
        let n = self.order();
        let mut f = DMatrix::<f64>::zeros(n, n);
        match &self.blocks[k] {
            ProjectorBlock::Copies(p) => {
                for copy in 0..n1 {
                    let at = n1 + copy * n2;
                    f.view_mut((at, at), (n2, n2)).copy_from(p);
                }
            }
            ProjectorBlock::Lifted { base, head, tail } => {
                let norm = head * head + n2 as f64 * tail * tail;
                let mut profile = vec![*tail; 1 + n2];
                profile[0] = *head;
                for i in 0..n1 {
                    for j in 0..n1 {
                        let b = base[(i, j)] / norm;
                        if b == 0.0 {
                            continue;
                        }
                        for (x, px) in profile.iter().enumerate() {
                            let row = if x == 0 { i } else { n1 + i * n2 + x - 1 };
                            for (y, py) in profile.iter().enumerate() {
                                let col = if y == 0 { j } else { n1 + j * n2 + y - 1 };
                                f[(row, col)] = b * px * py;
                            }
                        }
                    }
                }
            }
        }
        f
    }
}

/// Closed-form eigenvalues and projector factory of a regular corona.
#[derive(Clone, Debug, PartialEq)]
pub struct CoronaSpectrum {
    params: CoronaParams,
    eigenvalues: Vec<CoronaEigenvalue>,
    factory: CoronaProjectorFactory,
}

/// JSON form of a [`CoronaSpectrum`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoronaSpectrumExport {
    pub params: CoronaParams,
    pub eigenvalues: Vec<CoronaEigenvalue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<Vec<Vec<f64>>>>,
}

impl CoronaSpectrum {
    pub fn params(&self) -> &CoronaParams {
        &self.params
    }

    pub fn eigenvalues(&self) -> &[CoronaEigenvalue] {
        &self.eigenvalues
    }

    pub fn factory(&self) -> &CoronaProjectorFactory {
        &self.factory
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Distinct eigenvalues, descending, with the indices of the closed-form
    /// entries that share each value.
    fn groups(&self) -> Vec<Vec<usize>> {
        let mut order: Vec<usize> = (0..self.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| self.eigenvalues[j].to_f64().total_cmp(&self.eigenvalues[i].to_f64()));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for i in order {
            match groups.last_mut() {
                Some(group) if same_value(&self.eigenvalues[group[0]].value, &self.eigenvalues[i].value) => {
                    group.push(i)
                }
                _ => groups.push(vec![i]),
            }
        }
        groups
    }

    /// Distinct eigenvalues (descending) with total multiplicities.
    pub fn distinct(&self) -> Vec<(Eigenvalue, usize)> {
        self.groups()
            .into_iter()
            .map(|group| {
                let mult = group.iter().map(|&i| self.eigenvalues[i].multiplicity).sum();
                (self.eigenvalues[group[0]].value, mult)
            })
            .collect()
    }

    /// The corona decomposition, with coinciding closed-form values merged
    /// and every projector materialized.
    pub fn decomposition(&self) -> Result<SpectralDecomposition, SpectraError> {
        let parts = self
            .groups()
            .into_iter()
            .map(|group| {
                let first = &self.eigenvalues[group[0]];
                let mut f = self.factory.materialize(group[0]);
                for &k in &group[1..] {
                    f += self.factory.materialize(k);
                }
                let mult = group.iter().map(|&i| self.eigenvalues[i].multiplicity).sum();
                (first.to_f64(), first.value.exact(), f, mult)
            })
            .collect();
        SpectralDecomposition::from_parts(parts)
    }

    pub fn export(&self, materialize: bool) -> CoronaSpectrumExport {
        let projectors = materialize.then(|| {
            (0..self.factory.len())
                .map(|k| {
                    let f = self.factory.materialize(k);
                    f.row_iter().map(|row| row.iter().copied().collect()).collect()
                })
                .collect()
        });
        CoronaSpectrumExport { params: self.params, eigenvalues: self.eigenvalues.clone(), projectors }
    }
}

fn same_value(x: &Eigenvalue, y: &Eigenvalue) -> bool {
    match (x.exact(), y.exact()) {
        (Some(a), Some(b)) => a == b,
        _ => {
            let (a, b) = (x.to_f64(), y.to_f64());
            (a - b).abs() <= 1e-9 * a.abs().max(1.0)
        }
    }
}

/// Exact value of eigenvalue `r` of `dec` when it is known or numerically
/// an integer.
pub fn exact_eigenvalue(dec: &SpectralDecomposition, r: usize) -> Option<QuadExt> {
    dec.exact(r).or_else(|| {
        let x = dec.eigenvalues()[r];
        let k = x.round();
        ((x - k).abs() <= SNAP_TOL * x.abs().max(1.0)).then(|| QuadExt::integer(k as i64))
    })
}

/// Index of the eigenvalue `2r` whose projector fixes the all-ones vector.
fn regular_index(
    which: &'static str,
    dec: &SpectralDecomposition,
    degree: usize,
) -> Result<usize, CoronaError> {
    let value = 2 * degree;
    let missing = CoronaError::MissingRegularEigenvalue { which, value };
    let r = dec
        .index_of(value as f64, SNAP_TOL * (value as f64).max(1.0))
        .ok_or(missing.clone())?;
    let f = &dec.projectors()[r];
    let n = f.nrows();
    let deficit = f.row_iter().map(|row| (row.sum() - 1.0).abs()).fold(0.0, f64::max);
    if deficit > 1e-6 * n as f64 {
        return Err(missing);
    }
    Ok(r)
}

/// `(θ+, θ-)` or `(r+, r-)` as exact values when `θ` is an integer.
fn exact_pair(trace: i64, radicand: u64) -> Result<(QuadExt, QuadExt), AlgebraError> {
    Ok((
        QuadExt::half_sum_with_root(trace, radicand, 1)?,
        QuadExt::half_sum_with_root(trace, radicand, -1)?,
    ))
}

/// `(s - θ+, s - θ-)` computed without cancellation, using the known product.
fn heads(shift: f64, lambda: f64, product: f64) -> (f64, f64) {
    if shift >= 0.0 {
        let plus = (-shift - lambda) / 2.0;
        (plus, product / plus)
    } else {
        let minus = (-shift + lambda) / 2.0;
        (product / minus, minus)
    }
}

/// The closed-form corona eigensystem from decompositions of `Q(G)` and
/// `Q(H)`.
///
/// Exact values are produced for every origin that is an integer (or an
/// exact quadratic for the `H`-shift branch); the rest are numeric.
pub fn corona_spectrum(
    gdec: &SpectralDecomposition,
    hdec: &SpectralDecomposition,
    params: &CoronaParams,
) -> Result<CoronaSpectrum, CoronaError> {
    let (n1, n2) = (params.n1, params.n2);
    if gdec.order() != n1 {
        return Err(CoronaError::OrderMismatch { which: "base", got: gdec.order(), expected: n1 });
    }
    if hdec.order() != n2 {
        return Err(CoronaError::OrderMismatch { which: "inner", got: hdec.order(), expected: n2 });
    }
    let top = regular_index("base", gdec, params.r1)?;
    if gdec.multiplicities()[top] != 1 {
        return Err(CoronaError::Disconnected);
    }
    let h_top = regular_index("inner", hdec, params.r2)?;

    let mut eigenvalues = Vec::new();
    let mut blocks = Vec::new();

    for (k, mu_proj) in hdec.projectors().iter().enumerate() {
        let mut block = mu_proj.clone();
        let mut mult = hdec.multiplicities()[k];
        if k == h_top {
            block.add_scalar_mut(-1.0 / n2 as f64);
            mult -= 1;
        }
        if mult == 0 {
            continue;
        }
        let shift = (n1 - 1) as i64;
        let value = match exact_eigenvalue(hdec, k) {
            Some(mu) => Eigenvalue::Exact(mu.plus_integer(shift)),
            None => Eigenvalue::approx(hdec.eigenvalues()[k] + shift as f64),
        };
        let origin = exact_eigenvalue(hdec, k).map_or(Eigenvalue::approx(hdec.eigenvalues()[k]), Eigenvalue::Exact);
        eigenvalues.push(CoronaEigenvalue {
            kind: BranchKind::HShift,
            value,
            origin,
            multiplicity: n1 * mult,
            radicand: None,
            origin_index: k,
            lambda: None,
        });
        blocks.push(ProjectorBlock::Copies(block));
    }

    for (eig, block) in lifted_pairs(gdec, params, top)? {
        eigenvalues.push(eig);
        blocks.push(block);
    }

    Ok(CoronaSpectrum { params: *params, eigenvalues, factory: CoronaProjectorFactory { n1, n2, blocks } })
}

/// The `θ±` and `r±` entries (in `G` order, plus before minus) with their
/// projector blocks.
fn lifted_pairs(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    top: usize,
) -> Result<Vec<(CoronaEigenvalue, ProjectorBlock)>, CoronaError> {
    let n2 = params.n2;
    let mut out = Vec::with_capacity(2 * gdec.len());
    for (k, base) in gdec.projectors().iter().enumerate() {
        let is_top = k == top;
        let exact = if is_top { Some(QuadExt::integer(params.top_eigenvalue())) } else { exact_eigenvalue(gdec, k) };
        let theta = exact.map_or(gdec.eigenvalues()[k], |q| q.to_f64());
        let integral = exact.and_then(|q| q.as_integer());
        let (radicand, lambda_sq) = match integral {
            Some(th) => {
                let d = if is_top { params.r_radicand() } else { params.theta_radicand(th) };
                (Some(d), d as f64)
            }
            None => {
                let e = theta - (params.s - params.t) as f64;
                (None, e * e + 4.0 * n2 as f64)
            }
        };
        let lambda = lambda_sq.sqrt();
        let shift = theta - (params.s - params.t) as f64;
        let trace = theta + (params.s + params.t) as f64;
        let values = match (integral, radicand) {
            (Some(th), Some(d)) => {
                let (p, m) = exact_pair(th + params.s + params.t, d)?;
                (Eigenvalue::Exact(p), Eigenvalue::Exact(m))
            }
            _ => (Eigenvalue::approx((trace + lambda) / 2.0), Eigenvalue::approx((trace - lambda) / 2.0)),
        };
        let (head_plus, head_minus) = heads(shift, lambda, params.head_product(is_top));
        let tail = params.tail(is_top);
        let kinds = if is_top {
            (BranchKind::RPlus, BranchKind::RMinus)
        } else {
            (BranchKind::ThetaPlus, BranchKind::ThetaMinus)
        };
        let origin = exact.map_or(Eigenvalue::approx(theta), Eigenvalue::Exact);
        for (kind, value, head) in [(kinds.0, values.0, head_plus), (kinds.1, values.1, head_minus)] {
            out.push((CoronaEigenvalue {
                kind,
                value,
                origin,
                multiplicity: gdec.multiplicities()[k],
                radicand,
                origin_index: k,
                lambda: Some(lambda),
            }, ProjectorBlock::Lifted { base: base.clone(), head, tail }));
        }
    }
    Ok(out)
}

/// The eigenvalues of the corona coming from `G` (the `θ±` and `r±`
/// branches), which carry the whole support of every base vertex.
pub fn base_branch(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
) -> Result<Vec<CoronaEigenvalue>, CoronaError> {
    if gdec.order() != params.n1 {
        return Err(CoronaError::OrderMismatch { which: "base", got: gdec.order(), expected: params.n1 });
    }
    let top = regular_index("base", gdec, params.r1)?;
    if gdec.multiplicities()[top] != 1 {
        return Err(CoronaError::Disconnected);
    }
    Ok(lifted_pairs(gdec, params, top)?.into_iter().map(|(e, _)| e).collect())
}

/// One term of the closed-form transition element.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelTerm {
    pub theta: f64,
    /// `θ - s + t`.
    pub shift: f64,
    /// `Λ_θ`, or `Λ_r` for the top eigenvalue.
    pub lambda: f64,
    /// `e_u^T F_θ(G) e_v`.
    pub weight: f64,
}

/// The transition element from `(u,0)` to `(v,0)` as a function of time,
/// built from the decomposition of `G` only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoronaKernel {
    source: usize,
    target: usize,
    offset: f64,
    terms: Vec<KernelTerm>,
}

impl CoronaKernel {
    pub fn new(
        gdec: &SpectralDecomposition,
        params: &CoronaParams,
        u: usize,
        v: usize,
    ) -> Result<Self, CoronaError> {
        let n1 = params.n1;
        for vertex in [u, v] {
            if vertex >= n1 {
                return Err(CoronaError::VertexOutOfRange { vertex, n: n1 });
            }
        }
        if gdec.order() != n1 {
            return Err(CoronaError::OrderMismatch { which: "base", got: gdec.order(), expected: n1 });
        }
        let top = regular_index("base", gdec, params.r1)?;
        let weights = gdec.pair_weights(u, v)?;
        let offset = (params.s + params.t) as f64;
        let terms = weights
            .into_iter()
            .enumerate()
            .map(|(k, weight)| {
                let (theta, lambda) = if k == top {
                    (params.top_eigenvalue() as f64, (params.r_radicand() as f64).sqrt())
                } else {
                    let theta = exact_eigenvalue(gdec, k).map_or(gdec.eigenvalues()[k], |q| q.to_f64());
                    let e = theta - (params.s - params.t) as f64;
                    (theta, (e * e + 4.0 * params.n2 as f64).sqrt())
                };
                let shift = theta - (params.s - params.t) as f64;
                debug_assert!(lambda > 0.0);
                KernelTerm { theta, shift, lambda, weight }
            })
            .collect();
        Ok(Self { source: u, target: v, offset, terms })
    }

    pub fn terms(&self) -> &[KernelTerm] {
        &self.terms
    }

    pub fn value(&self, tau: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|term| {
                let (sin, cos) = (term.lambda * tau / 2.0).sin_cos();
                let phase = Complex64::from_polar(1.0, -tau * (term.theta + self.offset) / 2.0);
                phase * Complex64::new(cos, -term.shift / term.lambda * sin) * term.weight
            })
            .sum()
    }

    /// The value at `τ = kπ`, with every angle reduced modulo `2π` before
    /// multiplying by `π`, which keeps large times accurate.
    pub fn value_at_pi_multiple(&self, k: f64) -> Complex64 {
        let turn = |x: f64| PI * (x * k).rem_euclid(2.0);
        self.terms
            .iter()
            .map(|term| {
                let (sin, cos) = turn(term.lambda / 2.0).sin_cos();
                let phase = Complex64::from_polar(1.0, -turn((term.theta + self.offset) / 2.0));
                phase * Complex64::new(cos, -term.shift / term.lambda * sin) * term.weight
            })
            .sum()
    }

    pub fn amplitude(&self, tau: f64) -> Amplitude {
        Amplitude { value: self.value(tau), time: tau, source: self.source, target: self.target }
    }

    pub fn fidelity(&self, tau: f64) -> f64 {
        self.value(tau).norm_sqr()
    }
}

/// `e_(u,0)^T exp(-iτQ(G∘̃H)) e_(v,0)` from the decomposition of `G`.
pub fn corona_transition_element(
    gdec: &SpectralDecomposition,
    params: &CoronaParams,
    u: usize,
    v: usize,
    tau: f64,
) -> Result<Amplitude, CoronaError> {
    Ok(CoronaKernel::new(gdec, params, u, v)?.amplitude(tau))
}

/// `Q(G∘̃H)` assembled blockwise: `Q(G) + t·I` on the base,
/// `I ⊗ (Q(H) + (n1-1)I)` on the copies and `(J - I) ⊗ jᵀ` between them.
pub fn corona_full_q(g: &Graph, h: &Graph) -> DMatrix<f64> {
    let (n1, n2) = (g.order(), h.order());
    let n = n1 * (1 + n2);
    let mut q = DMatrix::<f64>::zeros(n, n);
    let qg = signless_laplacian(g);
    let qh = signless_laplacian(h);
    let mut base = q.view_mut((0, 0), (n1, n1));
    base.copy_from(&qg);
    for i in 0..n1 {
        base[(i, i)] += ((n1 - 1) * n2) as f64;
    }
    for copy in 0..n1 {
        let at = n1 + copy * n2;
        let mut block = q.view_mut((at, at), (n2, n2));
        block.copy_from(&qh);
        for w in 0..n2 {
            block[(w, w)] += (n1 - 1) as f64;
        }
    }
    for i in 0..n1 {
        for copy in (0..n1).filter(|&c| c != i) {
            for w in 0..n2 {
                q[(i, n1 + copy * n2 + w)] = 1.0;
                q[(n1 + copy * n2 + w, i)] = 1.0;
            }
        }
    }
    q
}

/// Outcome of the exact pair identities for one `θ` (or the `r` pair).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairIdentityCheck {
    pub origin: QuadExt,
    pub top: bool,
    /// `x+ + x- = origin + s + t`.
    pub sum: bool,
    /// `(s - x+)(s - x-) = -n2`, or `-n2(n1-1)²` for the `r` pair.
    pub product: bool,
    /// `((s-x+)² + c)((s-x-)² + c) = cΛ²` with `c = n2` or `n2(n1-1)²`.
    pub norm_product: bool,
}

impl PairIdentityCheck {
    pub fn holds(&self) -> bool {
        self.sum && self.product && self.norm_product
    }
}

/// Re-derives the sum and product identities of every exact `θ±`, `r±` pair
/// in `QuadExt` arithmetic.
pub fn verify_pair_identities(spectrum: &CoronaSpectrum) -> Vec<PairIdentityCheck> {
    let p = spectrum.params;
    let s = QuadExt::integer(p.s);
    let k = (p.n1 - 1) as i64;
    let eigs = &spectrum.eigenvalues;
    let mut checks = Vec::new();
    for pair in eigs.windows(2) {
        let (plus, minus) = (&pair[0], &pair[1]);
        let top = match (plus.kind, minus.kind) {
            (BranchKind::ThetaPlus, BranchKind::ThetaMinus) => false,
            (BranchKind::RPlus, BranchKind::RMinus) => true,
            _ => continue,
        };
        let (Some(xp), Some(xm), Some(origin), Some(d)) =
            (plus.value.exact(), minus.value.exact(), plus.origin.exact(), plus.radicand)
        else {
            continue;
        };
        let Some(theta) = origin.as_integer() else { continue };
        let c = if top { p.n2 as i64 * k * k } else { p.n2 as i64 };
        let sum = xp.checked_add(&xm) == Some(QuadExt::integer(theta + p.s + p.t));
        let hp = s.checked_sub(&xp);
        let hm = s.checked_sub(&xm);
        let product = hp.zip(hm).and_then(|(a, b)| a.checked_mul(&b)) == Some(QuadExt::integer(-c));
        let square_plus_c = |h: Option<QuadExt>| h.and_then(|h| h.checked_mul(&h)).map(|x| x.plus_integer(c));
        let norm_product = square_plus_c(hp)
            .zip(square_plus_c(hm))
            .and_then(|(a, b)| a.checked_mul(&b))
            .zip(i64::try_from(d).ok().and_then(|d| c.checked_mul(d)))
            .is_some_and(|(lhs, rhs)| lhs == QuadExt::integer(rhs));
        checks.push(PairIdentityCheck { origin, top, sum, product, norm_product });
    }
    checks
}
