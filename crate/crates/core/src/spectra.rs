//! Numeric spectral machinery for arbitrary graphs: eigenprojectors of `Q`,
//! transition amplitudes `exp(-iτQ)`, eigenvalue supports and strong
//! cospectrality. This is the brute-force route against which the corona
//! closed forms are checked.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebraic::{recognize_quadext, Eigenvalue, QuadExt, RecognizeOptions};
use crate::graphs::{distance_k_adjacency, signless_laplacian, Graph, GraphError};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (entry ({0}, {1}))")]
    NotSymmetric(usize, usize),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid scan grid: t_max = {t_max}, steps = {steps}")]
    InvalidGrid { t_max: f64, steps: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Distinct eigenvalues of a symmetric matrix (strictly descending) with
/// their orthogonal eigenprojectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    exact: Vec<Option<QuadExt>>,
    projectors: Vec<DMatrix<f64>>,
    multiplicities: Vec<usize>,
    warnings: Vec<String>,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from already-computed parts, sorting by
    /// descending eigenvalue. No invariant checking is done here; see
    /// [`SpectralDecomposition::residuals`].
    pub fn from_parts(
        parts: Vec<(f64, Option<QuadExt>, DMatrix<f64>, usize)>,
    ) -> Result<Self, SpectraError> {
        let mut parts = parts;
        parts.sort_by(|x, y| y.0.total_cmp(&x.0));
        let n = parts.first().map_or(0, |p| p.2.nrows());
        for (_, _, f, _) in &parts {
            if f.nrows() != n || f.ncols() != n {
                return Err(SpectraError::NotSquare { rows: f.nrows(), cols: f.ncols() });
            }
        }
        let mut dec = Self {
            eigenvalues: Vec::with_capacity(parts.len()),
            exact: Vec::with_capacity(parts.len()),
            projectors: Vec::with_capacity(parts.len()),
            multiplicities: Vec::with_capacity(parts.len()),
            warnings: Vec::new(),
        };
        for (value, exact, projector, mult) in parts {
            dec.eigenvalues.push(value);
            dec.exact.push(exact);
            dec.projectors.push(projector);
            dec.multiplicities.push(mult);
        }
        Ok(dec)
    }

    pub fn order(&self) -> usize {
        self.projectors.first().map_or(0, |f| f.nrows())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[DMatrix<f64>] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Exact value of eigenvalue `r`, when known.
    pub fn exact(&self, r: usize) -> Option<QuadExt> {
        self.exact[r]
    }

    pub fn eigenvalue(&self, r: usize) -> Eigenvalue {
        match self.exact[r] {
            Some(q) => Eigenvalue::Exact(q),
            None => Eigenvalue::approx(self.eigenvalues[r]),
        }
    }

    /// Attempts exact recognition of every eigenvalue that is not already
    /// exact. Ambiguous or unmatched values stay numeric.
    pub fn recognized(mut self, opts: RecognizeOptions) -> Self {
        for (x, slot) in self.eigenvalues.iter().zip(self.exact.iter_mut()) {
            if slot.is_none() {
                *slot = recognize_quadext(*x, opts).ok().flatten();
            }
        }
        self
    }

    /// Index of the eigenvalue within `tol` of `value`.
    pub fn index_of(&self, value: f64, tol: f64) -> Option<usize> {
        self.eigenvalues.iter().position(|x| (x - value).abs() < tol)
    }

    /// `e_u^T F_r e_v` for every eigenvalue `r`.
    pub fn pair_weights(&self, u: usize, v: usize) -> Result<Vec<f64>, SpectraError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.projectors.iter().map(|f| f[(u, v)]).collect())
    }

    fn check_vertex(&self, vertex: usize) -> Result<(), SpectraError> {
        let n = self.order();
        if vertex >= n {
            return Err(SpectraError::VertexOutOfRange { vertex, n });
        }
        Ok(())
    }

    /// Largest violations of the projector algebra. Pass `q` to include the
    /// reconstruction error `‖Σ θ F − Q‖`.
    pub fn residuals(&self, q: Option<&DMatrix<f64>>) -> ProjectorResiduals {
        let n = self.order();
        let max_abs = |m: &DMatrix<f64>| m.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let mut sum = DMatrix::<f64>::zeros(n, n);
        let mut recon = DMatrix::<f64>::zeros(n, n);
        let (mut idempotence, mut symmetry, mut orthogonality) = (0.0f64, 0.0f64, 0.0f64);
        for (r, f) in self.projectors.iter().enumerate() {
            sum += f;
            recon += f * self.eigenvalues[r];
            idempotence = idempotence.max(max_abs(&(f * f - f)));
            symmetry = symmetry.max(max_abs(&(f - f.transpose())));
            for g in &self.projectors[r + 1..] {
                orthogonality = orthogonality.max(max_abs(&(f * g)));
            }
        }
        let trace_mismatch = self
            .projectors
            .iter()
            .zip(&self.multiplicities)
            .fold(0.0f64, |acc, (f, &m)| acc.max((f.trace() - m as f64).abs()));
        ProjectorResiduals {
            completeness: max_abs(&(sum - DMatrix::identity(n, n))),
            idempotence,
            symmetry,
            orthogonality,
            trace_mismatch,
            reconstruction: q.map(|q| max_abs(&(recon - q))),
            multiplicity_total: self.multiplicities.iter().sum::<usize>() == n,
        }
    }

    pub fn export(&self, include_projectors: bool) -> DecompositionExport {
        DecompositionExport {
            eigenvalues: (0..self.len()).map(|r| self.eigenvalue(r)).collect(),
            multiplicities: self.multiplicities.clone(),
            projectors: include_projectors.then(|| {
                self.projectors
                    .iter()
                    .map(|f| f.row_iter().map(|row| row.iter().copied().collect()).collect())
                    .collect()
            }),
            warnings: self.warnings.clone(),
        }
    }
}

/// Maximum entrywise deviations of the projector identities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectorResiduals {
    pub completeness: f64,
    pub idempotence: f64,
    pub symmetry: f64,
    pub orthogonality: f64,
    pub trace_mismatch: f64,
    pub reconstruction: Option<f64>,
    pub multiplicity_total: bool,
}

impl ProjectorResiduals {
    pub fn max(&self) -> f64 {
        [
            self.completeness,
            self.idempotence,
            self.symmetry,
            self.orthogonality,
            self.trace_mismatch,
            self.reconstruction.unwrap_or(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.multiplicity_total && self.max() < tol
    }
}

/// JSON export of a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionExport {
    pub eigenvalues: Vec<Eigenvalue>,
    pub multiplicities: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projectors: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

fn check_symmetric(q: &DMatrix<f64>) -> Result<(), SpectraError> {
    let (rows, cols) = q.shape();
    if rows != cols {
        return Err(SpectraError::NotSquare { rows, cols });
    }
    let scale = q.iter().fold(1.0f64, |acc, x| acc.max(x.abs()));
    for i in 0..rows {
        for j in (i + 1)..rows {
            if (q[(i, j)] - q[(j, i)]).abs() > 1e-12 * scale {
                return Err(SpectraError::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// Eigendecomposition of a symmetric matrix with eigenvalues grouped into
/// distinct values.
///
/// Sorted eigenvalues closer than `cluster_tol * max(1, ‖q‖∞)` are merged.
/// When two neighbouring clusters are separated by less than ten times that
/// threshold a warning is recorded.
pub fn decompose(q: &DMatrix<f64>, cluster_tol: f64) -> Result<SpectralDecomposition, SpectraError> {
    if !(cluster_tol > 0.0) {
        return Err(SpectraError::InvalidTolerance(cluster_tol));
    }
    check_symmetric(q)?;
    let n = q.nrows();
    let norm = q
        .row_iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<f64>())
        .fold(1.0f64, f64::max);
    let tol = cluster_tol * norm;

    let eig = SymmetricEigen::new(q.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match clusters.last_mut() {
            Some(cluster)
                if eig.eigenvalues[*cluster.last().unwrap()] - eig.eigenvalues[i] <= tol =>
            {
                cluster.push(i)
            }
            _ => clusters.push(vec![i]),
        }
    }

    let mut warnings = Vec::new();
    for pair in clusters.windows(2) {
        let gap = eig.eigenvalues[*pair[0].last().unwrap()] - eig.eigenvalues[pair[1][0]];
        if gap < 10.0 * tol {
            warnings.push(format!(
                "eigenvalue clusters near {:.12} are separated by only {gap:.3e}",
                eig.eigenvalues[pair[1][0]]
            ));
        }
    }

    let parts = clusters
        .into_iter()
        .map(|cluster| {
            let mean = cluster.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
            let mut f = DMatrix::<f64>::zeros(n, n);
            for &i in &cluster {
                let v = eig.eigenvectors.column(i);
                f += &v * v.transpose();
            }
            (mean, None, f, cluster.len())
        })
        .collect();
    let mut dec = SpectralDecomposition::from_parts(parts)?;
    dec.warnings = warnings;
    Ok(dec)
}

/// Decomposition of `Q(g)`.
pub fn decompose_graph(g: &Graph, cluster_tol: f64) -> Result<SpectralDecomposition, SpectraError> {
    decompose(&signless_laplacian(g), cluster_tol)
}

/// `U(τ) = Σ exp(-iτθ) F_θ`.
pub fn transition_matrix(dec: &SpectralDecomposition, tau: f64) -> DMatrix<Complex64> {
    let n = dec.order();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (theta, f) in dec.eigenvalues.iter().zip(&dec.projectors) {
        let phase = Complex64::from_polar(1.0, -tau * theta);
        u.zip_apply(f, |x, y| *x += phase * y);
    }
    u
}

/// One entry of the transition matrix.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Amplitude {
    pub value: Complex64,
    pub time: f64,
    pub source: usize,
    pub target: usize,
}

impl Amplitude {
    pub fn fidelity(&self) -> f64 {
        self.value.norm_sqr()
    }
}

/// The weights `e_u^T F_θ e_v` for one vertex pair, enough to evaluate
/// `U(τ)_{uv}` at any time in `O(#eigenvalues)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairKernel {
    source: usize,
    target: usize,
    terms: Vec<(f64, f64)>,
}

impl PairKernel {
    pub fn new(dec: &SpectralDecomposition, u: usize, v: usize) -> Result<Self, SpectraError> {
        let weights = dec.pair_weights(u, v)?;
        Ok(Self {
            source: u,
            target: v,
            terms: dec.eigenvalues.iter().copied().zip(weights).collect(),
        })
    }

    pub fn value(&self, tau: f64) -> Complex64 {
        self.terms.iter().map(|&(theta, w)| Complex64::from_polar(w, -tau * theta)).sum()
    }

    pub fn amplitude(&self, tau: f64) -> Amplitude {
        Amplitude { value: self.value(tau), time: tau, source: self.source, target: self.target }
    }

    pub fn fidelity(&self, tau: f64) -> f64 {
        self.value(tau).norm_sqr()
    }
}

pub fn transition_amplitude(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    tau: f64,
) -> Result<Amplitude, SpectraError> {
    Ok(PairKernel::new(dec, u, v)?.amplitude(tau))
}

/// Indices of the eigenvalues in the support of `u`: those whose projector
/// column `F_θ e_u` has max-norm above `support_tol`.
pub fn eigenvalue_support(
    dec: &SpectralDecomposition,
    u: usize,
    support_tol: f64,
) -> Result<Vec<usize>, SpectraError> {
    dec.check_vertex(u)?;
    Ok((0..dec.len())
        .filter(|&r| dec.projectors[r].column(u).amax() > support_tol)
        .collect())
}

/// Outcome of a strong-cospectrality test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cospectrality {
    pub strongly_cospectral: bool,
    /// Per eigenvalue: `+1` when `F e_u = F e_v`, `-1` when `F e_u = -F e_v`,
    /// `0` when both columns vanish or neither relation holds.
    pub signs: Vec<i8>,
}

pub fn strong_cospectrality(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    tol: f64,
) -> Result<Cospectrality, SpectraError> {
    dec.check_vertex(u)?;
    dec.check_vertex(v)?;
    let mut strongly_cospectral = true;
    let signs = dec
        .projectors
        .iter()
        .map(|f| {
            let (cu, cv) = (f.column(u), f.column(v));
            if cu.amax() <= tol && cv.amax() <= tol {
                0
            } else if (cu - cv).amax() <= tol {
                1
            } else if (cu + cv).amax() <= tol {
                -1
            } else {
                strongly_cospectral = false;
                0
            }
        })
        .collect();
    Ok(Cospectrality { strongly_cospectral, signs })
}

/// Tests `A_d F_{θ_i} = (-1)^i F_{θ_i}` for every eigenprojector of `Q(g)`,
/// where `A_d` joins vertices at distance equal to the diameter.
pub fn antipodal_identity_check(g: &Graph, cluster_tol: f64) -> Result<bool, SpectraError> {
    let diameter = g.diameter()?;
    let a_d = distance_k_adjacency(g, diameter)?;
    let dec = decompose_graph(g, cluster_tol)?;
    Ok(dec.projectors.iter().enumerate().all(|(i, f)| {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        (&a_d * f - f * sign).amax() < 1e-8
    }))
}

/// Fidelity samples on a uniform grid plus a refined maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityScan {
    pub samples: Vec<(f64, f64)>,
    pub best_tau: f64,
    pub best_fidelity: f64,
}

impl FidelityScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,fidelity\n");
        for (tau, fid) in &self.samples {
            out.push_str(&format!("{},{}\n", fmt_sig(*tau), fmt_sig(*fid)));
        }
        out
    }
}

/// Formats with twelve significant digits.
pub fn fmt_sig(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

/// Samples `|U(τ)_{uv}|²` at `steps` evenly spaced times in `[0, t_max]`,
/// then refines the best grid point by golden-section search on its bracket.
pub fn fidelity_scan(
    dec: &SpectralDecomposition,
    u: usize,
    v: usize,
    t_max: f64,
    steps: usize,
) -> Result<FidelityScan, SpectraError> {
    let kernel = PairKernel::new(dec, u, v)?;
    scan_with(|tau| kernel.fidelity(tau), 0.0, t_max, steps)
}

/// Grid scan of an arbitrary fidelity function on `[t_min, t_max]`.
pub fn scan_with(
    fidelity: impl Fn(f64) -> f64,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<FidelityScan, SpectraError> {
    if !(t_max > t_min) || steps < 2 {
        return Err(SpectraError::InvalidGrid { t_max, steps });
    }
    let h = (t_max - t_min) / (steps - 1) as f64;
    let samples: Vec<(f64, f64)> = (0..steps)
        .map(|k| {
            let tau = t_min + h * k as f64;
            (tau, fidelity(tau))
        })
        .collect();
    let mut best = 0;
    for (k, s) in samples.iter().enumerate() {
        if s.1 > samples[best].1 {
            best = k;
        }
    }
    let lo = samples[best.saturating_sub(1)].0;
    let hi = samples[(best + 1).min(steps - 1)].0;
    let (tau_r, fid_r) = golden_section_max(&fidelity, lo, hi, 80);
    let (best_tau, best_fidelity) =
        if fid_r > samples[best].1 { (tau_r, fid_r) } else { samples[best] };
    Ok(FidelityScan { samples, best_tau, best_fidelity })
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 { (x1, f1) } else { (x2, f2) }
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant (Higham 2005). Independent of any eigendecomposition.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > THETA_13 { (norm1 / THETA_13).log2().ceil() as u32 } else { 0 };
    let a = a / Complex64::from(2f64.powi(squarings as i32));

    let id = DMatrix::<Complex64>::identity(n, n);
    let c = |k: usize| Complex64::from(B[k]);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);
    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Padé denominator is nonsingular for scaled input");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// `exp(-iτQ)` through [`expm`], bypassing the eigendecomposition.
pub fn transition_matrix_expm(q: &DMatrix<f64>, tau: f64) -> DMatrix<Complex64> {
    let m = q.map(|x| Complex64::new(0.0, -tau * x));
    expm(&m)
}

/// Smallest positive time of the standard `π/(g√Δ)` form.
pub fn pst_time(g: u64, delta: u64) -> f64 {
    PI / (g as f64 * (delta as f64).sqrt())
}
