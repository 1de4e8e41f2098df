//! Irreducible representations of the catalog groups and the spectral
//! computations built on them.
//!
//! On the isotypic component of `π`, the Laplacian of `g_A` acts through the
//! `d_π×d_π` hermitian matrix `π(−C_A) = −Σ_{ij} (AAᵀ)_{ij} π(X_i)π(X_j)`,
//! so `λ₁(G, g_A)` is the minimum over nontrivial `π` of its smallest
//! eigenvalue. Since `σ_m²·C_I ≤ C_A`, every irrep with `σ_m²·λ^π` above the
//! running minimum can be skipped, which makes the search finite and the
//! result certified.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{self, GroupKind, LieGroupCatalogEntry};
use crate::linalg::{self, CMatrix, Matrix};
use crate::metric::MetricSpec;

/// Default cap on the Casimir values examined by [`lambda1_certified`].
pub const DEFAULT_CASIMIR_CAP: f64 = 1e6;
/// Relative singular-value threshold for invariant-vector detection.
pub const NULLSPACE_REL_TOL: f64 = 1e-9;

const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Label of an irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IrrepLabel {
    /// Spin `j = twice_j / 2` of SU(2); SO(3) uses even `twice_j` only.
    Spin { twice_j: u32 },
    /// Character `x ↦ e^{2πi⟨n,x⟩}` of a torus.
    Character(Vec<i64>),
    /// Outer tensor product, one label per factor.
    Product(Vec<IrrepLabel>),
}

impl IrrepLabel {
    pub fn spin_half(twice_j: u32) -> Self {
        IrrepLabel::Spin { twice_j }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            IrrepLabel::Spin { twice_j } => *twice_j == 0,
            IrrepLabel::Character(n) => n.iter().all(|v| *v == 0),
            IrrepLabel::Product(ls) => ls.iter().all(IrrepLabel::is_trivial),
        }
    }

    /// `λ^π`, the scalar by which `−C_I` acts.
    pub fn casimir(&self) -> f64 {
        match self {
            IrrepLabel::Spin { twice_j } => {
                let t = f64::from(*twice_j);
                t * (t + 2.0)
            }
            IrrepLabel::Character(n) => FOUR_PI_SQ * n.iter().map(|v| (v * v) as f64).sum::<f64>(),
            IrrepLabel::Product(ls) => ls.iter().map(IrrepLabel::casimir).sum(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            IrrepLabel::Spin { twice_j } => *twice_j as usize + 1,
            IrrepLabel::Character(_) => 1,
            IrrepLabel::Product(ls) => ls.iter().map(IrrepLabel::dim).product(),
        }
    }

    fn algebra_dim(&self) -> usize {
        match self {
            IrrepLabel::Spin { .. } => 3,
            IrrepLabel::Character(n) => n.len(),
            IrrepLabel::Product(ls) => ls.iter().map(IrrepLabel::algebra_dim).sum(),
        }
    }
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Spin { twice_j } => {
                if twice_j % 2 == 0 {
                    write!(f, "spin({})", twice_j / 2)
                } else {
                    write!(f, "spin({twice_j}/2)")
                }
            }
            IrrepLabel::Character(n) => {
                let parts: Vec<String> = n.iter().map(i64::to_string).collect();
                write!(f, "char({})", parts.join(","))
            }
            IrrepLabel::Product(ls) => {
                let parts: Vec<String> = ls.iter().map(IrrepLabel::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Irreducible unitary representation with its anti-hermitian generators.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub label: IrrepLabel,
    pub dim: usize,
    /// `π(X_j)` for the reference basis.
    pub generators: Vec<CMatrix>,
    pub casimir: f64,
}

impl Irrep {
    /// The trivial representation of `entry`.
    pub fn trivial(entry: &LieGroupCatalogEntry) -> Self {
        Self::build(&trivial_label(entry))
    }

    fn build(label: &IrrepLabel) -> Self {
        let generators = match label {
            IrrepLabel::Spin { twice_j } => spin_generators(*twice_j),
            IrrepLabel::Character(n) => n
                .iter()
                .map(|v| {
                    let mut g = CMatrix::zeros(1);
                    g[(0, 0)] = Complex64::new(0.0, 2.0 * PI * (*v as f64));
                    g
                })
                .collect(),
            IrrepLabel::Product(ls) => {
                let parts: Vec<Arc<Irrep>> = ls.iter().map(irrep).collect();
                let dims: Vec<usize> = parts.iter().map(|p| p.dim).collect();
                let mut gens = Vec::new();
                for (s, part) in parts.iter().enumerate() {
                    let left: usize = dims[..s].iter().product();
                    let right: usize = dims[s + 1..].iter().product();
                    let il = CMatrix::identity(left);
                    let ir = CMatrix::identity(right);
                    for g in &part.generators {
                        gens.push(il.kron(g).kron(&ir));
                    }
                }
                gens
            }
        };
        Self {
            dim: label.dim(),
            casimir: label.casimir(),
            label: label.clone(),
            generators,
        }
    }

    /// `π(X)` for an algebra vector `X`.
    pub fn represent(&self, x: &[f64]) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim);
        for (g, c) in self.generators.iter().zip(x) {
            if *c != 0.0 {
                out.add_scaled(g, *c);
            }
        }
        out
    }

    /// Largest defect of `[π(X_i), π(X_j)] = Σ_k c_{ij}^k π(X_k)`.
    pub fn commutator_defect(&self, entry: &LieGroupCatalogEntry) -> f64 {
        let m = entry.dim();
        let c = entry.structure_constants();
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                let gi = &self.generators[i];
                let gj = &self.generators[j];
                let comm = &(gi * gj) - &(gj * gi);
                let coeffs: Vec<f64> = (0..m).map(|k| c.get(i, j, k)).collect();
                worst = worst.max(comm.max_abs_diff(&self.represent(&coeffs)));
            }
        }
        worst
    }

    pub fn anti_hermitian_defect(&self) -> f64 {
        self.generators
            .iter()
            .map(|g| (g + &g.adjoint()).norm())
            .fold(0.0, f64::max)
    }

    /// Defect of `−Σ_j π(X_j)² = λ^π·I`.
    pub fn casimir_defect(&self) -> f64 {
        let mut cas = CMatrix::zeros(self.dim);
        for g in &self.generators {
            cas.add_scaled(&(g * g), -1.0);
        }
        cas.max_abs_diff(&CMatrix::identity(self.dim).scale_real(self.casimir))
    }
}

/// Spin-`j` generators `π(X_a) = −2i·J_a` from the ladder operators, basis
/// ordered `m = j, j−1, …, −j`.
fn spin_generators(twice_j: u32) -> Vec<CMatrix> {
    let d = twice_j as usize + 1;
    let j = f64::from(twice_j) / 2.0;
    let mut jp = CMatrix::zeros(d);
    let mut j3 = CMatrix::zeros(d);
    for a in 0..d {
        let m = j - a as f64;
        j3[(a, a)] = Complex64::new(m, 0.0);
        if a > 0 {
            // J₊|m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, and |m+1⟩ sits at index a−1.
            let c = (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt();
            jp[(a - 1, a)] = Complex64::new(c, 0.0);
        }
    }
    let jm = jp.adjoint();
    let i = Complex64::new(0.0, 1.0);
    // π(X₁) = −i(J₊ + J₋), π(X₂) = −(J₊ − J₋), π(X₃) = −2iJ₃.
    let x1 = (&jp + &jm).scale(-i);
    let x2 = (&jp - &jm).scale_real(-1.0);
    let x3 = j3.scale(Complex64::new(0.0, -2.0));
    vec![x1, x2, x3]
}

static IRREP_CACHE: OnceLock<Mutex<HashMap<IrrepLabel, Arc<Irrep>>>> = OnceLock::new();

/// Memoized irrep construction. Characters are cheap and are not cached.
pub fn irrep(label: &IrrepLabel) -> Arc<Irrep> {
    if matches!(label, IrrepLabel::Character(_)) {
        return Arc::new(Irrep::build(label));
    }
    let cache = IRREP_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("irrep cache poisoned").get(label) {
        return Arc::clone(hit);
    }
    let built = Arc::new(Irrep::build(label));
    let mut guard = cache.lock().expect("irrep cache poisoned");
    Arc::clone(guard.entry(label.clone()).or_insert(built))
}

fn trivial_label(entry: &LieGroupCatalogEntry) -> IrrepLabel {
    match entry.kind() {
        GroupKind::Torus(m) => IrrepLabel::Character(vec![0; *m]),
        GroupKind::Su2 | GroupKind::So3 => IrrepLabel::Spin { twice_j: 0 },
        GroupKind::Product(fs) => IrrepLabel::Product(fs.iter().map(trivial_label).collect()),
    }
}

/// Unbounded stream of irrep labels in ascending Casimir order, starting with
/// the trivial representation. Ties are broken deterministically.
pub struct IrrepStream {
    inner: StreamKind,
}

enum StreamKind {
    Spin {
        next_twice_j: u32,
        step: u32,
    },
    Torus {
        m: usize,
        done_radius_sq: i64,
        buffer: std::collections::VecDeque<Vec<i64>>,
    },
    Product {
        factors: Vec<CachedStream>,
        heap: BinaryHeap<HeapItem>,
        seen: HashSet<Vec<usize>>,
    },
}

struct CachedStream {
    stream: IrrepStream,
    items: Vec<(f64, IrrepLabel)>,
}

impl CachedStream {
    fn get(&mut self, i: usize) -> (f64, IrrepLabel) {
        while self.items.len() <= i {
            let next = self.stream.next().expect("irrep streams are unbounded");
            self.items.push(next);
        }
        self.items[i].clone()
    }
}

#[derive(PartialEq)]
struct HeapItem {
    casimir: f64,
    idx: Vec<usize>,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Min-heap on (casimir, idx).
        other
            .casimir
            .total_cmp(&self.casimir)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl IrrepStream {
    pub fn new(entry: &LieGroupCatalogEntry) -> Self {
        let inner = match entry.kind() {
            GroupKind::Su2 => StreamKind::Spin {
                next_twice_j: 0,
                step: 1,
            },
            GroupKind::So3 => StreamKind::Spin {
                next_twice_j: 0,
                step: 2,
            },
            GroupKind::Torus(m) => StreamKind::Torus {
                m: *m,
                done_radius_sq: -1,
                buffer: Default::default(),
            },
            GroupKind::Product(fs) => {
                let factors: Vec<CachedStream> = fs
                    .iter()
                    .map(|f| CachedStream {
                        stream: IrrepStream::new(f),
                        items: Vec::new(),
                    })
                    .collect();
                let start = vec![0; factors.len()];
                let mut heap = BinaryHeap::new();
                let mut seen = HashSet::new();
                seen.insert(start.clone());
                heap.push(HeapItem {
                    casimir: 0.0,
                    idx: start,
                });
                StreamKind::Product {
                    factors,
                    heap,
                    seen,
                }
            }
        };
        Self { inner }
    }
}

impl Iterator for IrrepStream {
    type Item = (f64, IrrepLabel);

    fn next(&mut self) -> Option<Self::Item> {
        match &mut self.inner {
            StreamKind::Spin { next_twice_j, step } => {
                let label = IrrepLabel::Spin {
                    twice_j: *next_twice_j,
                };
                *next_twice_j += *step;
                Some((label.casimir(), label))
            }
            StreamKind::Torus {
                m,
                done_radius_sq,
                buffer,
            } => {
                while buffer.is_empty() {
                    let lo = *done_radius_sq;
                    let hi = (2 * lo + 4).max(lo + 1);
                    let bound = (hi as f64).sqrt().floor() as i64;
                    let mut shell: Vec<(i64, Vec<i64>)> = Vec::new();
                    let mut n = vec![-bound; *m];
                    loop {
                        let r: i64 = n.iter().map(|v| v * v).sum();
                        if r > lo && r <= hi {
                            shell.push((r, n.clone()));
                        }
                        if !advance(&mut n, bound) {
                            break;
                        }
                    }
                    shell.sort();
                    buffer.extend(shell.into_iter().map(|(_, n)| n));
                    *done_radius_sq = hi;
                }
                let n = buffer.pop_front().expect("nonempty");
                let label = IrrepLabel::Character(n);
                Some((label.casimir(), label))
            }
            StreamKind::Product {
                factors,
                heap,
                seen,
            } => {
                let item = heap.pop()?;
                for s in 0..item.idx.len() {
                    let mut next = item.idx.clone();
                    next[s] += 1;
                    if seen.insert(next.clone()) {
                        let casimir: f64 = next
                            .iter()
                            .zip(factors.iter_mut())
                            .map(|(&i, f)| f.get(i).0)
                            .sum();
                        heap.push(HeapItem { casimir, idx: next });
                    }
                }
                let labels: Vec<IrrepLabel> = item
                    .idx
                    .iter()
                    .zip(factors.iter_mut())
                    .map(|(&i, f)| f.get(i).1)
                    .collect();
                let label = IrrepLabel::Product(labels);
                Some((label.casimir(), label))
            }
        }
    }
}

/// Odometer over `[−bound, bound]^m`; returns false after the last vector.
fn advance(n: &mut [i64], bound: i64) -> bool {
    for v in n.iter_mut().rev() {
        if *v < bound {
            *v += 1;
            return true;
        }
        *v = -bound;
    }
    false
}

/// All nontrivial irreps with `λ^π ≤ cutoff`, ascending in `λ^π`.
pub fn enumerate_irreps(entry: &LieGroupCatalogEntry, casimir_cutoff: f64) -> Vec<Arc<Irrep>> {
    IrrepStream::new(entry)
        .take_while(|(c, _)| *c <= casimir_cutoff)
        .filter(|(_, l)| !l.is_trivial())
        .map(|(_, l)| irrep(&l))
        .collect()
}

fn check_dims(label: &IrrepLabel, spec: &MetricSpec) -> Result<()> {
    if label.algebra_dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: label.algebra_dim(),
            found: spec.dim(),
        });
    }
    Ok(())
}

/// `π(−C_A) = −Σ_{ij} (AAᵀ)_{ij} π(X_i)π(X_j)`.
pub fn assemble_minus_ca(irrep: &Irrep, spec: &MetricSpec) -> Result<CMatrix> {
    check_dims(&irrep.label, spec)?;
    assemble_weighted(irrep, spec.aat())
}

/// `−Σ_{ij} w_{ij} π(X_i)π(X_j)` for a symmetric weight matrix `w`.
pub fn assemble_weighted(irrep: &Irrep, w: &Matrix) -> Result<CMatrix> {
    let m = irrep.generators.len();
    if w.rows() != m || w.cols() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: w.rows(),
        });
    }
    let mut out = CMatrix::zeros(irrep.dim);
    for i in 0..m {
        let row: Vec<f64> = (0..m).map(|j| w[(i, j)]).collect();
        if row.iter().all(|v| *v == 0.0) {
            continue;
        }
        let inner = irrep.represent(&row);
        out.add_scaled(&(&irrep.generators[i] * &inner), -1.0);
    }
    Ok(out)
}

/// Smallest eigenvalue of a hermitian matrix.
pub fn lambda_min_hermitian(m: &CMatrix) -> Result<f64> {
    linalg::lambda_min_hermitian(m)
}

/// `λ_min(π(−C_A))` for one irrep.
pub fn irrep_lambda_min(label: &IrrepLabel, spec: &MetricSpec) -> Result<f64> {
    check_dims(label, spec)?;
    if let IrrepLabel::Character(n) = label {
        let v: Vec<f64> = n.iter().map(|x| *x as f64).collect();
        return Ok(FOUR_PI_SQ * spec.aat().quadratic_form(&v));
    }
    let ir = irrep(label);
    lambda_min_hermitian(&assemble_minus_ca(&ir, spec)?)
}

/// Outcome of a `λ₁` computation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda1: f64,
    pub witness: IrrepLabel,
    pub certified: bool,
    /// Casimir level that closed the search: the first unexamined `λ^π`
    /// (every irrep from there on has [`irrep_lower_bound`] `> λ₁` when
    /// certified), or the cap when not certified.
    pub window: f64,
    pub evaluations: usize,
    pub diagnostics: Option<String>,
}

/// Certified `λ₁(G, g_A)` with the default Casimir cap.
pub fn lambda1_certified(entry: &LieGroupCatalogEntry, spec: &MetricSpec) -> Result<SpectralResult> {
    lambda1_certified_with_cap(entry, spec, DEFAULT_CASIMIR_CAP)
}

/// Lower bound on `λ_min(π(−C_A))`, nondecreasing along [`IrrepStream`].
///
/// For spins, in an eigenframe of `AAᵀ` with weights `w₁ ≥ w₂ ≥ w₃`,
/// `π(−C_A) = 4Σ w_a J_a² ≥ 4(w₃·J² + (w₂ − w₃)(J₁² + J₂²)) ≥ 4j(w₃ j + w₂)`.
/// Otherwise `σ_m²·λ^π`.
pub fn irrep_lower_bound(label: &IrrepLabel, casimir: f64, spec: &MetricSpec) -> f64 {
    let sm2 = spec.sigma_min().powi(2);
    match label {
        IrrepLabel::Spin { twice_j } if spec.dim() == 3 => {
            let j = *twice_j as f64 / 2.0;
            let (w2, w3) = (spec.sigma_k(2).powi(2), spec.sigma_k(3).powi(2));
            (4.0 * j * (w3 * j + w2)).max(sm2 * casimir)
        }
        _ => sm2 * casimir,
    }
}

/// Certified `λ₁(G, g_A)`: scan irreps in ascending `λ^π`, tracking the
/// running minimum `λ̂` of `λ_min(π(−C_A))`, and stop once the next irrep's
/// [`irrep_lower_bound`] exceeds `λ̂` (at least `σ_m²·λ^π > λ̂`).
pub fn lambda1_certified_with_cap(
    entry: &LieGroupCatalogEntry,
    spec: &MetricSpec,
    cap: f64,
) -> Result<SpectralResult> {
    if spec.dim() != entry.dim() {
        return Err(Error::DimensionMismatch {
            expected: entry.dim(),
            found: spec.dim(),
        });
    }
    let sm2 = spec.sigma_min().powi(2);
    let mut best: Option<(f64, IrrepLabel)> = None;
    let mut evaluations = 0;
    for (casimir, label) in IrrepStream::new(entry) {
        if label.is_trivial() {
            continue;
        }
        if let Some((lam, _)) = &best {
            if irrep_lower_bound(&label, casimir, spec) > *lam {
                let (lambda1, witness) = best.expect("checked");
                return Ok(SpectralResult {
                    lambda1,
                    witness,
                    certified: true,
                    window: casimir,
                    evaluations,
                    diagnostics: None,
                });
            }
        }
        if casimir > cap {
            let (lambda1, witness) = best.ok_or_else(|| Error::CapExceeded {
                cap,
                detail: "no nontrivial irrep below the cap".into(),
            })?;
            return Ok(SpectralResult {
                diagnostics: Some(format!(
                    "Casimir cap {cap} reached before certification: need σ_m²·λ^π > {lambda1}, \
                     σ_m² = {sm2:e}, next λ^π = {casimir}"
                )),
                lambda1,
                witness,
                certified: false,
                window: cap,
                evaluations,
            });
        }
        let lam = irrep_lambda_min(&label, spec)?;
        evaluations += 1;
        if best.as_ref().is_none_or(|(b, _)| lam < *b) {
            best = Some((lam, label));
        }
    }
    unreachable!("irrep streams are unbounded")
}

/// Largest torus dimension accepted by [`torus_lambda1`].
pub const TORUS_LAMBDA_MAX_DIM: usize = 4;

/// `λ₁` of a flat torus: `4π²·min_{n≠0} nᵀAAᵀn`, by exhaustive enumeration
/// of the box `|n_j| ≤ ⌈√(λ̂/(4π²σ_m²))⌉`.
pub fn torus_lambda1(spec: &MetricSpec) -> Result<SpectralResult> {
    let m = spec.dim();
    if m > TORUS_LAMBDA_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "torus enumeration supports m ≤ {TORUS_LAMBDA_MAX_DIM}, got {m}"
        )));
    }
    let aat = spec.aat();
    let (mut best_q, mut best_j) = (f64::INFINITY, 0);
    for j in 0..m {
        if aat[(j, j)] < best_q {
            best_q = aat[(j, j)];
            best_j = j;
        }
    }
    let mut best_n = vec![0i64; m];
    best_n[best_j] = 1;
    let sm2 = spec.sigma_min().powi(2);
    let bound = (best_q / sm2).sqrt().ceil() as i64;
    let mut n = vec![-bound; m];
    let mut evaluations = 0;
    loop {
        // Half-space representatives: first nonzero coordinate positive.
        if n.iter().find(|v| **v != 0).is_some_and(|v| *v > 0) {
            let v: Vec<f64> = n.iter().map(|x| *x as f64).collect();
            let q = aat.quadratic_form(&v);
            evaluations += 1;
            if q < best_q {
                best_q = q;
                best_n = n.clone();
            }
        }
        if !advance(&mut n, bound) {
            break;
        }
    }
    Ok(SpectralResult {
        lambda1: FOUR_PI_SQ * best_q,
        witness: IrrepLabel::Character(best_n),
        certified: true,
        window: FOUR_PI_SQ * (bound as f64 + 1.0).powi(2),
        evaluations,
        diagnostics: None,
    })
}

/// Dimension of the subspace of `V_π` annihilated by every `π(X)`, `X ∈ H`.
pub fn invariant_dim(irrep: &Irrep, h_basis: &[Vec<f64>]) -> usize {
    if h_basis.is_empty() {
        return irrep.dim;
    }
    let d = irrep.dim;
    let reps: Vec<Matrix> = h_basis.iter().map(|x| irrep.represent(x).realify()).collect();
    let rows = 2 * d * reps.len();
    let columns: Vec<Vec<f64>> = (0..2 * d)
        .map(|c| {
            let mut col = Vec::with_capacity(rows);
            for r in &reps {
                col.extend(r.column(c));
            }
            col
        })
        .collect();
    let real_rank = linalg::rank(&columns, NULLSPACE_REL_TOL);
    d - real_rank / 2
}

/// Restricted first eigenvalue: finite value with its irrep, or infinity
/// when the prefix is already bracket generating.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RestrictedLambda {
    Finite { value: f64, witness: IrrepLabel },
    Infinite,
}

impl RestrictedLambda {
    pub fn value(&self) -> f64 {
        match self {
            RestrictedLambda::Finite { value, .. } => *value,
            RestrictedLambda::Infinite => f64::INFINITY,
        }
    }
}

/// First eigenvalue of the bi-invariant Laplacian on functions invariant
/// under `H_{P,k−1} = span{X_1(P), …, X_{k−1}(P)}`: the smallest `λ^π`
/// among nontrivial irreps with an `H`-fixed vector.
pub fn lambda1_restricted(
    entry: &LieGroupCatalogEntry,
    p: &Matrix,
    k: usize,
) -> Result<RestrictedLambda> {
    lambda1_restricted_with_cap(entry, p, k, DEFAULT_CASIMIR_CAP)
}

pub fn lambda1_restricted_with_cap(
    entry: &LieGroupCatalogEntry,
    p: &Matrix,
    k: usize,
    cap: f64,
) -> Result<RestrictedLambda> {
    lie::check_rotation(entry, p)?;
    let m = entry.dim();
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!("k must lie in 1..={m}")));
    }
    let prefix: Vec<Vec<f64>> = lie::rotated_basis(p).into_iter().take(k - 1).collect();
    if !prefix.is_empty() && lie::is_bracket_generating(entry, &prefix)? {
        return Ok(RestrictedLambda::Infinite);
    }
    let (h_basis, _) = linalg::span_basis(&prefix, lie::RANK_REL_TOL);
    for (casimir, label) in IrrepStream::new(entry) {
        if label.is_trivial() {
            continue;
        }
        if casimir > cap {
            return Err(Error::CapExceeded {
                cap,
                detail: format!("no irrep with an H-fixed vector for k = {k}"),
            });
        }
        if invariant_dim(&irrep(&label), &h_basis) > 0 {
            return Ok(RestrictedLambda::Finite {
                value: casimir,
                witness: label,
            });
        }
    }
    unreachable!("irrep streams are unbounded")
}

/// Window-limited sub-Laplacian estimate. Never certified.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubLaplacianResult {
    pub value: f64,
    pub witness: Option<IrrepLabel>,
    pub certified: bool,
    pub window: f64,
    pub reason: Option<String>,
}

/// Minimum over nontrivial irreps with `λ^π ≤ window` of
/// `λ_min(−Σ_{ij} (h⁻¹)_{ij} π(Y_i)π(Y_j))`, where `Y_i` spans `H` and `h` is
/// the Gram matrix of the inner product on `H` in that spanning set.
pub fn sublaplacian_lambda1(
    entry: &LieGroupCatalogEntry,
    h_basis: &[Vec<f64>],
    h: &Matrix,
    window: f64,
) -> Result<SubLaplacianResult> {
    if !(window > 0.0) {
        return Err(Error::InvalidArgument("window must be positive".into()));
    }
    let r = h_basis.len();
    if r == 0 {
        return Err(Error::InvalidArgument("H must be nonempty".into()));
    }
    if h.rows() != r || h.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: h.rows(),
        });
    }
    let h_eig = linalg::symmetric_eigen(h)?;
    if h_eig.min() <= 0.0 {
        return Err(Error::InvalidArgument(
            "inner product on H must be positive definite".into(),
        ));
    }
    if !lie::is_bracket_generating(entry, h_basis)? {
        return Ok(SubLaplacianResult {
            value: 0.0,
            witness: None,
            certified: false,
            window,
            reason: Some("H-invariant functions exist".into()),
        });
    }
    let h_inv = h.inverse()?.symmetrize();
    // Weight in the reference basis: W = B h⁻¹ Bᵀ with B the columns of H.
    let b = Matrix::from_columns(h_basis)?;
    let w = &(&b * &h_inv) * &b.transpose();
    let mut best: Option<(f64, IrrepLabel)> = None;
    for (casimir, label) in IrrepStream::new(entry) {
        if casimir > window {
            break;
        }
        if label.is_trivial() {
            continue;
        }
        let lam = lambda_min_hermitian(&assemble_weighted(&irrep(&label), &w)?)?;
        if best.as_ref().is_none_or(|(v, _)| lam < *v) {
            best = Some((lam, label));
        }
    }
    let (value, witness) = match best {
        Some((v, l)) => (v, Some(l)),
        None => (f64::INFINITY, None),
    };
    Ok(SubLaplacianResult {
        value,
        witness,
        certified: false,
        window,
        reason: Some("window-limited: no lower bound over unexamined irreps".into()),
    })
}
