//! Left-invariant metrics `g_A`, parameterized by invertible `A`.
//!
//! `g_A` is the inner product making `X_j(A) = Σ_i a_{ij} X_i` orthonormal.
//! Its Gram matrix in the reference basis is `(AAᵀ)⁻¹`, and the scale
//! parameters `σ_k(A)` are the singular values of `A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lie::{self, LieGroupCatalogEntry};
use crate::linalg::{self, Matrix};

/// `|det A|` must exceed this times `(max |a_ij|)^m`.
pub const SINGULAR_REL_TOL: f64 = 1e-10;
/// Relative slack for the Loewner comparison.
pub const LOEWNER_TOL: f64 = 1e-10;

/// Metric `g_A` with its cached derived data.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    a: Matrix,
    aat: Matrix,
    sigma: Vec<f64>,
    p_sort: Matrix,
    gram: Matrix,
}

impl MetricSpec {
    pub fn from_matrix(a: Matrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !a.is_finite() {
            return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
        }
        let m = a.rows();
        let det = a.determinant();
        let threshold = SINGULAR_REL_TOL * a.max_abs().powi(m as i32);
        if !(det.abs() > threshold) {
            return Err(Error::SingularMatrix {
                det: det.abs(),
                threshold,
            });
        }
        let aat = (&a * &a.transpose()).symmetrize();
        let eig = linalg::symmetric_eigen(&aat)?.sorted_descending();
        if eig.min() <= 0.0 {
            return Err(Error::SingularMatrix {
                det: det.abs(),
                threshold,
            });
        }
        let sigma: Vec<f64> = eig.values.iter().map(|v| v.sqrt()).collect();
        let p_sort = eig.vectors;
        let inv_sq: Vec<f64> = eig.values.iter().map(|v| 1.0 / v).collect();
        let gram = (&(&p_sort * &Matrix::diag(&inv_sq)) * &p_sort.transpose()).symmetrize();
        Ok(Self {
            a,
            aat,
            sigma,
            p_sort,
            gram,
        })
    }

    /// Metric whose `AAᵀ` is the given symmetric positive definite matrix,
    /// realized with `A = P·diag(√λ)`.
    pub fn from_aat(aat: &Matrix) -> Result<Self> {
        let eig = linalg::symmetric_eigen(aat)?.sorted_descending();
        if eig.min() <= 0.0 {
            return Err(Error::InvalidArgument(
                "AAᵀ must be positive definite".into(),
            ));
        }
        let d: Vec<f64> = eig.values.iter().map(|v| v.sqrt()).collect();
        Self::from_matrix(&eig.vectors * &Matrix::diag(&d))
    }

    pub fn identity(m: usize) -> Self {
        Self::from_matrix(Matrix::identity(m)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn aat(&self) -> &Matrix {
        &self.aat
    }

    /// Descending singular values of `A`.
    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    /// `σ_k` with 1-based `k`.
    pub fn sigma_k(&self, k: usize) -> f64 {
        self.sigma[k - 1]
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma[0]
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma[self.sigma.len() - 1]
    }

    /// Orthogonal `P` with `AAᵀ = P·diag(σ²)·Pᵀ`.
    pub fn p_sort(&self) -> &Matrix {
        &self.p_sort
    }

    /// Gram matrix of `g_A` in the reference basis, `(AAᵀ)⁻¹`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `g_A(X, X)`.
    pub fn norm_sq(&self, x: &[f64]) -> f64 {
        self.gram.quadratic_form(x)
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.norm_sq(x).max(0.0).sqrt()
    }

    /// The metric of `t·A`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::from_matrix(self.a.scale(t))
    }

    /// `‖AAᵀ − P diag(σ²) Pᵀ‖_F / ‖AAᵀ‖_F`.
    pub fn reconstruction_residual(&self) -> f64 {
        let sq: Vec<f64> = self.sigma.iter().map(|s| s * s).collect();
        let back = &(&self.p_sort * &Matrix::diag(&sq)) * &self.p_sort.transpose();
        (&self.aat - &back).frobenius_norm() / self.aat.frobenius_norm()
    }
}

/// `metric_from_matrix`.
pub fn metric_from_matrix(a: Matrix) -> Result<MetricSpec> {
    MetricSpec::from_matrix(a)
}

/// `(P_sort, D)` with `g_A = g_{P_sort·D}`.
pub fn canonical_form(spec: &MetricSpec) -> (Matrix, Matrix) {
    (spec.p_sort.clone(), Matrix::diag(&spec.sigma))
}

/// `AAᵀ ≤ BBᵀ` in the Loewner order.
pub fn loewner_leq(a: &MetricSpec, b: &MetricSpec) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = (&b.aat - &a.aat).symmetrize();
    let min = linalg::symmetric_eigen(&diff)?.min();
    Ok(min >= -LOEWNER_TOL * b.aat.frobenius_norm())
}

/// Haar-distributed rotation in `SO(m)`: QR of a Gaussian matrix with
/// positive `R` diagonal, then the first column flipped if `det < 0`.
pub fn random_rotation<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix {
    if m == 0 {
        return Matrix::zeros(0, 0);
    }
    loop {
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut ok = true;
        for c in cols {
            let mut v = c;
            // Two passes of modified Gram–Schmidt.
            for _ in 0..2 {
                for b in &q {
                    let d = linalg::dot(b, &v);
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi -= d * bi;
                    }
                }
            }
            let n = linalg::norm(&v);
            if n < 1e-8 {
                ok = false;
                break;
            }
            q.push(v.into_iter().map(|x| x / n).collect());
        }
        if !ok {
            continue;
        }
        let mut p = Matrix::from_columns(&q).expect("square");
        if p.determinant() < 0.0 {
            for r in 0..m {
                p[(r, 0)] = -p[(r, 0)];
            }
        }
        return p;
    }
}

/// Random orthogonal matrix in `O(m)` (either determinant sign).
pub fn random_orthogonal<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix {
    let mut p = random_rotation(m, rng);
    if m > 0 && rng.random::<bool>() {
        for r in 0..m {
            p[(r, 0)] = -p[(r, 0)];
        }
    }
    p
}

/// Seeded metric sampler: σ's log-uniform on `[lo, hi]`, sorted descending,
/// and optionally a Haar rotation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub lo: f64,
    pub hi: f64,
    pub random_rotation: bool,
}

impl SamplerConfig {
    pub fn log_uniform(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            random_rotation: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0 && self.lo <= self.hi && self.hi.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "invalid sampler range [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// Draws descending σ's from `rng`.
    pub fn draw_sigma<R: Rng + ?Sized>(&self, m: usize, rng: &mut R) -> Vec<f64> {
        let (llo, lhi) = (self.lo.ln(), self.hi.ln());
        let mut s: Vec<f64> = (0..m)
            .map(|_| {
                let u: f64 = rng.random();
                (llo + u * (lhi - llo)).exp()
            })
            .collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

pub fn sample_metric(
    entry: &LieGroupCatalogEntry,
    sampler: &SamplerConfig,
    seed: u64,
) -> Result<MetricSpec> {
    sampler.validate()?;
    let m = entry.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = sampler.draw_sigma(m, &mut rng);
    let p = if sampler.random_rotation {
        random_rotation(m, &mut rng)
    } else {
        Matrix::identity(m)
    };
    MetricSpec::from_matrix(&p * &Matrix::diag(&sigma))
}

/// Restricted metric classes.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricClassSpec {
    /// `Σ(c₀) = { g_A : σ₂(A) ≤ c₀·σ_{k_max}(A) }`.
    SigmaRatio { c0: f64 },
    /// `M^G(P) = { g_{PQD} : Q ∈ O(m, ℓ(P)), D ∈ D(m) }`.
    ClassOfP { p: Matrix },
    /// Metrics diagonal in the frame `X_j(P)`.
    DiagonalClass { p: Matrix },
}

/// Relative tolerance for block-structure tests in [`class_member`].
pub const CLASS_TOL: f64 = 1e-9;

/// Block orthogonal `blockdiag(Q₁, 1, Q₂)` with `Q₁ ∈ O(k−1)`, `Q₂ ∈ O(m−k)`.
pub fn block_orthogonal(q1: &Matrix, q2: &Matrix) -> Result<Matrix> {
    for q in [q1, q2] {
        if !q.is_square() {
            return Err(Error::InvalidArgument("block is not square".into()));
        }
        if q.rows() > 0 && q.orthogonality_defect() > lie::ORTHOGONAL_TOL {
            return Err(Error::NotOrthogonal {
                defect: q.orthogonality_defect(),
            });
        }
    }
    Ok(Matrix::block_diag(&[q1, &Matrix::identity(1), q2]))
}

/// Membership of `g_A` in a class.
///
/// For `ClassOfP` this checks that `PᵀAAᵀP` splits into blocks of sizes
/// `k−1, 1, m−k` (with `k = ℓ(P)`) whose spectra are ordered so that some
/// descending `D` realizes it.
pub fn class_member(
    entry: &LieGroupCatalogEntry,
    class: &MetricClassSpec,
    spec: &MetricSpec,
) -> Result<bool> {
    let m = entry.dim();
    if spec.dim() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: spec.dim(),
        });
    }
    match class {
        MetricClassSpec::SigmaRatio { c0 } => {
            if !(*c0 >= 1.0) {
                return Err(Error::InvalidArgument("c₀ must be ≥ 1".into()));
            }
            if m < 2 {
                return Ok(true);
            }
            let s2 = spec.sigma_k(2);
            let sk = spec.sigma_k(entry.k_max().max(2));
            Ok(s2 <= c0 * sk * (1.0 + CLASS_TOL))
        }
        MetricClassSpec::ClassOfP { p } => {
            let k = lie::ell_index(entry, p)?;
            let rotated = &(&p.transpose() * spec.aat()) * p;
            let scale = rotated.frobenius_norm();
            let block = |i: usize| -> usize {
                if i < k - 1 {
                    0
                } else if i == k - 1 {
                    1
                } else {
                    2
                }
            };
            for r in 0..m {
                for c in 0..m {
                    if block(r) != block(c) && rotated[(r, c)].abs() > CLASS_TOL * scale {
                        return Ok(false);
                    }
                }
            }
            let sub = |lo: usize, hi: usize| -> Result<Vec<f64>> {
                if lo == hi {
                    return Ok(Vec::new());
                }
                let mut b = Matrix::zeros(hi - lo, hi - lo);
                for r in lo..hi {
                    for c in lo..hi {
                        b[(r - lo, c - lo)] = rotated[(r, c)];
                    }
                }
                Ok(linalg::symmetric_eigen(&b)?.values)
            };
            let top = sub(0, k - 1)?;
            let mid = rotated[(k - 1, k - 1)];
            let bottom = sub(k, m)?;
            let slack = CLASS_TOL * scale;
            let top_ok = top.iter().all(|v| *v >= mid - slack);
            let bottom_ok = bottom.iter().all(|v| *v <= mid + slack);
            Ok(top_ok && bottom_ok)
        }
        MetricClassSpec::DiagonalClass { p } => {
            lie::check_rotation(entry, p)?;
            let rotated = &(&p.transpose() * spec.aat()) * p;
            let scale = rotated.frobenius_norm();
            Ok((0..m).all(|r| {
                (0..m).all(|c| r == c || rotated[(r, c)].abs() <= CLASS_TOL * scale)
            }))
        }
    }
}

/// Builds a member of `class` with singular values `sigma`.
///
/// `SigmaRatio` uses a seeded random rotation and rejects `sigma` outside the
/// class. `ClassOfP` draws `Q₁, Q₂` from the seed and requires descending
/// `sigma`. `DiagonalClass` accepts any positive `sigma` order.
pub fn class_build(
    entry: &LieGroupCatalogEntry,
    class: &MetricClassSpec,
    sigma: &[f64],
    seed: u64,
) -> Result<MetricSpec> {
    let m = entry.dim();
    if sigma.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: sigma.len(),
        });
    }
    if sigma.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidArgument("σ's must be positive".into()));
    }
    let descending = sigma.windows(2).all(|w| w[0] >= w[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Matrix::diag(sigma);
    match class {
        MetricClassSpec::SigmaRatio { .. } => {
            if !descending {
                return Err(Error::InvalidArgument("σ's must be descending".into()));
            }
            let p = random_rotation(m, &mut rng);
            let spec = MetricSpec::from_matrix(&p * &d)?;
            if !class_member(entry, class, &spec)? {
                return Err(Error::InvalidArgument(
                    "σ's violate the class ratio bound".into(),
                ));
            }
            Ok(spec)
        }
        MetricClassSpec::ClassOfP { p } => {
            if !descending {
                return Err(Error::InvalidArgument("σ's must be descending".into()));
            }
            let k = lie::ell_index(entry, p)?;
            let q1 = random_orthogonal(k - 1, &mut rng);
            let q2 = random_orthogonal(m - k, &mut rng);
            let q = block_orthogonal(&q1, &q2)?;
            MetricSpec::from_matrix(&(p * &q) * &d)
        }
        MetricClassSpec::DiagonalClass { p } => {
            lie::check_rotation(entry, p)?;
            MetricSpec::from_matrix(p * &d)
        }
    }
}

/// Parses the plain-text matrix format: `m` on the first line, then `m`
/// rows of `m` whitespace-separated floats.
pub fn parse_matrix_text(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let m: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line `{header}`")))?;
    if m == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let mut data = Vec::with_capacity(m * m);
    for r in 0..m {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {m} rows, found {r}")))?;
        let row = parse_floats(line)?;
        if row.len() != m {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {m}",
                r + 1,
                row.len()
            )));
        }
        data.extend(row);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content `{extra}`")));
    }
    Matrix::from_row_major(m, m, data)
}

pub fn format_matrix_text(a: &Matrix) -> String {
    let mut out = format!("{}\n", a.rows());
    for r in 0..a.rows() {
        let row: Vec<String> = a.row(r).iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Parses an inline row-major matrix of `m²` comma- or whitespace-separated
/// floats; `;` may separate rows.
pub fn parse_inline_matrix(text: &str, m: usize) -> Result<Matrix> {
    let values = parse_floats(text)?;
    if values.len() != m * m {
        return Err(Error::Parse(format!(
            "expected {} entries for a {m}x{m} matrix, found {}",
            m * m,
            values.len()
        )));
    }
    Matrix::from_row_major(m, m, values)
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(|c: char| c.is_whitespace() || c == ',' || c == ';')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let v: f64 = t
                .parse()
                .map_err(|_| Error::Parse(format!("not a number: `{t}`")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("non-finite entry `{t}`")));
            }
            Ok(v)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_metric() {
        let s = MetricSpec::from_matrix(Matrix::diag(&[3.0, 2.0, 1.0])).unwrap();
        assert_eq!(s.sigma(), &[3.0, 2.0, 1.0]);
        assert!(s.p_sort().max_abs_diff(&Matrix::identity(3)) < 1e-15);
        assert!(s.reconstruction_residual() < 1e-15);
    }

    #[test]
    fn homothety_gram() {
        let c = 2.5;
        let s = MetricSpec::from_matrix(Matrix::identity(3).scale(c)).unwrap();
        assert!(s.gram().max_abs_diff(&Matrix::identity(3).scale(1.0 / (c * c))) < 1e-15);
    }

    #[test]
    fn singular_rejected() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            MetricSpec::from_matrix(a),
            Err(Error::SingularMatrix { .. })
        ));
        let tiny = Matrix::diag(&[1.0, 1e-11]);
        assert!(MetricSpec::from_matrix(tiny).is_err());
    }

    #[test]
    fn gram_inverts_aat() {
        let a = Matrix::from_rows(&[
            vec![1.0, 0.3, -0.2],
            vec![0.1, 2.0, 0.5],
            vec![-0.4, 0.2, 0.7],
        ])
        .unwrap();
        let s = MetricSpec::from_matrix(a).unwrap();
        assert!((s.gram() * s.aat()).max_abs_diff(&Matrix::identity(3)) < 1e-9);
    }

    #[test]
    fn orthogonal_has_identity_canonical_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = random_rotation(3, &mut rng);
        let s = MetricSpec::from_matrix(r).unwrap();
        let (_, d) = canonical_form(&s);
        assert!(d.max_abs_diff(&Matrix::identity(3)) < 1e-12);
        assert!(s.gram().max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn loewner_examples() {
        let i = MetricSpec::identity(2);
        let two = MetricSpec::from_matrix(Matrix::identity(2).scale(2.0)).unwrap();
        assert!(loewner_leq(&i, &two).unwrap());
        assert!(!loewner_leq(&two, &i).unwrap());
        let a = MetricSpec::from_matrix(Matrix::diag(&[2.0, 1.0])).unwrap();
        let b = MetricSpec::from_matrix(Matrix::diag(&[1.0, 2.0])).unwrap();
        assert!(!loewner_leq(&a, &b).unwrap());
        assert!(!loewner_leq(&b, &a).unwrap());
    }

    #[test]
    fn rank_one_bump_dominates() {
        let a = MetricSpec::from_matrix(
            Matrix::from_rows(&[vec![1.0, 0.2], vec![-0.3, 0.8]]).unwrap(),
        )
        .unwrap();
        let v = [0.6, -1.1];
        let mut bump = a.aat().clone();
        for r in 0..2 {
            for c in 0..2 {
                bump[(r, c)] += v[r] * v[c];
            }
        }
        let b = MetricSpec::from_aat(&bump).unwrap();
        assert!(b.aat().max_abs_diff(&bump) < 1e-12);
        assert!(loewner_leq(&a, &b).unwrap());
    }

    #[test]
    fn sampler_is_deterministic() {
        let g = LieGroupCatalogEntry::su2();
        let cfg = SamplerConfig::log_uniform(0.2, 5.0);
        let a = sample_metric(&g, &cfg, 11).unwrap();
        let b = sample_metric(&g, &cfg, 11).unwrap();
        assert_eq!(a.a(), b.a());
        let c = sample_metric(&g, &cfg, 12).unwrap();
        assert_ne!(a.a(), c.a());
        let unit = sample_metric(&g, &SamplerConfig::log_uniform(1.0, 1.0), 5).unwrap();
        assert!(unit.sigma().iter().all(|s| (s - 1.0).abs() < 1e-12));
        assert!(unit.gram().max_abs_diff(&Matrix::identity(3)) < 1e-12);
        assert!(sample_metric(&g, &SamplerConfig::log_uniform(2.0, 1.0), 0).is_err());
        assert!(sample_metric(&g, &SamplerConfig::log_uniform(0.0, 1.0), 0).is_err());
    }

    #[test]
    fn sampler_spread() {
        // σ₁/σ_m of two independent log-uniform draws on [0.1, 10]: the log
        // ratio is triangular on [0, ln 100], so the ratio spans ~[1, 100]
        // with median 100^{1−1/√2} ≈ 3.85.
        let t = LieGroupCatalogEntry::torus(2).unwrap();
        let cfg = SamplerConfig::log_uniform(0.1, 10.0);
        let mut ratios: Vec<f64> = (0..10_000)
            .map(|s| {
                let m = sample_metric(&t, &cfg, s).unwrap();
                m.sigma_max() / m.sigma_min()
            })
            .collect();
        ratios.sort_by(|a, b| a.total_cmp(b));
        assert!(ratios[0] >= 1.0 && ratios[0] < 1.01);
        assert!(ratios[9_999] <= 100.0 + 1e-9 && ratios[9_999] > 80.0);
        let median = ratios[5_000];
        let expected = 100f64.powf(1.0 - 1.0 / 2f64.sqrt());
        assert!((median / expected - 1.0).abs() < 0.06, "median {median}");
    }

    #[test]
    fn sigma_ratio_class() {
        let g = LieGroupCatalogEntry::su2();
        let class = MetricClassSpec::SigmaRatio { c0: 1.0 };
        let s = MetricSpec::from_matrix(Matrix::identity(3).scale(1.7)).unwrap();
        assert!(class_member(&g, &class, &s).unwrap());
        let built = class_build(&g, &class, &[3.0, 1.0, 1.0], 4).unwrap();
        assert!(class_member(&g, &class, &built).unwrap());
        // k_max = 2 makes every SU(2) metric a member.
        assert!(class_build(&g, &class, &[3.0, 2.0, 1.0], 4).is_ok());
        let g = LieGroupCatalogEntry::su2_x_su2();
        let class = MetricClassSpec::SigmaRatio { c0: 2.0 };
        // σ₂ ≤ 2σ₅.
        assert!(class_build(&g, &class, &[9.0, 4.0, 3.0, 2.5, 2.0, 0.1], 4).is_ok());
        assert!(class_build(&g, &class, &[9.0, 4.1, 3.0, 2.5, 2.0, 0.1], 4).is_err());
    }

    #[test]
    fn class_of_p_builder_and_membership() {
        let g = LieGroupCatalogEntry::su2();
        let class = MetricClassSpec::ClassOfP {
            p: Matrix::identity(3),
        };
        let built = class_build(&g, &class, &[4.0, 2.0, 0.5], 9).unwrap();
        assert!(class_member(&g, &class, &built).unwrap());
        assert_eq!(built.sigma().len(), 3);
        // A metric whose first frame vector is not X₁ is not in M(I).
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random_rotation(3, &mut rng);
        let off = MetricSpec::from_matrix(&r * &Matrix::diag(&[4.0, 2.0, 0.5])).unwrap();
        assert!(!class_member(&g, &class, &off).unwrap());
        // Non-descending D in the I-frame is outside M(I) as well.
        let wrong = MetricSpec::from_matrix(Matrix::diag(&[1.0, 3.0, 0.5])).unwrap();
        assert!(!class_member(&g, &class, &wrong).unwrap());
    }

    #[test]
    fn malformed_class_rotation() {
        let g = LieGroupCatalogEntry::su2();
        let class = MetricClassSpec::ClassOfP {
            p: Matrix::diag(&[1.0, 2.0, 1.0]),
        };
        assert!(class_build(&g, &class, &[3.0, 2.0, 1.0], 0).is_err());
        assert!(block_orthogonal(&Matrix::diag(&[2.0]), &Matrix::identity(1)).is_err());
    }

    #[test]
    fn matrix_text_round_trip() {
        let a = Matrix::from_rows(&[vec![1.5, -2.0], vec![0.25, 3.0e-3]]).unwrap();
        let text = format_matrix_text(&a);
        assert_eq!(parse_matrix_text(&text).unwrap(), a);
        assert!(parse_matrix_text("2\n1 2\n3 NaN\n").is_err());
        assert!(parse_matrix_text("2\n1 2\n3 inf\n").is_err());
        assert!(parse_matrix_text("2\n1 2\n").is_err());
        assert!(parse_matrix_text("2\n1 2 3\n4 5\n").is_err());
    }

    #[test]
    fn inline_matrix() {
        let a = parse_inline_matrix("3,0,0; 0 2 0\n0,0,1", 3).unwrap();
        assert_eq!(a, Matrix::diag(&[3.0, 2.0, 1.0]));
        assert!(parse_inline_matrix("1 2 3", 2).is_err());
    }
}
