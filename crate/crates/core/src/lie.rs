//! Catalog of compact Lie groups: structure constants in a fixed
//! `g_I`-orthonormal basis, brackets, generated subalgebras, the
//! bracket-generating index, and group arithmetic with exp/log.
//!
//! Conventions:
//! - `su(2)` (shared by `so(3)`): `[X₁,X₂] = 2X₃`, `[X₂,X₃] = 2X₁`,
//!   `[X₃,X₁] = 2X₂`. Under this normalization `X_a` corresponds to the
//!   quaternion unit `i, j, k` and `exp(tX_a)` closes at `t = 2π` in SU(2).
//! - Torus `T^m = ℝ^m/ℤ^m`: `exp(X_j)` has period one.
//! - Products order their basis factor by factor.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Tolerance for the structure-constant identities checked at construction.
pub const STRUCTURE_TOL: f64 = 1e-12;
/// Relative singular-value threshold used for subalgebra closure.
pub const RANK_REL_TOL: f64 = 1e-9;
/// Orthogonality tolerance for rotations passed to [`ell_index`].
pub const ORTHOGONAL_TOL: f64 = 1e-10;

/// `k_max(SU(n)) = n² − 2n + 2`.
pub fn sun_k_max(n: usize) -> usize {
    n * n - 2 * n + 2
}

/// Coefficients `c_{ij}^k` with `[X_i, X_j] = Σ_k c_{ij}^k X_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    m: usize,
    c: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(m: usize) -> Self {
        Self {
            m,
            c: vec![0.0; m * m * m],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.m + j) * self.m + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let m = self.m;
        self.c[(i * m + j) * m + k] = v;
    }

    fn su2() -> Self {
        let mut c = Self::zeros(3);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c.set(i, j, k, 2.0);
            c.set(j, i, k, -2.0);
        }
        c
    }

    fn direct_sum(parts: &[&StructureConstants]) -> Self {
        let m = parts.iter().map(|p| p.m).sum();
        let mut out = Self::zeros(m);
        let mut off = 0;
        for p in parts {
            for i in 0..p.m {
                for j in 0..p.m {
                    for k in 0..p.m {
                        out.set(off + i, off + j, off + k, p.get(i, j, k));
                    }
                }
            }
            off += p.m;
        }
        out
    }

    /// Largest violation of `c_{ij}^k = −c_{ji}^k`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Largest violation of the Jacobi identity, coefficientwise.
    pub fn jacobi_defect(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for r in 0..m {
                        let s: f64 = (0..m)
                            .map(|l| {
                                self.get(i, j, l) * self.get(l, k, r)
                                    + self.get(j, k, l) * self.get(l, i, r)
                                    + self.get(k, i, l) * self.get(l, j, r)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest violation of `c_{ij}^k + c_{ik}^j = 0`, i.e. of `ad` being
    /// skew for the reference inner product.
    pub fn ad_invariance_defect(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0_f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    worst = worst.max((self.get(i, j, k) + self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }

    /// Checks all three identities at [`STRUCTURE_TOL`].
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("antisymmetry", self.antisymmetry_defect()),
            ("Jacobi identity", self.jacobi_defect()),
            ("ad-invariance", self.ad_invariance_defect()),
        ];
        for (name, defect) in checks {
            if defect > STRUCTURE_TOL {
                return Err(Error::InvalidStructureConstants(format!(
                    "{name} violated by {defect:e}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GroupKind {
    Torus(usize),
    Su2,
    So3,
    Product(Vec<LieGroupCatalogEntry>),
}

/// One supported compact Lie group with its reference data.
#[derive(Clone, Debug, PartialEq)]
pub struct LieGroupCatalogEntry {
    kind: GroupKind,
    dim: usize,
    structure: StructureConstants,
    k_max: usize,
    semisimple: bool,
}

impl LieGroupCatalogEntry {
    pub fn torus(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("torus dimension must be ≥ 1".into()));
        }
        Self::from_parts(GroupKind::Torus(m), StructureConstants::zeros(m), m, false)
    }

    pub fn su2() -> Self {
        let entry = Self::from_parts(GroupKind::Su2, StructureConstants::su2(), 2, true)
            .expect("su(2) constants are valid");
        assert_eq!(entry.k_max, sun_k_max(2));
        entry
    }

    pub fn so3() -> Self {
        Self::from_parts(GroupKind::So3, StructureConstants::su2(), 2, true)
            .expect("so(3) constants are valid")
    }

    /// `SU(2)×SU(2)` with `k_max = 5`.
    pub fn su2_x_su2() -> Self {
        Self::product(vec![Self::su2(), Self::su2()], 5).expect("valid product")
    }

    /// Direct product of semisimple catalog factors. `k_max` is per-entry data:
    /// there is no general product rule, so callers must supply it.
    pub fn product(factors: Vec<LieGroupCatalogEntry>, k_max: usize) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidArgument(
                "a product needs at least two factors".into(),
            ));
        }
        if let Some(f) = factors.iter().find(|f| !f.semisimple) {
            return Err(Error::Unsupported {
                group: f.key(),
                reason: "products with torus factors have no k_max in the catalog".into(),
            });
        }
        let parts: Vec<&StructureConstants> = factors.iter().map(|f| &f.structure).collect();
        let structure = StructureConstants::direct_sum(&parts);
        let dim = structure.dim();
        if k_max == 0 || k_max > dim {
            return Err(Error::InvalidArgument(format!(
                "k_max {k_max} out of range for dimension {dim}"
            )));
        }
        Self::from_parts(GroupKind::Product(factors), structure, k_max, true)
    }

    /// Builds an entry after validating the structure constants.
    pub fn from_parts(
        kind: GroupKind,
        structure: StructureConstants,
        k_max: usize,
        semisimple: bool,
    ) -> Result<Self> {
        structure.validate()?;
        Ok(Self::from_parts_unchecked(kind, structure, k_max, semisimple))
    }

    /// Builds an entry without validation. Used to exercise the validators.
    pub fn from_parts_unchecked(
        kind: GroupKind,
        structure: StructureConstants,
        k_max: usize,
        semisimple: bool,
    ) -> Self {
        Self {
            dim: structure.dim(),
            kind,
            structure,
            k_max,
            semisimple,
        }
    }

    /// Parses a group key: `t<m>`, `su2`, `so3`, `su2xsu2`.
    pub fn from_key(key: &str) -> Result<Self> {
        let k = key.trim().to_ascii_lowercase();
        match k.as_str() {
            "su2" => Ok(Self::su2()),
            "so3" => Ok(Self::so3()),
            "su2xsu2" => Ok(Self::su2_x_su2()),
            _ => {
                if let Some(rest) = k.strip_prefix('t') {
                    let m: usize = rest
                        .parse()
                        .map_err(|_| Error::Parse(format!("unknown group key `{key}`")))?;
                    Self::torus(m)
                } else {
                    Err(Error::Parse(format!("unknown group key `{key}`")))
                }
            }
        }
    }

    pub fn key(&self) -> String {
        match &self.kind {
            GroupKind::Torus(m) => format!("t{m}"),
            GroupKind::Su2 => "su2".into(),
            GroupKind::So3 => "so3".into(),
            GroupKind::Product(f) => f.iter().map(Self::key).collect::<Vec<_>>().join("x"),
        }
    }

    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_semisimple(&self) -> bool {
        self.semisimple
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, GroupKind::Torus(_))
    }

    pub fn structure_constants(&self) -> &StructureConstants {
        &self.structure
    }

    pub fn validate(&self) -> Result<()> {
        self.structure.validate()
    }

    /// `(offset, factor)` pairs for products; a single entry otherwise.
    pub fn factors(&self) -> Vec<(usize, &LieGroupCatalogEntry)> {
        match &self.kind {
            GroupKind::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let o = off;
                        off += f.dim;
                        (o, f)
                    })
                    .collect()
            }
            _ => vec![(0, self)],
        }
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }
}

impl FromStr for LieGroupCatalogEntry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_key(s)
    }
}

impl fmt::Display for LieGroupCatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// `[X, Y]` in the reference basis.
pub fn bracket(entry: &LieGroupCatalogEntry, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    entry.check_len(x)?;
    entry.check_len(y)?;
    let m = entry.dim;
    let c = &entry.structure;
    let mut out = vec![0.0; m];
    for i in 0..m {
        if x[i] == 0.0 {
            continue;
        }
        for j in 0..m {
            let w = x[i] * y[j];
            if w == 0.0 {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o += w * c.get(i, j, k);
            }
        }
    }
    Ok(out)
}

/// A Lie subalgebra given by a `g_I`-orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subalgebra {
    basis: Vec<Vec<f64>>,
    ambient_dim: usize,
}

impl Subalgebra {
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Orthogonal projection onto the subalgebra.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for b in &self.basis {
            let c = linalg::dot(b, v);
            for (o, bi) in out.iter_mut().zip(b) {
                *o += c * bi;
            }
        }
        out
    }

    /// Largest relative residual of a basis bracket outside the span.
    pub fn closure_defect(&self, entry: &LieGroupCatalogEntry) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                let br = bracket(entry, a, b).expect("basis vectors have ambient length");
                let n = linalg::norm(&br);
                if n == 0.0 {
                    continue;
                }
                let p = self.project(&br);
                let res: f64 = br
                    .iter()
                    .zip(&p)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                worst = worst.max(res / n);
            }
        }
        worst
    }
}

/// Lie subalgebra generated by `s`: adjoin brackets of the current basis until
/// the rank stops growing.
pub fn generated_subalgebra(entry: &LieGroupCatalogEntry, s: &[Vec<f64>]) -> Result<Subalgebra> {
    if s.is_empty() {
        return Err(Error::InvalidArgument(
            "generating set must be nonempty".into(),
        ));
    }
    for v in s {
        entry.check_len(v)?;
    }
    let (mut basis, _) = linalg::span_basis(s, RANK_REL_TOL);
    loop {
        let mut candidates = basis.clone();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                candidates.push(bracket(entry, a, b)?);
            }
        }
        let (next, _) = linalg::span_basis(&candidates, RANK_REL_TOL);
        if next.len() == basis.len() {
            break;
        }
        basis = next;
    }
    Ok(Subalgebra {
        basis,
        ambient_dim: entry.dim,
    })
}

pub fn is_bracket_generating(entry: &LieGroupCatalogEntry, s: &[Vec<f64>]) -> Result<bool> {
    Ok(generated_subalgebra(entry, s)?.dim() == entry.dim)
}

/// Columns `X_1(P), …, X_m(P)` of a rotation, as algebra vectors.
pub fn rotated_basis(p: &Matrix) -> Vec<Vec<f64>> {
    (0..p.cols()).map(|j| p.column(j)).collect()
}

/// Bracket-generating index `ℓ(P)`: the smallest `k` such that the first `k`
/// columns of `P` generate the algebra. Since `P` is invertible, `k = m`
/// always generates; for abelian groups that is the answer.
pub fn ell_index(entry: &LieGroupCatalogEntry, p: &Matrix) -> Result<usize> {
    check_rotation(entry, p)?;
    let cols = rotated_basis(p);
    for k in 1..=entry.dim {
        if is_bracket_generating(entry, &cols[..k])? {
            return Ok(k);
        }
    }
    unreachable!("an invertible matrix's columns span the algebra")
}

/// Dimensions of the subalgebras generated by each prefix of the columns of `P`.
pub fn prefix_dimensions(entry: &LieGroupCatalogEntry, p: &Matrix) -> Result<Vec<usize>> {
    check_rotation(entry, p)?;
    let cols = rotated_basis(p);
    (1..=entry.dim)
        .map(|k| Ok(generated_subalgebra(entry, &cols[..k])?.dim()))
        .collect()
}

pub(crate) fn check_rotation(entry: &LieGroupCatalogEntry, p: &Matrix) -> Result<()> {
    if p.rows() != entry.dim || p.cols() != entry.dim {
        return Err(Error::DimensionMismatch {
            expected: entry.dim,
            found: p.rows(),
        });
    }
    let defect = p.orthogonality_defect();
    if defect > ORTHOGONAL_TOL {
        return Err(Error::NotOrthogonal { defect });
    }
    Ok(())
}

/// Element of a catalog group.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum GroupElement {
    /// Coordinates reduced to `[0,1)^m`.
    Torus(Vec<f64>),
    /// Unit quaternion `(w, x, y, z)`.
    Su2([f64; 4]),
    /// Unit quaternion modulo sign, stored with a nonnegative leading
    /// nonzero component.
    So3([f64; 4]),
    Product(Vec<GroupElement>),
}

/// Result of [`group_log`]; `cut_locus` marks inputs where the principal
/// value is not unique.
#[derive(Clone, Debug, PartialEq)]
pub struct LogResult {
    pub vector: Vec<f64>,
    pub cut_locus: bool,
}

fn reduce_unit(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

pub fn quat_mul(a: &[f64; 4], b: &[f64; 4]) -> [f64; 4] {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn quat_conj(a: &[f64; 4]) -> [f64; 4] {
    [a[0], -a[1], -a[2], -a[3]]
}

fn quat_normalize(q: [f64; 4]) -> [f64; 4] {
    let n = (q.iter().map(|v| v * v).sum::<f64>()).sqrt();
    [q[0] / n, q[1] / n, q[2] / n, q[3] / n]
}

/// Canonical representative of `±q`.
pub fn so3_canonical(q: [f64; 4]) -> [f64; 4] {
    let q = quat_normalize(q);
    let lead = q.iter().copied().find(|v| *v != 0.0).unwrap_or(1.0);
    if lead < 0.0 {
        [-q[0], -q[1], -q[2], -q[3]]
    } else {
        q
    }
}

/// `exp` of a pure quaternion `v` (the algebra vector in the `su(2)` basis).
pub fn quat_exp(v: &[f64]) -> [f64; 4] {
    let t = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if t < 1e-300 {
        return quat_normalize([1.0, v[0], v[1], v[2]]);
    }
    let s = t.sin() / t;
    quat_normalize([t.cos(), s * v[0], s * v[1], s * v[2]])
}

/// Principal logarithm of a unit quaternion, angle in `[0, π]`.
pub fn quat_log(q: &[f64; 4]) -> (Vec<f64>, bool) {
    let vn = (q[1] * q[1] + q[2] * q[2] + q[3] * q[3]).sqrt();
    let theta = vn.atan2(q[0]);
    if vn < 1e-15 {
        if q[0] > 0.0 {
            return (vec![q[1], q[2], q[3]], false);
        }
        return (vec![PI, 0.0, 0.0], true);
    }
    let s = theta / vn;
    (vec![s * q[1], s * q[2], s * q[3]], false)
}

impl GroupElement {
    pub fn identity(entry: &LieGroupCatalogEntry) -> Self {
        match &entry.kind {
            GroupKind::Torus(m) => GroupElement::Torus(vec![0.0; *m]),
            GroupKind::Su2 => GroupElement::Su2([1.0, 0.0, 0.0, 0.0]),
            GroupKind::So3 => GroupElement::So3([1.0, 0.0, 0.0, 0.0]),
            GroupKind::Product(fs) => GroupElement::Product(fs.iter().map(Self::identity).collect()),
        }
    }

    pub fn su2(q: [f64; 4]) -> Self {
        GroupElement::Su2(quat_normalize(q))
    }

    pub fn so3(q: [f64; 4]) -> Self {
        GroupElement::So3(so3_canonical(q))
    }

    pub fn torus(x: Vec<f64>) -> Self {
        GroupElement::Torus(x.into_iter().map(reduce_unit).collect())
    }

    pub fn mul(&self, other: &GroupElement) -> Result<GroupElement> {
        match (self, other) {
            (GroupElement::Torus(a), GroupElement::Torus(b)) if a.len() == b.len() => Ok(
                GroupElement::torus(a.iter().zip(b).map(|(x, y)| x + y).collect()),
            ),
            (GroupElement::Su2(a), GroupElement::Su2(b)) => {
                Ok(GroupElement::Su2(quat_normalize(quat_mul(a, b))))
            }
            (GroupElement::So3(a), GroupElement::So3(b)) => Ok(GroupElement::so3(quat_mul(a, b))),
            (GroupElement::Product(a), GroupElement::Product(b)) if a.len() == b.len() => Ok(
                GroupElement::Product(
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x.mul(y))
                        .collect::<Result<_>>()?,
                ),
            ),
            _ => Err(Error::InvalidArgument(
                "group elements belong to different groups".into(),
            )),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Torus(a) => GroupElement::torus(a.iter().map(|x| -x).collect()),
            GroupElement::Su2(q) => GroupElement::Su2(quat_conj(q)),
            GroupElement::So3(q) => GroupElement::so3(quat_conj(q)),
            GroupElement::Product(a) => GroupElement::Product(a.iter().map(Self::inverse).collect()),
        }
    }

    /// Unit-norm defect for quaternion payloads; range defect for tori.
    pub fn normalization_defect(&self) -> f64 {
        match self {
            GroupElement::Torus(a) => a
                .iter()
                .map(|x| if (0.0..1.0).contains(x) { 0.0 } else { 1.0 })
                .fold(0.0, f64::max),
            GroupElement::Su2(q) | GroupElement::So3(q) => {
                (q.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs()
            }
            GroupElement::Product(a) => a
                .iter()
                .map(Self::normalization_defect)
                .fold(0.0, f64::max),
        }
    }

    /// Distance between payloads in their ambient coordinates (quaternion
    /// chord, or torus coordinate difference taken mod 1). Used to compare
    /// elements in tests.
    pub fn payload_distance(&self, other: &GroupElement) -> f64 {
        match (self, other) {
            (GroupElement::Torus(a), GroupElement::Torus(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = reduce_unit(x - y);
                    d.min(1.0 - d).powi(2)
                })
                .sum::<f64>()
                .sqrt(),
            (GroupElement::Su2(a), GroupElement::Su2(b)) => {
                a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
            }
            (GroupElement::So3(a), GroupElement::So3(b)) => {
                let plus: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
                let minus: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum();
                plus.min(minus).sqrt()
            }
            (GroupElement::Product(a), GroupElement::Product(b)) => a
                .iter()
                .zip(b)
                .map(|(x, y)| x.payload_distance(y).powi(2))
                .sum::<f64>()
                .sqrt(),
            _ => f64::INFINITY,
        }
    }
}

/// Group exponential of an algebra vector.
pub fn group_exp(entry: &LieGroupCatalogEntry, x: &[f64]) -> Result<GroupElement> {
    entry.check_len(x)?;
    Ok(match &entry.kind {
        GroupKind::Torus(_) => GroupElement::torus(x.to_vec()),
        GroupKind::Su2 => GroupElement::Su2(quat_exp(x)),
        GroupKind::So3 => GroupElement::so3(quat_exp(x)),
        GroupKind::Product(fs) => {
            let mut off = 0;
            let mut parts = Vec::with_capacity(fs.len());
            for f in fs {
                parts.push(group_exp(f, &x[off..off + f.dim])?);
                off += f.dim;
            }
            GroupElement::Product(parts)
        }
    })
}

/// Principal logarithm. For SO(3) this is the shorter of the two quaternion
/// lifts; torus coordinates land in `(−1/2, 1/2]`.
pub fn group_log(entry: &LieGroupCatalogEntry, a: &GroupElement) -> Result<LogResult> {
    let mismatch = || Error::InvalidArgument(format!("element does not belong to {}", entry.key()));
    match (&entry.kind, a) {
        (GroupKind::Torus(m), GroupElement::Torus(x)) if x.len() == *m => {
            let mut cut = false;
            let vector = x
                .iter()
                .map(|v| {
                    let r = reduce_unit(*v);
                    if r == 0.5 {
                        cut = true;
                    }
                    if r > 0.5 {
                        r - 1.0
                    } else {
                        r
                    }
                })
                .collect();
            Ok(LogResult {
                vector,
                cut_locus: cut,
            })
        }
        (GroupKind::Su2, GroupElement::Su2(q)) => {
            let (vector, cut_locus) = quat_log(q);
            Ok(LogResult { vector, cut_locus })
        }
        (GroupKind::So3, GroupElement::So3(q)) => {
            let q = if q[0] < 0.0 {
                [-q[0], -q[1], -q[2], -q[3]]
            } else {
                *q
            };
            let (vector, _) = quat_log(&q);
            Ok(LogResult {
                vector,
                cut_locus: q[0].abs() < 1e-15,
            })
        }
        (GroupKind::Product(fs), GroupElement::Product(parts)) if fs.len() == parts.len() => {
            let mut vector = Vec::with_capacity(entry.dim);
            let mut cut_locus = false;
            for (f, p) in fs.iter().zip(parts) {
                let r = group_log(f, p)?;
                cut_locus |= r.cut_locus;
                vector.extend(r.vector);
            }
            Ok(LogResult { vector, cut_locus })
        }
        _ => Err(mismatch()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(m: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v
    }

    #[test]
    fn su2_bracket_convention() {
        let g = LieGroupCatalogEntry::su2();
        assert_eq!(bracket(&g, &e(3, 0), &e(3, 1)).unwrap(), vec![0.0, 0.0, 2.0]);
        assert_eq!(bracket(&g, &e(3, 1), &e(3, 2)).unwrap(), vec![2.0, 0.0, 0.0]);
        assert_eq!(bracket(&g, &e(3, 2), &e(3, 0)).unwrap(), vec![0.0, 2.0, 0.0]);
        let x = vec![0.3, -1.2, 0.7];
        assert!(bracket(&g, &x, &x).unwrap().iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn torus_is_abelian() {
        let t = LieGroupCatalogEntry::torus(3).unwrap();
        let br = bracket(&t, &[1.0, 2.0, 3.0], &[-1.0, 0.5, 4.0]).unwrap();
        assert_eq!(br, vec![0.0; 3]);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let g = LieGroupCatalogEntry::su2();
        assert!(matches!(
            bracket(&g, &[1.0, 0.0], &[0.0, 1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn catalog_k_max() {
        assert_eq!(LieGroupCatalogEntry::su2().k_max(), 2);
        assert_eq!(LieGroupCatalogEntry::so3().k_max(), 2);
        assert_eq!(LieGroupCatalogEntry::torus(4).unwrap().k_max(), 4);
        assert_eq!(LieGroupCatalogEntry::su2_x_su2().k_max(), 5);
        assert_eq!(sun_k_max(2), 2);
        assert_eq!(sun_k_max(3), 5);
    }

    #[test]
    fn product_rejects_torus_factor() {
        let r = LieGroupCatalogEntry::product(
            vec![LieGroupCatalogEntry::su2(), LieGroupCatalogEntry::torus(1).unwrap()],
            3,
        );
        assert!(matches!(r, Err(Error::Unsupported { .. })));
    }

    #[test]
    fn perturbed_constants_are_rejected() {
        let mut c = LieGroupCatalogEntry::su2().structure_constants().clone();
        c.set(0, 1, 2, 2.0 + 1e-6);
        assert!(c.validate().is_err());
    }

    #[test]
    fn keys_round_trip() {
        for key in ["t1", "t2", "t3", "su2", "so3", "su2xsu2"] {
            assert_eq!(LieGroupCatalogEntry::from_key(key).unwrap().key(), key);
        }
        assert!(LieGroupCatalogEntry::from_key("sp2").is_err());
        assert!(LieGroupCatalogEntry::from_key("t0").is_err());
    }

    #[test]
    fn generated_subalgebra_su2() {
        let g = LieGroupCatalogEntry::su2();
        assert_eq!(generated_subalgebra(&g, &[e(3, 0)]).unwrap().dim(), 1);
        let full = generated_subalgebra(&g, &[e(3, 0), e(3, 1)]).unwrap();
        assert_eq!(full.dim(), 3);
        assert!(full.closure_defect(&g) < 1e-9);
        assert!(is_bracket_generating(&g, &[e(3, 0), e(3, 1)]).unwrap());
        assert!(!is_bracket_generating(&g, &[e(3, 2)]).unwrap());
        assert!(generated_subalgebra(&g, &[]).is_err());
    }

    #[test]
    fn generated_subalgebra_torus_is_span() {
        let t = LieGroupCatalogEntry::torus(3).unwrap();
        let s = vec![vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0], vec![0.0, 0.0, 1.0]];
        assert_eq!(generated_subalgebra(&t, &s).unwrap().dim(), 2);
    }

    #[test]
    fn first_factor_is_not_generating() {
        let g = LieGroupCatalogEntry::su2_x_su2();
        assert!(!is_bracket_generating(&g, &[e(6, 0), e(6, 1)]).unwrap());
        assert_eq!(generated_subalgebra(&g, &[e(6, 0), e(6, 1)]).unwrap().dim(), 3);
    }

    #[test]
    fn ell_index_catalog() {
        let g = LieGroupCatalogEntry::su2();
        assert_eq!(ell_index(&g, &Matrix::identity(3)).unwrap(), 2);
        let t = LieGroupCatalogEntry::torus(3).unwrap();
        assert_eq!(ell_index(&t, &Matrix::identity(3)).unwrap(), 3);
        let p = LieGroupCatalogEntry::su2_x_su2();
        assert_eq!(ell_index(&p, &Matrix::identity(6)).unwrap(), 5);
        assert_eq!(
            prefix_dimensions(&p, &Matrix::identity(6)).unwrap(),
            vec![1, 3, 3, 4, 6, 6]
        );
    }

    #[test]
    fn ell_index_rejects_non_orthogonal() {
        let g = LieGroupCatalogEntry::su2();
        let r = ell_index(&g, &Matrix::diag(&[1.0, 2.0, 1.0]));
        assert!(matches!(r, Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn exp_log_torus() {
        let t = LieGroupCatalogEntry::torus(3).unwrap();
        let a = group_exp(&t, &[0.25, 0.0, 0.0]).unwrap();
        assert_eq!(a, GroupElement::Torus(vec![0.25, 0.0, 0.0]));
        let b = group_exp(&t, &[1.75, -0.25, 3.0]).unwrap();
        let l = group_log(&t, &b).unwrap();
        assert!(l.vector.iter().zip([-0.25, -0.25, 0.0]).all(|(x, y)| (x - y).abs() < 1e-12));
        assert!(!l.cut_locus);
        let half = group_log(&t, &GroupElement::torus(vec![0.5, 0.0, 0.0])).unwrap();
        assert!(half.cut_locus);
    }

    #[test]
    fn log_identity_is_zero() {
        for g in [
            LieGroupCatalogEntry::su2(),
            LieGroupCatalogEntry::so3(),
            LieGroupCatalogEntry::torus(2).unwrap(),
            LieGroupCatalogEntry::su2_x_su2(),
        ] {
            let l = group_log(&g, &GroupElement::identity(&g)).unwrap();
            assert!(l.vector.iter().all(|v| *v == 0.0));
            assert!(!l.cut_locus);
        }
    }

    #[test]
    fn su2_one_parameter_subgroup_closes() {
        // Closed form: exp(t X₃) = (cos t, 0, 0, sin t).
        let g = LieGroupCatalogEntry::su2();
        let a = group_exp(&g, &[0.0, 0.0, PI]).unwrap();
        let GroupElement::Su2(q) = a else { panic!() };
        assert!((q[0] + 1.0).abs() < 1e-15 && q[3].abs() < 1e-15);
        let back = group_log(&g, &GroupElement::Su2(q)).unwrap();
        assert!(back.cut_locus);
        let full = group_exp(&g, &[0.0, 0.0, 2.0 * PI]).unwrap();
        assert!(full.payload_distance(&GroupElement::identity(&g)) < 1e-14);
        // The same line is already closed at t = π in SO(3).
        let s = LieGroupCatalogEntry::so3();
        let b = group_exp(&s, &[0.0, 0.0, PI]).unwrap();
        assert!(b.payload_distance(&GroupElement::identity(&s)) < 1e-14);
    }

    #[test]
    fn quaternion_commutator_matches_bracket() {
        // For small t, exp(tX)exp(tY)exp(−tX)exp(−tY) ≈ exp(t²[X,Y]).
        let g = LieGroupCatalogEntry::su2();
        let t = 1e-4;
        let x = [t, 0.0, 0.0];
        let y = [0.0, t, 0.0];
        let a = quat_exp(&x);
        let b = quat_exp(&y);
        let c = quat_mul(&quat_mul(&a, &b), &quat_mul(&quat_conj(&a), &quat_conj(&b)));
        let (v, _) = quat_log(&c);
        let br = bracket(&g, &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap();
        for k in 0..3 {
            assert!((v[k] / (t * t) - br[k]).abs() < 1e-3);
        }
    }

    #[test]
    fn so3_log_is_short() {
        let s = LieGroupCatalogEntry::so3();
        let a = group_exp(&s, &[0.0, 2.5, 0.0]).unwrap();
        let l = group_log(&s, &a).unwrap();
        assert!((l.vector[1] + (PI - 2.5)).abs() < 1e-12);
    }

    #[test]
    fn mul_inverse() {
        let g = LieGroupCatalogEntry::su2_x_su2();
        let a = group_exp(&g, &[0.1, -0.4, 0.9, 1.3, 0.2, -0.7]).unwrap();
        let e = a.mul(&a.inverse()).unwrap();
        assert!(e.payload_distance(&GroupElement::identity(&g)) < 1e-14);
        let t = LieGroupCatalogEntry::torus(2).unwrap();
        assert!(a.mul(&GroupElement::identity(&t)).is_err());
    }
}
