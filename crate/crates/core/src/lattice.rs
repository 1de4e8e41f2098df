//! Integer-lattice search under a positive definite quadratic form:
//! LLL reduction, closest and shortest vectors, and the covering radius of
//! `ℤ^m`, which is the diameter of a flat torus.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Lovász constant for [`lll_reduce`].
pub const LLL_DELTA: f64 = 0.99;

/// LLL-reduced integer basis of `ℤ^m` for the form `g`.
#[derive(Clone, Debug)]
pub struct ReducedLattice {
    m: usize,
    /// Columns are the reduced basis vectors `u_j ∈ ℤ^m`.
    u: Vec<Vec<i64>>,
    /// `U⁻¹`, integral since `U` is unimodular.
    u_inv: Vec<Vec<i64>>,
    /// Upper Cholesky factor of `UᵀgU`.
    r: Matrix,
}

fn gram_entry(g: &Matrix, a: &[i64], b: &[i64]) -> f64 {
    let m = g.rows();
    let mut s = 0.0;
    for i in 0..m {
        if a[i] == 0 {
            continue;
        }
        for j in 0..m {
            s += a[i] as f64 * g[(i, j)] * b[j] as f64;
        }
    }
    s
}

/// Upper Cholesky factor `R` with `g = RᵀR`.
pub fn cholesky_upper(g: &Matrix) -> Result<Matrix> {
    let m = g.rows();
    if !g.is_square() {
        return Err(Error::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let mut r = Matrix::zeros(m, m);
    for i in 0..m {
        let mut d = g[(i, i)];
        for k in 0..i {
            d -= r[(k, i)] * r[(k, i)];
        }
        if !(d > 0.0) {
            return Err(Error::InvalidArgument(
                "quadratic form is not positive definite".into(),
            ));
        }
        let rii = d.sqrt();
        r[(i, i)] = rii;
        for j in i + 1..m {
            let mut s = g[(i, j)];
            for k in 0..i {
                s -= r[(k, i)] * r[(k, j)];
            }
            r[(i, j)] = s / rii;
        }
    }
    Ok(r)
}

/// LLL reduction of the standard basis of `ℤ^m` with respect to `g`.
pub fn lll_reduce(g: &Matrix) -> Result<ReducedLattice> {
    let m = g.rows();
    let mut u: Vec<Vec<i64>> = (0..m)
        .map(|j| (0..m).map(|i| i64::from(i == j)).collect())
        .collect();
    if m > 1 {
        let mut k = 1;
        let mut guard = 0usize;
        while k < m {
            guard += 1;
            if guard > 100_000 {
                return Err(Error::NoConvergence {
                    what: "LLL reduction",
                    iterations: guard,
                });
            }
            let (mu, bstar) = gso(g, &u);
            for j in (0..k).rev() {
                let q = mu[k][j].round();
                if q != 0.0 {
                    let q = q as i64;
                    let uj = u[j].clone();
                    for (a, b) in u[k].iter_mut().zip(&uj) {
                        *a -= q * b;
                    }
                }
            }
            let (mu, _) = gso(g, &u);
            if bstar[k] >= (LLL_DELTA - mu[k][k - 1].powi(2)) * bstar[k - 1] {
                k += 1;
            } else {
                u.swap(k, k - 1);
                k = (k - 1).max(1);
            }
        }
    }
    let reduced = Matrix::from_row_major(
        m,
        m,
        (0..m)
            .flat_map(|i| {
                let u = &u;
                (0..m).map(move |j| gram_entry(g, &u[i], &u[j]))
            })
            .collect(),
    )?;
    let r = cholesky_upper(&reduced.symmetrize())?;
    let u_inv = integer_inverse(&u)?;
    Ok(ReducedLattice { m, u, u_inv, r })
}

/// Gram–Schmidt coefficients `μ` and squared lengths `‖b*_i‖²`.
fn gso(g: &Matrix, u: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let m = u.len();
    let mut mu = vec![vec![0.0; m]; m];
    let mut bstar = vec![0.0; m];
    for i in 0..m {
        for j in 0..i {
            let mut s = gram_entry(g, &u[i], &u[j]);
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * bstar[k];
            }
            mu[i][j] = s / bstar[j];
        }
        let mut b = gram_entry(g, &u[i], &u[i]);
        for k in 0..i {
            b -= mu[i][k] * mu[i][k] * bstar[k];
        }
        bstar[i] = b;
    }
    (mu, bstar)
}

/// Inverse of a unimodular matrix given by columns, rounded to integers.
fn integer_inverse(cols: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let as_f: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| c.iter().map(|v| *v as f64).collect())
        .collect();
    let inv = Matrix::from_columns(&as_f)?.inverse()?;
    let m = cols.len();
    Ok((0..m)
        .map(|j| (0..m).map(|i| inv[(i, j)].round() as i64).collect())
        .collect())
}

impl ReducedLattice {
    pub fn new(g: &Matrix) -> Result<Self> {
        if g.asymmetry() > 1e-10 * g.max_abs().max(1e-300) {
            return Err(Error::NotSymmetric {
                residual: g.asymmetry(),
            });
        }
        lll_reduce(g)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    /// Reduced basis vectors, as columns of the unimodular change of basis.
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.u
    }

    fn to_reduced(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.u_inv[j][i] as f64 * x[j]).sum())
            .collect()
    }

    fn from_reduced(&self, k: &[i64]) -> Vec<i64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.u[j][i] * k[j]).sum())
            .collect()
    }

    /// Closest lattice point to `x` and the squared distance.
    pub fn closest(&self, x: &[f64]) -> (Vec<i64>, f64) {
        let z = self.to_reduced(x);
        let (k, d2) = self.enumerate(&z, false);
        (self.from_reduced(&k), d2)
    }

    /// A shortest nonzero lattice vector and its squared length.
    pub fn shortest(&self) -> (Vec<i64>, f64) {
        let z = vec![0.0; self.m];
        let (k, d2) = self.enumerate(&z, true);
        (self.from_reduced(&k), d2)
    }

    /// Schnorr–Euchner enumeration of `argmin ‖R(z − k)‖²`.
    fn enumerate(&self, z: &[f64], exclude_zero: bool) -> (Vec<i64>, f64) {
        let m = self.m;
        let mut best_k: Vec<i64> = if exclude_zero {
            let mut e = vec![0; m];
            e[0] = 1;
            e
        } else {
            z.iter().map(|v| v.round() as i64).collect()
        };
        let mut best = self.dist_sq(z, &best_k);
        let mut k = vec![0i64; m];
        self.search(z, m, 0.0, &mut k, &mut best, &mut best_k, exclude_zero);
        (best_k, best)
    }

    fn dist_sq(&self, z: &[f64], k: &[i64]) -> f64 {
        let y: Vec<f64> = z.iter().zip(k).map(|(a, b)| a - *b as f64).collect();
        let ry = self.r.matvec(&y);
        linalg::dot(&ry, &ry)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        z: &[f64],
        level: usize,
        partial: f64,
        k: &mut Vec<i64>,
        best: &mut f64,
        best_k: &mut Vec<i64>,
        exclude_zero: bool,
    ) {
        if level == 0 {
            if exclude_zero && k.iter().all(|v| *v == 0) {
                return;
            }
            if partial < *best {
                *best = partial;
                best_k.clone_from(k);
            }
            return;
        }
        let i = level - 1;
        let rii = self.r[(i, i)];
        let mut c = z[i];
        for j in level..self.m {
            c += self.r[(i, j)] / rii * (z[j] - k[j] as f64);
        }
        let center = c.round();
        // Zig-zag around the center: 0, +1, −1, +2, −2, … in order of distance.
        let mut step = 0i64;
        let mut pos_done = false;
        let mut neg_done = false;
        loop {
            for cand in [center as i64 + step, center as i64 - step] {
                if step == 0 && cand != center as i64 {
                    continue;
                }
                let off = cand as f64 - c;
                let term = partial + rii * rii * off * off;
                let positive = cand as f64 >= c;
                if term >= *best {
                    if positive {
                        pos_done = true;
                    } else {
                        neg_done = true;
                    }
                    continue;
                }
                k[i] = cand;
                self.search(z, i, term, k, best, best_k, exclude_zero);
            }
            if pos_done && neg_done {
                break;
            }
            step += 1;
            if step > 1_000_000 {
                break;
            }
        }
        k[i] = 0;
    }
}

/// Covering-radius estimate of `ℤ^m` under `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringRadius {
    /// Largest distance-to-lattice found; a true lower bound.
    pub value: f64,
    /// Grid maximum plus the Lipschitz slack of the grid.
    pub upper: f64,
    /// Point attaining `value`, in `[0,1)^m`.
    pub deep_hole: Vec<f64>,
    pub grid_resolution: usize,
}

/// Largest torus dimension accepted by [`covering_radius`].
pub const COVERING_MAX_DIM: usize = 3;

/// Distance-to-lattice maximized over the grid `(i/res)^m`, followed (when
/// `refine` is set) by a finer local grid around the best point.
pub fn covering_radius(g: &Matrix, grid_resolution: usize, refine: bool) -> Result<CoveringRadius> {
    let m = g.rows();
    if m == 0 || m > COVERING_MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "covering radius supports 1 ≤ m ≤ {COVERING_MAX_DIM}, got {m}"
        )));
    }
    if grid_resolution < 2 {
        return Err(Error::InvalidArgument("grid resolution must be ≥ 2".into()));
    }
    let lat = ReducedLattice::new(g)?;
    let res = grid_resolution;
    let h = 1.0 / res as f64;
    let total = res.pow(m as u32);
    let mut best = (-1.0, vec![0.0; m]);
    let mut x = vec![0.0; m];
    for idx in 0..total {
        let mut t = idx;
        for xi in x.iter_mut() {
            *xi = (t % res) as f64 * h;
            t /= res;
        }
        let (_, d2) = lat.closest(&x);
        if d2 > best.0 {
            best = (d2, x.clone());
        }
    }
    let grid_max = best.0.sqrt();
    let lam_max = linalg::symmetric_eigen(g)?.max();
    let upper = grid_max + 0.5 * h * (m as f64 * lam_max).sqrt();
    let (mut value, mut hole) = (grid_max, best.1);
    if refine {
        const SUB: usize = 8;
        let hs = h / SUB as f64;
        let side = 2 * SUB + 1;
        let center = hole.clone();
        let mut y = vec![0.0; m];
        for idx in 0..side.pow(m as u32) {
            let mut t = idx;
            for (yi, ci) in y.iter_mut().zip(&center) {
                *yi = ci + ((t % side) as f64 - SUB as f64) * hs;
                t /= side;
            }
            let (_, d2) = lat.closest(&y);
            let d = d2.sqrt();
            if d > value {
                value = d;
                hole = y.iter().map(|v| v - v.floor()).collect();
            }
        }
    }
    Ok(CoveringRadius {
        value,
        upper: upper.max(value),
        deep_hole: hole,
        grid_resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_closest(g: &Matrix, x: &[f64], r: i64) -> f64 {
        let m = x.len();
        let mut best = f64::INFINITY;
        let mut n = vec![-r; m];
        loop {
            let y: Vec<f64> = x.iter().zip(&n).map(|(a, b)| a - *b as f64).collect();
            best = best.min(g.quadratic_form(&y));
            let mut i = m;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if n[i] < r {
                    n[i] += 1;
                    break;
                }
                n[i] = -r;
            }
        }
    }

    fn skewed() -> Matrix {
        // Gram of the basis (1,0),(7,1) scaled: a strongly non-reduced form.
        let b = Matrix::from_rows(&[vec![1.0, 7.0], vec![0.0, 1.0]]).unwrap();
        &b.transpose() * &b
    }

    #[test]
    fn cholesky_reconstructs() {
        let g = Matrix::from_rows(&[vec![4.0, 1.0, 0.5], vec![1.0, 3.0, 0.2], vec![0.5, 0.2, 2.0]]).unwrap();
        let r = cholesky_upper(&g).unwrap();
        assert!((&r.transpose() * &r).max_abs_diff(&g) < 1e-14);
        assert!(cholesky_upper(&Matrix::diag(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn lll_is_unimodular_and_short() {
        let g = skewed();
        let lat = lll_reduce(&g).unwrap();
        let u: Vec<Vec<f64>> = lat.basis().iter().map(|c| c.iter().map(|v| *v as f64).collect()).collect();
        let det = Matrix::from_columns(&u).unwrap().determinant();
        assert!((det.abs() - 1.0).abs() < 1e-12);
        let (_, s2) = lat.shortest();
        assert!((s2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closest_matches_brute_force() {
        let g = skewed();
        let lat = ReducedLattice::new(&g).unwrap();
        for x in [[0.3, 0.9], [0.5, 0.5], [0.11, 0.77], [2.4, -1.3]] {
            let (_, d2) = lat.closest(&x);
            assert!((d2 - brute_closest(&g, &x, 12)).abs() < 1e-10, "{x:?}");
        }
    }

    #[test]
    fn covering_radius_of_cubic_lattice() {
        for m in 1..=3 {
            let c = covering_radius(&Matrix::identity(m), 16, true).unwrap();
            assert!((c.value - (m as f64).sqrt() / 2.0).abs() < 1e-12);
            assert!(c.upper >= c.value);
            assert!(c.deep_hole.iter().all(|v| (v - 0.5).abs() < 1e-12));
        }
        assert!(covering_radius(&Matrix::identity(4), 8, false).is_err());
    }

    #[test]
    fn hexagonal_covering_radius() {
        // Unit hexagonal lattice: covering radius 1/√3.
        let g = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let c = covering_radius(&g, 48, true).unwrap();
        let exact = 1.0 / 3f64.sqrt();
        assert!(c.value <= exact + 1e-12);
        assert!(c.upper >= exact);
        assert!(exact - c.value < 1e-3);
    }
}
