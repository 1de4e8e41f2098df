//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use liespec::geometry;
use liespec::lattice::ReducedLattice;
use liespec::lie::{self, LieGroupCatalogEntry};
use liespec::linalg::{CMatrix, Matrix};
use liespec::metric::{self, MetricSpec, SamplerConfig};
use liespec::rep::{self, IrrepLabel, RestrictedLambda};
use liespec::scan::{self, DegenerationKind, DiamConfig, Trend};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn sampler() -> SamplerConfig {
    SamplerConfig::log_uniform(0.2, 5.0)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lam(entry: &LieGroupCatalogEntry, spec: &MetricSpec) -> Result<f64, String> {
    let r = rep::lambda1_certified(entry, spec).map_err(|e| e.to_string())?;
    check(r.certified, || format!("uncertified λ₁ for σ = {:?}", spec.sigma()))?;
    Ok(r.lambda1)
}

fn eigen_constants(entry: &LieGroupCatalogEntry, lower_c: f64, seed: u64, budget: Duration) -> Outcome {
    let start = Instant::now();
    let mut worst_lo = f64::INFINITY;
    let mut worst_hi: f64 = 0.0;
    for i in 0..100 {
        let spec = metric::sample_metric(entry, &sampler(), seed + i).map_err(|e| e.to_string())?;
        let s2 = spec.sigma_k(2).powi(2);
        let l = lam(entry, &spec)?;
        check(l > lower_c * s2, || format!("seed {}: λ₁ = {l} ≤ {lower_c}σ₂² = {}", seed + i, lower_c * s2))?;
        check(l <= 8.0 * s2 * (1.0 + 1e-9), || format!("seed {}: λ₁ = {l} > 8σ₂² = {}", seed + i, 8.0 * s2))?;
        worst_lo = worst_lo.min(l / s2);
        worst_hi = worst_hi.max(l / s2);
    }
    let elapsed = start.elapsed();
    check(elapsed < budget, || format!("runtime {elapsed:?} exceeds {budget:?}"))?;
    Ok(format!("λ₁/σ₂² ∈ [{worst_lo:.4}, {worst_hi:.4}] over 100 metrics in {elapsed:.2?}"))
}

fn criterion_1() -> Outcome {
    eigen_constants(&LieGroupCatalogEntry::su2(), 2.0, 1000, Duration::from_secs(60))
}

fn criterion_2() -> Outcome {
    let so3 = LieGroupCatalogEntry::so3();
    let l = lam(&so3, &MetricSpec::identity(3))?;
    check((l - 8.0).abs() <= 1e-9, || format!("λ₁(SO(3), g_I) = {l}"))?;
    let msg = eigen_constants(&so3, 4.0, 2000, Duration::from_secs(60))?;
    Ok(format!("λ₁(g_I) = {l}; {msg}"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let su2 = LieGroupCatalogEntry::su2();
    let cfg = DiamConfig {
        method: scan::DiameterChoice::Graph,
        net_size: 20_000,
        knn: 12,
        ..Default::default()
    };
    let engine = scan::DiameterEngine::new(&su2, &cfg).map_err(|e| e.to_string())?;
    let (mut lo_ratio, mut hi_ratio) = (f64::INFINITY, 0.0_f64);
    for i in 0..30 {
        let spec = metric::sample_metric(&su2, &sampler(), 3000 + i).map_err(|e| e.to_string())?;
        let d = engine.estimate(&spec).map_err(|e| e.to_string())?.value;
        let s2 = spec.sigma_k(2);
        let (lo, hi) = (PI / (2.0 * s2), PI / s2);
        check(d >= 0.90 * lo && d <= 1.10 * hi, || {
            format!("seed {}: diam {d} outside [{}, {}]", 3000 + i, 0.9 * lo, 1.1 * hi)
        })?;
        lo_ratio = lo_ratio.min(d * s2 / PI);
        hi_ratio = hi_ratio.max(d * s2 / PI);
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(600), || format!("runtime {elapsed:?}"))?;
    Ok(format!("diam·σ₂/π ∈ [{lo_ratio:.4}, {hi_ratio:.4}] over 30 metrics in {elapsed:.2?}"))
}

fn criterion_4() -> Outcome {
    let sampler = SamplerConfig::log_uniform(0.1, 10.0);
    let mut min_li = f64::INFINITY;
    let mut max_gap: f64 = 0.0;
    for m in [2usize, 3] {
        let entry = LieGroupCatalogEntry::torus(m).map_err(|e| e.to_string())?;
        let id = geometry::torus_diameter(&MetricSpec::identity(m), geometry::DEFAULT_GRID_RESOLUTION)
            .map_err(|e| e.to_string())?;
        let exact = (m as f64).sqrt() / 2.0;
        check(id.lower <= exact + 1e-9 && exact <= id.upper + 1e-9, || {
            format!("T^{m}: [{}, {}] misses √m/2", id.lower, id.upper)
        })?;
        for i in 0..200 {
            let seed = 4000 + 1000 * m as u64 + i;
            let spec = metric::sample_metric(&entry, &sampler, seed).map_err(|e| e.to_string())?;
            let l = lam(&entry, &spec)?;
            let (_, sv) = ReducedLattice::new(spec.aat()).map_err(|e| e.to_string())?.shortest();
            let oracle = 4.0 * PI * PI * sv;
            let gap = (l - oracle).abs() / oracle;
            check(gap <= 1e-9, || format!("T^{m} seed {seed}: λ₁ {l} vs shortest vector {oracle}"))?;
            max_gap = max_gap.max(gap);
            let d = geometry::torus_diameter(&spec, geometry::DEFAULT_GRID_RESOLUTION).map_err(|e| e.to_string())?;
            let li = l * d.lower * d.lower;
            check(li >= PI * PI / 4.0 - 1e-6, || format!("T^{m} seed {seed}: λ₁·diam² = {li}"))?;
            min_li = min_li.min(li);
        }
    }
    Ok(format!("400 metrics; max rel gap to shortest vector {max_gap:.1e}; min λ₁·diam_lower² = {min_li:.4}"))
}

/// `AAᵀ ≤ BBᵀ` by construction.
fn loewner_pair(entry: &LieGroupCatalogEntry, rng: &mut ChaCha8Rng) -> Result<(MetricSpec, MetricSpec), String> {
    let s = sampler();
    let a = metric::sample_metric(entry, &s, rng.random()).map_err(|e| e.to_string())?;
    let c = metric::sample_metric(entry, &s, rng.random()).map_err(|e| e.to_string())?;
    let t: f64 = rng.random_range(0.0..1.0);
    let b = MetricSpec::from_aat(&(a.aat() + &c.aat().scale(t * t))).map_err(|e| e.to_string())?;
    Ok((a, b))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let su2 = LieGroupCatalogEntry::su2();
    let t2 = LieGroupCatalogEntry::torus(2).map_err(|e| e.to_string())?;
    let net = geometry::build_net(&su2, 20_000, 12, 0).map_err(|e| e.to_string())?;
    for (entry, label) in [(&su2, "su2"), (&t2, "t2")] {
        for i in 0..200 {
            let (a, b) = loewner_pair(entry, &mut rng)?;
            check(metric::loewner_leq(&a, &b).map_err(|e| e.to_string())?, || "pair not ordered".into())?;
            let (la, lb) = (lam(entry, &a)?, lam(entry, &b)?);
            check(la <= lb + 1e-9 * lb, || format!("{label} pair {i}: λ₁ {la} > {lb}"))?;
            let (da, db) = if entry.is_torus() {
                (
                    geometry::torus_diameter_with(&a, 32, false).map_err(|e| e.to_string())?.value,
                    geometry::torus_diameter_with(&b, 32, false).map_err(|e| e.to_string())?.value,
                )
            } else {
                (
                    geometry::graph_diameter(entry, &a, &net).map_err(|e| e.to_string())?.value,
                    geometry::graph_diameter(entry, &b, &net).map_err(|e| e.to_string())?.value,
                )
            };
            check(da >= db - 1e-9 * db, || format!("{label} pair {i}: diam {da} < {db}"))?;
        }
    }
    Ok("200 SU(2) pairs (fixed 20000-node net) and 200 T² pairs (fixed grid)".into())
}

fn assemble_in_frame(label: &IrrepLabel, frame: &[Vec<f64>], w: &Matrix) -> CMatrix {
    let ir = rep::irrep(label);
    let reps: Vec<CMatrix> = frame.iter().map(|y| ir.represent(y)).collect();
    let mut out = CMatrix::zeros(ir.dim);
    for i in 0..reps.len() {
        for j in 0..reps.len() {
            out.add_scaled(&(&reps[i] * &reps[j]), -w[(i, j)]);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let su2 = LieGroupCatalogEntry::su2();
    let mut worst_gram: f64 = 0.0;
    for _ in 0..50 {
        let a = metric::sample_metric(&su2, &sampler(), rng.random()).map_err(|e| e.to_string())?;
        let r = metric::random_orthogonal(3, &mut rng);
        let ar = MetricSpec::from_matrix(a.a() * &r).map_err(|e| e.to_string())?;
        let res = ar.gram().max_abs_diff(a.gram()) / a.gram().max_abs();
        check(res <= 1e-9, || format!("gram residual {res:e}"))?;
        worst_gram = worst_gram.max(res);
    }
    let mut worst_cab: f64 = 0.0;
    for _ in 0..50 {
        let a = metric::sample_metric(&su2, &sampler(), rng.random()).map_err(|e| e.to_string())?;
        let b = metric::sample_metric(&su2, &sampler(), rng.random()).map_err(|e| e.to_string())?;
        let ab = MetricSpec::from_matrix(a.a() * b.a()).map_err(|e| e.to_string())?;
        let frame: Vec<Vec<f64>> = (0..3).map(|j| a.a().column(j)).collect();
        for twice_j in 1..=3 {
            let label = IrrepLabel::Spin { twice_j };
            let direct = rep::assemble_minus_ca(&rep::irrep(&label), &ab).map_err(|e| e.to_string())?;
            let via = assemble_in_frame(&label, &frame, b.aat());
            let d = direct.max_abs_diff(&via) / direct.norm().max(1.0);
            check(d <= 1e-10, || format!("C_AB defect {d:e} in {label}"))?;
            worst_cab = worst_cab.max(d);
        }
    }
    let mut count = 0;
    for key in ["su2", "so3", "t2", "t3", "su2xsu2"] {
        let entry = LieGroupCatalogEntry::from_key(key).map_err(|e| e.to_string())?;
        let li = lam(&entry, &MetricSpec::identity(entry.dim()))?;
        for _ in 0..40 {
            let a = metric::sample_metric(&entry, &sampler(), rng.random()).map_err(|e| e.to_string())?;
            let l = lam(&entry, &a)?;
            let bound = li * a.aat().trace();
            check(l <= bound * (1.0 + 1e-9), || format!("{key}: λ₁ {l} > λ₁(g_I)·Tr = {bound}"))?;
            count += 1;
        }
    }
    Ok(format!(
        "gram residual ≤ {worst_gram:.1e}; C_AB defect ≤ {worst_cab:.1e} (spin 1/2, 1, 3/2); trace bound held on {count} metrics"
    ))
}

fn criterion_7() -> Outcome {
    let su2 = LieGroupCatalogEntry::su2();
    let p = Matrix::identity(3);
    let r2 = rep::lambda1_restricted(&su2, &p, 2).map_err(|e| e.to_string())?;
    let v2 = match r2 {
        RestrictedLambda::Finite { value, .. } => value,
        RestrictedLambda::Infinite => return Err("k = 2 gave ∞".into()),
    };
    check((v2 - 8.0).abs() <= 1e-9, || format!("restricted k=2 = {v2}"))?;
    let r3 = rep::lambda1_restricted(&su2, &p, 3).map_err(|e| e.to_string())?;
    check(matches!(r3, RestrictedLambda::Infinite), || format!("restricted k=3 = {r3:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mut d: Vec<f64> = (0..3).map(|_| (rng.random_range(0.2f64.ln()..5f64.ln())).exp()).collect();
        d.sort_by(|x, y| y.total_cmp(x));
        let spec = MetricSpec::from_matrix(&p * &Matrix::diag(&d)).map_err(|e| e.to_string())?;
        let l = lam(&su2, &spec)?;
        let bound = v2 * spec.sigma_k(2).powi(2);
        check(l <= bound * (1.0 + 1e-9), || format!("λ₁ {l} > {bound} for D = {d:?}"))?;
        worst = worst.max(l / bound);
    }
    Ok(format!("restricted(I,2) = {v2}, restricted(I,3) = ∞; sandwich max λ₁/bound = {worst:.4}"))
}

fn criterion_8() -> Outcome {
    let su2 = LieGroupCatalogEntry::su2();
    let cfg = DiamConfig::default();
    let r = scan::degeneration_experiment(&su2, DegenerationKind::ShrinkTransverse, &[1.0, 0.5, 0.25, 0.125], &cfg)
        .map_err(|e| e.to_string())?;
    // Rows ascend in s: λ₁ must increase with s, diam decrease.
    check(r.trend("lambda1") == Some(Trend::StrictlyIncreasing), || {
        format!("λ₁ not strictly decreasing as s ↓: {:?}", r.column("lambda1"))
    })?;
    check(r.trend("diam") == Some(Trend::StrictlyDecreasing), || {
        format!("diam not strictly increasing as s ↓: {:?}", r.column("diam"))
    })?;
    let ratio = |row: &scan::DegenerationRow| row.lambda1 / (row.s * row.s);
    let (q8, q4) = (ratio(&r.rows[0]), ratio(&r.rows[1]));
    let var = (q4 - q8).abs() / q4.max(q8);
    check(var < 0.25, || format!("λ₁/s² varies {:.1}% across the last two steps", 100.0 * var))?;
    let t2 = LieGroupCatalogEntry::torus(2).map_err(|e| e.to_string())?;
    let rt = scan::degeneration_experiment(&t2, DegenerationKind::TorusDenseLine, &[1.0, 4.0, 16.0], &cfg)
        .map_err(|e| e.to_string())?;
    check(rt.trend("diam*sigma_2") == Some(Trend::StrictlyDecreasing), || {
        format!("diam·σ₂ not strictly decreasing: {:?}", rt.column("diam*sigma_2"))
    })?;
    Ok(format!(
        "SU(2) λ₁ {:?}, diam {:?}; λ₁/s² at s=1/4,1/8: {q4:.4}, {q8:.4}; T² diam·σ₂ {:?}",
        r.column("lambda1"),
        r.column("diam").iter().map(|d| (d * 1e4).round() / 1e4).collect::<Vec<_>>(),
        rt.column("diam*sigma_2").iter().map(|d| (d * 1e4).round() / 1e4).collect::<Vec<_>>()
    ))
}

fn criterion_9() -> Outcome {
    let k = |key: &str| LieGroupCatalogEntry::from_key(key).map(|e| e.k_max()).map_err(|e| e.to_string());
    check(k("su2")? == 2, || "k_max(SU(2)) ≠ 2".into())?;
    for m in 1..=4 {
        check(k(&format!("t{m}"))? == m, || format!("k_max(T^{m}) ≠ {m}"))?;
    }
    check(k("su2xsu2")? == 5, || "k_max(SU(2)×SU(2)) ≠ 5".into())?;
    check(lie::sun_k_max(2) == 2, || "n²−2n+2 ≠ 2 at n = 2".into())?;
    liespec::self_test().map_err(|e| e.to_string())?;
    Ok("k_max: su2 2, t1..t4 1..4, su2xsu2 5, SU(n) formula 2 at n=2; startup self-test ok".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("SU(2) eigenvalue constants", criterion_1),
        ("SO(3) eigenvalue constants", criterion_2),
        ("SU(2) diameter constants", criterion_3),
        ("torus exactness", criterion_4),
        ("Loewner monotonicity", criterion_5),
        ("algebraic identities", criterion_6),
        ("restricted spectrum", criterion_7),
        ("degeneration trends", criterion_8),
        ("k_max catalog", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
