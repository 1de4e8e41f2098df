//! Diameters of left-invariant metrics.
//!
//! Tori are handled exactly through the covering radius of `ℤ^m`, bi-invariant
//! metrics in closed form, and general metrics on SU(2) and SO(3) through
//! shortest paths on a quaternion net whose edges carry the left-trivialized
//! length `‖log(p⁻¹q)‖_{g_A}`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice;
use crate::lie::{self, GroupElement, GroupKind, LieGroupCatalogEntry};
use crate::linalg::{self, Matrix};
use crate::metric::MetricSpec;

pub const DEFAULT_NET_SIZE: usize = 20_000;
pub const DEFAULT_KNN: usize = 12;
pub const DEFAULT_GRID_RESOLUTION: usize = 64;
/// Relative discretization allowance of graph estimates.
pub const DEFAULT_EPS_NET: f64 = 0.10;
/// Admissible transverse fraction of a horizontal edge.
pub const DEFAULT_ETA: f64 = 0.2;
pub const DEFAULT_N_DIRECTIONS: usize = 48;
/// Hop radius, in the kNN graph, of the edges used for shortest paths.
pub const DEFAULT_HOPS: usize = 3;
pub const MAX_HOPS: usize = 4;
pub const MIN_NET_SIZE: usize = 100;
pub const MIN_KNN: usize = 6;
/// Environment variable naming the net cache directory.
pub const NET_CACHE_ENV: &str = "LIESPEC_NET_CACHE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterMethod {
    TorusCoveringRadius,
    #[serde(rename = "biinvariant")]
    BiInvariantClosedForm,
    GeodesicGraph,
    HorizontalGraph,
    AnalyticBounds,
}

impl DiameterMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiameterMethod::TorusCoveringRadius => "torus_covering_radius",
            DiameterMethod::BiInvariantClosedForm => "biinvariant",
            DiameterMethod::GeodesicGraph => "geodesic_graph",
            DiameterMethod::HorizontalGraph => "horizontal_graph",
            DiameterMethod::AnalyticBounds => "analytic_bounds",
        }
    }
}

impl fmt::Display for DiameterMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiameterParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub knn: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hops: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub net_seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_directions: Option<usize>,
}

/// Diameter value with a bracket and the element realizing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub method: DiameterMethod,
    pub params: DiameterParams,
    pub farthest_point: GroupElement,
    /// Set when `upper` is not a certified bound.
    pub heuristic: bool,
}

impl DiameterEstimate {
    /// Estimate for the metric `g_{tA}` given one for `g_A`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            value: self.value / t,
            lower: self.lower / t,
            upper: self.upper / t,
            ..self.clone()
        }
    }
}

/// Distance from the identity under the bi-invariant metric `g_I`.
pub fn biinvariant_distance(entry: &LieGroupCatalogEntry, a: &GroupElement) -> Result<f64> {
    Ok(linalg::norm(&lie::group_log(entry, a)?.vector))
}

fn biinvariant_extremum(entry: &LieGroupCatalogEntry) -> (f64, GroupElement) {
    match entry.kind() {
        GroupKind::Torus(m) => ((*m as f64).sqrt() / 2.0, GroupElement::Torus(vec![0.5; *m])),
        GroupKind::Su2 => (PI, GroupElement::Su2([-1.0, 0.0, 0.0, 0.0])),
        GroupKind::So3 => (PI / 2.0, GroupElement::So3([0.0, 1.0, 0.0, 0.0])),
        GroupKind::Product(fs) => {
            let parts: Vec<(f64, GroupElement)> = fs.iter().map(biinvariant_extremum).collect();
            let d = parts.iter().map(|(d, _)| d * d).sum::<f64>().sqrt();
            (d, GroupElement::Product(parts.into_iter().map(|(_, e)| e).collect()))
        }
    }
}

/// `diam(G, g_I)` in closed form.
pub fn biinvariant_diameter(entry: &LieGroupCatalogEntry) -> DiameterEstimate {
    let (value, farthest_point) = biinvariant_extremum(entry);
    DiameterEstimate {
        value,
        lower: value,
        upper: value,
        method: DiameterMethod::BiInvariantClosedForm,
        params: DiameterParams::default(),
        farthest_point,
        heuristic: false,
    }
}

/// Flat-torus diameter: covering radius of `ℤ^m` under `(AAᵀ)⁻¹`, with one
/// local refinement pass.
pub fn torus_diameter(spec: &MetricSpec, grid_resolution: usize) -> Result<DiameterEstimate> {
    torus_diameter_with(spec, grid_resolution, true)
}

pub fn torus_diameter_with(
    spec: &MetricSpec,
    grid_resolution: usize,
    refine: bool,
) -> Result<DiameterEstimate> {
    let c = lattice::covering_radius(spec.gram(), grid_resolution, refine)?;
    Ok(DiameterEstimate {
        value: c.value,
        lower: c.value,
        upper: c.upper,
        method: DiameterMethod::TorusCoveringRadius,
        params: DiameterParams {
            grid_resolution: Some(grid_resolution),
            ..Default::default()
        },
        farthest_point: GroupElement::torus(c.deep_hole),
        heuristic: false,
    })
}

/// Analytic diameter interval with the source of each endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiameterBounds {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: String,
    pub upper_source: String,
}

/// `[diam(g_I)/σ₁, diam(g_I)/σ_m]` in general, replaced by the sharper
/// `σ₂` intervals for SU(2) and SO(3).
pub fn diameter_bounds(entry: &LieGroupCatalogEntry, spec: &MetricSpec) -> Result<DiameterBounds> {
    if spec.dim() != entry.dim() {
        return Err(Error::DimensionMismatch {
            expected: entry.dim(),
            found: spec.dim(),
        });
    }
    let s2 = spec.sigma_k(2.min(spec.dim()));
    Ok(match entry.kind() {
        GroupKind::Su2 => DiameterBounds {
            lower: PI / (2.0 * s2),
            upper: PI / s2,
            lower_source: "su2: pi/(2 sigma_2)".into(),
            upper_source: "su2: pi/sigma_2".into(),
        },
        GroupKind::So3 => DiameterBounds {
            lower: PI / (2.0 * s2),
            upper: 3f64.sqrt() * PI / (2.0 * s2),
            lower_source: "so3: pi/(2 sigma_2)".into(),
            upper_source: "so3: sqrt(3) pi/(2 sigma_2)".into(),
        },
        _ => {
            let d = biinvariant_diameter(entry).value;
            DiameterBounds {
                lower: d / spec.sigma_max(),
                upper: d / spec.sigma_min(),
                lower_source: "general: diam(g_I)/sigma_1".into(),
                upper_source: "general: diam(g_I)/sigma_m".into(),
            }
        }
    })
}

/// [`diameter_bounds`] as an estimate; `value` is the upper endpoint.
pub fn bounds_estimate(entry: &LieGroupCatalogEntry, spec: &MetricSpec) -> Result<DiameterEstimate> {
    let b = diameter_bounds(entry, spec)?;
    Ok(DiameterEstimate {
        value: b.upper,
        lower: b.lower,
        upper: b.upper,
        method: DiameterMethod::AnalyticBounds,
        params: DiameterParams::default(),
        farthest_point: biinvariant_extremum(entry).1,
        heuristic: false,
    })
}

fn chord_sq(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    (0..4).map(|i| (a[i] - b[i]).powi(2)).sum()
}

fn neg(a: &[f64; 4]) -> [f64; 4] {
    [-a[0], -a[1], -a[2], -a[3]]
}

/// Bi-invariant distance from a squared chord on the unit 3-sphere.
fn chord_to_angle(c2: f64) -> f64 {
    2.0 * (c2.sqrt() / 2.0).min(1.0).asin()
}

/// Static 4-d tree over unit quaternions, Euclidean (chordal) metric.
#[derive(Clone, Debug)]
struct KdTree {
    points: Vec<[f64; 4]>,
    perm: Vec<usize>,
    axis: Vec<u8>,
}

impl KdTree {
    fn new(points: &[[f64; 4]]) -> Self {
        let mut t = Self {
            points: points.to_vec(),
            perm: (0..points.len()).collect(),
            axis: vec![0; points.len()],
        };
        t.build(0, points.len());
        t
    }

    fn build(&mut self, lo: usize, hi: usize) {
        if hi - lo <= 1 {
            return;
        }
        let mut best_axis = 0;
        let mut best_spread = -1.0;
        for ax in 0..4 {
            let (mut mn, mut mx) = (f64::INFINITY, f64::NEG_INFINITY);
            for &i in &self.perm[lo..hi] {
                mn = mn.min(self.points[i][ax]);
                mx = mx.max(self.points[i][ax]);
            }
            if mx - mn > best_spread {
                best_spread = mx - mn;
                best_axis = ax;
            }
        }
        let mid = (lo + hi) / 2;
        let pts = &self.points;
        self.perm[lo..hi].select_nth_unstable_by(mid - lo, |a, b| {
            pts[*a][best_axis].total_cmp(&pts[*b][best_axis])
        });
        self.axis[mid] = best_axis as u8;
        self.build(lo, mid);
        self.build(mid + 1, hi);
    }

    /// `k` nearest points to `q` (squared chord, index), ascending.
    fn knn(&self, q: &[f64; 4], k: usize, exclude: Option<usize>) -> Vec<(f64, usize)> {
        let mut heap: BinaryHeap<Cand> = BinaryHeap::new();
        self.search(0, self.points.len(), q, k, exclude, &mut heap);
        let mut out: Vec<(f64, usize)> = heap.into_iter().map(|c| (c.d2, c.idx)).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        out
    }

    fn search(
        &self,
        lo: usize,
        hi: usize,
        q: &[f64; 4],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Cand>,
    ) {
        if lo >= hi {
            return;
        }
        let mid = (lo + hi) / 2;
        let idx = self.perm[mid];
        let p = &self.points[idx];
        if Some(idx) != exclude {
            let d2 = chord_sq(p, q);
            if heap.len() < k {
                heap.push(Cand { d2, idx });
            } else if let Some(top) = heap.peek() {
                if (d2, idx) < (top.d2, top.idx) {
                    heap.pop();
                    heap.push(Cand { d2, idx });
                }
            }
        }
        if hi - lo == 1 {
            return;
        }
        let ax = self.axis[mid] as usize;
        let diff = q[ax] - p[ax];
        let (near, far) = if diff < 0.0 {
            ((lo, mid), (mid + 1, hi))
        } else {
            ((mid + 1, hi), (lo, mid))
        };
        self.search(near.0, near.1, q, k, exclude, heap);
        let bound = heap.peek().map_or(f64::INFINITY, |c| c.d2);
        if heap.len() < k || diff * diff <= bound {
            self.search(far.0, far.1, q, k, exclude, heap);
        }
    }
}

#[derive(PartialEq)]
struct Cand {
    d2: f64,
    idx: usize,
}

impl Eq for Cand {}

impl Ord for Cand {
    fn cmp(&self, other: &Self) -> Ordering {
        self.d2.total_cmp(&other.d2).then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Cand {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Undirected edge list with compressed adjacency.
#[derive(Clone, Debug, Default)]
struct EdgeSet {
    ends: Vec<(u32, u32)>,
    logs: Vec<[f64; 3]>,
    offsets: Vec<usize>,
    /// (neighbor, edge id), grouped by source node.
    targets: Vec<(u32, u32)>,
}

impl EdgeSet {
    fn new(net_nodes: usize, ends: Vec<(u32, u32)>, logs: Vec<[f64; 3]>) -> Self {
        let mut deg = vec![0usize; net_nodes + 1];
        for &(a, b) in &ends {
            deg[a as usize + 1] += 1;
            deg[b as usize + 1] += 1;
        }
        for i in 0..net_nodes {
            deg[i + 1] += deg[i];
        }
        let offsets = deg.clone();
        let mut fill = deg;
        let mut targets = vec![(0u32, 0u32); 2 * ends.len()];
        for (e, &(a, b)) in ends.iter().enumerate() {
            targets[fill[a as usize]] = (b, e as u32);
            fill[a as usize] += 1;
            targets[fill[b as usize]] = (a, e as u32);
            fill[b as usize] += 1;
        }
        Self {
            ends,
            logs,
            offsets,
            targets,
        }
    }

    fn len(&self) -> usize {
        self.ends.len()
    }
}

/// Quaternion net on SU(2), or on SO(3) as its sign quotient, with a
/// symmetrized k-nearest-neighbor graph under `g_I`. Distances are computed
/// on the `hops`-step closure of that graph; every edge `(p, q)` stands for
/// the curve `t ↦ p·exp(t·log(p⁻¹q))`, whose `g_A`-length is exactly
/// `‖log(p⁻¹q)‖_{g_A}`.
#[derive(Clone, Debug)]
pub struct Net {
    quotient: bool,
    nodes: Vec<[f64; 4]>,
    adjacency: Vec<Vec<usize>>,
    edges: EdgeSet,
    hops: usize,
    mesh: f64,
    knn: usize,
    seed: Option<u64>,
    repairs: usize,
    tree: KdTree,
}

fn net_quotient(entry: &LieGroupCatalogEntry) -> Result<bool> {
    match entry.kind() {
        GroupKind::Su2 => Ok(false),
        GroupKind::So3 => Ok(true),
        _ => Err(Error::Unsupported {
            group: entry.key(),
            reason: "graph nets exist for su2 and so3 only".into(),
        }),
    }
}

/// Seeded net: the identity plus `n_nodes − 1` uniform random unit
/// quaternions.
pub fn build_net(entry: &LieGroupCatalogEntry, n_nodes: usize, knn: usize, seed: u64) -> Result<Net> {
    build_net_with_hops(entry, n_nodes, knn, seed, DEFAULT_HOPS)
}

pub fn build_net_with_hops(
    entry: &LieGroupCatalogEntry,
    n_nodes: usize,
    knn: usize,
    seed: u64,
    hops: usize,
) -> Result<Net> {
    let quotient = net_quotient(entry)?;
    check_net_params(n_nodes, knn)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n_nodes);
    nodes.push([1.0, 0.0, 0.0, 0.0]);
    while nodes.len() < n_nodes {
        let v: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n < 1e-12 {
            continue;
        }
        let q = [v[0] / n, v[1] / n, v[2] / n, v[3] / n];
        nodes.push(if quotient { lie::so3_canonical(q) } else { q });
    }
    Net::from_nodes(entry, nodes, knn, hops, Some(seed))
}

fn check_net_params(n_nodes: usize, knn: usize) -> Result<()> {
    if n_nodes < MIN_NET_SIZE {
        return Err(Error::InvalidArgument(format!(
            "net size must be ≥ {MIN_NET_SIZE}, got {n_nodes}"
        )));
    }
    if knn < MIN_KNN || knn >= n_nodes {
        return Err(Error::InvalidArgument(format!(
            "knn must lie in {MIN_KNN}..{n_nodes}, got {knn}"
        )));
    }
    Ok(())
}

/// [`build_net`] through the cache directory named by `LIESPEC_NET_CACHE`,
/// when set.
pub fn build_net_cached(
    entry: &LieGroupCatalogEntry,
    n_nodes: usize,
    knn: usize,
    seed: u64,
) -> Result<Net> {
    build_net_cached_with_hops(entry, n_nodes, knn, seed, DEFAULT_HOPS)
}

pub fn build_net_cached_with_hops(
    entry: &LieGroupCatalogEntry,
    n_nodes: usize,
    knn: usize,
    seed: u64,
    hops: usize,
) -> Result<Net> {
    let Some(dir) = std::env::var_os(NET_CACHE_ENV) else {
        return build_net_with_hops(entry, n_nodes, knn, seed, hops);
    };
    let path = PathBuf::from(dir).join(format!("net-{}-{n_nodes}-{seed}.txt", entry.key()));
    if path.exists() {
        let mut net = Net::load(&path, entry, knn, hops)?;
        net.seed = Some(seed);
        return Ok(net);
    }
    let net = build_net_with_hops(entry, n_nodes, knn, seed, hops)?;
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    net.save(&path)?;
    Ok(net)
}

impl Net {
    /// Net over explicit nodes; node 0 should be the identity.
    pub fn from_nodes(
        entry: &LieGroupCatalogEntry,
        nodes: Vec<[f64; 4]>,
        knn: usize,
        hops: usize,
        seed: Option<u64>,
    ) -> Result<Self> {
        let quotient = net_quotient(entry)?;
        check_net_params(nodes.len(), knn)?;
        if hops == 0 || hops > MAX_HOPS {
            return Err(Error::InvalidArgument(format!("hops must lie in 1..={MAX_HOPS}")));
        }
        for q in &nodes {
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !n.is_finite() || (n - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument("net nodes must be unit quaternions".into()));
            }
        }
        let tree = KdTree::new(&nodes);
        let mut net = Self {
            quotient,
            adjacency: vec![Vec::new(); nodes.len()],
            edges: EdgeSet::default(),
            hops,
            nodes,
            mesh: 0.0,
            knn,
            seed,
            repairs: 0,
            tree,
        };
        let mut mesh = 0.0_f64;
        let mut pairs = Vec::with_capacity(net.nodes.len() * knn);
        for i in 0..net.nodes.len() {
            let nbrs = net.neighbors(i, knn);
            if let Some((d, _)) = nbrs.first() {
                mesh = mesh.max(*d);
            }
            for (_, j) in nbrs {
                pairs.push((i, j));
            }
        }
        for (i, j) in pairs {
            net.adjacency[i].push(j);
            net.adjacency[j].push(i);
        }
        for a in &mut net.adjacency {
            a.sort_unstable();
            a.dedup();
        }
        net.mesh = mesh;
        net.repair_connectivity()?;
        let ends = net.hop_closure();
        let logs = ends
            .iter()
            .map(|&(a, b)| net.relative_log(a as usize, b as usize))
            .collect();
        net.edges = EdgeSet::new(net.nodes.len(), ends, logs);
        if !(net.mesh > 0.0) {
            return Err(Error::InvalidArgument("net has coincident nodes".into()));
        }
        Ok(net)
    }

    /// The `k` nearest other nodes of node `i` under `g_I`, as
    /// (distance, index), ascending.
    pub fn neighbors(&self, i: usize, k: usize) -> Vec<(f64, usize)> {
        let p = self.nodes[i];
        let mut cands = self.tree.knn(&p, k, Some(i));
        if self.quotient {
            cands.extend(self.tree.knn(&neg(&p), k, Some(i)));
            cands.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.total_cmp(&b.0)));
            cands.dedup_by_key(|c| c.1);
            cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            cands.truncate(k);
        }
        cands
            .into_iter()
            .map(|(c2, j)| (self.angle_from_chord(c2), j))
            .collect()
    }

    fn angle_from_chord(&self, c2: f64) -> f64 {
        let a = chord_to_angle(c2);
        if self.quotient {
            a.min(PI - a)
        } else {
            a
        }
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        let a = chord_to_angle(chord_sq(&self.nodes[i], &self.nodes[j]));
        if self.quotient {
            a.min(PI - a)
        } else {
            a
        }
    }

    /// `log(p_i⁻¹ p_j)`, taking the shorter lift on SO(3).
    fn relative_log(&self, i: usize, j: usize) -> [f64; 3] {
        let mut r = lie::quat_mul(&lie::quat_conj(&self.nodes[i]), &self.nodes[j]);
        if self.quotient && r[0] < 0.0 {
            r = neg(&r);
        }
        let (v, _) = lie::quat_log(&r);
        [v[0], v[1], v[2]]
    }

    /// Pairs `i < j` joined by a path of at most `hops` kNN edges.
    fn hop_closure(&self) -> Vec<(u32, u32)> {
        let n = self.nodes.len();
        let mut stamp = vec![usize::MAX; n];
        let mut ends = Vec::new();
        let mut frontier = Vec::new();
        let mut next = Vec::new();
        for i in 0..n {
            stamp[i] = i;
            frontier.clear();
            frontier.push(i);
            for _ in 0..self.hops {
                next.clear();
                for &u in &frontier {
                    for &v in &self.adjacency[u] {
                        if stamp[v] != i {
                            stamp[v] = i;
                            next.push(v);
                            if v > i {
                                ends.push((i as u32, v as u32));
                            }
                        }
                    }
                }
                std::mem::swap(&mut frontier, &mut next);
            }
        }
        ends
    }

    fn components(&self) -> Vec<usize> {
        let n = self.nodes.len();
        let mut comp = vec![usize::MAX; n];
        let mut c = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = c;
            while let Some(u) = stack.pop() {
                for &v in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = c;
                        stack.push(v);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    /// Join components to the one holding the identity by shortest links.
    fn repair_connectivity(&mut self) -> Result<()> {
        for _ in 0..self.nodes.len() {
            let comp = self.components();
            let Some(stray) = comp.iter().position(|c| *c != comp[0]) else {
                return Ok(());
            };
            let target = comp[stray];
            let mut best = (f64::INFINITY, 0, 0);
            for i in (0..self.nodes.len()).filter(|i| comp[*i] == target) {
                for j in (0..self.nodes.len()).filter(|j| comp[*j] != target) {
                    let d = self.distance(i, j);
                    if d < best.0 {
                        best = (d, i, j);
                    }
                }
            }
            let (_, i, j) = best;
            self.adjacency[i].push(j);
            self.adjacency[j].push(i);
            self.repairs += 1;
        }
        let unreachable = self.components().iter().filter(|c| **c != 0).count();
        Err(Error::Disconnected { unreachable })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[[f64; 4]] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> GroupElement {
        if self.quotient {
            GroupElement::so3(self.nodes[i])
        } else {
            GroupElement::su2(self.nodes[i])
        }
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.adjacency
    }

    /// Largest nearest-neighbor distance under `g_I`.
    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn knn(&self) -> usize {
        self.knn
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Edges added to connect the kNN graph.
    pub fn repairs(&self) -> usize {
        self.repairs
    }

    /// Hop radius of the search edges.
    pub fn hops(&self) -> usize {
        self.hops
    }

    /// Number of undirected search edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|c| *c == 0)
    }

    pub fn group_key(&self) -> &'static str {
        if self.quotient {
            "so3"
        } else {
            "su2"
        }
    }

    fn check_entry(&self, entry: &LieGroupCatalogEntry) -> Result<()> {
        if net_quotient(entry)? != self.quotient {
            return Err(Error::InvalidArgument(format!(
                "net was built for {}, not {}",
                self.group_key(),
                entry.key()
            )));
        }
        Ok(())
    }

    fn params(&self) -> DiameterParams {
        DiameterParams {
            net_size: Some(self.len()),
            knn: Some(self.knn),
            hops: Some(self.hops),
            net_seed: self.seed,
            ..Default::default()
        }
    }

    /// Node count, then one unit quaternion per line.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        writeln!(f, "{}", self.nodes.len())?;
        for q in &self.nodes {
            writeln!(f, "{} {} {} {}", q[0], q[1], q[2], q[3])?;
        }
        f.flush()?;
        Ok(())
    }

    /// Reads nodes written by [`Net::save`] and rebuilds the adjacency.
    pub fn load(path: &Path, entry: &LieGroupCatalogEntry, knn: usize, hops: usize) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty net file".into()))?
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("node count: {e}")))?;
        let mut nodes = Vec::with_capacity(n);
        for (k, line) in lines.enumerate() {
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("line {}: {e}", k + 2))))
                .collect::<Result<_>>()?;
            if vals.len() != 4 || vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse(format!("line {}: expected 4 finite floats", k + 2)));
            }
            nodes.push([vals[0], vals[1], vals[2], vals[3]]);
        }
        if nodes.len() != n {
            return Err(Error::Parse(format!("expected {n} nodes, found {}", nodes.len())));
        }
        Self::from_nodes(entry, nodes, knn, hops, None)
    }
}

#[derive(PartialEq)]
struct QueueItem {
    dist: f64,
    node: usize,
}

impl Eq for QueueItem {}

impl Ord for QueueItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for QueueItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths from node 0 with one weight per undirected
/// edge; infinite weights are absent edges.
fn dijkstra(edges: &EdgeSet, weights: &[f64]) -> Vec<f64> {
    let n = edges.offsets.len() - 1;
    let mut dist = vec![f64::INFINITY; n];
    dist[0] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(QueueItem { dist: 0.0, node: 0 });
    while let Some(QueueItem { dist: d, node: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in &edges.targets[edges.offsets[u]..edges.offsets[u + 1]] {
            let v = v as usize;
            let nd = d + weights[e as usize];
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(QueueItem { dist: nd, node: v });
            }
        }
    }
    dist
}

fn farthest(net: &Net, dist: &[f64]) -> Result<(usize, f64)> {
    let unreachable = dist.iter().filter(|d| !d.is_finite()).count();
    if unreachable > 0 {
        return Err(Error::Disconnected { unreachable });
    }
    let mut best = (0, 0.0);
    for (i, d) in dist.iter().enumerate() {
        if *d > best.1 {
            best = (i, *d);
        }
    }
    debug_assert!(best.0 < net.len());
    Ok(best)
}

/// Graph diameter of `g_A` on a net, with the default allowance.
pub fn graph_diameter(entry: &LieGroupCatalogEntry, spec: &MetricSpec, net: &Net) -> Result<DiameterEstimate> {
    graph_diameter_eps(entry, spec, net, DEFAULT_EPS_NET)
}

/// Largest shortest-path distance from the identity, edges weighted by
/// `‖log(p⁻¹q)‖_{g_A}`. `upper = value`, `lower = value·(1 − eps)`.
pub fn graph_diameter_eps(
    entry: &LieGroupCatalogEntry,
    spec: &MetricSpec,
    net: &Net,
    eps: f64,
) -> Result<DiameterEstimate> {
    net.check_entry(entry)?;
    if spec.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: spec.dim(),
        });
    }
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument("eps must lie in [0, 1)".into()));
    }
    let g = spec.gram();
    let weights: Vec<f64> = net
        .edges
        .logs
        .iter()
        .map(|v| g.quadratic_form(v).sqrt())
        .collect();
    let dist = dijkstra(&net.edges, &weights);
    let (i, value) = farthest(net, &dist)?;
    Ok(DiameterEstimate {
        value,
        lower: value * (1.0 - eps),
        upper: value,
        method: DiameterMethod::GeodesicGraph,
        params: net.params(),
        farthest_point: net.node(i),
        heuristic: false,
    })
}

/// Sub-Riemannian diameter estimate for the distribution `H` with inner
/// product `h` (Gram matrix in the spanning set `h_basis`).
///
/// Candidate edges join each node to its `n_directions` nearest neighbors
/// (plus the net's own edges). An edge with `v = log(p⁻¹q) = v_H + v_⊥` is
/// kept when `‖v_⊥‖ ≤ η‖v‖` and weighted `‖v_H‖_h·(1 + ‖v_⊥‖/‖v_H‖)`. The
/// upper end is heuristic; the lower end is the certified
/// `√μ·max_node d_I(e, node)` with `μ` the least eigenvalue of `h` relative
/// to `g_I` on `H`.
pub fn horizontal_graph_diameter(
    entry: &LieGroupCatalogEntry,
    h_basis: &[Vec<f64>],
    h: &Matrix,
    net: &Net,
    n_directions: usize,
) -> Result<DiameterEstimate> {
    horizontal_graph_diameter_eta(entry, h_basis, h, net, n_directions, DEFAULT_ETA)
}

pub fn horizontal_graph_diameter_eta(
    entry: &LieGroupCatalogEntry,
    h_basis: &[Vec<f64>],
    h: &Matrix,
    net: &Net,
    n_directions: usize,
    eta: f64,
) -> Result<DiameterEstimate> {
    net.check_entry(entry)?;
    let r = h_basis.len();
    if r == 0 || h_basis.iter().any(|v| v.len() != 3) {
        return Err(Error::InvalidArgument("H basis must be nonempty 3-vectors".into()));
    }
    if h.rows() != r || h.cols() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            found: h.rows(),
        });
    }
    if linalg::rank(h_basis, lie::RANK_REL_TOL) != r {
        return Err(Error::InvalidArgument("H basis is linearly dependent".into()));
    }
    if !lie::is_bracket_generating(entry, h_basis)? {
        return Err(Error::InvalidArgument("H is not bracket generating".into()));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::InvalidArgument("eta must lie in (0, 1]".into()));
    }
    let b = Matrix::from_columns(h_basis)?;
    let btb = &b.transpose() * &b;
    let btb_inv = btb.inverse()?;
    // Coefficients of the projection: c = (BᵀB)⁻¹Bᵀv.
    let coef = &btb_inv * &b.transpose();
    let w = (&(&coef.transpose() * h) * &coef).symmetrize();
    let proj = &b * &coef;
    let rch = lattice::cholesky_upper(&btb.symmetrize())?;
    let rinv = rch.inverse()?;
    let rel = (&(&rinv.transpose() * h) * &rinv).symmetrize();
    let mu = linalg::symmetric_eigen(&rel)?.min();
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument("h must be positive definite".into()));
    }

    let n = net.len();
    let mut ends = net.edges.ends.clone();
    for i in 0..n {
        for (_, j) in net.neighbors(i, n_directions.min(n - 1)) {
            ends.push((i.min(j) as u32, i.max(j) as u32));
        }
    }
    ends.sort_unstable();
    ends.dedup();
    let logs: Vec<[f64; 3]> = ends
        .iter()
        .map(|&(a, b)| net.relative_log(a as usize, b as usize))
        .collect();
    let weights: Vec<f64> = logs
        .iter()
        .map(|v| {
            let vn = linalg::norm(v);
            let vh = proj.matvec(v);
            let vhn = linalg::norm(&vh);
            let perp = ((vn * vn - vhn * vhn).max(0.0)).sqrt();
            if vhn == 0.0 || perp > eta * vn {
                f64::INFINITY
            } else {
                w.quadratic_form(v).max(0.0).sqrt() * (1.0 + perp / vhn)
            }
        })
        .collect();
    let edges = EdgeSet::new(n, ends, logs);
    let dist = dijkstra(&edges, &weights);
    let (i, value) = farthest(net, &dist)?;
    let mut far_i = 0.0_f64;
    for k in 0..n {
        far_i = far_i.max(net.distance(0, k));
    }
    Ok(DiameterEstimate {
        value,
        lower: (mu.sqrt() * far_i).min(value),
        upper: value,
        method: DiameterMethod::HorizontalGraph,
        params: DiameterParams {
            n_directions: Some(n_directions),
            ..net.params()
        },
        farthest_point: net.node(i),
        heuristic: true,
    })
}
