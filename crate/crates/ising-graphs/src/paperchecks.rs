//! The quantities this crate exists to compute: the minimal two-point
//! function κ_β(n) and its supermultiplicativity, the Fekete root limit and
//! the growth-vs-susceptibility inequality, volume/β monotonicity profiles,
//! the averaged pair-correlation functional C2, the K_n witness-set
//! construction, the subcritical decay-rate surrogate ρ, and β_c
//! estimation.
//!
//! Everything here is pure orchestration over the `exact` and `mc` engines.
//! Exact values carry zero-width intervals; Monte Carlo values carry
//! 95% confidence bounds, and any minimum over noisy estimates reports both
//! the minimum of means and the conservative minimum of lower bounds
//! (a minimum over estimates is biased low, so the bracket matters).

use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{
    enumerate_with_cap, interaction_is_acyclic, tree_correlations_from, ExactError, Observable,
    DEFAULT_ENUMERATION_CAP,
};
use crate::graphs::{Family, Graph, GraphError, VertexSet};
use crate::mc::{
    binning_stats, fk_indicator_series, fk_two_point_labeled, wolff_binder, BinderEstimate,
    McError, Method,
};
use crate::model::{Couplings, CouplingTable, GibbsParams, ModelError};

/// Balls used for κ/C2 are kept this many radii clear of the generation
/// boundary, so every reported pair lives in a region whose neighborhoods
/// are complete out to distance ≥ 2 beyond the largest pair distance.
pub const SATURATION_MARGIN: u32 = 2;

/// Tolerance for inequality checks on exact values (supermultiplicativity,
/// monotonicity): pure floating-point slack, no statistical content.
pub const EXACT_INEQ_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum PaperError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("sphere of radius {radius} (n = {n}) is empty; the graph is too small")]
    EmptySphere { n: u32, radius: u32 },
    #[error("monotonicity violated along {axis}: {detail}")]
    MonotonicityViolated { axis: &'static str, detail: String },
    #[error("no Binder crossing inside the β grid: {0}")]
    NoCrossing(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Mc(#[from] McError),
}

/// Which engine evaluates two-point functions.
#[derive(Clone, Copy, Debug)]
pub enum Engine {
    /// Closed form on acyclic interaction graphs (any size), Gray-code
    /// enumeration otherwise, with the given free-vertex cap.
    Exact { cap: usize },
    /// FK same-cluster estimation with the given sweep budget and master
    /// seed; every value carries 95% confidence bounds.
    Mc { sweeps: u64, seed: u64 },
}

impl Engine {
    pub fn exact_default() -> Self {
        Engine::Exact {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Engine::Exact { .. } => Method::Exact,
            Engine::Mc { .. } => Method::Fk,
        }
    }
}

/// A two-point value with its interval: exact values have lo = hi = value,
/// MC values carry the 95% band.
#[derive(Clone, Copy, Debug)]
pub struct PairValue {
    pub y: u32,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

/// ⟨σ_x σ_y⟩ for every target, free boundary, h = 0, through the chosen
/// engine. The workhorse behind κ, the growth bound, C2, and K_n.
fn two_point_profile(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    x: u32,
    targets: &[u32],
    engine: Engine,
    stream_label: &str,
) -> Result<Vec<PairValue>, PaperError> {
    match engine {
        Engine::Exact { cap } => {
            if interaction_is_acyclic(table) {
                let corr = tree_correlations_from(g, table, beta, x)?;
                Ok(targets
                    .iter()
                    .map(|&y| {
                        let v = corr[y as usize];
                        PairValue {
                            y,
                            value: v,
                            lo: v,
                            hi: v,
                        }
                    })
                    .collect())
            } else {
                let obs: Vec<Observable> =
                    targets.iter().map(|&y| Observable::pair(x, y)).collect();
                let params = GibbsParams::free(beta);
                let res = enumerate_with_cap(g, table, &params, &obs, cap)?;
                Ok(targets
                    .iter()
                    .zip(&obs)
                    .map(|(&y, ob)| {
                        let v = res.observables[ob];
                        PairValue {
                            y,
                            value: v,
                            lo: v,
                            hi: v,
                        }
                    })
                    .collect())
            }
        }
        Engine::Mc { sweeps, seed } => {
            let pairs: Vec<(u32, u32)> = targets.iter().map(|&y| (x, y)).collect();
            let ests = fk_two_point_labeled(g, table, beta, &pairs, sweeps, seed, stream_label)?;
            Ok(targets
                .iter()
                .zip(&ests)
                .map(|(&y, e)| {
                    let (lo, hi) = e.estimate.ci95();
                    PairValue {
                        y,
                        value: e.estimate.mean,
                        lo: lo.max(0.0),
                        hi: hi.min(1.0),
                    }
                })
                .collect())
        }
    }
}

/// One κ value: the minimum over the radius-n ball.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct KappaValue {
    pub n: u32,
    /// Minimum of the (exact or mean) estimates over the ball.
    pub value: f64,
    /// Conservative bracket: minimum of lower bounds / minimum of upper
    /// bounds. Exact provenance collapses the bracket to the value.
    pub lo: f64,
    pub hi: f64,
    /// Lowest-id vertex attaining the minimum of `value`.
    pub argmin: u32,
    pub provenance: Method,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct KappaSeries {
    pub beta: f64,
    pub origin: u32,
    pub values: Vec<KappaValue>,
}

impl KappaSeries {
    pub fn n_max(&self) -> u32 {
        self.values.len() as u32 - 1
    }

    pub fn value(&self, n: u32) -> f64 {
        self.values[n as usize].value
    }
}

/// κ_β(n) = min over y in the radius-n ball around x of ⟨σ_x σ_y⟩ under
/// the free, zero-field measure, for n = 0..=n_max. One engine pass serves
/// the whole series; ties break to the lowest vertex id.
pub fn kappa(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    x: u32,
    n_max: u32,
    engine: Engine,
) -> Result<KappaSeries, PaperError> {
    g.require_unsaturated(x, n_max)?;
    let dist = g.distances_from(x);
    let targets: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| dist[v as usize] <= n_max)
        .collect();
    let profile = two_point_profile(g, table, beta, x, &targets, engine, "kappa")?;
    let mut values = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        // value/argmin take the minimum of the point estimates (strict <
        // over ascending ids breaks ties to the lowest id); the bracket
        // folds the minima of the lower and upper bounds independently,
        // since min-of-estimates is biased low and each bound is itself a
        // valid bound for the minimum.
        let (mut value, mut lo, mut hi) = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut argmin = u32::MAX;
        for pv in &profile {
            if dist[pv.y as usize] > n {
                continue;
            }
            if pv.value < value {
                value = pv.value;
                argmin = pv.y;
            }
            lo = lo.min(pv.lo);
            hi = hi.min(pv.hi);
        }
        values.push(KappaValue {
            n,
            value,
            lo,
            hi,
            argmin,
            provenance: engine.method(),
        });
    }
    Ok(KappaSeries {
        beta,
        origin: x,
        values,
    })
}

/// A reported failure of κ(m+n) ≥ κ(m)κ(n).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SupermultViolation {
    pub m: u32,
    pub n: u32,
    /// κ(m+n)
    pub lhs: f64,
    /// κ(m)·κ(n)
    pub rhs: f64,
    /// rhs − lhs (> tolerance)
    pub deficit: f64,
}

/// Tests κ(m+n) ≥ κ(m)·κ(n) for every 1 ≤ m ≤ n with m + n ≤ n_max and
/// returns the violations (empty = pass). Exact series are compared with
/// the given floating-point tolerance; MC series are compared with CI
/// slack (violation only when the upper bound at m+n undercuts the product
/// of lower bounds), so the result is advisory rather than statistical
/// proof — finite-volume failures are reported, not asserted as bugs.
pub fn check_supermultiplicative(series: &KappaSeries, tol: f64) -> Vec<SupermultViolation> {
    let exact = series
        .values
        .iter()
        .all(|v| v.provenance == Method::Exact);
    let mut violations = Vec::new();
    let n_max = series.n_max();
    for m in 1..=n_max {
        for n in m..=n_max {
            if m + n > n_max {
                break;
            }
            let (lhs, rhs) = if exact {
                (series.value(m + n), series.value(m) * series.value(n))
            } else {
                (
                    series.values[(m + n) as usize].hi,
                    series.values[m as usize].lo * series.values[n as usize].lo,
                )
            };
            if lhs < rhs - tol {
                violations.push(SupermultViolation {
                    m,
                    n,
                    lhs,
                    rhs,
                    deficit: rhs - lhs,
                });
            }
        }
    }
    violations
}

/// The Fekete-lemma view of a κ series: per-n roots κ(n)^{1/n}, their
/// running supremum, and the tail root as the finite surrogate for
/// lim κ(n)^{1/n}.
#[derive(Clone, Debug, serde::Serialize)]
pub struct FeketeReport {
    /// (n, κ(n)^{1/n}) for n ≥ 1; negative κ (floating noise) is floored
    /// at 0 before taking roots.
    pub roots: Vec<(u32, f64)>,
    pub running_sup: Vec<f64>,
    pub sup: f64,
    /// Root at the largest n, the limit surrogate.
    pub tail: f64,
}

pub fn fekete_limit(series: &KappaSeries) -> Result<FeketeReport, PaperError> {
    if series.n_max() < 3 {
        return Err(PaperError::InvalidParam(
            "fekete_limit needs a series with n_max >= 3".into(),
        ));
    }
    let mut roots = Vec::new();
    let mut running_sup = Vec::new();
    let mut sup = f64::NEG_INFINITY;
    for v in series.values.iter().skip(1) {
        let root = v.value.max(0.0).powf(1.0 / v.n as f64);
        sup = sup.max(root);
        roots.push((v.n, root));
        running_sup.push(sup);
    }
    let tail = roots.last().unwrap().1;
    Ok(FeketeReport {
        roots,
        running_sup,
        sup,
        tail,
    })
}

/// One row of the growth-bound table: κ(n)·|Λ_n| against the partial
/// susceptibility Σ_{y ∈ Λ_n} ⟨σ_x σ_y⟩. The inequality
/// κ(n)·|Λ_n| ≤ partial susceptibility is min·count ≤ sum, an algebraic
/// identity for exact values.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct GrowthBoundRow {
    pub n: u32,
    pub ball_size: usize,
    pub kappa: f64,
    pub kappa_times_ball: f64,
    pub partial_susceptibility: f64,
    pub susceptibility_lo: f64,
    pub susceptibility_hi: f64,
}

pub fn growth_bound_check(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    x: u32,
    n_max: u32,
    engine: Engine,
) -> Result<Vec<GrowthBoundRow>, PaperError> {
    g.require_unsaturated(x, n_max)?;
    let dist = g.distances_from(x);
    let targets: Vec<u32> = (0..g.vertex_count() as u32)
        .filter(|&v| dist[v as usize] <= n_max)
        .collect();
    let profile = two_point_profile(g, table, beta, x, &targets, engine, "growth")?;
    let mut rows = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let mut kappa_n = f64::INFINITY;
        let (mut count, mut sum, mut sum_lo, mut sum_hi) = (0usize, 0.0, 0.0, 0.0);
        for pv in &profile {
            if dist[pv.y as usize] > n {
                continue;
            }
            kappa_n = kappa_n.min(pv.value);
            count += 1;
            sum += pv.value;
            sum_lo += pv.lo;
            sum_hi += pv.hi;
        }
        rows.push(GrowthBoundRow {
            n,
            ball_size: count,
            kappa: kappa_n,
            kappa_times_ball: kappa_n * count as f64,
            partial_susceptibility: sum,
            susceptibility_lo: sum_lo,
            susceptibility_hi: sum_hi,
        });
    }
    Ok(rows)
}

/// Exact two-point values across nested volumes (rows) and a β grid
/// (columns), asserting that both axes are nondecreasing. This is the
/// finite, literally testable content of the claim that the infinite-
/// volume two-point function is a supremum of increasing continuous
/// functions of β.
///
/// Each volume carries its own (x, y) pair — vertex ids are not stable
/// across generated volumes, so the caller names the same physical pair in
/// each one (for boxes, [`Graph::box_offset_vertex`] does this).
#[derive(Clone, Debug, serde::Serialize)]
pub struct MonotonicityProfile {
    pub beta_grid: Vec<f64>,
    pub volume_labels: Vec<String>,
    /// values[i][j] = ⟨σ_x σ_y⟩ in volume i at β_j
    pub values: Vec<Vec<f64>>,
}

pub fn monotonicity_profile(
    volumes: &[(&Graph, (u32, u32))],
    couplings: &Couplings,
    beta_grid: &[f64],
    cap: usize,
) -> Result<MonotonicityProfile, PaperError> {
    if volumes.is_empty() || beta_grid.is_empty() {
        return Err(PaperError::InvalidParam(
            "need at least one volume and one β".into(),
        ));
    }
    if beta_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PaperError::InvalidParam("β grid must be increasing".into()));
    }
    let mut values = Vec::with_capacity(volumes.len());
    let mut labels = Vec::with_capacity(volumes.len());
    for &(g, (x, y)) in volumes {
        let table = CouplingTable::build(g, couplings)?;
        let ob = Observable::pair(x, y);
        let mut row = Vec::with_capacity(beta_grid.len());
        for &beta in beta_grid {
            let params = GibbsParams::free(beta);
            let res = enumerate_with_cap(g, &table, &params, &[ob], cap)?;
            row.push(res.observables[&ob]);
        }
        values.push(row);
        labels.push(g.id_string());
    }
    for (i, row) in values.iter().enumerate() {
        for j in 1..row.len() {
            if row[j] < row[j - 1] - EXACT_INEQ_TOL {
                return Err(PaperError::MonotonicityViolated {
                    axis: "beta",
                    detail: format!(
                        "volume {} at β {} -> {}: {} -> {}",
                        labels[i],
                        beta_grid[j - 1],
                        beta_grid[j],
                        row[j - 1],
                        row[j]
                    ),
                });
            }
        }
    }
    for i in 1..values.len() {
        for j in 0..beta_grid.len() {
            if values[i][j] < values[i - 1][j] - EXACT_INEQ_TOL {
                return Err(PaperError::MonotonicityViolated {
                    axis: "volume",
                    detail: format!(
                        "β = {}: {} ({}) -> {} ({})",
                        beta_grid[j],
                        values[i - 1][j],
                        labels[i - 1],
                        values[i][j],
                        labels[i]
                    ),
                });
            }
        }
    }
    Ok(MonotonicityProfile {
        beta_grid: beta_grid.to_vec(),
        volume_labels: labels,
        values,
    })
}

/// An averaged pair correlation with its interval and provenance.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct C2Value {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub provenance: Method,
}

/// C2(K) = |K|⁻² Σ_{x,y ∈ K} ⟨σ_x σ_y⟩ over *ordered* pairs including the
/// diagonal (so C2 ≥ 1/|K| always). Exact engines evaluate the pair sums
/// directly; the MC engine bins the per-sample scalar
/// (|K| + 2 Σ_{x<y} 1[x,y same cluster]) / |K|², which respects the strong
/// correlations between pair indicators from a shared clustering.
pub fn c2_functional(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    k_set: &VertexSet,
    engine: Engine,
    stream_label: &str,
) -> Result<C2Value, PaperError> {
    if k_set.is_empty() {
        return Err(PaperError::InvalidParam("C2 of an empty set".into()));
    }
    for v in k_set.iter() {
        if (v as usize) >= g.vertex_count() {
            return Err(PaperError::InvalidParam(format!("vertex {v} outside the graph")));
        }
        if g.is_generation_boundary(v) {
            return Err(PaperError::InvalidParam(format!(
                "vertex {v} lies on the generation boundary; its correlations are biased"
            )));
        }
    }
    let k = k_set.len();
    let members: Vec<u32> = k_set.iter().collect();
    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            pairs.push((members[i], members[j]));
        }
    }
    let ksq = (k * k) as f64;
    match engine {
        Engine::Exact { cap } => {
            let mut sum = k as f64; // diagonal terms
            if interaction_is_acyclic(table) {
                for i in 0..k {
                    let corr = tree_correlations_from(g, table, beta, members[i])?;
                    for j in (i + 1)..k {
                        sum += 2.0 * corr[members[j] as usize];
                    }
                }
            } else if !pairs.is_empty() {
                let obs: Vec<Observable> =
                    pairs.iter().map(|&(x, y)| Observable::pair(x, y)).collect();
                let params = GibbsParams::free(beta);
                let res = enumerate_with_cap(g, table, &params, &obs, cap)?;
                for ob in &obs {
                    sum += 2.0 * res.observables[ob];
                }
            }
            let value = sum / ksq;
            Ok(C2Value {
                value,
                lo: value,
                hi: value,
                provenance: Method::Exact,
            })
        }
        Engine::Mc { sweeps, seed } => {
            if pairs.is_empty() {
                return Ok(C2Value {
                    value: 1.0,
                    lo: 1.0,
                    hi: 1.0,
                    provenance: Method::Fk,
                });
            }
            let series = fk_indicator_series(g, table, beta, &pairs, sweeps, seed, stream_label)?;
            let n_samples = series[0].len();
            let scalar: Vec<f64> = (0..n_samples)
                .map(|t| {
                    let open: usize = series.iter().filter(|s| s.get(t)).count();
                    (k as f64 + 2.0 * open as f64) / ksq
                })
                .collect();
            let est = binning_stats(&scalar, Method::Fk)?;
            let (lo, hi) = est.ci95();
            Ok(C2Value {
                value: est.mean,
                lo: lo.max(1.0 / k as f64),
                hi: hi.min(1.0),
                provenance: Method::Fk,
            })
        }
    }
}

/// One K_n row of a [`C2Report`].
#[derive(Clone, Debug, serde::Serialize)]
pub struct C2Entry {
    pub n: u32,
    pub set: VertexSet,
    pub c2: C2Value,
}

/// Result of the K_n construction: witnesses x_n on spheres of radius k^n,
/// their nested sets K_n, C2(K_n) values, and the fit C2(K_n) ≈ C/n.
#[derive(Clone, Debug, serde::Serialize)]
pub struct C2Report {
    pub beta: f64,
    pub k: u32,
    /// min over edge orbits of the adjacent two-point function ("c").
    pub c_min_edge: f64,
    pub c_lo: f64,
    pub c_hi: f64,
    /// x_1, x_2, ..., x_N.
    pub witnesses: Vec<u32>,
    pub entries: Vec<C2Entry>,
    /// Least-squares C in C2(K_n) ≈ C/n.
    pub fitted_c: f64,
    /// max_n |C2(K_n) − C/n| / (C/n).
    pub max_relative_residual: f64,
    pub provenance: Method,
}

/// Builds the witness sets K_n = {x_1, …, x_n}, where x_n minimizes the
/// two-point estimate to x_1 over the sphere of radius k^n (ties to the
/// lowest id), and evaluates C2(K_n) for n = 1..=N.
///
/// Under the MC engine the selection pass and the estimation pass run on
/// separately labeled streams: reusing the selection samples would bias
/// the chosen minima low.
pub fn construct_kn(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    x1: u32,
    k: u32,
    n_big: u32,
    engine: Engine,
) -> Result<C2Report, PaperError> {
    if k < 2 {
        return Err(PaperError::InvalidParam(format!("k must be >= 2, got {k}")));
    }
    if n_big < 1 {
        return Err(PaperError::InvalidParam("N must be >= 1".into()));
    }
    let max_radius = (k as u64)
        .checked_pow(n_big)
        .filter(|&r| r <= u32::MAX as u64)
        .ok_or_else(|| PaperError::InvalidParam(format!("k^N = {k}^{n_big} overflows")))?
        as u32;
    if n_big > 1 {
        g.require_unsaturated(x1, max_radius + SATURATION_MARGIN)?;
    }
    let dist = g.distances_from(x1);

    // Sphere targets for each n, all estimated in one engine pass.
    let mut sphere_targets: Vec<Vec<u32>> = Vec::new();
    let mut all_targets: Vec<u32> = Vec::new();
    for n in 2..=n_big {
        let radius = (k as u32).pow(n);
        let sphere: Vec<u32> = (0..g.vertex_count() as u32)
            .filter(|&v| dist[v as usize] == radius)
            .collect();
        if sphere.is_empty() {
            return Err(PaperError::EmptySphere { n, radius });
        }
        all_targets.extend(&sphere);
        sphere_targets.push(sphere);
    }
    let selection = two_point_profile(g, table, beta, x1, &all_targets, engine, "kn-select")?;
    let value_of: std::collections::HashMap<u32, f64> =
        selection.iter().map(|pv| (pv.y, pv.value)).collect();

    let mut witnesses = vec![x1];
    for sphere in &sphere_targets {
        let x_n = *sphere
            .iter()
            .min_by(|&&a, &&b| {
                value_of[&a]
                    .partial_cmp(&value_of[&b])
                    .unwrap()
                    .then(a.cmp(&b))
            })
            .expect("sphere nonempty");
        witnesses.push(x_n);
    }

    // c = min over edge orbits of the adjacent correlation. One
    // representative interacting pair per (label orbit, J) class suffices
    // under automorphism invariance.
    let mut orbit_reps: Vec<(u32, u32)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for &(x, y, j) in table.pairs() {
        let key = (
            g.label(x).min(g.label(y)),
            g.label(x).max(g.label(y)),
            j.to_bits(),
        );
        if seen.insert(key) {
            orbit_reps.push((x, y));
        }
    }

    // Estimation pass on a fresh stream: C2 of each K_n plus the orbit
    // representatives for c.
    let (entries, c_vals) = match engine {
        Engine::Exact { .. } => {
            let mut entries = Vec::new();
            for n in 1..=n_big as usize {
                let set = VertexSet::new(witnesses[..n].to_vec());
                let c2 = c2_functional(g, table, beta, &set, engine, "kn-estimate")?;
                entries.push(C2Entry {
                    n: n as u32,
                    set,
                    c2,
                });
            }
            let c_profile: Vec<PairValue> = orbit_reps
                .iter()
                .map(|&(x, y)| {
                    two_point_profile(g, table, beta, x, &[y], engine, "kn-estimate")
                        .map(|v| v[0])
                })
                .collect::<Result<_, _>>()?;
            (entries, c_profile)
        }
        Engine::Mc { sweeps, seed } => {
            // One FK run measures every pair inside K_N and the orbit
            // representatives; per-sample scalars give each C2(K_n) a CI
            // that honors cross-pair correlations.
            let mut pairs: Vec<(u32, u32)> = Vec::new();
            let mut pair_index = std::collections::HashMap::new();
            for i in 0..witnesses.len() {
                for j in (i + 1)..witnesses.len() {
                    let p = (witnesses[i], witnesses[j]);
                    pair_index.insert(p, pairs.len());
                    pairs.push(p);
                }
            }
            let c_base = pairs.len();
            pairs.extend(&orbit_reps);
            let series =
                fk_indicator_series(g, table, beta, &pairs, sweeps, seed, "kn-estimate")?;
            let n_samples = series[0].len();
            let mut entries = Vec::new();
            for n in 1..=n_big as usize {
                let set = VertexSet::new(witnesses[..n].to_vec());
                if n == 1 {
                    entries.push(C2Entry {
                        n: 1,
                        set,
                        c2: C2Value {
                            value: 1.0,
                            lo: 1.0,
                            hi: 1.0,
                            provenance: Method::Fk,
                        },
                    });
                    continue;
                }
                let idx: Vec<usize> = (0..n)
                    .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                    .map(|(i, j)| pair_index[&(witnesses[i], witnesses[j])])
                    .collect();
                let ksq = (n * n) as f64;
                let scalar: Vec<f64> = (0..n_samples)
                    .map(|t| {
                        let open = idx.iter().filter(|&&p| series[p].get(t)).count();
                        (n as f64 + 2.0 * open as f64) / ksq
                    })
                    .collect();
                let est = binning_stats(&scalar, Method::Fk)?;
                let (lo, hi) = est.ci95();
                entries.push(C2Entry {
                    n: n as u32,
                    set,
                    c2: C2Value {
                        value: est.mean,
                        lo: lo.max(1.0 / n as f64),
                        hi: hi.min(1.0),
                        provenance: Method::Fk,
                    },
                });
            }
            let mut c_vals = Vec::new();
            for (i, &(_, y)) in orbit_reps.iter().enumerate() {
                let est = binning_stats(&series[c_base + i].to_f64(), Method::Fk)?;
                let (lo, hi) = est.ci95();
                c_vals.push(PairValue {
                    y,
                    value: est.mean,
                    lo: lo.max(0.0),
                    hi: hi.min(1.0),
                });
            }
            (entries, c_vals)
        }
    };

    let c_min = c_vals
        .iter()
        .min_by(|a, b| a.value.partial_cmp(&b.value).unwrap())
        .expect("at least one interacting pair");

    // Fit C2(K_n) ≈ C/n by least squares over n = 1..=N.
    let num: f64 = entries.iter().map(|e| e.c2.value / e.n as f64).sum();
    let den: f64 = entries.iter().map(|e| 1.0 / (e.n * e.n) as f64).sum();
    let fitted_c = num / den;
    let max_rel = entries
        .iter()
        .map(|e| {
            let model = fitted_c / e.n as f64;
            ((e.c2.value - model) / model).abs()
        })
        .fold(0.0, f64::max);

    Ok(C2Report {
        beta,
        k,
        c_min_edge: c_min.value,
        c_lo: c_min.lo,
        c_hi: c_min.hi,
        witnesses,
        entries,
        fitted_c,
        max_relative_residual: max_rel,
        provenance: engine.method(),
    })
}

/// Smallest integer k ≥ 2 with c ≥ ρ^k, mirroring the choice of k in the
/// K_n construction. Needs 0 < c and 0 < ρ < 1.
pub fn suggest_k(c: f64, rho: f64) -> Result<u32, PaperError> {
    if !(c > 0.0) || !(rho > 0.0 && rho < 1.0) {
        return Err(PaperError::InvalidParam(format!(
            "suggest_k needs c > 0 and 0 < ρ < 1, got c = {c}, ρ = {rho}"
        )));
    }
    if c >= 1.0 {
        return Ok(2);
    }
    let mut k = ((c.ln() / rho.ln()).ceil() as u32).max(2);
    while rho.powi(k as i32) > c {
        k += 1;
        if k > 4096 {
            return Err(PaperError::InvalidParam(
                "no k ≤ 4096 satisfies c ≥ ρ^k".into(),
            ));
        }
    }
    Ok(k)
}

/// Per-β supremum of κ(n)^{1/n}: the empirical surrogate for the
/// subcritical decay rate ρ < 1. Meaningful when the grid sits below the
/// β_c estimate — the caller owns that choice.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RhoReport {
    pub rows: Vec<(f64, f64)>,
    /// max over the grid of sup_n κ(n)^{1/n}
    pub max_sup: f64,
}

pub fn rho_bound(
    g: &Graph,
    table: &CouplingTable,
    x: u32,
    beta_grid: &[f64],
    n_max: u32,
    engine: Engine,
) -> Result<RhoReport, PaperError> {
    if beta_grid.is_empty() {
        return Err(PaperError::InvalidParam("empty β grid".into()));
    }
    let mut rows = Vec::with_capacity(beta_grid.len());
    let mut max_sup = 0.0f64;
    for &beta in beta_grid {
        let series = kappa(g, table, beta, x, n_max, engine)?;
        let fekete = fekete_limit(&series)?;
        max_sup = max_sup.max(fekete.sup);
        rows.push((beta, fekete.sup));
    }
    Ok(RhoReport { rows, max_sup })
}

/// Binder-cumulant β_c estimation across system sizes.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BetaCReport {
    /// U(β) per size, in input order.
    pub curves: Vec<(u32, Vec<BinderEstimate>)>,
    /// Interpolated crossing per adjacent size pair.
    pub crossings: Vec<((u32, u32), f64)>,
    /// Mean of the crossings.
    pub estimate: f64,
    /// Grid-resolution uncertainty: max of the grid spacing at the
    /// crossings and the spread between crossings.
    pub uncertainty: f64,
    /// For tree families, the recursion threshold artanh(1/(degree−1))/J,
    /// an independent oracle.
    pub tree_oracle: Option<f64>,
}

/// β where (degree−1)·tanh(βJ) = 1 — the ferromagnetic transition of the
/// degree-regular tree — solved by bisection to 1e-12.
pub fn tree_beta_c_oracle(degree: u32, j: f64) -> Result<f64, PaperError> {
    if degree < 3 || !(j > 0.0) {
        return Err(PaperError::InvalidParam(
            "tree oracle needs degree >= 3 and J > 0".into(),
        ));
    }
    let f = |beta: f64| (degree - 1) as f64 * (beta * j).tanh() - 1.0;
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while f(hi) < 0.0 {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(PaperError::InvalidParam("tree oracle failed to bracket".into()));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locates the first + → − sign change of U_small(β) − U_large(β) on the
/// grid and interpolates it linearly. Returns the crossing β and the local
/// grid spacing (the resolution of the estimate), or None when the
/// difference never changes sign.
pub fn binder_crossing(
    beta_grid: &[f64],
    small: &[BinderEstimate],
    large: &[BinderEstimate],
) -> Option<(f64, f64)> {
    for bi in 0..beta_grid.len().saturating_sub(1) {
        let d0 = small[bi].binder - large[bi].binder;
        let d1 = small[bi + 1].binder - large[bi + 1].binder;
        if d0 >= 0.0 && d1 < 0.0 {
            let t = d0 / (d0 - d1);
            let spacing = beta_grid[bi + 1] - beta_grid[bi];
            return Some((beta_grid[bi] + t * spacing, spacing));
        }
    }
    None
}

/// Binder cumulants over a sizes × β grid, each cell an independent keyed
/// Wolff run, evaluated in parallel and merged in key order.
pub fn binder_grid(
    family: &Family,
    j: f64,
    sizes: &[u32],
    beta_grid: &[f64],
    sweeps: u64,
    seed: u64,
) -> Result<Vec<(u32, Vec<BinderEstimate>)>, PaperError> {
    if beta_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PaperError::InvalidParam("β grid must be increasing".into()));
    }
    let couplings = Couplings::nearest_neighbor(j);
    let mut tasks = Vec::new();
    for (si, &size) in sizes.iter().enumerate() {
        for (bi, &beta) in beta_grid.iter().enumerate() {
            tasks.push((si, bi, size, beta));
        }
    }
    let results: Vec<(usize, usize, BinderEstimate)> = tasks
        .par_iter()
        .map(|&(si, bi, size, beta)| -> Result<_, PaperError> {
            let g = family.build(size)?;
            let table = CouplingTable::build(&g, &couplings)?;
            let est = wolff_binder(&g, &table, beta, sweeps, seed)?;
            Ok((si, bi, est))
        })
        .collect::<Result<_, _>>()?;
    let mut grid_of: Vec<Vec<Option<BinderEstimate>>> =
        vec![vec![None; beta_grid.len()]; sizes.len()];
    for (si, bi, est) in results {
        grid_of[si][bi] = Some(est);
    }
    Ok(sizes
        .iter()
        .zip(grid_of)
        .map(|(&s, row)| {
            (
                s,
                row.into_iter().map(|c| c.expect("every task ran")).collect(),
            )
        })
        .collect())
}

/// Adjacent-size crossings, their mean, and the grid-resolution
/// uncertainty, from precomputed Binder curves. Errors if any adjacent
/// pair never crosses on the grid.
pub fn crossings_from_curves(
    beta_grid: &[f64],
    curves: &[(u32, Vec<BinderEstimate>)],
) -> Result<(Vec<((u32, u32), f64)>, f64, f64), PaperError> {
    let mut crossings = Vec::new();
    let mut max_spacing = 0.0f64;
    for si in 0..curves.len() - 1 {
        match binder_crossing(beta_grid, &curves[si].1, &curves[si + 1].1) {
            Some((b, spacing)) => {
                crossings.push(((curves[si].0, curves[si + 1].0), b));
                max_spacing = max_spacing.max(spacing);
            }
            None => {
                return Err(PaperError::NoCrossing(format!(
                    "sizes {} and {}: U difference never changes sign on the grid",
                    curves[si].0,
                    curves[si + 1].0
                )))
            }
        }
    }
    let estimate = crossings.iter().map(|&(_, b)| b).sum::<f64>() / crossings.len() as f64;
    let spread = crossings
        .iter()
        .map(|&(_, b)| (b - estimate).abs())
        .fold(0.0, f64::max);
    Ok((crossings, estimate, spread.max(max_spacing)))
}

/// Estimates β_c as the crossing of Binder cumulants U_L(β) across sizes:
/// below β_c larger volumes have smaller U, above they have larger, so the
/// sign change of U_small − U_large brackets the critical point. Needs ≥ 3
/// sizes and ≥ 5 grid points; each (size, β) cell is an independent keyed
/// Wolff run, evaluated in parallel.
pub fn estimate_beta_c(
    family: &Family,
    j: f64,
    sizes: &[u32],
    beta_grid: &[f64],
    sweeps: u64,
    seed: u64,
) -> Result<BetaCReport, PaperError> {
    if sizes.len() < 3 {
        return Err(PaperError::InvalidParam("need at least 3 sizes".into()));
    }
    if beta_grid.len() < 5 {
        return Err(PaperError::InvalidParam("need at least 5 β grid points".into()));
    }
    let curves = binder_grid(family, j, sizes, beta_grid, sweeps, seed)?;
    let (crossings, estimate, uncertainty) = crossings_from_curves(beta_grid, &curves)?;
    let tree_oracle = match family {
        Family::Tree { degree } => Some(tree_beta_c_oracle(*degree, j)?),
        _ => None,
    };
    Ok(BetaCReport {
        curves,
        crossings,
        estimate,
        uncertainty,
        tree_oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_box, build_torus, build_tree_ball};

    fn nn_table(g: &Graph, j: f64) -> CouplingTable {
        CouplingTable::build(g, &Couplings::nearest_neighbor(j)).unwrap()
    }

    #[test]
    fn kappa_at_infinite_temperature() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let s = kappa(&g, &t, 0.0, 0, 3, Engine::exact_default()).unwrap();
        assert_eq!(s.value(0), 1.0);
        for n in 1..=3 {
            assert_eq!(s.value(n), 0.0);
        }
    }

    #[test]
    fn kappa_tree_is_tanh_power() {
        let g = build_tree_ball(3, 6).unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.3;
        let s = kappa(&g, &t, beta, 0, 4, Engine::exact_default()).unwrap();
        let dist = g.distances_from(0);
        for n in 0..=4u32 {
            let expect = beta.tanh().powi(n as i32);
            assert!((s.value(n) - expect).abs() < 1e-12, "n = {n}");
            assert_eq!(dist[s.values[n as usize].argmin as usize], n);
        }
    }

    #[test]
    fn kappa_is_nonincreasing() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let s = kappa(&g, &t, 0.44, 0, 4, Engine::exact_default()).unwrap();
        for w in s.values.windows(2) {
            assert!(w[1].value <= w[0].value + EXACT_INEQ_TOL);
        }
    }

    #[test]
    fn kappa_rejects_saturated_balls() {
        let g = build_tree_ball(3, 3).unwrap();
        let t = nn_table(&g, 1.0);
        assert!(matches!(
            kappa(&g, &t, 0.3, 0, 3, Engine::exact_default()),
            Err(PaperError::Graph(GraphError::Saturated { .. }))
        ));
    }

    #[test]
    fn kappa_mc_brackets_exact() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let exact = kappa(&g, &t, 0.44, 0, 2, Engine::exact_default()).unwrap();
        let mc = kappa(
            &g,
            &t,
            0.44,
            0,
            2,
            Engine::Mc {
                sweeps: 8000,
                seed: 5,
            },
        )
        .unwrap();
        for n in 0..=2usize {
            let e = exact.values[n].value;
            let m = &mc.values[n];
            assert!(m.lo <= m.value && m.value <= m.hi);
            // generous statistical slack: the bracket is per-pair 95%
            assert!(m.lo - 0.05 <= e && e <= m.hi + 0.05, "n = {n}: {e} vs [{}, {}]", m.lo, m.hi);
        }
    }

    #[test]
    fn supermultiplicativity_tree_and_synthetic() {
        let g = build_tree_ball(3, 8).unwrap();
        let t = nn_table(&g, 1.0);
        let s = kappa(&g, &t, 0.4, 0, 6, Engine::exact_default()).unwrap();
        assert!(check_supermultiplicative(&s, 1e-9).is_empty());

        let zero = kappa(&g, &t, 0.0, 0, 6, Engine::exact_default()).unwrap();
        assert!(check_supermultiplicative(&zero, 1e-9).is_empty());

        // Manufactured violator: κ(2) = 0.1 < κ(1)² = 0.25.
        let mut bad = s.clone();
        for (i, v) in bad.values.iter_mut().enumerate() {
            v.value = match i {
                0 => 1.0,
                1 => 0.5,
                _ => 0.1,
            };
        }
        bad.values.truncate(3);
        let violations = check_supermultiplicative(&bad, 1e-9);
        assert_eq!(violations.len(), 1);
        assert!((violations[0].deficit - 0.15).abs() < 1e-12);
    }

    #[test]
    fn fekete_on_tree_is_flat_at_tanh() {
        let g = build_tree_ball(3, 8).unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.3;
        let s = kappa(&g, &t, beta, 0, 6, Engine::exact_default()).unwrap();
        let f = fekete_limit(&s).unwrap();
        for &(n, root) in &f.roots {
            assert!((root - beta.tanh()).abs() < 1e-10, "n = {n}");
        }
        assert!((f.sup - beta.tanh()).abs() < 1e-10);
        assert!((f.tail - beta.tanh()).abs() < 1e-10);
    }

    #[test]
    fn fekete_synthetic_and_degenerate() {
        let g = build_tree_ball(3, 8).unwrap();
        let t = nn_table(&g, 1.0);
        let mut s = kappa(&g, &t, 0.0, 0, 5, Engine::exact_default()).unwrap();
        assert_eq!(fekete_limit(&s).unwrap().sup, 0.0);
        // synthetic ρ₀^n series
        let rho0: f64 = 0.37;
        for v in s.values.iter_mut() {
            v.value = rho0.powi(v.n as i32);
        }
        let f = fekete_limit(&s).unwrap();
        assert!((f.sup - rho0).abs() < 1e-12);

        let short = kappa(&g, &t, 0.3, 0, 2, Engine::exact_default()).unwrap();
        assert!(fekete_limit(&short).is_err());
    }

    #[test]
    fn growth_bound_rows_satisfy_inequality() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let rows = growth_bound_check(&g, &t, 0.44, 0, 4, Engine::exact_default()).unwrap();
        for r in &rows {
            assert!(r.kappa_times_ball <= r.partial_susceptibility + EXACT_INEQ_TOL);
        }
        // β = 0: partial susceptibility ≡ 1 (only the diagonal term)
        let rows0 = growth_bound_check(&g, &t, 0.0, 0, 4, Engine::exact_default()).unwrap();
        for r in &rows0 {
            assert_eq!(r.partial_susceptibility, 1.0);
        }
    }

    #[test]
    fn growth_bound_tree_layer_sums() {
        // Σ_{y ∈ Λ_n} ⟨σ_0 σ_y⟩ = 1 + Σ_{m=1..n} 3·2^{m−1} tanh(β)^m
        let g = build_tree_ball(3, 9).unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.3f64;
        let rows = growth_bound_check(&g, &t, beta, 0, 7, Engine::exact_default()).unwrap();
        for r in &rows {
            let mut expect = 1.0;
            for m in 1..=r.n {
                expect += 3.0 * 2f64.powi(m as i32 - 1) * beta.tanh().powi(m as i32);
            }
            assert!(
                (r.partial_susceptibility - expect).abs() < 1e-10,
                "n = {}",
                r.n
            );
        }
    }

    #[test]
    fn monotonicity_profile_nested_paths() {
        let boxes: Vec<Graph> = [3u32, 5, 7]
            .iter()
            .map(|&l| build_box(1, l).unwrap())
            .collect();
        let volumes: Vec<(&Graph, (u32, u32))> = boxes
            .iter()
            .map(|g| {
                let a = g.box_offset_vertex(&[-1]).unwrap();
                let b = g.box_offset_vertex(&[1]).unwrap();
                (g, (a, b))
            })
            .collect();
        let grid: Vec<f64> = (0..=5).map(|i| i as f64 * 0.2).collect();
        let profile =
            monotonicity_profile(&volumes, &Couplings::nearest_neighbor(1.0), &grid, 24).unwrap();
        // β = 0 column is exactly zero
        for row in &profile.values {
            assert_eq!(row[0], 0.0);
        }
        // paths are trees: the volume axis is constant (tanh²)
        for j in 0..grid.len() {
            for i in 1..profile.values.len() {
                assert!((profile.values[i][j] - profile.values[0][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn monotonicity_profile_strict_under_added_couplings() {
        // Adding the closing edge of the cycle strictly increases the
        // endpoint correlation (second Griffiths inequality), a strictness
        // cross-check the constant tree profiles cannot provide.
        let path = build_box(1, 4).unwrap();
        let cycle = build_torus(1, 4).unwrap();
        let volumes = vec![(&path, (0u32, 3u32)), (&cycle, (0u32, 3u32))];
        let grid = vec![0.2, 0.5, 0.8];
        let profile =
            monotonicity_profile(&volumes, &Couplings::nearest_neighbor(1.0), &grid, 24).unwrap();
        for j in 0..grid.len() {
            assert!(profile.values[1][j] > profile.values[0][j] + 1e-6);
        }
        // reversed order violates the volume axis and must error
        let reversed = vec![(&cycle, (0u32, 3u32)), (&path, (0u32, 3u32))];
        assert!(matches!(
            monotonicity_profile(&reversed, &Couplings::nearest_neighbor(1.0), &grid, 24),
            Err(PaperError::MonotonicityViolated { axis: "volume", .. })
        ));
    }

    #[test]
    fn c2_basics() {
        let g = build_torus(2, 3).unwrap();
        let t = nn_table(&g, 1.0);
        let single = c2_functional(
            &g,
            &t,
            0.8,
            &VertexSet::singleton(4),
            Engine::exact_default(),
            "",
        )
        .unwrap();
        assert_eq!(single.value, 1.0);

        let set = VertexSet::new(vec![0, 1, 4, 7]);
        let zero = c2_functional(&g, &t, 0.0, &set, Engine::exact_default(), "").unwrap();
        assert_eq!(zero.value, 0.25);
    }

    #[test]
    fn c2_single_edge_closed_form() {
        let g = Graph::from_parts(
            "custom",
            "edge",
            vec![vec![1], vec![0]],
            vec![0, 0],
            0,
            None,
            vec![false, false],
        )
        .unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.6f64;
        let c2 = c2_functional(
            &g,
            &t,
            beta,
            &VertexSet::new(vec![0, 1]),
            Engine::exact_default(),
            "",
        )
        .unwrap();
        assert!((c2.value - (2.0 + 2.0 * beta.tanh()) / 4.0).abs() < 1e-13);
    }

    #[test]
    fn c2_mc_agrees_with_exact() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let set = VertexSet::new(vec![0, 1, 5]);
        let exact = c2_functional(&g, &t, 0.44, &set, Engine::exact_default(), "").unwrap();
        let mc = c2_functional(
            &g,
            &t,
            0.44,
            &set,
            Engine::Mc {
                sweeps: 8000,
                seed: 11,
            },
            "",
        )
        .unwrap();
        assert!(mc.lo - 0.02 <= exact.value && exact.value <= mc.hi + 0.02);
        assert!(mc.value >= 1.0 / 3.0 - 1e-12);
    }

    #[test]
    fn c2_rejects_boundary_membership() {
        let g = build_tree_ball(3, 2).unwrap();
        let t = nn_table(&g, 1.0);
        let leaf = (g.vertex_count() - 1) as u32;
        assert!(matches!(
            c2_functional(
                &g,
                &t,
                0.3,
                &VertexSet::new(vec![0, leaf]),
                Engine::exact_default(),
                ""
            ),
            Err(PaperError::InvalidParam(_))
        ));
    }

    #[test]
    fn construct_kn_tree_exact() {
        // the ball of radius k^N + margin = 10 must clear the generation
        // boundary, so the tree needs radius 11
        let g = build_tree_ball(3, 11).unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.3f64;
        let report = construct_kn(&g, &t, beta, 0, 2, 3, Engine::exact_default()).unwrap();
        assert_eq!(report.witnesses.len(), 3);
        let dist = g.distances_from(0);
        assert_eq!(dist[report.witnesses[1] as usize], 4);
        assert_eq!(dist[report.witnesses[2] as usize], 8);
        assert!((report.c_min_edge - beta.tanh()).abs() < 1e-12);
        // strictly decreasing C2 and a sane 1/n fit
        for w in report.entries.windows(2) {
            assert!(w[1].c2.value < w[0].c2.value);
        }
        assert_eq!(report.entries[0].c2.value, 1.0);
        assert!(report.max_relative_residual < 0.10);
    }

    #[test]
    fn construct_kn_beta_zero_is_exactly_one_over_n() {
        let g = build_tree_ball(3, 11).unwrap();
        let t = nn_table(&g, 1.0);
        let report = construct_kn(&g, &t, 0.0, 0, 2, 3, Engine::exact_default()).unwrap();
        for e in &report.entries {
            assert_eq!(e.c2.value, 1.0 / e.n as f64);
        }
        assert!((report.fitted_c - 1.0).abs() < 1e-12);
        assert!(report.max_relative_residual < 1e-12);
    }

    #[test]
    fn construct_kn_errors() {
        let g = build_torus(1, 8).unwrap();
        let t = nn_table(&g, 1.0);
        assert!(matches!(
            construct_kn(&g, &t, 0.3, 0, 2, 3, Engine::exact_default()),
            Err(PaperError::EmptySphere { n: 3, radius: 8 })
        ));
        assert!(construct_kn(&g, &t, 0.3, 0, 1, 2, Engine::exact_default()).is_err());

        let small_tree = build_tree_ball(3, 6).unwrap();
        let ts = nn_table(&small_tree, 1.0);
        // the largest sphere (radius k^N = 4) fits, but the two-radius
        // margin reaches the generation boundary at distance 6
        assert!(matches!(
            construct_kn(&small_tree, &ts, 0.3, 0, 2, 2, Engine::exact_default()),
            Err(PaperError::Graph(GraphError::Saturated { .. }))
        ));
    }

    #[test]
    fn suggest_k_examples() {
        assert_eq!(suggest_k(0.3, 0.5).unwrap(), 2);
        assert_eq!(suggest_k(0.2, 0.9).unwrap(), 16);
        assert!(0.9f64.powi(16) <= 0.2);
        assert!(0.9f64.powi(15) > 0.2);
        assert!(suggest_k(0.0, 0.5).is_err());
        assert!(suggest_k(0.5, 1.0).is_err());
    }

    #[test]
    fn rho_bound_tree_grid() {
        let g = build_tree_ball(3, 8).unwrap();
        let t = nn_table(&g, 1.0);
        let grid = vec![0.1, 0.2, 0.3];
        let rep = rho_bound(&g, &t, 0, &grid, 5, Engine::exact_default()).unwrap();
        assert!((rep.max_sup - 0.3f64.tanh()).abs() < 1e-10);
        assert!(rep.max_sup < 1.0);
    }

    #[test]
    fn tree_oracle_matches_artanh() {
        let b = tree_beta_c_oracle(3, 1.0).unwrap();
        let artanh_half = 0.5f64.atanh();
        assert!((b - artanh_half).abs() < 1e-9);
        let b4 = tree_beta_c_oracle(4, 1.0).unwrap();
        assert!((b4 - (1.0f64 / 3.0).atanh()).abs() < 1e-9);
        assert!(tree_beta_c_oracle(2, 1.0).is_err());
    }

    #[test]
    fn griffiths_chain_pair_lower_bound() {
        // ⟨σ_x σ_y⟩ ≥ c^{d(x,y)} with c the minimum adjacent correlation —
        // the chain the K_n construction rests on — exhaustively on small
        // exact volumes.
        for g in [build_torus(2, 4).unwrap(), build_box(2, 3).unwrap()] {
            let t = nn_table(&g, 1.0);
            let n = g.vertex_count() as u32;
            for beta in [0.2, 0.44, 0.8] {
                let params = GibbsParams::free(beta);
                let mut obs = Vec::new();
                for x in 0..n {
                    for y in (x + 1)..n {
                        obs.push(Observable::pair(x, y));
                    }
                }
                let res = enumerate_with_cap(&g, &t, &params, &obs, 16).unwrap();
                let c = g
                    .edges()
                    .map(|(x, y)| res.observables[&Observable::pair(x, y)])
                    .fold(f64::INFINITY, f64::min);
                for x in 0..n {
                    let dist = g.distances_from(x);
                    for y in (x + 1)..n {
                        let corr = res.observables[&Observable::pair(x, y)];
                        let bound = c.powi(dist[y as usize] as i32);
                        assert!(
                            corr >= bound - 1e-12,
                            "{} β={beta}: pair ({x},{y}) {corr} < {bound}",
                            g.id_string()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn beta_c_validation_and_no_crossing() {
        let fam = Family::Torus { d: 2 };
        assert!(estimate_beta_c(&fam, 1.0, &[4, 6], &[0.1, 0.2, 0.3, 0.4, 0.5], 1000, 1).is_err());
        assert!(estimate_beta_c(&fam, 1.0, &[4, 6, 8], &[0.1, 0.2], 1000, 1).is_err());
        // grid deep in the disordered phase: no crossing
        let err = estimate_beta_c(
            &fam,
            1.0,
            &[4, 6, 8],
            &[0.05, 0.08, 0.11, 0.14, 0.17],
            3000,
            1,
        );
        assert!(matches!(err, Err(PaperError::NoCrossing(_))));
    }
}
