//! Cluster and single-site Monte Carlo with reproducible streams and
//! autocorrelation-aware error bars.
//!
//! Reproducibility discipline: every estimator derives its generator from
//! `(master_seed, task_key)` through SHA-256 ([`task_rng`]), where the task
//! key names the graph, β, and estimator. No global RNG exists, so
//! identical inputs give bit-identical outputs regardless of what else ran,
//! and parallel sweeps can hand each task its own independent stream.
//!
//! Estimators:
//! - [`wolff_sweep`]: single-cluster dynamics, h = 0 only;
//! - [`metropolis_sweep`]: single-site dynamics, any field, and the
//!   clamped-boundary variant behind [`estimate_magnetization_plus`];
//! - [`fk_two_point`]: Swendsen–Wang driving with the same-cluster
//!   indicator as the two-point estimator (Edwards–Sokal coupling), which
//!   measures every requested pair in one clustering per sample;
//! - [`binning_stats`]: logarithmic binning, plateau standard error, and
//!   the integrated autocorrelation time implied by the plateau.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graphs::Graph;
use crate::model::{delta_energy, CouplingTable, ModelError, SpinConfiguration};

/// Minimum sweep budget any estimator accepts: after the 10% equilibration
/// discard this still leaves enough samples for a binning analysis.
pub const MIN_SWEEPS: u64 = 200;

/// Fraction of sweeps discarded as burn-in before measurement.
pub const DISCARD_FRACTION: f64 = 0.1;

/// Minimum number of retained samples [`binning_stats`] accepts.
pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Error)]
pub enum McError {
    #[error("budget of {sweeps} sweeps is below the minimum {min}")]
    BudgetTooSmall { sweeps: u64, min: u64 },
    #[error("{n} samples is below the minimum {min} for binning")]
    TooFewSamples { n: usize, min: usize },
    #[error("vertex {0} is clamped under the plus boundary condition")]
    ClampedVertex(u32),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Estimator identity carried on every estimate and into output records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Wolff,
    Metropolis,
    Fk,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Wolff => "wolff",
            Method::Metropolis => "metropolis",
            Method::Fk => "fk",
        }
    }
}

/// A Monte Carlo estimate with its binning-corrected uncertainty.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    /// Plateau (autocorrelation-corrected) standard error of the mean.
    pub std_error: f64,
    pub n_samples: u64,
    /// Integrated autocorrelation time implied by the plateau/naive ratio;
    /// 1 for independent samples.
    pub autocorrelation_time: f64,
    pub method: Method,
}

impl EstimateWithCI {
    /// Central 95% interval (normal approximation).
    pub fn ci95(&self) -> (f64, f64) {
        (
            self.mean - 1.96 * self.std_error,
            self.mean + 1.96 * self.std_error,
        )
    }

    /// |mean − reference| measured in standard errors (infinite if the
    /// estimate has zero spread and misses the reference).
    pub fn sigma_distance(&self, reference: f64) -> f64 {
        let diff = (self.mean - reference).abs();
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// One pair's estimate from a two-point estimator run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PairEstimate {
    pub pair: (u32, u32),
    pub estimate: EstimateWithCI,
    /// True if either endpoint sits on the generation boundary, where
    /// finite-volume bias is worst; flagged, not rejected.
    pub touches_generation_boundary: bool,
}

/// Deterministic per-task generator: ChaCha8 seeded with
/// SHA-256(master_seed_le || task_key).
pub fn task_rng(master_seed: u64, task_key: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(task_key.as_bytes());
    let digest: [u8; 32] = hasher.finalize().into();
    ChaCha8Rng::from_seed(digest)
}

/// A single Markov chain: spins, its private stream, and a sweep counter.
#[derive(Clone, Debug)]
pub struct ChainState {
    pub sigma: SpinConfiguration,
    pub rng: ChaCha8Rng,
    pub sweep_count: u64,
    scratch: Vec<bool>,
    stack: Vec<u32>,
}

impl ChainState {
    /// Fresh chain with i.i.d. uniform spins drawn from the task stream.
    pub fn new(vertex_count: usize, master_seed: u64, task_key: &str) -> Self {
        let mut rng = task_rng(master_seed, task_key);
        let mut sigma = SpinConfiguration::all_minus(vertex_count);
        for v in 0..vertex_count as u32 {
            if rng.random::<bool>() {
                sigma.set_plus(v, true);
            }
        }
        ChainState {
            sigma,
            rng,
            sweep_count: 0,
            scratch: vec![false; vertex_count],
            stack: Vec::new(),
        }
    }

    /// Fresh chain from a given start configuration.
    pub fn with_spins(sigma: SpinConfiguration, master_seed: u64, task_key: &str) -> Self {
        let n = sigma.len();
        ChainState {
            sigma,
            rng: task_rng(master_seed, task_key),
            sweep_count: 0,
            scratch: vec![false; n],
            stack: Vec::new(),
        }
    }
}

/// One Wolff single-cluster update (valid at zero field): seed a uniform
/// vertex, add each aligned interaction partner with probability
/// 1 − exp(−2βJ), flip the grown cluster. Returns the cluster size.
pub fn wolff_sweep(state: &mut ChainState, table: &CouplingTable, beta: f64) -> usize {
    let n = table.vertex_count();
    debug_assert_eq!(state.sigma.len(), n);
    let seed = state.rng.random_range(0..n as u32);
    let target = state.sigma.is_plus(seed);
    let in_cluster = &mut state.scratch;
    in_cluster.iter_mut().for_each(|b| *b = false);
    in_cluster[seed as usize] = true;
    state.stack.clear();
    state.stack.push(seed);
    let mut size = 0usize;
    // memoize 1 − exp(−2βJ) for the (typically single) coupling value
    let mut cached_j = f64::NAN;
    let mut cached_p = 0.0;
    while let Some(v) = state.stack.pop() {
        size += 1;
        for &(u, j) in table.interactions(v) {
            if in_cluster[u as usize] || state.sigma.is_plus(u) != target {
                continue;
            }
            if j != cached_j {
                cached_j = j;
                cached_p = 1.0 - (-2.0 * beta * j).exp();
            }
            if state.rng.random::<f64>() < cached_p {
                in_cluster[u as usize] = true;
                state.stack.push(u);
            }
        }
    }
    for v in 0..n as u32 {
        if in_cluster[v as usize] {
            state.sigma.flip(v);
        }
    }
    state.sweep_count += 1;
    size
}

/// One Metropolis sweep: |V| single-site proposals at uniformly random
/// vertices, acceptance min(1, exp(−βΔH)). Works at any field.
pub fn metropolis_sweep(state: &mut ChainState, table: &CouplingTable, beta: f64, h: f64) {
    metropolis_sweep_clamped(state, table, beta, h, None);
}

/// [`metropolis_sweep`] with an optional clamp mask; clamped vertices are
/// never proposed (their spins realize the plus boundary condition).
pub fn metropolis_sweep_clamped(
    state: &mut ChainState,
    table: &CouplingTable,
    beta: f64,
    h: f64,
    clamped: Option<&[bool]>,
) {
    let n = table.vertex_count();
    debug_assert_eq!(state.sigma.len(), n);
    for _ in 0..n {
        let x = state.rng.random_range(0..n as u32);
        if clamped.is_some_and(|c| c[x as usize]) {
            continue;
        }
        let delta = delta_energy(table, h, &state.sigma, x).expect("validated sizes");
        if delta <= 0.0 || state.rng.random::<f64>() < (-beta * delta).exp() {
            state.sigma.flip(x);
        }
    }
    state.sweep_count += 1;
}

/// Logarithmic binning analysis of a (possibly autocorrelated) series.
///
/// Bins are doubled while at least 32 remain; the walk stops at the first
/// level whose standard error grows by less than 2% (the plateau), and the
/// largest standard error seen is reported. The integrated autocorrelation
/// time is (SE_plateau / SE_naive)², the factor by which correlations
/// inflate the variance of the mean.
pub fn binning_stats(samples: &[f64], method: Method) -> Result<EstimateWithCI, McError> {
    let n = samples.len();
    if n < MIN_SAMPLES {
        return Err(McError::TooFewSamples {
            n,
            min: MIN_SAMPLES,
        });
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let var = samples.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    if var <= 0.0 {
        return Ok(EstimateWithCI {
            mean,
            std_error: 0.0,
            n_samples: n as u64,
            autocorrelation_time: 1.0,
            method,
        });
    }
    let naive_se = (var / n as f64).sqrt();
    let mut level: Vec<f64> = samples.to_vec();
    let mut best_se = naive_se;
    let mut prev_se = naive_se;
    loop {
        let bins = level.len() / 2;
        if bins < 32 {
            break;
        }
        let mut next = Vec::with_capacity(bins);
        for i in 0..bins {
            next.push(0.5 * (level[2 * i] + level[2 * i + 1]));
        }
        level = next;
        let m = level.len() as f64;
        let bmean = level.iter().sum::<f64>() / m;
        let bvar = level.iter().map(|&x| (x - bmean) * (x - bmean)).sum::<f64>() / (m - 1.0);
        let se = (bvar / m).sqrt();
        best_se = best_se.max(se);
        if se < prev_se * 1.02 {
            break; // plateau reached (or noise; max() keeps us conservative)
        }
        prev_se = se;
    }
    let tau = (best_se / naive_se).powi(2).max(1.0);
    Ok(EstimateWithCI {
        mean,
        std_error: best_se,
        n_samples: n as u64,
        autocorrelation_time: tau,
        method,
    })
}

fn check_budget(sweeps: u64) -> Result<(u64, u64), McError> {
    if sweeps < MIN_SWEEPS {
        return Err(McError::BudgetTooSmall {
            sweeps,
            min: MIN_SWEEPS,
        });
    }
    let burn = (sweeps as f64 * DISCARD_FRACTION).ceil() as u64;
    Ok((burn, sweeps - burn))
}

/// Bit-packed 0/1 sample series (one bit per retained sweep), the raw
/// output of the FK estimator: thousands of pairs over tens of thousands
/// of samples fit in megabytes instead of gigabytes.
#[derive(Clone, Debug)]
pub struct IndicatorSeries {
    words: Vec<u64>,
    len: usize,
}

impl IndicatorSeries {
    fn new() -> Self {
        IndicatorSeries {
            words: Vec::new(),
            len: 0,
        }
    }

    fn push(&mut self, bit: bool) {
        if self.len % 64 == 0 {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1u64 << (self.len % 64);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn to_f64(&self) -> Vec<f64> {
        (0..self.len)
            .map(|i| ((self.words[i / 64] >> (i % 64)) & 1) as f64)
            .collect()
    }
}

/// Union–find with path halving and union by size.
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.iter_mut().for_each(|s| *s = 1);
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            self.parent[v as usize] = self.parent[self.parent[v as usize] as usize];
            v = self.parent[v as usize];
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}

/// FK/Swendsen–Wang two-point estimation: per sample, open each aligned
/// interacting pair with probability 1 − exp(−2βJ), read off the requested
/// same-cluster indicators, then resample every cluster's spin uniformly.
/// Valid at h = 0 with free boundary. One clustering serves all pairs.
pub fn fk_two_point(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    pairs: &[(u32, u32)],
    sweeps: u64,
    master_seed: u64,
) -> Result<Vec<PairEstimate>, McError> {
    fk_two_point_labeled(g, table, beta, pairs, sweeps, master_seed, "")
}

/// [`fk_two_point`] on a separately labeled stream. Two calls with
/// different labels are statistically independent runs; callers use this
/// to keep selection passes and estimation passes unentangled.
pub fn fk_two_point_labeled(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    pairs: &[(u32, u32)],
    sweeps: u64,
    master_seed: u64,
    stream_label: &str,
) -> Result<Vec<PairEstimate>, McError> {
    let series = fk_indicator_series_impl(
        g,
        table,
        beta,
        pairs,
        sweeps,
        master_seed,
        stream_label,
        DISCARD_FRACTION,
    )?;
    finish_pair_estimates(g, pairs, &series)
}

/// The raw per-pair same-cluster indicator series behind [`fk_two_point`],
/// for callers that need per-sample access (e.g. to bin a derived scalar
/// like an averaged pair correlation rather than each pair separately).
pub fn fk_indicator_series(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    pairs: &[(u32, u32)],
    sweeps: u64,
    master_seed: u64,
    stream_label: &str,
) -> Result<Vec<IndicatorSeries>, McError> {
    fk_indicator_series_impl(
        g,
        table,
        beta,
        pairs,
        sweeps,
        master_seed,
        stream_label,
        DISCARD_FRACTION,
    )
}

#[allow(clippy::too_many_arguments)]
fn fk_indicator_series_impl(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    pairs: &[(u32, u32)],
    sweeps: u64,
    master_seed: u64,
    stream_label: &str,
    discard: f64,
) -> Result<Vec<IndicatorSeries>, McError> {
    if sweeps < MIN_SWEEPS {
        return Err(McError::BudgetTooSmall {
            sweeps,
            min: MIN_SWEEPS,
        });
    }
    let burn = (sweeps as f64 * discard).ceil() as u64;
    let n = table.vertex_count();
    for &(x, y) in pairs {
        if x.max(y) as usize >= n {
            return Err(McError::InvalidParam(format!(
                "pair ({x}, {y}) outside the graph"
            )));
        }
    }
    // The task key deliberately excludes the pair list: measurements do not
    // touch the stream, so adding pairs never perturbs the dynamics.
    let key = format!("fk|{stream_label}|{}|beta={beta:.17e}", g.id_string());
    let mut state = ChainState::new(n, master_seed, &key);
    let open_p: Vec<f64> = table
        .pairs()
        .iter()
        .map(|&(_, _, j)| 1.0 - (-2.0 * beta * j).exp())
        .collect();
    let mut uf = UnionFind::new(n);
    let mut series: Vec<IndicatorSeries> = pairs.iter().map(|_| IndicatorSeries::new()).collect();
    for sweep in 0..sweeps {
        uf.reset();
        for (&(x, y, _), &p) in table.pairs().iter().zip(&open_p) {
            if state.sigma.is_plus(x) == state.sigma.is_plus(y) && state.rng.random::<f64>() < p {
                uf.union(x, y);
            }
        }
        if sweep >= burn {
            for (s, &(x, y)) in series.iter_mut().zip(pairs) {
                s.push(uf.find(x) == uf.find(y));
            }
        }
        // Resample cluster spins: roots draw in ascending order (fixed
        // stream order), members copy their root.
        for v in 0..n as u32 {
            if uf.find(v) == v {
                state.sigma.set_plus(v, state.rng.random::<bool>());
            }
        }
        for v in 0..n as u32 {
            let r = uf.find(v);
            if r != v {
                let s = state.sigma.is_plus(r);
                state.sigma.set_plus(v, s);
            }
        }
        state.sweep_count += 1;
    }
    Ok(series)
}

fn finish_pair_estimates(
    g: &Graph,
    pairs: &[(u32, u32)],
    series: &[IndicatorSeries],
) -> Result<Vec<PairEstimate>, McError> {
    pairs
        .iter()
        .zip(series)
        .map(|(&(x, y), s)| {
            let estimate = binning_stats(&s.to_f64(), Method::Fk)?;
            Ok(PairEstimate {
                pair: (x, y),
                estimate,
                touches_generation_boundary: g.is_generation_boundary(x)
                    || g.is_generation_boundary(y),
            })
        })
        .collect()
}

/// Wolff-driven two-point estimation: per retained sweep record σ_x σ_y
/// for every requested pair. Valid at h = 0, free boundary.
pub fn wolff_two_point(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    pairs: &[(u32, u32)],
    sweeps: u64,
    master_seed: u64,
) -> Result<Vec<PairEstimate>, McError> {
    let (burn, kept) = check_budget(sweeps)?;
    let n = table.vertex_count();
    for &(x, y) in pairs {
        if x.max(y) as usize >= n {
            return Err(McError::InvalidParam(format!(
                "pair ({x}, {y}) outside the graph"
            )));
        }
    }
    let key = format!("wolff|{}|beta={beta:.17e}", g.id_string());
    let mut state = ChainState::new(n, master_seed, &key);
    let mut series: Vec<Vec<f64>> = vec![Vec::with_capacity(kept as usize); pairs.len()];
    for sweep in 0..sweeps {
        wolff_sweep(&mut state, table, beta);
        if sweep >= burn {
            for (s, &(x, y)) in series.iter_mut().zip(pairs) {
                s.push(state.sigma.sign(x) * state.sigma.sign(y));
            }
        }
    }
    pairs
        .iter()
        .zip(&series)
        .map(|(&(x, y), s)| {
            let estimate = binning_stats(s, Method::Wolff)?;
            Ok(PairEstimate {
                pair: (x, y),
                estimate,
                touches_generation_boundary: g.is_generation_boundary(x)
                    || g.is_generation_boundary(y),
            })
        })
        .collect()
}

/// ⟨σ_x⟩ under the plus (clamped generation boundary) surrogate, by
/// Metropolis with boundary spins frozen at +1; start all-plus.
pub fn estimate_magnetization_plus(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    x: u32,
    sweeps: u64,
    master_seed: u64,
) -> Result<EstimateWithCI, McError> {
    let (burn, kept) = check_budget(sweeps)?;
    let n = table.vertex_count();
    if (x as usize) >= n {
        return Err(McError::InvalidParam(format!("vertex {x} outside the graph")));
    }
    if g.is_generation_boundary(x) {
        return Err(McError::ClampedVertex(x));
    }
    let clamped: Vec<bool> = (0..n as u32).map(|v| g.is_generation_boundary(v)).collect();
    let key = format!("plusmag|{}|beta={beta:.17e}|x={x}", g.id_string());
    let mut state = ChainState::with_spins(SpinConfiguration::all_plus(n), master_seed, &key);
    let mut series = Vec::with_capacity(kept as usize);
    for sweep in 0..sweeps {
        metropolis_sweep_clamped(&mut state, table, beta, 0.0, Some(&clamped));
        if sweep >= burn {
            series.push(state.sigma.sign(x));
        }
    }
    binning_stats(&series, Method::Metropolis)
}

/// Free-boundary Metropolis estimate of ⟨σ_x⟩ at inverse temperature β
/// and field h (the h ≠ 0 workhorse behind plus-limit probes).
pub fn estimate_magnetization_field(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    h: f64,
    x: u32,
    sweeps: u64,
    master_seed: u64,
) -> Result<EstimateWithCI, McError> {
    let (burn, kept) = check_budget(sweeps)?;
    let n = table.vertex_count();
    if (x as usize) >= n {
        return Err(McError::InvalidParam(format!("vertex {x} outside the graph")));
    }
    let key = format!("fieldmag|{}|beta={beta:.17e}|h={h:.17e}|x={x}", g.id_string());
    let mut state = ChainState::new(n, master_seed, &key);
    let mut series = Vec::with_capacity(kept as usize);
    for sweep in 0..sweeps {
        metropolis_sweep(&mut state, table, beta, h);
        if sweep >= burn {
            series.push(state.sigma.sign(x));
        }
    }
    binning_stats(&series, Method::Metropolis)
}

/// Binder cumulant U = 1 − ⟨m⁴⟩ / (3⟨m²⟩²) from Wolff sampling, with a
/// blocked-jackknife standard error (32 time blocks).
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct BinderEstimate {
    pub beta: f64,
    pub binder: f64,
    pub std_error: f64,
    pub m2: f64,
    pub m4: f64,
    pub n_samples: u64,
}

pub fn wolff_binder(
    g: &Graph,
    table: &CouplingTable,
    beta: f64,
    sweeps: u64,
    master_seed: u64,
) -> Result<BinderEstimate, McError> {
    let (burn, kept) = check_budget(sweeps)?;
    let n = table.vertex_count();
    let key = format!("binder|{}|beta={beta:.17e}", g.id_string());
    let mut state = ChainState::new(n, master_seed, &key);
    let mut m2s = Vec::with_capacity(kept as usize);
    let mut m4s = Vec::with_capacity(kept as usize);
    for sweep in 0..sweeps {
        wolff_sweep(&mut state, table, beta);
        if sweep >= burn {
            let m = state.sigma.magnetization() as f64 / n as f64;
            let m2 = m * m;
            m2s.push(m2);
            m4s.push(m2 * m2);
        }
    }
    let (binder, se) = binder_jackknife(&m2s, &m4s, 32);
    let m2 = m2s.iter().sum::<f64>() / m2s.len() as f64;
    let m4 = m4s.iter().sum::<f64>() / m4s.len() as f64;
    Ok(BinderEstimate {
        beta,
        binder,
        std_error: se,
        m2,
        m4,
        n_samples: m2s.len() as u64,
    })
}

/// Leave-one-block-out jackknife for U = 1 − m4 / (3 m2²).
fn binder_jackknife(m2s: &[f64], m4s: &[f64], blocks: usize) -> (f64, f64) {
    let n = m2s.len();
    let binder = |m2: f64, m4: f64| 1.0 - m4 / (3.0 * m2 * m2);
    let tot2: f64 = m2s.iter().sum();
    let tot4: f64 = m4s.iter().sum();
    let full = binder(tot2 / n as f64, tot4 / n as f64);
    let b = blocks.min(n / 2).max(2);
    let block_len = n / b;
    let used = b * block_len;
    let mut estimates = Vec::with_capacity(b);
    for i in 0..b {
        let (lo, hi) = (i * block_len, (i + 1) * block_len);
        let s2: f64 = m2s[lo..hi].iter().sum();
        let s4: f64 = m4s[lo..hi].iter().sum();
        let rest = (used - block_len) as f64;
        // leave-one-out over the used prefix
        let p2: f64 = m2s[..used].iter().sum::<f64>() - s2;
        let p4: f64 = m4s[..used].iter().sum::<f64>() - s4;
        estimates.push(binder(p2 / rest, p4 / rest));
    }
    let mean = estimates.iter().sum::<f64>() / b as f64;
    let var: f64 = estimates.iter().map(|&u| (u - mean) * (u - mean)).sum::<f64>()
        * (b as f64 - 1.0)
        / b as f64;
    (full, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::graphs::{build_box, build_torus, build_tree_ball, Graph};
    use crate::model::{Couplings, GibbsParams};

    fn nn_table(g: &Graph, j: f64) -> CouplingTable {
        CouplingTable::build(g, &Couplings::nearest_neighbor(j)).unwrap()
    }

    #[test]
    fn task_rng_is_deterministic_and_keyed() {
        let a: Vec<u32> = {
            let mut r = task_rng(42, "alpha");
            (0..4).map(|_| r.random()).collect()
        };
        let b: Vec<u32> = {
            let mut r = task_rng(42, "alpha");
            (0..4).map(|_| r.random()).collect()
        };
        let c: Vec<u32> = {
            let mut r = task_rng(42, "beta");
            (0..4).map(|_| r.random()).collect()
        };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn binning_iid_matches_sqrt_n_law() {
        let mut rng = task_rng(7, "iid");
        let samples: Vec<f64> = (0..4096)
            .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let est = binning_stats(&samples, Method::Wolff).unwrap();
        let expect = 1.0 / (4096f64).sqrt();
        assert!((est.std_error - expect).abs() / expect < 0.2);
        assert!(est.autocorrelation_time < 1.6);
    }

    #[test]
    fn binning_constant_series() {
        let est = binning_stats(&vec![0.25; 64], Method::Fk).unwrap();
        assert_eq!(est.mean, 0.25);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.autocorrelation_time, 1.0);
    }

    #[test]
    fn binning_rejects_short_series() {
        assert!(matches!(
            binning_stats(&[1.0; 8], Method::Fk),
            Err(McError::TooFewSamples { n: 8, .. })
        ));
    }

    #[test]
    fn binning_ar1_autocorrelation_time() {
        // x_{t+1} = φ x_t + ε with i.i.d. ±1 innovations has ρ_k = φ^k and
        // integrated time (1+φ)/(1−φ) = 19 at φ = 0.9, regardless of the
        // innovation law.
        let phi = 0.9;
        let mut rng = task_rng(11, "ar1");
        let mut x = 0.0;
        let n = 1 << 17;
        let mut samples = Vec::with_capacity(n);
        for _ in 0..n {
            let eps = if rng.random::<bool>() { 1.0 } else { -1.0 };
            x = phi * x + eps;
            samples.push(x);
        }
        let est = binning_stats(&samples, Method::Metropolis).unwrap();
        let target = (1.0 + phi) / (1.0 - phi);
        assert!(
            (est.autocorrelation_time - target).abs() / target < 0.3,
            "tau = {}, target {target}",
            est.autocorrelation_time
        );
    }

    #[test]
    fn wolff_at_beta_zero_is_single_site() {
        let g = build_torus(1, 16).unwrap();
        let t = nn_table(&g, 1.0);
        let mut state = ChainState::new(16, 1, "wolff0");
        for _ in 0..100 {
            assert_eq!(wolff_sweep(&mut state, &t, 0.0), 1);
        }
    }

    #[test]
    fn wolff_engulfs_at_strong_coupling() {
        let g = build_torus(1, 16).unwrap();
        let t = nn_table(&g, 1.0);
        let mut state = ChainState::new(16, 2, "wolff3");
        let mut total = 0usize;
        let sweeps = 500;
        for _ in 0..sweeps {
            total += wolff_sweep(&mut state, &t, 3.0);
        }
        assert!(total as f64 / sweeps as f64 >= 0.9 * 16.0);
    }

    #[test]
    fn wolff_single_edge_matches_tanh() {
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
        let est = &wolff_two_point(&g, &t, 0.5, &[(0, 1)], 4000, 5).unwrap()[0];
        assert!(est.estimate.sigma_distance(0.5f64.tanh()) < 3.0);
    }

    #[test]
    fn metropolis_free_spin_in_field() {
        let g = Graph::from_parts("custom", "point", vec![vec![]], vec![0], 0, None, vec![false])
            .unwrap();
        let t = nn_table(&g, 1.0);
        let est = estimate_magnetization_field(&g, &t, 0.8, 0.9, 0, 4000, 3).unwrap();
        assert!(est.sigma_distance((0.8f64 * 0.9).tanh()) < 3.0);
    }

    #[test]
    fn metropolis_beta_zero_magnetization_vanishes() {
        let g = build_box(2, 3).unwrap();
        let t = nn_table(&g, 1.0);
        let est = estimate_magnetization_field(&g, &t, 0.0, 0.0, 4, 4000, 9).unwrap();
        assert!(est.sigma_distance(0.0) < 3.0);
    }

    #[test]
    fn metropolis_box_with_field_matches_enumeration() {
        let g = build_box(2, 3).unwrap();
        let t = nn_table(&g, 1.0);
        let params = GibbsParams::new(0.3, 0.2, crate::model::BoundaryCondition::Free).unwrap();
        let exact = exact::magnetization(&g, &t, &params, 4).unwrap();
        let est = estimate_magnetization_field(&g, &t, 0.3, 0.2, 4, 8000, 13).unwrap();
        assert!(est.sigma_distance(exact) < 3.0, "mc {} vs exact {exact}", est.mean);
    }

    #[test]
    fn fk_beta_zero_and_diagonal() {
        let g = build_torus(1, 8).unwrap();
        let t = nn_table(&g, 1.0);
        let ests = fk_two_point(&g, &t, 0.0, &[(0, 3), (2, 2)], 400, 1).unwrap();
        assert_eq!(ests[0].estimate.mean, 0.0);
        assert_eq!(ests[0].estimate.std_error, 0.0);
        assert_eq!(ests[1].estimate.mean, 1.0);
        assert_eq!(ests[1].estimate.std_error, 0.0);
    }

    #[test]
    fn fk_single_edge_matches_tanh() {
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
        let est = &fk_two_point(&g, &t, 0.5, &[(0, 1)], 4000, 5).unwrap()[0];
        assert!(est.estimate.sigma_distance(0.5f64.tanh()) < 3.0);
        assert!(est.estimate.mean >= 0.0 && est.estimate.mean <= 1.0);
    }

    #[test]
    fn fk_and_wolff_agree_within_joint_sigma() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let f = &fk_two_point(&g, &t, 0.44, &[(0, 1)], 6000, 21).unwrap()[0];
        let w = &wolff_two_point(&g, &t, 0.44, &[(0, 1)], 6000, 21).unwrap()[0];
        let joint = (f.estimate.std_error.powi(2) + w.estimate.std_error.powi(2)).sqrt();
        assert!((f.estimate.mean - w.estimate.mean).abs() <= 3.0 * joint);
    }

    #[test]
    fn fk_flags_boundary_pairs() {
        let g = build_tree_ball(3, 2).unwrap();
        let t = nn_table(&g, 1.0);
        let leaf = (g.vertex_count() - 1) as u32;
        let ests = fk_two_point(&g, &t, 0.3, &[(0, 1), (0, leaf)], 400, 1).unwrap();
        assert!(!ests[0].touches_generation_boundary);
        assert!(ests[1].touches_generation_boundary);
    }

    #[test]
    fn plus_magnetization_star_matches_analytic() {
        let g = build_tree_ball(3, 1).unwrap();
        let t = nn_table(&g, 1.0);
        let beta = 0.5;
        let est = estimate_magnetization_plus(&g, &t, beta, 0, 4000, 17).unwrap();
        assert!(est.sigma_distance((3.0 * beta).tanh()) < 3.0);
        assert!(matches!(
            estimate_magnetization_plus(&g, &t, beta, 1, 4000, 17),
            Err(McError::ClampedVertex(1))
        ));
    }

    #[test]
    fn plus_magnetization_monotone_in_beta() {
        let g = build_box(2, 5).unwrap();
        let t = nn_table(&g, 1.0);
        let x = g.origin();
        let hot = estimate_magnetization_plus(&g, &t, 0.3, x, 12000, 23).unwrap();
        let cold = estimate_magnetization_plus(&g, &t, 1.0, x, 12000, 23).unwrap();
        let joint = (hot.std_error.powi(2) + cold.std_error.powi(2)).sqrt();
        assert!(cold.mean - hot.mean > 3.0 * joint);
    }

    #[test]
    fn estimates_are_bit_reproducible() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let a = &fk_two_point(&g, &t, 0.44, &[(0, 5)], 1000, 99).unwrap()[0];
        let b = &fk_two_point(&g, &t, 0.44, &[(0, 5)], 1000, 99).unwrap()[0];
        assert_eq!(a.estimate.mean.to_bits(), b.estimate.mean.to_bits());
        assert_eq!(a.estimate.std_error.to_bits(), b.estimate.std_error.to_bits());
        // adding a pair to the request must not change existing estimates
        let c = fk_two_point(&g, &t, 0.44, &[(0, 5), (1, 2)], 1000, 99).unwrap();
        assert_eq!(a.estimate.mean.to_bits(), c[0].estimate.mean.to_bits());
    }

    #[test]
    fn budget_floor_enforced() {
        let g = build_torus(1, 8).unwrap();
        let t = nn_table(&g, 1.0);
        assert!(matches!(
            fk_two_point(&g, &t, 0.4, &[(0, 1)], 50, 1),
            Err(McError::BudgetTooSmall { .. })
        ));
    }

    #[test]
    fn doubling_discard_window_is_stable() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let run = |discard: f64| {
            let series =
                fk_indicator_series_impl(&g, &t, 0.44, &[(0, 1)], 8000, 31, "", discard).unwrap();
            finish_pair_estimates(&g, &[(0, 1)], &series).unwrap()[0].clone()
        };
        let a = run(0.1);
        let b = run(0.2);
        let joint = a.estimate.std_error.max(b.estimate.std_error);
        assert!((a.estimate.mean - b.estimate.mean).abs() < joint);
    }

    #[test]
    fn binder_on_small_torus_is_sane() {
        let g = build_torus(2, 4).unwrap();
        let t = nn_table(&g, 1.0);
        let est = wolff_binder(&g, &t, 0.44, 4000, 7).unwrap();
        // deep finite-size regime: U between the trivial limits 0 and 2/3
        assert!(est.binder > 0.0 && est.binder < 2.0 / 3.0);
        assert!(est.std_error > 0.0 && est.std_error < 0.1);
        // cold limit: m² → 1, U → 2/3
        let cold = wolff_binder(&g, &t, 2.5, 4000, 7).unwrap();
        assert!((cold.binder - 2.0 / 3.0).abs() < 0.01);
    }
}
