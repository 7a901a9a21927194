//! Couplings, Gibbs parameters, spin configurations, and energies.
//!
//! Conventions fixed here once and used by every engine:
//!
//! - The Hamiltonian sums over *unordered distinct* pairs,
//!   H(σ) = − Σ_{{x,y}} J_xy σ_x σ_y − h Σ_x σ_x.
//!   Summing ordered pairs instead would rescale every J by 2, and diagonal
//!   terms are σ-independent constants; both drop out of the Gibbs measure
//!   but would shift the meaning of β in reported numbers.
//! - Couplings are ferromagnetic (J ≥ 0) and of finite range, specified
//!   either per graph distance or per edge orbit (pair of vertex labels),
//!   so that J_xy is automorphism-invariant by construction.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graphs::Graph;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid coupling: {0}")]
    InvalidCoupling(String),
    #[error("invalid Gibbs parameters: {0}")]
    InvalidParams(String),
    #[error("no coupling defined for edge orbit ({0}, {1})")]
    MissingOrbit(u32, u32),
    #[error("spin configuration has {got} spins, graph has {want} vertices")]
    SpinLengthMismatch { got: usize, want: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(u32),
}

/// Automorphism-invariant ferromagnetic couplings of finite range.
#[derive(Clone, Debug, PartialEq)]
pub enum Couplings {
    /// J as a function of graph distance; key r ≥ 1 maps to J(r) ≥ 0.
    /// Pairs at distances without an entry do not interact.
    ByDistance(BTreeMap<u32, f64>),
    /// J per edge orbit, keyed by the unordered pair of endpoint labels;
    /// only graph edges interact.
    ByEdgeOrbit(BTreeMap<(u32, u32), f64>),
}

impl Couplings {
    /// Nearest-neighbor J(1) = 1, the default throughout.
    pub fn nearest_neighbor(j: f64) -> Self {
        Couplings::ByDistance(BTreeMap::from([(1, j)]))
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let check = |j: f64| -> Result<(), ModelError> {
            if !j.is_finite() || j < 0.0 {
                return Err(ModelError::InvalidCoupling(format!(
                    "couplings must be finite and >= 0, got {j}"
                )));
            }
            Ok(())
        };
        match self {
            Couplings::ByDistance(map) => {
                for (&r, &j) in map {
                    if r == 0 {
                        return Err(ModelError::InvalidCoupling(
                            "distance 0 (diagonal) carries no coupling".into(),
                        ));
                    }
                    check(j)?;
                }
            }
            Couplings::ByEdgeOrbit(map) => {
                for (&(a, b), &j) in map {
                    if a > b {
                        return Err(ModelError::InvalidCoupling(format!(
                            "orbit keys must be unordered: ({a}, {b})"
                        )));
                    }
                    check(j)?;
                }
            }
        }
        Ok(())
    }
}

/// Finite-volume boundary condition.
#[derive(Clone, Debug, PartialEq)]
pub enum BoundaryCondition {
    /// Open boundary: nothing outside the volume.
    Free,
    /// All generation-boundary spins conditioned to +1.
    PlusFixed,
    /// The h → 0⁺ route to the plus state: evaluate at each field of a
    /// strictly decreasing positive sequence and extrapolate.
    FieldSequence(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GibbsParams {
    pub beta: f64,
    pub h: f64,
    pub bc: BoundaryCondition,
}

impl GibbsParams {
    pub fn new(beta: f64, h: f64, bc: BoundaryCondition) -> Result<Self, ModelError> {
        if !beta.is_finite() || beta < 0.0 {
            return Err(ModelError::InvalidParams(format!(
                "beta must be finite and >= 0, got {beta}"
            )));
        }
        if !h.is_finite() {
            return Err(ModelError::InvalidParams("h must be finite".into()));
        }
        if let BoundaryCondition::FieldSequence(fields) = &bc {
            let ok = !fields.is_empty()
                && fields.iter().all(|&f| f.is_finite() && f > 0.0)
                && fields.windows(2).all(|w| w[0] > w[1]);
            if !ok {
                return Err(ModelError::InvalidParams(
                    "field sequence must be strictly decreasing and positive".into(),
                ));
            }
        }
        Ok(GibbsParams { beta, h, bc })
    }

    pub fn free(beta: f64) -> Self {
        GibbsParams::new(beta, 0.0, BoundaryCondition::Free).unwrap()
    }
}

/// Couplings resolved against a concrete graph: per-vertex interaction
/// lists (for O(deg) energy deltas) and the global unordered pair list
/// (for full-energy sums). Built once, shared read-only by all engines.
#[derive(Clone, Debug)]
pub struct CouplingTable {
    vertex_count: usize,
    interactions: Vec<Vec<(u32, f64)>>,
    pairs: Vec<(u32, u32, f64)>,
}

impl CouplingTable {
    pub fn build(g: &Graph, couplings: &Couplings) -> Result<Self, ModelError> {
        couplings.validate()?;
        let n = g.vertex_count();
        let mut interactions: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
        let mut pairs = Vec::new();
        match couplings {
            Couplings::ByEdgeOrbit(map) => {
                for (x, y) in g.edges() {
                    let (a, b) = {
                        let (la, lb) = (g.label(x), g.label(y));
                        (la.min(lb), la.max(lb))
                    };
                    let &j = map.get(&(a, b)).ok_or(ModelError::MissingOrbit(a, b))?;
                    if j > 0.0 {
                        interactions[x as usize].push((y, j));
                        interactions[y as usize].push((x, j));
                        pairs.push((x, y, j));
                    }
                }
            }
            Couplings::ByDistance(map) => {
                let range = map.keys().copied().max().unwrap_or(0);
                if range == 1 {
                    // fast path: interactions are exactly the edges
                    let j = map[&1];
                    if j > 0.0 {
                        for (x, y) in g.edges() {
                            interactions[x as usize].push((y, j));
                            interactions[y as usize].push((x, j));
                            pairs.push((x, y, j));
                        }
                    }
                } else if range > 1 {
                    for x in 0..n as u32 {
                        for (y, d) in bfs_within(g, x, range) {
                            if let Some(&j) = map.get(&d) {
                                if j > 0.0 {
                                    interactions[x as usize].push((y, j));
                                    if x < y {
                                        pairs.push((x, y, j));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for list in &mut interactions {
            list.sort_unstable_by_key(|&(v, _)| v);
        }
        pairs.sort_unstable_by_key(|&(x, y, _)| (x, y));
        Ok(CouplingTable {
            vertex_count: n,
            interactions,
            pairs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Interaction partners of `v` with their couplings, ascending by id.
    pub fn interactions(&self, v: u32) -> &[(u32, f64)] {
        &self.interactions[v as usize]
    }

    /// All interacting unordered pairs (x, y, J) with x < y, ascending.
    pub fn pairs(&self) -> &[(u32, u32, f64)] {
        &self.pairs
    }
}

/// Vertices within distance `range` of `x` (excluding `x`), with distances.
fn bfs_within(g: &Graph, x: u32, range: u32) -> Vec<(u32, u32)> {
    let mut dist: BTreeMap<u32, u32> = BTreeMap::from([(x, 0)]);
    let mut frontier = vec![x];
    for d in 1..=range {
        let mut next = Vec::new();
        for &v in &frontier {
            for &u in g.neighbors(v) {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d);
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    dist.into_iter().filter(|&(v, _)| v != x).collect()
}

/// Spins in {−1, +1}, packed one bit per vertex (set bit = +1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinConfiguration {
    bits: Vec<u64>,
    len: usize,
}

impl SpinConfiguration {
    pub fn all_plus(len: usize) -> Self {
        let mut s = SpinConfiguration {
            bits: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.clear_tail();
        s
    }

    pub fn all_minus(len: usize) -> Self {
        SpinConfiguration {
            bits: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_signs(signs: &[i8]) -> Self {
        let mut s = SpinConfiguration::all_minus(signs.len());
        for (v, &sg) in signs.iter().enumerate() {
            if sg > 0 {
                s.set_plus(v as u32, true);
            }
        }
        s
    }

    fn clear_tail(&mut self) {
        let used = self.len % 64;
        if used != 0 {
            if let Some(last) = self.bits.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_plus(&self, v: u32) -> bool {
        let v = v as usize;
        (self.bits[v / 64] >> (v % 64)) & 1 == 1
    }

    /// σ_v as ±1.0.
    pub fn sign(&self, v: u32) -> f64 {
        if self.is_plus(v) {
            1.0
        } else {
            -1.0
        }
    }

    pub fn set_plus(&mut self, v: u32, plus: bool) {
        let v = v as usize;
        if plus {
            self.bits[v / 64] |= 1u64 << (v % 64);
        } else {
            self.bits[v / 64] &= !(1u64 << (v % 64));
        }
    }

    pub fn flip(&mut self, v: u32) {
        let v = v as usize;
        self.bits[v / 64] ^= 1u64 << (v % 64);
    }

    pub fn flip_all(&mut self) {
        for w in &mut self.bits {
            *w = !*w;
        }
        self.clear_tail();
    }

    /// Σ_x σ_x as an integer.
    pub fn magnetization(&self) -> i64 {
        let plus: u32 = self.bits.iter().map(|w| w.count_ones()).sum();
        2 * plus as i64 - self.len as i64
    }
}

/// H(σ) = − Σ_{{x,y}} J_xy σ_x σ_y − h Σ_x σ_x over unordered pairs.
pub fn hamiltonian(
    table: &CouplingTable,
    h: f64,
    sigma: &SpinConfiguration,
) -> Result<f64, ModelError> {
    if sigma.len() != table.vertex_count() {
        return Err(ModelError::SpinLengthMismatch {
            got: sigma.len(),
            want: table.vertex_count(),
        });
    }
    let mut energy = 0.0;
    for &(x, y, j) in table.pairs() {
        energy -= j * sigma.sign(x) * sigma.sign(y);
    }
    energy -= h * sigma.magnetization() as f64;
    Ok(energy)
}

/// H(σ^x) − H(σ) for flipping σ_x, in O(deg x):
/// ΔH = 2 σ_x (Σ_y J_xy σ_y + h).
pub fn delta_energy(
    table: &CouplingTable,
    h: f64,
    sigma: &SpinConfiguration,
    x: u32,
) -> Result<f64, ModelError> {
    if sigma.len() != table.vertex_count() {
        return Err(ModelError::SpinLengthMismatch {
            got: sigma.len(),
            want: table.vertex_count(),
        });
    }
    if (x as usize) >= table.vertex_count() {
        return Err(ModelError::InvalidVertex(x));
    }
    let mut local = h;
    for &(y, j) in table.interactions(x) {
        local += j * sigma.sign(y);
    }
    Ok(2.0 * sigma.sign(x) * local)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{build_box, build_torus};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn single_edge() -> Graph {
        Graph::from_parts(
            "custom",
            "edge",
            vec![vec![1], vec![0]],
            vec![0, 0],
            0,
            None,
            vec![false, false],
        )
        .unwrap()
    }

    #[test]
    fn hamiltonian_single_edge_by_hand() {
        let g = single_edge();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(1.0)).unwrap();
        let pp = SpinConfiguration::from_signs(&[1, 1]);
        let pm = SpinConfiguration::from_signs(&[1, -1]);
        assert_eq!(hamiltonian(&t, 0.0, &pp).unwrap(), -1.0);
        assert_eq!(hamiltonian(&t, 0.0, &pm).unwrap(), 1.0);
        assert_eq!(hamiltonian(&t, 0.5, &pp).unwrap(), -2.0);
    }

    #[test]
    fn delta_energy_by_hand() {
        let g = single_edge();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(1.0)).unwrap();
        let pp = SpinConfiguration::from_signs(&[1, 1]);
        assert_eq!(delta_energy(&t, 0.0, &pp, 0).unwrap(), 2.0);

        let isolated = Graph::from_parts(
            "custom",
            "point",
            vec![vec![]],
            vec![0],
            0,
            None,
            vec![false],
        )
        .unwrap();
        let t1 = CouplingTable::build(&isolated, &Couplings::nearest_neighbor(1.0)).unwrap();
        let plus = SpinConfiguration::from_signs(&[1]);
        assert_eq!(delta_energy(&t1, 1.0, &plus, 0).unwrap(), 2.0);
    }

    #[test]
    fn delta_matches_recomputation_on_box() {
        let g = build_box(2, 3).unwrap();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(0.7)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = 0.3;
        for _ in 0..10_000 {
            let signs: Vec<i8> = (0..9).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
            let mut sigma = SpinConfiguration::from_signs(&signs);
            let x = rng.random_range(0..9u32);
            let before = hamiltonian(&t, h, &sigma).unwrap();
            let delta = delta_energy(&t, h, &sigma, x).unwrap();
            sigma.flip(x);
            let after = hamiltonian(&t, h, &sigma).unwrap();
            assert!((delta - (after - before)).abs() < 1e-12);
        }
    }

    #[test]
    fn spin_flip_symmetry_at_zero_field() {
        let g = build_box(2, 3).unwrap();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(1.3)).unwrap();
        for mask in 0u32..512 {
            let signs: Vec<i8> = (0..9).map(|v| if mask >> v & 1 == 1 { 1 } else { -1 }).collect();
            let mut sigma = SpinConfiguration::from_signs(&signs);
            let e = hamiltonian(&t, 0.0, &sigma).unwrap();
            sigma.flip_all();
            assert_eq!(hamiltonian(&t, 0.0, &sigma).unwrap(), e);
        }
    }

    #[test]
    fn distance_two_couplings_on_path() {
        let g = build_box(1, 3).unwrap();
        let c = Couplings::ByDistance(BTreeMap::from([(1, 1.0), (2, 0.25)]));
        let t = CouplingTable::build(&g, &c).unwrap();
        assert_eq!(t.pairs().len(), 3);
        // σ = (+,+,+): H = −(1 + 1 + 0.25)
        let all = SpinConfiguration::all_plus(3);
        assert_eq!(hamiltonian(&t, 0.0, &all).unwrap(), -2.25);
    }

    #[test]
    fn couplings_validation() {
        assert!(Couplings::nearest_neighbor(-1.0).validate().is_err());
        assert!(Couplings::nearest_neighbor(f64::NAN).validate().is_err());
        assert!(Couplings::ByDistance(BTreeMap::from([(0, 1.0)]))
            .validate()
            .is_err());
        assert!(Couplings::ByEdgeOrbit(BTreeMap::from([((1, 0), 1.0)]))
            .validate()
            .is_err());
        assert!(Couplings::nearest_neighbor(0.0).validate().is_ok());
    }

    #[test]
    fn edge_orbit_lookup() {
        let g = single_edge();
        let ok = Couplings::ByEdgeOrbit(BTreeMap::from([((0, 0), 2.0)]));
        let t = CouplingTable::build(&g, &ok).unwrap();
        assert_eq!(t.pairs(), &[(0, 1, 2.0)]);
        let missing = Couplings::ByEdgeOrbit(BTreeMap::from([((0, 1), 2.0)]));
        assert!(matches!(
            CouplingTable::build(&g, &missing),
            Err(ModelError::MissingOrbit(0, 0))
        ));
    }

    #[test]
    fn transitive_graph_has_constant_edge_coupling() {
        let g = build_torus(2, 4).unwrap();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(0.8)).unwrap();
        assert_eq!(t.pairs().len(), 32);
        assert!(t.pairs().iter().all(|&(_, _, j)| j == 0.8));
    }

    #[test]
    fn gibbs_params_validation() {
        assert!(GibbsParams::new(-0.1, 0.0, BoundaryCondition::Free).is_err());
        assert!(GibbsParams::new(f64::INFINITY, 0.0, BoundaryCondition::Free).is_err());
        assert!(GibbsParams::new(1.0, f64::NAN, BoundaryCondition::Free).is_err());
        let bad_seq = BoundaryCondition::FieldSequence(vec![0.1, 0.1]);
        assert!(GibbsParams::new(1.0, 0.0, bad_seq).is_err());
        let neg_seq = BoundaryCondition::FieldSequence(vec![0.1, -0.05]);
        assert!(GibbsParams::new(1.0, 0.0, neg_seq).is_err());
        let good = BoundaryCondition::FieldSequence(vec![0.1, 0.05, 0.025]);
        assert!(GibbsParams::new(1.0, 0.0, good).is_ok());
    }

    #[test]
    fn spin_configuration_bit_ops() {
        let mut s = SpinConfiguration::all_minus(70);
        assert_eq!(s.magnetization(), -70);
        s.set_plus(69, true);
        assert!(s.is_plus(69));
        assert_eq!(s.magnetization(), -68);
        s.flip(69);
        assert_eq!(s.magnetization(), -70);
        s.flip_all();
        assert_eq!(s.magnetization(), 70);
        let signs: Vec<i8> = (0..70).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let s2 = SpinConfiguration::from_signs(&signs);
        let expect: i64 = signs.iter().map(|&x| x as i64).sum();
        assert_eq!(s2.magnetization(), expect);
    }

    #[test]
    fn length_mismatch_rejected() {
        let g = single_edge();
        let t = CouplingTable::build(&g, &Couplings::nearest_neighbor(1.0)).unwrap();
        let s = SpinConfiguration::all_plus(3);
        assert!(matches!(
            hamiltonian(&t, 0.0, &s),
            Err(ModelError::SpinLengthMismatch { got: 3, want: 2 })
        ));
        let s2 = SpinConfiguration::all_plus(2);
        assert!(matches!(
            delta_energy(&t, 0.0, &s2, 5),
            Err(ModelError::InvalidVertex(5))
        ));
    }
}
