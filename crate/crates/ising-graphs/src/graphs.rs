//! Finite balls and boxes of the infinite graph families under study, with
//! distance, boundary, growth, and isoperimetry primitives.
//!
//! Infinite graphs are represented only through finite generated pieces.
//! Every generator marks the vertices whose neighborhoods are incomplete
//! relative to the infinite family (the *generation boundary*); operations
//! whose answer would depend on vertices outside the generated piece fail
//! loudly instead of silently truncating.

use std::collections::HashMap;
use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

/// Default radius cap for lamplighter ball generation. Ball sizes grow
/// roughly like 1.64^r; radius 24 is about one million vertices.
pub const DEFAULT_LAMPLIGHTER_RADIUS_CAP: u32 = 24;

/// Hard ceiling on generated vertex counts, shared by all builders.
const MAX_VERTICES: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("lamplighter radius {radius} exceeds configured cap {cap}")]
    RadiusCap { radius: u32, cap: u32 },
    #[error("ball of radius {n} touches the generation boundary; grow the graph or shrink the query")]
    Saturated { n: u32 },
    #[error("graph text parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph structure: {0}")]
    Structure(String),
}

/// A strictly sorted set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<u32>);

impl VertexSet {
    /// Builds a set from arbitrary ids; sorts and removes duplicates.
    pub fn new(mut ids: Vec<u32>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        VertexSet(ids)
    }

    /// Accepts an already strictly sorted id list.
    pub fn from_sorted(ids: Vec<u32>) -> Result<Self, GraphError> {
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GraphError::Structure(
                "vertex set must be strictly sorted".into(),
            ));
        }
        Ok(VertexSet(ids))
    }

    pub fn singleton(id: u32) -> Self {
        VertexSet(vec![id])
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// True if `self` is contained in `other`.
    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

/// A finite piece of an infinite (quasi-)transitive graph.
///
/// Adjacency lists are sorted and symmetric, labels carry the orbit tag of
/// each vertex in the infinite family (all zero for the transitive families
/// built here), and `origin` is the distinguished vertex every ball and
/// two-point quantity is anchored at.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    family: String,
    params: String,
    adjacency: Vec<Vec<u32>>,
    labels: Vec<u32>,
    origin: u32,
    radius: Option<u32>,
    boundary_flags: Vec<bool>,
}

impl Graph {
    /// Assembles a graph from raw parts, validating every structural
    /// invariant (sorted symmetric adjacency, no loops, ids in range).
    pub fn from_parts(
        family: impl Into<String>,
        params: impl Into<String>,
        adjacency: Vec<Vec<u32>>,
        labels: Vec<u32>,
        origin: u32,
        radius: Option<u32>,
        boundary_flags: Vec<bool>,
    ) -> Result<Self, GraphError> {
        let n = adjacency.len();
        if labels.len() != n || boundary_flags.len() != n {
            return Err(GraphError::Structure(
                "labels/boundary flags must match vertex count".into(),
            ));
        }
        if (origin as usize) >= n {
            return Err(GraphError::Structure("origin out of range".into()));
        }
        for (v, nbrs) in adjacency.iter().enumerate() {
            for w in nbrs.windows(2) {
                if w[0] >= w[1] {
                    return Err(GraphError::Structure(format!(
                        "neighbor list of {v} not strictly sorted"
                    )));
                }
            }
            for &u in nbrs {
                if (u as usize) >= n {
                    return Err(GraphError::Structure(format!(
                        "neighbor {u} of {v} out of range"
                    )));
                }
                if u as usize == v {
                    return Err(GraphError::Structure(format!("self-loop at {v}")));
                }
                if adjacency[u as usize].binary_search(&(v as u32)).is_err() {
                    return Err(GraphError::Structure(format!(
                        "adjacency not symmetric: {v} -> {u}"
                    )));
                }
            }
        }
        Ok(Graph {
            family: family.into(),
            params: params.into(),
            adjacency,
            labels,
            origin,
            radius,
            boundary_flags,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(|n| n.len()).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn label(&self, v: u32) -> u32 {
        self.labels[v as usize]
    }

    pub fn origin(&self) -> u32 {
        self.origin
    }

    pub fn radius(&self) -> Option<u32> {
        self.radius
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &str {
        &self.params
    }

    /// Short identifier used in output records and task keys.
    pub fn id_string(&self) -> String {
        format!("{} {}", self.family, self.params)
    }

    /// True if the vertex sits on the generation boundary, i.e. some of its
    /// neighbors in the infinite family were not generated.
    pub fn is_generation_boundary(&self, v: u32) -> bool {
        self.boundary_flags[v as usize]
    }

    pub fn generation_boundary(&self) -> VertexSet {
        VertexSet(
            (0..self.vertex_count() as u32)
                .filter(|&v| self.boundary_flags[v as usize])
                .collect(),
        )
    }

    /// Unordered edges (x, y) with x < y, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(x, nbrs)| {
            let x = x as u32;
            nbrs.iter()
                .copied()
                .filter(move |&y| y > x)
                .map(move |y| (x, y))
        })
    }

    /// Graph distances from `x` by breadth-first search.
    pub fn distances_from(&self, x: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[x as usize] = 0;
        queue.push_back(x);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            for &u in self.neighbors(v) {
                if dist[u as usize] == u32::MAX {
                    dist[u as usize] = d + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The ball of radius `n` around `x`: all vertices at distance <= n.
    pub fn ball(&self, x: u32, n: u32) -> VertexSet {
        let dist = self.distances_from(x);
        VertexSet(
            (0..self.vertex_count() as u32)
                .filter(|&v| dist[v as usize] <= n)
                .collect(),
        )
    }

    /// Inner vertex boundary of `a`: members of `a` with a neighbor outside.
    pub fn boundary(&self, a: &VertexSet) -> VertexSet {
        VertexSet(
            a.iter()
                .filter(|&v| self.neighbors(v).iter().any(|&u| !a.contains(u)))
                .collect(),
        )
    }

    /// Errors unless the whole ball of radius `n` around `x` avoids the
    /// generation boundary, so that quantities over it are unbiased.
    pub fn require_unsaturated(&self, x: u32, n: u32) -> Result<(), GraphError> {
        let dist = self.distances_from(x);
        for v in 0..self.vertex_count() {
            if self.boundary_flags[v] && dist[v] <= n {
                return Err(GraphError::Saturated { n });
            }
        }
        Ok(())
    }

    /// Ball volumes and their n-th roots, the finite surrogate for the
    /// growth exponent. Rejects any radius whose ball touches the
    /// generation boundary (the estimate would be biased low).
    pub fn growth_rate_estimate(&self, x: u32, n_max: u32) -> Result<GrowthEstimate, GraphError> {
        if n_max == 0 {
            return Err(GraphError::InvalidParam("growth needs n_max >= 1".into()));
        }
        let dist = self.distances_from(x);
        for v in 0..self.vertex_count() {
            if self.boundary_flags[v] && dist[v] <= n_max {
                return Err(GraphError::Saturated { n: dist[v] });
            }
        }
        let mut counts = vec![0usize; n_max as usize + 1];
        for v in 0..self.vertex_count() {
            let d = dist[v];
            if d <= n_max {
                counts[d as usize] += 1;
            }
        }
        let mut rows = Vec::with_capacity(n_max as usize);
        let mut ball = counts[0];
        let mut running_min = f64::INFINITY;
        for n in 1..=n_max {
            ball += counts[n as usize];
            let root = (ball as f64).powf(1.0 / n as f64);
            running_min = running_min.min(root);
            rows.push(GrowthRow {
                n,
                ball_size: ball,
                root,
                running_min,
            });
        }
        Ok(GrowthEstimate { rows })
    }

    /// Minimum of |boundary(A)| / |A| over the candidate sets: an upper
    /// bound on the isoperimetric infimum, nothing more.
    pub fn cheeger_estimate(&self, candidates: &[VertexSet]) -> Result<CheegerReport, GraphError> {
        if candidates.is_empty() {
            return Err(GraphError::InvalidParam("no candidate sets".into()));
        }
        let mut rows = Vec::with_capacity(candidates.len());
        let mut min_ratio = f64::INFINITY;
        let mut argmin = 0;
        for (i, a) in candidates.iter().enumerate() {
            if a.is_empty() {
                return Err(GraphError::InvalidParam("empty candidate set".into()));
            }
            if a.iter().any(|v| (v as usize) >= self.vertex_count()) {
                return Err(GraphError::InvalidParam("candidate set not in V".into()));
            }
            let b = self.boundary(a);
            let ratio = b.len() as f64 / a.len() as f64;
            if ratio < min_ratio {
                min_ratio = ratio;
                argmin = i;
            }
            rows.push(CheegerRow {
                set_size: a.len(),
                boundary_size: b.len(),
                ratio,
            });
        }
        Ok(CheegerReport {
            rows,
            min_ratio,
            argmin,
        })
    }

    /// Default Cheeger candidates: balls around the origin, restricted to
    /// radii that stay clear of the generation boundary. On families with
    /// no generation boundary (torus) the balls run to the eccentricity of
    /// the origin, so the final candidate is all of V.
    pub fn default_cheeger_candidates(&self) -> Vec<VertexSet> {
        let dist = self.distances_from(self.origin);
        let max_dist = dist
            .iter()
            .filter(|&&d| d != u32::MAX)
            .copied()
            .max()
            .unwrap_or(0);
        let mut limit = max_dist;
        for v in 0..self.vertex_count() {
            if self.boundary_flags[v] && dist[v] != u32::MAX {
                limit = limit.min(dist[v].saturating_sub(1));
            }
        }
        let mut out = Vec::new();
        for n in 1..=limit {
            out.push(VertexSet(
                (0..self.vertex_count() as u32)
                    .filter(|&v| dist[v as usize] <= n)
                    .collect(),
            ));
        }
        out
    }

    /// Line-oriented text serialization: a header
    /// `graph <family> <params> <vertex_count>` followed by one line per
    /// vertex, `id label deg n1 n2 ...`, ids and neighbors ascending.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "graph {} {} {}",
            self.family,
            self.params,
            self.vertex_count()
        )
        .unwrap();
        for v in 0..self.vertex_count() {
            write!(s, "{} {} {}", v, self.labels[v], self.adjacency[v].len()).unwrap();
            for &u in &self.adjacency[v] {
                write!(s, " {u}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Parses the text format produced by [`Graph::to_text`]. Origin,
    /// radius, and generation-boundary flags are reconstructed from the
    /// family name and parameter string; unrecognized families get origin 0
    /// and an empty generation boundary.
    pub fn from_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("graph") {
            return Err(GraphError::Parse {
                line: 1,
                msg: "header must start with 'graph'".into(),
            });
        }
        let family = parts
            .next()
            .ok_or(GraphError::Parse {
                line: 1,
                msg: "missing family".into(),
            })?
            .to_string();
        let params = parts
            .next()
            .ok_or(GraphError::Parse {
                line: 1,
                msg: "missing params".into(),
            })?
            .to_string();
        let n: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(GraphError::Parse {
                line: 1,
                msg: "missing or bad vertex count".into(),
            })?;

        let mut adjacency = vec![Vec::new(); n];
        let mut labels = vec![0u32; n];
        let mut seen = vec![false; n];
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut toks = line.split_whitespace();
            let parse_tok = |t: Option<&str>, what: &str| -> Result<u32, GraphError> {
                t.and_then(|s| s.parse().ok()).ok_or(GraphError::Parse {
                    line: lineno,
                    msg: format!("bad {what}"),
                })
            };
            let id = parse_tok(toks.next(), "vertex id")? as usize;
            if id >= n || seen[id] {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "vertex id out of range or repeated".into(),
                });
            }
            seen[id] = true;
            labels[id] = parse_tok(toks.next(), "label")?;
            let deg = parse_tok(toks.next(), "degree")? as usize;
            let mut nbrs = Vec::with_capacity(deg);
            for _ in 0..deg {
                nbrs.push(parse_tok(toks.next(), "neighbor")?);
            }
            if toks.next().is_some() {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "trailing tokens".into(),
                });
            }
            adjacency[id] = nbrs;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("vertex {missing} missing"),
            });
        }

        let kv = parse_params(&params);
        let (origin, radius) = match family.as_str() {
            "box" => {
                let d = kv_get(&kv, "d")?;
                let l = kv_get(&kv, "L")?;
                (box_center_id(d, l), None)
            }
            "tree" | "lamplighter" => (0, Some(kv_get(&kv, "radius")?)),
            _ => (0, None),
        };
        let mut g = Graph::from_parts(family, params, adjacency, labels, origin, radius, vec![
            false;
            n
        ])?;
        g.boundary_flags = reconstruct_boundary_flags(&g)?;
        Ok(g)
    }

    /// Vertex of a `box` graph at the given signed offsets from the center,
    /// if inside the box.
    pub fn box_offset_vertex(&self, offsets: &[i64]) -> Option<u32> {
        if self.family != "box" {
            return None;
        }
        let kv = parse_params(&self.params);
        let d = kv_get(&kv, "d").ok()? as usize;
        let l = kv_get(&kv, "L").ok()? as i64;
        if offsets.len() != d {
            return None;
        }
        let c = (l - 1) / 2;
        let mut id: i64 = 0;
        let mut stride: i64 = 1;
        for &off in offsets {
            let coord = c + off;
            if !(0..l).contains(&coord) {
                return None;
            }
            id += coord * stride;
            stride *= l;
        }
        Some(id as u32)
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthRow {
    pub n: u32,
    pub ball_size: usize,
    /// |ball|^(1/n)
    pub root: f64,
    /// running minimum of the roots, the liminf surrogate
    pub running_min: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GrowthEstimate {
    pub rows: Vec<GrowthRow>,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheegerRow {
    pub set_size: usize,
    pub boundary_size: usize,
    pub ratio: f64,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct CheegerReport {
    pub rows: Vec<CheegerRow>,
    pub min_ratio: f64,
    pub argmin: usize,
}

fn parse_params(params: &str) -> Vec<(String, String)> {
    params
        .split(',')
        .filter_map(|kv| {
            let mut it = kv.splitn(2, '=');
            Some((it.next()?.to_string(), it.next()?.to_string()))
        })
        .collect()
}

fn kv_get(kv: &[(String, String)], key: &str) -> Result<u32, GraphError> {
    kv.iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.parse().ok())
        .ok_or_else(|| GraphError::Parse {
            line: 1,
            msg: format!("missing param {key}"),
        })
}

fn box_center_id(d: u32, l: u32) -> u32 {
    let c = (l - 1) / 2;
    let mut id = 0u64;
    let mut stride = 1u64;
    for _ in 0..d {
        id += c as u64 * stride;
        stride *= l as u64;
    }
    id as u32
}

fn reconstruct_boundary_flags(g: &Graph) -> Result<Vec<bool>, GraphError> {
    let n = g.vertex_count();
    match g.family() {
        "torus" => Ok(vec![false; n]),
        "box" => {
            let kv = parse_params(g.params());
            let d = kv_get(&kv, "d")?;
            Ok((0..n).map(|v| g.degree(v as u32) < 2 * d as usize).collect())
        }
        "tree" | "lamplighter" => {
            let r = g.radius().ok_or(GraphError::Structure(
                "ball family without radius".into(),
            ))?;
            let dist = g.distances_from(g.origin());
            Ok((0..n).map(|v| dist[v] >= r).collect())
        }
        _ => Ok(vec![false; n]),
    }
}

/// A graph family with its shape parameters; `build` takes the remaining
/// size parameter (side length for torus/box, radius for the ball families).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Torus { d: u32 },
    Box { d: u32 },
    Tree { degree: u32 },
    Lamplighter,
}

impl Family {
    pub fn build(&self, size: u32) -> Result<Graph, GraphError> {
        match *self {
            Family::Torus { d } => build_torus(d, size),
            Family::Box { d } => build_box(d, size),
            Family::Tree { degree } => build_tree_ball(degree, size),
            Family::Lamplighter => build_lamplighter_ball(size),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Torus { .. } => "torus",
            Family::Box { .. } => "box",
            Family::Tree { .. } => "tree",
            Family::Lamplighter => "lamplighter",
        }
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Family::Torus { d } => write!(f, "torus(d={d})"),
            Family::Box { d } => write!(f, "box(d={d})"),
            Family::Tree { degree } => write!(f, "tree(degree={degree})"),
            Family::Lamplighter => write!(f, "lamplighter"),
        }
    }
}

fn check_volume(count: u64) -> Result<(), GraphError> {
    if count > MAX_VERTICES {
        return Err(GraphError::InvalidParam(format!(
            "requested graph has {count} vertices, limit is {MAX_VERTICES}"
        )));
    }
    Ok(())
}

/// d-dimensional discrete torus of side L. Every vertex has degree 2d;
/// L = 2 is rejected because opposite neighbors coincide there.
pub fn build_torus(d: u32, l: u32) -> Result<Graph, GraphError> {
    if !(1..=3).contains(&d) {
        return Err(GraphError::InvalidParam(format!("torus d must be 1..=3, got {d}")));
    }
    if l < 3 {
        return Err(GraphError::InvalidParam(format!("torus requires L >= 3, got {l}")));
    }
    let n = (l as u64).pow(d);
    check_volume(n)?;
    let n = n as usize;
    let mut adjacency = vec![Vec::with_capacity(2 * d as usize); n];
    let l = l as usize;
    for v in 0..n {
        let mut stride = 1;
        let mut rest = v;
        for _ in 0..d {
            let coord = rest % l;
            rest /= l;
            let up = v - coord * stride + ((coord + 1) % l) * stride;
            let down = v - coord * stride + ((coord + l - 1) % l) * stride;
            adjacency[v].push(up as u32);
            adjacency[v].push(down as u32);
            stride *= l;
        }
        adjacency[v].sort_unstable();
    }
    Graph::from_parts(
        "torus",
        format!("d={d},L={l}"),
        adjacency,
        vec![0; n],
        0,
        None,
        vec![false; n],
    )
}

/// d-dimensional box of side L with open (free) boundary; origin is the
/// center vertex. All boundary-face vertices carry the generation flag.
pub fn build_box(d: u32, l: u32) -> Result<Graph, GraphError> {
    if d < 1 {
        return Err(GraphError::InvalidParam("box d must be >= 1".into()));
    }
    if l < 1 {
        return Err(GraphError::InvalidParam("box L must be >= 1".into()));
    }
    let n = (l as u64).checked_pow(d).ok_or_else(|| {
        GraphError::InvalidParam("box volume overflows".into())
    })?;
    check_volume(n)?;
    let n = n as usize;
    let l = l as usize;
    let mut adjacency = vec![Vec::with_capacity(2 * d as usize); n];
    let mut flags = vec![false; n];
    for v in 0..n {
        let mut stride = 1;
        let mut rest = v;
        for _ in 0..d {
            let coord = rest % l;
            rest /= l;
            if coord + 1 < l {
                adjacency[v].push((v + stride) as u32);
            }
            if coord > 0 {
                adjacency[v].push((v - stride) as u32);
            }
            if coord == 0 || coord + 1 == l {
                flags[v] = true;
            }
            stride *= l;
        }
        adjacency[v].sort_unstable();
    }
    Graph::from_parts(
        "box",
        format!("d={d},L={l}"),
        adjacency,
        vec![0; n],
        box_center_id(d, l as u32),
        None,
        flags,
    )
}

/// Ball of the given radius in the infinite `degree`-regular tree, rooted
/// at the origin. The outermost layer is the generation boundary.
pub fn build_tree_ball(degree: u32, radius: u32) -> Result<Graph, GraphError> {
    if degree < 3 {
        return Err(GraphError::InvalidParam(format!(
            "tree degree must be >= 3, got {degree}"
        )));
    }
    // 1 + degree * ((degree-1)^radius - 1) / (degree - 2)
    let mut count: u64 = 1;
    let mut layer: u64 = 1;
    for depth in 0..radius {
        layer *= if depth == 0 { degree as u64 } else { (degree - 1) as u64 };
        count += layer;
        check_volume(count)?;
    }
    let n = count as usize;
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut depth_of = vec![0u32; n];
    let mut next_id = 1u32;
    let mut frontier = vec![0u32];
    for depth in 0..radius {
        let mut next_frontier = Vec::new();
        for &v in &frontier {
            let children = if depth == 0 { degree } else { degree - 1 };
            for _ in 0..children {
                let c = next_id;
                next_id += 1;
                adjacency[v as usize].push(c);
                adjacency[c as usize].push(v);
                depth_of[c as usize] = depth + 1;
                next_frontier.push(c);
            }
        }
        frontier = next_frontier;
    }
    let flags = depth_of.iter().map(|&d| d >= radius).collect();
    Graph::from_parts(
        "tree",
        format!("degree={degree},radius={radius}"),
        adjacency,
        vec![0; n],
        0,
        Some(radius),
        flags,
    )
}

/// Ball of the given word-metric radius around the identity in the Cayley
/// graph of the lamplighter group Z2 wr Z, generators: move the marker by
/// +1 or -1, or toggle the lamp at the marker. Uses the default radius cap.
pub fn build_lamplighter_ball(radius: u32) -> Result<Graph, GraphError> {
    build_lamplighter_ball_with_cap(radius, DEFAULT_LAMPLIGHTER_RADIUS_CAP)
}

/// As [`build_lamplighter_ball`] with an explicit radius cap (memory guard).
///
/// Elements are encoded as (lamp bitmask over the window [-r, r], marker
/// position); any lamp reachable in r steps lies inside that window.
pub fn build_lamplighter_ball_with_cap(radius: u32, cap: u32) -> Result<Graph, GraphError> {
    if cap > 31 {
        return Err(GraphError::InvalidParam(
            "lamplighter cap is limited to 31 by the 64-bit lamp window".into(),
        ));
    }
    if radius > cap {
        return Err(GraphError::RadiusCap { radius, cap });
    }
    let r = radius as i32;
    type State = (u64, i32);
    let start: State = (0, 0);
    let mut ids: HashMap<State, u32> = HashMap::new();
    let mut states: Vec<State> = vec![start];
    let mut dist: Vec<u32> = vec![0];
    ids.insert(start, 0);
    let mut head = 0usize;
    while head < states.len() {
        let (lamps, pos) = states[head];
        let d = dist[head];
        head += 1;
        if d == radius {
            continue;
        }
        let moves = [
            (lamps, pos + 1),
            (lamps, pos - 1),
            (lamps ^ (1u64 << (pos + r)), pos),
        ];
        for st in moves {
            if st.1.abs() > r {
                continue;
            }
            if !ids.contains_key(&st) {
                let id = states.len() as u32;
                ids.insert(st, id);
                states.push(st);
                dist.push(d + 1);
            }
        }
    }
    let n = states.len();
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::with_capacity(3); n];
    for (v, &(lamps, pos)) in states.iter().enumerate() {
        let moves = [
            (lamps, pos + 1),
            (lamps, pos - 1),
            (lamps ^ (1u64 << (pos + r)), pos),
        ];
        for st in moves {
            if st.1.abs() > r {
                continue;
            }
            if let Some(&u) = ids.get(&st) {
                adjacency[v].push(u);
            }
        }
        adjacency[v].sort_unstable();
    }
    let flags = dist.iter().map(|&d| d >= radius).collect();
    Graph::from_parts(
        "lamplighter",
        format!("radius={radius}"),
        adjacency,
        vec![0; n],
        0,
        Some(radius),
        flags,
    )
}
