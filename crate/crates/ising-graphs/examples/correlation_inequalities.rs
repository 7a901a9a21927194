//! Correlation inequalities, checked numerically rather than assumed:
//! Griffiths positivity and the triple product bound, monotonicity of
//! two-point functions in volume and in temperature, and the growth
//! bound kappa(n) |B_n| <= sum over the ball of <s_x s_y>.
//!
//!     cargo run --release --example correlation_inequalities

use ising_graphs::exact::{enumerate, Observable};
use ising_graphs::graphs::{build_box, build_torus, build_tree_ball, Graph};
use ising_graphs::model::CouplingTable;
use ising_graphs::paperchecks::{growth_bound_check, monotonicity_profile, Engine};
use ising_graphs::{Couplings, GibbsParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let couplings = Couplings::nearest_neighbor(1.0);

    // --- Griffiths II on the 4x4 torus: every <s_x s_y> is nonnegative
    // and every triple satisfies <s_x s_y> >= <s_x s_z><s_z s_y>.
    let torus = build_torus(2, 4)?;
    let table = CouplingTable::build(&torus, &couplings)?;
    let n = torus.vertex_count() as u32;
    let pairs: Vec<Observable> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| Observable::pair(x, y)))
        .collect();
    let res = enumerate(&torus, &table, &GibbsParams::free(0.44), &pairs)?;
    let corr = |x: u32, y: u32| -> f64 {
        if x == y { 1.0 } else { res.observables[&Observable::pair(x, y)] }
    };
    let min_pair = res.observables.values().cloned().fold(f64::INFINITY, f64::min);
    let mut min_slack = f64::INFINITY;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                min_slack = min_slack.min(corr(x, y) - corr(x, z) * corr(z, y));
            }
        }
    }
    println!("4x4 torus at beta = 0.44:");
    println!("  min <s_x s_y> over all pairs   = {min_pair:+.3e}  (Griffiths: >= 0)");
    println!("  min triple slack over {} triples = {min_slack:+.3e}  (>= 0)\n", n.pow(3));

    // --- Monotonicity: fix the pair (-1, +1) around the center and grow
    // the system around it. Griffiths says more couplings can only help;
    // monotonicity_profile asserts nondecreasing along both axes (volume
    // order as listed, then beta) and errors on any violation.
    //
    // Two instructive regimes. Nested 1d boxes leave the correlation
    // EXACTLY constant -- the volume is acyclic, so <s_x s_y> is the
    // product of tanh(beta) along the unique path, blind to everything
    // outside it. Closing the segment into a ring adds a second route
    // and the value strictly rises.
    let segment = build_box(1, 9)?;
    let longer = build_box(1, 13)?;
    let ring = build_torus(1, 9)?;
    let pair_of = |g: &Graph| {
        (g.box_offset_vertex(&[-1]).unwrap(), g.box_offset_vertex(&[1]).unwrap())
    };
    let volumes: Vec<(&Graph, (u32, u32))> = vec![
        (&segment, pair_of(&segment)),
        (&longer, pair_of(&longer)),
        (&ring, (8, 1)), // same two sites, now also joined the long way round
    ];
    let grid: Vec<f64> = (0..=10).map(|i| f64::from(i) * 0.1).collect();
    let profile = monotonicity_profile(&volumes, &couplings, &grid, 24)?;
    println!("<s_-1 s_+1> under growing volumes (columns: beta = 0.0, 0.2, ..., 1.0):");
    for (label, row) in profile.volume_labels.iter().zip(&profile.values) {
        let cells: Vec<String> = row.iter().step_by(2).map(|v| format!("{v:.4}")).collect();
        println!("  {label:<12} {}", cells.join("  "));
    }
    println!("  nondecreasing in volume and in beta: checked\n");

    // --- The growth bound. kappa(n) |B_n| is a minimum times a count,
    // the partial susceptibility a sum over the same ball, so the
    // inequality is pointwise; the interesting part is how much room is
    // left. On the tree at beta J = 0.3 the susceptibility converges to
    // the geometric limit 1 + 3t/(1 - 2t) because 2 tanh(0.3) < 1.
    let tree = build_tree_ball(3, 13)?;
    let ttable = CouplingTable::build(&tree, &couplings)?;
    let rows = growth_bound_check(&tree, &ttable, 0.3, tree.origin(), 12, Engine::exact_default())?;
    let t = 0.3f64.tanh();
    let limit = 1.0 + 3.0 * t / (1.0 - 2.0 * t);
    println!("3-regular tree, beta J = 0.3 (geometric limit {limit:.6}):");
    println!("{:>3} {:>8} {:>14} {:>16}", "n", "|B_n|", "kappa |B_n|", "partial chi");
    for r in rows.iter().step_by(2) {
        println!(
            "{:>3} {:>8} {:>14.6} {:>16.6}",
            r.n, r.ball_size, r.kappa_times_ball, r.partial_susceptibility
        );
    }
    let last = rows.last().unwrap();
    println!(
        "  chi(12) = {:.6}, {:.3}% away from the limit",
        last.partial_susceptibility,
        100.0 * (last.partial_susceptibility - limit).abs() / limit
    );
    Ok(())
}
