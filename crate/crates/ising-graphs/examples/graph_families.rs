//! Tour of the graph families: build a finite ball of each, inspect its
//! growth and isoperimetry, and round-trip it through the text format.
//!
//!     cargo run --release --example graph_families

use ising_graphs::graphs::{
    build_box, build_lamplighter_ball, build_torus, build_tree_ball, Graph,
};

fn describe(g: &Graph) -> Result<(), Box<dyn std::error::Error>> {
    let origin = g.origin();
    let dist = g.distances_from(origin);
    let radius = *dist.iter().max().unwrap();
    // Growth estimates only make sense inside the largest ball that does
    // not touch the generation boundary.
    let clean = (0..g.vertex_count())
        .filter(|&v| g.is_generation_boundary(v as u32))
        .map(|v| dist[v].saturating_sub(1))
        .min()
        .unwrap_or(radius);

    println!("{}", g.id_string());
    println!("  vertices {:>7}   edges {:>7}", g.vertex_count(), g.edge_count());
    if clean >= 1 {
        let growth = g.growth_rate_estimate(origin, clean)?;
        let last = growth.rows.last().unwrap();
        println!(
            "  |B_n| for n <= {clean}: {:?}",
            growth.rows.iter().map(|r| r.ball_size).collect::<Vec<_>>()
        );
        println!(
            "  growth root |B_{}|^(1/{}) = {:.4}  (running min {:.4})",
            last.n, last.n, last.root, last.running_min
        );
    }
    let cheeger = g.cheeger_estimate(&g.default_cheeger_candidates())?;
    println!(
        "  Cheeger upper bound {:.4} from a candidate set of size {}",
        cheeger.min_ratio,
        cheeger.rows.len()
    );

    // The text format is the lingua franca between runs: emit, re-parse,
    // and confirm nothing is lost.
    let round = Graph::from_text(&g.to_text())?;
    assert_eq!(round.to_text(), g.to_text());
    println!("  text round-trip: ok\n");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // Polynomial growth: boxes and tori of Z^d. The growth root sinks
    // toward 1 as the volume grows; the torus is closed, so its largest
    // ball candidate has empty boundary and the Cheeger bound hits 0.
    describe(&build_torus(2, 8)?)?;
    describe(&build_box(2, 9)?)?;

    // Exponential growth, non-amenable: the 3-regular tree. The growth
    // root approaches the branching number 2 from above and the Cheeger
    // bound stays near 1/2 (every subtree has a large leaf boundary).
    describe(&build_tree_ball(3, 9)?)?;

    // Exponential growth, yet amenable: the lamplighter group Z2 wr Z on
    // its 3-regular Cayley graph (move the lamplighter left/right, or
    // toggle the lamp under it). At small radii its ball statistics mimic
    // the tree's; amenability only shows up at radii far beyond
    // exhaustive reach, which is what makes the family a good stress
    // test for the estimators here.
    describe(&build_lamplighter_ball(9)?)?;

    Ok(())
}
