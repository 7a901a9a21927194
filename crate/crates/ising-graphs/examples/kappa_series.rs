//! The minimal two-point function kappa_beta(n) = min over the radius-n
//! ball of <s_x s_y>, its supermultiplicativity, and the Fekete root
//! sequence kappa(n)^(1/n) whose supremum rho controls how fast the
//! minimum can decay.
//!
//!     cargo run --release --example kappa_series

use ising_graphs::graphs::{build_torus, build_tree_ball};
use ising_graphs::model::CouplingTable;
use ising_graphs::paperchecks::{
    check_supermultiplicative, fekete_limit, kappa, rho_bound, suggest_k, Engine,
};
use ising_graphs::Couplings;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let couplings = Couplings::nearest_neighbor(1.0);

    // --- On the tree the series is exactly geometric: kappa(n) = tanh(b)^n,
    // supermultiplicativity holds with equality, and every Fekete root
    // equals tanh(b).
    let tree = build_tree_ball(3, 9)?;
    let table = CouplingTable::build(&tree, &couplings)?;
    let beta = 0.5;
    let series = kappa(&tree, &table, beta, tree.origin(), 8, Engine::exact_default())?;
    println!("3-regular tree, beta = {beta} (tanh = {:.6}):", beta.tanh());
    println!("{:>3} {:>20} {:>12} {:>8}", "n", "kappa(n)", "root", "argmin");
    let fekete = fekete_limit(&series)?;
    for v in &series.values {
        let root = if v.n == 0 { f64::NAN } else { fekete.roots[v.n as usize - 1].1 };
        println!("{:>3} {:>20.14} {:>12.6} {:>8}", v.n, v.value, root, v.argmin);
    }
    let violations = check_supermultiplicative(&series, 1e-12);
    println!(
        "supermultiplicativity kappa(m+n) >= kappa(m) kappa(n): {} violations",
        violations.len()
    );
    println!("sup of roots (finite-volume rho) = {:.6}\n", fekete.sup);

    // --- On a ring the series is no longer geometric: the correlation
    // picks up a wrap-around contribution ~ tanh(b)^(L-n) from the far
    // arm of the cycle, so the Fekete roots creep upward with n instead
    // of staying flat. Supermultiplicativity survives anyway -- it only
    // needs Griffiths, not a product structure.
    let ring = build_torus(1, 20)?;
    let rtable = CouplingTable::build(&ring, &couplings)?;
    let rseries = kappa(&ring, &rtable, 0.35, ring.origin(), 10, Engine::exact_default())?;
    let rfekete = fekete_limit(&rseries)?;
    println!("ring L = 20, beta = 0.35:");
    println!("{:>3} {:>20} {:>12} {:>8}", "n", "kappa(n)", "root", "argmin");
    for v in rseries.values.iter().skip(1) {
        let root = rfekete.roots[v.n as usize - 1].1;
        println!("{:>3} {:>20.14} {:>12.6} {:>8}", v.n, v.value, root, v.argmin);
    }
    let rviol = check_supermultiplicative(&rseries, 1e-12);
    println!("supermultiplicativity: {} violations\n", rviol.len());

    // --- rho over a grid of temperatures, and the k it buys.
    //
    // Whenever the adjacent two-point value c beats rho^k, spheres of
    // radius k^n carry witnesses whose pair correlations are summable:
    // the engine of the K_n construction (see the kn_construction
    // example). suggest_k returns the smallest usable k.
    let grid = [0.2, 0.35, 0.5];
    let rho = rho_bound(&tree, &table, tree.origin(), &grid, 8, Engine::exact_default())?;
    println!("tree rho estimates:");
    for (b, sup) in &rho.rows {
        println!("  beta = {b:<5}: sup_n kappa^(1/n) = {sup:.6}");
    }
    let c = 0.5f64.tanh();
    let k = suggest_k(c, rho.max_sup)?;
    println!(
        "with c = tanh(0.5) = {c:.4} and rho = {:.4}: smallest k >= 2 with rho^k <= c is k = {k}",
        rho.max_sup
    );
    Ok(())
}
