//! Multigrid V-cycle solve on a periodic cube.
//!
//! `cargo run --release --example multigrid -- [class]` where class is S, W, A, B or C.

use flatpar::multigrid::{l2_norm, mg_solve, Grid3, NasClass};

fn main() -> flatpar::Result<()> {
    let class: NasClass = std::env::args().nth(1).unwrap_or_else(|| "S".into()).parse()?;
    let side = class.side();
    let ops = class.operators();
    let v = Grid3::point_charges(side, 314_159);

    println!(
        "class {class:?}: {side}^3 grid, initial residual {:.6e}",
        l2_norm(&v)
    );
    for t in 1..=class.iterations() {
        let (_, r) = mg_solve(&v, t, &ops)?;
        println!("after {t:2} iteration(s): {r:.6e}");
    }
    Ok(())
}
