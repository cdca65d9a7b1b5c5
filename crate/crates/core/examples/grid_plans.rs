//! Validate hand-drawn plans and search every districting of a small grid.
//!
//!     cargo run --example grid_plans

use lry::grid::{count_wins, max_wins_bruteforce, validate_plan, Cell, DistrictPlan, GridState, DEFAULT_CELL_CAP};
use lry::Party;

fn draw(grid: &GridState, plan: &DistrictPlan) {
    let m = grid.m();
    let mut label = vec![b'?'; m * m];
    for (i, d) in plan.districts().iter().enumerate() {
        for c in d.cells() {
            label[(c.row - 1) * m + (c.col - 1)] = b'a' + i as u8;
        }
    }
    for row in label.chunks(m) {
        println!("    {}", String::from_utf8_lossy(row));
    }
}

fn main() -> lry::Result<()> {
    let grid = GridState::from_json(
        r#"{"m":4,"d":4,"cells":[
            ["1","1","1/2","0"],
            ["0","1/4","0","0"],
            ["1","3/4","1","0"],
            ["0","0","1/4","0"]]}"#,
    )?;
    println!("4x4 grid, districts of {}, boxes up to {}x{}", grid.d(), grid.z(), grid.z());

    let ring = DistrictPlan::from_json(
        "[[[1,1],[1,2],[2,1],[2,2]],[[1,3],[1,4],[2,3],[2,4]],[[3,1],[3,2],[4,1],[4,2]],[[3,3],[3,4],[4,3],[4,4]]]",
    )?;
    println!(
        "\nsquares: valid = {}, A wins {}",
        validate_plan(&grid, &ring).is_ok(),
        count_wins(&grid, &ring, Party::A)?
    );

    let scattered = DistrictPlan::from_json(
        "[[[1,1],[1,4],[4,1],[4,4]],[[1,2],[1,3],[2,2],[2,3]],[[2,1],[3,1],[2,4],[3,4]],[[3,2],[3,3],[4,2],[4,3]]]",
    )?;
    if let Err(problems) = validate_plan(&grid, &scattered) {
        println!("corners: rejected");
        for p in problems {
            println!("    {p}");
        }
    }

    let all: Vec<Cell> = grid.cells().collect();
    for party in Party::BOTH {
        let bf = max_wins_bruteforce(&grid, &all, party, DEFAULT_CELL_CAP)?;
        println!("\n{party:?}: {} plans, wins range {}..={}", bf.plans, bf.min_wins, bf.max_wins);
        println!("  best for {party:?}:");
        draw(&grid, &bf.best);
        println!("  worst for {party:?}:");
        draw(&grid, &bf.worst);
    }
    Ok(())
}
