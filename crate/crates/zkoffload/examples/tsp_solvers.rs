//! The two solvers side by side: exhaustive search where it is feasible,
//! nearest-neighbor with 2-opt refinement everywhere else, plus the
//! padding scheme circuits require.

use zkoffload::tsp::{
    fixture_map30, pad_tour, solve_exact, solve_heuristic, strip_padding, validate_tour, Tier,
    EXACT_SOLVER_LIMIT,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let map = fixture_map30();
    println!(
        "map {}: {} cities, distances 1..={}",
        map.mapnumber,
        map.n,
        map.max_distance()
    );

    // Small instance: the exact solver is the ground truth.
    let instance: Vec<u64> = (1..=8).collect();
    let best = solve_exact(&map, &instance)?;
    println!("exact    n=8: sum {:>4}  path {:?}", best.sum, best.path);

    let quick = solve_heuristic(&map, &instance, 7)?;
    println!("heuristic n=8: sum {:>4}  path {:?}", quick.sum, quick.path);
    assert!(quick.sum >= best.sum);
    assert!(validate_tour(&map, &instance, &quick)?);

    // Large instance: exhaustive search is out of reach, the heuristic
    // still returns a valid tour.
    let instance: Vec<u64> = (1..=25).collect();
    assert!(instance.len() > EXACT_SOLVER_LIMIT);
    let tour = solve_heuristic(&map, &instance, 7)?;
    assert!(validate_tour(&map, &instance, &tour)?);
    println!("heuristic n=25: sum {} over {} cities", tour.sum, tour.path.len());

    // Different seeds explore different starts; all results stay valid.
    for seed in [1u64, 2, 3] {
        let t = solve_heuristic(&map, &instance, seed)?;
        assert!(validate_tour(&map, &instance, &t)?);
        println!("  seed {seed}: sum {}", t.sum);
    }

    // Circuits consume fixed-width paths: real cities first, zero
    // sentinels after.
    let small = solve_heuristic(&map, &(1..=4).collect::<Vec<_>>(), 7)?;
    let tier = Tier::for_instance_size(small.path.len())?;
    let padded = pad_tour(&small, tier)?;
    println!("padded to tier {tier}: {padded:?}");
    assert_eq!(strip_padding(&padded)?, small.path);
    println!("stripping recovers the original path");
    Ok(())
}
