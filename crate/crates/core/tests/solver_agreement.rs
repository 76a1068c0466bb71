mod common;

use common::{generated_instance, sampled_instance, sampled_pair_instance};
use qlext_core::oracle::{solve_brute_force, OracleBudget};
use qlext_core::two_vertex::solve_two_vertices;
use qlext_core::{solve_fpt_kappa_ell, solve_xp, Instance, SolveOptions};

fn agree(inst: &Instance, label: &str) -> bool {
    let opts = SolveOptions::default();
    let oracle = solve_brute_force(inst, &OracleBudget::default()).unwrap();
    let xp = solve_xp(inst, &opts).unwrap();
    let fpt = solve_fpt_kappa_ell(inst, &opts).unwrap();
    assert_eq!(xp.layout.is_some(), oracle.is_solved(), "xp, {label}");
    assert_eq!(fpt.layout.is_some(), oracle.is_solved(), "fpt, {label}");
    for layout in [xp.layout, fpt.layout].into_iter().flatten() {
        assert!(inst.is_solution(&layout).unwrap(), "{label}");
    }
    oracle.is_solved()
}

#[test]
fn sampled_instances_agree() {
    let mut solvable = 0;
    for seed in 0..600 {
        let inst = sampled_instance(seed, 8, 3, 6);
        solvable += agree(&inst, &format!("seed {seed}")) as usize;
    }
    assert!(solvable > 100 && 600 - solvable > 50, "{solvable}");
}

#[test]
fn generated_instances_agree() {
    for seed in 0..400 {
        let Some((inst, known)) = generated_instance(seed) else { continue };
        let solved = agree(&inst, &format!("seed {seed}"));
        assert!(solved || !known, "seed {seed} was generated solvable");
    }
}

#[test]
fn two_vertex_algorithm_agrees() {
    let mut solvable = 0;
    for seed in 0..3000 {
        let inst = sampled_pair_instance(seed, 11, 3, 12);
        let oracle = solve_brute_force(&inst, &OracleBudget::default()).unwrap();
        let two = solve_two_vertices(&inst, &SolveOptions::default()).unwrap();
        assert_eq!(two.layout.is_some(), oracle.is_solved(), "seed {seed}");
        if let Some(layout) = two.layout {
            assert!(inst.is_solution(&layout).unwrap(), "seed {seed}");
            solvable += 1;
        }
    }
    assert!(solvable > 300 && 3000 - solvable > 200, "{solvable}");
}
