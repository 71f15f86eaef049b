//! Randomized cross-module invariants, all seeded for reproducibility:
//! the connectivity-based irreducibility verdict against the
//! subspace-enumeration oracle, the family/sum equivalence, diagonal-shift
//! irreducibility, Perron positivity, phase-separator validity for
//! generated problems, the product-approximation bound, and feasibility
//! confinement of gate circuits.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcl_core::hamiltonians::{
    builtin_xy_mixing_family, check_mixer, check_mixing_family, check_phase_separator,
    objective_hamiltonian, perron_top_eigenstate, restrict, FeasibleSubspace, MixingFamily,
};
use qcl_core::linalg::{
    eig_hermitian, exp_i_hermitian, operator_norm, C64, ComplexMatrix, ComplexVector,
};
use qcl_core::oracles;
use qcl_core::problems::{make_max_independent_set, make_maxcut, solve_brute_force, Cop};
use qcl_core::qaoa::{build_gates, synthesize_schedule, trial_state, verify_lemma6, MixerKind,
    Layer, Schedule, ScheduleVariant,
};
use qcl_core::Tolerances;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        m.set(r, r, C64::new(rng.gen_range(-1.0..1.0), 0.0));
        for c in (r + 1)..dim {
            let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m.set(r, c, v);
            m.set(c, r, v.conj());
        }
    }
    m
}

/// Hermitian with a random sparse pattern and random sign structure.
fn random_sparse_hermitian(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        if rng.gen_bool(0.7) {
            m.set(r, r, C64::new(rng.gen_range(-1.0..1.0), 0.0));
        }
        for c in (r + 1)..dim {
            if rng.gen_bool(density) {
                let v = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m.set(r, c, v);
                m.set(c, r, v.conj());
            }
        }
    }
    m
}

/// Symmetric non-negative real matrix with a random pattern.
fn random_nonneg_pattern(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        if rng.gen_bool(0.5) {
            m.set(r, r, C64::new(rng.gen_range(0.0..1.0), 0.0));
        }
        for c in (r + 1)..dim {
            if rng.gen_bool(density) {
                let v = C64::new(rng.gen_range(0.2..1.0), 0.0);
                m.set(r, c, v);
                m.set(c, r, v);
            }
        }
    }
    m
}

/// Irreducible non-negative symmetric matrix: a random spanning tree keeps
/// the pattern connected, extra edges are sprinkled on top.
fn random_irreducible_nonneg(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let mut m = random_nonneg_pattern(rng, dim, 0.15);
    for node in 1..dim {
        let parent = rng.gen_range(0..node);
        let v = C64::new(rng.gen_range(0.2..1.0), 0.0);
        m.set(node, parent, v);
        m.set(parent, node, v);
    }
    m
}

/// Embeds a d×d Hermitian block onto the first d basis indices of an
/// n-qubit space, leaving zero coupling to the complement.
fn embed_block(block: &ComplexMatrix, n: usize) -> (ComplexMatrix, FeasibleSubspace) {
    let d = block.rows();
    let dim = 1usize << n;
    assert!(d <= dim);
    let mut full = ComplexMatrix::zeros(dim, dim);
    for r in 0..d {
        for c in 0..d {
            full.set(r, c, block.get(r, c));
        }
    }
    let s = FeasibleSubspace::from_indices(n, (0..d).collect()).unwrap();
    (full, s)
}

fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    exp_i_hermitian(&random_hermitian(rng, dim), 1.0).unwrap()
}

#[test]
fn eig_reconstruction_up_to_dim_64() {
    let mut rng = rng(11);
    for &dim in &[2usize, 5, 16, 33, 64] {
        let a = random_hermitian(&mut rng, dim);
        let dec = eig_hermitian(&a).unwrap();
        let residual = operator_norm(&dec.reconstruct().sub(&a));
        let scale = operator_norm(&a).max(1.0);
        assert!(residual < 1e-9 * scale, "dim {dim}: residual {residual:.3e}");
    }
}

#[test]
fn exp_inverse_and_additivity() {
    let mut rng = rng(12);
    for _ in 0..10 {
        let dim = rng.gen_range(2..=8);
        let a = random_hermitian(&mut rng, dim);
        let theta1 = rng.gen_range(-2.0..2.0);
        let theta2 = rng.gen_range(-2.0..2.0);
        let u = exp_i_hermitian(&a, theta1).unwrap();
        let u_inv = exp_i_hermitian(&a, -theta1).unwrap();
        let id = ComplexMatrix::identity(dim);
        assert!(operator_norm(&u.matmul(&u_inv).sub(&id)) < 1e-10);

        let u_sum = exp_i_hermitian(&a, theta1 + theta2).unwrap();
        let u2 = exp_i_hermitian(&a, theta2).unwrap();
        assert!(operator_norm(&u_sum.sub(&u.matmul(&u2))) < 1e-10);
    }
}

#[test]
fn operator_norm_unitary_invariance() {
    let mut rng = rng(13);
    for _ in 0..10 {
        let dim = rng.gen_range(2..=8);
        let a = random_hermitian(&mut rng, dim);
        let u = random_unitary(&mut rng, dim);
        let v = random_unitary(&mut rng, dim);
        let rotated = u.matmul(&a).matmul(&v);
        assert!((operator_norm(&rotated) - operator_norm(&a)).abs() < 1e-9);
    }
}

#[test]
fn irreducibility_verdict_matches_enumeration_oracle() {
    let mut rng = rng(21);
    let tols = Tolerances::default();
    for trial in 0..60 {
        let dim = rng.gen_range(2..=12);
        let density = rng.gen_range(0.05..0.5);
        let block = random_sparse_hermitian(&mut rng, dim, density);
        let (full, s) = embed_block(&block, 4);
        let verdict = check_mixer(&full, &s, &tols).unwrap();
        let restricted = restrict(&full, &s).unwrap();
        let oracle = oracles::irreducible_by_enumeration(&restricted.matrix, tols.zero_entry);
        assert_eq!(verdict.irreducible, oracle, "trial {trial}, dim {dim}");
    }
}

#[test]
fn component_partition_matches_invariant_subspaces() {
    // Every union of pattern components must show up as an invariant
    // coordinate subspace in the oracle's enumeration.
    let mut rng = rng(22);
    let tols = Tolerances::default();
    for _ in 0..20 {
        let dim = rng.gen_range(3..=8);
        let block = random_sparse_hermitian(&mut rng, dim, 0.15);
        let (full, s) = embed_block(&block, 3);
        let verdict = check_mixer(&full, &s, &tols).unwrap();
        if verdict.irreducible {
            continue;
        }
        let restricted = restrict(&full, &s).unwrap();
        let invariant = oracles::invariant_coordinate_subspaces(&restricted.matrix, tols.zero_entry);
        for component in &verdict.components {
            // Components here are basis indices == positions (identity embed).
            assert!(
                invariant.iter().any(|sub| sub == component),
                "component {component:?} not invariant per oracle"
            );
        }
    }
}

#[test]
fn family_verdict_equals_summed_mixer_irreducibility() {
    let mut rng = rng(23);
    let tols = Tolerances::default();
    for trial in 0..40 {
        let dim = rng.gen_range(2..=16);
        let member_count = rng.gen_range(1..=4);
        let members: Vec<ComplexMatrix> = (0..member_count)
            .map(|_| {
                let density = rng.gen_range(0.05..0.4);
                let block = random_nonneg_pattern(&mut rng, dim, density);
                embed_block(&block, 5).0
            })
            .collect();
        let s = FeasibleSubspace::from_indices(5, (0..dim).collect()).unwrap();
        let fam = MixingFamily::new(members).unwrap();
        // check_mixing_family cross-checks against check_mixer(Σ) and
        // errors on disagreement; assert the explicit equality too.
        let verdict = check_mixing_family(&fam, &s, &tols).unwrap();
        let sum_verdict = check_mixer(&fam.sum(), &s, &tols).unwrap();
        assert_eq!(
            verdict.jointly_irreducible, sum_verdict.irreducible,
            "trial {trial}"
        );
    }
}

#[test]
fn diagonal_shift_preserves_irreducibility() {
    let mut rng = rng(24);
    let tols = Tolerances::default();
    for trial in 0..40 {
        let dim = rng.gen_range(2..=12);
        let b = random_irreducible_nonneg(&mut rng, dim);
        let mut shifted = b.clone();
        for k in 0..dim {
            let d = rng.gen_range(-2.0..2.0);
            shifted.set(k, k, shifted.get(k, k) + C64::new(d, 0.0));
        }
        let (full, s) = embed_block(&shifted, 4);
        let verdict = check_mixer(&full, &s, &tols).unwrap();
        assert!(verdict.irreducible, "trial {trial}");
        let restricted = restrict(&full, &s).unwrap();
        assert!(oracles::irreducible_by_enumeration(
            &restricted.matrix,
            tols.zero_entry
        ));
    }
}

#[test]
fn perron_vector_strictly_positive() {
    let mut rng = rng(25);
    let tols = Tolerances::default();
    for trial in 0..25 {
        let dim = rng.gen_range(2..=12);
        let b = random_irreducible_nonneg(&mut rng, dim);
        let (full, s) = embed_block(&b, 4);
        let verdict = check_mixer(&full, &s, &tols).unwrap();
        assert!(verdict.all_true(), "trial {trial} construction");
        let restricted = restrict(&full, &s).unwrap();
        let perron = perron_top_eigenstate(&restricted, &verdict, &tols).unwrap();
        for i in 0..dim {
            let entry = perron.vector.get(i);
            assert!(entry.re > 1e-12, "trial {trial}: entry {i} = {entry}");
            assert!(entry.im.abs() < 1e-10);
        }
    }
}

#[test]
fn objective_hamiltonian_is_always_a_phase_separator() {
    let mut rng = rng(26);
    let tols = Tolerances::default();
    let mut problems: Vec<Cop> = Vec::new();
    for _ in 0..8 {
        let n = rng.gen_range(2..=4);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(0.5) {
                    edges.push((u, v));
                }
            }
        }
        problems.push(make_maxcut(n, &edges).unwrap());
        problems.push(make_max_independent_set(n, &edges).unwrap());
    }
    for _ in 0..8 {
        let n = rng.gen_range(1..=4);
        let dim = 1usize << n;
        // Quantized values keep near-ties out of the tolerance window.
        let table: Vec<f64> = (0..dim).map(|_| rng.gen_range(-32..32) as f64 / 8.0).collect();
        let feasible: Vec<bool> = (0..dim).map(|_| rng.gen_bool(0.7)).collect();
        if !feasible.iter().any(|&f| f) {
            continue;
        }
        problems.push(Cop::from_tables(n, table, feasible).unwrap());
    }
    for (k, p) in problems.iter().enumerate() {
        let report = solve_brute_force(p).unwrap();
        let s = FeasibleSubspace::from_report(p.n(), &report);
        let verdict =
            check_phase_separator(&objective_hamiltonian(p), &s, &report.optimal_indices, &tols)
                .unwrap();
        assert!(verdict.is_valid(), "problem {k}");
    }
}

#[test]
fn product_approximation_bound_randomized() {
    let mut rng = rng(27);
    for trial in 0..30 {
        let dim = rng.gen_range(2..=6);
        let m = rng.gen_range(1..=6);
        let scale = rng.gen_range(0.01..0.3);
        let mut v_list = Vec::with_capacity(m);
        let mut w_list = Vec::with_capacity(m);
        for _ in 0..m {
            let w = random_unitary(&mut rng, dim);
            let perturb = exp_i_hermitian(&random_hermitian(&mut rng, dim), scale).unwrap();
            v_list.push(w.matmul(&perturb));
            w_list.push(w);
        }
        let check = verify_lemma6(&v_list, &w_list).unwrap();
        assert!(
            check.holds,
            "trial {trial}: lhs {} vs bound {}",
            check.lhs, check.bound
        );
    }
}

#[test]
fn gate_circuits_never_leak_out_of_the_subspace() {
    let mut rng = rng(28);
    let tols = Tolerances::default();
    let fam = builtin_xy_mixing_family(4, &[vec![0, 1], vec![2, 3]]).unwrap();
    let s = FeasibleSubspace::from_indices(4, vec![0b0101, 0b0110, 0b1001, 0b1010]).unwrap();
    let diag = vec![1.0, 2.0, 0.5, 3.0];
    for kind in [MixerKind::Simultaneous, MixerKind::Sequential] {
        let gates = build_gates(&diag, &fam, &s, kind, &tols).unwrap();
        for _ in 0..10 {
            let layers: Vec<Layer> = (0..rng.gen_range(1..=6))
                .map(|_| Layer {
                    beta: rng.gen_range(-3.0..3.0),
                    gamma: rng.gen_range(-3.0..3.0),
                })
                .collect();
            let mut sched = Schedule::empty();
            sched.layers = layers;
            let iota = ComplexVector::uniform(4);
            let psi = trial_state(&gates, &sched, &iota).unwrap();
            assert!((psi.norm() - 1.0).abs() < 1e-10);
            let full = s.embed(&psi);
            let mut outside = 0.0f64;
            for index in 0..16 {
                if !s.contains(index) {
                    outside = outside.max(full.get(index).norm());
                }
            }
            assert!(outside < 1e-10);
        }
    }
}

#[test]
fn paper_literal_schedule_is_synthesized_but_diverges() {
    // The literal formulas produce n·m layers too; on the toy instance the
    // corrected variant tracks the adiabatic flow and the literal one does
    // not (its angles grow with T instead of shrinking with 1/m).
    let sched = synthesize_schedule(8.0, 4, 2, ScheduleVariant::PaperLiteral).unwrap();
    assert_eq!(sched.depth(), 8);
    let corrected = synthesize_schedule(8.0, 4, 2, ScheduleVariant::Corrected).unwrap();
    let literal_max = sched
        .layers
        .iter()
        .map(|l| l.gamma.abs())
        .fold(0.0, f64::max);
    let corrected_max = corrected
        .layers
        .iter()
        .map(|l| l.gamma.abs())
        .fold(0.0, f64::max);
    assert!(literal_max > corrected_max * 4.0);
}
