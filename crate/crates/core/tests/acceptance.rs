//! Acceptance suite: each test checks one release criterion end to end and
//! is the pass/fail line for it. Criteria on file formats and the CSV sweeps
//! live in the CLI crate's acceptance suite.

use std::sync::{Mutex, MutexGuard, PoisonError};
use std::time::{Duration, Instant};

use qubonet_core::anneal::{decode, simulated_anneal, AnnealParams};
use qubonet_core::constraint::ConstraintSpec;
use qubonet_core::network::{
    build_clique_network, build_divide_and_conquer, enumerate_depths, DepthLimit, Network,
};
use qubonet_core::qubo::assemble;
use qubonet_core::rng::Xoshiro256PlusPlus;
use qubonet_core::verify::{
    brute_force_min, check_telescoping, check_wiring, exhaustive_exactness, find_routing,
};

/// Criteria carry wall-clock budgets, so the suite runs serially; parallel
/// siblings would contend for cores and corrupt the measurements.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(PoisonError::into_inner)
}

fn full(spec: &ConstraintSpec) -> Network {
    build_divide_and_conquer(spec, DepthLimit::Unlimited)
}

fn edge_count(net: &Network) -> usize {
    assemble(net, 1.0).edge_count()
}

/// Deterministic random constraint instance with n in `n_lo..=n_hi`.
fn random_spec(rng: &mut Xoshiro256PlusPlus, n_lo: usize, n_hi: usize) -> ConstraintSpec {
    let n = n_lo + rng.next_index(n_hi - n_lo + 1);
    match rng.next_index(5) {
        0 => ConstraintSpec::one_hot(n),
        1 => ConstraintSpec::equality(n, rng.next_index(n + 1)),
        2 => ConstraintSpec::at_most(n, rng.next_index(n + 1)),
        3 => ConstraintSpec::at_least(n, rng.next_index(n + 1)),
        _ => {
            let k1 = rng.next_index(n + 1);
            let k2 = k1 + rng.next_index(n - k1 + 1);
            ConstraintSpec::range(n, k1, k2)
        }
    }
    .expect("sampled bounds are valid")
}

/// Every valid instance of every kind for a given n.
fn all_specs(n: usize) -> Vec<ConstraintSpec> {
    let mut specs = vec![ConstraintSpec::one_hot(n).unwrap()];
    for k in 0..=n {
        specs.push(ConstraintSpec::equality(n, k).unwrap());
        specs.push(ConstraintSpec::at_most(n, k).unwrap());
        specs.push(ConstraintSpec::at_least(n, k).unwrap());
    }
    for k1 in 0..=n {
        for k2 in k1..=n {
            specs.push(ConstraintSpec::range(n, k1, k2).unwrap());
        }
    }
    specs
}

#[test]
fn criterion_01_one_hot_closed_forms() {
    let _guard = serial();
    let started = Instant::now();
    let spec = ConstraintSpec::one_hot(2).unwrap();
    let model = assemble(&full(&spec), 1.0);
    assert_eq!(model.var_count(), 2);
    assert_eq!(model.edge_count(), 1);
    for n in 3..=256 {
        let spec = ConstraintSpec::one_hot(n).unwrap();
        let model = assemble(&full(&spec), 1.0);
        assert_eq!(model.var_count(), 2 * n - 2, "variables at n={n}");
        assert_eq!(model.edge_count(), 3 * n - 5, "edges at n={n}");
    }
    let elapsed = started.elapsed();
    println!("one-hot closed forms: 2N-2 vars / 3N-5 edges for N=2..=256 in {elapsed:?}");
    assert!(elapsed < Duration::from_secs(1));
}

#[test]
fn criterion_02_clique_baseline_edges() {
    let _guard = serial();
    let started = Instant::now();
    for n in 2..=256 {
        let spec = ConstraintSpec::equality(n, n / 2).unwrap();
        let model = assemble(&build_clique_network(&spec), 1.0);
        assert_eq!(model.edge_count(), n * (n - 1) / 2, "clique edges at n={n}");
    }
    // the formula is independent of k
    for k in [0, 1, 7] {
        let spec = ConstraintSpec::equality(7, k).unwrap();
        assert_eq!(assemble(&build_clique_network(&spec), 1.0).edge_count(), 21);
    }
    let elapsed = started.elapsed();
    println!("clique baseline: N(N-1)/2 edges for N=2..=256 in {elapsed:?}");
    assert!(elapsed < Duration::from_secs(1));
}

#[test]
fn criterion_03_one_hot_crossover() {
    let _guard = serial();
    let edges = |n: usize| {
        let spec = ConstraintSpec::one_hot(n).unwrap();
        let proposed = edge_count(&full(&spec));
        let conventional = edge_count(&build_clique_network(&spec));
        (proposed, conventional)
    };
    assert_eq!(edges(4), (7, 6));
    assert_eq!(edges(5), (10, 10));
    for n in 6..=256 {
        let (proposed, conventional) = edges(n);
        assert!(proposed < conventional, "n={n}: {proposed} !< {conventional}");
    }
    println!("crossover: proposed > clique at N=4, equal at N=5, smaller for N=6..=256");
}

#[test]
fn criterion_04_worst_case_subquadratic_scaling() {
    let _guard = serial();
    let started = Instant::now();
    let sizes = [8usize, 16, 32, 64, 128, 256, 512, 1024];
    let mut proposed = Vec::new();
    for &n in &sizes {
        let spec = ConstraintSpec::equality(n, n / 2).unwrap();
        proposed.push(edge_count(&full(&spec)));
    }
    for (i, pair) in proposed.windows(2).enumerate() {
        let ratio = pair[1] as f64 / pair[0] as f64;
        assert!(ratio <= 3.0, "edges({})/edges({}) = {ratio}", sizes[i + 1], sizes[i]);
    }
    for (&n, &edges) in sizes.iter().zip(&proposed) {
        if n >= 64 {
            let spec = ConstraintSpec::equality(n, n / 2).unwrap();
            let clique_edges = edge_count(&build_clique_network(&spec));
            assert!(edges < clique_edges, "n={n}: {edges} !< {clique_edges}");
        }
    }
    let elapsed = started.elapsed();
    println!("worst-case scaling K=N/2: doubling ratios <= 3 up to N=1024, edges {proposed:?} in {elapsed:?}");
    assert!(elapsed < Duration::from_secs(10));
}

#[test]
fn criterion_05_exactness_suite() {
    let _guard = serial();
    let started = Instant::now();
    let mut rng = Xoshiro256PlusPlus::seed_from(0x5EC5);
    let mut sweeps = 0u64;
    let mut brute_checks = 0u64;

    let mut zero_energy_scans = 0u64;
    let mut run = |spec: &ConstraintSpec, net: &Network, rng: &mut Xoshiro256PlusPlus| {
        let report = exhaustive_exactness(spec, net).unwrap();
        assert!(report.counterexamples.is_empty(), "{spec} {}", net.depth_label());
        assert_eq!(report.n_routed, report.n_feasible, "{spec}");
        assert_eq!(report.n_feasible as u128, spec.feasible_count(), "{spec}");
        assert!(report.gap_verified, "{spec}");
        sweeps += 1;

        // Small models: enumerate the whole assignment space and check that
        // energy 0 occurs exactly on feasible decodes, at energies that are
        // multiples of λ.
        let n = spec.n();
        let model = assemble(net, 1.0);
        let total = model.var_count();
        if total <= 14 {
            for mask in 0u64..1 << total {
                let bits: Vec<bool> = (0..total).map(|i| mask >> i & 1 == 1).collect();
                let energy = model.energy(&bits.clone().into()).unwrap();
                assert_eq!(energy, energy.round(), "{spec}: energies are multiples of λ=1");
                assert!(energy >= 0.0, "{spec}");
                if energy == 0.0 {
                    let weight = bits[..n].iter().filter(|&&b| b).count();
                    assert!(spec.admits_sum(weight), "{spec}: zero energy must decode feasible");
                }
            }
            zero_energy_scans += 1;
        }

        // Spot-check conditional minima against the assembled model: 0 for
        // feasible inputs, >= λ for infeasible ones. The telescoping argument
        // covers inputs whose free-variable count exceeds the brute bound.
        let free = net.aux_count() + net.slack_count();
        if free <= 24 {
            for _ in 0..2 {
                let mask = rng.next_index(1 << n) as u64;
                let x: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let fixed: Vec<(usize, bool)> = x.iter().copied().enumerate().collect();
                let (min, _) = brute_force_min(&model, &fixed).unwrap();
                if spec.admits_sum(mask.count_ones() as usize) {
                    assert_eq!(min, 0.0, "{spec} feasible mask {mask:b}");
                } else {
                    assert!(min >= 1.0, "{spec} infeasible mask {mask:b} min {min}");
                }
                brute_checks += 1;
            }
        }
    };

    // every kind, every valid bound, n <= 8: full division at minimum,
    // every halting depth for the smaller instances
    for n in 1..=8 {
        for spec in all_specs(n) {
            run(&spec, &full(&spec), &mut rng);
            if n <= 6 {
                for net in enumerate_depths(&spec) {
                    run(&spec, &net, &mut rng);
                }
            }
        }
    }
    // randomized sample at 9 <= n <= 12
    for _ in 0..100 {
        let spec = random_spec(&mut rng, 9, 12);
        run(&spec, &full(&spec), &mut rng);
    }

    let elapsed = started.elapsed();
    println!(
        "exactness: {sweeps} exhaustive sweeps, {zero_energy_scans} full energy scans, \
         {brute_checks} conditional minima in {elapsed:?}"
    );
    assert!(elapsed < Duration::from_secs(300));
}

#[test]
fn criterion_06_wiring_and_telescoping_invariants() {
    let _guard = serial();
    let mut rng = Xoshiro256PlusPlus::seed_from(0x717E);
    let mut checked = 0u64;
    for _ in 0..1000 {
        let spec = random_spec(&mut rng, 1, 48);
        let mut nets = enumerate_depths(&spec);
        nets.push(build_clique_network(&spec));
        nets.push(full(&spec));
        for net in &nets {
            assert_eq!(check_wiring(net), Ok(()), "{spec} {}", net.depth_label());
            assert_eq!(check_telescoping(net), Ok(()), "{spec} {}", net.depth_label());
            checked += 1;
        }
    }
    println!("invariants: wiring and telescoping hold on {checked} networks from 1000 specs");
}

#[test]
fn criterion_07_depth_zero_equals_clique() {
    let _guard = serial();
    let mut rng = Xoshiro256PlusPlus::seed_from(0xD0);
    for _ in 0..200 {
        let spec = random_spec(&mut rng, 1, 64);
        let lam = [1.0, 2.5, 0.5][rng.next_index(3)];
        let via_depth = assemble(&build_divide_and_conquer(&spec, DepthLimit::Limited(0)), lam);
        let via_clique = assemble(&build_clique_network(&spec), lam);
        assert_eq!(via_depth, via_clique, "{spec} lam={lam}");
    }
    println!("depth-0 division is coefficient-identical to the clique on 200 random specs");
}

#[test]
fn criterion_08_complement_symmetry_and_k_sweep() {
    let _guard = serial();
    for n in 1..=64 {
        for k in 0..=n {
            let a = ConstraintSpec::equality(n, k).unwrap();
            let b = ConstraintSpec::equality(n, n - k).unwrap();
            let net_a = full(&a);
            let net_b = full(&b);
            assert_eq!(net_a.subs().len(), net_b.subs().len(), "subs n={n} k={k}");
            assert_eq!(net_a.aux_count(), net_b.aux_count(), "aux n={n} k={k}");
            assert_eq!(edge_count(&net_a), edge_count(&net_b), "edges n={n} k={k}");
        }
    }

    let n = 128;
    let edges_at = |k: usize| edge_count(&full(&ConstraintSpec::equality(n, k).unwrap()));
    let sweep: Vec<usize> = (1..n).map(edges_at).collect();
    let max = *sweep.iter().max().unwrap();
    let min = *sweep.iter().min().unwrap();
    assert_eq!(sweep[64 - 1], max, "edge count must peak at K=64");
    assert_eq!(min, 3 * 128 - 5);
    assert_eq!(sweep[1 - 1], 379);
    assert_eq!(sweep[127 - 1], 379);
    println!("complement symmetry holds for N<=64; N=128 sweep peaks at K=64 ({max}) and bottoms at K=1/127 (379)");
}

#[test]
fn criterion_09_routing_vignette() {
    let _guard = serial();
    let spec = ConstraintSpec::one_hot(4).unwrap();
    let net = full(&spec);
    let witness = find_routing(&net, &[false, true, false, false]).unwrap();
    assert_eq!(witness.aux, vec![true, true]);
    assert!(witness.slacks.is_empty());
    println!("routing X=(0,1,0,0) through the 4-wire chain gives exactly y0=1, y1=1");
}

#[test]
fn criterion_10_solver_properties() {
    let _guard = serial();
    let started = Instant::now();

    // zero-energy samples always decode to feasible inputs, across kinds
    let cases = [
        ConstraintSpec::one_hot(8).unwrap(),
        ConstraintSpec::equality(8, 4).unwrap(),
        ConstraintSpec::at_most(6, 2).unwrap(),
        ConstraintSpec::range(6, 2, 4).unwrap(),
    ];
    for spec in &cases {
        let net = full(spec);
        let model = assemble(&net, 1.0);
        let params =
            AnnealParams { num_reads: 200, sweeps: 400, seed: 9, ..Default::default() };
        let set = simulated_anneal(&model, &params);
        for sample in &set.samples {
            if sample.energy == 0.0 {
                let x = decode(&sample.assignment, &net).unwrap();
                assert!(spec.is_satisfied(&x), "{spec} sample {:?}", sample.read);
            }
        }
    }

    // bit-for-bit determinism given (model, params)
    let spec = ConstraintSpec::equality(7, 3).unwrap();
    let model = assemble(&full(&spec), 1.0);
    let params = AnnealParams { num_reads: 64, sweeps: 256, seed: 42, ..Default::default() };
    assert_eq!(simulated_anneal(&model, &params), simulated_anneal(&model, &params));

    // defaults with seed 42 find the one-hot N=8 ground state
    let spec = ConstraintSpec::one_hot(8).unwrap();
    let model = assemble(&full(&spec), 1.0);
    let params = AnnealParams { seed: 42, ..Default::default() };
    assert_eq!(params.num_reads, 1000);
    let set = simulated_anneal(&model, &params);
    assert_eq!(set.min_energy(), 0.0);

    let elapsed = started.elapsed();
    println!("solver: feasible decodes, bit determinism, ground state at defaults in {elapsed:?}");
    assert!(elapsed < Duration::from_secs(30));
}
