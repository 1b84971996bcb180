//! Acceptance suite for the serialization and sweep criteria; the
//! formulation, exactness, and solver criteria live in the core crate.

use std::collections::BTreeMap;

use qubonet_cli::formats::{
    read_model_json, read_qubo_text, write_model_json, write_qubo_text, write_qubo_text_parts,
};
use qubonet_cli::sweep::{sweep_target, Method};
use qubonet_core::constraint::ConstraintSpec;
use qubonet_core::qubo::assemble;
use qubonet_core::rng::Xoshiro256PlusPlus;

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

/// K-sweep shape at the CSV surface: the equality constraint on 128
/// variables peaks at K = 64 and bottoms out at K in {1, 127} with the
/// one-hot chain count 3*128 - 5 = 379.
#[test]
fn criterion_08_target_sweep_csv_shape() {
    let csv = sweep_target(128, &[Method::Clique, Method::Full, Method::Optimized]).unwrap();
    let mut conventional = BTreeMap::new();
    let mut full = BTreeMap::new();
    let mut optimized = BTreeMap::new();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let k: usize = cols[3].parse().unwrap();
        let edges: usize = cols[5].parse().unwrap();
        match cols[0] {
            "conventional" => conventional.insert(k, edges),
            "proposed-full" => full.insert(k, edges),
            "proposed-optimized" => optimized.insert(k, edges),
            other => panic!("unexpected method {other}"),
        };
    }
    assert_eq!(conventional.len(), 127);
    assert_eq!(full.len(), 127);
    for (&k, &edges) in &conventional {
        assert_eq!(edges, 128 * 127 / 2, "conventional edges at k={k}");
    }
    for k in 1..128 {
        assert_eq!(full[&k], full[&(128 - k)], "full-division symmetry at k={k}");
        assert!(full[&k] <= full[&64], "peak must sit at k=64 (k={k})");
        assert!(full[&k] >= 379, "minimum must sit at the ends (k={k})");
        assert!(optimized[&k] <= full[&k], "optimized beats full at k={k}");
        assert!(optimized[&k] <= conventional[&k], "optimized beats clique at k={k}");
    }
    assert_eq!(full[&1], 379);
    assert_eq!(full[&127], 379);
    println!(
        "target sweep: clique flat at 8128, full peaks at k=64 ({}) and bottoms at 379",
        full[&64]
    );
}

/// JSON and .qubo exports round-trip byte-identically and describe the same
/// coefficients, across 100 random models.
#[test]
fn criterion_11_serialization_round_trips() {
    let mut rng = Xoshiro256PlusPlus::seed_from(0x5E41);
    for case in 0..100 {
        let spec = random_spec(&mut rng, 1, 24);
        let method = [Method::Clique, Method::Full, Method::Depth(1), Method::Optimized]
            [rng.next_index(4)];
        let lam = [1.0, 2.0, 0.5, 1.25][rng.next_index(4)];
        let model = assemble(&method.build(&spec), lam);

        let json = write_model_json(&spec, &model);
        let (spec2, model2) = read_model_json(&json).expect("canonical export parses");
        assert_eq!(spec2, spec, "case {case}");
        assert_eq!(model2, model, "case {case}");
        assert_eq!(write_model_json(&spec2, &model2), json, "case {case}: json bytes");

        let qubo = write_qubo_text(&model);
        let parsed = read_qubo_text(&qubo).expect("canonical export parses");
        assert_eq!(write_qubo_text_parts(&parsed), qubo, "case {case}: qubo bytes");

        // the two formats must describe identical coefficient sets
        assert_eq!(parsed.n_vars, model2.var_count(), "case {case}");
        assert_eq!(&parsed.linear, model2.linear(), "case {case}");
        assert_eq!(&parsed.quadratic, model2.quadratic(), "case {case}");
        assert_eq!(parsed.offset, model2.offset(), "case {case}");
    }
    println!("serialization: 100 random models round-trip byte-identically in both formats");
}
