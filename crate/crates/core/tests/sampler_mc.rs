//! Empirical radial histograms of sampled products against the exact density.

use quatginibre::ensemble::EnsembleParams;
use quatginibre::sampler::{compare_to_density, radial_histogram, sample_many, BinSpec, RadialScaling};

const DRAWS: usize = 10_000;
const BINS: usize = 40;

fn check(n: u32, seed: u64) {
    let p = EnsembleParams::new(n, 0.0, 5).unwrap();
    let samples = sample_many(&p, seed, DRAWS).unwrap();
    let hist = radial_histogram(&samples, RadialScaling::Raw, &BinSpec::EqualMass { count: BINS }).unwrap();
    assert_eq!(hist.counts.iter().sum::<u64>() + hist.overflow, 5 * DRAWS as u64);
    let cmp = compare_to_density(&hist, &p).unwrap();
    println!("n={n}: max|z| = {:.3}, chi2 = {:.2} on {} dof", cmp.max_abs_z, cmp.chi_square, cmp.dof);
    assert!(cmp.passes(4.0, 4.0), "n={n}: {cmp:?}");

    // the same histogram against the density of one fewer pair must be rejected
    let wrong = EnsembleParams::new(n, 0.0, 4).unwrap();
    let bad = compare_to_density(&hist, &wrong).unwrap();
    println!("n={n}, N-1 control: chi2 = {:.1}", bad.chi_square);
    assert!(!bad.passes(4.0, 4.0));
}

#[test]
fn single_factor() {
    check(1, 101);
}

#[test]
fn two_factors() {
    check(2, 202);
}

#[test]
fn three_factors() {
    check(3, 303);
}

#[test]
fn scaled_histogram_agrees_too() {
    let p = EnsembleParams::new(3, 0.0, 5).unwrap();
    let samples = sample_many(&p, 404, DRAWS).unwrap();
    let hist = radial_histogram(&samples, RadialScaling::Scaled, &BinSpec::Uniform { max: 1.5, count: 30 }).unwrap();
    let cmp = compare_to_density(&hist, &p).unwrap();
    assert!(cmp.max_abs_z <= 4.0, "{cmp:?}");
}
