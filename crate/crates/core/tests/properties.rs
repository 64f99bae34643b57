use std::sync::OnceLock;

use mqcardinal::fundamental::{synthesize, GridFunction, GridSpec};
use mqcardinal::interpolate::{self, sinc, Kernel, SampleSequence, TailBoundMode, TruncationPolicy};
use mqcardinal::symbol::{MultiquadricParams, PeriodizationSpec};
use proptest::prelude::*;

fn grid(alpha: f64, c: f64) -> GridFunction {
    let p = MultiquadricParams::new(alpha, c, 1).unwrap();
    synthesize(&p, &GridSpec::auto(&p, 128.0, 16), &PeriodizationSpec::default_for(&p)).unwrap()
}

fn half() -> &'static GridFunction {
    static G: OnceLock<GridFunction> = OnceLock::new();
    G.get_or_init(|| grid(0.5, 1.0))
}

#[test]
fn whittaker_limit_for_basis_vector() {
    for alpha in [0.5, -1.0] {
        let mut prev = f64::INFINITY;
        for c in [1.0, 2.0, 4.0, 8.0, 16.0] {
            let g = grid(alpha, c);
            let y = SampleSequence::kronecker(1, 1);
            let xs: Vec<Vec<f64>> = (0..=200).map(|i| vec![-5.0 + i as f64 * 0.05]).collect();
            let t = TruncationPolicy::new(8, TailBoundMode::TheoremSlope).unwrap();
            let r = interpolate::interpolate(&Kernel::Grid(&g), &y, &xs, &t).unwrap();
            let sup = xs.iter().zip(&r.values).map(|(x, v)| (v - sinc(x[0])).abs()).fold(0.0, f64::max);
            assert!(sup < prev, "α={alpha}, c={c}: {sup} !< {prev}");
            prev = sup;
        }
    }
}

#[test]
fn partition_of_unity_on_unit_cell() {
    let g = half();
    let t = TruncationPolicy::new(120, TailBoundMode::TheoremSlope).unwrap();
    let y = SampleSequence::from_fn(1, 130, 0.0, |_| 1.0).unwrap();
    let xs: Vec<Vec<f64>> = (0..=100).map(|i| vec![i as f64 / 100.0]).collect();
    let r = interpolate::interpolate(&Kernel::Grid(g), &y, &xs, &t).unwrap();
    assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn synthesized_grid_is_even(alpha in prop_oneof![0.51f64..0.99, 1.1f64..1.9, -3.9f64..-1.6], c in 0.5f64..3.0) {
        let p = MultiquadricParams::new(alpha, c, 1).unwrap();
        let g = synthesize(&p, &GridSpec::new(6, 8, 1).unwrap(), &PeriodizationSpec::default_for(&p)).unwrap();
        for i in 1..g.hi() {
            prop_assert!((g.at(&[i]).unwrap() - g.at(&[-i]).unwrap()).abs() < 1e-10);
        }
        prop_assert!(g.errors().imaginary_residue < 1e-10);
    }

    #[test]
    fn interpolation_hits_the_data(seed in 0u64..1000) {
        let g = half();
        let t = TruncationPolicy::new(30, TailBoundMode::TheoremSlope).unwrap();
        let y = SampleSequence::from_fn(1, 60, 0.0, |j| ((j[0] as f64 + seed as f64) * 0.37).cos()).unwrap();
        let xs: Vec<Vec<f64>> = (-30..=30).map(|j| vec![j as f64]).collect();
        let r = interpolate::interpolate(&Kernel::Grid(g), &y, &xs, &t).unwrap();
        for (x, v) in xs.iter().zip(&r.values) {
            prop_assert!((v - ((x[0] + seed as f64) * 0.37).cos()).abs() < 2e-6);
        }
    }

    #[test]
    fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, x in -4.0f64..4.0) {
        let g = half();
        let t = TruncationPolicy::new(20, TailBoundMode::TheoremSlope).unwrap();
        let y = SampleSequence::from_fn(1, 40, 0.0, |j| (j[0] as f64).sin()).unwrap();
        let z = SampleSequence::from_fn(1, 40, 0.0, |j| 1.0 / (1.0 + (j[0] as f64).abs())).unwrap();
        let xs = vec![vec![x]];
        let k = Kernel::Grid(g);
        let l = interpolate::interpolate(&k, &y.linear_combination(a, &z, b).unwrap(), &xs, &t).unwrap().values[0];
        let r = a * interpolate::interpolate(&k, &y, &xs, &t).unwrap().values[0]
            + b * interpolate::interpolate(&k, &z, &xs, &t).unwrap().values[0];
        prop_assert!((l - r).abs() < 1e-13);
    }

    #[test]
    fn whittaker_is_cardinal(k in -20i64..=20) {
        let y = SampleSequence::from_fn(1, 25, 0.0, |j| (j[0] as f64 * 0.7).sin()).unwrap();
        let r = interpolate::whittaker(&y, &[vec![k as f64]]).unwrap();
        prop_assert!((r.values[0] - (k as f64 * 0.7).sin()).abs() < 1e-14);
    }
}
