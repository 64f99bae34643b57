//! Interpolate lattice samples, compare with the Whittaker series and inspect
//! the Lebesgue-type function Λ.

use mqcardinal::fundamental::synthesize;
use mqcardinal::interpolate::{
    interpolate, lambda_function, whittaker, Kernel, SampleSequence, TailBoundMode, TruncationPolicy,
};
use mqcardinal::{GridSpec, MultiquadricParams, PeriodizationSpec};

fn main() -> mqcardinal::Result<()> {
    let f = |x: f64| (0.8 * x).sin() + 0.3 * (2.1 * x).cos();
    let y = SampleSequence::from_fn(1, 400, 0.0, |j| f(j[0] as f64))?;
    let xs: Vec<Vec<f64>> = (0..=8).map(|i| vec![-2.0 + 0.5 * i as f64]).collect();
    let w = whittaker(&y, &xs)?;

    for c in [1.0, 4.0, 16.0] {
        let p = MultiquadricParams::new(0.5, c, 1)?;
        let l = synthesize(&p, &GridSpec::auto(&p, 256.0, 16), &PeriodizationSpec::default_for(&p))?;
        let t = TruncationPolicy::new(200, TailBoundMode::TheoremSlope)?;
        let r = interpolate(&Kernel::Grid(&l), &y, &xs, &t)?;
        let err = xs.iter().zip(&r.values).map(|(x, v)| (v - f(x[0])).abs()).fold(0.0, f64::max);
        let gap = w.values.iter().zip(&r.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!("c={c:>4}: max error {err:.3e}, distance to Whittaker {gap:.3e}");

        let lam = lambda_function(&Kernel::Grid(&l), 0.5, &t)?;
        println!("        Λ(1/2) = {:.6} (tail ≤ {:.1e})", lam.value, lam.tail_bound);
    }

    let p = MultiquadricParams::new(2.5, 1.0, 1)?;
    let l = synthesize(&p, &GridSpec::auto(&p, 64.0, 16), &PeriodizationSpec::default_for(&p))?;
    let quad = SampleSequence::from_fn(1, 300, 2.0, |j| (j[0] * j[0]) as f64)?;
    println!("\nreproducing x² with α = 2.5:");
    for t in [TruncationPolicy::default_for(&p), TruncationPolicy::new(60, TailBoundMode::TheoremSlope)?] {
        let r = interpolate(&Kernel::Grid(&l), &quad, &[vec![0.5], vec![2.5]], &t)?;
        println!(
            "  R={:>3}: I(0.5) = {:.8} (tail ≤ {:.1e}), I(2.5) = {:.8} (tail ≤ {:.1e})",
            t.radius, r.values[0], r.tail_bounds[0], r.values[1], r.tail_bounds[1]
        );
    }
    Ok(())
}
