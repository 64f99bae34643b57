//! Translate coefficients: `L = Σ_k a_k φ(· − k)`.

use mqcardinal::fundamental::{coefficients, synthesize};
use mqcardinal::symbol::phi;
use mqcardinal::{GridSpec, MultiquadricParams, PeriodizationSpec};

fn main() -> mqcardinal::Result<()> {
    let p = MultiquadricParams::new(0.5, 1.0, 1)?;
    let spec = PeriodizationSpec::default_for(&p);
    let a = coefficients(&p, &spec, 400)?;
    for k in 0..=6 {
        println!("a_{k} = {:+.10e}", a.get(&[k]).unwrap());
    }

    let l = synthesize(&p, &GridSpec::auto(&p, 16.0, 16), &spec)?;
    for x in [0.0, 0.5, 1.0, 2.25] {
        let sum: f64 = (-400..=400).map(|k| a.get(&[k]).unwrap() * phi(&p, &[x - k as f64])).sum();
        println!("x={x}: Σ a_k φ(x−k) = {sum:+.8}, L(x) = {:+.8}", l.eval(&[x]).unwrap());
    }
    Ok(())
}
