//! Operator-norm estimates of the interpolation operator.

use mqcardinal::fundamental::synthesize;
use mqcardinal::interpolate::{l2_operator_norm, linf_l1_norm_bounds, TailBoundMode, TruncationPolicy};
use mqcardinal::{GridSpec, MultiquadricParams, PeriodizationSpec};

fn main() -> mqcardinal::Result<()> {
    for (alpha, c) in [(0.5, 1.0), (0.5, 10.0), (-1.0, 1.0), (-2.5, 1.0), (1.5, 2.0)] {
        let p = MultiquadricParams::new(alpha, c, 1)?;
        let n = l2_operator_norm(&p, &PeriodizationSpec::default_for(&p), 2001)?;
        println!(
            "α={alpha:>5}, c={c:>4}: ℓ₂→L₂ norm {:.10} (max Σ L̂² = {:.10} at ξ = {:.4?})",
            n.norm, n.max_square_sum, n.argmax
        );
    }

    let p = MultiquadricParams::new(0.5, 2.0, 1)?;
    let l = synthesize(&p, &GridSpec::auto(&p, 64.0, 16), &PeriodizationSpec::default_for(&p))?;
    let b = linf_l1_norm_bounds(&l, &TruncationPolicy::new(40, TailBoundMode::TheoremSlope)?)?;
    println!("\nα=0.5, c=2: ℓ∞→L∞ norm = sup Λ ≈ {:.6} (±{:.1e})", b.sup, b.sup_error);
    println!("            ∫|L| ≈ {:.6} (±{:.1e})", b.integral, b.integral_error);
    Ok(())
}
