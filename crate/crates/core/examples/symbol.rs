//! The transform of the multiquadric and the normalized symbol `L̂`.

use mqcardinal::specfun::{bessel_k_scaled, log_gamma_signed, QuadSpec};
use mqcardinal::symbol::{self, MultiquadricParams, PeriodizationSpec};

fn main() -> mqcardinal::Result<()> {
    let lg = log_gamma_signed(-2.5)?;
    println!("Γ(−2.5) = {:.15}", lg.value());
    println!("e^z K_0.5(z) at z=2: {:.15}", bessel_k_scaled(0.5, 2.0)?);

    let q = QuadSpec::default();
    for alpha in [0.5, -1.0, -2.5] {
        let p = MultiquadricParams::new(alpha, 1.0, 1)?;
        let spec = PeriodizationSpec::default_for(&p);
        println!("\nα = {alpha}, c = 1 (J = {})", spec.effective_j(p.c()));
        println!("{:>6} {:>22} {:>22} {:>12}", "r", "φ̂(r)", "via Laplace", "L̂(r)");
        for r in [0.5, 1.0, 2.0, 3.0, 6.0] {
            let hat = symbol::log_phi_hat(&p, r)?.value();
            let lap = symbol::phi_hat_laplace(&p, r, &q)?;
            let l = symbol::lhat(&p, &[r], &spec);
            println!("{r:>6} {hat:>22.14e} {lap:>22.14e} {l:>12.8}");
        }
        println!("L̂(0) = {:.12}", symbol::lhat(&p, &[0.0], &spec));
    }

    let p = MultiquadricParams::new(-1.0, 2.0, 1)?;
    let spec = PeriodizationSpec::default_for(&p);
    let xi = 1.3;
    println!(
        "\nPoisson, c=2, ξ={xi}: periodized {:.15}, closed form {:.15}",
        symbol::lhat(&p, &[xi], &spec),
        symbol::lhat_poisson_closed(2.0, xi)
    );
    let dl = symbol::lhat_derivative(&p, 1, xi, 0.05)?;
    println!("L̂'(ξ) = {:.10} ± {:.1e}", dl.value, dl.error);
    Ok(())
}
