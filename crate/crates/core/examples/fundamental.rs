//! Synthesize the fundamental function on a grid and check it against direct
//! quadrature.

use mqcardinal::fundamental::{evaluate_direct, synthesize};
use mqcardinal::{GridSpec, MultiquadricParams, PeriodizationSpec, QuadSpec};

fn main() -> mqcardinal::Result<()> {
    let p = MultiquadricParams::new(0.5, 1.0, 1)?;
    let spec = PeriodizationSpec::default_for(&p);
    let grid = GridSpec::auto(&p, 32.0, 16);
    println!(
        "grid: M={}, oversample={}, {} nodes, Δx={:.5}",
        grid.m,
        grid.oversample,
        grid.total_nodes(),
        grid.spacing()
    );
    let l = synthesize(&p, &grid, &spec)?;
    let e = l.errors();
    println!(
        "error bounds: tail {:.1e}, discretization {:.1e}, imaginary {:.1e}",
        e.tail, e.discretization, e.imaginary_residue
    );

    for k in 0..=4 {
        println!("L({k}) = {:+.3e}", l.at_integer(&[k]).unwrap());
    }
    let q = QuadSpec::default();
    for x in [0.5, 1.5, 3.25] {
        let grid_val = l.eval(&[x]).unwrap();
        let direct = evaluate_direct(&p, &[x], &spec, &q)?;
        println!("L({x}) grid {grid_val:+.12} direct {:+.12} (±{:.1e})", direct.value, direct.abs_error);
    }
    println!("max |L| beyond |x| > 20: {:.3e}", l.max_abs_beyond(20.0));

    let p2 = MultiquadricParams::new(-1.5, 1.0, 2)?;
    let l2 = synthesize(&p2, &GridSpec::new(4, 8, 2)?, &PeriodizationSpec::default_for(&p2))?;
    println!("\nd=2, α=−1.5: {} nodes/axis", l2.nodes_per_axis());
    for j in [[0, 0], [1, 0], [1, 1], [2, 1]] {
        println!("L{j:?} = {:+.3e}", l2.at_integer(&j).unwrap());
    }
    Ok(())
}
