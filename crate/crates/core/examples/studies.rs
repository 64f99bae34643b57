//! Convergence studies and their self-describing reports.

use mqcardinal::analysis::{
    decay_study, lambda_growth_study, lhat_derivative_study, pw_recovery, sinc_convergence, ErrorMetric,
    PwFunctionSpec, StudyReport,
};

fn show(r: &StudyReport) {
    println!("== {:?}", r.study_kind);
    for (name, vals) in &r.metrics {
        let shown: Vec<String> = vals.iter().map(|v| format!("{v:.4e}")).collect();
        println!("  {name}: [{}]", shown.join(", "));
    }
    for (name, v) in &r.verdicts {
        println!("  {name} ({:?}): {}", v.rule, if v.passed { "pass" } else { "FAIL" });
    }
    if r.outside_stated_theorems {
        println!("  (parameters outside the proven range)");
    }
}

fn main() -> mqcardinal::Result<()> {
    let cs = [1.0, 2.0, 4.0, 8.0];
    show(&sinc_convergence(0.5, &cs, (-5.0, 5.0))?);
    show(&pw_recovery(&PwFunctionSpec::sinc_a(2.5), 0.5, &cs, (-10.0, 10.0), ErrorMetric::Sup)?);
    show(&decay_study(0.5, 1.0, (4.0, 15.0), -4.0)?);
    show(&lhat_derivative_study(0.5, 1, &[1.0, 2.0, 4.0], 1.05)?);
    show(&lambda_growth_study(0.5, &[2.0, 4.0, 16.0], 1.0)?);

    let r = sinc_convergence(-1.0, &[1.0, 4.0], (-3.0, 3.0))?;
    println!("\n{}", serde_json::to_string_pretty(&r).unwrap());
    print!("{}", r.metrics_csv());
    Ok(())
}
