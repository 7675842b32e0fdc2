//! Residuals of the built-in solutions, exact and finite-difference.

use pesym::fields::{sample_points, DerivativeMode, EvalBox, FieldConfig, PhysConsts, ZeroHeating, DEFAULT_FD_STEP};
use pesym::residual::{residual_norms, RESIDUAL_NAMES};

fn main() -> pesym::Result<()> {
    let pts = sample_points(42, 1000, &EvalBox::default())?;
    for name in ["stratified", "inertial", "subsiding-shear"] {
        let cfg = FieldConfig::builtin(name)?;
        let consts = PhysConsts::default().with_f(cfg.intended_f().unwrap_or(0.0));
        let field = cfg.build(&consts)?;
        for (label, mode) in [("exact", DerivativeMode::Exact), ("fd", DerivativeMode::FiniteDifference { h: DEFAULT_FD_STEP })] {
            let n = residual_norms(field.as_ref(), &consts, &ZeroHeating, &pts, mode)?;
            let parts: Vec<String> = RESIDUAL_NAMES.iter().zip(n.linf).map(|(k, v)| format!("{k}={v:.1e}")).collect();
            println!("{name:<16} {label:<5} {}", parts.join(" "));
        }
    }
    Ok(())
}
