//! Invariant solutions from the reduction family, in the rest frame and
//! carried into a rotating frame.

use pesym::fields::{sample_points, DerivativeMode, EvalBox, PhysConsts, Point4, ZeroHeating};
use pesym::reduction::{assemble_solution, rotating_family, solve_g, ReductionConfig, BUILTIN_REDUCTIONS};
use pesym::residual::residual_norms;

fn main() -> pesym::Result<()> {
    let consts = PhysConsts::default();
    let pts = sample_points(8, 40, &EvalBox::default())?;
    for name in BUILTIN_REDUCTIONS {
        let mut cfg = ReductionConfig::builtin(name)?;
        cfg.steps_per_unit = 200;
        let spec = cfg.build(&consts, &EvalBox::default())?;
        let rest = residual_norms(&assemble_solution(&spec), &consts, &ZeroHeating, &pts, DerivativeMode::Exact)?.max();
        let rot = rotating_family(&spec, 1.0);
        let rotating = residual_norms(&rot, &consts.with_f(1.0), &ZeroHeating, &pts, DerivativeMode::Exact)?.max();
        println!(
            "{name:<16} compatibility {:.1e}  reduced {:.1e}  residual {rest:.1e}  at f = 1 {rotating:.1e}",
            spec.check_compatibility(100).max_defect,
            spec.reduced_check(8),
        );
    }
    let spec = ReductionConfig::builtin("rotating-shear")?.build(&consts, &EvalBox::default())?;
    let g = solve_g(&spec, std::f64::consts::TAU, 400)?;
    println!("rotating-shear: G(2π) = {:?}", g.at(std::f64::consts::TAU));
    let sol = assemble_solution(&spec);
    println!("sample state at (0.5, 0.2, -0.1, 0.6): {:?}", pesym::fields::StateField::eval(&sol, Point4::new(0.5, 0.2, -0.1, 0.6)));
    Ok(())
}
