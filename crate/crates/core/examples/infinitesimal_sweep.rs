//! Defect scaling of the algebra generators on a solution, including the
//! two generators that only survive when c_p = R.

use pesym::fields::{sample_points, EvalBox, FieldConfig, PhysConsts};
use pesym::residual::{defect_scaling, extended_generators, sample_generators, VectorFieldSpec, DEFAULT_EPS};

fn main() -> pesym::Result<()> {
    let pts = sample_points(42, 100, &EvalBox::default())?;
    for consts in [PhysConsts::default(), PhysConsts::cp_equals_r(0.0, 1.0)?] {
        println!("kappa = {:.4}", consts.kappa());
        let field = FieldConfig::builtin("subsiding-shear")?.build(&consts)?;
        for (name, g) in sample_generators().into_iter().chain(extended_generators()) {
            let sc = defect_scaling(&VectorFieldSpec::rest(g, &consts), field.as_ref(), &consts, &DEFAULT_EPS, &pts)?;
            let defects: Vec<String> = sc.defects.iter().map(|d| format!("{d:.1e}")).collect();
            println!("  {name:<20} {:<13} [{}]", format!("{:?}", sc.scaling), defects.join(", "));
        }
    }
    Ok(())
}
