//! Carry a rest-frame solution into a rotating frame and back.

use std::sync::Arc;

use pesym::fields::{sample_points, DerivativeMode, EvalBox, FieldConfig, PhysConsts, StateField, ZeroHeating};
use pesym::residual::residual_norms;
use pesym::transforms::{derotation, invert, pushforward_field, to_cylindrical};

fn main() -> pesym::Result<()> {
    let f = 1.0;
    let rest = PhysConsts::default();
    let field = FieldConfig::builtin("subsiding-shear")?.build(&rest)?;
    let to_rotating = invert(&derotation(f));
    let moved = pushforward_field(&to_rotating, field.clone());
    let pts = sample_points(1, 500, &EvalBox::default())?;
    let r_rest = residual_norms(field.as_ref(), &rest, &ZeroHeating, &pts, DerivativeMode::Exact)?.max();
    let r_rot = residual_norms(&moved, &rest.with_f(f), &ZeroHeating, &pts, DerivativeMode::Exact)?.max();
    let r_wrong = residual_norms(&moved, &rest, &ZeroHeating, &pts, DerivativeMode::Exact)?.max();
    println!("{:<30} {r_rest:.2e}", "rest frame residual");
    println!("{:<30} {r_rot:.2e}", format!("rotating frame (f = {f})"));
    println!("{:<30} {r_wrong:.2e}", "same field, f = 0 equations");

    let back = pushforward_field(&derotation(f), Arc::new(moved));
    let pt = pts[0];
    println!("round trip at {pt:?}: {:?} vs {:?}", back.eval(pt), field.eval(pt));

    let z = [0.7, 0.4, -0.3, 0.6, 0.1, 0.2, 0.0, 1.0, 1.0];
    let w = derotation(f).forward(z);
    let (r, th, _, uth) = to_cylindrical(z[1], z[2], z[4], z[5]);
    let (_, th2, _, uth2) = to_cylindrical(w[1], w[2], w[4], w[5]);
    println!("dθ = {:.6} (ft/2 = {:.6}), du^θ = {:.6} (fr/2 = {:.6})", th2 - th, f * z[0] / 2.0, uth2 - uth, f * r / 2.0);
    Ok(())
}
