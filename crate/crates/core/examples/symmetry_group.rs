//! Finite symmetry transformations applied to a solution, with the two
//! detuned negative controls.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pesym::fields::{sample_points, DerivativeMode, EvalBox, FieldConfig, PhysConsts, ZeroHeating};
use pesym::residual::residual_norms;
use pesym::transforms::{
    discrete_involutions, perturbed_symmetry_map, pushforward_field, symmetry_map, Perturbation, SymmetryParams,
};

fn main() -> pesym::Result<()> {
    let consts = PhysConsts::default();
    let field = FieldConfig::builtin("subsiding-shear")?.build(&consts)?;
    let pts = sample_points(3, 300, &EvalBox::default())?;
    let residual = |f: &dyn pesym::fields::StateField| {
        residual_norms(f, &consts, &ZeroHeating, &pts, DerivativeMode::Exact).map(|n| n.max())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..5 {
        let params = SymmetryParams::random(&mut rng);
        let moved = pushforward_field(&symmetry_map(&params, &consts)?, field.clone());
        println!("trial {i}: eps1 = {:+.2}, reflect = {:<5} residual {:.1e}", params.eps1, params.reflect, residual(&moved)?);
    }
    let params = SymmetryParams::random(&mut rng);
    for (label, perturb) in [
        ("omega scale x1.01", Perturbation { omega_scale: 1.01, ..Default::default() }),
        ("T scale x1.01", Perturbation { temp_scale: 1.01, ..Default::default() }),
    ] {
        let moved = pushforward_field(&perturbed_symmetry_map(&params, &consts, perturb)?, field.clone());
        println!("{label:<18} residual {:.1e}", residual(&moved)?);
    }
    let (time_reversal, mirror) = discrete_involutions();
    for (label, g) in [("time reversal", time_reversal), ("mirror", mirror)] {
        println!("{label:<18} residual {:.1e}", residual(&pushforward_field(&g, field.clone()))?);
    }
    Ok(())
}
