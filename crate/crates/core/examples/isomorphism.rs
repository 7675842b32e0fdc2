//! The rotating-frame algebra obeys the rest-frame commutation table once
//! its basis is redefined.

use pesym::fields::PhysConsts;
use pesym::liealg::isomorphism_check_with;

fn main() -> pesym::Result<()> {
    for f in [0.0, 0.5, 1.0, 2.0] {
        let consts = PhysConsts::default().with_f(f);
        let good = isomorphism_check_with(&consts, 50, 42, false)?;
        let bad = isomorphism_check_with(&consts, 50, 42, true)?;
        println!(
            "f = {f:<4} redefined {:.1e}   without the J shift {:.1e} (worst {} / {})",
            good.max_defect, bad.max_defect, bad.worst_pair.0, bad.worst_pair.1
        );
    }
    Ok(())
}
