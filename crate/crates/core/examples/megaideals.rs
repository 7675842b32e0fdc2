//! The megaideal chain of the truncated invariance algebra.

use pesym::fields::PhysConsts;
use pesym::liealg::{antisymmetry_check, compute_chain, jacobi_check, Algebra};

fn main() -> pesym::Result<()> {
    let alg = Algebra::from_consts(4, &PhysConsts::default())?;
    let basis = alg.basis();
    println!("dimension {}", alg.dim());
    println!("Jacobi defect {}", jacobi_check(&alg, &basis, |a, b| alg.bracket(a, b)));
    println!("antisymmetry defect {}", antisymmetry_check(&alg, &basis));
    let chain = compute_chain(&alg);
    for (i, e) in chain.summaries().iter().enumerate() {
        let mark = if e.low_degree_match { "ok" } else { "MISMATCH" };
        println!("{:>2} {:<40} dim {:>2} {mark}", i + 1, e.label, e.dim);
    }
    for (n, s) in chain.z_series.iter().enumerate() {
        println!("Z series step {n}: {}", s.describe(&alg).join(", "));
    }
    Ok(())
}
