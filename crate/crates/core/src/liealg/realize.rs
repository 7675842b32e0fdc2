//! Vector-field realizations of algebra elements and the numerical check
//! that the rotating-frame algebra is isomorphic to the rest-frame one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::algebra::{AlgVector, Algebra, D1, D2, D3, J, P, S};
use super::poly::PolyFn;
use crate::error::{domain, invalid, Result};
use crate::fields::PhysConsts;
use crate::jet::{Dual, Real};
use crate::residual::{Frame, Generator, VectorFieldSpec};
use crate::scalar_fn::ScalarFn;

/// Which printed basis to realize an element in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Realization {
    /// The rest-frame algebra.
    G0,
    /// The rotating-frame algebra with `f = consts.f`.
    Gf,
}

fn poly_fn(p: &PolyFn) -> ScalarFn {
    ScalarFn::Poly(p.to_f64())
}

fn scalar_terms(a: &AlgVector) -> Vec<(f64, Generator)> {
    use num_traits::ToPrimitive;
    let gens = [Generator::D1, Generator::D2, Generator::D3, Generator::J, Generator::P, Generator::S];
    let mut out = Vec::new();
    for (k, g) in [D1, D2, D3, J, P, S].into_iter().zip(gens) {
        let c = a.six[k].to_f64().unwrap_or(f64::NAN);
        if c != 0.0 {
            out.push((c, g));
        }
    }
    out
}

/// Coefficients exactly as printed for the chosen basis, combined linearly.
pub fn realize(a: &AlgVector, algebra: Realization, consts: &PhysConsts) -> VectorFieldSpec {
    let frame = match algebra {
        Realization::G0 => Frame::Rest,
        Realization::Gf => Frame::Rotating { f: consts.f },
    };
    let mut vf = VectorFieldSpec::new(frame, consts);
    vf.terms = scalar_terms(a);
    if !(a.g1.is_zero() && a.g2.is_zero()) {
        vf.terms.push((1.0, Generator::x(poly_fn(&a.g1), poly_fn(&a.g2))));
    }
    if !a.alpha.is_zero() {
        vf.terms.push((1.0, Generator::z(poly_fn(&a.alpha))));
    }
    vf
}

/// Image of a rest-frame element under the basis redefinition of the
/// rotating-frame algebra: `P ↦ P − f̂J`, `X(γ) ↦ X(R(−f̂t)γ)`, the rest
/// unchanged. With `drop_j_shift` the `−f̂J` term is omitted.
pub fn realize_redefined(a: &AlgVector, consts: &PhysConsts, drop_j_shift: bool) -> VectorFieldSpec {
    use num_traits::ToPrimitive;
    let fh = consts.f / 2.0;
    let mut vf = VectorFieldSpec::new(Frame::Rotating { f: consts.f }, consts);
    vf.terms = scalar_terms(a);
    let p = a.six[P].to_f64().unwrap_or(f64::NAN);
    if p != 0.0 && !drop_j_shift && fh != 0.0 {
        vf.terms.push((-fh * p, Generator::J));
    }
    if !(a.g1.is_zero() && a.g2.is_zero()) {
        let cos = ScalarFn::Cos { amp: 1.0, freq: fh, phase: 0.0 };
        let sin = ScalarFn::Sin { amp: -1.0, freq: fh, phase: 0.0 };
        let (g1, g2) = (poly_fn(&a.g1), poly_fn(&a.g2));
        let r1 = ScalarFn::Sum(vec![
            ScalarFn::product(g1.clone(), cos.clone()),
            ScalarFn::product(g2.clone(), sin.clone()).scaled(-1.0),
        ]);
        let r2 = ScalarFn::Sum(vec![ScalarFn::product(g1, sin), ScalarFn::product(g2, cos)]);
        vf.terms.push((1.0, Generator::x(r1, r2)));
    }
    if !a.alpha.is_zero() {
        vf.terms.push((1.0, Generator::z(poly_fn(&a.alpha))));
    }
    vf
}

/// Commutator `(Q₁·∇)Q₂ − (Q₂·∇)Q₁` at `z` with fourth-order central
/// differences of step `h` (scaled by `max(1, |z_k|)`).
pub fn vf_bracket_at(q1: &VectorFieldSpec, q2: &VectorFieldSpec, z: [f64; 9], h: f64) -> Result<[f64; 9]> {
    if !(h > 0.0) {
        return Err(invalid(format!("step must be positive (got {h})")));
    }
    let steps: [f64; 9] = std::array::from_fn(|k| h * z[k].abs().max(1.0));
    if z[3] - 2.0 * steps[3] <= 0.0 {
        return Err(domain(format!("p − 2h = {} leaves the domain p > 0", z[3] - 2.0 * steps[3])));
    }
    let grad = |q: &VectorFieldSpec| -> [[f64; 9]; 9] {
        let mut g = [[0.0; 9]; 9];
        for k in 0..9 {
            let shifted = |m: f64| {
                let mut zz = z;
                zz[k] += m * steps[k];
                q.at(zz)
            };
            let (a2, a1, b1, b2) = (shifted(2.0), shifted(1.0), shifted(-1.0), shifted(-2.0));
            for i in 0..9 {
                g[i][k] = (8.0 * (a1[i] - b1[i]) - (a2[i] - b2[i])) / (12.0 * steps[k]);
            }
        }
        g
    };
    let (c1, c2) = (q1.at(z), q2.at(z));
    let (g1, g2) = (grad(q1), grad(q2));
    Ok(std::array::from_fn(|i| (0..9).map(|k| c1[k] * g2[i][k] - c2[k] * g1[i][k]).sum()))
}

/// The same commutator with derivatives from dual numbers.
pub fn vf_bracket_exact(q1: &VectorFieldSpec, q2: &VectorFieldSpec, z: [f64; 9]) -> [f64; 9] {
    let seed = Dual::<9>::seed(z);
    let (d1, d2) = (q1.coefficients(seed), q2.coefficients(seed));
    std::array::from_fn(|i| (0..9).map(|k| d1[k].re() * d2[i].d[k] - d2[k].re() * d1[i].d[k]).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct IsomorphismReport {
    pub f: f64,
    pub points: usize,
    pub pairs: usize,
    pub max_defect: f64,
    pub worst_pair: (String, String),
}

pub const ISOMORPHISM_FD_STEP: f64 = 1e-5;

/// Random points of the nine-dimensional space with `p ∈ [0.2, 1]`.
pub fn random_points9(seed: u64, n: usize) -> Vec<[f64; 9]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut z: [f64; 9] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
            z[0] = rng.gen_range(0.0..=1.0);
            z[3] = rng.gen_range(0.2..=1.0);
            z
        })
        .collect()
}

/// Compares finite-difference commutators of the redefined rotating-frame
/// basis with the rest-frame structure constants, over all pairs from the
/// degree-2 truncated basis.
pub fn isomorphism_check_with(
    consts: &PhysConsts,
    n_points: usize,
    seed: u64,
    drop_j_shift: bool,
) -> Result<IsomorphismReport> {
    if n_points == 0 {
        return Err(invalid("isomorphism check needs at least one point"));
    }
    let alg = Algebra::from_consts(2, consts)?;
    let basis = alg.basis();
    let real: Vec<VectorFieldSpec> = basis.iter().map(|b| realize_redefined(b, consts, drop_j_shift)).collect();
    let mut pairs = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let expect = realize_redefined(&alg.bracket(&basis[i], &basis[j]), consts, drop_j_shift);
            pairs.push((i, j, expect));
        }
    }
    let points = random_points9(seed, n_points);
    let results: Vec<(f64, usize)> = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, (i, j, expect))| {
            let mut worst: f64 = 0.0;
            for z in &points {
                let got = vf_bracket_at(&real[*i], &real[*j], *z, ISOMORPHISM_FD_STEP)?;
                let want = expect.at(*z);
                for k in 0..9 {
                    worst = worst.max((got[k] - want[k]).abs());
                }
            }
            Ok((worst, idx))
        })
        .collect::<Result<_>>()?;
    let (max_defect, idx) = results.into_iter().fold((0.0, 0), |acc, r| if r.0 > acc.0 { r } else { acc });
    let (i, j, _) = &pairs[idx];
    Ok(IsomorphismReport {
        f: consts.f,
        points: n_points,
        pairs: pairs.len(),
        max_defect,
        worst_pair: (basis[*i].to_string(), basis[*j].to_string()),
    })
}

pub fn isomorphism_check(f: f64, n_points: usize, seed: u64) -> Result<IsomorphismReport> {
    isomorphism_check_with(&PhysConsts::default().with_f(f), n_points, seed, false)
}
