use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::poly::{q, PolyFn, Q};
use crate::error::{invalid, Result};
use crate::fields::PhysConsts;

pub const SCALAR_LABELS: [&str; 6] = ["D1", "D2", "D3", "J", "P", "S"];
pub const D1: usize = 0;
pub const D2: usize = 1;
pub const D3: usize = 2;
pub const J: usize = 3;
pub const P: usize = 4;
pub const S: usize = 5;

/// Element of the truncated algebra: six scalar coordinates on
/// `D1, D2, D3, J, P, S` plus `X(γ¹, γ²)` and `Z(α)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgVector {
    pub six: [Q; 6],
    pub g1: PolyFn,
    pub g2: PolyFn,
    pub alpha: PolyFn,
}

impl AlgVector {
    pub fn add(&self, o: &Self) -> Self {
        Self {
            six: std::array::from_fn(|i| &self.six[i] + &o.six[i]),
            g1: self.g1.add(&o.g1),
            g2: self.g2.add(&o.g2),
            alpha: self.alpha.add(&o.alpha),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            six: std::array::from_fn(|i| &self.six[i] * s),
            g1: self.g1.scale(s),
            g2: self.g2.scale(s),
            alpha: self.alpha.scale(s),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.six.iter().all(Zero::is_zero) && self.g1.is_zero() && self.g2.is_zero() && self.alpha.is_zero()
    }
}

impl fmt::Display for AlgVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (c, name) in self.six.iter().zip(SCALAR_LABELS) {
            if c.is_zero() {
                continue;
            }
            parts.push(if c.is_one() {
                name.to_string()
            } else if (-c).is_one() {
                format!("-{name}")
            } else {
                format!("{c}{name}")
            });
        }
        if !(self.g1.is_zero() && self.g2.is_zero()) {
            parts.push(format!("X({}, {})", self.g1, self.g2));
        }
        if !self.alpha.is_zero() {
            parts.push(format!("Z({})", self.alpha));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl fmt::Debug for AlgVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The truncated algebra: `γ` of degree at most `N`, `α` of degree at most
/// `M = max(N, 2N − 2)`, so that the bracket closes.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    n: usize,
    m: usize,
    kappa: Q,
}

impl Algebra {
    pub fn new(n: usize, kappa: Q) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("truncation degree must be at least 2 (got {n})")));
        }
        Ok(Self { n, m: n.max(2 * n - 2), kappa })
    }

    /// `κ = R / c_p` taken as the exact rational value of the two floats.
    pub fn from_consts(n: usize, consts: &PhysConsts) -> Result<Self> {
        let r = Q::from_float(consts.r).ok_or_else(|| invalid("R is not finite"))?;
        let cp = Q::from_float(consts.cp).ok_or_else(|| invalid("c_p is not finite"))?;
        Self::new(n, r / cp)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kappa(&self) -> &Q {
        &self.kappa
    }

    pub fn dim(&self) -> usize {
        6 + 2 * (self.n + 1) + self.m + 1
    }

    pub fn zero(&self) -> AlgVector {
        AlgVector {
            six: std::array::from_fn(|_| Q::zero()),
            g1: PolyFn::zero(self.n),
            g2: PolyFn::zero(self.n),
            alpha: PolyFn::zero(self.m),
        }
    }

    /// One of the six scalar basis elements (`D1 … S` by index).
    pub fn scalar(&self, k: usize) -> AlgVector {
        let mut v = self.zero();
        v.six[k] = Q::one();
        v
    }

    /// `X(tᵏ, 0)` for `comp = 0`, `X(0, tᵏ)` for `comp = 1`.
    pub fn x(&self, k: usize, comp: usize) -> AlgVector {
        let mut v = self.zero();
        if comp == 0 {
            v.g1 = PolyFn::monomial(k, self.n);
        } else {
            v.g2 = PolyFn::monomial(k, self.n);
        }
        v
    }

    pub fn x_poly(&self, g1: PolyFn, g2: PolyFn) -> AlgVector {
        let mut v = self.zero();
        v.g1 = PolyFn::from_coeffs(g1.coeffs().to_vec(), self.n);
        v.g2 = PolyFn::from_coeffs(g2.coeffs().to_vec(), self.n);
        v
    }

    /// `Z(tᵏ)`.
    pub fn z(&self, k: usize) -> AlgVector {
        let mut v = self.zero();
        v.alpha = PolyFn::monomial(k, self.m);
        v
    }

    pub fn z_poly(&self, alpha: PolyFn) -> AlgVector {
        let mut v = self.zero();
        v.alpha = PolyFn::from_coeffs(alpha.coeffs().to_vec(), self.m);
        v
    }

    /// Canonical coordinate basis: `D1, D2, D3, J, P, S`, then `X` by degree
    /// then component, then `Z` by degree.
    pub fn basis(&self) -> Vec<AlgVector> {
        let mut out: Vec<AlgVector> = (0..6).map(|k| self.scalar(k)).collect();
        for k in 0..=self.n {
            out.push(self.x(k, 0));
            out.push(self.x(k, 1));
        }
        out.extend((0..=self.m).map(|k| self.z(k)));
        out
    }

    pub fn coordinate_label(&self, i: usize) -> String {
        if i < 6 {
            SCALAR_LABELS[i].to_string()
        } else if i < 6 + 2 * (self.n + 1) {
            let k = (i - 6) / 2;
            let mono = match k {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            if (i - 6) % 2 == 0 {
                format!("X({mono},0)")
            } else {
                format!("X(0,{mono})")
            }
        } else {
            let k = i - 6 - 2 * (self.n + 1);
            match k {
                0 => "Z(1)".into(),
                1 => "Z(t)".into(),
                _ => format!("Z(t^{k})"),
            }
        }
    }

    /// Polynomial degree carried by a coordinate; `None` for the six scalars.
    pub fn coordinate_degree(&self, i: usize) -> Option<usize> {
        if i < 6 {
            None
        } else if i < 6 + 2 * (self.n + 1) {
            Some((i - 6) / 2)
        } else {
            Some(i - 6 - 2 * (self.n + 1))
        }
    }

    pub fn coords(&self, v: &AlgVector) -> Vec<Q> {
        let mut out: Vec<Q> = v.six.to_vec();
        for k in 0..=self.n {
            out.push(v.g1.coeff(k).clone());
            out.push(v.g2.coeff(k).clone());
        }
        out.extend(v.alpha.coeffs().iter().cloned());
        out
    }

    pub fn from_coords(&self, c: &[Q]) -> AlgVector {
        assert_eq!(c.len(), self.dim());
        let n1 = self.n + 1;
        let g1 = (0..n1).map(|k| c[6 + 2 * k].clone()).collect();
        let g2 = (0..n1).map(|k| c[7 + 2 * k].clone()).collect();
        AlgVector {
            six: std::array::from_fn(|i| c[i].clone()),
            g1: PolyFn::from_coeffs(g1, self.n),
            g2: PolyFn::from_coeffs(g2, self.n),
            alpha: PolyFn::from_coeffs(c[6 + 2 * n1..].to_vec(), self.m),
        }
    }

    /// Weight of `S` under `a`: `[a, S] = w(a)·S`.
    fn s_weight(&self, a: &AlgVector) -> Q {
        q(2) * &a.six[D1] - q(2) * &a.six[D2] + &self.kappa * &a.six[D3]
    }

    /// Action of the scalar part of `a` on an `X` parameter.
    fn act_x(&self, a: &AlgVector, g1: &PolyFn, g2: &PolyFn) -> (PolyFn, PolyFn) {
        let part = |g: &PolyFn, rot: &PolyFn| {
            g.t_dt()
                .scale(&a.six[D1])
                .sub(&g.scale(&a.six[D2]))
                .add(&g.derivative().scale(&a.six[P]))
                .add(&rot.scale(&a.six[J]))
        };
        (part(g1, g2), part(g2, &g1.scale(&q(-1))))
    }

    /// Action of the scalar part of `a` on a `Z` parameter.
    fn act_z(&self, a: &AlgVector, alpha: &PolyFn) -> PolyFn {
        alpha
            .scale(&q(2))
            .add(&alpha.t_dt())
            .scale(&a.six[D1])
            .sub(&alpha.scale(&(q(2) * &a.six[D2])))
            .add(&alpha.derivative().scale(&a.six[P]))
    }

    pub fn bracket(&self, a: &AlgVector, b: &AlgVector) -> AlgVector {
        let mut out = self.zero();
        out.six[P] = -(&a.six[D1] * &b.six[P] - &a.six[P] * &b.six[D1]);
        out.six[S] = self.s_weight(a) * &b.six[S] - self.s_weight(b) * &a.six[S];
        let (ab1, ab2) = self.act_x(a, &b.g1, &b.g2);
        let (ba1, ba2) = self.act_x(b, &a.g1, &a.g2);
        out.g1 = ab1.sub(&ba1);
        out.g2 = ab2.sub(&ba2);
        // [X(γ), X(σ)] = Z(σ·γ_tt − γ·σ_tt) with γ from a, σ from b.
        let dot = |u1: &PolyFn, u2: &PolyFn, w1: &PolyFn, w2: &PolyFn| {
            u1.mul(w1, self.m).add(&u2.mul(w2, self.m))
        };
        let (a1tt, a2tt) = (a.g1.derivative().derivative(), a.g2.derivative().derivative());
        let (b1tt, b2tt) = (b.g1.derivative().derivative(), b.g2.derivative().derivative());
        let xx = dot(&b.g1, &b.g2, &a1tt, &a2tt).sub(&dot(&a.g1, &a.g2, &b1tt, &b2tt));
        out.alpha = self.act_z(a, &b.alpha).sub(&self.act_z(b, &a.alpha)).add(&xx);
        out
    }
}

/// Largest coordinate magnitude of `[[a,b],c] + [[b,c],a] + [[c,a],b]` over
/// all basis triples, under the given bracket.
pub fn jacobi_check(
    alg: &Algebra,
    basis: &[AlgVector],
    bracket: impl Fn(&AlgVector, &AlgVector) -> AlgVector + Sync,
) -> Q {
    let n = basis.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k)))).collect();
    triples
        .par_iter()
        .map(|&(i, j, k)| {
            let (a, b, c) = (&basis[i], &basis[j], &basis[k]);
            let sum = bracket(&bracket(a, b), c).add(&bracket(&bracket(b, c), a)).add(&bracket(&bracket(c, a), b));
            alg.coords(&sum).into_iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
        })
        .reduce(Q::zero, |x, y| x.max(y))
}

/// Largest coordinate magnitude of `[a,b] + [b,a]` over all basis pairs.
pub fn antisymmetry_check(alg: &Algebra, basis: &[AlgVector]) -> Q {
    let mut worst = Q::zero();
    for a in basis {
        for b in basis {
            let s = alg.bracket(a, b).add(&alg.bracket(b, a));
            for x in alg.coords(&s) {
                worst = worst.max(x.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::poly::q_frac;

    fn alg(n: usize) -> Algebra {
        Algebra::new(n, q_frac(2, 7)).unwrap()
    }

    #[test]
    fn dimension_and_caps() {
        let a = alg(4);
        assert_eq!(a.m(), 6);
        assert_eq!(a.dim(), 6 + 10 + 7);
        assert_eq!(alg(2).m(), 2);
        assert!(Algebra::new(1, q(1)).is_err());
        let b = a.basis();
        assert_eq!(b.len(), a.dim());
        for (i, v) in b.iter().enumerate() {
            let c = a.coords(v);
            assert!(c.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() }));
            assert_eq!(&a.from_coords(&c), v);
        }
        assert_eq!(a.coordinate_label(8), "X(t,0)");
        assert_eq!(a.coordinate_label(17), "Z(t)");
    }

    #[test]
    fn commutation_table() {
        let a = alg(4);
        let (d1, d2, d3, j, p, s) = (a.scalar(D1), a.scalar(D2), a.scalar(D3), a.scalar(J), a.scalar(P), a.scalar(S));
        assert_eq!(a.bracket(&d2, &s), s.scale(&q(-2)));
        assert_eq!(a.bracket(&d1, &p), p.scale(&q(-1)));
        assert_eq!(a.bracket(&d1, &s), s.scale(&q(2)));
        assert_eq!(a.bracket(&d3, &s), s.scale(&q_frac(2, 7)));
        // [D1, X(t²,0)] = X(2t², 0)
        assert_eq!(a.bracket(&d1, &a.x(2, 0)), a.x(2, 0).scale(&q(2)));
        // [D1, Z(t)] = Z(2t + t) = 3 Z(t)
        assert_eq!(a.bracket(&d1, &a.z(1)), a.z(1).scale(&q(3)));
        assert_eq!(a.bracket(&d2, &a.x(3, 1)), a.x(3, 1).scale(&q(-1)));
        assert_eq!(a.bracket(&d2, &a.z(3)), a.z(3).scale(&q(-2)));
        assert_eq!(a.bracket(&p, &a.x(3, 0)), a.x(2, 0).scale(&q(3)));
        assert_eq!(a.bracket(&p, &a.z(2)), a.z(1).scale(&q(2)));
        // [J, X(γ¹, γ²)] = X(γ², −γ¹)
        assert_eq!(a.bracket(&j, &a.x(1, 0)), a.x(1, 1).scale(&q(-1)));
        assert_eq!(a.bracket(&j, &a.x(1, 1)), a.x(1, 0));
        assert!(a.bracket(&a.x(0, 0), &a.x(0, 1)).is_zero());
        assert!(a.bracket(&d3, &p).is_zero());
    }

    #[test]
    fn x_bracket_orientation() {
        // γ = (t², 0), σ = (1, 0): σ·γ_tt − γ·σ_tt = 2
        let a = alg(4);
        assert_eq!(a.bracket(&a.x(2, 0), &a.x(0, 0)), a.z(0).scale(&q(2)));
        assert_eq!(a.bracket(&a.x(0, 0), &a.x(2, 0)), a.z(0).scale(&q(-2)));
    }

    #[test]
    fn jacobi_and_antisymmetry_are_exact() {
        for n in [2, 3, 4] {
            let a = alg(n);
            let b = a.basis();
            assert!(jacobi_check(&a, &b, |x, y| a.bracket(x, y)).is_zero(), "N={n}");
            assert!(antisymmetry_check(&a, &b).is_zero());
        }
    }

    #[test]
    fn corrupted_structure_constant_breaks_jacobi() {
        let a = alg(3);
        let b = a.basis();
        let corrupted = |x: &AlgVector, y: &AlgVector| {
            let mut r = a.bracket(x, y);
            // Doubles the X-part produced by [P, X(γ)] = X(γ_t).
            let pp = (&x.six[P] * &y.six[P]).is_zero() && (!x.six[P].is_zero() || !y.six[P].is_zero());
            if pp {
                r.g1 = r.g1.scale(&q(2));
                r.g2 = r.g2.scale(&q(2));
            }
            r
        };
        assert!(!jacobi_check(&a, &b, corrupted).is_zero());
    }

    #[test]
    fn display() {
        let a = alg(2);
        let v = a.scalar(D1).scale(&q_frac(2, 7)).sub(&a.scalar(D3).scale(&q(2))).add(&a.z(1));
        assert_eq!(v.to_string(), "2/7D1 - 2D3 + Z(t)");
    }
}
