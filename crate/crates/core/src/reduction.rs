//! Solutions invariant under the two-dimensional subalgebra spanned by
//! `X(γ) + a₁S` and `X(σ) + a₂S`.
//!
//! The invariant part `(v̂, ω̂, φ̂, T̂)` depends on `(t, p)` only. With
//! `W = [γ σ]`, `H = W_t W⁻¹`, `δ = det W` and `B = W⁻ᵀ(a₁, a₂)` it solves
//!
//! ```text
//! v̂_t + ω̂ v̂_p + H v̂ + c_p p^κ B = 0,    φ̂_p + R p^(κ−1) T̂ = 0,
//! δ_t/δ + ω̂_p = 0,                       T̂_t + ω̂ T̂_p − B·v̂ = 0,
//! ```
//!
//! so `ω̂ = −(δ_t/δ)p + χ`, the characteristics carry `ξ = δp − θ` with
//! `θ = ∫δχ`, and `v̂ = G v̌` with `G_t = −HG`, `G(t₀) = I`. Along a
//! characteristic `p(τ) = (ξ + θ(τ))/δ(τ)`:
//!
//! ```text
//! v̌ = v⁰(ξ) − c_p ∫ p(τ)^κ G⁻¹B dτ,   T̂ = T⁰(ξ) + ∫ B·G v̌ dτ.
//! ```
//!
//! All τ-integrals (and `G`, `θ`) are advanced together by one classical
//! Runge–Kutta pass on a fixed grid between `t₀` and `t`, written against
//! [`Real`] so that field derivatives are exact derivatives of the discrete
//! scheme.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::fields::{EvalBox, FieldFormula, FieldScalar, PhysConsts, StateField};
use crate::jet::{Jet1, Real};
use crate::quad::{adaptive_simpson, hermite, GL4};
use crate::scalar_fn::{ScalarFn, TimeFn};
use crate::transforms::{derotation, invert, pushforward_field, PushforwardField};

pub const DEFAULT_STEPS_PER_UNIT: usize = 1000;
pub const DEFAULT_PHI_PANELS: usize = 8;
pub const COMPATIBILITY_TOL: f64 = 1e-10;

/// Structured-text description of a reduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionConfig {
    pub gamma: [ScalarFn; 2],
    pub sigma: [ScalarFn; 2],
    #[serde(default)]
    pub a1: f64,
    #[serde(default)]
    pub a2: f64,
    #[serde(default = "ScalarFn::zero")]
    pub chi: ScalarFn,
    pub v0: [ScalarFn; 2],
    #[serde(rename = "T0", default = "ScalarFn::zero")]
    pub temp0: ScalarFn,
    #[serde(default)]
    pub t0: f64,
    #[serde(default = "one")]
    pub p0: f64,
    #[serde(default = "default_steps")]
    pub steps_per_unit: usize,
    #[serde(default = "default_panels")]
    pub phi_panels: usize,
}

fn one() -> f64 {
    1.0
}

fn default_steps() -> usize {
    DEFAULT_STEPS_PER_UNIT
}

fn default_panels() -> usize {
    DEFAULT_PHI_PANELS
}

pub const BUILTIN_REDUCTIONS: [&str; 4] = ["constant-frame", "rotating-shear", "forced-column", "sheared-basis"];

impl ReductionConfig {
    fn base(gamma: [ScalarFn; 2], sigma: [ScalarFn; 2], v0: [ScalarFn; 2]) -> Self {
        Self {
            gamma,
            sigma,
            a1: 0.0,
            a2: 0.0,
            chi: ScalarFn::zero(),
            v0,
            temp0: ScalarFn::zero(),
            t0: 0.0,
            p0: 1.0,
            steps_per_unit: DEFAULT_STEPS_PER_UNIT,
            phi_panels: DEFAULT_PHI_PANELS,
        }
    }

    /// Named reductions: `constant-frame` (all integrands vanish),
    /// `rotating-shear` (time-periodic shear), `forced-column` (`a₁ = 1`
    /// with a constant frame) and `sheared-basis` (non-constant `δ`, both
    /// `a`'s, vertical drift `χ`).
    pub fn builtin(name: &str) -> Result<Self> {
        let c = ScalarFn::constant;
        let rot = || ([ScalarFn::cos(1.0, 1.0), ScalarFn::sin(1.0, 1.0)], [ScalarFn::sin(-1.0, 1.0), ScalarFn::cos(1.0, 1.0)]);
        Ok(match name {
            "constant-frame" => {
                let mut cfg = Self::base([c(1.0), c(0.0)], [c(0.0), c(1.0)], [c(0.7), c(-0.4)]);
                cfg.temp0 = c(1.2);
                cfg
            }
            "rotating-shear" => {
                let (g, s) = rot();
                Self::base(g, s, [ScalarFn::identity(), c(0.0)])
            }
            "forced-column" => {
                let mut cfg = Self::base([c(1.0), c(0.0)], [c(0.0), c(1.0)], [c(0.0), c(0.0)]);
                cfg.a1 = 1.0;
                cfg
            }
            "sheared-basis" => {
                let mut cfg = Self::base(
                    [ScalarFn::poly([1.0, 1.0]), c(0.0)],
                    [ScalarFn::identity(), ScalarFn::poly([1.0, 0.0, 1.0])],
                    [ScalarFn::sin(1.0, 1.0), ScalarFn::poly([0.0, 0.5])],
                );
                cfg.a1 = 0.5;
                cfg.a2 = -0.3;
                cfg.chi = c(0.1);
                cfg.temp0 = ScalarFn::poly([1.0, 0.2]);
                cfg
            }
            other => return Err(Error::Config(format!("unknown built-in reduction `{other}`"))),
        })
    }

    pub fn build(&self, consts: &PhysConsts, domain_box: &EvalBox) -> Result<ReductionSpec> {
        ReductionSpec::new(self, consts, domain_box)
    }
}

/// A validated reduction, ready to evaluate.
#[derive(Clone, Debug)]
pub struct ReductionSpec {
    gamma: [TimeFn; 2],
    sigma: [TimeFn; 2],
    a: [f64; 2],
    chi: ScalarFn,
    v0: [ScalarFn; 2],
    temp0: ScalarFn,
    t0: f64,
    p0: f64,
    consts: PhysConsts,
    domain: EvalBox,
    steps: usize,
    phi_panels: usize,
}

/// Sampled compatibility defect and smallest `δ` over the t-range.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Compatibility {
    pub max_defect: f64,
    pub min_delta: f64,
}

struct Frame<S> {
    g: [S; 2],
    g_t: [S; 2],
    g_tt: [S; 2],
    s: [S; 2],
    s_t: [S; 2],
    s_tt: [S; 2],
    delta: S,
}

impl ReductionSpec {
    pub fn new(cfg: &ReductionConfig, consts: &PhysConsts, domain_box: &EvalBox) -> Result<Self> {
        consts.validate()?;
        domain_box.validate()?;
        if cfg.steps_per_unit == 0 || cfg.phi_panels == 0 {
            return Err(invalid("steps_per_unit and phi_panels must be positive"));
        }
        if !(cfg.p0 > 0.0) {
            return Err(domain(format!("anchor pressure must be positive (got {})", cfg.p0)));
        }
        let (lo, hi) = (domain_box.t.0.min(cfg.t0), domain_box.t.1.max(cfg.t0));
        let span = (hi - lo).max(f64::EPSILON);
        let spec = Self {
            gamma: cfg.gamma.clone().map(TimeFn::new),
            sigma: cfg.sigma.clone().map(TimeFn::new),
            a: [cfg.a1, cfg.a2],
            chi: cfg.chi.clone(),
            v0: cfg.v0.clone(),
            temp0: cfg.temp0.clone(),
            t0: cfg.t0,
            p0: cfg.p0,
            consts: *consts,
            domain: *domain_box,
            steps: ((cfg.steps_per_unit as f64 * span).ceil() as usize).max(4),
            phi_panels: cfg.phi_panels,
        };
        let comp = spec.check_compatibility(400);
        if !(comp.max_defect <= COMPATIBILITY_TOL) {
            return Err(invalid(format!(
                "γ_tt·σ − σ_tt·γ does not vanish (max {:e}); X(γ) and X(σ) do not commute",
                comp.max_defect
            )));
        }
        if !(comp.min_delta > 0.0) {
            return Err(domain(format!("δ = γ¹σ² − γ²σ¹ must stay positive (min {:e})", comp.min_delta)));
        }
        if spec.forced() {
            let margin = spec.characteristic_margin(100);
            if !(margin > 0.0) {
                return Err(domain(format!("ξ + θ(τ) reaches {margin:e} ≤ 0 inside the box")));
            }
        }
        Ok(spec)
    }

    pub fn consts(&self) -> &PhysConsts {
        &self.consts
    }

    pub fn domain(&self) -> &EvalBox {
        &self.domain
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    fn forced(&self) -> bool {
        self.a != [0.0, 0.0]
    }

    fn t_range(&self) -> (f64, f64) {
        (self.domain.t.0.min(self.t0), self.domain.t.1.max(self.t0))
    }

    fn frame<S: Real>(&self, t: S) -> Frame<S> {
        let at = |f: &[TimeFn; 2], k| [f[0].at(k, t), f[1].at(k, t)];
        let (g, s) = (at(&self.gamma, 0), at(&self.sigma, 0));
        Frame {
            g,
            g_t: at(&self.gamma, 1),
            g_tt: at(&self.gamma, 2),
            s,
            s_t: at(&self.sigma, 1),
            s_tt: at(&self.sigma, 2),
            delta: g[0] * s[1] - g[1] * s[0],
        }
    }

    pub fn delta(&self, t: f64) -> f64 {
        self.frame(t).delta
    }

    /// Sampled `max |γ_tt·σ − σ_tt·γ|` and `min δ` over the t-range
    /// (including `t₀`).
    pub fn check_compatibility(&self, n_samples: usize) -> Compatibility {
        let (lo, hi) = self.t_range();
        let n = n_samples.max(2);
        let mut out = Compatibility { max_defect: 0.0, min_delta: f64::INFINITY };
        for k in 0..n {
            let t = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let fr = self.frame(t);
            let defect = dot(fr.g_tt, fr.s) - dot(fr.s_tt, fr.g);
            out.max_defect = out.max_defect.max(defect.abs());
            out.min_delta = out.min_delta.min(fr.delta);
        }
        out
    }

    /// `θ(t) = ∫_{t₀}^t δ χ dτ` by adaptive Simpson.
    pub fn theta(&self, t: f64) -> Result<f64> {
        let (lo, hi) = (t.min(self.t0), t.max(self.t0));
        for k in 0..=64 {
            let s = lo + (hi - lo) * k as f64 / 64.0;
            if !(self.delta(s) > 0.0) {
                return Err(domain(format!("δ({s}) = {} is not positive", self.delta(s))));
            }
        }
        let f = |s: f64| self.delta(s) * self.chi.value(s);
        Ok(adaptive_simpson(&f, self.t0, t, 1e-12))
    }

    /// Smallest `δ(t)p_min − θ(t) + θ(τ)` over a grid of `t` in the range
    /// and `τ` between `t₀` and `t`.
    fn characteristic_margin(&self, n: usize) -> f64 {
        let (lo, hi) = self.t_range();
        let grid: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
        let thetas: Vec<f64> = grid.iter().map(|&t| self.theta(t).unwrap_or(f64::NAN)).collect();
        let mut margin = f64::INFINITY;
        for (i, &t) in grid.iter().enumerate() {
            let base = self.delta(t) * self.domain.p.0 - thetas[i];
            for (j, &tau) in grid.iter().enumerate() {
                if (tau - self.t0) * (t - tau) >= 0.0 {
                    margin = margin.min(base + thetas[j]);
                }
            }
        }
        margin
    }

    /// `(v̂¹, v̂², ω̂, φ̂, T̂)` at `(t, p)`.
    pub fn reduced<S: Real>(&self, t: S, p: S) -> [S; 5] {
        let kappa = self.consts.kappa();
        let fr = self.frame(t);
        let delta_t = fr.g_t[0] * fr.s[1] + fr.g[0] * fr.s_t[1] - fr.g_t[1] * fr.s[0] - fr.g[1] * fr.s_t[0];
        let omega = -(delta_t / fr.delta) * p + self.chi.eval(t);

        let theta = self.integrate(t, &[]).theta;
        // φ̂ = −R ∫ e^(κu) T̂(t, e^u) du over u ∈ [ln p₀, ln p].
        let panels = self.phi_panels;
        let u0 = self.p0.ln();
        let len = p.ln() - u0;
        let mut nodes = vec![p];
        for k in 0..panels {
            for &(c, _) in &GL4 {
                nodes.push((len * ((k as f64 + c) / panels as f64) + u0).exp());
            }
        }
        let xis: Vec<S> = nodes.iter().map(|&s| fr.delta * s - theta).collect();
        let run = self.integrate(t, &xis);
        let temp_hat = |j: usize| self.temp0.eval(xis[j]) + run.temp[j];

        let v_check = [
            self.v0[0].eval(xis[0]) - run.k[0][0] * self.consts.cp,
            self.v0[1].eval(xis[0]) - run.k[0][1] * self.consts.cp,
        ];
        let v_hat = matvec(run.g, v_check);

        let mut phi = S::zero();
        let mut j = 1;
        for _ in 0..panels {
            for &(_, w) in &GL4 {
                phi += nodes[j].powf(kappa) * temp_hat(j) * (w / panels as f64);
                j += 1;
            }
        }
        [v_hat[0], v_hat[1], omega, phi * len * (-self.consts.r), temp_hat(0)]
    }

    /// One Runge–Kutta pass from `t₀` to `t` carrying `G`, `θ` and, per
    /// characteristic label `ξ_j`, the integrals `K_j` and `T_j`.
    fn integrate<S: Real>(&self, t: S, xis: &[S]) -> Run<S> {
        let n = self.steps;
        let h = (t - self.t0) / n as f64;
        let width = 5 + 3 * xis.len();
        let mut y = vec![S::zero(); width];
        y[0] = S::cst(1.0);
        y[3] = S::cst(1.0);
        let v0: Vec<[S; 2]> = xis.iter().map(|&xi| [self.v0[0].eval(xi), self.v0[1].eval(xi)]).collect();
        let mut tau = S::cst(self.t0);
        let mut k1 = vec![S::zero(); width];
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut tmp = k1.clone();
        let shifted = |tmp: &mut Vec<S>, y: &[S], k: &[S], c: S| {
            for ((o, &a), &b) in tmp.iter_mut().zip(y).zip(k) {
                *o = a + b * c;
            }
        };
        for _ in 0..n {
            self.rhs(tau, &y, xis, &v0, &mut k1);
            shifted(&mut tmp, &y, &k1, h * 0.5);
            self.rhs(tau + h * 0.5, &tmp, xis, &v0, &mut k2);
            shifted(&mut tmp, &y, &k2, h * 0.5);
            self.rhs(tau + h * 0.5, &tmp, xis, &v0, &mut k3);
            shifted(&mut tmp, &y, &k3, h);
            self.rhs(tau + h, &tmp, xis, &v0, &mut k4);
            for i in 0..width {
                y[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
            tau += h;
        }
        Run {
            g: [[y[0], y[1]], [y[2], y[3]]],
            theta: y[4],
            k: (0..xis.len()).map(|j| [y[5 + 3 * j], y[6 + 3 * j]]).collect(),
            temp: (0..xis.len()).map(|j| y[7 + 3 * j]).collect(),
        }
    }

    fn rhs<S: Real>(&self, tau: S, y: &[S], xis: &[S], v0: &[[S; 2]], out: &mut [S]) {
        let fr = self.frame(tau);
        let inv_d = fr.delta.recip();
        // W⁻¹ rows are σ⊥/δ and −γ⊥/δ.
        let w_inv = [[fr.s[1] * inv_d, -fr.s[0] * inv_d], [-fr.g[1] * inv_d, fr.g[0] * inv_d]];
        let w_t = [[fr.g_t[0], fr.s_t[0]], [fr.g_t[1], fr.s_t[1]]];
        let hm = matmul(w_t, w_inv);
        let g = [[y[0], y[1]], [y[2], y[3]]];
        let dg = matmul(hm, g);
        out[0] = -dg[0][0];
        out[1] = -dg[0][1];
        out[2] = -dg[1][0];
        out[3] = -dg[1][1];
        out[4] = fr.delta * self.chi.eval(tau);
        if xis.is_empty() {
            return;
        }
        let b = [
            w_inv[0][0] * self.a[0] + w_inv[1][0] * self.a[1],
            w_inv[0][1] * self.a[0] + w_inv[1][1] * self.a[1],
        ];
        let det_g = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let g_inv = [[g[1][1] / det_g, -g[0][1] / det_g], [-g[1][0] / det_g, g[0][0] / det_g]];
        let g_inv_b = matvec(g_inv, b);
        let kappa = self.consts.kappa();
        for (j, &xi) in xis.iter().enumerate() {
            let base = 5 + 3 * j;
            if self.forced() {
                let p_tau = (xi + y[4]) * inv_d;
                let w = p_tau.powf(kappa);
                out[base] = w * g_inv_b[0];
                out[base + 1] = w * g_inv_b[1];
                let v_check = [v0[j][0] - y[base] * self.consts.cp, v0[j][1] - y[base + 1] * self.consts.cp];
                out[base + 2] = dot(b, matvec(g, v_check));
            } else {
                out[base] = S::zero();
                out[base + 1] = S::zero();
                out[base + 2] = S::zero();
            }
        }
    }

    /// The full field from the invariant part via the ansatz.
    fn assemble<S: Real>(&self, z: [S; 4]) -> [S; 5] {
        let [t, x, y, p] = z;
        let kappa = self.consts.kappa();
        let fr = self.frame(t);
        let [vh1, vh2, omega, phi_hat, temp_hat] = self.reduced(t, p);
        let xv = [x, y];
        let g_perp = [fr.g[1], -fr.g[0]];
        let s_perp = [fr.s[1], -fr.s[0]];
        let (sx, gx) = (dot(s_perp, xv) / fr.delta, dot(g_perp, xv) / fr.delta);
        let bx = dot([s_perp[0] * self.a[0] - g_perp[0] * self.a[1], s_perp[1] * self.a[0] - g_perp[1] * self.a[1]], xv)
            / fr.delta;
        let pk = p.powf(kappa);
        [
            vh1 + sx * fr.g_t[0] - gx * fr.s_t[0],
            vh2 + sx * fr.g_t[1] - gx * fr.s_t[1],
            omega,
            phi_hat + pk * bx * self.consts.cp - sx * dot(fr.g_tt, xv) * 0.5 + gx * dot(fr.s_tt, xv) * 0.5,
            pk * (temp_hat - bx),
        ]
    }

    /// Pointwise defects of the four reduced equations at `(t, p)`:
    /// momentum (both components), hydrostatic, continuity, thermodynamic.
    pub fn reduced_defects(&self, t: f64, p: f64) -> [f64; 5] {
        let kappa = self.consts.kappa();
        let s = self.reduced(Jet1::var(t, 0), Jet1::var(p, 3));
        let fr = self.frame(Jet1::var(t, 0));
        let [v1, v2, om, phi, temp] = s;
        let dt = |j: Jet1| j.d[0];
        let dp = |j: Jet1| j.d[3];
        let d = fr.delta.v;
        let w_inv = [[fr.s[1].v / d, -fr.s[0].v / d], [-fr.g[1].v / d, fr.g[0].v / d]];
        let w_t = [[fr.g_t[0].v, fr.s_t[0].v], [fr.g_t[1].v, fr.s_t[1].v]];
        let hm = matmul(w_t, w_inv);
        let b = [
            w_inv[0][0] * self.a[0] + w_inv[1][0] * self.a[1],
            w_inv[0][1] * self.a[0] + w_inv[1][1] * self.a[1],
        ];
        let hv = matvec(hm, [v1.v, v2.v]);
        let forcing = self.consts.cp * p.powf(kappa);
        [
            dt(v1) + om.v * dp(v1) + hv[0] + forcing * b[0],
            dt(v2) + om.v * dp(v2) + hv[1] + forcing * b[1],
            dp(phi) + self.consts.r * p.powf(kappa - 1.0) * temp.v,
            fr.delta.d[0] / d + dp(om),
            dt(temp) + om.v * dp(temp) - (b[0] * v1.v + b[1] * v2.v),
        ]
    }

    /// Largest reduced-equation defect on an `n × n` grid over the box's
    /// `(t, p)` ranges.
    pub fn reduced_check(&self, n: usize) -> f64 {
        use rayon::prelude::*;
        let n = n.max(2);
        let (t, p) = (self.domain.t, self.domain.p);
        (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let tt = t.0 + (t.1 - t.0) * i as f64 / (n - 1) as f64;
                let pp = p.0 + (p.1 - p.0) * j as f64 / (n - 1) as f64;
                self.reduced_defects(tt, pp).iter().fold(0.0f64, |m, v| m.max(v.abs()))
            })
            .reduce(|| 0.0, f64::max)
    }
}

struct Run<S> {
    g: [[S; 2]; 2],
    theta: S,
    k: Vec<[S; 2]>,
    temp: Vec<S>,
}

fn dot<S: Real>(a: [S; 2], b: [S; 2]) -> S {
    a[0] * b[0] + a[1] * b[1]
}

fn matvec<S: Real>(m: [[S; 2]; 2], v: [S; 2]) -> [S; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

fn matmul<S: Real>(a: [[S; 2]; 2], b: [[S; 2]; 2]) -> [[S; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j]))
}

/// The assembled solution as a [`StateField`].
#[derive(Clone, Debug)]
pub struct ReducedSolution {
    pub spec: ReductionSpec,
}

impl FieldFormula for ReducedSolution {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5] {
        self.spec.assemble(z)
    }

    fn label(&self) -> String {
        "reduced-solution".into()
    }
}

pub fn assemble_solution(spec: &ReductionSpec) -> ReducedSolution {
    ReducedSolution { spec: spec.clone() }
}

/// The assembled solution carried to the frame rotating with parameter `f`.
pub fn rotating_family(spec: &ReductionSpec, f: f64) -> PushforwardField {
    let field: Arc<dyn StateField> = Arc::new(assemble_solution(spec));
    pushforward_field(&invert(&derotation(f)), field)
}

/// Fundamental matrix `G` of `G_t = −HG`, `G(t₀) = I`, tabulated on a
/// uniform grid with cubic Hermite dense output.
#[derive(Clone, Debug)]
pub struct GTable {
    pub times: Vec<f64>,
    pub values: Vec<[[f64; 2]; 2]>,
    pub slopes: Vec<[[f64; 2]; 2]>,
}

impl GTable {
    pub fn at(&self, t: f64) -> [[f64; 2]; 2] {
        let n = self.times.len() - 1;
        let (lo, hi) = (self.times[0], self.times[n]);
        let u = ((t - lo) / (hi - lo) * n as f64).floor().clamp(0.0, (n - 1) as f64) as usize;
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                hermite(
                    t,
                    self.times[u],
                    self.times[u + 1],
                    self.values[u][i][j],
                    self.values[u + 1][i][j],
                    self.slopes[u][i][j],
                    self.slopes[u + 1][i][j],
                )
            })
        })
    }

    pub fn inverse_at(&self, t: f64) -> [[f64; 2]; 2] {
        inverse(self.at(t))
    }
}

pub fn inverse(m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]]
}

/// Integrates `G` from `t₀` to `t_end` with `steps` Runge–Kutta steps.
pub fn solve_g(spec: &ReductionSpec, t_end: f64, steps: usize) -> Result<GTable> {
    if steps < 100 {
        return Err(invalid(format!("solve_G needs at least 100 steps (got {steps})")));
    }
    let h = (t_end - spec.t0) / steps as f64;
    let slope = |t: f64, g: [[f64; 2]; 2]| -> Result<[[f64; 2]; 2]> {
        let fr = spec.frame(t);
        if !(fr.delta > 0.0) {
            return Err(domain(format!("δ({t}) = {} is not positive", fr.delta)));
        }
        let d = fr.delta;
        let w_inv = [[fr.s[1] / d, -fr.s[0] / d], [-fr.g[1] / d, fr.g[0] / d]];
        let hm = matmul([[fr.g_t[0], fr.s_t[0]], [fr.g_t[1], fr.s_t[1]]], w_inv);
        Ok(matmul(hm, g).map(|r| r.map(|v| -v)))
    };
    let comb = |a: [[f64; 2]; 2], b: [[f64; 2]; 2], c: f64| -> [[f64; 2]; 2] {
        std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + c * b[i][j]))
    };
    let mut g = [[1.0, 0.0], [0.0, 1.0]];
    let mut table = GTable { times: vec![spec.t0], values: vec![g], slopes: vec![slope(spec.t0, g)?] };
    for k in 0..steps {
        let t = spec.t0 + h * k as f64;
        let k1 = slope(t, g)?;
        let k2 = slope(t + h / 2.0, comb(g, k1, h / 2.0))?;
        let k3 = slope(t + h / 2.0, comb(g, k2, h / 2.0))?;
        let k4 = slope(t + h, comb(g, k3, h))?;
        g = std::array::from_fn(|i| {
            std::array::from_fn(|j| g[i][j] + h / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]))
        });
        let tn = spec.t0 + h * (k + 1) as f64;
        table.times.push(tn);
        table.values.push(g);
        table.slopes.push(slope(tn, g)?);
    }
    Ok(table)
}

/// `tr H = δ_t/δ` at `t`.
pub fn trace_h(spec: &ReductionSpec, t: f64) -> f64 {
    let fr = spec.frame(Jet1::var(t, 0));
    fr.delta.d[0] / fr.delta.v
}
