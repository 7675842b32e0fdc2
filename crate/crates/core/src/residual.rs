//! Residuals of the primitive equations and first-order symmetry checks.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, invalid, Error, Result};
use crate::fields::{
    field_jet, DerivativeMode, HeatingField, PhysConsts, Point4, StateField, StateJet, OMEGA, P, PHI, T,
    TEMP, U, V, X, Y,
};
use crate::jet::{Jet1, Jet2, Real};
use crate::scalar_fn::{ScalarFn, TimeFn};

pub const RESIDUAL_NAMES: [&str; 5] = ["r_u", "r_v", "r_hyd", "r_cont", "r_T"];

/// Residual gate a base field must pass before it is deformed.
pub const SOLUTION_GATE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual5 {
    pub r_u: f64,
    pub r_v: f64,
    pub r_hyd: f64,
    pub r_cont: f64,
    pub r_t: f64,
}

impl Residual5 {
    pub fn to_array(self) -> [f64; 5] {
        [self.r_u, self.r_v, self.r_hyd, self.r_cont, self.r_t]
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Residual from values and first partials of the state at a point with
/// pressure `p` and heating value `j`.
pub fn residual_from_jet(s: &StateJet, consts: &PhysConsts, j: f64, p: f64) -> Residual5 {
    let (u, v, w) = (s[U].v, s[V].v, s[OMEGA].v);
    let advect = |c: usize| s[c].d[T] + u * s[c].d[X] + v * s[c].d[Y] + w * s[c].d[P];
    Residual5 {
        r_u: advect(U) - consts.f * v + s[PHI].d[X],
        r_v: advect(V) + consts.f * u + s[PHI].d[Y],
        r_hyd: s[PHI].d[P] + consts.r / p * s[TEMP].v,
        r_cont: s[U].d[X] + s[V].d[Y] + s[OMEGA].d[P],
        r_t: advect(TEMP) - consts.kappa() * w / p * s[TEMP].v - j / consts.cp,
    }
}

pub fn pe_residual(
    field: &dyn StateField,
    consts: &PhysConsts,
    heating: &dyn HeatingField,
    pt: Point4,
    mode: DerivativeMode,
) -> Result<Residual5> {
    let jet = field_jet(field, pt, mode)?;
    Ok(residual_from_jet(&jet, consts, heating.value(pt), pt.p))
}

/// Per-component maxima and root-mean-squares over a point set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResidualNorms {
    pub linf: [f64; 5],
    pub rms: [f64; 5],
    pub count: usize,
}

impl ResidualNorms {
    pub fn max(&self) -> f64 {
        self.linf.iter().fold(0.0, |m, &r| m.max(r))
    }

    fn from_residuals(rs: &[Residual5]) -> Result<Self> {
        if rs.is_empty() {
            return Err(invalid("residual norms need at least one point"));
        }
        let mut linf = [0.0; 5];
        let mut sq = [0.0; 5];
        for r in rs {
            for (c, v) in r.to_array().into_iter().enumerate() {
                linf[c] = f64::max(linf[c], v.abs());
                sq[c] += v * v;
            }
        }
        let n = rs.len() as f64;
        Ok(Self { linf, rms: sq.map(|s| (s / n).sqrt()), count: rs.len() })
    }
}

pub fn residual_norms(
    field: &dyn StateField,
    consts: &PhysConsts,
    heating: &dyn HeatingField,
    points: &[Point4],
    mode: DerivativeMode,
) -> Result<ResidualNorms> {
    let rs = points
        .par_iter()
        .map(|&pt| pe_residual(field, consts, heating, pt, mode))
        .collect::<Result<Vec<_>>>()?;
    ResidualNorms::from_residuals(&rs)
}

/// Basis generators of the invariance algebras, plus the two extra
/// generators of the `c_p = R` system.
#[derive(Clone, Debug)]
pub enum Generator {
    D1,
    D2,
    D3,
    J,
    P,
    S,
    X(TimeFn, TimeFn),
    Z(TimeFn),
    /// Time reparametrization `ℛ(λ)` (only a symmetry when `c_p = R`).
    R(TimeFn),
    /// Pressure boost `𝒫(ψ)` (only a symmetry when `c_p = R`).
    PressureBoost(TimeFn),
}

impl Generator {
    pub fn x(g1: ScalarFn, g2: ScalarFn) -> Self {
        Generator::X(TimeFn::new(g1), TimeFn::new(g2))
    }

    pub fn z(alpha: ScalarFn) -> Self {
        Generator::Z(TimeFn::new(alpha))
    }

    pub fn r(lambda: ScalarFn) -> Self {
        Generator::R(TimeFn::new(lambda))
    }

    pub fn pressure_boost(psi: ScalarFn) -> Self {
        Generator::PressureBoost(TimeFn::new(psi))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Generator::D1 => "D1",
            Generator::D2 => "D2",
            Generator::D3 => "D3",
            Generator::J => "J",
            Generator::P => "P",
            Generator::S => "S",
            Generator::X(..) => "X",
            Generator::Z(_) => "Z",
            Generator::R(_) => "R",
            Generator::PressureBoost(_) => "Pp",
        }
    }
}

/// Every basis generator, the infinite families instantiated with sample
/// parameters `X(sin t, t²)` and `Z(cos 2t)`.
pub fn sample_generators() -> Vec<(String, Generator)> {
    let mut out: Vec<(String, Generator)> = [
        Generator::D1,
        Generator::D2,
        Generator::D3,
        Generator::J,
        Generator::P,
        Generator::S,
    ]
    .into_iter()
    .map(|g| (g.name().to_string(), g))
    .collect();
    out.push(("X(sin t, t^2)".into(), Generator::x(ScalarFn::sin(1.0, 1.0), ScalarFn::poly([0.0, 0.0, 1.0]))));
    out.push(("Z(cos 2t)".into(), Generator::z(ScalarFn::cos(1.0, 2.0))));
    out
}

/// `ℛ(λ)` and `𝒫(ψ)` with sample parameters.
pub fn extended_generators() -> Vec<(String, Generator)> {
    vec![
        ("R(0.2+0.5t+0.3t^2)".into(), Generator::r(ScalarFn::poly([0.2, 0.5, 0.3]))),
        ("Pp(0.1+t)".into(), Generator::pressure_boost(ScalarFn::poly([0.1, 1.0]))),
    ]
}

/// Which algebra a generator is realized in: the rest frame (`f = 0`) or a
/// frame rotating with Coriolis parameter `f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Frame {
    Rest,
    Rotating { f: f64 },
}

/// A vector field `τ∂_t + ξ·∂_(x,y,p) + η·∂_(u,v,ω,φ,T)` as a linear
/// combination of generators. Coefficients are ordered
/// `(τ, ξˣ, ξʸ, ξᵖ, ηᵘ, ηᵛ, ηʷ, ηᵠ, ηᵀ)` and are functions of
/// `z = (t, x, y, p, u, v, ω, φ, T)`.
#[derive(Clone, Debug)]
pub struct VectorFieldSpec {
    pub terms: Vec<(f64, Generator)>,
    pub frame: Frame,
    pub kappa: f64,
    pub cp: f64,
}

impl VectorFieldSpec {
    pub fn new(frame: Frame, consts: &PhysConsts) -> Self {
        Self { terms: Vec::new(), frame, kappa: consts.kappa(), cp: consts.cp }
    }

    /// A single generator realized in the rest frame.
    pub fn rest(g: Generator, consts: &PhysConsts) -> Self {
        Self::new(Frame::Rest, consts).with(1.0, g)
    }

    /// A single generator realized in the frame rotating with `consts.f`.
    pub fn rotating(g: Generator, consts: &PhysConsts) -> Self {
        Self::new(Frame::Rotating { f: consts.f }, consts).with(1.0, g)
    }

    pub fn with(mut self, coef: f64, g: Generator) -> Self {
        self.terms.push((coef, g));
        self
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(c, g)| format!("{c}·{}", g.name())).collect();
        parts.join(" + ")
    }

    pub fn coefficients<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        let mut out = [S::zero(); 9];
        for (c, g) in &self.terms {
            let k = self.generator_coefficients(g, z);
            for i in 0..9 {
                out[i] += k[i] * *c;
            }
        }
        out
    }

    pub fn at(&self, z: [f64; 9]) -> [f64; 9] {
        self.coefficients(z)
    }

    fn generator_coefficients<S: Real>(&self, g: &Generator, z: [S; 9]) -> [S; 9] {
        let [t, x, y, p, u, v, w, phi, temp] = z;
        let o = S::zero();
        let fh = match self.frame {
            Frame::Rest => 0.0,
            Frame::Rotating { f } => f / 2.0,
        };
        match g {
            Generator::D1 => [
                t,
                t * y * fh,
                -(t * x * fh),
                o,
                -(u - t * v * fh - y * fh),
                -(v + t * u * fh + x * fh),
                -w,
                -(phi * 2.0 + (x * x + y * y) * (fh * fh)),
                temp * -2.0,
            ],
            Generator::D2 => [o, x, y, o, u, v, o, phi * 2.0, temp * 2.0],
            Generator::D3 => [o, o, o, p, o, o, w, o, o],
            Generator::J => [o, -y, x, o, -v, u, o, o, o],
            Generator::P => [S::cst(1.0), o, o, o, o, o, o, o, o],
            Generator::S => {
                let pk = p.powf(self.kappa);
                [o, o, o, o, o, o, o, pk * self.cp, -pk]
            }
            Generator::X(g1, g2) => {
                let f = 2.0 * fh;
                let eta_phi = -(g1.at(2, t) * x + g2.at(2, t) * y) - (g1.at(1, t) * y - g2.at(1, t) * x) * f;
                [o, g1.at(0, t), g2.at(0, t), o, g1.at(1, t), g2.at(1, t), o, eta_phi, o]
            }
            Generator::Z(a) => [o, o, o, o, o, o, o, a.at(0, t), o],
            Generator::R(l) => {
                let (l0, l1, l2, l3) = (l.at(0, t), l.at(1, t), l.at(2, t), l.at(3, t));
                [
                    l0 * 2.0,
                    l1 * x,
                    l1 * y,
                    l1 * p * -2.0,
                    -(l1 * u - l2 * x),
                    -(l1 * v - l2 * y),
                    -(l1 * w * 4.0 + l2 * p * 2.0),
                    -(l1 * phi * 2.0 + l3 * (x * x + y * y) * 0.5),
                    l1 * temp * -2.0,
                ]
            }
            Generator::PressureBoost(psi) => {
                let s0 = psi.at(0, t);
                [o, o, o, s0, o, o, psi.at(1, t), o, s0 * temp / p]
            }
        }
    }
}

/// Evolutionary components `Q[s] = η − τ s_t − ξ·∇s − ξᵖ s_p`, with first
/// partials, from a second-order jet of the field.
fn characteristic_jet(vf: &VectorFieldSpec, s: &[Jet2; 5], z: [Jet1; 4]) -> [Jet1; 5] {
    let s1 = s.map(|c| c.first_order());
    let z9 = [z[0], z[1], z[2], z[3], s1[0], s1[1], s1[2], s1[3], s1[4]];
    let k = vf.coefficients(z9);
    std::array::from_fn(|a| {
        let mut q = k[4 + a];
        for i in 0..4 {
            q -= k[i] * s[a].partial(i);
        }
        q
    })
}

pub type Characteristic5 = [f64; 5];

pub fn characteristic(vf: &VectorFieldSpec, field: &dyn StateField, pt: Point4) -> Result<Characteristic5> {
    if !(pt.p > 0.0) {
        return Err(domain(format!("pressure must be positive (got p={})", pt.p)));
    }
    let s = field.eval_jet2(Jet2::seed(pt.to_array()));
    Ok(characteristic_jet(vf, &s, Jet1::seed(pt.to_array())).map(|q| q.v))
}

/// L∞ residual (adiabatic) of the deformed field `s + εQ[s]` over the
/// points, for each `ε` in turn.
pub fn deformation_defects(
    vf: &VectorFieldSpec,
    field: &dyn StateField,
    consts: &PhysConsts,
    eps: &[f64],
    points: &[Point4],
) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(invalid("defect needs at least one point"));
    }
    if let Some(bad) = points.iter().find(|q| !(q.p > 0.0)) {
        return Err(domain(format!("pressure must be positive (got p={})", bad.p)));
    }
    let per_point: Vec<(f64, Vec<f64>)> = points
        .par_iter()
        .map(|&pt| {
            let s = field.eval_jet2(Jet2::seed(pt.to_array()));
            let base = s.map(|c| c.first_order());
            let q = characteristic_jet(vf, &s, Jet1::seed(pt.to_array()));
            let base_res = residual_from_jet(&base, consts, 0.0, pt.p).max_abs();
            let defects = eps
                .iter()
                .map(|&e| {
                    let deformed: StateJet = std::array::from_fn(|a| base[a] + q[a] * e);
                    residual_from_jet(&deformed, consts, 0.0, pt.p).max_abs()
                })
                .collect();
            (base_res, defects)
        })
        .collect();
    let base = per_point.iter().fold(0.0, |m, (b, _)| f64::max(m, *b));
    if !(base < SOLUTION_GATE) {
        return Err(Error::NotASolution { residual: base, gate: SOLUTION_GATE });
    }
    Ok((0..eps.len())
        .map(|k| per_point.iter().fold(0.0, |m, (_, d)| f64::max(m, d[k])))
        .collect())
}

/// L∞ residual of `s + εQ[s]`; `O(ε²)` for a symmetry generator.
pub fn infinitesimal_defect(
    vf: &VectorFieldSpec,
    field: &dyn StateField,
    consts: &PhysConsts,
    eps: f64,
    points: &[Point4],
) -> Result<f64> {
    Ok(deformation_defects(vf, field, consts, &[eps], points)?[0])
}

/// How a defect scales as `ε` shrinks by a decade per step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// Defect below [`EXACT_DEFECT`] at every `ε`.
    Exact,
    /// Successive ratios in `[50, 200]`.
    Quadratic,
    /// Successive ratios in `[5, 20]`.
    Linear,
    Inconclusive,
}

pub const EXACT_DEFECT: f64 = 1e-12;
pub const DEFAULT_EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Clone, Debug, Serialize)]
pub struct DefectScaling {
    pub eps: Vec<f64>,
    pub defects: Vec<f64>,
    pub ratios: Vec<f64>,
    pub scaling: Scaling,
}

impl DefectScaling {
    /// Symmetry-consistent: exact or quadratic.
    pub fn is_symmetry(&self) -> bool {
        matches!(self.scaling, Scaling::Exact | Scaling::Quadratic)
    }
}

pub fn classify_defects(eps: &[f64], defects: &[f64]) -> DefectScaling {
    let ratios: Vec<f64> = defects.windows(2).map(|w| w[0] / w[1]).collect();
    let band = |lo: f64, hi: f64| !ratios.is_empty() && ratios.iter().all(|&r| r >= lo && r <= hi);
    let scaling = if defects.iter().all(|&d| d < EXACT_DEFECT) {
        Scaling::Exact
    } else if band(50.0, 200.0) {
        Scaling::Quadratic
    } else if band(5.0, 20.0) {
        Scaling::Linear
    } else {
        Scaling::Inconclusive
    };
    DefectScaling { eps: eps.to_vec(), defects: defects.to_vec(), ratios, scaling }
}

/// Runs the deformation at each `ε` (each a decade apart) and classifies.
pub fn defect_scaling(
    vf: &VectorFieldSpec,
    field: &dyn StateField,
    consts: &PhysConsts,
    eps: &[f64],
    points: &[Point4],
) -> Result<DefectScaling> {
    let defects = deformation_defects(vf, field, consts, eps, points)?;
    Ok(classify_defects(eps, &defects))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{
        make_inertial, make_stratified, sample_points, EvalBox, FieldConfig, FnHeating, Monomial, PolynomialField,
        ZeroHeating,
    };

    fn consts() -> PhysConsts {
        PhysConsts::default()
    }

    fn pts(n: usize) -> Vec<Point4> {
        sample_points(11, n, &EvalBox::default()).unwrap()
    }

    #[test]
    fn zero_field_with_unit_temperature() {
        let field = PolynomialField { temp: vec![Monomial::new(1.0, [0.0; 4])], ..Default::default() };
        let c = consts();
        let r = pe_residual(&field, &c, &ZeroHeating, Point4::new(0.1, 0.2, 0.3, 0.5), DerivativeMode::Exact).unwrap();
        assert_eq!(r, Residual5 { r_u: 0.0, r_v: 0.0, r_hyd: c.r / 0.5, r_cont: 0.0, r_t: 0.0 });
    }

    #[test]
    fn stratified_is_a_solution() {
        let c = consts();
        let f = make_stratified(ScalarFn::zero(), ScalarFn::zero(), ScalarFn::constant(1.3), 1.0, &c).unwrap();
        let n = residual_norms(&f, &c, &ZeroHeating, &pts(200), DerivativeMode::Exact).unwrap();
        assert!(n.max() < 1e-12, "{n:?}");
        let g = make_stratified(ScalarFn::identity(), ScalarFn::zero(), ScalarFn::constant(1.0), 1.0, &c).unwrap();
        let n = residual_norms(&g, &c, &ZeroHeating, &pts(200), DerivativeMode::Exact).unwrap();
        assert!(n.linf[0] == 0.0 && n.linf[1] == 0.0);
    }

    #[test]
    fn inertial_is_a_rotating_solution() {
        let c = consts().with_f(1.0);
        let f = make_inertial(ScalarFn::constant(1.0), ScalarFn::zero(), ScalarFn::identity(), 1.0, 1.0, &c).unwrap();
        let n = residual_norms(&f, &c, &ZeroHeating, &pts(200), DerivativeMode::Exact).unwrap();
        assert!(n.max() < 1e-8, "{n:?}");
        // Not a solution without rotation.
        let n0 = residual_norms(&f, &consts(), &ZeroHeating, &pts(50), DerivativeMode::Exact).unwrap();
        assert!(n0.max() > 1e-2);
    }

    #[test]
    fn perturbed_geopotential_enters_momentum() {
        let c = consts();
        let mut pf = PolynomialField {
            phi: vec![Monomial::new(-c.r * 2.0, [0.0, 0.0, 0.0, 0.5])],
            temp: vec![Monomial::new(1.0, [0.0, 0.0, 0.0, 0.5])],
            ..Default::default()
        };
        let base = residual_norms(&pf, &c, &ZeroHeating, &pts(100), DerivativeMode::Exact).unwrap();
        assert!(base.max() < 1e-14);
        pf.phi.push(Monomial::new(0.1, [0.0, 1.0, 0.0, 0.0]));
        let n = residual_norms(&pf, &c, &ZeroHeating, &pts(100), DerivativeMode::Exact).unwrap();
        assert!((n.linf[0] - 0.1).abs() < 1e-15);
        assert!((n.rms[0] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn heating_only_shifts_thermodynamic_component() {
        let c = consts();
        let field = FieldConfig::builtin("manufactured-polynomial").unwrap().build(&c).unwrap();
        let heat = FnHeating(|q: Point4| q.t * q.x + q.p);
        for pt in pts(30) {
            let a = pe_residual(field.as_ref(), &c, &heat, pt, DerivativeMode::Exact).unwrap();
            let b = pe_residual(field.as_ref(), &c, &ZeroHeating, pt, DerivativeMode::Exact).unwrap();
            assert_eq!([a.r_u, a.r_v, a.r_hyd, a.r_cont], [b.r_u, b.r_v, b.r_hyd, b.r_cont]);
            assert_eq!(a.r_t, b.r_t - heat.value(pt) / c.cp);
        }
    }

    #[test]
    fn linear_components_are_linear() {
        let c = consts();
        let f1 = FieldConfig::builtin("manufactured-polynomial").unwrap().build(&c).unwrap();
        let f2 = FieldConfig::builtin("subsiding-shear").unwrap().build(&c).unwrap();
        struct Combo<'a>(&'a dyn StateField, &'a dyn StateField, f64);
        impl StateField for Combo<'_> {
            fn eval(&self, pt: Point4) -> crate::fields::StateValue {
                let (a, b) = (self.0.eval(pt).to_array(), self.1.eval(pt).to_array());
                crate::fields::StateValue::from_array(std::array::from_fn(|i| self.2 * a[i] + b[i]))
            }
            fn eval_jet(&self, z: [Jet1; 4]) -> [Jet1; 5] {
                let (a, b) = (self.0.eval_jet(z), self.1.eval_jet(z));
                std::array::from_fn(|i| a[i] * self.2 + b[i])
            }
            fn eval_jet2(&self, z: [Jet2; 4]) -> [Jet2; 5] {
                let (a, b) = (self.0.eval_jet2(z), self.1.eval_jet2(z));
                std::array::from_fn(|i| a[i] * self.2 + b[i])
            }
        }
        let alpha = 0.75;
        let combo = Combo(f1.as_ref(), f2.as_ref(), alpha);
        for pt in pts(20) {
            let r = |f: &dyn StateField| pe_residual(f, &c, &ZeroHeating, pt, DerivativeMode::Exact).unwrap();
            let (ra, rb, rc) = (r(f1.as_ref()), r(f2.as_ref()), r(&combo));
            assert!((rc.r_hyd - (alpha * ra.r_hyd + rb.r_hyd)).abs() < 1e-12);
            assert!((rc.r_cont - (alpha * ra.r_cont + rb.r_cont)).abs() < 1e-12);
        }
    }

    #[test]
    fn characteristic_examples() {
        let c = consts();
        let field = FieldConfig::builtin("manufactured-polynomial").unwrap().build(&c).unwrap();
        let pt = Point4::new(0.4, -0.3, 0.8, 0.6);
        let q = characteristic(&VectorFieldSpec::rest(Generator::z(ScalarFn::constant(1.0)), &c), field.as_ref(), pt)
            .unwrap();
        assert_eq!(q, [0.0, 0.0, 0.0, 1.0, 0.0]);
        let q = characteristic(&VectorFieldSpec::rest(Generator::S, &c), field.as_ref(), pt).unwrap();
        let pk = 0.6f64.powf(c.kappa());
        assert_eq!(q, [0.0, 0.0, 0.0, c.cp * pk, -pk]);
        let steady = make_stratified(ScalarFn::identity(), ScalarFn::zero(), ScalarFn::constant(1.0), 1.0, &c).unwrap();
        let q = characteristic(&VectorFieldSpec::rest(Generator::P, &c), &steady, pt).unwrap();
        assert_eq!(q, [0.0; 5]);
    }

    #[test]
    fn gauge_and_translation_defects_vanish() {
        let c = consts();
        let strat = FieldConfig::builtin("stratified").unwrap().build(&c).unwrap();
        let z1 = VectorFieldSpec::rest(Generator::z(ScalarFn::constant(1.0)), &c);
        let tx = VectorFieldSpec::rest(Generator::x(ScalarFn::constant(1.0), ScalarFn::zero()), &c);
        for e in [1.0, 1e-2, 1e-5] {
            assert!(infinitesimal_defect(&z1, strat.as_ref(), &c, e, &pts(50)).unwrap() < 1e-13);
            assert!(infinitesimal_defect(&tx, strat.as_ref(), &c, e, &pts(50)).unwrap() < 1e-13);
        }
    }

    #[test]
    fn defect_requires_a_solution() {
        let c = consts();
        let field = FieldConfig::builtin("manufactured-polynomial").unwrap().build(&c).unwrap();
        let vf = VectorFieldSpec::rest(Generator::D2, &c);
        assert!(matches!(
            infinitesimal_defect(&vf, field.as_ref(), &c, 1e-3, &pts(10)),
            Err(Error::NotASolution { .. })
        ));
    }

    #[test]
    fn non_symmetry_scales_linearly() {
        // A pressure boost is not a symmetry at κ = 2/7.
        let c = consts();
        let field = FieldConfig::builtin("subsiding-shear").unwrap().build(&c).unwrap();
        let vf = VectorFieldSpec::rest(Generator::pressure_boost(ScalarFn::identity()), &c);
        let s = defect_scaling(&vf, field.as_ref(), &c, &DEFAULT_EPS, &pts(100)).unwrap();
        assert_eq!(s.scaling, Scaling::Linear, "{s:?}");
    }

    #[test]
    fn classification_bands() {
        assert_eq!(classify_defects(&DEFAULT_EPS, &[1e-4, 1e-6, 1e-8]).scaling, Scaling::Quadratic);
        assert_eq!(classify_defects(&DEFAULT_EPS, &[1e-2, 1e-3, 1e-4]).scaling, Scaling::Linear);
        assert_eq!(classify_defects(&DEFAULT_EPS, &[0.0, 1e-15, 0.0]).scaling, Scaling::Exact);
        assert_eq!(classify_defects(&DEFAULT_EPS, &[1e-2, 1e-2, 1e-2]).scaling, Scaling::Inconclusive);
    }
}
