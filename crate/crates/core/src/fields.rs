//! Solution-candidate fields over `(t, x, y, p)`.
//!
//! A field maps a point to the five dependent variables `(u, v, ω, φ, T)`.
//! Fields are written once against [`FieldScalar`] via [`FieldFormula`] and
//! automatically gain exact first and second partials through jets.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::jet::{Jet1, Jet2, Real};
use crate::quad::simpson_doubling;
use crate::scalar_fn::ScalarFn;

/// Index of the independent variables in a [`Point4`] / jet seed.
pub const T: usize = 0;
pub const X: usize = 1;
pub const Y: usize = 2;
pub const P: usize = 3;

/// Index of the dependent variables in a state array.
pub const U: usize = 0;
pub const V: usize = 1;
pub const OMEGA: usize = 2;
pub const PHI: usize = 3;
pub const TEMP: usize = 4;

pub const VARIABLE_NAMES: [&str; 4] = ["t", "x", "y", "p"];
pub const COMPONENT_NAMES: [&str; 5] = ["u", "v", "omega", "phi", "T"];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point4 {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub p: f64,
}

impl Point4 {
    pub fn new(t: f64, x: f64, y: f64, p: f64) -> Self {
        Self { t, x, y, p }
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.p]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateValue {
    pub u: f64,
    pub v: f64,
    pub omega: f64,
    pub phi: f64,
    pub temp: f64,
}

impl StateValue {
    pub fn to_array(self) -> [f64; 5] {
        [self.u, self.v, self.omega, self.phi, self.temp]
    }

    pub fn from_array(a: [f64; 5]) -> Self {
        Self { u: a[0], v: a[1], omega: a[2], phi: a[3], temp: a[4] }
    }
}

/// Physical constants of the system. `κ = R / c_p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysConsts {
    pub f: f64,
    pub r: f64,
    pub cp: f64,
    #[serde(default)]
    pub allow_cp_equal_r: bool,
}

impl PhysConsts {
    /// Standard constants; requires `c_p > R > 0`.
    pub fn new(f: f64, r: f64, cp: f64) -> Result<Self> {
        let c = Self { f, r, cp, allow_cp_equal_r: false };
        c.validate()?;
        Ok(c)
    }

    /// The degenerate `c_p = R` (κ = 1) system, only meaningful for checking
    /// the enlarged symmetry algebra of that case.
    pub fn cp_equals_r(f: f64, r: f64) -> Result<Self> {
        let c = Self { f, r, cp: r, allow_cp_equal_r: true };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.cp > 0.0) || !self.f.is_finite() {
            return Err(invalid(format!("need R > 0, c_p > 0 (got R={}, c_p={})", self.r, self.cp)));
        }
        if self.allow_cp_equal_r {
            if self.cp != self.r {
                return Err(invalid("cp_equals_r flag set but c_p != R"));
            }
        } else if self.cp <= self.r {
            return Err(invalid(format!("need c_p > R so that 0 < κ < 1 (got κ={})", self.kappa())));
        }
        Ok(())
    }

    pub fn kappa(&self) -> f64 {
        self.r / self.cp
    }

    pub fn with_f(mut self, f: f64) -> Self {
        self.f = f;
        self
    }
}

impl Default for PhysConsts {
    /// Nondimensional defaults with `κ = 2/7`.
    fn default() -> Self {
        Self { f: 0.0, r: 1.0, cp: 3.5, allow_cp_equal_r: false }
    }
}

/// Axis-aligned evaluation box.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalBox {
    pub t: (f64, f64),
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub p: (f64, f64),
}

impl Default for EvalBox {
    fn default() -> Self {
        Self { t: (0.0, 1.0), x: (-1.0, 1.0), y: (-1.0, 1.0), p: (0.2, 1.0) }
    }
}

impl EvalBox {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("t", self.t), ("x", self.x), ("y", self.y), ("p", self.p)] {
            if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(domain(format!("empty or invalid box range for {name}: [{lo}, {hi}]")));
            }
        }
        if self.p.0 <= 0.0 {
            return Err(domain(format!("box must have p_min > 0 (got {})", self.p.0)));
        }
        Ok(())
    }

    pub fn contains(&self, pt: Point4) -> bool {
        let inr = |v: f64, (lo, hi): (f64, f64)| v >= lo && v <= hi;
        inr(pt.t, self.t) && inr(pt.x, self.x) && inr(pt.y, self.y) && inr(pt.p, self.p)
    }
}

/// Deterministic pseudo-random points in a box.
pub fn sample_points(seed: u64, n: usize, bx: &EvalBox) -> Result<Vec<Point4>> {
    bx.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |(lo, hi): (f64, f64)| if lo == hi { lo } else { rng.gen_range(lo..=hi) };
    Ok((0..n)
        .map(|_| {
            let t = draw(bx.t);
            let x = draw(bx.x);
            let y = draw(bx.y);
            let p = draw(bx.p);
            Point4::new(t, x, y, p)
        })
        .collect())
}

/// Scalar types a [`StateField`] can be evaluated on.
pub trait FieldScalar: Real {
    fn eval_field(field: &dyn StateField, z: [Self; 4]) -> [Self; 5];
}

impl FieldScalar for f64 {
    fn eval_field(field: &dyn StateField, z: [f64; 4]) -> [f64; 5] {
        field.eval(Point4::from_array(z)).to_array()
    }
}

impl FieldScalar for Jet1 {
    fn eval_field(field: &dyn StateField, z: [Jet1; 4]) -> [Jet1; 5] {
        field.eval_jet(z)
    }
}

impl FieldScalar for Jet2 {
    fn eval_field(field: &dyn StateField, z: [Jet2; 4]) -> [Jet2; 5] {
        field.eval_jet2(z)
    }
}

/// Values and the 20 first partials, `jet[component].d[variable]`.
pub type StateJet = [Jet1; 5];

/// A solution candidate. Inputs to the jet methods may themselves carry
/// derivatives (composition); seed with [`Jet1::seed`] for plain partials.
pub trait StateField: Send + Sync {
    fn eval(&self, pt: Point4) -> StateValue;
    fn eval_jet(&self, z: [Jet1; 4]) -> [Jet1; 5];
    fn eval_jet2(&self, z: [Jet2; 4]) -> [Jet2; 5];
    fn describe(&self) -> String {
        "field".into()
    }
}

/// Generic closed-form definition of a field.
pub trait FieldFormula: Send + Sync {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5];

    fn label(&self) -> String {
        std::any::type_name::<Self>().rsplit("::").next().unwrap_or("field").to_string()
    }
}

impl<F: FieldFormula> StateField for F {
    fn eval(&self, pt: Point4) -> StateValue {
        StateValue::from_array(self.formula(pt.to_array()))
    }
    fn eval_jet(&self, z: [Jet1; 4]) -> [Jet1; 5] {
        self.formula(z)
    }
    fn eval_jet2(&self, z: [Jet2; 4]) -> [Jet2; 5] {
        self.formula(z)
    }
    fn describe(&self) -> String {
        self.label()
    }
}

impl fmt::Debug for dyn StateField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateField({})", self.describe())
    }
}

/// How partial derivatives of a field are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    Exact,
    /// Central differences with step `h · max(1, |coordinate|)`.
    FiniteDifference { h: f64 },
}

impl Default for DerivativeMode {
    fn default() -> Self {
        DerivativeMode::Exact
    }
}

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Exact first partials of `field` at `pt`.
pub fn exact_jet(field: &dyn StateField, pt: Point4) -> StateJet {
    field.eval_jet(Jet1::seed(pt.to_array()))
}

/// Central-difference partials (all 20) with error `O(h²)`.
pub fn eval_partials_fd(field: &dyn StateField, pt: Point4, h: f64) -> Result<StateJet> {
    if !(h > 0.0) {
        return Err(invalid(format!("finite-difference step must be positive (got {h})")));
    }
    let z = pt.to_array();
    let steps: [f64; 4] = std::array::from_fn(|k| h * z[k].abs().max(1.0));
    if z[P] - steps[P] <= 0.0 {
        return Err(domain(format!("p - h = {} leaves the domain p > 0", z[P] - steps[P])));
    }
    let centre = field.eval(pt).to_array();
    let mut jet: StateJet = centre.map(Jet1::constant);
    for k in 0..4 {
        let mut zp = z;
        let mut zm = z;
        zp[k] += steps[k];
        zm[k] -= steps[k];
        let fp = field.eval(Point4::from_array(zp)).to_array();
        let fm = field.eval(Point4::from_array(zm)).to_array();
        for c in 0..5 {
            jet[c].d[k] = (fp[c] - fm[c]) / (2.0 * steps[k]);
        }
    }
    Ok(jet)
}

/// Values and partials in the requested mode.
pub fn field_jet(field: &dyn StateField, pt: Point4, mode: DerivativeMode) -> Result<StateJet> {
    if !(pt.p > 0.0) {
        return Err(domain(format!("pressure must be positive (got p={})", pt.p)));
    }
    match mode {
        DerivativeMode::Exact => Ok(exact_jet(field, pt)),
        DerivativeMode::FiniteDifference { h } => eval_partials_fd(field, pt, h),
    }
}

/// A single partial `∂ component / ∂ variable`.
pub fn partial(
    field: &dyn StateField,
    pt: Point4,
    variable: usize,
    component: usize,
    mode: DerivativeMode,
) -> Result<f64> {
    if variable >= 4 || component >= 5 {
        return Err(invalid(format!("no partial ({variable}, {component})")));
    }
    Ok(field_jet(field, pt, mode)?[component].d[variable])
}

/// External heating `J(t, x, y, p)`.
pub trait HeatingField: Send + Sync {
    fn value(&self, pt: Point4) -> f64;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ZeroHeating;

impl HeatingField for ZeroHeating {
    fn value(&self, _pt: Point4) -> f64 {
        0.0
    }
}

/// Heating given by a closure.
pub struct FnHeating<F>(pub F);

impl<F: Fn(Point4) -> f64 + Send + Sync> HeatingField for FnHeating<F> {
    fn value(&self, pt: Point4) -> f64 {
        (self.0)(pt)
    }
}

/// `coef · t^a x^b y^c p^d`; `a, b, c` must be non-negative integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coef: f64,
    #[serde(default)]
    pub powers: [f64; 4],
}

impl Monomial {
    pub fn new(coef: f64, powers: [f64; 4]) -> Self {
        Self { coef, powers }
    }

    fn validate(&self) -> Result<()> {
        for k in 0..3 {
            let e = self.powers[k];
            if e < 0.0 || e.fract() != 0.0 {
                return Err(invalid(format!(
                    "monomial exponent of {} must be a non-negative integer (got {e})",
                    VARIABLE_NAMES[k]
                )));
            }
        }
        Ok(())
    }

    fn eval<S: Real>(&self, z: [S; 4]) -> S {
        let mut acc = S::cst(self.coef);
        for k in 0..4 {
            let e = self.powers[k];
            if e != 0.0 {
                acc *= if e.fract() == 0.0 { z[k].powi(e as i32) } else { z[k].powf(e) };
            }
        }
        acc
    }
}

fn eval_monomials<S: Real>(ms: &[Monomial], z: [S; 4]) -> S {
    ms.iter().fold(S::zero(), |acc, m| acc + m.eval(z))
}

/// Heating given by a sum of monomials.
#[derive(Clone, Debug)]
pub struct PolynomialHeating(pub Vec<Monomial>);

impl HeatingField for PolynomialHeating {
    fn value(&self, pt: Point4) -> f64 {
        eval_monomials(&self.0, pt.to_array())
    }
}

/// `u = u0(p), v = v0(p), ω = 0, T = T0(p)` with hydrostatic geopotential
/// `φ(p) = −R ∫_{p_ref}^{p} T0(s)/s ds`.
#[derive(Clone, Debug)]
pub struct StratifiedField {
    pub u0: ScalarFn,
    pub v0: ScalarFn,
    pub temp0: ScalarFn,
    pub p_ref: f64,
    pub r: f64,
    temp0_d1: ScalarFn,
}

/// Absolute tolerance between successive Simpson estimates of `φ`.
pub const HYDROSTATIC_QUAD_TOL: f64 = 1e-12;

impl StratifiedField {
    /// Hydrostatic geopotential and its first two `p`-derivatives.
    fn geopotential<S: Real>(&self, p: S) -> S {
        let pv = p.re();
        let integral = simpson_doubling(|s| self.temp0.value(s) / s, self.p_ref, pv, HYDROSTATIC_QUAD_TOL);
        let t0 = self.temp0.value(pv);
        let t1 = self.temp0_d1.value(pv);
        p.chain(-self.r * integral, -self.r * t0 / pv, -self.r * (t1 / pv - t0 / (pv * pv)))
    }
}

impl FieldFormula for StratifiedField {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5] {
        let p = z[P];
        [
            self.u0.eval(p),
            self.v0.eval(p),
            S::zero(),
            self.geopotential(p),
            self.temp0.eval(p),
        ]
    }

    fn label(&self) -> String {
        "stratified".into()
    }
}

pub fn make_stratified(
    u0: ScalarFn,
    v0: ScalarFn,
    temp0: ScalarFn,
    p_ref: f64,
    consts: &PhysConsts,
) -> Result<StratifiedField> {
    if !(p_ref > 0.0) {
        return Err(domain(format!("reference pressure must be positive (got {p_ref})")));
    }
    let temp0_d1 = temp0.derivative();
    Ok(StratifiedField { u0, v0, temp0, p_ref, r: consts.r, temp0_d1 })
}

/// The inertial-oscillation field of a rotating frame: the stratified state
/// seen from a frame rotating with Coriolis parameter `f`.
#[derive(Clone, Debug)]
pub struct InertialField {
    pub base: StratifiedField,
    pub f: f64,
}

impl FieldFormula for InertialField {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5] {
        let [t, x, y, p] = z;
        let half = self.f / 2.0;
        let (s, c) = ((t * half).sin(), (t * half).cos());
        let u0 = self.base.u0.eval(p);
        let v0 = self.base.v0.eval(p);
        [
            c * u0 + s * v0 + y * half,
            -(s * u0) + c * v0 - x * half,
            S::zero(),
            self.base.geopotential(p) - (x * x + y * y) * (self.f * self.f / 8.0),
            self.base.temp0.eval(p),
        ]
    }

    fn label(&self) -> String {
        "inertial".into()
    }
}

pub fn make_inertial(
    u0: ScalarFn,
    v0: ScalarFn,
    temp0: ScalarFn,
    p_ref: f64,
    f: f64,
    consts: &PhysConsts,
) -> Result<InertialField> {
    Ok(InertialField { base: make_stratified(u0, v0, temp0, p_ref, consts)?, f })
}

/// Horizontally uniform shear carried by a uniform vertical velocity `ω`
/// in an isentropic column: `u = u0(p − ωt)`, `v = v0(p − ωt)`,
/// `T = θ₀ p^κ`, `φ = −c_p θ₀ (p^κ − p_ref^κ)`. Solves the `f = 0` system.
#[derive(Clone, Debug)]
pub struct SubsidingShearField {
    pub u0: ScalarFn,
    pub v0: ScalarFn,
    pub omega: f64,
    pub theta0: f64,
    pub p_ref: f64,
    pub kappa: f64,
    pub cp: f64,
}

impl SubsidingShearField {
    pub fn new(u0: ScalarFn, v0: ScalarFn, omega: f64, theta0: f64, p_ref: f64, consts: &PhysConsts) -> Result<Self> {
        if !(p_ref > 0.0) {
            return Err(domain(format!("reference pressure must be positive (got {p_ref})")));
        }
        Ok(Self { u0, v0, omega, theta0, p_ref, kappa: consts.kappa(), cp: consts.cp })
    }
}

impl FieldFormula for SubsidingShearField {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5] {
        let [t, _, _, p] = z;
        let xi = p - t * self.omega;
        let pk = p.powf(self.kappa);
        [
            self.u0.eval(xi),
            self.v0.eval(xi),
            S::cst(self.omega),
            (pk - self.p_ref.powf(self.kappa)) * (-self.cp * self.theta0),
            pk * self.theta0,
        ]
    }

    fn label(&self) -> String {
        "subsiding-shear".into()
    }
}

/// Manufactured field with polynomial components (not a solution in
/// general). Used to exercise residual formulas and derivative plumbing.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialField {
    #[serde(default)]
    pub u: Vec<Monomial>,
    #[serde(default)]
    pub v: Vec<Monomial>,
    #[serde(default)]
    pub omega: Vec<Monomial>,
    #[serde(default)]
    pub phi: Vec<Monomial>,
    #[serde(default, rename = "T")]
    pub temp: Vec<Monomial>,
}

impl PolynomialField {
    pub fn validate(&self) -> Result<()> {
        for m in self.u.iter().chain(&self.v).chain(&self.omega).chain(&self.phi).chain(&self.temp) {
            m.validate()?;
        }
        Ok(())
    }
}

impl FieldFormula for PolynomialField {
    fn formula<S: FieldScalar>(&self, z: [S; 4]) -> [S; 5] {
        [
            eval_monomials(&self.u, z),
            eval_monomials(&self.v, z),
            eval_monomials(&self.omega, z),
            eval_monomials(&self.phi, z),
            eval_monomials(&self.temp, z),
        ]
    }

    fn label(&self) -> String {
        "manufactured-polynomial".into()
    }
}

/// Structured-text description of a field.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldConfig {
    Stratified {
        u0: ScalarFn,
        v0: ScalarFn,
        #[serde(rename = "T0")]
        temp0: ScalarFn,
        #[serde(default = "one")]
        p_ref: f64,
    },
    Inertial {
        u0: ScalarFn,
        v0: ScalarFn,
        #[serde(rename = "T0")]
        temp0: ScalarFn,
        #[serde(default = "one")]
        p_ref: f64,
        f: f64,
    },
    SubsidingShear {
        u0: ScalarFn,
        v0: ScalarFn,
        omega: f64,
        theta0: f64,
        #[serde(default = "one")]
        p_ref: f64,
    },
    ManufacturedPolynomial(PolynomialField),
}

fn one() -> f64 {
    1.0
}

impl FieldConfig {
    /// Named built-in with its default parameter block.
    pub fn builtin(name: &str) -> Result<Self> {
        let profile = || (ScalarFn::poly([1.0, 0.5]), ScalarFn::poly([-0.3, 0.0, 1.0]), ScalarFn::poly([1.0, 0.5]));
        match name {
            "stratified" => {
                let (u0, v0, temp0) = profile();
                Ok(FieldConfig::Stratified { u0, v0, temp0, p_ref: 1.0 })
            }
            "inertial" => {
                let (u0, v0, temp0) = profile();
                Ok(FieldConfig::Inertial { u0, v0, temp0, p_ref: 1.0, f: 1.0 })
            }
            "subsiding-shear" => Ok(FieldConfig::SubsidingShear {
                u0: ScalarFn::sin(1.0, 2.0),
                v0: ScalarFn::poly([0.2, -0.5, 0.7]),
                omega: 0.5,
                theta0: 1.3,
                p_ref: 1.0,
            }),
            "manufactured-polynomial" => Ok(FieldConfig::ManufacturedPolynomial(PolynomialField {
                u: vec![Monomial::new(1.0, [1.0, 1.0, 0.0, 0.0]), Monomial::new(0.5, [0.0, 0.0, 1.0, 1.0])],
                v: vec![Monomial::new(-0.7, [0.0, 1.0, 1.0, 0.0]), Monomial::new(0.2, [2.0, 0.0, 0.0, 0.0])],
                omega: vec![Monomial::new(0.3, [0.0, 1.0, 0.0, 2.0])],
                phi: vec![Monomial::new(1.0, [0.0, 0.0, 0.0, 2.0 / 7.0]), Monomial::new(0.1, [0.0, 2.0, 0.0, 0.0])],
                temp: vec![Monomial::new(1.5, [0.0, 0.0, 0.0, 1.0]), Monomial::new(-0.4, [1.0, 0.0, 1.0, 0.0])],
            })),
            other => Err(crate::Error::Config(format!("unknown built-in field `{other}`"))),
        }
    }

    /// Coriolis parameter the field is meant to solve with, if any.
    pub fn intended_f(&self) -> Option<f64> {
        match self {
            FieldConfig::Stratified { .. } | FieldConfig::SubsidingShear { .. } => Some(0.0),
            FieldConfig::Inertial { f, .. } => Some(*f),
            FieldConfig::ManufacturedPolynomial(_) => None,
        }
    }

    pub fn build(&self, consts: &PhysConsts) -> Result<Arc<dyn StateField>> {
        Ok(match self.clone() {
            FieldConfig::Stratified { u0, v0, temp0, p_ref } => {
                Arc::new(make_stratified(u0, v0, temp0, p_ref, consts)?)
            }
            FieldConfig::Inertial { u0, v0, temp0, p_ref, f } => {
                Arc::new(make_inertial(u0, v0, temp0, p_ref, f, consts)?)
            }
            FieldConfig::SubsidingShear { u0, v0, omega, theta0, p_ref } => {
                Arc::new(SubsidingShearField::new(u0, v0, omega, theta0, p_ref, consts)?)
            }
            FieldConfig::ManufacturedPolynomial(pf) => {
                pf.validate()?;
                Arc::new(pf)
            }
        })
    }
}

/// Heating configuration: `"zero"` or a polynomial.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum HeatingConfig {
    #[default]
    Zero,
    Polynomial(Vec<Monomial>),
}

impl HeatingConfig {
    pub fn build(&self) -> Result<Arc<dyn HeatingField>> {
        Ok(match self {
            HeatingConfig::Zero => Arc::new(ZeroHeating),
            HeatingConfig::Polynomial(ms) => {
                for m in ms {
                    m.validate()?;
                }
                Arc::new(PolynomialHeating(ms.clone()))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn consts() -> PhysConsts {
        PhysConsts::default()
    }

    #[test]
    fn consts_validation() {
        assert!(PhysConsts::new(0.0, 1.0, 3.5).is_ok());
        assert!(PhysConsts::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysConsts::new(0.0, -1.0, 3.5).is_err());
        let k1 = PhysConsts::cp_equals_r(0.0, 1.0).unwrap();
        assert_eq!(k1.kappa(), 1.0);
    }

    #[test]
    fn isothermal_geopotential_is_log() {
        let c = consts();
        let f = make_stratified(ScalarFn::zero(), ScalarFn::zero(), ScalarFn::constant(1.7), 1.0, &c).unwrap();
        for p in [0.2, 0.5, 0.9, 1.0] {
            let s = f.eval(Point4::new(0.3, 0.1, -0.4, p));
            assert!((s.phi + c.r * 1.7 * p.ln()).abs() < 1e-11, "p={p}");
        }
    }

    #[test]
    fn linear_temperature_geopotential() {
        // T0(p) = p ⇒ φ(p) = −R (p − p_ref)
        let c = consts();
        let f = make_stratified(ScalarFn::zero(), ScalarFn::zero(), ScalarFn::identity(), 0.8, &c).unwrap();
        let s = f.eval(Point4::new(0.0, 0.0, 0.0, 0.3));
        assert!((s.phi + c.r * (0.3 - 0.8)).abs() < 1e-12);
    }

    #[test]
    fn stratified_rejects_nonpositive_reference() {
        assert!(make_stratified(ScalarFn::zero(), ScalarFn::zero(), ScalarFn::constant(1.0), 0.0, &consts()).is_err());
    }

    #[test]
    fn inertial_at_origin() {
        let c = consts();
        let f = make_inertial(ScalarFn::constant(1.0), ScalarFn::zero(), ScalarFn::constant(1.0), 1.0, 1.0, &c).unwrap();
        let s = f.eval(Point4::new(0.0, 0.0, 0.0, 1.0));
        assert_eq!((s.u, s.v, s.omega), (1.0, 0.0, 0.0));
        assert!(s.phi.abs() < 1e-15);
        // t = π: cos(π/2) u0 + sin(π/2) v0 + y/2 = y/2
        let s = f.eval(Point4::new(std::f64::consts::PI, 0.4, 0.6, 1.0));
        assert!((s.u - 0.3).abs() < 1e-15);
        assert!((s.v - (-1.0 - 0.2)).abs() < 1e-15);
    }

    #[test]
    fn inertial_zero_rotation_equals_stratified() {
        let c = consts();
        let cfg = FieldConfig::builtin("stratified").unwrap();
        let strat = cfg.build(&c).unwrap();
        let FieldConfig::Stratified { u0, v0, temp0, p_ref } = cfg else { unreachable!() };
        let inert = make_inertial(u0, v0, temp0, p_ref, 0.0, &c).unwrap();
        for pt in sample_points(3, 50, &EvalBox::default()).unwrap() {
            assert_eq!(strat.eval(pt), inert.eval(pt));
        }
    }

    #[test]
    fn fd_partials_of_simple_fields() {
        let field = PolynomialField {
            u: vec![Monomial::new(1.0, [1.0, 1.0, 0.0, 0.0])],
            phi: vec![Monomial::new(1.0, [0.0, 0.0, 0.0, 2.0 / 7.0])],
            ..Default::default()
        };
        let jet = eval_partials_fd(&field, Point4::new(1.0, 1.0, 0.0, 1.0), 1e-5).unwrap();
        assert!((jet[U].d[T] - 1.0).abs() < 1e-9);
        assert!((jet[PHI].d[P] - 2.0 / 7.0).abs() < 1e-9);
        let constant = PolynomialField { temp: vec![Monomial::new(2.0, [0.0; 4])], ..Default::default() };
        let jet = eval_partials_fd(&constant, Point4::new(0.5, 0.1, 0.2, 0.6), 1e-5).unwrap();
        assert!(jet.iter().all(|c| c.d.iter().all(|&d| d == 0.0)));
    }

    #[test]
    fn fd_domain_violation() {
        let field = PolynomialField::default();
        assert!(eval_partials_fd(&field, Point4::new(0.0, 0.0, 0.0, 5e-6), 1e-5).is_err());
        assert!(field_jet(&field, Point4::new(0.0, 0.0, 0.0, -1.0), DerivativeMode::Exact).is_err());
    }

    #[test]
    fn sampling_contract() {
        let bx = EvalBox::default();
        let a = sample_points(0, 1, &bx).unwrap();
        assert_eq!(a, sample_points(0, 1, &bx).unwrap());
        assert!(bx.contains(a[0]));
        assert_ne!(sample_points(0, 5, &bx).unwrap(), sample_points(1, 5, &bx).unwrap());
        let pts = sample_points(9, 100, &bx).unwrap();
        assert!(pts.iter().all(|q| q.p >= 0.2));
        let bad = EvalBox { p: (0.0, 1.0), ..bx };
        assert!(sample_points(0, 3, &bad).is_err());
        let empty = EvalBox { t: (1.0, 0.0), ..bx };
        assert!(sample_points(0, 3, &empty).is_err());
    }

    #[test]
    fn builtin_configs_round_trip_through_json() {
        for name in ["stratified", "inertial", "subsiding-shear", "manufactured-polynomial"] {
            let cfg = FieldConfig::builtin(name).unwrap();
            let text = serde_json::to_string(&cfg).unwrap();
            let back: FieldConfig = serde_json::from_str(&text).unwrap();
            let (a, b) = (cfg.build(&consts()).unwrap(), back.build(&consts()).unwrap());
            let pt = Point4::new(0.2, 0.3, -0.1, 0.7);
            assert_eq!(a.eval(pt), b.eval(pt));
        }
        assert!(FieldConfig::builtin("nope").is_err());
        let unknown = r#"{"kind":"stratified","u0":{"const":1.0},"v0":{"const":0.0},"T0":{"const":1.0},"bogus":1}"#;
        assert!(serde_json::from_str::<FieldConfig>(unknown).is_err());
    }
}
