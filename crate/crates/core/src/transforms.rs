//! Point transformations of the nine-dimensional space
//! `z = (t, x, y, p, u, v, ω, φ, T)` and their action on solutions.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::fields::{FieldScalar, HeatingField, PhysConsts, Point4, StateField, StateValue};
use crate::jet::{Dual, Jet1, Jet2, Real};
use crate::residual::VectorFieldSpec;
use crate::scalar_fn::{ScalarFn, TimeFn};

/// Parameters of the continuous part of the point symmetry group of the
/// `f = 0` system. `O` is the rotation by `angle`, preceded by the
/// reflection `y → −y` when `reflect` is set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryParams {
    #[serde(default)]
    pub eps0: f64,
    #[serde(default = "one")]
    pub eps1: f64,
    #[serde(default = "one")]
    pub eps2: f64,
    #[serde(default = "one")]
    pub eps3: f64,
    #[serde(default)]
    pub eps4: f64,
    #[serde(default)]
    pub beta1: ScalarFn,
    #[serde(default)]
    pub beta2: ScalarFn,
    #[serde(default)]
    pub alpha: ScalarFn,
    #[serde(default)]
    pub angle: f64,
    #[serde(default)]
    pub reflect: bool,
}

fn one() -> f64 {
    1.0
}

impl Default for SymmetryParams {
    fn default() -> Self {
        Self {
            eps0: 0.0,
            eps1: 1.0,
            eps2: 1.0,
            eps3: 1.0,
            eps4: 0.0,
            beta1: ScalarFn::zero(),
            beta2: ScalarFn::zero(),
            alpha: ScalarFn::zero(),
            angle: 0.0,
            reflect: false,
        }
    }
}

impl SymmetryParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.eps0, self.eps1, self.eps2, self.eps3, self.eps4, self.angle];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(invalid("symmetry parameters must be finite"));
        }
        if self.eps1 == 0.0 {
            return Err(invalid("eps1 must be nonzero"));
        }
        if !(self.eps2 > 0.0) {
            return Err(invalid(format!("eps2 must be positive (got {})", self.eps2)));
        }
        if !(self.eps3 > 0.0) {
            return Err(invalid(format!("eps3 must be positive (got {})", self.eps3)));
        }
        Ok(())
    }

    /// Random admissible parameters: `ε₁` of either sign, smooth `β`, `α`
    /// from the registry, and a random orientation of `O`.
    pub fn random(rng: &mut impl Rng) -> Self {
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut coef = |s: f64| rng.gen_range(-s..=s);
        let beta1 = ScalarFn::Sum(vec![
            ScalarFn::poly([coef(0.5), coef(0.5), coef(0.3), coef(0.2)]),
            ScalarFn::Sin { amp: coef(0.3), freq: coef(2.0), phase: coef(1.0) },
        ]);
        let beta2 = ScalarFn::Sum(vec![
            ScalarFn::poly([coef(0.5), coef(0.5), coef(0.3)]),
            ScalarFn::Exp { amp: coef(0.2), rate: coef(1.0) },
        ]);
        let alpha = ScalarFn::Cos { amp: coef(1.0), freq: coef(3.0), phase: coef(1.0) };
        let eps0 = coef(1.0);
        let eps1 = sign * rng.gen_range(0.5..2.0);
        let eps2 = rng.gen_range(0.5..2.0);
        let eps3 = rng.gen_range(0.5..2.0);
        let eps4 = rng.gen_range(-1.0..1.0);
        let angle = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let reflect = rng.gen_bool(0.5);
        Self { eps0, eps1, eps2, eps3, eps4, beta1, beta2, alpha, angle, reflect }
    }

    fn o_apply<S: Real>(&self, x: S, y: S) -> (S, S) {
        let y = if self.reflect { -y } else { y };
        let (s, c) = self.angle.sin_cos();
        (x * c - y * s, x * s + y * c)
    }

    fn o_transpose<S: Real>(&self, x: S, y: S) -> (S, S) {
        let (s, c) = self.angle.sin_cos();
        let (a, b) = (x * c + y * s, -(x * s) + y * c);
        (a, if self.reflect { -b } else { b })
    }
}

/// Multiplicative perturbations of two scale factors of the symmetry
/// transformation, used as negative controls. Neutral value `1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    pub omega_scale: f64,
    pub temp_scale: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { omega_scale: 1.0, temp_scale: 1.0 }
    }
}

#[derive(Clone, Debug)]
struct SymmetryMap {
    params: SymmetryParams,
    beta: [TimeFn; 2],
    alpha: TimeFn,
    kappa: f64,
    cp: f64,
    perturb: Perturbation,
}

impl SymmetryMap {
    fn forward<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        let [t, x, y, p, u, v, w, phi, temp] = z;
        let q = &self.params;
        let (e1, e2, e3, e4) = (q.eps1, q.eps2, q.eps3, q.eps4);
        let b = |k: usize, d: usize| self.beta[k].at(d, t);
        let (ox, oy) = q.o_apply(x, y);
        let (ou, ov) = q.o_apply(u, v);
        let pk = p.powf(self.kappa);
        let g = e2 * e2 / (e1 * e1);
        [
            t * e1 + q.eps0,
            ox * e2 + b(0, 0),
            oy * e2 + b(1, 0),
            p * e3,
            ou * (e2 / e1) + b(0, 1) / e1,
            ov * (e2 / e1) + b(1, 1) / e1,
            w * (self.perturb.omega_scale * e3 / e1),
            phi * g + pk * (e4 * self.cp) - (b(0, 2) * ox + b(1, 2) * oy) * (e2 / (e1 * e1)) + self.alpha.at(0, t),
            temp * (self.perturb.temp_scale * g) - pk * e4,
        ]
    }

    fn base_inverse<S: Real>(&self, z: [S; 4]) -> [S; 4] {
        let q = &self.params;
        let t = (z[0] - q.eps0) / q.eps1;
        let (x, y) = q.o_transpose(
            (z[1] - self.beta[0].at(0, t)) / q.eps2,
            (z[2] - self.beta[1].at(0, t)) / q.eps2,
        );
        [t, x, y, z[3] / q.eps3]
    }

    fn inverse<S: Real>(&self, zt: [S; 9]) -> [S; 9] {
        let q = &self.params;
        let (e1, e2, e3, e4) = (q.eps1, q.eps2, q.eps3, q.eps4);
        let [t, x, y, p] = self.base_inverse([zt[0], zt[1], zt[2], zt[3]]);
        let b = |k: usize, d: usize| self.beta[k].at(d, t);
        let (u, v) = q.o_transpose((zt[4] * e1 - b(0, 1)) / e2, (zt[5] * e1 - b(1, 1)) / e2);
        let (ox, oy) = q.o_apply(x, y);
        let pk = p.powf(self.kappa);
        let g = e2 * e2 / (e1 * e1);
        let w = zt[6] * e1 / (self.perturb.omega_scale * e3);
        let phi = (zt[7] - pk * (e4 * self.cp) + (b(0, 2) * ox + b(1, 2) * oy) * (e2 / (e1 * e1))
            - self.alpha.at(0, t))
            / g;
        let temp = (zt[8] + pk * e4) / (self.perturb.temp_scale * g);
        [t, x, y, p, u, v, w, phi, temp]
    }
}

#[derive(Clone, Debug)]
enum MapKind {
    Identity,
    Derotation { f: f64 },
    Symmetry(Box<SymmetryMap>),
    TimeReversal,
    Mirror,
    /// `outer ∘ inner`
    Compose(GroupMap, GroupMap),
}

/// An invertible point transformation whose independent-variable part does
/// not depend on the dependent variables.
#[derive(Clone, Debug)]
pub struct GroupMap {
    kind: Arc<MapKind>,
    inverted: bool,
}

impl GroupMap {
    fn from_kind(kind: MapKind) -> Self {
        Self { kind: Arc::new(kind), inverted: false }
    }

    pub fn identity() -> Self {
        Self::from_kind(MapKind::Identity)
    }

    pub fn describe(&self) -> String {
        let s = match &*self.kind {
            MapKind::Identity => "identity".to_string(),
            MapKind::Derotation { f } => format!("derotation(f={f})"),
            MapKind::Symmetry(_) => "symmetry".to_string(),
            MapKind::TimeReversal => "time-reversal".to_string(),
            MapKind::Mirror => "mirror".to_string(),
            MapKind::Compose(a, b) => format!("{} ∘ {}", a.describe(), b.describe()),
        };
        if self.inverted {
            format!("({s})⁻¹")
        } else {
            s
        }
    }

    pub fn forward_s<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        if self.inverted {
            self.raw_inverse(z)
        } else {
            self.raw_forward(z)
        }
    }

    pub fn inverse_s<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        if self.inverted {
            self.raw_forward(z)
        } else {
            self.raw_inverse(z)
        }
    }

    pub fn base_forward_s<S: Real>(&self, z: [S; 4]) -> [S; 4] {
        if self.inverted {
            self.raw_base_inverse(z)
        } else {
            self.raw_base_forward(z)
        }
    }

    pub fn base_inverse_s<S: Real>(&self, z: [S; 4]) -> [S; 4] {
        if self.inverted {
            self.raw_base_forward(z)
        } else {
            self.raw_base_inverse(z)
        }
    }

    pub fn forward(&self, z: [f64; 9]) -> [f64; 9] {
        self.forward_s(z)
    }

    pub fn inverse(&self, z: [f64; 9]) -> [f64; 9] {
        self.inverse_s(z)
    }

    pub fn base_forward(&self, pt: Point4) -> Point4 {
        Point4::from_array(self.base_forward_s(pt.to_array()))
    }

    pub fn base_inverse(&self, pt: Point4) -> Point4 {
        Point4::from_array(self.base_inverse_s(pt.to_array()))
    }

    /// `∂ forward_i / ∂ z_j` at `z`, exact up to roundoff.
    pub fn jacobian(&self, z: [f64; 9]) -> [[f64; 9]; 9] {
        let out = self.forward_s(Dual::<9>::seed(z));
        out.map(|c| c.d)
    }

    fn raw_forward<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        match &*self.kind {
            MapKind::Identity => z,
            MapKind::Derotation { f } => derotate_forward(*f, z),
            MapKind::Symmetry(m) => m.forward(z),
            MapKind::TimeReversal => {
                let [t, x, y, p, u, v, w, phi, temp] = z;
                [-t, x, y, p, -u, -v, -w, phi, temp]
            }
            MapKind::Mirror => {
                let [t, x, y, p, u, v, w, phi, temp] = z;
                [t, -x, y, p, -u, v, w, phi, temp]
            }
            MapKind::Compose(outer, inner) => outer.forward_s(inner.forward_s(z)),
        }
    }

    fn raw_inverse<S: Real>(&self, z: [S; 9]) -> [S; 9] {
        match &*self.kind {
            MapKind::Identity | MapKind::TimeReversal | MapKind::Mirror => self.raw_forward(z),
            MapKind::Derotation { f } => derotate_inverse(*f, z),
            MapKind::Symmetry(m) => m.inverse(z),
            MapKind::Compose(outer, inner) => inner.inverse_s(outer.inverse_s(z)),
        }
    }

    fn raw_base_forward<S: Real>(&self, z: [S; 4]) -> [S; 4] {
        match &*self.kind {
            MapKind::Compose(outer, inner) => outer.base_forward_s(inner.base_forward_s(z)),
            // Every primitive map has a base part independent of the
            // dependent variables, so any fill-in works.
            _ => {
                let full = self.raw_forward([z[0], z[1], z[2], z[3], z[0], z[0], z[0], z[0], z[0]]);
                [full[0], full[1], full[2], full[3]]
            }
        }
    }

    fn raw_base_inverse<S: Real>(&self, z: [S; 4]) -> [S; 4] {
        match &*self.kind {
            MapKind::Compose(outer, inner) => inner.base_inverse_s(outer.base_inverse_s(z)),
            MapKind::Symmetry(m) => m.base_inverse(z),
            _ => {
                let full = self.raw_inverse([z[0], z[1], z[2], z[3], z[0], z[0], z[0], z[0], z[0]]);
                [full[0], full[1], full[2], full[3]]
            }
        }
    }
}

fn derotate_forward<S: Real>(f: f64, z: [S; 9]) -> [S; 9] {
    let [t, x, y, p, u, v, w, phi, temp] = z;
    let fh = f / 2.0;
    let (s, c) = ((t * fh).sin(), (t * fh).cos());
    [
        t,
        c * x - s * y,
        s * x + c * y,
        p,
        c * u - s * v - (s * x + c * y) * fh,
        s * u + c * v + (c * x - s * y) * fh,
        w,
        phi + (x * x + y * y) * (f * f / 8.0),
        temp,
    ]
}

fn derotate_inverse<S: Real>(f: f64, z: [S; 9]) -> [S; 9] {
    let [t, xt, yt, p, ut, vt, w, phit, temp] = z;
    let fh = f / 2.0;
    let (s, c) = ((t * fh).sin(), (t * fh).cos());
    let a = ut + yt * fh;
    let b = vt - xt * fh;
    [
        t,
        c * xt + s * yt,
        -(s * xt) + c * yt,
        p,
        c * a + s * b,
        -(s * a) + c * b,
        w,
        phit - (xt * xt + yt * yt) * (f * f / 8.0),
        temp,
    ]
}

/// The change of frame taking the system with Coriolis parameter `f` to the
/// system at rest. Its inverse takes rest-frame solutions to solutions in
/// the rotating frame.
pub fn derotation(f: f64) -> GroupMap {
    GroupMap::from_kind(MapKind::Derotation { f })
}

pub fn symmetry_map(params: &SymmetryParams, consts: &PhysConsts) -> Result<GroupMap> {
    perturbed_symmetry_map(params, consts, Perturbation::default())
}

/// [`symmetry_map`] with scale factors deliberately detuned.
pub fn perturbed_symmetry_map(
    params: &SymmetryParams,
    consts: &PhysConsts,
    perturb: Perturbation,
) -> Result<GroupMap> {
    params.validate()?;
    consts.validate()?;
    if !(perturb.omega_scale.is_finite() && perturb.omega_scale != 0.0)
        || !(perturb.temp_scale.is_finite() && perturb.temp_scale != 0.0)
    {
        return Err(invalid("perturbation factors must be finite and nonzero"));
    }
    Ok(GroupMap::from_kind(MapKind::Symmetry(Box::new(SymmetryMap {
        params: params.clone(),
        beta: [TimeFn::new(params.beta1.clone()), TimeFn::new(params.beta2.clone())],
        alpha: TimeFn::new(params.alpha.clone()),
        kappa: consts.kappa(),
        cp: consts.cp,
        perturb,
    }))))
}

/// The two discrete symmetries `(t, u, v, ω) → −(t, u, v, ω)` and
/// `(x, u) → −(x, u)`.
pub fn discrete_involutions() -> (GroupMap, GroupMap) {
    (GroupMap::from_kind(MapKind::TimeReversal), GroupMap::from_kind(MapKind::Mirror))
}

/// `outer ∘ inner`.
pub fn compose(outer: &GroupMap, inner: &GroupMap) -> GroupMap {
    GroupMap::from_kind(MapKind::Compose(outer.clone(), inner.clone()))
}

pub fn invert(g: &GroupMap) -> GroupMap {
    GroupMap { kind: g.kind.clone(), inverted: !g.inverted }
}

/// The image of a field under a point transformation:
/// `s̃(z̃) = dep(g(z, s(z)))` with `z = base⁻¹(z̃)`.
#[derive(Clone)]
pub struct PushforwardField {
    pub map: GroupMap,
    pub field: Arc<dyn StateField>,
}

impl PushforwardField {
    fn transport<S: FieldScalar>(&self, zt: [S; 4]) -> [S; 5] {
        let z = self.map.base_inverse_s(zt);
        let s = S::eval_field(self.field.as_ref(), z);
        let out = self.map.forward_s([z[0], z[1], z[2], z[3], s[0], s[1], s[2], s[3], s[4]]);
        [out[4], out[5], out[6], out[7], out[8]]
    }

    /// Preimage of a target point, rejecting points whose preimage leaves
    /// the domain `p > 0`.
    pub fn source_point(&self, pt: Point4) -> Result<Point4> {
        let src = self.map.base_inverse(pt);
        if !(src.p > 0.0) || !src.to_array().iter().all(|v| v.is_finite()) {
            return Err(domain(format!("target point {pt:?} is outside the image of the domain")));
        }
        Ok(src)
    }
}

impl StateField for PushforwardField {
    fn eval(&self, pt: Point4) -> StateValue {
        StateValue::from_array(self.transport(pt.to_array()))
    }
    fn eval_jet(&self, z: [Jet1; 4]) -> [Jet1; 5] {
        self.transport(z)
    }
    fn eval_jet2(&self, z: [Jet2; 4]) -> [Jet2; 5] {
        self.transport(z)
    }
    fn describe(&self) -> String {
        format!("{} pushed by {}", self.field.describe(), self.map.describe())
    }
}

pub fn pushforward_field(g: &GroupMap, field: Arc<dyn StateField>) -> PushforwardField {
    PushforwardField { map: g.clone(), field }
}

/// Heating carried along a transformation that leaves `T` unscaled:
/// `J̃ = J ∘ base⁻¹`.
pub struct PushforwardHeating {
    pub map: GroupMap,
    pub heating: Arc<dyn HeatingField>,
}

impl HeatingField for PushforwardHeating {
    fn value(&self, pt: Point4) -> f64 {
        self.heating.value(self.map.base_inverse(pt))
    }
}

pub fn pushforward_heating(g: &GroupMap, heating: Arc<dyn HeatingField>) -> PushforwardHeating {
    PushforwardHeating { map: g.clone(), heating }
}

fn determinant9(mut a: [[f64; 9]; 9]) -> f64 {
    let mut det = 1.0;
    for col in 0..9 {
        let piv = (col..9).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap_or(col);
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..9 {
            let m = a[r][col] / a[col][col];
            for k in col..9 {
                a[r][k] -= m * a[col][k];
            }
        }
    }
    det
}

/// Image point and transformed coefficient vector `J(z)·Q(z)`.
pub fn pushforward_vf(g: &GroupMap, vf: &VectorFieldSpec, z: [f64; 9]) -> Result<([f64; 9], [f64; 9])> {
    let jac = g.jacobian(z);
    let det = determinant9(jac);
    if !(det.abs() > 1e-14) || !det.is_finite() {
        return Err(Error::SingularJacobian(z));
    }
    let q = vf.at(z);
    let image = g.forward(z);
    let out = std::array::from_fn(|i| (0..9).map(|j| jac[i][j] * q[j]).sum());
    Ok((image, out))
}

/// A passive scalar `S(t, x, y, p)`.
pub trait TracerField: Send + Sync {
    fn eval_jet(&self, z: [Jet1; 4]) -> Jet1;
}

impl<F: Fn([Jet1; 4]) -> Jet1 + Send + Sync> TracerField for F {
    fn eval_jet(&self, z: [Jet1; 4]) -> Jet1 {
        self(z)
    }
}

/// `S_t + v·∇S + ωS_p − Q` for a tracer advected by `field`.
pub fn tracer_residual(
    field: &dyn StateField,
    tracer: &dyn TracerField,
    source: &dyn HeatingField,
    pt: Point4,
) -> f64 {
    let z = Jet1::seed(pt.to_array());
    let s = field.eval_jet(z);
    let c = tracer.eval_jet(z);
    c.d[0] + s[0].v * c.d[1] + s[1].v * c.d[2] + s[2].v * c.d[3] - source.value(pt)
}

/// A tracer carried along a transformation without change of value:
/// `S̃ = S ∘ base⁻¹`.
pub struct PushforwardTracer {
    pub map: GroupMap,
    pub tracer: Arc<dyn TracerField>,
}

impl TracerField for PushforwardTracer {
    fn eval_jet(&self, z: [Jet1; 4]) -> Jet1 {
        self.tracer.eval_jet(self.map.base_inverse_s(z))
    }
}

/// Cylindrical description `(r, θ, u^r, u^θ)` of a horizontal position and
/// velocity.
pub fn to_cylindrical(x: f64, y: f64, u: f64, v: f64) -> (f64, f64, f64, f64) {
    let r = x.hypot(y);
    let th = y.atan2(x);
    let (s, c) = th.sin_cos();
    (r, th, c * u + s * v, -s * u + c * v)
}
