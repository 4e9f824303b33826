//! Functions on which the sharp inequalities turn into equalities, with
//! their norms attached as certificates.

use alloc::vec;
use alloc::vec::Vec;

use crate::calculus::{
    integral_over_ball, Certificate, Estimate, Exterior, FunctionModel, Method, QuadratureSpec, RealFunction,
};
use crate::error::{Error, Result};
use crate::math;
use crate::modulus::Modulus;
use crate::operators::{
    charge_nagy_rhs, hypersingular_full, hypersingular_rhs, kernel_ball_mass, kernel_tail_mass,
    mixed_multiplicative_rhs, mixed_nagy_rhs, nagy_l1_rhs, nagy_rhs, sobolev_rhs, steklov_average, Bound, ChargeModel,
    InequalityReport, Kernel, TheoremId, CLOSED_FORM_TOL, QUADRATURE_TOL,
};
use crate::quadrature::{self, Tolerance, DEFAULT_BUDGET};
use crate::space::{linf_norm, Space, SpaceKind};

/// `I(h)` by the most exact method for this space and modulus.
fn modulus_integral(space: &Space, omega: &Modulus, h: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    let method = match (space.kind(), omega, spec.method) {
        (SpaceKind::Lattice, _, _) => Method::LatticeExact,
        (
            SpaceKind::Continuum,
            Modulus::Power { .. },
            Method::ClosedForm | Method::LatticeExact | Method::Cubature | Method::GridSearch,
        ) => Method::ClosedForm,
        (SpaceKind::Continuum, _, Method::MonteCarlo) => Method::MonteCarlo,
        (SpaceKind::Continuum, _, _) => Method::Radial1D,
    };
    crate::calculus::ball_integral_of_modulus(space, omega, h, &spec.with_method(method))
}

/// The radius whose ball meets the support `{ρ < h}` in the same points as
/// `B_r`: `min(h, r)` on the continuum, the one with the smaller reach on a
/// lattice.
fn inner_radius(space: &Space, h: f64, r: f64) -> f64 {
    if space.is_lattice() {
        if Space::lattice_reach(r) < Space::lattice_reach(h) {
            r
        } else {
            h
        }
    } else {
        h.min(r)
    }
}

fn radial_kinks(omega: &Modulus, extra: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0];
    for k in omega.kinks().into_iter().chain(extra.iter().copied()) {
        v.push(k);
        v.push(-k);
    }
    v
}

fn check_radius(space: &Space, h: f64) -> Result<()> {
    space.check_radius(h)
}

struct FEh {
    space: Space,
    omega: Modulus,
    h: f64,
    wh: f64,
    cert: Certificate,
}

impl RealFunction for FEh {
    fn eval(&self, x: &[f64]) -> f64 {
        (self.wh - self.omega.value(linf_norm(x))).max(0.0)
    }

    fn certificate(&self) -> Certificate {
        self.cert
    }

    fn origin_ball_integral(&self, space: &Space, r: f64, spec: &QuadratureSpec) -> Option<Result<Estimate>> {
        if *space != self.space {
            return None;
        }
        Some((|| {
            let q = inner_radius(space, self.h, r);
            let i = modulus_integral(space, &self.omega, q, spec)?;
            Ok(Estimate {
                value: self.wh * space.ball_measure(q)? - i.value,
                method: i.method,
                error_bound: i.error_bound,
            })
        })())
    }

    fn axis_kinks(&self, _axis: usize) -> Vec<f64> {
        radial_kinks(&self.omega, &[self.h])
    }
}

/// `f_{e,h}(x) = (ω(h) − ω(ρ(x, θ)))_+`.
///
/// Certified: `‖f‖ = ω(h)`, `‖f‖_{H^ω} ≤ 1`, `⌋f⌈_h = ⌋f⌈ = ‖f‖_{L₁} = ω(h)μ(B_h) − I(h)`,
/// upper gradient `G ≡ 1/2`, support in `B_h`.
pub fn make_f_eh(space: &Space, omega: &Modulus, h: f64) -> Result<FunctionModel> {
    check_radius(space, h)?;
    let wh = omega.value(h);
    let i = modulus_integral(space, omega, h, &QuadratureSpec::auto(space, omega))?.value;
    let mass = wh * space.ball_measure(h)? - i;
    let cert = Certificate {
        holder_bound: Some(1.0),
        sup_norm: Some(wh),
        seminorm_h: Some((h, mass)),
        seminorm_global: Some(mass),
        l1_norm: Some(mass),
        upper_gradient_bound: Some(0.5),
        exterior: Some(Exterior { radius: h, value: 0.0 }),
    };
    Ok(FunctionModel::new(FEh { space: *space, omega: omega.clone(), h, wh, cert }))
}

struct FOmega {
    space: Space,
    omega: Modulus,
    c: f64,
    sign: f64,
}

impl RealFunction for FOmega {
    fn eval(&self, x: &[f64]) -> f64 {
        self.c + self.sign * self.omega.value(linf_norm(x))
    }

    fn certificate(&self) -> Certificate {
        let sup = self.omega.sup();
        let holder = if sup == 0.0 { 0.0 } else { 1.0 };
        Certificate {
            holder_bound: Some(holder),
            sup_norm: if sup.is_finite() {
                Some(math::abs(self.c).max(math::abs(self.c + self.sign * sup)))
            } else {
                None
            },
            ..Default::default()
        }
    }

    fn origin_ball_integral(&self, space: &Space, r: f64, spec: &QuadratureSpec) -> Option<Result<Estimate>> {
        if *space != self.space {
            return None;
        }
        Some((|| {
            let i = modulus_integral(space, &self.omega, r, spec)?;
            Ok(Estimate {
                value: self.c * space.ball_measure(r)? + self.sign * i.value,
                method: i.method,
                error_bound: i.error_bound,
            })
        })())
    }

    fn axis_kinks(&self, _axis: usize) -> Vec<f64> {
        radial_kinks(&self.omega, &[])
    }
}

/// `f_ω(x) = c ± ω(ρ(x, θ))`, with `‖f_ω‖_{H^ω} = 1`.
pub fn make_f_omega(space: &Space, omega: &Modulus, c: f64, sign: i8) -> Result<FunctionModel> {
    let sign = match sign {
        1 => 1.0,
        -1 => -1.0,
        _ => return Err(Error::InvalidParameter("sign must be +1 or -1")),
    };
    if !c.is_finite() {
        return Err(Error::InvalidParameter("offset must be finite"));
    }
    Ok(FunctionModel::new(FOmega { space: *space, omega: omega.clone(), c, sign }))
}

struct FEOmega {
    space: Space,
    omega: Modulus,
    h: f64,
    wh: f64,
}

impl RealFunction for FEOmega {
    fn eval(&self, x: &[f64]) -> f64 {
        self.omega.value(linf_norm(x)).min(self.wh) - 0.5 * self.wh
    }

    fn certificate(&self) -> Certificate {
        Certificate {
            holder_bound: Some(1.0),
            sup_norm: Some(0.5 * self.wh),
            exterior: Some(Exterior { radius: self.h, value: 0.5 * self.wh }),
            ..Default::default()
        }
    }

    fn origin_ball_integral(&self, space: &Space, r: f64, spec: &QuadratureSpec) -> Option<Result<Estimate>> {
        if *space != self.space {
            return None;
        }
        Some((|| {
            let q = inner_radius(space, self.h, r);
            let i = modulus_integral(space, &self.omega, q, spec)?;
            let mu_r = space.ball_measure(r)?;
            let mu_q = space.ball_measure(q)?;
            Ok(Estimate {
                value: i.value + self.wh * (mu_r - mu_q) - 0.5 * self.wh * mu_r,
                method: i.method,
                error_bound: i.error_bound,
            })
        })())
    }

    fn axis_kinks(&self, _axis: usize) -> Vec<f64> {
        radial_kinks(&self.omega, &[self.h])
    }
}

/// `f_{e,ω}(x) = ω(ρ(x, θ)) − ω(h)/2` inside `B_h` and `ω(h)/2` outside.
/// Equal to `min(ω(ρ), ω(h)) − ω(h)/2`, hence continuous for every `ω`.
pub fn make_f_e_omega(space: &Space, omega: &Modulus, h: f64) -> Result<FunctionModel> {
    check_radius(space, h)?;
    Ok(FunctionModel::new(FEOmega { space: *space, omega: omega.clone(), h, wh: omega.value(h) }))
}

/// `∫_{Π[lo_i, hi_i]} f_{e,h}` as `∫_0^h V(r) ω'(r) dr`, where `V(r)` is the
/// volume of the box inside `[−r, r]^d`.
pub fn box_integral_f_eh(omega: &Modulus, h: f64, lo: &[f64], hi: &[f64]) -> Result<f64> {
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len() });
    }
    if lo.iter().zip(hi).any(|(a, b)| !(a <= b)) {
        return Err(Error::InvalidParameter("box bounds must be ordered"));
    }
    if lo.iter().zip(hi).any(|(a, b)| a == b) {
        return Ok(0.0);
    }
    let vol = |r: f64| -> f64 { lo.iter().zip(hi).map(|(a, b)| (b.min(r) - a.max(-r)).max(0.0)).product() };
    let mut kinks: Vec<f64> = omega.kinks();
    for (a, b) in lo.iter().zip(hi) {
        kinks.push(math::abs(*a));
        kinks.push(math::abs(*b));
    }
    let breaks =
        quadrature::with_breaks(0.0, 1.0, kinks.into_iter().filter(|k| *k > 0.0 && *k < h).map(|k| math::sqrt(k / h)));
    let scale = omega.value(h) * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>();
    let tol = Tolerance::new(1e-15 * scale.max(1e-300), 1e-13);
    let r = quadrature::simpson_pieces(
        |s| {
            let t = h * s * s;
            if t <= 0.0 {
                0.0
            } else {
                vol(t) * omega.derivative(t) * 2.0 * h * s
            }
        },
        &breaks,
        tol,
        DEFAULT_BUDGET,
    )?;
    Ok(r.value)
}

/// A mixed-derivative extremal `F` with `∂_I F = f_{e,h}`.
#[derive(Debug, Clone)]
pub struct MixedExtremal {
    pub function: FunctionModel,
    /// `∂_I F = f_{e,h}`.
    pub derivative: FunctionModel,
    /// `‖F‖_{B(X)}`.
    pub sup_norm: f64,
    /// `‖∂_I F‖_{B(X)} = ω(h)`.
    pub derivative_sup_norm: f64,
    /// `‖∂_I F‖_{H^ω} = 1`.
    pub derivative_holder_bound: f64,
    /// The split point `a` (m = 1 only).
    pub split: Option<SplitPoint>,
}

struct IteratedFEh {
    omega: Modulus,
    h: f64,
    /// Lower limit of the first integral (0 for `g_{e,h}`, `a` for `G_{e,h}`).
    start: f64,
    sup: f64,
}

impl RealFunction for IteratedFEh {
    fn eval(&self, x: &[f64]) -> f64 {
        let mut sign = 1.0;
        let mut lo = Vec::with_capacity(x.len());
        let mut hi = Vec::with_capacity(x.len());
        for (i, xi) in x.iter().enumerate() {
            let base = if i == 0 { self.start } else { 0.0 };
            if *xi < base {
                sign = -sign;
            }
            lo.push(base.min(*xi));
            hi.push(base.max(*xi));
        }
        box_integral_f_eh(&self.omega, self.h, &lo, &hi).map_or(f64::NAN, |v| sign * v)
    }

    fn certificate(&self) -> Certificate {
        Certificate { sup_norm: Some(self.sup), ..Default::default() }
    }

    fn axis_kinks(&self, axis: usize) -> Vec<f64> {
        let mut k = radial_kinks(&self.omega, &[self.h]);
        if axis == 0 {
            k.push(self.start);
        }
        k
    }
}

fn continuum_with(d: usize, m: usize) -> Result<Space> {
    Space::continuum(d, m)
}

/// `g_{e,h}(x) = ∫_0^{x₁}…∫_0^{x_d} f_{e,h}(u) du` on `ℝ^d` (`m = 0`), with
/// `‖g‖ = h^d ω(h) − 2^{−d} I(h)`.
pub fn make_g_eh(omega: &Modulus, h: f64, d: usize) -> Result<MixedExtremal> {
    let space = continuum_with(d, 0)?;
    check_radius(&space, h)?;
    let wh = omega.value(h);
    let i = modulus_integral(&space, omega, h, &QuadratureSpec::auto(&space, omega))?.value;
    let sup = math::powi(h, d as i32) * wh - i / math::pow2(d);
    Ok(MixedExtremal {
        function: FunctionModel::new(IteratedFEh { omega: omega.clone(), h, start: 0.0, sup }),
        derivative: make_f_eh(&space, omega, h)?,
        sup_norm: sup,
        derivative_sup_norm: wh,
        derivative_holder_bound: 1.0,
        split: None,
    })
}

/// The root `a` of `∫_{B_h ∩ {x₁ < a}} f_{e,h} = ½ ∫_{B_h} f_{e,h}` on
/// `ℝ₊ × ℝ^{d−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitPoint {
    pub a: f64,
    pub residual: f64,
}

fn split_objective(omega: &Modulus, h: f64, d: usize, a: f64, half: f64) -> Result<f64> {
    let mut lo = vec![-h; d];
    let mut hi = vec![h; d];
    lo[0] = 0.0;
    hi[0] = a;
    Ok(box_integral_f_eh(omega, h, &lo, &hi)? - half)
}

pub fn split_point_a(omega: &Modulus, h: f64, d: usize) -> Result<SplitPoint> {
    let space = continuum_with(d, 1)?;
    check_radius(&space, h)?;
    let mut lo = vec![-h; d];
    let hi = vec![h; d];
    lo[0] = 0.0;
    let half = 0.5 * box_integral_f_eh(omega, h, &lo, &hi)?;
    let (mut a, mut b) = (0.0f64, h);
    while b - a > 1e-15 * h {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if split_objective(omega, h, d, mid, half)? < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    Ok(SplitPoint { a: root, residual: split_objective(omega, h, d, root, half)? })
}

/// `G_{e,h}(x) = ∫_a^{x₁}∫_0^{x₂}…∫_0^{x_d} f_{e,h}(u) du` on
/// `ℝ₊ × ℝ^{d−1}` (`m = 1`), with `‖G‖ = h^d ω(h)/2 − 2^{−d} I(h)`.
#[allow(non_snake_case)]
pub fn make_G_eh(omega: &Modulus, h: f64, d: usize) -> Result<MixedExtremal> {
    let space = continuum_with(d, 1)?;
    check_radius(&space, h)?;
    let split = split_point_a(omega, h, d)?;
    let wh = omega.value(h);
    let i = modulus_integral(&space, omega, h, &QuadratureSpec::auto(&space, omega))?.value;
    let sup = 0.5 * math::powi(h, d as i32) * wh - i / math::pow2(d);
    Ok(MixedExtremal {
        function: FunctionModel::new(IteratedFEh { omega: omega.clone(), h, start: split.a, sup }),
        derivative: make_f_eh(&space, omega, h)?,
        sup_norm: sup,
        derivative_sup_norm: wh,
        derivative_holder_bound: 1.0,
        split: Some(split),
    })
}

/// The `2^{d−1}` orthant cells `(0, a) × Π(0, ±h)` and `(a, h) × Π(0, ±h)`
/// and the integral of `f_{e,h}` over each.
pub fn split_cell_integrals(omega: &Modulus, h: f64, d: usize, a: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    continuum_with(d, 1)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    for mask in 0u32..(1u32 << (d - 1)) {
        let mut lo = vec![0.0; d];
        let mut hi = vec![0.0; d];
        for i in 1..d {
            if mask & (1 << (i - 1)) != 0 {
                hi[i] = h;
            } else {
                lo[i] = -h;
            }
        }
        hi[0] = a;
        left.push(box_integral_f_eh(omega, h, &lo, &hi)?);
        lo[0] = a;
        hi[0] = h;
        right.push(box_integral_f_eh(omega, h, &lo, &hi)?);
    }
    Ok((left, right))
}

/// `(f_{e,h}, 1/2)`: the extremal of the upper-gradient inequality and the
/// constant value of its upper gradient.
pub fn sobolev_extremal_pair(space: &Space, omega: &Modulus, h: f64) -> Result<(FunctionModel, f64)> {
    Ok((make_f_eh(space, omega, h)?, 0.5))
}

/// `F(x) = ∫_0^{x₁}…∫_0^{x_d} f_{e,h}(u) du` on `ℝ^m₊ × ℝ^{d−m}` for any
/// `m`. Equals [`make_g_eh`] when `m = 0`; for `m ≥ 2` it is a test function
/// only, with `‖F‖ = h^d ω(h) − 2^{−d} I(h)`.
pub fn make_iterated_f_eh(omega: &Modulus, h: f64, d: usize, m: usize) -> Result<MixedExtremal> {
    let space = continuum_with(d, m)?;
    check_radius(&space, h)?;
    let flat = continuum_with(d, 0)?;
    let wh = omega.value(h);
    let i = modulus_integral(&flat, omega, h, &QuadratureSpec::auto(&flat, omega))?.value;
    let sup = math::powi(h, d as i32) * wh - i / math::pow2(d);
    Ok(MixedExtremal {
        function: FunctionModel::new(IteratedFEh { omega: omega.clone(), h, start: 0.0, sup }),
        derivative: make_f_eh(&space, omega, h)?,
        sup_norm: sup,
        derivative_sup_norm: wh,
        derivative_holder_bound: 1.0,
        split: None,
    })
}

fn tolerance_for(method: Method) -> f64 {
    match method {
        Method::ClosedForm | Method::LatticeExact => CLOSED_FORM_TOL,
        _ => QUADRATURE_TOL,
    }
}

/// A named extremal function, as referenced from experiment configs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremalFamily {
    /// `f_{e,h}`.
    FEh,
    /// `c ± ω(ρ(x, θ))`.
    FOmega { c: f64, sign: i8 },
    /// `f_{e,ω}`.
    FEOmega,
    /// `g_{e,h}`; on `m ≥ 2` the same iterated integral from `θ`.
    GEh,
    /// `G_{e,h}` (`m = 1`).
    BigGEh,
}

impl ExtremalFamily {
    pub fn name(&self) -> &'static str {
        match self {
            ExtremalFamily::FEh => "f_eh",
            ExtremalFamily::FOmega { .. } => "f_omega",
            ExtremalFamily::FEOmega => "f_e_omega",
            ExtremalFamily::GEh => "g_eh",
            ExtremalFamily::BigGEh => "G_eh",
        }
    }

    /// The function on which `theorem` turns into an equality in `space`.
    pub fn default_for(theorem: TheoremId, space: &Space) -> Self {
        match theorem {
            TheoremId::Lemma1 => ExtremalFamily::FOmega { c: 0.0, sign: 1 },
            TheoremId::Hypersingular => ExtremalFamily::FEOmega,
            TheoremId::MixedAdditive | TheoremId::MixedMultiplicative if space.m() == 1 => ExtremalFamily::BigGEh,
            TheoremId::MixedAdditive | TheoremId::MixedMultiplicative => ExtremalFamily::GEh,
            _ => ExtremalFamily::FEh,
        }
    }
}

/// The theorem's inequality evaluated at its extremal function, where it
/// should turn into an equality:
///
/// * `lemma1`: `f_ω` at `θ`;
/// * `nagy`, `nagy_l1`, `sobolev` (with `G ≡ 1/2`), `charge` (density
///   `f_{e,h}`): `f_{e,h}`;
/// * `hypersingular`: `f_{e,ω}` at `θ`, with the split at `h`;
/// * `mixed_additive`, `mixed_multiplicative`: `g_{e,h}` (`m = 0`),
///   `G_{e,h}` (`m = 1`). For `m ≥ 2` no extremal is known and the report
///   uses [`make_iterated_f_eh`], so only the inequality is expected.
pub fn equality_report(
    theorem: TheoremId,
    space: &Space,
    omega: &Modulus,
    h: f64,
    kernel: &Kernel,
    spec: &QuadratureSpec,
) -> Result<InequalityReport> {
    extremal_report(theorem, ExtremalFamily::default_for(theorem, space), space, omega, h, kernel, spec)
}

/// [`equality_report`] at an explicitly named extremal, which must be one
/// of the theorem's own.
pub fn extremal_report(
    theorem: TheoremId,
    family: ExtremalFamily,
    space: &Space,
    omega: &Modulus,
    h: f64,
    kernel: &Kernel,
    spec: &QuadratureSpec,
) -> Result<InequalityReport> {
    check_radius(space, h)?;
    let theta = space.origin();
    let mismatch = || Error::Unsupported("the extremal family does not belong to this theorem and space");
    match theorem {
        TheoremId::Lemma1 => {
            let ExtremalFamily::FOmega { c, sign } = family else {
                return Err(mismatch());
            };
            let f = make_f_omega(space, omega, c, sign)?;
            let s = steklov_average(&f, space, h, spec)?.try_eval(&theta)?;
            let lhs = math::abs(f.eval(&theta) - s.value);
            let i = modulus_integral(space, omega, h, spec)?;
            let rhs = Bound { approximation: i.value / space.ball_measure(h)?, remainder: 0.0 };
            Ok(InequalityReport::assess(theorem, lhs, rhs, tolerance_for(s.method).max(tolerance_for(i.method))))
        }
        TheoremId::Nagy | TheoremId::NagyL1 | TheoremId::Sobolev | TheoremId::Charge => {
            if family != ExtremalFamily::FEh {
                return Err(mismatch());
            }
            let (f, gradient) = sobolev_extremal_pair(space, omega, h)?;
            // f ≥ 0 peaks at θ, so ⌋f⌈_h, ⌉ν⌊_h and ‖f‖_{L₁} are all the
            // integral over B_h.
            let mass = if theorem == TheoremId::Charge {
                ChargeModel::new(f.clone()).ball_charge(space, &theta, h, spec)?
            } else {
                integral_over_ball(&f, space, &theta, h, spec)?
            };
            let i = modulus_integral(space, omega, h, spec)?;
            let holder = f.certificate().holder_bound.unwrap_or(1.0);
            let rhs = match theorem {
                TheoremId::Nagy => nagy_rhs(space, omega, h, holder, mass.value, &spec.with_method(i.method))?,
                TheoremId::NagyL1 => nagy_l1_rhs(space, omega, h, holder, mass.value, &spec.with_method(i.method))?,
                TheoremId::Sobolev => sobolev_rhs(space, omega, h, gradient, mass.value, &spec.with_method(i.method))?,
                _ => charge_nagy_rhs(space, omega, h, holder, mass.value, &spec.with_method(i.method))?,
            };
            let lhs = f.eval(&theta);
            Ok(InequalityReport::assess(theorem, lhs, rhs, tolerance_for(mass.method).max(tolerance_for(i.method))))
        }
        TheoremId::Hypersingular => {
            if family != ExtremalFamily::FEOmega {
                return Err(mismatch());
            }
            let f = make_f_e_omega(space, omega, h)?;
            let a = kernel_ball_mass(space, omega, kernel, h, spec)?;
            let t = kernel_tail_mass(space, kernel, h, spec)?;
            let op = hypersingular_full(&f, space, omega, kernel, &theta, h, &spec.with_tol(1e-10, 1e-10))?;
            let rhs = hypersingular_rhs(1.0, 0.5 * omega.value(h), a.value, t.value);
            Ok(InequalityReport::assess(theorem, math::abs(op.value), rhs, QUADRATURE_TOL))
        }
        TheoremId::MixedAdditive | TheoremId::MixedMultiplicative => {
            if space.is_lattice() {
                return Err(Error::Unsupported("mixed differences are defined on the continuum only"));
            }
            let (d, m) = (space.d(), space.m());
            let ext = match (family, m) {
                (ExtremalFamily::GEh, 0) => make_g_eh(omega, h, d)?,
                (ExtremalFamily::GEh, m) if m >= 2 => make_iterated_f_eh(omega, h, d, m)?,
                (ExtremalFamily::BigGEh, 1) => make_G_eh(omega, h, d)?,
                _ => return Err(mismatch()),
            };
            let lhs = ext.derivative.eval(&theta);
            let i = modulus_integral(space, omega, h, spec)?;
            let additive =
                mixed_nagy_rhs(d, m, omega, h, ext.derivative_holder_bound, ext.sup_norm, &spec.with_method(i.method))?;
            let tol = QUADRATURE_TOL.max(tolerance_for(i.method));
            if theorem == TheoremId::MixedAdditive {
                return Ok(InequalityReport::assess(theorem, lhs, additive, tol));
            }
            let alpha = omega.alpha().ok_or(Error::Unsupported("the multiplicative form needs a power modulus"))?;
            let rhs = mixed_multiplicative_rhs(d, m, alpha, ext.sup_norm, ext.derivative_holder_bound)?;
            Ok(InequalityReport::assess(theorem, lhs, Bound { approximation: rhs, remainder: 0.0 }, tol))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_eh_examples() {
        let s = Space::continuum(1, 0).unwrap();
        let f = make_f_eh(&s, &Modulus::identity(), 1.0).unwrap();
        assert_eq!(f.eval(&[0.0]), 1.0);
        assert_eq!(f.eval(&[0.5]), 0.5);
        assert_eq!(f.eval(&[-0.5]), 0.5);
        assert_eq!(f.eval(&[2.0]), 0.0);
        assert_eq!(f.certificate().l1_norm, Some(1.0));
        let l = Space::lattice(1, 0).unwrap();
        let g = make_f_eh(&l, &Modulus::identity(), 1.5).unwrap();
        assert_eq!([g.eval(&[0.0]), g.eval(&[1.0]), g.eval(&[-1.0])], [1.5, 0.5, 0.5]);
    }

    #[test]
    fn f_e_omega_branches_agree() {
        let s = Space::continuum(2, 0).unwrap();
        let w = Modulus::power(0.5).unwrap();
        let f = make_f_e_omega(&s, &w, 2.0).unwrap();
        let wh = w.value(2.0);
        assert_eq!(f.eval(&[0.0, 0.0]), -wh / 2.0);
        assert!((f.eval(&[2.0, 1.0]) - wh / 2.0).abs() < 1e-15);
        assert!((f.eval(&[5.0, 1.0]) - wh / 2.0).abs() < 1e-15);
    }

    #[test]
    fn split_point_on_the_half_line() {
        let sp = split_point_a(&Modulus::identity(), 1.0, 1).unwrap();
        assert!((sp.a - (1.0 - core::f64::consts::FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!(sp.residual.abs() < 1e-12);
    }

    #[test]
    fn iterated_extremals() {
        let w = Modulus::identity();
        let g = make_g_eh(&w, 1.0, 1).unwrap();
        assert_eq!(g.sup_norm, 0.5);
        assert_eq!(g.function.eval(&[0.0]), 0.0);
        assert!((g.function.eval(&[3.0]) - 0.5).abs() < 1e-13);
        let big = make_G_eh(&w, 1.0, 1).unwrap();
        assert_eq!(big.sup_norm, 0.25);
        let a = big.split.unwrap().a;
        assert_eq!(big.function.eval(&[a]), 0.0);
        assert!((big.function.eval(&[2.0]) - 0.25).abs() < 1e-12);
        assert!((big.function.eval(&[0.0]) + 0.25).abs() < 1e-12);
    }
}
