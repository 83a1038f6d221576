//! Generating curves of constant mean curvature rotational surfaces.
//!
//! Given a profile (`r(u)` for elliptic and hyperbolic surfaces, `f(u)` for
//! parabolic ones) and a target `⟨H,H⟩ = h_sign·C²`, an angle function is
//! recovered by quadrature of a first-order equation and the remaining two
//! coordinates by quadrature of expressions in that angle:
//!
//! | type | angle rate | coordinates |
//! |------|-----------|-------------|
//! | elliptic | `φ′ = η √(K² ± 4C²r²(1+r′²)) / (r(1+r′²))`, `K = r r″ + r′² + 1` | `x₁′ = s cos φ`, `x₂′ = s sin φ`, `s = √(1+r′²)` |
//! | hyperbolic A | `φ′ = η √(K² ± 4C²r²D) / (rD)`, `K = r r″ + D`, `D = r′² − 1 > 0` | `x₂′ = √D sinh φ`, `x₄′ = √D cosh φ` |
//! | hyperbolic B | same, `D < 0` | `x₂′ = √−D cosh φ`, `x₄′ = √−D sinh φ` |
//! | parabolic | `ψ′ = η √(((ln|ff′|)′)² ± 4C²) / f′`, `ψ(u₀) = A` | `x₁′ = f′ψ`, `g′ = ((f′ψ)² − 1)/(2f′)` |
//!
//! The `±` is `h_sign`. Curve derivatives are assembled analytically from
//! the angle and its rate; quadrature output is never differentiated.

use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::builders::TAU_SLOPE;
use crate::curve::{linspace, CurveSource, GeneratingCurve, RotationType};
use crate::dsl::ProfileFunction;
use crate::error::{DomainKind, Error, Result};
use crate::geometry::Sign;
use crate::jet::Jet2;
use crate::math;
use crate::quadrature::{adaptive_simpson, integrate, QuadratureConfig};

/// Samples used by [`domain_validity`] and the generator's precondition scan.
pub const VALIDITY_SAMPLES: usize = 401;
/// Bisection tolerance for validity boundaries.
pub const BOUNDARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CmcParams {
    /// Mean curvature constant, nonzero.
    pub c: f64,
    /// Sign of `⟨H,H⟩` (the sign under the radical).
    pub h_sign: Sign,
    /// Sign in front of the angle integral.
    pub eta: Sign,
    /// Base point of every integral; `None` means the interval start.
    pub u0: Option<f64>,
    /// `φ(u₀)`; for parabolic curves this is the constant `A = ψ(u₀)`.
    pub phi0: f64,
    /// First coordinate at `u₀` (`x1` elliptic/parabolic, `x2` hyperbolic).
    pub c1: f64,
    /// Second coordinate at `u₀` (`x2` elliptic, `x4` hyperbolic, `g` parabolic).
    pub c2: f64,
}

impl CmcParams {
    pub fn new(c: f64, h_sign: Sign, eta: Sign) -> Self {
        Self {
            c,
            h_sign,
            eta,
            u0: None,
            phi0: 0.0,
            c1: 0.0,
            c2: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c != 0.0) {
            return Err(Error::InvalidParameter("C must be finite and nonzero"));
        }
        if !(self.phi0.is_finite() && self.c1.is_finite() && self.c2.is_finite()) {
            return Err(Error::InvalidParameter(
                "integration constants must be finite",
            ));
        }
        Ok(())
    }

    /// `h_sign · C²`, the value `⟨H,H⟩` must take.
    pub fn target_h2(&self) -> f64 {
        self.h_sign.value() * self.c * self.c
    }
}

fn positive_profile(r: &ProfileFunction, u: f64) -> Result<Jet2> {
    let j = r.eval(u)?;
    if !(j.val > 0.0) {
        return Err(Error::NonpositiveProfile { u });
    }
    Ok(j)
}

fn radical(rad: f64, u: f64) -> Result<f64> {
    if !(rad >= 0.0) {
        return Err(Error::NegativeRadicand { u });
    }
    Ok(math::sqrt(rad))
}

/// `φ′(u)` for an elliptic CMC surface with profile `r`.
pub fn phi_integrand_elliptic(r: &ProfileFunction, params: &CmcParams, u: f64) -> Result<f64> {
    let j = positive_profile(r, u)?;
    let s2 = 1.0 + j.d1 * j.d1;
    let k = j.val * j.d2 + s2;
    let four_c2 = 4.0 * params.c * params.c;
    let root = radical(
        k * k + params.h_sign.value() * four_c2 * j.val * j.val * s2,
        u,
    )?;
    Ok(params.eta.value() * root / (j.val * s2))
}

/// `φ′(u)` for a hyperbolic CMC surface of the given case.
pub fn phi_integrand_hyperbolic(
    r: &ProfileFunction,
    params: &CmcParams,
    case: RotationType,
    u: f64,
) -> Result<f64> {
    let eps = case.slope_sign().ok_or(Error::InvalidParameter(
        "case must be hyperbolicA or hyperbolicB",
    ))?;
    let j = positive_profile(r, u)?;
    let d = slope(j, eps, u)?;
    let k = j.val * j.d2 + d;
    let four_c2 = 4.0 * params.c * params.c;
    let root = radical(
        k * k + params.h_sign.value() * four_c2 * j.val * j.val * d,
        u,
    )?;
    Ok(params.eta.value() * root / (j.val * d))
}

fn slope(r: Jet2, eps: f64, u: f64) -> Result<f64> {
    let d = r.d1 * r.d1 - 1.0;
    if d.abs() < TAU_SLOPE {
        return Err(Error::NearNullSlope { u });
    }
    if d * eps < 0.0 {
        return Err(Error::CaseMismatch);
    }
    Ok(d)
}

fn nonvanishing_ff(f: &ProfileFunction, u: f64) -> Result<Jet2> {
    let j = f.eval(u)?;
    if j.val * j.d1 == 0.0 {
        return Err(Error::ZeroDerivativeProfile { u });
    }
    Ok(j)
}

/// `ψ′(u)` for a parabolic CMC surface with profile `f`; the curve has
/// `x₁′ = f′ψ`.
pub fn psi_integrand_parabolic(f: &ProfileFunction, params: &CmcParams, u: f64) -> Result<f64> {
    let j = nonvanishing_ff(f, u)?;
    let log_rate = (j.d1 * j.d1 + j.val * j.d2) / (j.val * j.d1);
    let four_c2 = 4.0 * params.c * params.c;
    let root = radical(log_rate * log_rate + params.h_sign.value() * four_c2, u)?;
    Ok(params.eta.value() * root / j.d1)
}

/// The angle rate for `kind`, dispatching to the three integrands above.
pub fn angle_integrand(
    kind: RotationType,
    profile: &ProfileFunction,
    params: &CmcParams,
    u: f64,
) -> Result<f64> {
    match kind {
        RotationType::Elliptic => phi_integrand_elliptic(profile, params, u),
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            phi_integrand_hyperbolic(profile, params, kind, u)
        }
        RotationType::Parabolic => psi_integrand_parabolic(profile, params, u),
    }
}

/// Maximal subintervals of `interval` on which the generator for `kind`
/// can run: the profile evaluates, `r > 0` (or `f f′ ≠ 0`), `(r′)² − 1` has
/// the case's sign outside the slope band, and the radicand is non-negative.
/// Boundaries between samples are located by bisection to [`BOUNDARY_TOL`].
pub fn domain_validity(
    profile: &ProfileFunction,
    params: &CmcParams,
    interval: (f64, f64),
    kind: RotationType,
) -> Vec<(f64, f64)> {
    domain_validity_sampled(profile, params, interval, kind, VALIDITY_SAMPLES)
}

pub fn domain_validity_sampled(
    profile: &ProfileFunction,
    params: &CmcParams,
    interval: (f64, f64),
    kind: RotationType,
    samples: usize,
) -> Vec<(f64, f64)> {
    let ok = |u: f64| angle_integrand(kind, profile, params, u).is_ok();
    let pts = linspace(interval.0, interval.1, samples.max(2));
    let flags: Vec<bool> = pts.iter().map(|&u| ok(u)).collect();
    let boundary = |good: f64, bad: f64| {
        let (mut g, mut b) = (good, bad);
        while (g - b).abs() > BOUNDARY_TOL {
            let m = 0.5 * (g + b);
            if ok(m) {
                g = m;
            } else {
                b = m;
            }
        }
        g
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < pts.len() {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start = if i == 0 {
            pts[0]
        } else {
            boundary(pts[i], pts[i - 1])
        };
        let mut j = i;
        while j + 1 < pts.len() && flags[j + 1] {
            j += 1;
        }
        let end = if j + 1 == pts.len() {
            pts[j]
        } else {
            boundary(pts[j], pts[j + 1])
        };
        // A lone valid point (the radicand touching zero) is not an interval.
        if end - start > BOUNDARY_TOL {
            out.push((start, end));
        }
        i = j + 1;
    }
    out
}

/// First precondition failure on an evenly sampled interval, if any.
fn check_interval(
    kind: RotationType,
    profile: &ProfileFunction,
    params: &CmcParams,
    interval: (f64, f64),
) -> Result<()> {
    for u in linspace(interval.0, interval.1, VALIDITY_SAMPLES) {
        angle_integrand(kind, profile, params, u)?;
    }
    Ok(())
}

/// A generating curve assembled from quadrature of the angle equation.
struct CmcCurve {
    kind: RotationType,
    profile: ProfileFunction,
    params: CmcParams,
    cfg: QuadratureConfig,
    angle_scale: f64,
    knots: Vec<f64>,
    /// `∫ angle rate` from the interval start to each knot.
    raw_angle: Vec<f64>,
    angle_offset: f64,
    /// Coordinate integrals from the interval start to each knot.
    raw_coords: Vec<[f64; 2]>,
    coord_offset: [f64; 2],
}

impl CmcCurve {
    fn nearest_knot(&self, u: f64) -> usize {
        let (a, b) = (self.knots[0], self.knots[self.knots.len() - 1]);
        let n = self.knots.len() - 1;
        let k = libm::round((u - a) / (b - a) * n as f64);
        (k.max(0.0) as usize).min(n)
    }

    fn rate(&self, u: f64) -> Result<f64> {
        angle_integrand(self.kind, &self.profile, &self.params, u)
    }

    fn raw_angle_at(&self, u: f64) -> Result<f64> {
        let k = self.nearest_knot(u);
        Ok(self.raw_angle[k] + integrate(|s| self.rate(s), self.knots[k], u, &self.cfg)?)
    }

    /// The angle actually used by the curve (φ, or ψ for parabolic curves).
    fn angle(&self, u: f64) -> Result<f64> {
        Ok(self.angle_scale * (self.raw_angle_at(u)? + self.angle_offset))
    }

    fn coord_rates(&self, u: f64, angle: f64) -> Result<[f64; 2]> {
        let p = self.profile.eval(u)?;
        Ok(match self.kind {
            RotationType::Elliptic => {
                let s = math::sqrt(1.0 + p.d1 * p.d1);
                [s * math::cos(angle), s * math::sin(angle)]
            }
            RotationType::HyperbolicA => {
                let t = math::sqrt(p.d1 * p.d1 - 1.0);
                [t * math::sinh(angle), t * math::cosh(angle)]
            }
            RotationType::HyperbolicB => {
                let t = math::sqrt(1.0 - p.d1 * p.d1);
                [t * math::cosh(angle), t * math::sinh(angle)]
            }
            RotationType::Parabolic => {
                let phi = p.d1 * angle;
                [phi, (phi * phi - 1.0) / (2.0 * p.d1)]
            }
        })
    }

    fn raw_coords_at(&self, u: f64) -> Result<[f64; 2]> {
        let k = self.nearest_knot(u);
        let seg = adaptive_simpson(
            |s| self.coord_rates(s, self.angle(s)?),
            self.knots[k],
            u,
            &self.cfg,
        )?;
        Ok([
            self.raw_coords[k][0] + seg[0],
            self.raw_coords[k][1] + seg[1],
        ])
    }

    fn build(
        kind: RotationType,
        profile: ProfileFunction,
        params: CmcParams,
        cfg: QuadratureConfig,
        interval: (f64, f64),
        angle_scale: f64,
    ) -> Result<Self> {
        let knots = linspace(interval.0, interval.1, cfg.segments + 1);
        let mut curve = CmcCurve {
            kind,
            profile,
            params,
            cfg,
            angle_scale,
            knots,
            raw_angle: Vec::new(),
            angle_offset: 0.0,
            raw_coords: Vec::new(),
            coord_offset: [0.0; 2],
        };
        let mut acc = 0.0;
        curve.raw_angle.push(acc);
        for w in curve.knots.windows(2) {
            acc += integrate(|s| curve.rate(s), w[0], w[1], &curve.cfg)?;
            curve.raw_angle.push(acc);
        }
        let u0 = params.u0.unwrap_or(interval.0);
        // Offsets are fixed before the coordinate pass, whose integrand
        // depends on the final angle.
        curve.angle_offset = params.phi0 / angle_scale - curve.raw_angle_at(u0)?;
        let mut acc = [0.0; 2];
        let mut coords = Vec::with_capacity(curve.knots.len());
        coords.push(acc);
        for w in curve.knots.windows(2) {
            let seg = adaptive_simpson(
                |s| curve.coord_rates(s, curve.angle(s)?),
                w[0],
                w[1],
                &curve.cfg,
            )?;
            acc = [acc[0] + seg[0], acc[1] + seg[1]];
            coords.push(acc);
        }
        curve.raw_coords = coords;
        let at_u0 = curve.raw_coords_at(u0)?;
        curve.coord_offset = [params.c1 - at_u0[0], params.c2 - at_u0[1]];
        Ok(curve)
    }
}

impl CurveSource for CmcCurve {
    fn components(&self, u: f64) -> Result<[Jet2; 3]> {
        let p = self.profile.eval(u)?;
        let angle = self.angle(u)?;
        let rate = self.angle_scale * self.rate(u)?;
        let raw = self.raw_coords_at(u)?;
        let (c1, c2) = (raw[0] + self.coord_offset[0], raw[1] + self.coord_offset[1]);
        let (sn, cs) = (math::sin(angle), math::cos(angle));
        let (sh, ch) = (math::sinh(angle), math::cosh(angle));
        Ok(match self.kind {
            RotationType::Elliptic => {
                let s = math::sqrt(1.0 + p.d1 * p.d1);
                let ds = p.d1 * p.d2 / s;
                [
                    Jet2::new(c1, s * cs, ds * cs - s * sn * rate),
                    Jet2::new(c2, s * sn, ds * sn + s * cs * rate),
                    p,
                ]
            }
            RotationType::HyperbolicA => {
                let t = math::sqrt(p.d1 * p.d1 - 1.0);
                let dt = p.d1 * p.d2 / t;
                [
                    p,
                    Jet2::new(c1, t * sh, dt * sh + t * ch * rate),
                    Jet2::new(c2, t * ch, dt * ch + t * sh * rate),
                ]
            }
            RotationType::HyperbolicB => {
                let t = math::sqrt(1.0 - p.d1 * p.d1);
                let dt = -p.d1 * p.d2 / t;
                [
                    p,
                    Jet2::new(c1, t * ch, dt * ch + t * sh * rate),
                    Jet2::new(c2, t * sh, dt * sh + t * ch * rate),
                ]
            }
            RotationType::Parabolic => {
                let phi = p.d1 * angle;
                let dphi = p.d2 * angle + p.d1 * rate;
                let g1 = (phi * phi - 1.0) / (2.0 * p.d1);
                let g2 = phi * dphi / p.d1 - (phi * phi - 1.0) * p.d2 / (2.0 * p.d1 * p.d1);
                [Jet2::new(c1, phi, dphi), p, Jet2::new(c2, g1, g2)]
            }
        })
    }
}

/// Generate the curve for `kind`. The whole interval must satisfy the
/// generator's preconditions; use [`domain_validity`] to find where it does.
pub fn generate(
    kind: RotationType,
    profile: &ProfileFunction,
    params: &CmcParams,
    cfg: &QuadratureConfig,
    interval: (f64, f64),
) -> Result<GeneratingCurve> {
    generate_scaled(kind, profile, params, cfg, interval, 1.0)
}

/// As [`generate`], with the angle multiplied by `angle_scale` everywhere.
/// Any scale other than 1 breaks the CMC property while keeping the curve
/// arc-length parameterized, which makes it a negative control.
pub fn generate_scaled(
    kind: RotationType,
    profile: &ProfileFunction,
    params: &CmcParams,
    cfg: &QuadratureConfig,
    interval: (f64, f64),
    angle_scale: f64,
) -> Result<GeneratingCurve> {
    params.validate()?;
    cfg.validate()?;
    if !(interval.0 < interval.1) || !interval.0.is_finite() || !interval.1.is_finite() {
        return Err(Error::InvalidParameter(
            "interval must be finite with start < end",
        ));
    }
    if !(angle_scale.is_finite() && angle_scale != 0.0) {
        return Err(Error::InvalidParameter(
            "angle scale must be finite and nonzero",
        ));
    }
    if let Some(u0) = params.u0 {
        if !(u0 >= interval.0 && u0 <= interval.1) {
            return Err(Error::InvalidParameter("u0 must lie in the interval"));
        }
    }
    check_interval(kind, profile, params, interval)?;
    let curve = CmcCurve::build(kind, profile.clone(), *params, *cfg, interval, angle_scale)?;
    Ok(GeneratingCurve::new(kind, interval, Arc::new(curve)))
}

pub fn generate_elliptic(
    r: &ProfileFunction,
    params: &CmcParams,
    cfg: &QuadratureConfig,
    interval: (f64, f64),
) -> Result<GeneratingCurve> {
    generate(RotationType::Elliptic, r, params, cfg, interval)
}

pub fn generate_hyperbolic(
    r: &ProfileFunction,
    params: &CmcParams,
    cfg: &QuadratureConfig,
    interval: (f64, f64),
    case: RotationType,
) -> Result<GeneratingCurve> {
    if !case.is_hyperbolic() {
        return Err(Error::InvalidParameter(
            "case must be hyperbolicA or hyperbolicB",
        ));
    }
    generate(case, r, params, cfg, interval)
}

pub fn generate_parabolic(
    f: &ProfileFunction,
    params: &CmcParams,
    cfg: &QuadratureConfig,
    interval: (f64, f64),
) -> Result<GeneratingCurve> {
    generate(RotationType::Parabolic, f, params, cfg, interval)
}

/// Constants of the special profiles that admit a closed-form angle.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpecialConstants {
    pub a: f64,
    pub b: f64,
    pub d: f64,
    /// Additive constant of the parabolic closed form.
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    pub big_a: f64,
    /// Multiplier of `C` in the parabolic closed form.
    #[cfg_attr(feature = "serde", serde(rename = "B"))]
    pub big_b: f64,
}

impl SpecialConstants {
    /// The special profile as an expression in `u`, `a` and `b`.
    pub fn profile_text(kind: RotationType) -> &'static str {
        match kind {
            RotationType::Elliptic => "sqrt(-u^2+2*a*u+b)",
            RotationType::HyperbolicA | RotationType::HyperbolicB => "sqrt(u^2+2*a*u+b)",
            RotationType::Parabolic => "sqrt(2*a*u+b)",
        }
    }
}

/// Closed-form angle for the special profiles on which the `K` term of the
/// angle equation vanishes:
///
/// * elliptic, `r = √(−u²+2au+b)`:
///   `φ = 2C/√(a²+b) · ((u−a)/2 · r + (a²+b)/2 · asin((u−a)/√(a²+b)) + d)`
/// * hyperbolic, `r = √(u²+2au+b)`, `ε = sign(a²−b)`:
///   `φ = 2ηC/√(ε(a²−b)) · ((u+a)/2 · r − ε(a²−b)/2 · ln|u+a+r| + d)`
/// * parabolic, `f = √(2au+b)`:
///   `φ = (A ± 2CB/(3a) · f³) / f`, with `±` taken as `η`
///
/// For parabolic curves the returned value is `φ = x₁′`, not `ψ`.
pub fn special_phi(
    kind: RotationType,
    k: &SpecialConstants,
    params: &CmcParams,
    u: f64,
) -> Result<f64> {
    let c = params.c;
    let domain = |kind| Error::Domain { u, kind };
    match kind {
        RotationType::Elliptic => {
            let r2 = -u * u + 2.0 * k.a * u + k.b;
            let m2 = k.a * k.a + k.b;
            if !(r2 > 0.0) || !(m2 > 0.0) {
                return Err(domain(DomainKind::SqrtNonPositive));
            }
            let (r, m) = (math::sqrt(r2), math::sqrt(m2));
            Ok(2.0 * c / m * (0.5 * (u - k.a) * r + 0.5 * m2 * math::asin((u - k.a) / m) + k.d))
        }
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            let r2 = u * u + 2.0 * k.a * u + k.b;
            let disc = k.a * k.a - k.b;
            if !(r2 > 0.0) {
                return Err(domain(DomainKind::SqrtNonPositive));
            }
            if disc == 0.0 {
                return Err(domain(DomainKind::DivisionByZero));
            }
            let eps = disc.signum();
            let r = math::sqrt(r2);
            let arg = (u + k.a + r).abs();
            if arg == 0.0 {
                return Err(domain(DomainKind::LogNonPositive));
            }
            let pre = 2.0 * params.eta.value() * c / math::sqrt(eps * disc);
            Ok(pre * (0.5 * (u + k.a) * r - 0.5 * eps * disc * math::ln(arg) + k.d))
        }
        RotationType::Parabolic => {
            let f2 = 2.0 * k.a * u + k.b;
            if !(f2 > 0.0) {
                return Err(domain(DomainKind::SqrtNonPositive));
            }
            if k.a == 0.0 {
                return Err(domain(DomainKind::DivisionByZero));
            }
            let f = math::sqrt(f2);
            let cubic = params.eta.value() * 2.0 * c * k.big_b / (3.0 * k.a) * f2 * f;
            Ok((k.big_a + cubic) / f)
        }
    }
}
