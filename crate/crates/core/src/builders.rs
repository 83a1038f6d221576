//! The three rotational constructions, their closed-form adapted frames and
//! closed-form mean curvature.
//!
//! * elliptic: `z = (x1, x2, r cos v, r sin v)`
//! * hyperbolic: `z = (r cosh v, x2, r sinh v, x4)`
//! * parabolic: `z = x1 e₁ + f ξ₁ + (g − v² f) ξ₂ + √2 v f e₄`
//!
//! Parabolic patches are stored in the standard basis; `ξ₁, ξ₂` only appear
//! while assembling the partials.

use alloc::vec::Vec;

use crate::curve::{GeneratingCurve, RotationType};
use crate::error::{Error, Result};
use crate::geometry::{Sign, Vec4, E1, E4, XI1, XI2};
use crate::jet::Jet2;
use crate::math::{self, SQRT_2, TAU};
use crate::surface::{Frame, MeanCurvature, PatchPoint, Rect, SurfacePatch};

/// Exclusion band around `(r′)² = 1` for hyperbolic surfaces.
pub const TAU_SLOPE: f64 = 1e-6;
/// Default `v` window for hyperbolic and parabolic sampling.
pub const DEFAULT_V_WINDOW: (f64, f64) = (-2.0, 2.0);
/// Samples used to check curve invariants when a patch is built.
const INVARIANT_SAMPLES: usize = 17;

/// A rotational surface patch with analytic partials assembled from the
/// generating curve's jets.
#[derive(Clone, Debug)]
pub struct RotationalPatch {
    curve: GeneratingCurve,
    v_window: (f64, f64),
}

impl RotationalPatch {
    pub fn curve(&self) -> &GeneratingCurve {
        &self.curve
    }

    pub fn kind(&self) -> RotationType {
        self.curve.kind
    }

    pub fn v_window(&self) -> (f64, f64) {
        self.v_window
    }

    pub fn with_v_window(self, v_window: (f64, f64)) -> Self {
        Self { v_window, ..self }
    }

    /// The same patch over a tabulated copy of its curve. The rows are taken
    /// on trust: they are meant to come from this patch's own curve.
    pub fn with_samples(&self, rows: Vec<(f64, [Jet2; 3])>) -> Result<Self> {
        let curve = GeneratingCurve::from_samples(self.curve.kind, rows)?;
        Ok(Self {
            curve,
            v_window: self.v_window,
        })
    }
}

fn invariant_samples(curve: &GeneratingCurve) -> Vec<f64> {
    curve.sample_points(INVARIANT_SAMPLES)
}

pub fn build_elliptic(curve: GeneratingCurve) -> Result<RotationalPatch> {
    if curve.kind != RotationType::Elliptic {
        return Err(Error::InvalidParameter(
            "build_elliptic needs an elliptic curve",
        ));
    }
    curve.check_invariants(&invariant_samples(&curve))?;
    Ok(RotationalPatch {
        curve,
        v_window: (0.0, TAU),
    })
}

pub fn build_hyperbolic(curve: GeneratingCurve) -> Result<RotationalPatch> {
    let Some(eps) = curve.kind.slope_sign() else {
        return Err(Error::InvalidParameter(
            "build_hyperbolic needs a hyperbolic curve",
        ));
    };
    let samples = invariant_samples(&curve);
    curve.check_invariants(&samples)?;
    for &u in &samples {
        check_slope(curve.components(u)?[0], eps, u)?;
    }
    Ok(RotationalPatch {
        curve,
        v_window: DEFAULT_V_WINDOW,
    })
}

pub fn build_parabolic(curve: GeneratingCurve) -> Result<RotationalPatch> {
    if curve.kind != RotationType::Parabolic {
        return Err(Error::InvalidParameter(
            "build_parabolic needs a parabolic curve",
        ));
    }
    curve.check_invariants(&invariant_samples(&curve))?;
    Ok(RotationalPatch {
        curve,
        v_window: DEFAULT_V_WINDOW,
    })
}

/// Dispatch on the curve's rotation type.
pub fn build(curve: GeneratingCurve) -> Result<RotationalPatch> {
    match curve.kind {
        RotationType::Elliptic => build_elliptic(curve),
        RotationType::HyperbolicA | RotationType::HyperbolicB => build_hyperbolic(curve),
        RotationType::Parabolic => build_parabolic(curve),
    }
}

/// `(r′)² − 1`, checked against the band and the expected sign `eps`.
fn check_slope(r: Jet2, eps: f64, u: f64) -> Result<f64> {
    let d = r.d1 * r.d1 - 1.0;
    if d.abs() < TAU_SLOPE {
        return Err(Error::NearNullSlope { u });
    }
    if d * eps < 0.0 {
        return Err(Error::CaseMismatch);
    }
    Ok(d)
}

impl SurfacePatch for RotationalPatch {
    fn domain(&self) -> Rect {
        Rect::new(self.curve.domain, self.v_window)
    }

    fn eval(&self, u: f64, v: f64) -> Result<PatchPoint> {
        let c = self.curve.components(u)?;
        Ok(match self.curve.kind {
            RotationType::Elliptic => {
                let [x1, x2, r] = c;
                let (s, co) = (math::sin(v), math::cos(v));
                PatchPoint {
                    pos: Vec4::new(x1.val, x2.val, r.val * co, r.val * s),
                    zu: Vec4::new(x1.d1, x2.d1, r.d1 * co, r.d1 * s),
                    zv: Vec4::new(0.0, 0.0, -r.val * s, r.val * co),
                    zuu: Vec4::new(x1.d2, x2.d2, r.d2 * co, r.d2 * s),
                    zuv: Vec4::new(0.0, 0.0, -r.d1 * s, r.d1 * co),
                    zvv: Vec4::new(0.0, 0.0, -r.val * co, -r.val * s),
                }
            }
            RotationType::HyperbolicA | RotationType::HyperbolicB => {
                let [r, x2, x4] = c;
                let (sh, ch) = (math::sinh(v), math::cosh(v));
                PatchPoint {
                    pos: Vec4::new(r.val * ch, x2.val, r.val * sh, x4.val),
                    zu: Vec4::new(r.d1 * ch, x2.d1, r.d1 * sh, x4.d1),
                    zv: Vec4::new(r.val * sh, 0.0, r.val * ch, 0.0),
                    zuu: Vec4::new(r.d2 * ch, x2.d2, r.d2 * sh, x4.d2),
                    zuv: Vec4::new(r.d1 * sh, 0.0, r.d1 * ch, 0.0),
                    zvv: Vec4::new(r.val * ch, 0.0, r.val * sh, 0.0),
                }
            }
            RotationType::Parabolic => {
                let [x1, f, g] = c;
                // z = x1 e₁ + f A(v) + g ξ₂ with A(v) = ξ₁ − v² ξ₂ + √2 v e₄
                let a = XI1 - XI2 * (v * v) + E4 * (SQRT_2 * v);
                let da = XI2 * (-2.0 * v) + E4 * SQRT_2;
                let dda = XI2 * -2.0;
                let lift = |x: f64, ff: f64, gg: f64| E1 * x + a * ff + XI2 * gg;
                PatchPoint {
                    pos: lift(x1.val, f.val, g.val),
                    zu: lift(x1.d1, f.d1, g.d1),
                    zv: da * f.val,
                    zuu: lift(x1.d2, f.d2, g.d2),
                    zuv: da * f.d1,
                    zvv: dda * f.val,
                }
            }
        })
    }
}

fn require(ok: bool, what: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(what))
    }
}

/// The adapted frame `X = z_u`, `Y = z_v / r` with
/// `n₁ = (−x₂′, x₁′, 0, 0)/√(1+(r′)²)` and
/// `n₂ = (r′x₁′, r′x₂′, (1+(r′)²) cos v, (1+(r′)²) sin v)/√(1+(r′)²)`.
pub fn elliptic_frame(curve: &GeneratingCurve, u: f64, v: f64) -> Result<Frame> {
    require(
        curve.kind == RotationType::Elliptic,
        "elliptic_frame needs an elliptic curve",
    )?;
    let [x1, x2, r] = curve.components(u)?;
    let s2 = 1.0 + r.d1 * r.d1;
    let s = math::sqrt(s2);
    let (sn, cs) = (math::sin(v), math::cos(v));
    Ok(Frame {
        x: Vec4::new(x1.d1, x2.d1, r.d1 * cs, r.d1 * sn),
        y: Vec4::new(0.0, 0.0, -sn, cs),
        n1: Vec4::new(-x2.d1, x1.d1, 0.0, 0.0) / s,
        n2: Vec4::new(r.d1 * x1.d1, r.d1 * x2.d1, s2 * cs, s2 * sn) / s,
        eps1: Sign::Plus,
        eps2: Sign::Minus,
    })
}

/// The adapted frame for hyperbolic surfaces, `ε = sign((r′)² − 1)`:
/// `n₁ = (0, x₄′, 0, x₂′)/√(ε((r′)²−1))`,
/// `n₂ = ((1−(r′)²) cosh v, −r′x₂′, (1−(r′)²) sinh v, −r′x₄′)/√(ε((r′)²−1))`.
pub fn hyperbolic_frame(curve: &GeneratingCurve, u: f64, v: f64) -> Result<Frame> {
    let eps = curve.kind.slope_sign().ok_or(Error::InvalidParameter(
        "hyperbolic_frame needs a hyperbolic curve",
    ))?;
    let [r, x2, x4] = curve.components(u)?;
    let d = check_slope(r, eps, u)?;
    let k = math::sqrt(eps * d);
    let (sh, ch) = (math::sinh(v), math::cosh(v));
    Ok(Frame {
        x: Vec4::new(r.d1 * ch, x2.d1, r.d1 * sh, x4.d1),
        y: Vec4::new(sh, 0.0, ch, 0.0),
        n1: Vec4::new(0.0, x4.d1, 0.0, x2.d1) / k,
        n2: Vec4::new(-d * ch, -r.d1 * x2.d1, -d * sh, -r.d1 * x4.d1) / k,
        eps1: Sign::of(eps),
        eps2: Sign::of(-eps),
    })
}

/// Closed-form mean curvature of an elliptic surface:
/// `H = (r κ n₁ + (r r″ + (r′)² + 1) n₂) / (2 r √(1+(r′)²))` with
/// `κ = x₁′x₂″ − x₁″x₂′`, and
/// `⟨H,H⟩ = (r²κ² − (r r″ + (r′)² + 1)²) / (4 r² (1+(r′)²))`.
pub fn elliptic_h_closed(curve: &GeneratingCurve, u: f64, v: f64) -> Result<MeanCurvature> {
    let frame = elliptic_frame(curve, u, v)?;
    let [x1, x2, r] = curve.components(u)?;
    let kappa = x1.d1 * x2.d2 - x1.d2 * x2.d1;
    let s2 = 1.0 + r.d1 * r.d1;
    let k = r.val * r.d2 + r.d1 * r.d1 + 1.0;
    let scale = 1.0 / (2.0 * r.val * math::sqrt(s2));
    let h = (frame.n1 * (r.val * kappa) + frame.n2 * k) * scale;
    let h2 = (r.val * r.val * kappa * kappa - k * k) / (4.0 * r.val * r.val * s2);
    Ok(MeanCurvature { h, h2 })
}

/// Closed-form mean curvature of a hyperbolic surface:
/// `H = ε (r κ n₁ − (r r″ + (r′)² − 1) n₂) / (2 r √(ε((r′)²−1)))` with
/// `κ = x₄′x₂″ − x₄″x₂′`; `⟨H,H⟩` follows from `⟨n₁,n₁⟩ = ε`, `⟨n₂,n₂⟩ = −ε`.
pub fn hyperbolic_h_closed(curve: &GeneratingCurve, u: f64, v: f64) -> Result<MeanCurvature> {
    let frame = hyperbolic_frame(curve, u, v)?;
    let eps = frame.eps1.value();
    let [r, x2, x4] = curve.components(u)?;
    let kappa = x4.d1 * x2.d2 - x4.d2 * x2.d1;
    let d = r.d1 * r.d1 - 1.0;
    let k = r.val * r.d2 + d;
    let c1 = eps * r.val * kappa / (2.0 * r.val * math::sqrt(eps * d));
    let c2 = -eps * k / (2.0 * r.val * math::sqrt(eps * d));
    let h = frame.n1 * c1 + frame.n2 * c2;
    let h2 = eps * c1 * c1 - eps * c2 * c2;
    Ok(MeanCurvature { h, h2 })
}

/// `⟨H,H⟩ = (f² (x₁″f′ − x₁′f″)² − (f f″ + (f′)²)²) / (4 f² (f′)²)` for a
/// parabolic surface. Only the scalar has a closed form; the vector comes
/// from the numeric kernel.
pub fn parabolic_h2_closed(curve: &GeneratingCurve, u: f64) -> Result<f64> {
    require(
        curve.kind == RotationType::Parabolic,
        "parabolic_h2_closed needs a parabolic curve",
    )?;
    let [x1, f, _] = curve.components(u)?;
    let ff = f.val * f.d1;
    if ff == 0.0 {
        return Err(Error::ZeroDerivativeProfile { u });
    }
    let w = x1.d2 * f.d1 - x1.d1 * f.d2;
    let k = f.val * f.d2 + f.d1 * f.d1;
    Ok((f.val * f.val * w * w - k * k) / (4.0 * ff * ff))
}

/// `⟨H,H⟩` from the closed-form expression of whichever type `curve` is.
pub fn h2_closed(curve: &GeneratingCurve, u: f64) -> Result<f64> {
    match curve.kind {
        RotationType::Elliptic => elliptic_h_closed(curve, u, 0.0).map(|m| m.h2),
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            hyperbolic_h_closed(curve, u, 0.0).map(|m| m.h2)
        }
        RotationType::Parabolic => parabolic_h2_closed(curve, u),
    }
}

/// The closed-form adapted frame for elliptic or hyperbolic curves.
pub fn closed_frame(curve: &GeneratingCurve, u: f64, v: f64) -> Result<Frame> {
    match curve.kind {
        RotationType::Elliptic => elliptic_frame(curve, u, v),
        RotationType::HyperbolicA | RotationType::HyperbolicB => hyperbolic_frame(curve, u, v),
        RotationType::Parabolic => Err(Error::InvalidParameter(
            "no closed-form frame for parabolic surfaces",
        )),
    }
}

/// Coefficients of a vector in the frame `{X, Y, n₁, n₂}`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameCoeffs {
    pub x: f64,
    pub y: f64,
    pub n1: f64,
    pub n2: f64,
}

impl FrameCoeffs {
    /// Expand `w` in `frame` using the frame's inner-product signs.
    pub fn expand(frame: &Frame, w: Vec4) -> Self {
        use crate::geometry::inner;
        Self {
            x: inner(w, frame.x),
            y: -inner(w, frame.y),
            n1: frame.eps1.value() * inner(w, frame.n1),
            n2: frame.eps2.value() * inner(w, frame.n2),
        }
    }

    pub fn max_abs_diff(&self, o: &FrameCoeffs) -> f64 {
        (self.x - o.x)
            .abs()
            .max((self.y - o.y).abs())
            .max((self.n1 - o.n1).abs())
            .max((self.n2 - o.n2).abs())
    }
}

/// Ambient derivatives of the elliptic normal frame along `X` and `Y`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WeingartenTable {
    pub x_n1: FrameCoeffs,
    pub y_n1: FrameCoeffs,
    pub x_n2: FrameCoeffs,
    pub y_n2: FrameCoeffs,
}

/// With `s = √(1+(r′)²)` and `κ = x₁′x₂″ − x₁″x₂′`:
///
/// ```text
/// ∇′_X n₁ = −(κ/s) X + (r′κ/s²) n₂      ∇′_Y n₁ = 0
/// ∇′_X n₂ =  (r″/s) X + (r′κ/s²) n₁     ∇′_Y n₂ = (s/r) Y
/// ```
pub fn elliptic_weingarten(curve: &GeneratingCurve, u: f64) -> Result<WeingartenTable> {
    require(
        curve.kind == RotationType::Elliptic,
        "elliptic_weingarten needs an elliptic curve",
    )?;
    let [x1, x2, r] = curve.components(u)?;
    let kappa = x1.d1 * x2.d2 - x1.d2 * x2.d1;
    let s2 = 1.0 + r.d1 * r.d1;
    let s = math::sqrt(s2);
    let twist = r.d1 * kappa / s2;
    Ok(WeingartenTable {
        x_n1: FrameCoeffs {
            x: -kappa / s,
            n2: twist,
            ..Default::default()
        },
        y_n1: FrameCoeffs::default(),
        x_n2: FrameCoeffs {
            x: r.d2 / s,
            n1: twist,
            ..Default::default()
        },
        y_n2: FrameCoeffs {
            y: s / r.val,
            ..Default::default()
        },
    })
}

/// Whether a curve's surface lies in a hyperplane.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DegeneracyReport {
    pub kind: RotationType,
    /// `max |x₁′x₂″ − x₁″x₂′|` (elliptic), `max |x₂′x₄″ − x₂″x₄′|`
    /// (hyperbolic) or `max |x₁″f′ − x₁′f″|` (parabolic) over the samples.
    pub max_abs_twist: f64,
    pub degenerate: bool,
    pub samples: usize,
}

/// Tolerance on the twist term below which a curve counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Detects the case where `n₁` (or its hyperbolic / parabolic analogue) is
/// constant, i.e. the surface lies in the hyperplane spanned by `X, Y, n₂`.
pub fn hyperplane_degeneracy(curve: &GeneratingCurve, samples: usize) -> Result<DegeneracyReport> {
    let mut worst: f64 = 0.0;
    let pts = curve.sample_points(samples.max(2));
    for &u in &pts {
        let c = curve.components(u)?;
        let twist = match curve.kind {
            RotationType::Elliptic => c[0].d1 * c[1].d2 - c[0].d2 * c[1].d1,
            RotationType::HyperbolicA | RotationType::HyperbolicB => {
                c[1].d1 * c[2].d2 - c[1].d2 * c[2].d1
            }
            RotationType::Parabolic => c[0].d2 * c[1].d1 - c[0].d1 * c[1].d2,
        };
        worst = worst.max(twist.abs());
    }
    Ok(DegeneracyReport {
        kind: curve.kind,
        max_abs_twist: worst,
        degenerate: worst <= DEGENERACY_TOL,
        samples: pts.len(),
    })
}
