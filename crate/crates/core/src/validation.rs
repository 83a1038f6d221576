//! Cross-checks for constructed surfaces and machine-readable reports.
//!
//! Every check runs point by point over a [`GridSpec`] and reduces with `max`,
//! so results do not depend on evaluation order. Points where a check cannot
//! run (singular frames, stencils leaving the domain, ...) are recorded as
//! [`FlaggedPoint`]s rather than aborting the report.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::builders::{closed_frame, h2_closed, hyperplane_degeneracy, RotationalPatch};
use crate::curve::{linspace, GeneratingCurve, RotationType};
use crate::dsl::{Constants, ProfileFunction};
use crate::error::{Error, Result};
use crate::generator::{angle_integrand, special_phi, CmcParams, SpecialConstants};
use crate::geometry::{inner, Sign, Vec4};
use crate::jet::Jet2;
use crate::math;
use crate::surface::{
    fd_oracle, mean_curvature, mean_curvature_in_frame, normal_frame_numeric,
    second_fundamental_form, MeanCurvature, Rect, SurfacePatch,
};

/// Default grid resolution in each direction.
pub const DEFAULT_GRID: usize = 41;
/// Default finite-difference step of the oracle.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Grid margin, in finite-difference steps, kept clear on every side.
pub const STENCIL_MARGIN: f64 = 4.0;
/// Curve samples used for the arc-length and degeneracy checks.
pub const CURVE_SAMPLES: usize = 201;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tolerances {
    /// `|⟨H,H⟩ − target|` with analytic jets.
    pub cmc: f64,
    /// `|⟨H,H⟩ − target|` through the finite-difference oracle.
    pub cmc_fd: f64,
    pub arclength: f64,
    /// Inner-product table of numeric frames.
    pub frame: f64,
    /// Closed-form frames; only meaningful for elliptic and hyperbolic patches.
    pub closed_frame: f64,
    /// `|σ(X,Y)|`.
    pub sigma_xy: f64,
    /// Closed-form mean curvature against the analytic-jet kernel, relative.
    pub closed_vs_oracle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cmc: 1e-6,
            cmc_fd: 1e-4,
            arclength: 1e-9,
            frame: 1e-10,
            closed_frame: 1e-12,
            sigma_xy: 1e-9,
            closed_vs_oracle: 1e-6,
        }
    }
}

/// A tensor grid `nu × nv` over `u_window × v_window`, endpoints included.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
    pub u_window: (f64, f64),
    pub v_window: (f64, f64),
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize, u_window: (f64, f64), v_window: (f64, f64)) -> Self {
        Self {
            nu,
            nv,
            u_window,
            v_window,
        }
    }

    /// `n × n` over `domain` shrunk by [`STENCIL_MARGIN`] steps of `fd_step`.
    pub fn for_domain(domain: Rect, n: usize, fd_step: f64) -> Self {
        let m = STENCIL_MARGIN * fd_step;
        let r = domain.shrink(m, m);
        Self::new(n, n, r.u, r.v)
    }

    pub fn u_values(&self) -> Vec<f64> {
        linspace(self.u_window.0, self.u_window.1, self.nu)
    }

    pub fn v_values(&self) -> Vec<f64> {
        linspace(self.v_window.0, self.v_window.1, self.nv)
    }

    /// Row-major (`u` outer) grid points.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let vs = self.v_values();
        self.u_values()
            .into_iter()
            .flat_map(|u| vs.iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |(a, b): (f64, f64)| a.is_finite() && b.is_finite() && a <= b;
        if self.nu == 0 || self.nv == 0 || !ok(self.u_window) || !ok(self.v_window) {
            return Err(Error::InvalidParameter(
                "grid needs positive sizes and ordered finite windows",
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FlaggedPoint {
    pub u: f64,
    pub v: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ValidationReport {
    pub surface_id: String,
    pub kind: RotationType,
    pub grid: GridSpec,
    pub fd_step: Option<f64>,
    pub target_h2: f64,
    pub max_cmc_residual: f64,
    pub max_cmc_residual_fd: Option<f64>,
    pub max_arclength_residual: f64,
    pub max_frame_residual: f64,
    pub max_closed_frame_residual: Option<f64>,
    pub max_sigma_xy: f64,
    pub max_closed_vs_oracle: f64,
    pub max_closed_vs_fd: Option<f64>,
    pub degenerate: bool,
    pub flagged_points: Vec<FlaggedPoint>,
}

impl ValidationReport {
    /// Every recorded maximum within `tol` and no flagged points.
    pub fn passed(&self, tol: &Tolerances) -> bool {
        self.failures(tol).is_empty()
    }

    /// Names of the checks that exceed their tolerance.
    pub fn failures(&self, tol: &Tolerances) -> Vec<&'static str> {
        let within = |x: f64, t: f64| x <= t;
        let mut out = Vec::new();
        if !within(self.max_cmc_residual, tol.cmc) {
            out.push("cmc");
        }
        if let Some(fd) = self.max_cmc_residual_fd {
            if !within(fd, tol.cmc_fd) {
                out.push("cmc-fd");
            }
        }
        if !within(self.max_arclength_residual, tol.arclength) {
            out.push("arclength");
        }
        if !within(self.max_frame_residual, tol.frame) {
            out.push("frame");
        }
        if let Some(c) = self.max_closed_frame_residual {
            if !within(c, tol.closed_frame) {
                out.push("closed-frame");
            }
        }
        if !within(self.max_sigma_xy, tol.sigma_xy) {
            out.push("sigma-xy");
        }
        if !within(self.max_closed_vs_oracle, tol.closed_vs_oracle) {
            out.push("closed-vs-oracle");
        }
        if let Some(c) = self.max_closed_vs_fd {
            if !within(c, tol.cmc_fd) {
                out.push("closed-vs-fd");
            }
        }
        if !self.flagged_points.is_empty() {
            out.push("flagged-points");
        }
        out
    }
}

/// `max` that lets NaN through, so a broken point cannot hide.
fn worst(acc: f64, x: f64) -> f64 {
    if x.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(x)
    }
}

/// Relative difference with the scale floored at 1.
fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Results of the CMC check alone.
#[derive(Clone, Debug, PartialEq)]
pub struct CmcCheck {
    pub max_residual: f64,
    pub max_residual_fd: Option<f64>,
    pub flagged: Vec<FlaggedPoint>,
}

fn flag(u: f64, v: f64, reason: impl ToString) -> FlaggedPoint {
    FlaggedPoint {
        u,
        v,
        reason: reason.to_string(),
    }
}

/// `⟨H,H⟩` through the oracle at step `h`, re-run at `h/2` when the residual
/// exceeds `tol_fd`; the point is flagged when the two steps disagree by more
/// than `10·tol_fd`, which marks a singularity rather than a CMC failure.
fn fd_h2<P: SurfacePatch>(
    patch: &P,
    h: f64,
    target: f64,
    tol_fd: f64,
    u: f64,
    v: f64,
) -> core::result::Result<f64, FlaggedPoint> {
    let at = |step: f64| {
        let oracle = fd_oracle(patch, step).map_err(|e| flag(u, v, e.code()))?;
        mean_curvature(&oracle, u, v)
            .map(|m| m.h2)
            .map_err(|e| flag(u, v, format!("fd-{}", e.code())))
    };
    let coarse = at(h)?;
    if (coarse - target).abs() > tol_fd {
        let fine = at(0.5 * h)?;
        if (coarse - fine).abs() > 10.0 * tol_fd {
            return Err(flag(u, v, "fd-unstable"));
        }
    }
    Ok(coarse)
}

/// `max |⟨H,H⟩ − target_h2|` over `grid`, with analytic partials and, when
/// `fd_step` is given, through the finite-difference oracle as well.
pub fn check_cmc<P: SurfacePatch>(
    patch: &P,
    target_h2: f64,
    grid: &GridSpec,
    fd_step: Option<f64>,
    tol: &Tolerances,
) -> Result<CmcCheck> {
    grid.validate()?;
    let mut out = CmcCheck {
        max_residual: 0.0,
        max_residual_fd: fd_step.map(|_| 0.0),
        flagged: Vec::new(),
    };
    for (u, v) in grid.points() {
        match mean_curvature(patch, u, v) {
            Ok(m) => out.max_residual = worst(out.max_residual, (m.h2 - target_h2).abs()),
            Err(e) => out.flagged.push(flag(u, v, e.code())),
        }
        if let (Some(h), Some(acc)) = (fd_step, out.max_residual_fd.as_mut()) {
            match fd_h2(patch, h, target_h2, tol.cmc_fd, u, v) {
                Ok(h2) => *acc = worst(*acc, (h2 - target_h2).abs()),
                Err(p) => out.flagged.push(p),
            }
        }
    }
    Ok(out)
}

/// `max |arc-length expression − 1|` over `samples`; parameters where the
/// curve cannot be evaluated count as infinite.
pub fn check_arclength(curve: &GeneratingCurve, samples: &[f64]) -> f64 {
    samples.iter().fold(0.0, |acc, &u| {
        worst(
            acc,
            curve.arclength_residual(u).map_or(f64::INFINITY, f64::abs),
        )
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameSource {
    /// Frames built by indefinite Gram-Schmidt from the partials.
    Numeric,
    /// The closed-form adapted frames of elliptic and hyperbolic patches.
    Closed,
}

/// Largest deviation of the ten frame inner products from their table over
/// `grid`. Points where no frame exists count as infinite.
pub fn check_frames(patch: &RotationalPatch, source: FrameSource, grid: &GridSpec) -> f64 {
    grid.points().into_iter().fold(0.0, |acc, (u, v)| {
        let frame = match source {
            FrameSource::Numeric => normal_frame_numeric(patch, u, v),
            FrameSource::Closed => closed_frame(patch.curve(), u, v),
        };
        worst(acc, frame.map_or(f64::INFINITY, |f| f.table_residual()))
    })
}

/// The unit normal metric-orthogonal to `σ(Y,Y)`, from the numeric frame
/// alone, with the sign fixed so its largest coordinate is positive.
///
/// On elliptic and hyperbolic patches `σ(Y,Y)` has no `n₁` component, so this
/// recovers the `n₁` of the adapted frame up to sign without consulting any
/// closed form.
pub fn numeric_n1<P: SurfacePatch>(patch: &P, u: f64, v: f64) -> Result<Vec4> {
    let frame = normal_frame_numeric(patch, u, v)?;
    let (e, f) = match (frame.eps1, frame.eps2) {
        (Sign::Plus, Sign::Minus) => (frame.n1, frame.n2),
        (Sign::Minus, Sign::Plus) => (frame.n2, frame.n1),
        _ => return Err(Error::SingularPoint { u, v }),
    };
    let w = second_fundamental_form(patch, &frame, u, v)?.yy;
    // w = a e + b f  ⟂  b e + a f
    let (a, b) = (inner(w, e), -inner(w, f));
    let n = e * b + f * a;
    let q = inner(n, n).abs();
    if !(q > 1e-24 * n.euclidean_norm_sq()) {
        return Err(Error::SingularPoint { u, v });
    }
    let n = n / math::sqrt(q);
    let lead = n
        .to_array()
        .into_iter()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    Ok(if lead < 0.0 { -n } else { n })
}

/// `max |n₁(p) − n₁(p₀)|` over `grid` for the field of [`numeric_n1`], `p₀`
/// the first grid point.
pub fn n1_variation<P: SurfacePatch>(patch: &P, grid: &GridSpec) -> Result<f64> {
    let pts = grid.points();
    let base = numeric_n1(patch, pts[0].0, pts[0].1)?;
    pts.into_iter().try_fold(0.0, |acc, (u, v)| {
        Ok(worst(acc, (numeric_n1(patch, u, v)? - base).max_abs()))
    })
}

/// Every parameter the full validation of `grid` evaluates the curve at:
/// grid rows, their oracle stencils at `h` and `h/2`, and `CURVE_SAMPLES`
/// points spread over the curve's domain.
pub fn evaluation_parameters(
    curve: &GeneratingCurve,
    grid: &GridSpec,
    fd_step: Option<f64>,
) -> Vec<f64> {
    let mut us = curve.sample_points(CURVE_SAMPLES);
    for u in grid.u_values() {
        us.push(u);
        if let Some(h) = fd_step {
            for d in [h, -h, 0.5 * h, -0.5 * h] {
                us.push(u + d);
            }
        }
    }
    us.sort_by(f64::total_cmp);
    us.dedup();
    us
}

/// Component jets at `us`, skipping parameters where the curve fails; the
/// failure resurfaces as a flagged point when that parameter is used.
pub fn tabulate(curve: &GeneratingCurve, us: &[f64]) -> Vec<(f64, [Jet2; 3])> {
    us.iter()
        .filter_map(|&u| curve.components(u).ok().map(|c| (u, c)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationOptions {
    /// Oracle step; `None` skips the finite-difference path.
    pub fd_step: Option<f64>,
    pub tolerances: Tolerances,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            fd_step: Some(DEFAULT_FD_STEP),
            tolerances: Tolerances::default(),
        }
    }
}

/// Run every check on `patch` against `target_h2` over `grid`.
///
/// Curves that are not already tabulated are evaluated once per parameter
/// from [`evaluation_parameters`]; quadrature-backed curves are expensive and
/// every check reuses the same rows.
pub fn validate(
    surface_id: &str,
    patch: &RotationalPatch,
    target_h2: f64,
    grid: &GridSpec,
    opts: &ValidationOptions,
) -> Result<ValidationReport> {
    grid.validate()?;
    if let Some(h) = opts.fd_step {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(
                "finite-difference step must be positive",
            ));
        }
    }
    let tabulated;
    let patch = if patch.curve().is_sampled() {
        patch
    } else {
        let us = evaluation_parameters(patch.curve(), grid, opts.fd_step);
        tabulated = patch.with_samples(tabulate(patch.curve(), &us))?;
        &tabulated
    };
    let curve = patch.curve();
    let tol = &opts.tolerances;
    let has_closed_frame = curve.kind != RotationType::Parabolic;

    let cmc = check_cmc(patch, target_h2, grid, opts.fd_step, tol)?;
    let mut flagged = cmc.flagged;
    let mut frame_res: f64 = 0.0;
    let mut closed_frame_res: f64 = 0.0;
    let mut sigma_xy: f64 = 0.0;
    let mut closed_vs_oracle: f64 = 0.0;
    let mut closed_vs_fd = opts.fd_step.map(|_| 0.0);
    let oracle = opts.fd_step.map(|h| fd_oracle(patch, h)).transpose()?;

    for (u, v) in grid.points() {
        let point = (|| -> Result<()> {
            let numeric = normal_frame_numeric(patch, u, v)?;
            frame_res = worst(frame_res, numeric.table_residual());
            let kernel = mean_curvature(patch, u, v)?;
            let closed = h2_closed(curve, u)?;
            let mut diff = rel_diff(closed, kernel.h2);
            let frame = if has_closed_frame {
                let f = closed_frame(curve, u, v)?;
                closed_frame_res = worst(closed_frame_res, f.table_residual());
                let m: MeanCurvature = match curve.kind {
                    RotationType::Elliptic => crate::builders::elliptic_h_closed(curve, u, v)?,
                    _ => crate::builders::hyperbolic_h_closed(curve, u, v)?,
                };
                diff = worst(diff, (m.h - kernel.h).max_abs() / kernel.h2.abs().max(1.0));
                // The mean curvature vector must not depend on the frame.
                let in_frame = mean_curvature_in_frame(patch, &f, u, v)?;
                diff = worst(
                    diff,
                    (in_frame.h - kernel.h).max_abs() / kernel.h2.abs().max(1.0),
                );
                f
            } else {
                numeric
            };
            closed_vs_oracle = worst(closed_vs_oracle, diff);
            sigma_xy = worst(
                sigma_xy,
                second_fundamental_form(patch, &frame, u, v)?.xy.max_abs(),
            );
            if let (Some(o), Some(acc)) = (oracle.as_ref(), closed_vs_fd.as_mut()) {
                if let Ok(m) = mean_curvature(o, u, v) {
                    *acc = worst(*acc, (closed - m.h2).abs());
                }
            }
            Ok(())
        })();
        if let Err(e) = point {
            if !flagged.iter().any(|p| p.u == u && p.v == v) {
                flagged.push(flag(u, v, e.code()));
            }
        }
    }
    flagged.sort_by(|a, b| a.u.total_cmp(&b.u).then(a.v.total_cmp(&b.v)));

    let samples = curve.sample_points(CURVE_SAMPLES);
    let degenerate = hyperplane_degeneracy(curve, CURVE_SAMPLES)
        .map(|d| d.degenerate)
        .unwrap_or(false);
    Ok(ValidationReport {
        surface_id: surface_id.to_string(),
        kind: curve.kind,
        grid: *grid,
        fd_step: opts.fd_step,
        target_h2,
        max_cmc_residual: cmc.max_residual,
        max_cmc_residual_fd: cmc.max_residual_fd,
        max_arclength_residual: check_arclength(curve, &samples),
        max_frame_residual: frame_res,
        max_closed_frame_residual: has_closed_frame.then_some(closed_frame_res),
        max_sigma_xy: sigma_xy,
        max_closed_vs_oracle: closed_vs_oracle,
        max_closed_vs_fd: closed_vs_fd,
        degenerate,
        flagged_points: flagged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Verdict {
    Consistent,
    ProbableMisprint,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpecialCaseReport {
    pub kind: RotationType,
    pub constants: SpecialConstants,
    pub params: CmcParams,
    pub interval: (f64, f64),
    pub samples: usize,
    /// `max |d/du closed form − integrand|` with the better of the two signs.
    pub max_discrepancy: f64,
    /// The same with the other sign in front of the integrand.
    pub max_discrepancy_other_sign: f64,
    /// `max |integrand|`, the scale the discrepancy is judged against.
    pub max_rate: f64,
    /// Sign in front of the integrand that matches the closed form better.
    pub eta_matched: Sign,
    pub verdict: Verdict,
}

/// Relative threshold for a [`Verdict::Consistent`] verdict.
pub const SPECIAL_CASE_TOL: f64 = 1e-6;
const SPECIAL_STEP: f64 = 1e-3;

/// Differentiate the closed-form angle of the special profile numerically
/// and compare it with the quadrature integrand at `samples` points of
/// `interval`. For parabolic curves the compared quantity is `ψ = φ/f′`.
pub fn compare_special_case(
    kind: RotationType,
    k: &SpecialConstants,
    params: &CmcParams,
    interval: (f64, f64),
    samples: usize,
) -> Result<SpecialCaseReport> {
    params.validate()?;
    if !(interval.0 < interval.1) || samples < 2 {
        return Err(Error::InvalidParameter(
            "special-case comparison needs a proper interval and two samples",
        ));
    }
    let mut consts = Constants::new();
    consts.insert("a".into(), k.a);
    consts.insert("b".into(), k.b);
    let h = SPECIAL_STEP.min(0.25 * (interval.1 - interval.0));
    let profile = ProfileFunction::parse(
        SpecialConstants::profile_text(kind),
        consts,
        (interval.0 - 2.0 * h, interval.1 + 2.0 * h),
    )?;
    let angle = |u: f64| -> Result<f64> {
        let phi = special_phi(kind, k, params, u)?;
        if kind == RotationType::Parabolic {
            Ok(phi / profile.eval(u)?.d1)
        } else {
            Ok(phi)
        }
    };
    // Fourth-order central difference.
    let derivative = |u: f64| -> Result<f64> {
        Ok(
            (angle(u - 2.0 * h)? - 8.0 * angle(u - h)? + 8.0 * angle(u + h)? - angle(u + 2.0 * h)?)
                / (12.0 * h),
        )
    };
    let (mut same, mut other, mut scale) = (0.0, 0.0, 0.0);
    for u in linspace(interval.0, interval.1, samples) {
        let d = derivative(u)?;
        let rate = angle_integrand(kind, &profile, params, u)?;
        same = worst(same, (d - rate).abs());
        other = worst(other, (d + rate).abs());
        scale = worst(scale, rate.abs());
    }
    let (best, rest, eta_matched) = if same <= other {
        (same, other, params.eta)
    } else {
        (other, same, params.eta.flip())
    };
    let verdict = if best <= SPECIAL_CASE_TOL * (1.0 + scale) {
        Verdict::Consistent
    } else {
        Verdict::ProbableMisprint
    };
    Ok(SpecialCaseReport {
        kind,
        constants: *k,
        params: *params,
        interval,
        samples,
        max_discrepancy: best,
        max_discrepancy_other_sign: rest,
        max_rate: scale,
        eta_matched,
        verdict,
    })
}
