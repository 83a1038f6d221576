//! Lorentz surface patches in E⁴₂: first and second fundamental forms,
//! orthonormal frames and the mean curvature vector, for any patch that can
//! report its partial derivatives. [`FdPatch`] supplies those partials by
//! central differences from positions alone and serves as the independent
//! oracle for the analytic constructions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{inner, orthonormalize_indefinite, Sign, Vec4, BASIS};
use crate::math;

/// Band used when orthonormalizing numeric frames.
pub const FRAME_TAU: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Rect {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl Rect {
    pub fn new(u: (f64, f64), v: (f64, f64)) -> Self {
        Self { u, v }
    }

    pub fn contains(&self, u: f64, v: f64) -> bool {
        let within = |x: f64, (a, b): (f64, f64)| {
            let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
            x >= a - slack && x <= b + slack
        };
        within(u, self.u) && within(v, self.v)
    }

    /// The same rectangle with `margin_u` / `margin_v` removed on every side.
    pub fn shrink(&self, margin_u: f64, margin_v: f64) -> Rect {
        Rect::new(
            (self.u.0 + margin_u, self.u.1 - margin_u),
            (self.v.0 + margin_v, self.v.1 - margin_v),
        )
    }
}

/// Position and partial derivatives up to second order at one parameter point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PatchPoint {
    pub pos: Vec4,
    pub zu: Vec4,
    pub zv: Vec4,
    pub zuu: Vec4,
    pub zuv: Vec4,
    pub zvv: Vec4,
}

pub trait SurfacePatch {
    fn domain(&self) -> Rect;

    fn eval(&self, u: f64, v: f64) -> Result<PatchPoint>;

    fn position(&self, u: f64, v: f64) -> Result<Vec4> {
        self.eval(u, v).map(|p| p.pos)
    }
}

impl<P: SurfacePatch + ?Sized> SurfacePatch for &P {
    fn domain(&self) -> Rect {
        (**self).domain()
    }
    fn eval(&self, u: f64, v: f64) -> Result<PatchPoint> {
        (**self).eval(u, v)
    }
    fn position(&self, u: f64, v: f64) -> Result<Vec4> {
        (**self).position(u, v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FirstFundamentalForm {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FirstFundamentalForm {
    pub fn of(p: &PatchPoint) -> Self {
        Self {
            e: inner(p.zu, p.zu),
            f: inner(p.zu, p.zv),
            g: inner(p.zv, p.zv),
        }
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    /// Lorentzian (signature (1,1)) with a small relative margin.
    pub fn is_lorentz(&self) -> bool {
        let scale = (self.e * self.g).abs() + self.f * self.f;
        self.det() < -1e-12 * scale
    }
}

pub fn first_fundamental_form<P: SurfacePatch + ?Sized>(
    patch: &P,
    u: f64,
    v: f64,
) -> Result<FirstFundamentalForm> {
    let p = patch.eval(u, v)?;
    lorentz_form(&p, u, v)
}

fn lorentz_form(p: &PatchPoint, u: f64, v: f64) -> Result<FirstFundamentalForm> {
    let form = FirstFundamentalForm::of(p);
    if form.is_lorentz() {
        Ok(form)
    } else {
        Err(Error::NonLorentzMetric { u, v })
    }
}

/// An orthonormal frame `{X, Y, n₁, n₂}` with `⟨X,X⟩ = 1`, `⟨Y,Y⟩ = −1` and
/// `⟨nᵢ, nᵢ⟩ = epsᵢ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub x: Vec4,
    pub y: Vec4,
    pub n1: Vec4,
    pub n2: Vec4,
    pub eps1: Sign,
    pub eps2: Sign,
}

impl Frame {
    /// Largest deviation of the ten pairwise inner products from their table,
    /// each divided by the product of the two vectors' Euclidean norms.
    ///
    /// Unit vectors of an indefinite metric can be arbitrarily long in
    /// coordinates, and an inner product of vectors of length `M` carries a
    /// rounding error near `M²·ε`; the scaling measures the frame rather
    /// than that rounding. For frames with coordinates of order one it is
    /// the plain deviation.
    pub fn table_residual(&self) -> f64 {
        let v = [self.x, self.y, self.n1, self.n2];
        let diag = [1.0, -1.0, self.eps1.value(), self.eps2.value()];
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in i..4 {
                let want = if i == j { diag[i] } else { 0.0 };
                let scale = (v[i].euclidean_norm() * v[j].euclidean_norm()).max(1.0);
                let dev = (inner(v[i], v[j]) - want).abs() / scale;
                worst = if dev.is_nan() {
                    f64::NAN
                } else {
                    worst.max(dev)
                };
            }
        }
        worst
    }

    /// Normal component of `w`.
    pub fn normal_part(&self, w: Vec4) -> Vec4 {
        self.n1 * (self.eps1.value() * inner(w, self.n1))
            + self.n2 * (self.eps2.value() * inner(w, self.n2))
    }

    /// Orthogonal projector onto the normal plane, as a 4×4 matrix acting on
    /// coordinate vectors. Two frames span the same normal plane exactly when
    /// their projectors agree.
    pub fn normal_projector(&self) -> [[f64; 4]; 4] {
        let cols = BASIS.map(|e| self.normal_part(e));
        core::array::from_fn(|i| core::array::from_fn(|j| cols[j][i]))
    }
}

/// Unit spacelike `X` and unit timelike `Y` spanning the tangent plane.
///
/// When `z_u` is spacelike, `X = z_u/√E` and `Y` is the normalized residual
/// of `z_v`, so that for `E = 1, F = 0` this is `X = z_u`, `Y = z_v/√(−G)`.
pub fn tangent_frame<P: SurfacePatch + ?Sized>(patch: &P, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
    let p = patch.eval(u, v)?;
    tangent_frame_at(&p, u, v)
}

fn tangent_frame_at(p: &PatchPoint, u: f64, v: f64) -> Result<(Vec4, Vec4)> {
    let form = lorentz_form(p, u, v)?;
    let (a, b) = if form.e > 0.0 {
        (p.zu, p.zv)
    } else if form.g > 0.0 {
        (p.zv, p.zu)
    } else {
        // Both partials timelike or null: use the eigenvector of the positive
        // eigenvalue of [[E, F], [F, G]] as the spacelike direction.
        let half_tr = 0.5 * (form.e + form.g);
        let lam = half_tr + math::sqrt(half_tr * half_tr - form.det());
        let (cu, cv) = if form.f.abs() > 0.0 {
            (form.f, lam - form.e)
        } else {
            (1.0, 0.0)
        };
        (p.zu * cu + p.zv * cv, p.zu)
    };
    let xn = inner(a, a);
    if !(xn > 0.0) {
        return Err(Error::NonLorentzMetric { u, v });
    }
    let x = a / math::sqrt(xn);
    let w = b - x * inner(b, x);
    let yn = inner(w, w);
    if !(yn < 0.0) {
        return Err(Error::NonLorentzMetric { u, v });
    }
    Ok((x, w / math::sqrt(-yn)))
}

/// Normal frame by indefinite Gram-Schmidt of `{X, Y, w₁, w₂}`, where the
/// seeds `wᵢ` are standard basis vectors, tried in order of increasing
/// Euclidean size of their tangential projection.
pub fn normal_frame_numeric<P: SurfacePatch + ?Sized>(patch: &P, u: f64, v: f64) -> Result<Frame> {
    let p = patch.eval(u, v)?;
    numeric_frame_at(&p, u, v)
}

fn numeric_frame_at(p: &PatchPoint, u: f64, v: f64) -> Result<Frame> {
    let (x, y) = tangent_frame_at(p, u, v)?;
    let tangential = |e: Vec4| (x * inner(e, x) - y * inner(e, y)).euclidean_norm();
    let mut order: [(f64, usize); 4] = core::array::from_fn(|i| (tangential(BASIS[i]), i));
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let (a, b) = (order[i], order[j]);
            pairs.push((a.0 + b.0, a.1.min(b.1), a.1.max(b.1)));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for &(_, i, j) in &pairs {
        match orthonormalize_indefinite(&[x, y, BASIS[i], BASIS[j]], FRAME_TAU) {
            Ok(out) => {
                return Ok(Frame {
                    x,
                    y,
                    n1: out[2].0,
                    n2: out[3].0,
                    eps1: out[2].1,
                    eps2: out[3].1,
                });
            }
            Err(Error::DegenerateFrame) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SingularPoint { u, v })
}

/// `σ(X,X)`, `σ(X,Y)`, `σ(Y,Y)`, each a normal vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondFundamentalForm {
    pub xx: Vec4,
    pub xy: Vec4,
    pub yy: Vec4,
}

/// Second fundamental form in the tangent directions of `frame`.
///
/// With `X = α z_u + β z_v` (and likewise for `Y`), `σ(X, Y)` is the normal
/// part of `αα′ z_uu + (αβ′ + βα′) z_uv + ββ′ z_vv`; derivatives of the
/// coefficients multiply tangent vectors and drop out.
pub fn second_fundamental_form<P: SurfacePatch + ?Sized>(
    patch: &P,
    frame: &Frame,
    u: f64,
    v: f64,
) -> Result<SecondFundamentalForm> {
    let p = patch.eval(u, v)?;
    sff_at(&p, frame, u, v)
}

fn sff_at(p: &PatchPoint, frame: &Frame, u: f64, v: f64) -> Result<SecondFundamentalForm> {
    let form = lorentz_form(p, u, v)?;
    let det = form.det();
    let coeffs = |t: Vec4| {
        let (tu, tv) = (inner(t, p.zu), inner(t, p.zv));
        (
            (tu * form.g - tv * form.f) / det,
            (tv * form.e - tu * form.f) / det,
        )
    };
    let (xa, xb) = coeffs(frame.x);
    let (ya, yb) = coeffs(frame.y);
    let nuu = frame.normal_part(p.zuu);
    let nuv = frame.normal_part(p.zuv);
    let nvv = frame.normal_part(p.zvv);
    let sigma =
        |a: f64, b: f64, c: f64, d: f64| nuu * (a * c) + nuv * (a * d + b * c) + nvv * (b * d);
    Ok(SecondFundamentalForm {
        xx: sigma(xa, xb, xa, xb),
        xy: sigma(xa, xb, ya, yb),
        yy: sigma(ya, yb, ya, yb),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanCurvature {
    pub h: Vec4,
    /// `⟨H, H⟩`.
    pub h2: f64,
}

impl MeanCurvature {
    pub fn new(h: Vec4) -> Self {
        Self { h, h2: inner(h, h) }
    }
}

/// `H = ½ (σ(X,X) − σ(Y,Y))`: the metric trace over a frame with
/// `⟨X,X⟩ = 1`, `⟨Y,Y⟩ = −1`.
pub fn mean_curvature_in_frame<P: SurfacePatch + ?Sized>(
    patch: &P,
    frame: &Frame,
    u: f64,
    v: f64,
) -> Result<MeanCurvature> {
    let s = second_fundamental_form(patch, frame, u, v)?;
    Ok(MeanCurvature::new((s.xx - s.yy) * 0.5))
}

/// Mean curvature using the numeric normal frame.
pub fn mean_curvature<P: SurfacePatch + ?Sized>(
    patch: &P,
    u: f64,
    v: f64,
) -> Result<MeanCurvature> {
    let p = patch.eval(u, v)?;
    let frame = numeric_frame_at(&p, u, v)?;
    let s = sff_at(&p, &frame, u, v)?;
    Ok(MeanCurvature::new((s.xx - s.yy) * 0.5))
}

/// Partials of a position map by second-order central differences.
pub struct FdPatch<F> {
    map: F,
    domain: Rect,
    h: f64,
}

/// Wrap a position map `(u, v) ↦ z(u, v)` as a patch whose derivatives come
/// from central differences with step `h`; error `O(h²)`.
pub fn fd_patch<F>(map: F, domain: Rect, h: f64) -> Result<FdPatch<F>>
where
    F: Fn(f64, f64) -> Result<Vec4>,
{
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(
            "finite-difference step must be positive",
        ));
    }
    Ok(FdPatch { map, domain, h })
}

/// Finite-difference oracle over the positions of another patch.
pub fn fd_oracle<P: SurfacePatch>(
    patch: &P,
    h: f64,
) -> Result<FdPatch<impl Fn(f64, f64) -> Result<Vec4> + '_>> {
    fd_patch(move |u, v| patch.position(u, v), patch.domain(), h)
}

impl<F> FdPatch<F> {
    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn with_step(self, h: f64) -> Self {
        Self { h, ..self }
    }
}

impl<F> SurfacePatch for FdPatch<F>
where
    F: Fn(f64, f64) -> Result<Vec4>,
{
    fn domain(&self) -> Rect {
        self.domain
    }

    fn position(&self, u: f64, v: f64) -> Result<Vec4> {
        let z = (self.map)(u, v)?;
        if !z.is_finite() {
            return Err(Error::SingularPoint { u, v });
        }
        Ok(z)
    }

    fn eval(&self, u: f64, v: f64) -> Result<PatchPoint> {
        let h = self.h;
        if !self.domain.contains(u - h, v - h) || !self.domain.contains(u + h, v + h) {
            return Err(Error::StencilOutOfDomain { u, v });
        }
        let z = |du: f64, dv: f64| self.position(u + du, v + dv);
        let c = z(0.0, 0.0)?;
        let (up, um, vp, vm) = (z(h, 0.0)?, z(-h, 0.0)?, z(0.0, h)?, z(0.0, -h)?);
        let (pp, pm, mp, mm) = (z(h, h)?, z(h, -h)?, z(-h, h)?, z(-h, -h)?);
        Ok(PatchPoint {
            pos: c,
            zu: (up - um) / (2.0 * h),
            zv: (vp - vm) / (2.0 * h),
            zuu: (up - c * 2.0 + um) / (h * h),
            zvv: (vp - c * 2.0 + vm) / (h * h),
            zuv: (pp - pm - mp + mm) / (4.0 * h * h),
        })
    }
}
