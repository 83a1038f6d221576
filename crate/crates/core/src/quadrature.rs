//! Adaptive Simpson quadrature for small vector-valued integrands.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    /// Number of uniform knot segments a generated curve stores cumulative
    /// integrals at; evaluation between knots integrates from the nearest one.
    pub segments: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_depth: 40,
            segments: 64,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "quadrature tolerances must be positive",
            ));
        }
        if self.max_depth == 0 || self.segments == 0 {
            return Err(Error::InvalidParameter(
                "quadrature depth and segment count must be positive",
            ));
        }
        Ok(())
    }
}

fn axpy<const N: usize>(a: [f64; N], s: f64, b: [f64; N]) -> [f64; N] {
    core::array::from_fn(|i| a[i] + s * b[i])
}

fn max_abs<const N: usize>(a: [f64; N]) -> f64 {
    // `f64::max` drops NaN, which would hide a blown-up panel.
    a.iter().fold(
        0.0,
        |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) },
    )
}

struct Panel<const N: usize> {
    a: f64,
    b: f64,
    fa: [f64; N],
    fm: [f64; N],
    fb: [f64; N],
    whole: [f64; N],
}

fn simpson<const N: usize>(h: f64, fa: [f64; N], fm: [f64; N], fb: [f64; N]) -> [f64; N] {
    core::array::from_fn(|i| h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]))
}

/// `∫ₐᵇ f` componentwise, refining until the Simpson estimates on the two
/// halves of every panel agree to within the tolerance share of that panel.
/// `b < a` is allowed and yields the negated integral.
pub fn adaptive_simpson<const N: usize, F>(
    mut f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    if a == b {
        return Ok([0.0; N]);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = simpson(b - a, fa, fm, fb);
    let tol = cfg.abs_tol.max(cfg.rel_tol * max_abs(whole));
    recurse(
        &mut f,
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
        },
        tol,
        cfg.max_depth,
        cfg,
    )
}

fn recurse<const N: usize, F>(
    f: &mut F,
    p: Panel<N>,
    tol: f64,
    depth: u32,
    cfg: &QuadratureConfig,
) -> Result<[f64; N]>
where
    F: FnMut(f64) -> Result<[f64; N]>,
{
    let m = 0.5 * (p.a + p.b);
    let (lm, rm) = (0.5 * (p.a + m), 0.5 * (m + p.b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = simpson(m - p.a, p.fa, flm, p.fm);
    let right = simpson(p.b - m, p.fm, frm, p.fb);
    let both: [f64; N] = core::array::from_fn(|i| left[i] + right[i]);
    let diff: [f64; N] = core::array::from_fn(|i| both[i] - p.whole[i]);
    let err = max_abs(diff);
    if !err.is_finite() {
        return Err(Error::QuadratureFailure { a: p.a, b: p.b });
    }
    // One forced split so a coincidentally flat three-point sample cannot pass.
    if err <= 15.0 * tol && depth < cfg.max_depth {
        return Ok(axpy(both, 1.0 / 15.0, diff));
    }
    if depth == 0 {
        return Err(Error::QuadratureFailure { a: p.a, b: p.b });
    }
    let l = recurse(
        f,
        Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        },
        0.5 * tol,
        depth - 1,
        cfg,
    )?;
    let r = recurse(
        f,
        Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        },
        0.5 * tol,
        depth - 1,
        cfg,
    )?;
    Ok(core::array::from_fn(|i| l[i] + r[i]))
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    adaptive_simpson::<1, _>(|x| Ok([f(x)?]), a, b, cfg).map(|r| r[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn polynomials_up_to_cubic_are_exact() {
        let cfg = QuadratureConfig::default();
        let v = integrate(|x| Ok(x * x * x - 2.0 * x + 1.0), 0.0, 2.0, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn smooth_integrands_meet_tolerance() {
        let cfg = QuadratureConfig::default();
        let v = integrate(|x| Ok(math::sin(x)), 0.0, math::PI, &cfg).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
        let v = integrate(|x| Ok(math::exp(-x * x)), -1.0, 1.0, &cfg).unwrap();
        assert!((v - 1.493_648_265_624_854).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_negate() {
        let cfg = QuadratureConfig::default();
        let f = |x: f64| Ok(math::cos(x) + x);
        let a = integrate(f, 0.3, 1.7, &cfg).unwrap();
        let b = integrate(f, 1.7, 0.3, &cfg).unwrap();
        assert!((a + b).abs() < 1e-14);
    }

    #[test]
    fn vector_integrand() {
        let cfg = QuadratureConfig::default();
        let [s, c] =
            adaptive_simpson(|x| Ok([math::sin(x), math::cos(x)]), 0.0, 1.0, &cfg).unwrap();
        assert!((s - (1.0 - math::cos(1.0))).abs() < 1e-10);
        assert!((c - math::sin(1.0)).abs() < 1e-10);
    }

    #[test]
    fn singular_integrand_fails_cleanly() {
        let cfg = QuadratureConfig {
            max_depth: 12,
            ..Default::default()
        };
        let r = integrate(|x| Ok(1.0 / math::sqrt(x.abs())), -1.0, 1.0, &cfg);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }

    #[test]
    fn integrand_errors_propagate() {
        let cfg = QuadratureConfig::default();
        let r = integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::NegativeRadicand { u: x })
                } else {
                    Ok(1.0)
                }
            },
            0.0,
            1.0,
            &cfg,
        );
        assert!(matches!(r, Err(Error::NegativeRadicand { .. })));
    }
}
