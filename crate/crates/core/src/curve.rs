//! Generating curves: three jet-valued component functions of the arc-length
//! parameter, tagged with the kind of rotation that sweeps them.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dsl::{eval_jet, Constants, Expr};
use crate::error::{Error, Result};
use crate::jet::Jet2;

/// Arc-length residual allowed by [`GeneratingCurve::check_invariants`].
pub const ARCLENGTH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub enum RotationType {
    /// Rotation about the Euclidean plane `Oe₁e₂`; curve `(x1, x2, r, 0)`.
    Elliptic,
    /// Hyperbolic rotation about `Oe₂e₄` with `(r′)² > 1`; curve `(r, x2, 0, x4)`.
    HyperbolicA,
    /// Hyperbolic rotation about `Oe₂e₄` with `(r′)² < 1`.
    HyperbolicB,
    /// Rotation fixing the degenerate plane `span{e₁, ξ₁}`; curve `x1 e₁ + f ξ₁ + g ξ₂`.
    Parabolic,
}

impl RotationType {
    pub const ALL: [RotationType; 4] = [
        RotationType::Elliptic,
        RotationType::HyperbolicA,
        RotationType::HyperbolicB,
        RotationType::Parabolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RotationType::Elliptic => "elliptic",
            RotationType::HyperbolicA => "hyperbolicA",
            RotationType::HyperbolicB => "hyperbolicB",
            RotationType::Parabolic => "parabolic",
        }
    }

    /// Names of the three curve components, in storage order.
    pub fn component_names(self) -> [&'static str; 3] {
        match self {
            RotationType::Elliptic => ["x1", "x2", "r"],
            RotationType::HyperbolicA | RotationType::HyperbolicB => ["r", "x2", "x4"],
            RotationType::Parabolic => ["x1", "f", "g"],
        }
    }

    pub fn is_hyperbolic(self) -> bool {
        matches!(self, RotationType::HyperbolicA | RotationType::HyperbolicB)
    }

    /// `ε = sign((r′)² − 1)` for the hyperbolic cases.
    pub fn slope_sign(self) -> Option<f64> {
        match self {
            RotationType::HyperbolicA => Some(1.0),
            RotationType::HyperbolicB => Some(-1.0),
            _ => None,
        }
    }
}

impl fmt::Display for RotationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RotationType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RotationType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or(Error::InvalidParameter("unknown rotation type"))
    }
}

/// `(x₁′)² + (x₂′)² − (r′)² − 1` and its hyperbolic / parabolic analogues.
pub fn arclength_residual(kind: RotationType, c: &[Jet2; 3]) -> f64 {
    match kind {
        RotationType::Elliptic => c[0].d1 * c[0].d1 + c[1].d1 * c[1].d1 - c[2].d1 * c[2].d1 - 1.0,
        RotationType::HyperbolicA | RotationType::HyperbolicB => {
            c[0].d1 * c[0].d1 + c[1].d1 * c[1].d1 - c[2].d1 * c[2].d1 - 1.0
        }
        RotationType::Parabolic => c[0].d1 * c[0].d1 - 2.0 * c[1].d1 * c[2].d1 - 1.0,
    }
}

/// Anything that can report the component jets of a curve at `u`.
pub trait CurveSource: Send + Sync {
    fn components(&self, u: f64) -> Result<[Jet2; 3]>;

    /// The parameters a discrete source is defined at, ascending.
    fn stored_parameters(&self) -> Option<&[f64]> {
        None
    }
}

impl<F> CurveSource for F
where
    F: Fn(f64) -> Result<[Jet2; 3]> + Send + Sync,
{
    fn components(&self, u: f64) -> Result<[Jet2; 3]> {
        self(u)
    }
}

#[derive(Clone)]
pub struct GeneratingCurve {
    pub kind: RotationType,
    pub domain: (f64, f64),
    source: Arc<dyn CurveSource>,
}

impl fmt::Debug for GeneratingCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratingCurve")
            .field("kind", &self.kind)
            .field("domain", &self.domain)
            .finish()
    }
}

impl GeneratingCurve {
    pub fn new(kind: RotationType, domain: (f64, f64), source: Arc<dyn CurveSource>) -> Self {
        Self {
            kind,
            domain,
            source,
        }
    }

    pub fn from_fn<F>(kind: RotationType, domain: (f64, f64), f: F) -> Self
    where
        F: Fn(f64) -> Result<[Jet2; 3]> + Send + Sync + 'static,
    {
        Self::new(kind, domain, Arc::new(f))
    }

    /// A curve whose three components are profile expressions in `u`.
    pub fn from_exprs(
        kind: RotationType,
        domain: (f64, f64),
        exprs: [Expr; 3],
        constants: Constants,
    ) -> Self {
        Self::from_fn(kind, domain, move |u| {
            Ok([
                eval_jet(&exprs[0], u, &constants)?,
                eval_jet(&exprs[1], u, &constants)?,
                eval_jet(&exprs[2], u, &constants)?,
            ])
        })
    }

    /// A curve known only at the given samples (e.g. read back from a file).
    /// Evaluation away from a sample is an [`Error::OutOfDomain`].
    pub fn from_samples(kind: RotationType, mut samples: Vec<(f64, [Jet2; 3])>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter("empty sample table"));
        }
        if samples.iter().any(|s| !s.0.is_finite()) {
            return Err(Error::InvalidParameter("sample parameters must be finite"));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples.dedup_by(|a, b| a.0 == b.0);
        let domain = (samples[0].0, samples[samples.len() - 1].0);
        let params = samples.iter().map(|s| s.0).collect();
        Ok(Self::new(
            kind,
            domain,
            Arc::new(SampledCurve { params, samples }),
        ))
    }

    pub fn contains(&self, u: f64) -> bool {
        let (a, b) = self.domain;
        let slack = 1e-12 * (1.0 + a.abs().max(b.abs()));
        u >= a - slack && u <= b + slack
    }

    pub fn components(&self, u: f64) -> Result<[Jet2; 3]> {
        if !self.contains(u) {
            return Err(Error::OutOfDomain { u });
        }
        self.source.components(u)
    }

    pub fn arclength_residual(&self, u: f64) -> Result<f64> {
        Ok(arclength_residual(self.kind, &self.components(u)?))
    }

    /// `n` evenly spaced parameters covering the domain. Curves known only at
    /// samples return (up to `n` of) their stored parameters instead.
    pub fn sample_points(&self, n: usize) -> Vec<f64> {
        match self.source.stored_parameters() {
            Some(us) if us.len() <= n => us.to_vec(),
            Some(us) => (0..n)
                .map(|i| us[(i * (us.len() - 1)) / (n - 1).max(1)])
                .collect(),
            None => linspace(self.domain.0, self.domain.1, n),
        }
    }

    pub fn is_sampled(&self) -> bool {
        self.source.stored_parameters().is_some()
    }

    /// Arc length within [`ARCLENGTH_TOL`], `r > 0` for elliptic/hyperbolic
    /// curves and `f f′ ≠ 0` for parabolic ones, at each of `samples`.
    pub fn check_invariants(&self, samples: &[f64]) -> Result<()> {
        for &u in samples {
            let c = self.components(u)?;
            let res = arclength_residual(self.kind, &c);
            if !(res.abs() <= ARCLENGTH_TOL) {
                return Err(Error::InvariantViolation {
                    what: "arc-length parameterization",
                    u,
                    residual: res.abs(),
                });
            }
            match self.kind {
                RotationType::Elliptic if c[2].val <= 0.0 => {
                    return Err(Error::NonpositiveProfile { u })
                }
                RotationType::HyperbolicA | RotationType::HyperbolicB if c[0].val <= 0.0 => {
                    return Err(Error::NonpositiveProfile { u })
                }
                RotationType::Parabolic if c[1].val * c[1].d1 == 0.0 => {
                    return Err(Error::ZeroDerivativeProfile { u })
                }
                _ => {}
            }
        }
        Ok(())
    }
}

struct SampledCurve {
    params: Vec<f64>,
    samples: Vec<(f64, [Jet2; 3])>,
}

impl CurveSource for SampledCurve {
    fn stored_parameters(&self) -> Option<&[f64]> {
        Some(&self.params)
    }

    fn components(&self, u: f64) -> Result<[Jet2; 3]> {
        let i = self.samples.partition_point(|s| s.0 < u);
        let tol = 1e-12 * (1.0 + u.abs());
        [i.wrapping_sub(1), i]
            .into_iter()
            .filter_map(|k| self.samples.get(k))
            .find(|s| (s.0 - u).abs() <= tol)
            .map(|s| s.1)
            .ok_or(Error::OutOfDomain { u })
    }
}

/// `n` points from `a` to `b` inclusive (`n >= 2`, or just `a`).
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}
