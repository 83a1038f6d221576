//! Arc-length generating curves with closed-form components, used as
//! fixtures for the oracles. Each is written in the profile language so the
//! whole chain (parser, jets, builders, kernel) is exercised.

use alloc::vec::Vec;

use crate::curve::{GeneratingCurve, RotationType};
use crate::dsl::{parse, Constants};

#[derive(Clone, Debug)]
pub struct ReferenceCurve {
    pub name: &'static str,
    pub curve: GeneratingCurve,
    /// The `x₁′x₂″ − x₁″x₂′`-type twist vanishes identically.
    pub degenerate: bool,
}

fn curve(
    name: &'static str,
    kind: RotationType,
    domain: (f64, f64),
    texts: [&str; 3],
    degenerate: bool,
) -> ReferenceCurve {
    let exprs = texts.map(|t| parse(t, &[]).expect("reference expression parses"));
    ReferenceCurve {
        name,
        curve: GeneratingCurve::from_exprs(kind, domain, exprs, Constants::new()),
        degenerate,
    }
}

/// Elliptic curves `(x1, x2, r)`; the first two are the unit-speed circles
/// with `r ≡ 1` and `r ≡ 2`.
pub fn elliptic() -> Vec<ReferenceCurve> {
    use RotationType::Elliptic as E;
    alloc::vec![
        curve("circle-r1", E, (0.0, 6.0), ["cos(u)", "sin(u)", "1"], false),
        curve("circle-r2", E, (0.0, 6.0), ["cos(u)", "sin(u)", "2"], false),
        curve(
            "spiral-cone",
            E,
            (0.0, 5.0),
            ["sqrt(1.25)*sin(u)", "-sqrt(1.25)*cos(u)", "1.5+0.5*u"],
            false
        ),
        curve(
            "cosh-twist",
            E,
            (0.2, 1.5),
            [
                "(sinh(u)*cos(u)+cosh(u)*sin(u))/2",
                "(sinh(u)*sin(u)-cosh(u)*cos(u))/2",
                "cosh(u)"
            ],
            false,
        ),
        curve(
            "straight-catenoid",
            E,
            (-1.0, 1.0),
            ["0.6*sinh(u)", "0.8*sinh(u)", "cosh(u)"],
            true
        ),
        curve(
            "straight-cone",
            E,
            (0.0, 3.0),
            ["sqrt(1.25)*u", "0", "1+0.5*u"],
            true
        ),
    ]
}

/// Hyperbolic curves `(r, x2, x4)`, three for each slope case.
pub fn hyperbolic() -> Vec<ReferenceCurve> {
    use RotationType::{HyperbolicA as A, HyperbolicB as B};
    alloc::vec![
        curve(
            "a-linear",
            A,
            (0.5, 2.0),
            ["2*u", "sqrt(3)*cosh(u)", "sqrt(3)*sinh(u)"],
            false
        ),
        curve(
            "a-steep",
            A,
            (0.5, 2.0),
            ["3*u", "2*sqrt(8)*cosh(u/2)", "2*sqrt(8)*sinh(u/2)"],
            false
        ),
        curve(
            "a-sinh",
            A,
            (0.3, 1.5),
            ["sinh(u)", "(sinh(u)*cosh(u)-u)/2", "sinh(u)^2/2"],
            false
        ),
        curve(
            "b-linear",
            B,
            (0.0, 2.0),
            ["u/2+1", "sqrt(3)/2*sinh(u)", "sqrt(3)/2*cosh(u)"],
            false
        ),
        curve("b-flat", B, (-1.0, 1.0), ["1", "sinh(u)", "cosh(u)"], false),
        curve(
            "b-sine",
            B,
            (0.3, 2.8),
            [
                "sin(u)+2",
                "(sin(u)*sinh(u)-cos(u)*cosh(u))/2",
                "(sin(u)*cosh(u)-cos(u)*sinh(u))/2"
            ],
            false,
        ),
        curve(
            "b-straight",
            B,
            (0.3, 2.8),
            ["sin(u)+2", "-cos(u)", "0"],
            true
        ),
    ]
}

/// Parabolic curves `(x1, f, g)` with `(x₁′)² − 2f′g′ = 1`.
pub fn parabolic() -> Vec<ReferenceCurve> {
    use RotationType::Parabolic as P;
    alloc::vec![
        curve("linear-still", P, (0.5, 2.0), ["0", "u", "-u/2"], true),
        curve(
            "linear-quadratic",
            P,
            (0.5, 2.0),
            ["u^2/2", "u", "(u^3/3-u)/2"],
            false
        ),
        curve("exponential", P, (-1.0, 1.0), ["u", "exp(u)", "0"], false),
        curve(
            "square",
            P,
            (0.5, 2.0),
            ["u^2/2", "u^2", "u^2/8-ln(u)/4"],
            true
        ),
        curve(
            "cubic",
            P,
            (0.5, 2.0),
            ["u^2/2", "u^3/3", "u/2+1/(2*u)"],
            false
        ),
    ]
}

pub fn all() -> Vec<ReferenceCurve> {
    let mut v = elliptic();
    v.extend(hyperbolic());
    v.extend(parabolic());
    v
}
