//! Second-order forward-mode jets in one variable.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

/// `(f, f′, f″)` at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Jet2 {
    pub val: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(val: f64, d1: f64, d2: f64) -> Self {
        Self { val, d1, d2 }
    }

    pub const fn constant(val: f64) -> Self {
        Self::new(val, 0.0, 0.0)
    }

    /// The independent variable itself.
    pub const fn variable(u: f64) -> Self {
        Self::new(u, 1.0, 0.0)
    }

    pub fn is_finite(self) -> bool {
        self.val.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Compose with a scalar function given its value and first two derivatives
    /// at `self.val`.
    #[inline]
    pub fn chain(self, g: f64, dg: f64, ddg: f64) -> Jet2 {
        Jet2::new(g, dg * self.d1, ddg * self.d1 * self.d1 + dg * self.d2)
    }

    pub fn recip(self) -> Jet2 {
        let r = 1.0 / self.val;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn sqrt(self) -> Jet2 {
        let s = math::sqrt(self.val);
        self.chain(s, 0.5 / s, -0.25 / (s * self.val))
    }

    pub fn sin(self) -> Jet2 {
        let (s, c) = (math::sin(self.val), math::cos(self.val));
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Jet2 {
        let (s, c) = (math::sin(self.val), math::cos(self.val));
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Jet2 {
        let (s, c) = (math::sinh(self.val), math::cosh(self.val));
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Jet2 {
        let (s, c) = (math::sinh(self.val), math::cosh(self.val));
        self.chain(c, s, c)
    }

    pub fn exp(self) -> Jet2 {
        let e = math::exp(self.val);
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Jet2 {
        let r = 1.0 / self.val;
        self.chain(math::ln(self.val), r, -r * r)
    }

    /// `|x|` away from zero.
    pub fn abs(self) -> Jet2 {
        let s = self.val.signum();
        Jet2::new(self.val.abs(), s * self.d1, s * self.d2)
    }

    /// `xᵖ` for a constant exponent.
    pub fn powf(self, p: f64) -> Jet2 {
        if p == 0.0 {
            return Jet2::constant(1.0);
        }
        let x = self.val;
        if p == libm::trunc(p) && p.abs() <= i32::MAX as f64 {
            let n = p as i32;
            let g = math::powi(x, n);
            let dg = if n == 1 {
                1.0
            } else {
                p * math::powi(x, n - 1)
            };
            let ddg = match n {
                1 => 0.0,
                2 => 2.0,
                _ => p * (p - 1.0) * math::powi(x, n - 2),
            };
            return self.chain(g, dg, ddg);
        }
        let g = math::powf(x, p);
        self.chain(g, p * g / x, p * (p - 1.0) * g / (x * x))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.val + o.val, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.val - o.val, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.val, -self.d1, -self.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.val * o.val,
            self.d1 * o.val + self.val * o.d1,
            self.d2 * o.val + 2.0 * self.d1 * o.d1 + self.val * o.d2,
        )
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, s: f64) -> Jet2 {
        Jet2::new(self.val * s, self.d1 * s, self.d2 * s)
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet2) -> Jet2 {
        self * o.recip()
    }
}
