//! Indefinite linear algebra of the neutral-signature space E⁴₂.
//!
//! The inner product is `⟨v, w⟩ = v₁w₁ + v₂w₂ − v₃w₃ − v₄w₄`.

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math::FRAC_1_SQRT_2;

/// Default band around zero inside which `⟨v, v⟩` counts as lightlike.
pub const TAU_CAUSAL: f64 = 1e-10;

/// A point or vector of E⁴₂ in the standard basis `e₁..e₄`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Vec4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

pub const E1: Vec4 = Vec4::new(1.0, 0.0, 0.0, 0.0);
pub const E2: Vec4 = Vec4::new(0.0, 1.0, 0.0, 0.0);
pub const E3: Vec4 = Vec4::new(0.0, 0.0, 1.0, 0.0);
pub const E4: Vec4 = Vec4::new(0.0, 0.0, 0.0, 1.0);
/// Lightlike `(e₂ + e₃)/√2`.
pub const XI1: Vec4 = Vec4::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0);
/// Lightlike `(−e₂ + e₃)/√2`, with `⟨ξ₁, ξ₂⟩ = −1`.
pub const XI2: Vec4 = Vec4::new(0.0, -FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0);

pub const BASIS: [Vec4; 4] = [E1, E2, E3, E4];

impl Vec4 {
    pub const ZERO: Vec4 = Vec4::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite() && self.x4.is_finite()
    }

    /// Indefinite inner product with `other`.
    #[inline]
    pub fn dot(self, other: Vec4) -> f64 {
        inner(self, other)
    }

    /// `⟨v, v⟩`, which may be negative.
    #[inline]
    pub fn norm_sq(self) -> f64 {
        inner(self, self)
    }

    pub fn max_abs(self) -> f64 {
        self.x1
            .abs()
            .max(self.x2.abs())
            .max(self.x3.abs())
            .max(self.x4.abs())
    }

    pub fn euclidean_norm_sq(self) -> f64 {
        self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3 + self.x4 * self.x4
    }

    pub fn euclidean_norm(self) -> f64 {
        libm::sqrt(self.euclidean_norm_sq())
    }
}

impl Index<usize> for Vec4 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            3 => &self.x4,
            _ => panic!("Vec4 index {i} out of range"),
        }
    }
}

impl Add for Vec4 {
    type Output = Vec4;
    fn add(self, o: Vec4) -> Vec4 {
        Vec4::new(
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
            self.x4 + o.x4,
        )
    }
}

impl AddAssign for Vec4 {
    fn add_assign(&mut self, o: Vec4) {
        *self = *self + o;
    }
}

impl Sub for Vec4 {
    type Output = Vec4;
    fn sub(self, o: Vec4) -> Vec4 {
        Vec4::new(
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
            self.x4 - o.x4,
        )
    }
}

impl SubAssign for Vec4 {
    fn sub_assign(&mut self, o: Vec4) {
        *self = *self - o;
    }
}

impl Neg for Vec4 {
    type Output = Vec4;
    fn neg(self) -> Vec4 {
        Vec4::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for Vec4 {
    type Output = Vec4;
    fn mul(self, s: f64) -> Vec4 {
        Vec4::new(self.x1 * s, self.x2 * s, self.x3 * s, self.x4 * s)
    }
}

impl Mul<Vec4> for f64 {
    type Output = Vec4;
    fn mul(self, v: Vec4) -> Vec4 {
        v * self
    }
}

impl Div<f64> for Vec4 {
    type Output = Vec4;
    fn div(self, s: f64) -> Vec4 {
        Vec4::new(self.x1 / s, self.x2 / s, self.x3 / s, self.x4 / s)
    }
}

/// The metric `g₀ = dx₁² + dx₂² − dx₃² − dx₄²`.
#[inline]
pub fn inner(v: Vec4, w: Vec4) -> f64 {
    v.x1 * w.x1 + v.x2 * w.x2 - v.x3 * w.x3 - v.x4 * w.x4
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Lightlike,
    Zero,
}

pub fn causal_character(v: Vec4, tau: f64) -> CausalClass {
    let q = v.norm_sq();
    if q > tau {
        CausalClass::Spacelike
    } else if q < -tau {
        CausalClass::Timelike
    } else if v.max_abs() > tau {
        CausalClass::Lightlike
    } else {
        CausalClass::Zero
    }
}

/// Sign of `⟨u, u⟩` for a unit vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Gram-Schmidt with the indefinite inner product.
///
/// Each output vector has `⟨uᵢ, uᵢ⟩ = ±1` and the returned sign records which.
/// A residual whose square norm is within `tau` of zero, relative to its
/// Euclidean size, is lightlike (or vanishing) and cannot be normalized;
/// that case is reported as [`Error::DegenerateFrame`].
pub fn orthonormalize_indefinite(basis: &[Vec4], tau: f64) -> Result<Vec<(Vec4, Sign)>> {
    let mut out: Vec<(Vec4, Sign)> = Vec::with_capacity(basis.len());
    for &v in basis {
        if !v.is_finite() {
            return Err(Error::InvalidParameter("non-finite basis vector"));
        }
        let mut w = v;
        // Two passes keep the residual orthogonal to working precision.
        for _ in 0..2 {
            for &(u, s) in &out {
                w -= u * (s.value() * inner(w, u));
            }
        }
        let q = w.norm_sq();
        let scale = w.euclidean_norm_sq();
        if scale <= tau * tau * v.euclidean_norm_sq() || q.abs() <= tau * scale {
            return Err(Error::DegenerateFrame);
        }
        out.push((w / libm::sqrt(q.abs()), Sign::of(q)));
    }
    Ok(out)
}
