//! Second-order forward-mode dual numbers.
//!
//! A [`Dual2`] carries a value together with its first and second derivative
//! with respect to a single seed variable. Propagating these through the
//! arithmetic below yields `f(x)`, `f'(x)` and `f''(x)` in one pass.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Dual2 {
    pub fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        Self { v: x, d1: 1.0, d2: 0.0 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self { v: e, d1: e * self.d1, d2: e * (self.d2 + self.d1 * self.d1) }
    }

    pub fn ln(self) -> Self {
        let inv = 1.0 / self.v;
        Self { v: self.v.ln(), d1: self.d1 * inv, d2: self.d2 * inv - self.d1 * self.d1 * inv * inv }
    }

    /// Raises to a constant power.
    pub fn powf(self, c: f64) -> Self {
        if c == 0.0 {
            return Self::constant(1.0);
        }
        if c == 1.0 {
            return self;
        }
        let p2 = if c == 2.0 { 1.0 } else { self.v.powf(c - 2.0) };
        let p1 = if c == 2.0 { self.v } else { self.v.powf(c - 1.0) };
        Self { v: self.v.powf(c), d1: c * p1 * self.d1, d2: c * (c - 1.0) * p2 * self.d1 * self.d1 + c * p1 * self.d2 }
    }

    fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        let inv2 = inv * inv;
        Self { v: inv, d1: -self.d1 * inv2, d2: 2.0 * self.d1 * self.d1 * inv2 * inv - self.d2 * inv2 }
    }
}

impl Add for Dual2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        if o.d1 == 0.0 && o.d2 == 0.0 {
            let inv = 1.0 / o.v;
            return Self { v: self.v * inv, d1: self.d1 * inv, d2: self.d2 * inv };
        }
        self * o.recip()
    }
}

impl Neg for Dual2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}
