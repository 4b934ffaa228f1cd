//! Truncated bivariate Taylor jets (forward-mode automatic differentiation).
//!
//! A [`Jet`] carries the Taylor coefficients of a function of `(x, y)` up to
//! total degree three. Gallery surfaces are written once in terms of jets and
//! their first and second partial derivatives fall out exactly (up to
//! rounding). Differentiating a jet with [`Jet::partial_x`] lowers the
//! order by one; composite surfaces that need derivatives of derivatives (the
//! normal field of a base surface, for instance) rely on that.

use core::ops::{Add, Div, Mul, Neg, Sub};

#[allow(unused_imports)]
use num_traits::Float;

const N: usize = 10;

/// Exponents (i, j) of the monomial x^i y^j stored at each slot.
const EXPONENTS: [(u8, u8); N] = [
    (0, 0),
    (1, 0),
    (0, 1),
    (2, 0),
    (1, 1),
    (0, 2),
    (3, 0),
    (2, 1),
    (1, 2),
    (0, 3),
];

const fn slot(i: u8, j: u8) -> usize {
    let d = (i + j) as usize;
    d * (d + 1) / 2 + j as usize
}

const fn degree(k: usize) -> u8 {
    EXPONENTS[k].0 + EXPONENTS[k].1
}

pub const MAX_ORDER: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [f64; N],
    order: u8,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; N];
        c[0] = v;
        Self { c, order: MAX_ORDER }
    }

    /// The coordinate function x, seeded at `x`.
    pub fn var_x(x: f64) -> Self {
        let mut j = Self::constant(x);
        j.c[1] = 1.0;
        j
    }

    /// The coordinate function y, seeded at `y`.
    pub fn var_y(y: f64) -> Self {
        let mut j = Self::constant(y);
        j.c[2] = 1.0;
        j
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    /// Drop every coefficient above `order`.
    pub fn truncate(&self, order: u8) -> Jet {
        Jet::truncated(self.c, order.min(self.order))
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn d_x(&self) -> f64 {
        self.c[1]
    }

    pub fn d_y(&self) -> f64 {
        self.c[2]
    }

    pub fn d_xx(&self) -> f64 {
        2.0 * self.c[3]
    }

    pub fn d_xy(&self) -> f64 {
        self.c[4]
    }

    pub fn d_yy(&self) -> f64 {
        2.0 * self.c[5]
    }

    /// ∂/∂x as a jet of one lower order.
    pub fn partial_x(&self) -> Jet {
        let mut out = [0.0; N];
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            if i > 0 && degree(k) <= self.order {
                out[slot(i - 1, j)] = f64::from(i) * self.c[k];
            }
        }
        Jet::truncated(out, self.order.saturating_sub(1))
    }

    /// ∂/∂y as a jet of one lower order.
    pub fn partial_y(&self) -> Jet {
        let mut out = [0.0; N];
        for (k, &(i, j)) in EXPONENTS.iter().enumerate() {
            if j > 0 && degree(k) <= self.order {
                out[slot(i, j - 1)] = f64::from(j) * self.c[k];
            }
        }
        Jet::truncated(out, self.order.saturating_sub(1))
    }

    fn truncated(mut c: [f64; N], order: u8) -> Jet {
        for (k, v) in c.iter_mut().enumerate() {
            if degree(k) > order {
                *v = 0.0;
            }
        }
        Jet { c, order }
    }

    /// Apply a scalar function given its value and first three derivatives
    /// at the jet's constant term.
    fn compose(&self, d: [f64; 4]) -> Jet {
        let mut delta = *self;
        delta.c[0] = 0.0;
        let d2 = delta * delta;
        let d3 = d2 * delta;
        let mut out = delta * d[1] + d2 * (d[2] * 0.5) + d3 * (d[3] / 6.0);
        out.c[0] = d[0];
        out
    }

    pub fn sin(self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(self) -> Jet {
        let (s, c) = self.c[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(self) -> Jet {
        let e = self.c[0].exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(self) -> Jet {
        let v = self.c[0];
        self.compose([v.ln(), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)])
    }

    pub fn sqrt(self) -> Jet {
        let v = self.c[0];
        let s = v.sqrt();
        self.compose([s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v)])
    }

    pub fn recip(self) -> Jet {
        let v = self.c[0];
        let r = 1.0 / v;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sinh(self) -> Jet {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([s, c, s, c])
    }

    pub fn cosh(self) -> Jet {
        let (s, c) = (self.c[0].sinh(), self.c[0].cosh());
        self.compose([c, s, c, s])
    }

    pub fn tanh(self) -> Jet {
        let t = self.c[0].tanh();
        let s2 = 1.0 - t * t;
        self.compose([t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0)])
    }

    pub fn sech(self) -> Jet {
        self.cosh().recip()
    }

    /// Four-quadrant arctangent of `self / x`, continuous across the seed.
    pub fn atan2(self, x: Jet) -> Jet {
        let (y0, x0) = (self.c[0], x.c[0]);
        let theta = y0.atan2(x0);
        let mut num = self * x0 - x * y0;
        num.c[0] = 0.0;
        let den = x * x0 + self * y0;
        let t = num / den;
        let mut out = t - t * t * t * (1.0 / 3.0);
        out.c[0] = theta;
        out
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Jet::constant(v)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        Jet::truncated(c, self.order.min(o.order))
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
        Jet::truncated(c, self.order.min(o.order))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let order = self.order.min(o.order);
        let mut c = [0.0; N];
        for (a, &(ia, ja)) in EXPONENTS.iter().enumerate() {
            let da = degree(a);
            if da > order || self.c[a] == 0.0 {
                continue;
            }
            for (b, &(ib, jb)) in EXPONENTS.iter().enumerate() {
                if da + degree(b) > order {
                    continue;
                }
                c[slot(ia + ib, ja + jb)] += self.c[a] * o.c[b];
            }
        }
        Jet { c, order }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = -*v;
        }
        Jet { c, order: self.order }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, v: f64) -> Jet {
        self.c[0] += v;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, v: f64) -> Jet {
        self.c[0] -= v;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, v: f64) -> Jet {
        for c in self.c.iter_mut() {
            *c *= v;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, v: f64) -> Jet {
        self * (1.0 / v)
    }
}

/// A point of R³ whose coordinates are jets.
#[derive(Debug, Clone, Copy)]
pub struct JetVec3(pub [Jet; 3]);

impl JetVec3 {
    pub fn new(x: Jet, y: Jet, z: Jet) -> Self {
        Self([x, y, z])
    }

    pub fn dot(&self, o: &JetVec3) -> Jet {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &JetVec3) -> JetVec3 {
        let [a0, a1, a2] = self.0;
        let [b0, b1, b2] = o.0;
        JetVec3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn scale(&self, s: Jet) -> JetVec3 {
        JetVec3(self.0.map(|c| c * s))
    }

    pub fn add(&self, o: &JetVec3) -> JetVec3 {
        JetVec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn partial_x(&self) -> JetVec3 {
        JetVec3(self.0.map(|c| c.partial_x()))
    }

    pub fn partial_y(&self) -> JetVec3 {
        JetVec3(self.0.map(|c| c.partial_y()))
    }

    pub fn normalized(&self) -> JetVec3 {
        let inv = self.dot(self).sqrt().recip();
        self.scale(inv)
    }
}
