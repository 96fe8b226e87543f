use std::ops::{Add, Mul, Neg, Sub};

/// Second-order jet in the two variables `x` and `t`: the value of a
/// function together with its exact first and second partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub value: f64,
    pub dx: f64,
    pub dt: f64,
    pub dxx: f64,
    pub dxt: f64,
    pub dtt: f64,
}

impl Jet2 {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            ..Self::default()
        }
    }

    pub fn var_x(x: f64) -> Self {
        Self {
            value: x,
            dx: 1.0,
            ..Self::default()
        }
    }

    pub fn var_t(t: f64) -> Self {
        Self {
            value: t,
            dt: 1.0,
            ..Self::default()
        }
    }

    /// True when every derivative channel is zero.
    pub fn is_constant(&self) -> bool {
        self.dx == 0.0 && self.dt == 0.0 && self.dxx == 0.0 && self.dxt == 0.0 && self.dtt == 0.0
    }

    /// Composes a scalar function `f` with this jet, given `f(u)`, `f'(u)`
    /// and `f''(u)` at `u = self.value`.
    pub fn chain(self, f: f64, d1: f64, d2: f64) -> Self {
        Self {
            value: f,
            dx: d1 * self.dx,
            dt: d1 * self.dt,
            dxx: d2 * self.dx * self.dx + d1 * self.dxx,
            dxt: d2 * self.dx * self.dt + d1 * self.dxt,
            dtt: d2 * self.dt * self.dt + d1 * self.dtt,
        }
    }

    /// `1 / self`; the caller guarantees a nonzero value.
    pub fn recip(self) -> Self {
        let inv = 1.0 / self.value;
        self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            value: k * self.value,
            dx: k * self.dx,
            dt: k * self.dt,
            dxx: k * self.dxx,
            dxt: k * self.dxt,
            dtt: k * self.dtt,
        }
    }

    /// Value, first and second derivative along one variable.
    pub fn along(&self, var: super::Var) -> (f64, f64, f64) {
        match var {
            super::Var::X => (self.value, self.dx, self.dxx),
            super::Var::T => (self.value, self.dt, self.dtt),
        }
    }
}

impl Add for Jet2 {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            value: self.value + o.value,
            dx: self.dx + o.dx,
            dt: self.dt + o.dt,
            dxx: self.dxx + o.dxx,
            dxt: self.dxt + o.dxt,
            dtt: self.dtt + o.dtt,
        }
    }
}

impl Sub for Jet2 {
    type Output = Self;

    fn sub(self, o: Self) -> Self {
        Self {
            value: self.value - o.value,
            dx: self.dx - o.dx,
            dt: self.dt - o.dt,
            dxx: self.dxx - o.dxx,
            dxt: self.dxt - o.dxt,
            dtt: self.dtt - o.dtt,
        }
    }
}

impl Mul for Jet2 {
    type Output = Self;

    fn mul(self, o: Self) -> Self {
        Self {
            value: self.value * o.value,
            dx: self.dx * o.value + self.value * o.dx,
            dt: self.dt * o.value + self.value * o.dt,
            dxx: self.dxx * o.value + 2.0 * self.dx * o.dx + self.value * o.dxx,
            dxt: self.dxt * o.value + self.dx * o.dt + self.dt * o.dx + self.value * o.dxt,
            dtt: self.dtt * o.value + 2.0 * self.dt * o.dt + self.value * o.dtt,
        }
    }
}

impl Neg for Jet2 {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}
