use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// A value known to lie in `[center - radius, center + radius]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBounded<T> {
    pub center: T,
    pub radius: T,
}

impl<T: Scalar> ErrorBounded<T> {
    pub fn new(center: T, radius: T) -> Self {
        assert!(!radius.is_negative(), "radius must be nonnegative");
        Self { center, radius }
    }

    pub fn exact(center: T) -> Self {
        Self {
            center,
            radius: T::zero(),
        }
    }

    pub fn lo(&self) -> T {
        self.center.clone() - self.radius.clone()
    }

    pub fn hi(&self) -> T {
        self.center.clone() + self.radius.clone()
    }

    pub fn contains(&self, x: &T) -> bool {
        (x.clone() - self.center.clone()).abs() <= self.radius
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&T::zero())
    }

    /// Certified sign: `Some(±1)` when the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.center.abs() > self.radius {
            Some(if self.center.is_positive() { 1 } else { -1 })
        } else {
            None
        }
    }

    /// `self ⊆ other`.
    pub fn is_inside(&self, other: &Self) -> bool {
        self.lo() >= other.lo() && self.hi() <= other.hi()
    }

    /// Enclosure of `1/x`; `None` if the interval touches zero.
    pub fn recip(&self) -> Option<Self> {
        let c = self.center.abs();
        if c <= self.radius {
            return None;
        }
        let gap = c.clone() - self.radius.clone();
        let radius = self.radius.clone() / (c * gap);
        Some(Self {
            center: self.center.recip(),
            radius,
        })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self * &r)
    }

    pub fn scale(&self, k: &T) -> Self {
        Self {
            center: self.center.clone() * k.clone(),
            radius: self.radius.clone() * k.abs(),
        }
    }
}

impl<T: Scalar> Add for &ErrorBounded<T> {
    type Output = ErrorBounded<T>;
    fn add(self, rhs: Self) -> ErrorBounded<T> {
        ErrorBounded {
            center: self.center.clone() + rhs.center.clone(),
            radius: self.radius.clone() + rhs.radius.clone(),
        }
    }
}

impl<T: Scalar> Sub for &ErrorBounded<T> {
    type Output = ErrorBounded<T>;
    fn sub(self, rhs: Self) -> ErrorBounded<T> {
        ErrorBounded {
            center: self.center.clone() - rhs.center.clone(),
            radius: self.radius.clone() + rhs.radius.clone(),
        }
    }
}

impl<T: Scalar> Mul for &ErrorBounded<T> {
    type Output = ErrorBounded<T>;
    fn mul(self, rhs: Self) -> ErrorBounded<T> {
        // |xy - ab| <= |a| r_y + |b| r_x + r_x r_y
        let radius = self.center.abs() * rhs.radius.clone()
            + rhs.center.abs() * self.radius.clone()
            + self.radius.clone() * rhs.radius.clone();
        ErrorBounded {
            center: self.center.clone() * rhs.center.clone(),
            radius,
        }
    }
}

impl<T: Scalar> Neg for &ErrorBounded<T> {
    type Output = ErrorBounded<T>;
    fn neg(self) -> ErrorBounded<T> {
        ErrorBounded {
            center: -self.center.clone(),
            radius: self.radius.clone(),
        }
    }
}

impl<T: Scalar> Zero for ErrorBounded<T> {
    fn zero() -> Self {
        Self::exact(T::zero())
    }
    fn is_zero(&self) -> bool {
        self.center.is_zero() && self.radius.is_zero()
    }
}

impl<T: Scalar> Add for ErrorBounded<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for ErrorBounded<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {}", self.center, self.radius)
    }
}
