//! Constants attached to an isoparametric foliation of type `(g, m, m)`.
//!
//! Every constant here is a rational multiple of an integer power of π, so
//! besides the binary64 routes an exact [`PiMultiple`] form is kept for
//! the Wallis integrals, the sphere volumes and the fiber constants.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Numbers of distinct principal curvatures allowed by Münzner's theorem.
pub const ADMISSIBLE_G: [u32; 5] = [1, 2, 3, 4, 6];

/// Type `(g, m, m)` of an isoparametric foliation of `S^n`, `n = m g + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FoliationType {
    g: u32,
    m: u32,
}

impl FoliationType {
    /// Builds a foliation type, rejecting `g` outside `{1, 2, 3, 4, 6}`.
    pub fn new(g: u32, m: u32) -> Result<Self> {
        if !ADMISSIBLE_G.contains(&g) {
            return domain(format!(
                "g = {g} is not one of {ADMISSIBLE_G:?} (use the any-g override to experiment)"
            ));
        }
        Self::with_any_g(g, m)
    }

    /// Builds a foliation type without the restriction on `g`.
    pub fn with_any_g(g: u32, m: u32) -> Result<Self> {
        if g == 0 {
            return domain("g must be at least 1");
        }
        if m == 0 {
            return domain("m must be at least 1");
        }
        Ok(Self { g, m })
    }

    /// The rotational case `(1, n - 1)`.
    pub fn rotational(n: u32) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension n = {n} must be at least 2"));
        }
        Self::new(1, n - 1)
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Dimension of the ambient sphere, `n = m g + 1`.
    pub fn n(&self) -> u32 {
        self.m * self.g + 1
    }

    /// Width `π / g` of the angular strip.
    pub fn strip_width(&self) -> f64 {
        PI / self.g as f64
    }

    /// The fixed line `φ = π / (2g)` of the reflection `φ ↦ π/g − φ`.
    pub fn symmetry_angle(&self) -> f64 {
        PI / (2.0 * self.g as f64)
    }
}

impl fmt::Display for FoliationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(g={}, m={}, n={})", self.g, self.m, self.n())
    }
}

/// An exact value `coefficient · π^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiMultiple {
    pub coefficient: BigRational,
    pub pi_power: i32,
}

impl PiMultiple {
    pub fn rational(coefficient: BigRational) -> Self {
        Self {
            coefficient,
            pi_power: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Ratio::to_f64 rounds the quotient correctly even when numerator and
        // denominator individually overflow binary64.
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        c * PI.powi(self.pi_power)
    }

    pub fn mul(&self, other: &PiMultiple) -> PiMultiple {
        PiMultiple {
            coefficient: &self.coefficient * &other.coefficient,
            pi_power: self.pi_power + other.pi_power,
        }
    }

    pub fn div(&self, other: &PiMultiple) -> PiMultiple {
        PiMultiple {
            coefficient: &self.coefficient / &other.coefficient,
            pi_power: self.pi_power - other.pi_power,
        }
    }

    pub fn scale(&self, factor: i64) -> PiMultiple {
        PiMultiple {
            coefficient: &self.coefficient * BigRational::from_integer(BigInt::from(factor)),
            pi_power: self.pi_power,
        }
    }
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => write!(f, "{}", self.coefficient),
            1 => write!(f, "({})·π", self.coefficient),
            p => write!(f, "({})·π^{}", self.coefficient, p),
        }
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `s(m) = ∫₀^π sin^m t dt` via `s(m) = (m−1)/m · s(m−2)`, `s(0) = π`, `s(1) = 2`.
pub fn wallis_integral(m: i64) -> Result<f64> {
    if m < 0 {
        return domain(format!("Wallis integral needs m ≥ 0, got {m}"));
    }
    let mut value = if m % 2 == 0 { PI } else { 2.0 };
    let mut k = if m % 2 == 0 { 2 } else { 3 };
    while k <= m {
        value *= (k - 1) as f64 / k as f64;
        k += 2;
    }
    Ok(value)
}

/// Exact form of [`wallis_integral`].
pub fn wallis_exact(m: u32) -> PiMultiple {
    let (mut value, start) = if m % 2 == 0 {
        (
            PiMultiple {
                coefficient: BigRational::one(),
                pi_power: 1,
            },
            2,
        )
    } else {
        (PiMultiple::rational(ratio(2, 1)), 3)
    };
    let mut k = start;
    while k <= m {
        value.coefficient *= ratio(k as i64 - 1, k as i64);
        k += 2;
    }
    value
}

/// Volume of the unit sphere `S^n ⊂ R^{n+1}`, `ω_n = 2π^{(n+1)/2} / Γ((n+1)/2)`.
pub fn sphere_volume(n: i64) -> Result<f64> {
    if n <= 0 {
        return domain(format!("sphere volume needs n ≥ 1, got {n}"));
    }
    Ok(unit_sphere_volume(n as u32))
}

/// `ω_d` for any `d ≥ 0` (`ω_0 = 2` counts the two points of `S^0`).
pub(crate) fn unit_sphere_volume(d: u32) -> f64 {
    let half = (d as f64 + 1.0) / 2.0;
    2.0 * PI.powf(half) / statrs::function::gamma::gamma(half)
}

/// Exact `ω_n = c_n π^{⌈n/2⌉}` with rational `c_n`.
pub fn sphere_volume_exact(n: u32) -> PiMultiple {
    // n odd: (n+1)/2 = k,       ω = 2 π^k / (k−1)!
    // n even: (n+1)/2 = k + ½,  ω = 2 · 4^k k! π^k / (2k)!
    let mut coefficient = ratio(2, 1);
    let pi_power;
    if n % 2 == 1 {
        let k = (n + 1) / 2;
        for j in 1..k {
            coefficient /= ratio(j as i64, 1);
        }
        pi_power = k as i32;
    } else {
        let k = n / 2;
        for j in 1..=k {
            // 4 j / ((2j − 1)(2j))  accumulates 4^k k! / (2k)!
            coefficient *= ratio(4 * j as i64, (2 * j as i64 - 1) * (2 * j as i64));
        }
        pi_power = k as i32;
    }
    PiMultiple {
        coefficient,
        pi_power,
    }
}

/// `c_{g,m} = g ω_n / s(m)`.
pub fn fiber_constant(t: FoliationType) -> f64 {
    let omega = unit_sphere_volume(t.n());
    let s = wallis_integral(t.m() as i64).expect("m ≥ 1 by construction");
    t.g() as f64 * omega / s
}

/// Exact form of [`fiber_constant`].
pub fn fiber_constant_exact(t: FoliationType) -> PiMultiple {
    sphere_volume_exact(t.n())
        .scale(t.g() as i64)
        .div(&wallis_exact(t.m()))
}

/// Round volume of the regular fiber `M_φ`: `c_{g,m} sin^m(gφ)` for `0 < φ < π/g`.
pub fn fiber_volume(t: FoliationType, phi: f64) -> Result<f64> {
    if !(phi > 0.0 && phi < t.strip_width()) {
        return domain(format!(
            "fiber angle φ = {phi} outside (0, π/{}) for {t}",
            t.g()
        ));
    }
    Ok(fiber_constant(t) * (t.g() as f64 * phi).sin().powi(t.m() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn wallis_base_cases() {
        assert_eq!(wallis_integral(0).unwrap(), PI);
        assert_eq!(wallis_integral(1).unwrap(), 2.0);
        assert!(rel(wallis_integral(2).unwrap(), PI / 2.0) < 1e-15);
        assert!(matches!(wallis_integral(-1), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn wallis_exact_matches_float() {
        for m in 0..40 {
            let exact = wallis_exact(m).to_f64();
            assert!(rel(exact, wallis_integral(m as i64).unwrap()) < 1e-14, "m = {m}");
        }
    }

    #[test]
    fn wallis_product_identity_is_exact() {
        // s(m) s(m−1) = 2π / m
        for m in 1..30u32 {
            let product = wallis_exact(m).mul(&wallis_exact(m - 1));
            assert_eq!(product.pi_power, 1);
            assert_eq!(product.coefficient, ratio(2, m as i64));
        }
    }

    #[test]
    fn sphere_volume_small_dimensions() {
        assert!(rel(sphere_volume(1).unwrap(), 2.0 * PI) < 1e-14);
        assert!(rel(sphere_volume(2).unwrap(), 4.0 * PI) < 1e-14);
        assert!(rel(sphere_volume(3).unwrap(), 2.0 * PI * PI) < 1e-14);
        assert!(sphere_volume(0).is_err());
        assert!(sphere_volume(-2).is_err());
        assert_eq!(unit_sphere_volume(0), 2.0);
    }

    #[test]
    fn sphere_volume_exact_forms() {
        assert_eq!(sphere_volume_exact(1).to_string(), "(2)·π");
        assert_eq!(sphere_volume_exact(2).to_string(), "(4)·π");
        assert_eq!(sphere_volume_exact(3).to_string(), "(2)·π^2");
        assert_eq!(sphere_volume_exact(4).to_string(), "(8/3)·π^2");
        for n in 1..=20 {
            let exact = sphere_volume_exact(n).to_f64();
            assert!(rel(exact, sphere_volume(n as i64).unwrap()) < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn sphere_volume_recurrence_exact() {
        // ω_n = s(n−1) ω_{n−1}
        for n in 2..=24u32 {
            let lhs = sphere_volume_exact(n);
            let rhs = wallis_exact(n - 1).mul(&sphere_volume_exact(n - 1));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn foliation_type_validation() {
        assert!(FoliationType::new(5, 1).is_err());
        assert!(FoliationType::new(1, 0).is_err());
        assert!(FoliationType::with_any_g(5, 1).is_ok());
        assert!(FoliationType::with_any_g(0, 1).is_err());
        let t = FoliationType::new(3, 2).unwrap();
        assert_eq!(t.n(), 7);
        assert!(FoliationType::rotational(1).is_err());
        assert_eq!(FoliationType::rotational(4).unwrap().m(), 3);
    }

    #[test]
    fn fiber_constant_values() {
        let c11 = fiber_constant(FoliationType::new(1, 1).unwrap());
        assert!(rel(c11, 2.0 * PI) < 1e-14);
        let c21 = fiber_constant(FoliationType::new(2, 1).unwrap());
        assert!(rel(c21, 2.0 * PI * PI) < 1e-14);
        for n in 2..=8u32 {
            let t = FoliationType::rotational(n).unwrap();
            assert!(rel(fiber_constant(t), sphere_volume(n as i64 - 1).unwrap()) < 1e-13);
            assert_eq!(fiber_constant_exact(t), sphere_volume_exact(n - 1));
        }
    }

    #[test]
    fn fiber_volume_peak_and_domain() {
        for g in ADMISSIBLE_G {
            let t = FoliationType::new(g, 2).unwrap();
            let peak = fiber_volume(t, t.symmetry_angle()).unwrap();
            assert!(rel(peak, fiber_constant(t)) < 1e-14);
            assert!(fiber_volume(t, 0.0).is_err());
            assert!(fiber_volume(t, t.strip_width()).is_err());
        }
    }
}
