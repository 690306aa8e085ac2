//! Rounding to rationals with a bounded denominator.
//!
//! Optimal values of integer instances are fractions whose denominator is
//! bounded by a small constant (2 for pseudolinear, `n + 1` for
//! pseudoquadratic problems). Exact bisection and Newton steps round onto
//! that grid.
//!
//! ```
//! use tropopt::rounding::{round_bounded, Direction};
//! use tropopt::scalar::{int, ratio};
//!
//! assert_eq!(round_bounded(&ratio(17, 4), 2, Direction::Down), int(4));
//! assert_eq!(round_bounded(&ratio(5, 4), 3, Direction::Up), ratio(4, 3));
//! assert_eq!(round_bounded(&int(8), 2, Direction::StrictDown), ratio(15, 2));
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::scalar::Rational;

/// Which neighbour on the grid to return.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Least grid point `>= λ`.
    Up,
    /// Greatest grid point `<= λ`.
    Down,
    /// Greatest grid point `< λ`.
    StrictDown,
}

/// A rational whose denominator is known to be at most `bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedDenomRational {
    value: Rational,
    bound: u64,
}

impl BoundedDenomRational {
    /// Returns `None` if the denominator of `value` exceeds `bound`.
    pub fn new(value: Rational, bound: u64) -> Option<Self> {
        (bound >= 1 && *value.denom() <= BigInt::from(bound)).then_some(BoundedDenomRational { value, bound })
    }

    /// Rounds `value` onto the grid.
    pub fn round(value: &Rational, bound: u64, dir: Direction) -> Self {
        BoundedDenomRational { value: round_bounded(value, bound, dir), bound }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn into_value(self) -> Rational {
        self.value
    }
}

/// Rounds `lambda` to a rational with denominator at most `bound`.
///
/// Writes `λ = a + c/b` with `0 <= c < b` and uses
/// `e₁/d₁ = min_d ⌈(cd+1)/b⌉ / d` (up) and `e₂/d₂ = max_d ⌊(cd−1)/b⌋ / d` (down),
/// `d` ranging over `1..=bound`.
///
/// # Panics
/// If `bound == 0`.
pub fn round_bounded(lambda: &Rational, bound: u64, dir: Direction) -> Rational {
    assert!(bound >= 1, "denominator bound must be positive");
    let a = lambda.floor();
    let frac = lambda - &a;
    let c = frac.numer().clone();
    let b = frac.denom().clone();
    let on_grid = c.is_zero() || b <= BigInt::from(bound);

    match dir {
        Direction::Up | Direction::Down if on_grid => lambda.clone(),
        Direction::StrictDown if c.is_zero() => lambda - Rational::new(1.into(), bound.into()),
        Direction::Up => {
            let best = (1..=bound)
                .map(|d| {
                    let d = BigInt::from(d);
                    let e = (&c * &d + 1u32).div_ceil(&b);
                    Rational::new(e, d)
                })
                .min()
                .expect("bound >= 1");
            a + best
        }
        Direction::Down | Direction::StrictDown => {
            let best = (1..=bound)
                .map(|d| {
                    let d = BigInt::from(d);
                    let e = (&c * &d - 1u32).div_floor(&b);
                    Rational::new(e, d)
                })
                .max()
                .expect("bound >= 1");
            a + best
        }
    }
}

/// Largest multiple of `1/2` that is `<= v`.
pub fn floor_half(v: &Rational) -> Rational {
    round_bounded(v, 2, Direction::Down)
}

/// Smallest multiple of `1/2` that is `>= v`.
pub fn ceil_half(v: &Rational) -> Rational {
    round_bounded(v, 2, Direction::Up)
}
