//! Truncated Chern characters on `P^2`, written in powers of the hyperplane class.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `ch = rank + c1 H + ch2 H^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernCharacter {
    pub rank: i64,
    pub c1: i64,
    #[serde(with = "crate::p2::chern::rational_string")]
    pub ch2: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ChernCharacter {
    pub fn new(rank: i64, c1: i64, ch2: BigRational) -> Self {
        ChernCharacter { rank, c1, ch2 }
    }

    pub fn zero() -> Self {
        ChernCharacter::new(0, 0, BigRational::zero())
    }

    /// `ch(O(k)) = exp(kH)`.
    pub fn line(k: i64) -> Self {
        ChernCharacter::new(1, k, q(k * k) / q(2))
    }

    /// From rank and Chern classes: `ch2 = (c1^2 - 2 c2) / 2`.
    pub fn from_classes(rank: i64, c1: i64, c2: &BigRational) -> Self {
        ChernCharacter::new(rank, c1, (q(c1 * c1) - c2 * q(2)) / q(2))
    }

    /// Second Chern class `c2 = c1^2 / 2 - ch2`.
    pub fn c2(&self) -> BigRational {
        q(self.c1 * self.c1) / q(2) - &self.ch2
    }

    /// Bogomolov-type discriminant `2 r c2 - (r - 1) c1^2`.
    pub fn discriminant(&self) -> BigRational {
        q(2 * self.rank) * self.c2() - q((self.rank - 1) * self.c1 * self.c1)
    }

    pub fn add(&self, other: &Self) -> Self {
        ChernCharacter::new(
            self.rank + other.rank,
            self.c1 + other.c1,
            &self.ch2 + &other.ch2,
        )
    }

    /// Product in the Chern ring, truncated above degree 2.
    pub fn tensor(&self, other: &Self) -> Self {
        ChernCharacter::new(
            self.rank * other.rank,
            self.rank * other.c1 + self.c1 * other.rank,
            q(self.rank) * &other.ch2 + q(self.c1 * other.c1) + &self.ch2 * q(other.rank),
        )
    }

    /// `n` copies of the bundle (virtual for negative `n`).
    pub fn scale(&self, n: i64) -> Self {
        ChernCharacter::new(n * self.rank, n * self.c1, &self.ch2 * q(n))
    }

    pub fn dual(&self) -> Self {
        ChernCharacter::new(self.rank, -self.c1, self.ch2.clone())
    }

    pub fn twist(&self, k: i64) -> Self {
        self.tensor(&ChernCharacter::line(k))
    }

    /// `ch(End E) = ch(E) ch(E^*)`.
    pub fn end(&self) -> Self {
        self.tensor(&self.dual())
    }

    /// Hirzebruch–Riemann–Roch on `P^2`: `χ = ch2 + (3/2) c1 + rank`.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let chi = &self.ch2 + q(3 * self.c1) / q(2) + q(self.rank);
        if !chi.denom().is_one() {
            return Err(Error::InconsistentInput(format!(
                "Euler characteristic {chi} of {self} is not an integer"
            )));
        }
        chi.to_integer()
            .to_i64()
            .ok_or_else(|| Error::InconsistentInput("Euler characteristic overflows".into()))
    }

    /// Whether `c1` and `c2` are integral, as for an actual vector bundle.
    pub fn is_integral(&self) -> bool {
        self.c2().denom().is_one()
    }
}

impl fmt::Display for ChernCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.rank, self.c1, self.ch2)
    }
}

pub(crate) mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BigRational, D::Error> {
        let s = String::deserialize(deserializer)?;
        crate::rate::parse_rational(&s).map_err(D::Error::custom)
    }
}
