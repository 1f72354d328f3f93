use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ModuleError;

/// Arbitrary-precision scalar used by every matrix in the crate.
pub type Int = BigInt;

/// The coefficient ring of every module.
///
/// Modules over `Rationals` are stored through a saturated ℤ-lattice
/// presentation: a relation lattice `L ⊆ ℤ^g` is always replaced by
/// `(L ⊗ ℚ) ∩ ℤ^g`, so integer arithmetic on the presentation computes the
/// same kernels, cokernels and homology as ℚ-linear algebra would.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

/// Arithmetic actually used on matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Arith {
    Z,
    Fp(u64),
}

impl Ring {
    pub fn prime_field(p: u64) -> Result<Ring, ModuleError> {
        if is_prime(p) {
            Ok(Ring::PrimeField(p))
        } else {
            Err(ModuleError::NotPrime(p))
        }
    }

    pub(crate) fn arith(self) -> Arith {
        match self {
            Ring::Integers | Ring::Rationals => Arith::Z,
            Ring::PrimeField(p) => Arith::Fp(p),
        }
    }

    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Reduce an integer into the canonical representative for this ring.
    pub fn reduce(self, a: &Int) -> Int {
        self.arith().reduce(a)
    }

    /// Whether `a` is a unit of the ring (after reduction).
    pub fn is_unit(self, a: &Int) -> bool {
        match self {
            Ring::Integers => a.abs().is_one(),
            Ring::Rationals => !a.is_zero(),
            Ring::PrimeField(p) => !a.mod_floor(&Int::from(p)).is_zero(),
        }
    }
}

impl Arith {
    pub(crate) fn reduce(self, a: &Int) -> Int {
        match self {
            Arith::Z => a.clone(),
            Arith::Fp(p) => a.mod_floor(&Int::from(p)),
        }
    }

    pub(crate) fn reduce_in_place(self, a: &mut Int) {
        if let Arith::Fp(p) = self {
            if a.is_negative() || *a >= Int::from(p) {
                *a = a.mod_floor(&Int::from(p));
            }
        }
    }

    /// Inverse of a nonzero element of 𝔽_p.
    pub(crate) fn inverse(self, a: &Int) -> Option<Int> {
        match self {
            Arith::Z => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            Arith::Fp(p) => {
                let p = Int::from(p);
                let a = a.mod_floor(&p);
                if a.is_zero() {
                    return None;
                }
                let e = a.extended_gcd(&p);
                Some(e.x.mod_floor(&p))
            }
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = ModuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Z" => Ok(Ring::Integers),
            "Q" => Ok(Ring::Rationals),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| ModuleError::BadRingTag(other.to_string()))?;
                Ring::prime_field(p)
            }
        }
    }
}

impl TryFrom<String> for Ring {
    type Error = ModuleError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Ring> for String {
    fn from(r: Ring) -> String {
        r.to_string()
    }
}
