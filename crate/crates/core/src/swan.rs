//! Parity of the number of irreducible factors of `x^n + x^s + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(k: u64) -> Self {
        if k % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

/// Which clause of Swan's theorem decided the parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SwanRule {
    /// `n` and `s` both even: the trinomial is a square.
    SquareCase,
    CaseA,
    CaseB,
    CaseC,
    /// None of (a), (b), (c) holds, so the count is odd.
    NoCaseHolds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NuParity {
    pub parity: Parity,
    pub rule_applied: SwanRule,
    /// `n` and `s` were both odd and `s` was replaced by `n - s` first.
    pub swapped: bool,
}

/// Parity of `ν(x^n + x^s + 1)`, the factor count with multiplicity.
pub fn nu_parity(n: u64, s: u64) -> Result<NuParity> {
    if !(0 < s && s < n) {
        return Err(Error::InvalidTrinomial { n, s });
    }
    if n % 2 == 0 && s % 2 == 0 {
        return Ok(NuParity { parity: Parity::Even, rule_applied: SwanRule::SquareCase, swapped: false });
    }
    let swapped = n % 2 == 1 && s % 2 == 1;
    let s = if swapped { n - s } else { s };

    let n8 = n % 8;
    let two_n_divisible = (2 * n as u128) % s as u128 == 0;
    let rule = if n % 2 == 0 && n != 2 * s && (n as u128 * s as u128 / 2) % 4 <= 1 {
        SwanRule::CaseA
    } else if !two_n_divisible && (n8 == 3 || n8 == 5) {
        SwanRule::CaseB
    } else if two_n_divisible && (n8 == 1 || n8 == 7) {
        SwanRule::CaseC
    } else {
        SwanRule::NoCaseHolds
    };
    let parity = if rule == SwanRule::NoCaseHolds { Parity::Odd } else { Parity::Even };
    Ok(NuParity { parity, rule_applied: rule, swapped })
}

/// True when `x^n + x^s + 1` is certainly reducible: `n` prime, `n ≡ ±3 mod 8`,
/// and `s` not 2 or `n - 2`.
pub fn corollary_filter(n: u64, s: u64) -> bool {
    let n8 = n % 8;
    (n8 == 3 || n8 == 5) && s != 2 && s + 2 != n && crate::numtheory::is_prime_u64(n)
}
