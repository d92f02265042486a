//! Cheap exclusions that need no arithmetic modulo the full trinomial: gcd
//! conditions, Swan parity, and small factors read off modulo `x^m + 1`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::poly::{trinomial_mod_cyclic, DensePoly};
use crate::swan::{nu_parity, Parity};

/// `2^d - 1` for `d = 2..=8`.
pub const DEFAULT_CYCLOTOMIC_MODULI: [u64; 7] = [3, 7, 15, 31, 63, 127, 255];

/// Largest factor degree the cyclotomic profile resolves exactly.
const PROFILE_DEGREE: usize = 8;

/// Whether `(n, s)` survives: `gcd(n, s)` odd, and `gcd(n, s) = 1` when a
/// primitive factor is the goal.
pub fn gcd_filters(n: u64, s: u64, primitive_target: bool) -> bool {
    let g = n.gcd(&s);
    g % 2 == 1 && (!primitive_target || g == 1)
}

fn cyclic_modulus(m: u64) -> DensePoly {
    DensePoly::from_exponents(&[m as usize, 0])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicReport {
    pub modulus: u64,
    /// `gcd(x^n + x^s + 1, x^m + 1)`; 1 certifies that no factor is shared.
    pub common_factor: DensePoly,
}

impl CyclotomicReport {
    /// The forced common factor, if there is one.
    pub fn forced_factor(&self) -> Option<&DensePoly> {
        (!self.common_factor.is_one()).then_some(&self.common_factor)
    }
}

/// `gcd(x^n + x^s + 1, x^m + 1)` computed from exponents mod `m` only.
pub fn cyclotomic_filter(n: u64, s: u64, m: u64) -> Result<CyclotomicReport> {
    if m == 0 || m > 1 << 16 {
        return Err(Error::Precondition(format!("cyclic modulus {m} out of range")));
    }
    let reduced = trinomial_mod_cyclic(n, s, m)?;
    let common_factor = reduced.gcd(&cyclic_modulus(m))?;
    Ok(CyclotomicReport { modulus: m, common_factor })
}

/// Number of irreducible factors of each degree `j <= 8` (index `j`) of a
/// square-free `x^n + x^s + 1`.
///
/// `x^(2^d - 1) + 1` is the product of the irreducibles of degree dividing `d`
/// other than `x`, so the degrees of the gcds for `d = 1..=8` pin the counts down.
pub fn cyclotomic_profile(n: u64, s: u64) -> Result<[u64; PROFILE_DEGREE + 1]> {
    let mut by_d = [0u64; PROFILE_DEGREE + 1];
    for (d, slot) in by_d.iter_mut().enumerate().skip(1) {
        let report = cyclotomic_filter(n, s, (1 << d) - 1)?;
        *slot = report.common_factor.degree().unwrap_or(0) as u64;
    }
    Ok(counts_from_gcd_degrees(&by_d))
}

fn counts_from_gcd_degrees(by_d: &[u64; PROFILE_DEGREE + 1]) -> [u64; PROFILE_DEGREE + 1] {
    let mut counts = [0u64; PROFILE_DEGREE + 1];
    for j in 1..=PROFILE_DEGREE {
        let lower: u64 = (1..j).filter(|i| j % i == 0).map(|i| i as u64 * counts[i]).sum();
        counts[j] = (by_d[j] - lower) / j as u64;
    }
    counts
}

fn irreducible_count_capped(j: u64, cap: u64) -> u64 {
    if j >= 64 {
        return cap;
    }
    let total: i128 = crate::numtheory::divisors(j)
        .into_iter()
        .map(|d| crate::numtheory::mobius(j / d) as i128 * ((1i128 << d) - 1))
        .sum();
    ((total / j as i128) as u64).min(cap)
}

/// Parities of `k` for which a square-free product of `k` irreducibles, each of
/// degree at least `min_degree`, can have total degree `total`.
pub fn feasible_count_parities(total: u64, min_degree: u64) -> Vec<Parity> {
    let total_us = total as usize;
    // reachable[sum] bit 0: even count reachable, bit 1: odd count reachable
    let mut reachable = vec![0u8; total_us + 1];
    reachable[0] = 1;
    for j in min_degree.max(1)..=total {
        let cap = irreducible_count_capped(j, total / j);
        let before = reachable.clone();
        for c in 1..=cap {
            let shift = (c * j) as usize;
            let flip = c % 2 == 1;
            for sum in 0..=total_us.saturating_sub(shift) {
                let bits = before[sum];
                if bits != 0 {
                    let moved = if flip { ((bits & 1) << 1) | (bits >> 1) } else { bits };
                    reachable[sum + shift] |= moved;
                }
            }
        }
    }
    let bits = reachable[total_us];
    let mut out = Vec::new();
    if bits & 1 != 0 {
        out.push(Parity::Even);
    }
    if bits & 2 != 0 {
        out.push(Parity::Odd);
    }
    out
}

/// Whether `T = T'(x^g)` can have an irreducible factor of degree `r`.
///
/// A root of such a factor has its `g`-th power a root of a factor of `T'` of
/// degree `e`, so `r = e·k` with `e | r`, `2 <= e <= n/g` and `k <= g`. For
/// prime `r` this leaves `g = 1`.
pub fn gcd_allows_degree(r: u64, n: u64, g: u64) -> bool {
    crate::numtheory::divisors(r).into_iter().any(|e| e >= 2 && e * g <= n && r <= e * g)
}

/// Why a candidate `s` was excluded before any arithmetic modulo the trinomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exclusion {
    GcdEven,
    GcdNotOne,
    /// `T(x) = T'(x^g)` with `g = gcd(n, s)`, and no factor degree of `T'` can lift to `r`.
    GcdDegree {
        gcd: u64,
    },
    /// Swan parity is incompatible with every possible factor count of the small part.
    Parity,
    /// A factor of this degree is present but cannot belong to `S` or be the large factor.
    ForcedFactor {
        degree: u64,
        modulus: u64,
    },
    /// The small factors visible modulo `x^(2^d - 1) + 1` cannot make up degree δ
    /// (or, for `r <= 8`, the degree-`r` factor is absent).
    ProfileMismatch {
        visible_degree: u64,
    },
}

/// Exclusion filter for all `s` at fixed `(r, δ)`; the cyclic reductions only
/// depend on `s mod m`, so they are tabulated once per modulus.
#[derive(Clone, Debug)]
pub struct ExclusionScan {
    r: u64,
    delta: u64,
    n: u64,
    primitive_target: bool,
    small_part_parities: Vec<Parity>,
    /// `gcd_degree[d][s mod (2^d - 1)]`
    gcd_degree: Vec<Vec<u16>>,
}

impl ExclusionScan {
    pub fn new(r: u64, delta: u64, primitive_target: bool) -> Result<Self> {
        if r < 2 || delta >= r {
            return Err(Error::Precondition(format!("need 0 <= delta < r, got r={r} delta={delta}")));
        }
        let n = r + delta;
        let mut gcd_degree = vec![Vec::new()];
        for d in 1..=PROFILE_DEGREE {
            let m = (1u64 << d) - 1;
            let modulus = cyclic_modulus(m);
            let row = (0..m)
                .map(|a| {
                    // s ≡ a (mod m); the exponent a stands in for s
                    let reduced = trinomial_mod_cyclic(n, a, m).expect("m >= 1");
                    reduced.gcd(&modulus).expect("nonzero").degree().unwrap_or(0) as u16
                })
                .collect();
            gcd_degree.push(row);
        }
        Ok(Self { r, delta, n, primitive_target, small_part_parities: feasible_count_parities(delta, 2), gcd_degree })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Counts `c_j` of irreducible factors of degree `j <= 8` of `x^n + x^s + 1`.
    pub fn profile(&self, s: u64) -> [u64; PROFILE_DEGREE + 1] {
        let mut by_d = [0u64; PROFILE_DEGREE + 1];
        for (d, slot) in by_d.iter_mut().enumerate().skip(1) {
            let m = (1u64 << d) - 1;
            *slot = self.gcd_degree[d][(s % m) as usize] as u64;
        }
        counts_from_gcd_degrees(&by_d)
    }

    /// Gcd and Swan-parity conditions only.
    pub fn passes_gcd_and_parity(&self, s: u64) -> std::result::Result<(), Exclusion> {
        let g = self.n.gcd(&s);
        if g % 2 == 0 {
            return Err(Exclusion::GcdEven);
        }
        if self.primitive_target && g != 1 {
            return Err(Exclusion::GcdNotOne);
        }
        if g != 1 && !gcd_allows_degree(self.r, self.n, g) {
            return Err(Exclusion::GcdDegree { gcd: g });
        }
        let nu = nu_parity(self.n, s).expect("0 < s < n").parity;
        // the full factor count is k + 1 for the k small factors
        if !self.small_part_parities.iter().any(|&k| k != nu) {
            return Err(Exclusion::Parity);
        }
        Ok(())
    }

    pub fn verdict(&self, s: u64) -> std::result::Result<(), Exclusion> {
        self.passes_gcd_and_parity(s)?;
        let counts = self.profile(s);
        let mut visible_degree = 0;
        let mut visible_count = 0;
        for (j, &c) in counts.iter().enumerate().skip(1) {
            let j = j as u64;
            if j == self.r {
                if c != 1 {
                    return Err(Exclusion::ProfileMismatch { visible_degree: j * c });
                }
            } else if c > 0 && j > self.delta {
                return Err(Exclusion::ForcedFactor { degree: j, modulus: (1 << j) - 1 });
            } else {
                visible_degree += j * c;
                visible_count += c;
            }
        }
        if visible_degree > self.delta {
            return Err(Exclusion::ProfileMismatch { visible_degree });
        }
        let rest = self.delta - visible_degree;
        let nu = nu_parity(self.n, s).expect("0 < s < n").parity;
        let possible = feasible_count_parities(rest, PROFILE_DEGREE as u64 + 1);
        let visible = Parity::of(visible_count);
        let fits = possible.iter().any(|&k| {
            let total = if k == visible { Parity::Even } else { Parity::Odd };
            total != nu
        });
        if !fits {
            return Err(Exclusion::ProfileMismatch { visible_degree });
        }
        Ok(())
    }

    /// Surviving `s` in `1..=n/2`, ascending.
    pub fn survivors(&self) -> Vec<u64> {
        use rayon::prelude::*;
        (1..=self.n / 2).into_par_iter().filter(|&s| self.verdict(s).is_ok()).collect()
    }
}
