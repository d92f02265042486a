//! Counts of irreducible, primitive and almost irreducible polynomials, and
//! census statistics over all trinomials of each degree.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ait::{ait, search_candidates, AitConfig};
use crate::apt::{apt, FactorTable};
use crate::error::{Error, Result};
use crate::numtheory::{distinct_prime_factors, divisors, mersenne, mobius};
use crate::poly::{powmod_big, DensePoly, Pow2Chain, Trinomial};
pub use crate::record::Mode;

/// Number of irreducible polynomials of degree `n` other than `x`.
pub fn irreducible_count(n: u64) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let total: BigInt =
        divisors(n).into_iter().map(|d| BigInt::from(mobius(n / d)) * (BigInt::from(mersenne(d)))).sum();
    let q = total / BigInt::from(n);
    debug_assert!(!q.is_negative());
    q.to_biguint().expect("count is nonnegative")
}

/// Number of primitive polynomials of degree `n`: `φ(2^n - 1) / n`.
pub fn primitive_count(n: u64, table: &FactorTable) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    let phi = table.factorization(n)?.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32));
    Ok(phi / n)
}

/// Polynomials of degree `r + δ` with nonzero constant term that have an
/// irreducible factor of degree `r`: `2^max(0, δ-1) · I_r`.
pub fn almost_irreducible_poly_count(r: u64, delta: u64) -> Result<BigUint> {
    if r == 0 || delta >= r {
        return Err(Error::Precondition(format!("need 0 <= delta < r, got r={r} delta={delta}")));
    }
    Ok(irreducible_count(r) << delta.saturating_sub(1))
}

/// Whether every squarefree factor of `rest` has degree greater than `i`
/// and `rest` is irreducible: Rabin's test at degree `m = deg rest`.
fn rabin_irreducible(chain: &mut ResidueCache, rest: &DensePoly, i: u64) -> bool {
    let m = rest.degree().expect("nonzero") as u64;
    let x = DensePoly::x();
    if !(chain.get(m) + &x).rem(rest).expect("nonzero").is_zero() {
        return false;
    }
    distinct_prime_factors(m).into_iter().map(|p| m / p).filter(|&q| q > i).all(|q| {
        let h = chain.get(q) + &x;
        rest.gcd(&h).expect("nonzero").is_one()
    })
}

/// `x^(2^i) mod T` for all `i` visited so far.
struct ResidueCache {
    chain: Pow2Chain,
    residues: Vec<DensePoly>,
}

impl ResidueCache {
    fn new(t: Trinomial) -> Self {
        Self { chain: Pow2Chain::new(t), residues: vec![DensePoly::x()] }
    }

    fn get(&mut self, i: u64) -> &DensePoly {
        while self.residues.len() as u64 <= i {
            self.chain.step();
            self.residues.push(self.chain.residue());
        }
        &self.residues[i as usize]
    }
}

/// The irreducible factor of degree `> n/2` of `x^n + x^s + 1`, if there is one.
pub(crate) fn largest_factor(n: u64, s: u64) -> Result<Option<DensePoly>> {
    let t = Trinomial::new(n, s)?;
    if n.gcd(&s) % 2 == 0 {
        // a perfect square: every factor has degree at most n/2
        return Ok(None);
    }
    let mut rest = t.to_dense();
    let mut cache = ResidueCache::new(t);
    let x = DensePoly::x();
    let rabin_from = (2 * (n.ilog2() as u64 + 1)).min(n / 2);
    let mut changed = true;
    for i in 1.. {
        let h = cache.get(i) + &x;
        let g = rest.gcd(&h).expect("nonzero");
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("gcd divides");
            changed = true;
        }
        let m = rest.degree().expect("nonzero") as u64;
        if 2 * m <= n {
            return Ok(None);
        }
        // every factor left has degree > i, so a product of two needs degree >= 2(i+1)
        if 2 * (i + 1) > m {
            return Ok(Some(rest));
        }
        if i >= rabin_from && changed {
            changed = false;
            if rabin_irreducible(&mut cache, &rest, i) {
                return Ok(Some(rest));
            }
        }
    }
    unreachable!("the loop returns once i reaches deg/2")
}

/// The degree `r > n/2` of an irreducible factor of `x^n + x^s + 1`, if any.
pub fn largest_factor_profile(n: u64, s: u64) -> Result<Option<u64>> {
    Ok(largest_factor(n, s)?.map(|d| d.degree().expect("nonzero") as u64))
}

/// Whether `x` has order `2^r - 1` modulo the degree-`r` factor `d` of `T`.
fn large_factor_is_primitive(t: Trinomial, d: &DensePoly, table: &FactorTable) -> Result<bool> {
    let r = d.degree().expect("nonzero") as u64;
    let order = mersenne(r);
    let primes = table.distinct_primes(r)?;
    if primes.len() == 1 && primes[0] == order {
        return Ok(true);
    }
    for p in primes {
        let h = powmod_big(&DensePoly::x(), &(&order / &p), t) + DensePoly::one();
        if h.rem(d)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-degree counts and running averages; apt columns are `None` when unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub n: u64,
    pub count_ait: u64,
    pub count_apt: Option<u64>,
    pub running_e_ait: Ratio<u64>,
    pub running_e_apt: Option<Ratio<u64>>,
}

/// `q` rounded half up to `places` decimals.
pub fn format_fixed(q: &Ratio<u64>, places: u32) -> String {
    let scale = 10u128.pow(places);
    let num = *q.numer() as u128;
    let den = *q.denom() as u128;
    let scaled = (2 * num * scale + den) / (2 * den);
    let int = scaled / scale;
    let frac = scaled % scale;
    if places == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = places as usize)
    }
}

impl CensusRow {
    pub fn csv_header(mode: Mode) -> &'static str {
        match mode {
            Mode::Ait => "n,N_ait,E_ait",
            Mode::Apt => "n,N_ait,E_ait,N_apt,E_apt",
        }
    }

    /// One CSV line; `exact` prints the averages as `p/q`.
    pub fn to_csv(&self, mode: Mode, exact: bool) -> String {
        let render = |q: &Ratio<u64>| if exact { format!("{}/{}", q.numer(), q.denom()) } else { format_fixed(q, 4) };
        let mut line = format!("{},{},{}", self.n, self.count_ait, render(&self.running_e_ait));
        if mode == Mode::Apt {
            let count = self.count_apt.map_or("unknown".to_string(), |c| c.to_string());
            let e = self.running_e_apt.as_ref().map_or("unknown".to_string(), render);
            line.push_str(&format!(",{count},{e}"));
        }
        line
    }
}

/// `(N_ait(n), N_apt(n))` over `0 < s < n`; the apt count is `None` when a
/// needed factorization of `2^r - 1` is missing.
fn degree_counts(n: u64, mode: Mode, table: &FactorTable) -> Result<(u64, Option<u64>)> {
    let per_s: Vec<(bool, Option<bool>)> = (1..=n / 2)
        .into_par_iter()
        .map(|s| -> Result<(bool, Option<bool>)> {
            let Some(d) = largest_factor(n, s)? else {
                return Ok((false, Some(false)));
            };
            if mode == Mode::Ait {
                return Ok((true, None));
            }
            let t = Trinomial::new(n, s)?;
            let primitive = match large_factor_is_primitive(t, &d, table) {
                Ok(p) => Some(p),
                Err(Error::MissingFactorization(_)) => None,
                Err(e) => return Err(e),
            };
            Ok((true, primitive))
        })
        .collect::<Result<_>>()?;
    let mut ait_count = 0;
    let mut apt_count = Some(0);
    for (s, (is_ait, is_apt)) in (1..=n / 2).zip(per_s) {
        // s and n - s give reciprocal trinomials, which factor alike
        let weight = if 2 * s == n { 1 } else { 2 };
        ait_count += weight * u64::from(is_ait);
        apt_count = match (apt_count, is_apt) {
            (Some(c), Some(p)) => Some(c + weight * u64::from(p)),
            _ => None,
        };
    }
    Ok((ait_count, if mode == Mode::Apt { apt_count } else { None }))
}

/// Census rows for `n = 2..=n_max`.
pub fn census(n_max: u64, mode: Mode, table: &FactorTable) -> Result<Vec<CensusRow>> {
    if n_max < 2 {
        return Err(Error::Precondition(format!("census needs n_max >= 2, got {n_max}")));
    }
    let counts: Vec<(u64, Option<u64>)> =
        (2..=n_max).into_par_iter().map(|n| degree_counts(n, mode, table)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(counts.len());
    let mut sum_ait = 0u64;
    let mut sum_apt = Some(0u64);
    for (n, (count_ait, count_apt)) in (2..=n_max).zip(counts) {
        sum_ait += count_ait;
        sum_apt = sum_apt.zip(count_apt).map(|(a, b)| a + b);
        let pairs = n * (n - 1) / 2;
        rows.push(CensusRow {
            n,
            count_ait,
            count_apt,
            running_e_ait: Ratio::new(sum_ait, pairs),
            running_e_apt: if mode == Mode::Apt { sum_apt.map(|a| Ratio::new(a, pairs)) } else { None },
        });
    }
    Ok(rows)
}

/// Default cap on the increment searched by [`min_increment`].
pub const DEFAULT_DELTA_CAP: u64 = 64;

/// Smallest increment and smallest `s <= (r+δ)/2` giving an almost irreducible
/// (or almost primitive) trinomial with exponent `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Increment {
    pub delta: u64,
    pub s: u64,
}

pub fn min_increment(r: u64, mode: Mode, table: &FactorTable, delta_cap: u64) -> Result<Option<Increment>> {
    if r < 2 {
        return Err(Error::Precondition(format!("exponent must be at least 2, got {r}")));
    }
    if mode == Mode::Apt {
        table.distinct_primes(r)?;
    }
    let cfg = AitConfig::default();
    for delta in (0..=delta_cap.min(r - 1)).filter(|&d| d != 1) {
        let candidates = search_candidates(r, delta, &cfg, mode == Mode::Apt)?;
        let hit = candidates
            .par_iter()
            .map(|&s| -> Result<Option<u64>> {
                let accepted = match mode {
                    Mode::Ait => ait(r, s, delta, &cfg)?.accepted,
                    Mode::Apt => apt(r, s, delta, table, &cfg)?.accepted,
                };
                Ok(accepted.then_some(s))
            })
            .find_first(|res| !matches!(res, Ok(None)));
        match hit {
            Some(Ok(Some(s))) => return Ok(Some(Increment { delta, s })),
            Some(Err(e)) => return Err(e),
            _ => {}
        }
    }
    Ok(None)
}

/// Fraction of degree-`n` polynomials with nonzero constant term that have an
/// irreducible factor of degree `> n/2`, from the closed form.
pub fn almost_irreducible_fraction(n: u64) -> Result<Ratio<BigUint>> {
    if n < 2 {
        return Err(Error::Precondition(format!("need n >= 2, got {n}")));
    }
    let total: BigUint = (n / 2 + 1..=n).map(|r| almost_irreducible_poly_count(r, n - r)).sum::<Result<_>>()?;
    Ok(Ratio::new(total, BigUint::one() << (n - 1)))
}

/// Decimal approximation, for reporting only.
pub fn ratio_to_f64(q: &Ratio<BigUint>) -> f64 {
    let bits = q.denom().bits().max(q.numer().bits());
    let shift = bits.saturating_sub(60);
    let num = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let den = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::factor;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(irreducible_count(1), big(1));
        assert_eq!(irreducible_count(4), big(3));
        assert_eq!(irreducible_count(5), big(6));
        for n in 1..=64 {
            let sum: BigUint = divisors(n).into_iter().map(|d| irreducible_count(d) * d).sum();
            assert_eq!(sum, mersenne(n), "n = {n}");
        }
    }

    #[test]
    fn primitive_counts() {
        let table = FactorTable::new();
        assert_eq!(primitive_count(3, &table).unwrap(), big(2));
        assert_eq!(primitive_count(4, &table).unwrap(), big(2));
        assert_eq!(primitive_count(6, &table).unwrap(), big(6));
        for n in 1..=32 {
            assert!(primitive_count(n, &table).unwrap() <= irreducible_count(n));
        }
        assert_eq!(primitive_count(200, &table), Err(Error::MissingFactorization(200)));
    }

    #[test]
    fn almost_irreducible_counts() {
        assert_eq!(almost_irreducible_poly_count(5, 3).unwrap(), big(24));
        assert_eq!(almost_irreducible_poly_count(7, 0).unwrap(), irreducible_count(7));
        assert_eq!(almost_irreducible_poly_count(4, 1).unwrap(), big(3));
        assert!(almost_irreducible_poly_count(4, 4).is_err());
    }

    fn brute_profile(n: u64, s: u64) -> Option<u64> {
        let t = Trinomial::new(n, s).unwrap().to_dense();
        factor(&t).unwrap().into_iter().map(|(p, _)| p.degree().unwrap() as u64).find(|&d| 2 * d > n)
    }

    #[test]
    fn profiles_match_factorization() {
        assert_eq!(largest_factor_profile(16, 3).unwrap(), Some(13));
        assert_eq!(largest_factor_profile(12, 1).unwrap(), None);
        assert_eq!(largest_factor_profile(2, 1).unwrap(), Some(2));
        for n in 2..=40 {
            for s in 1..n {
                let got = largest_factor_profile(n, s).unwrap();
                assert_eq!(got, brute_profile(n, s), "n={n} s={s}");
                assert_eq!(got, largest_factor_profile(n, n - s).unwrap());
            }
        }
    }

    #[test]
    fn large_factor_is_exact() {
        let d = largest_factor(16, 3).unwrap().unwrap();
        assert_eq!(d, "x^13+x^12+x^11+x^9+x^6+x^5+x^4+x^2+1".parse().unwrap());
    }

    #[test]
    fn small_census() {
        let table = FactorTable::new();
        let rows = census(2, Mode::Ait, &table).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].count_ait, 1);
        assert_eq!(rows[0].running_e_ait, Ratio::from_integer(1));
        let rows = census(14, Mode::Apt, &table).unwrap();
        let twelve = &rows[10];
        assert_eq!(twelve.n, 12);
        assert_eq!(twelve.count_apt, Some(0));
        assert!(twelve.count_ait > 0);
        for row in &rows {
            let apt = row.count_apt.unwrap();
            assert!(apt <= row.count_ait && row.count_ait < row.n);
        }
        assert_eq!(rows[0].to_csv(Mode::Apt, false), "2,1,1.0000,1,1.0000");
    }

    #[test]
    fn missing_factorizations_give_unknown_rows() {
        // degree 270 has large factors of degree > 128, beyond the built-in factorizer
        let (ait_count, apt_count) = degree_counts(270, Mode::Apt, &FactorTable::new()).unwrap();
        assert!(ait_count > 0);
        assert_eq!(apt_count, None);
    }

    #[test]
    fn fixed_point_rendering() {
        assert_eq!(format_fixed(&Ratio::new(1, 3), 4), "0.3333");
        assert_eq!(format_fixed(&Ratio::new(2, 3), 4), "0.6667");
        assert_eq!(format_fixed(&Ratio::new(1, 20000), 4), "0.0001");
        assert_eq!(format_fixed(&Ratio::new(7, 2), 0), "4");
    }

    #[test]
    fn minimal_increments() {
        let table = FactorTable::new();
        assert_eq!(min_increment(8, Mode::Apt, &table, 16).unwrap(), Some(Increment { delta: 5, s: 1 }));
        assert_eq!(min_increment(13, Mode::Apt, &table, 16).unwrap(), Some(Increment { delta: 3, s: 3 }));
        assert_eq!(min_increment(107, Mode::Apt, &table, 16).unwrap(), Some(Increment { delta: 2, s: 8 }));
        assert_eq!(min_increment(13, Mode::Apt, &table, 2).unwrap(), None);
    }

    #[test]
    fn closed_form_fraction() {
        let q = almost_irreducible_fraction(14).unwrap();
        let v = ratio_to_f64(&q);
        assert!((0.6..=0.78).contains(&v), "{v}");
    }
}
