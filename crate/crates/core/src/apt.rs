//! Primitivity of the large factor, factor tables for `2^r - 1`, and periods.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::ait::{ait, search_candidates, AitConfig, AitVerdict, RejectStage};
use crate::error::{Error, Result};
use crate::numtheory::{
    cyclotomic_at_2, divisors, factor_biguint, factor_u64, is_probable_prime, lucas_lehmer, mersenne, order_by_descent,
};
use crate::poly::{factor, powmod_big, powmod_dense, rem_trinomial, DensePoly, Trinomial};
use crate::record::{Mode, SearchRecord};

/// Largest `r` that [`factor_small_mersenne`] handles by default.
pub const SMALL_FACTOR_CUTOFF: u64 = 128;

/// Largest degree accepted by [`period_of_small`].
pub const SMALL_DEGREE_LIMIT: usize = 64;

/// `M` entries up to this exponent are checked with Lucas–Lehmer on load.
const MERSENNE_CHECK_LIMIT: u64 = 5000;

static BUNDLED_TABLE: &str = include_str!("../data/factors.txt");

/// Complete factorizations of `2^r - 1`, keyed by `r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorTable {
    entries: BTreeMap<u64, Vec<(BigUint, u32)>>,
}

fn group(mut primes: Vec<BigUint>) -> Vec<(BigUint, u32)> {
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

impl FactorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The table shipped with the library (parsed once).
    pub fn bundled() -> &'static FactorTable {
        static TABLE: OnceLock<FactorTable> = OnceLock::new();
        TABLE.get_or_init(|| FactorTable::parse(BUNDLED_TABLE).expect("bundled factor table is valid"))
    }

    /// Adds an entry after checking that the primes multiply to `2^r - 1`.
    pub fn insert(&mut self, r: u64, primes: Vec<BigUint>) -> Result<()> {
        if r == 0 {
            return Err(Error::FactorProductMismatch { r });
        }
        let product = primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        if product != mersenne(r) || primes.iter().any(|p| !is_probable_prime(p)) {
            return Err(Error::FactorProductMismatch { r });
        }
        self.entries.insert(r, group(primes));
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        load_factor_table(text.as_bytes())
    }

    pub fn get(&self, r: u64) -> Option<&[(BigUint, u32)]> {
        self.entries.get(&r).map(Vec::as_slice)
    }

    pub fn contains(&self, r: u64) -> bool {
        self.entries.contains_key(&r)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries of `other` replace those of `self`.
    pub fn merge(&mut self, other: &FactorTable) {
        for (r, e) in &other.entries {
            self.entries.insert(*r, e.clone());
        }
    }

    /// Prime powers of `2^r - 1`, from the table or the built-in factorizer.
    pub fn factorization(&self, r: u64) -> Result<Vec<(BigUint, u32)>> {
        if let Some(e) = self.get(r) {
            return Ok(e.to_vec());
        }
        if r <= SMALL_FACTOR_CUTOFF {
            return cached_small_factorization(r);
        }
        Err(Error::MissingFactorization(r))
    }

    /// Distinct primes of `2^r - 1`, from the table or the built-in factorizer.
    pub fn distinct_primes(&self, r: u64) -> Result<Vec<BigUint>> {
        Ok(self.factorization(r)?.into_iter().map(|(p, _)| p).collect())
    }

    /// True when `2^r - 1` is known to be prime.
    pub fn is_mersenne_prime(&self, r: u64) -> Result<bool> {
        Ok(self.distinct_primes(r)?.len() == 1 && self.get(r).map_or(true, |e| e[0].1 == 1))
    }

    /// Text form accepted by [`load_factor_table`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (r, e) in &self.entries {
            out.push_str(&format!("{r}:"));
            if e.len() == 1 && e[0].1 == 1 && *r > SMALL_FACTOR_CUTOFF {
                out.push_str(" M");
            } else {
                for (p, m) in e {
                    for _ in 0..*m {
                        out.push_str(&format!(" {p}"));
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Parses lines `r: p1 p2 ...` (repeated primes give multiplicity, `#`
/// starts a comment). A lone `M` declares `2^r - 1` prime.
pub fn load_factor_table(source: impl BufRead) -> Result<FactorTable> {
    let mut table = FactorTable::new();
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| Error::FactorTableParse { line: line_no, reason };
        let line = line.map_err(|e| err(e.to_string()))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (r, rest) = body.split_once(':').ok_or_else(|| err("missing ':'".into()))?;
        let r: u64 = r.trim().parse().map_err(|e| err(format!("bad exponent {r:?}: {e}")))?;
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        if tokens == ["M"] {
            if r < 2 || (r <= MERSENNE_CHECK_LIMIT && !lucas_lehmer(r)) {
                return Err(Error::FactorProductMismatch { r });
            }
            table.entries.insert(r, vec![(mersenne(r), 1)]);
            continue;
        }
        if tokens.is_empty() {
            return Err(err("no primes listed".into()));
        }
        let primes = tokens
            .iter()
            .map(|t| t.parse::<BigUint>().map_err(|e| err(format!("bad prime {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        table.insert(r, primes)?;
    }
    Ok(table)
}

fn cached_small_factorization(r: u64) -> Result<Vec<(BigUint, u32)>> {
    static CACHE: Mutex<BTreeMap<u64, Vec<(BigUint, u32)>>> = Mutex::new(BTreeMap::new());
    if let Some(e) = CACHE.lock().expect("cache lock").get(&r) {
        return Ok(e.clone());
    }
    let e = group(factor_small_mersenne(r)?);
    CACHE.lock().expect("cache lock").insert(r, e.clone());
    Ok(e)
}

/// Prime factors of `2^r - 1`, ascending with multiplicity, found by splitting
/// into cyclotomic parts and factoring each with trial division and Pollard rho.
pub fn factor_small_mersenne(r: u64) -> Result<Vec<BigUint>> {
    factor_mersenne_with_cutoff(r, SMALL_FACTOR_CUTOFF)
}

pub fn factor_mersenne_with_cutoff(r: u64, cutoff: u64) -> Result<Vec<BigUint>> {
    if r > cutoff {
        return Err(Error::FactoringCutoff { r, cutoff });
    }
    if r == 0 {
        return Err(Error::Precondition("2^0 - 1 has no factorization".into()));
    }
    let mut primes: Vec<BigUint> =
        divisors(r).into_par_iter().flat_map_iter(|d| factor_biguint(&cyclotomic_at_2(d))).collect();
    primes.sort();
    Ok(primes)
}

/// `f = small_period / gcd(small_period, 2^r - 1)`, so that `(2^r - 1) f` is
/// `lcm(2^r - 1, small_period)`.
pub fn f_factor(r: u64, small_period: &BigUint) -> BigUint {
    if small_period.is_zero() {
        return BigUint::zero();
    }
    // 2^r - 1 mod small_period without forming 2^r
    let m = (BigUint::from(2u32).modpow(&BigUint::from(r), small_period) + small_period - 1u32) % small_period;
    small_period / small_period.gcd(&m)
}

fn check_small(s: &DensePoly) -> Result<()> {
    let deg = s.degree().ok_or_else(|| Error::Precondition("zero polynomial has no period".into()))?;
    if !s.coeff(0) {
        return Err(Error::DivisibleByX);
    }
    if deg > SMALL_DEGREE_LIMIT {
        return Err(Error::DegreeTooLarge { degree: deg, limit: SMALL_DEGREE_LIMIT });
    }
    if !s.is_square_free() {
        return Err(Error::NotSquareFree);
    }
    Ok(())
}

/// Period of `x` modulo an irreducible `p` of degree `d <= 64`.
fn irreducible_period(p: &DensePoly) -> BigUint {
    let d = p.degree().expect("nonzero") as u64;
    let group_order = mersenne(d);
    let mut primes = factor_u64(group_order.to_u64().expect("d <= 64"));
    primes.dedup();
    let primes: Vec<BigUint> = primes.into_iter().map(BigUint::from).collect();
    order_by_descent(&group_order, &primes, |e| powmod_dense(&DensePoly::x(), e, p).expect("nonzero modulus").is_one())
}

/// Irreducible factors of `s` with their periods, by ascending degree.
pub fn small_factor_periods(s: &DensePoly) -> Result<Vec<(DensePoly, BigUint)>> {
    check_small(s)?;
    Ok(factor(s)?
        .into_iter()
        .map(|(p, _)| {
            let period = irreducible_period(&p);
            (p, period)
        })
        .collect())
}

/// Multiplicative order of `x` modulo a small square-free `s` with `s(0) = 1`.
pub fn period_of_small(s: &DensePoly) -> Result<BigUint> {
    Ok(small_factor_periods(s)?.into_iter().fold(BigUint::one(), |acc, (_, e)| acc.lcm(&e)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodInfo {
    pub rho: BigUint,
    pub f: BigUint,
    pub small_period: BigUint,
    pub small_factors: Vec<(DensePoly, BigUint)>,
}

impl PeriodInfo {
    pub fn new(r: u64, small: &DensePoly) -> Result<Self> {
        let small_factors = small_factor_periods(small)?;
        let small_period = small_factors.iter().fold(BigUint::one(), |acc, (_, e)| acc.lcm(e));
        let f = f_factor(r, &small_period);
        Ok(Self { rho: mersenne(r) * &f, f, small_period, small_factors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AptStage {
    /// `gcd(n, s) != 1`, so no factor can be primitive.
    GcdNotOne,
    Ait(RejectStage),
    /// `x^((2^r-1)/p) = 1` modulo the large factor.
    NotPrimitive {
        prime: BigUint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AptVerdict {
    pub accepted: bool,
    pub reject_stage: Option<AptStage>,
    pub ait: Option<AitVerdict>,
    pub small_product: Option<DensePoly>,
    pub period: Option<PeriodInfo>,
}

impl AptVerdict {
    fn reject(stage: AptStage, ait: Option<AitVerdict>, small_product: Option<DensePoly>) -> Self {
        Self { accepted: false, reject_stage: Some(stage), ait, small_product, period: None }
    }
}

/// Whether `x^(r+δ) + x^s + 1` has a primitive factor of degree `r`.
pub fn apt(r: u64, s: u64, delta: u64, table: &FactorTable, cfg: &AitConfig) -> Result<AptVerdict> {
    let primes = table.distinct_primes(r)?;
    let t = Trinomial::new(r + delta, s)?;
    if t.n().gcd(&s) != 1 {
        // still validate the arguments the way ait would
        ait(r, s, delta, &AitConfig { use_mersenne_variant: false, ..*cfg })?;
        return Ok(AptVerdict::reject(AptStage::GcdNotOne, None, None));
    }
    let mut verdict = ait(r, s, delta, cfg)?;
    if !verdict.accepted {
        let stage = verdict.reject_stage.expect("rejections carry a stage");
        return Ok(AptVerdict::reject(AptStage::Ait(stage), Some(verdict), None));
    }
    let small = match verdict.outcome.as_ref().and_then(|o| o.small_product.clone()) {
        Some(small) => small,
        None => {
            verdict = ait(r, s, delta, &AitConfig { use_mersenne_variant: false, ..*cfg })?;
            verdict.outcome.as_ref().and_then(|o| o.small_product.clone()).expect("generic sieve forms S")
        }
    };

    let group_order = mersenne(r);
    let prime_order = primes.len() == 1 && primes[0] == group_order;
    if !prime_order {
        for p in &primes {
            let h = powmod_big(&DensePoly::x(), &(&group_order / p), t);
            if rem_trinomial(&(&(h + DensePoly::one()) * &small), t).is_zero() {
                let stage = AptStage::NotPrimitive { prime: p.clone() };
                return Ok(AptVerdict::reject(stage, Some(verdict), Some(small)));
            }
        }
    }
    let period = PeriodInfo::new(r, &small)?;
    Ok(AptVerdict {
        accepted: true,
        reject_stage: None,
        ait: Some(verdict),
        small_product: Some(small),
        period: Some(period),
    })
}

/// All `s <= (r+δ)/2` for which the trinomial has a primitive factor of degree `r`.
pub fn search_apt(r: u64, delta: u64, table: &FactorTable, cfg: &AitConfig) -> Result<Vec<SearchRecord>> {
    table.distinct_primes(r)?;
    let candidates = search_candidates(r, delta, cfg, true)?;
    let found: Vec<Option<SearchRecord>> = candidates
        .par_iter()
        .map(|&s| {
            let v = apt(r, s, delta, table, cfg)?;
            match (v.accepted, v.small_product) {
                (true, Some(small)) => SearchRecord::accepted(r, delta, s, &small, true).map(Some),
                _ => Ok(None),
            }
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Differences between a record and a fresh run of [`apt`] (or [`ait`] for
/// ait rows); empty when the row verifies.
pub fn table_row_mismatches(record: &SearchRecord, table: &FactorTable) -> Result<Vec<String>> {
    let cfg = AitConfig::default();
    let primitive = record.mode == Mode::Apt;
    let (accepted, small) = if primitive {
        let v = apt(record.r, record.s, record.delta, table, &cfg)?;
        (v.accepted, v.small_product)
    } else {
        let v = ait(record.r, record.s, record.delta, &cfg)?;
        (v.accepted, v.outcome.and_then(|o| o.small_product))
    };
    let mut out = Vec::new();
    if accepted != record.accepted {
        out.push(format!("verdict: expected {}, got {}", record.accepted, accepted));
    }
    if !(accepted && record.accepted) {
        return Ok(out);
    }
    let small = small.expect("accepted runs form S");
    let fresh = SearchRecord::accepted(record.r, record.delta, record.s, &small, primitive)?;
    if fresh.small_factor_polys()? != record.small_factor_polys()? {
        out.push(format!("small factors: expected {:?}, got {:?}", record.small_factors, fresh.small_factors));
    }
    if record.f_value()? != fresh.f_value()? {
        out.push(format!("f: expected {:?}, got {:?}", record.f, fresh.f));
    }
    if record.rho_bits.is_some() && record.rho_bits != fresh.rho_bits {
        out.push(format!("rho_bits: expected {:?}, got {:?}", record.rho_bits, fresh.rho_bits));
    }
    Ok(out)
}

/// Re-runs [`apt`] for the row and compares verdict, factored `S` and `f`.
pub fn verify_table_row(record: &SearchRecord, table: &FactorTable) -> bool {
    table_row_mismatches(record, table).is_ok_and(|m| m.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DensePoly {
        s.parse().unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn table(text: &str) -> FactorTable {
        FactorTable::parse(text).unwrap()
    }

    #[test]
    fn table_parsing() {
        let t = table("# comment\n8: 3 5 17\n12: 3 3 5 7 13  # 4095\n\n13: M\n");
        assert_eq!(t.get(8).unwrap(), &[(big(3), 1), (big(5), 1), (big(17), 1)]);
        assert_eq!(t.get(12).unwrap()[0], (big(3), 2));
        assert!(t.is_mersenne_prime(13).unwrap());
        assert!(!t.is_mersenne_prime(12).unwrap());
        let t64 = table("64: 3 5 17 257 641 65537 6700417");
        assert!(t64.contains(64));
        // the factors of F6 belong to 2^128 - 1
        assert!(FactorTable::parse("64: 3 5 17 257 641 65537 274177 6700417 67280421310721").is_err());
        assert_eq!(FactorTable::parse("8: 3 5 19"), Err(Error::FactorProductMismatch { r: 8 }));
        assert_eq!(FactorTable::parse("11: M"), Err(Error::FactorProductMismatch { r: 11 }));
        // 15 = 3 · 5 is not prime, even though the product is right
        assert!(FactorTable::parse("8: 15 17").is_err());
        match FactorTable::parse("8: 3 5 17\n9 7 73") {
            Err(Error::FactorTableParse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert_eq!(table(&t.to_text()), t);
    }

    #[test]
    fn small_mersenne_factorizations() {
        assert_eq!(factor_small_mersenne(13).unwrap(), vec![big(8191)]);
        let f12: Vec<BigUint> = [3u64, 3, 5, 7, 13].map(big).to_vec();
        assert_eq!(factor_small_mersenne(12).unwrap(), f12);
        assert_eq!(factor_small_mersenne(11).unwrap(), vec![big(23), big(89)]);
        assert_eq!(factor_small_mersenne(6).unwrap(), vec![big(3), big(3), big(7)]);
        // 7 divides both Φ3(2) and Φ21(2)
        assert_eq!(factor_small_mersenne(21).unwrap(), [7u64, 7, 127, 337].map(big).to_vec());
        assert!(matches!(factor_small_mersenne(129), Err(Error::FactoringCutoff { .. })));
    }

    #[test]
    fn periods() {
        assert_eq!(period_of_small(&p("x^8+x^6+x^5+x^4+x^2+x+1")).unwrap(), big(85));
        assert_eq!(period_of_small(&p("x^2+x+1")).unwrap(), big(3));
        assert_eq!(period_of_small(&p("x^5+x^4+1")).unwrap(), big(21));
        assert_eq!(period_of_small(&DensePoly::one()).unwrap(), big(1));
        assert_eq!(period_of_small(&p("x^6+x^3+1")).unwrap(), big(9));
        assert_eq!(period_of_small(&p("x^3+x")), Err(Error::DivisibleByX));
        assert_eq!(period_of_small(&p("x^2+1")), Err(Error::NotSquareFree));
        assert!(matches!(period_of_small(&p("x^65+x+1")), Err(Error::DegreeTooLarge { .. })));
    }

    #[test]
    fn f_values() {
        assert_eq!(f_factor(61, &big(31)), big(31));
        assert_eq!(f_factor(216_091, &big(3937)), big(3937));
        assert_eq!(f_factor(5, &big(1)), big(1));
        // 85 divides 2^32 - 1
        assert_eq!(f_factor(32, &big(85)), big(1));
        assert_eq!(f_factor(8, &big(21)), big(7));
    }

    #[test]
    fn apt_examples() {
        let cfg = AitConfig::default();
        let t8 = table("8: 3 5 17");
        let v = apt(8, 1, 5, &t8, &cfg).unwrap();
        assert!(v.accepted);
        assert_eq!(v.small_product, Some(p("x^5+x^4+x^3+x+1")));
        assert_eq!(v.period.unwrap().f, big(31));

        let t12 = table("12: 3 3 5 7 13");
        let v = apt(12, 5, 0, &t12, &cfg).unwrap();
        assert!(!v.accepted);
        assert_eq!(v.reject_stage, Some(AptStage::NotPrimitive { prime: big(5) }));

        let v = apt(6, 3, 0, &FactorTable::new(), &cfg).unwrap();
        assert_eq!(v.reject_stage, Some(AptStage::GcdNotOne));

        assert_eq!(apt(200, 3, 3, &FactorTable::new(), &cfg), Err(Error::MissingFactorization(200)));
    }

    #[test]
    fn row_verification() {
        let bundled = FactorTable::bundled();
        let row = SearchRecord {
            r: 32,
            delta: 8,
            s: 3,
            accepted: true,
            mode: Mode::Apt,
            small_factors: vec!["x^8+x^6+x^5+x^4+x^2+x+1".into()],
            f: Some("1".into()),
            rho_bits: None,
        };
        assert!(verify_table_row(&row, bundled));
        let tampered = SearchRecord { f: Some("3".into()), ..row.clone() };
        assert!(!verify_table_row(&tampered, bundled));
        let wrong_s = SearchRecord { s: 5, ..row.clone() };
        assert!(!verify_table_row(&wrong_s, bundled));
        // x^12 + x^3 + 1 is irreducible, but gcd(12, 3) = 3 rules out primitivity
        let ait_row = SearchRecord::accepted(12, 0, 3, &DensePoly::one(), false).unwrap();
        assert!(verify_table_row(&ait_row, bundled));
        assert!(!verify_table_row(&SearchRecord { mode: Mode::Apt, ..ait_row }, bundled));
    }
}
