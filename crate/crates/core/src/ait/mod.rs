//! Deciding whether `x^(r+δ) + x^s + 1` has an irreducible factor of degree `r`.

mod filters;
mod search;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{distinct_prime_factors, is_prime_u64, mersenne};
use crate::poly::{powmod_big, rem_trinomial, DensePoly, Pow2Chain, Trinomial};
use crate::swan::{nu_parity, Parity};

pub use filters::{
    cyclotomic_filter, cyclotomic_profile, feasible_count_parities, gcd_allows_degree, gcd_filters, CyclotomicReport,
    Exclusion, ExclusionScan, DEFAULT_CYCLOTOMIC_MODULI,
};
pub use search::{search_ait, search_candidates};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AitConfig {
    /// Sieving bound `B`; `None` means [`default_sieve_bound`].
    pub sieve_bound: Option<u64>,
    pub use_mersenne_variant: bool,
    pub use_curtailment: bool,
    /// Compare the factor count against the Swan parity after sieving.
    /// Turning it off never changes a verdict, only the work done.
    pub use_parity_check: bool,
    /// Let searches skip candidates excluded by gcd, parity and cyclotomic filters.
    pub use_prefilter: bool,
}

impl Default for AitConfig {
    fn default() -> Self {
        Self {
            sieve_bound: None,
            use_mersenne_variant: false,
            use_curtailment: true,
            use_parity_check: true,
            use_prefilter: true,
        }
    }
}

impl AitConfig {
    fn bound(&self, r: u64, delta: u64) -> Result<u64> {
        match self.sieve_bound {
            None => Ok(default_sieve_bound(r, delta)),
            Some(b) if delta <= b && b < r => Ok(b),
            Some(b) => Err(Error::Precondition(format!("sieve bound {b} outside [{delta}, {r})"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectStage {
    DeltaOne,
    GcdEven,
    Sieve,
    Curtail,
    ParityOrDegree,
    SmallFactorBound,
    FullTest,
    SubfieldTest,
}

impl fmt::Display for RejectStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveOutcome {
    /// Product `S` of the irreducible factors of degree at most δ. Not formed by
    /// the Mersenne variant.
    pub small_product: Option<DensePoly>,
    pub degree_sum: u64,
    pub factor_count: u64,
    /// Iteration `i` → total degree of the factors of degree exactly `i` (nonzero entries only).
    pub per_degree: BTreeMap<u64, u64>,
    /// Last completed sieving iteration.
    pub sieved_through: u64,
    pub curtailed: bool,
    /// `F = lcm(2^i - 1)` over the degrees found; Mersenne variant only.
    pub period_multiple: Option<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AitVerdict {
    pub accepted: bool,
    pub reject_stage: Option<RejectStage>,
    pub outcome: Option<SieveOutcome>,
}

impl AitVerdict {
    fn reject(stage: RejectStage, outcome: Option<SieveOutcome>) -> Self {
        Self { accepted: false, reject_stage: Some(stage), outcome }
    }
}

/// `min(r - 1, max(δ, 4 + ⌊log2 r⌋))`.
pub fn default_sieve_bound(r: u64, delta: u64) -> u64 {
    debug_assert!(r >= 2);
    (r - 1).min(delta.max(4 + r.ilog2() as u64))
}

/// Whether sieving through degree `dhat_bound` (finding `khat` factors of total
/// degree `dhat`) already rules out a small part of degree exactly `delta`.
pub fn curtail_check(dhat: u64, khat: u64, dhat_bound: u64, delta: u64, nu: Parity) -> bool {
    let first = dhat < delta && delta < dhat + dhat_bound + 1;
    let second = Parity::of(khat) != nu && dhat < delta && delta < dhat + 2 * (dhat_bound + 1);
    first || second
}

fn curtails(cfg: &AitConfig, dhat: u64, khat: u64, bound: u64, delta: u64, nu: Parity) -> bool {
    if cfg.use_parity_check {
        curtail_check(dhat, khat, bound, delta, nu)
    } else {
        dhat < delta && delta < dhat + bound + 1
    }
}

fn validate(r: u64, s: u64, delta: u64) -> Result<Trinomial> {
    if r < 2 || delta >= r {
        return Err(Error::Precondition(format!("need 0 <= delta < r and r >= 2, got r={r} delta={delta}")));
    }
    Trinomial::new(r + delta, s)
}

/// Squaring chain that remembers the residues at a few requested indices.
struct CapturingChain {
    chain: Pow2Chain,
    wanted: Vec<u64>,
    captured: BTreeMap<u64, DensePoly>,
}

impl CapturingChain {
    fn new(t: Trinomial, wanted: Vec<u64>) -> Self {
        Self { chain: Pow2Chain::new(t), wanted, captured: BTreeMap::new() }
    }

    fn step(&mut self) {
        self.chain.step();
        let i = self.chain.index();
        if self.wanted.contains(&i) {
            self.captured.insert(i, self.chain.residue());
        }
    }

    fn advance_to(&mut self, i: u64) {
        while self.chain.index() < i {
            self.step();
        }
    }

    /// `gcd(T, x^(2^i) + x)` at the current index.
    fn sieve_gcd(&self, t_dense: &DensePoly) -> DensePoly {
        t_dense.gcd(&(self.chain.residue() + DensePoly::x())).expect("T is nonzero")
    }
}

/// Runs the almost-irreducibility test for `x^(r+δ) + x^s + 1` with exponent `r`.
pub fn ait(r: u64, s: u64, delta: u64, cfg: &AitConfig) -> Result<AitVerdict> {
    if cfg.use_mersenne_variant {
        return ait_mersenne(r, s, delta, cfg);
    }
    let t = validate(r, s, delta)?;
    let n = t.n();
    if delta == 1 {
        return Ok(AitVerdict::reject(RejectStage::DeltaOne, None));
    }
    if n.gcd(&s) % 2 == 0 {
        return Ok(AitVerdict::reject(RejectStage::GcdEven, None));
    }
    let bound = cfg.bound(r, delta)?;
    let nu = nu_parity(n, s)?.parity;
    let t_dense = t.to_dense();
    let subfields: Vec<u64> = distinct_prime_factors(r).into_iter().filter(|&p| p != r).map(|p| r / p).collect();
    let mut chain = CapturingChain::new(t, subfields.clone());

    let mut outcome = SieveOutcome {
        small_product: Some(DensePoly::one()),
        degree_sum: 0,
        factor_count: 0,
        per_degree: BTreeMap::new(),
        sieved_through: 1,
        curtailed: false,
        period_multiple: None,
    };
    let curtail_enabled = cfg.use_curtailment && delta >= 2;
    if curtail_enabled && curtails(cfg, 0, 0, 1, delta, nu) {
        outcome.curtailed = true;
        return Ok(AitVerdict::reject(RejectStage::Curtail, Some(outcome)));
    }

    // sieve: all factors of degree 2..=δ
    let mut small = DensePoly::one();
    chain.step();
    for i in 2..=delta {
        chain.step();
        let g = chain.sieve_gcd(&t_dense);
        let g = g.exact_div(&g.gcd(&small).expect("nonzero")).expect("gcd divides");
        let deg = g.degree().expect("nonzero") as u64;
        if deg > 0 {
            outcome.per_degree.insert(i, deg);
            outcome.degree_sum += deg;
            outcome.factor_count += deg / i;
            small *= &g;
        }
        outcome.sieved_through = i;
        if outcome.degree_sum > delta {
            outcome.small_product = Some(small);
            return Ok(AitVerdict::reject(RejectStage::Sieve, Some(outcome)));
        }
        if curtail_enabled && i < delta && curtails(cfg, outcome.degree_sum, outcome.factor_count, i, delta, nu) {
            outcome.curtailed = true;
            outcome.small_product = Some(small);
            return Ok(AitVerdict::reject(RejectStage::Curtail, Some(outcome)));
        }
    }
    outcome.small_product = Some(small.clone());
    let parity_clash = cfg.use_parity_check && Parity::of(outcome.factor_count) == nu;
    if outcome.degree_sum != delta || parity_clash {
        return Ok(AitVerdict::reject(RejectStage::ParityOrDegree, Some(outcome)));
    }

    // no further factor of degree δ+1..=B may appear outside S
    for i in delta + 1..=bound {
        chain.advance_to(i);
        let g = chain.sieve_gcd(&t_dense);
        if !small.rem(&g).expect("nonzero").is_zero() {
            return Ok(AitVerdict::reject(RejectStage::SmallFactorBound, Some(outcome)));
        }
    }

    chain.advance_to(r);
    let full = rem_trinomial(&(&(chain.chain.residue() + DensePoly::x()) * &small), t);
    if !full.is_zero() {
        return Ok(AitVerdict::reject(RejectStage::FullTest, Some(outcome)));
    }

    for q in subfields {
        let residue = &chain.captured[&q];
        let h = rem_trinomial(&(&(residue + &DensePoly::x()) * &small), t);
        if t_dense.gcd(&h).expect("T is nonzero") != small {
            return Ok(AitVerdict::reject(RejectStage::SubfieldTest, Some(outcome)));
        }
    }
    Ok(AitVerdict { accepted: true, reject_stage: None, outcome: Some(outcome) })
}

/// Variant for prime `r` (intended for Mersenne exponents) that tracks
/// `F = lcm(2^i - 1)` instead of the small factor and ends with the test
/// `(x^F)^(2^r) = x^F mod T`.
pub fn ait_mersenne(r: u64, s: u64, delta: u64, cfg: &AitConfig) -> Result<AitVerdict> {
    let t = validate(r, s, delta)?;
    if !is_prime_u64(r) {
        return Err(Error::Precondition(format!("the F-variant needs a prime exponent, got {r}")));
    }
    let n = t.n();
    if delta == 1 {
        return Ok(AitVerdict::reject(RejectStage::DeltaOne, None));
    }
    if n.gcd(&s) % 2 == 0 {
        return Ok(AitVerdict::reject(RejectStage::GcdEven, None));
    }
    let bound = cfg.bound(r, delta)?;
    let nu = nu_parity(n, s)?.parity;
    let t_dense = t.to_dense();
    let mut chain = CapturingChain::new(t, Vec::new());

    let mut outcome = SieveOutcome {
        small_product: None,
        degree_sum: 0,
        factor_count: 0,
        per_degree: BTreeMap::new(),
        sieved_through: 1,
        curtailed: false,
        period_multiple: Some(BigUint::one()),
    };
    let curtail_enabled = cfg.use_curtailment && delta >= 2;
    if curtail_enabled && curtails(cfg, 0, 0, 1, delta, nu) {
        outcome.curtailed = true;
        return Ok(AitVerdict::reject(RejectStage::Curtail, Some(outcome)));
    }

    let known_below = |per_degree: &BTreeMap<u64, u64>, i: u64| -> u64 {
        per_degree.range(..i).filter(|(&j, _)| i % j == 0).map(|(_, &e)| e).sum()
    };
    let mut f = BigUint::one();
    chain.step();
    for i in 2..=delta {
        chain.step();
        let full_degree = chain.sieve_gcd(&t_dense).degree().expect("nonzero") as u64;
        let fresh = full_degree - known_below(&outcome.per_degree, i);
        if fresh > 0 {
            outcome.per_degree.insert(i, fresh);
            outcome.degree_sum += fresh;
            outcome.factor_count += fresh / i;
            f = f.lcm(&mersenne(i));
        }
        outcome.sieved_through = i;
        if outcome.degree_sum > delta {
            outcome.period_multiple = Some(f);
            return Ok(AitVerdict::reject(RejectStage::Sieve, Some(outcome)));
        }
        if curtail_enabled && i < delta && curtails(cfg, outcome.degree_sum, outcome.factor_count, i, delta, nu) {
            outcome.curtailed = true;
            outcome.period_multiple = Some(f);
            return Ok(AitVerdict::reject(RejectStage::Curtail, Some(outcome)));
        }
    }
    outcome.period_multiple = Some(f.clone());
    let parity_clash = cfg.use_parity_check && Parity::of(outcome.factor_count) == nu;
    if outcome.degree_sum != delta || parity_clash {
        return Ok(AitVerdict::reject(RejectStage::ParityOrDegree, Some(outcome)));
    }

    for i in delta + 1..=bound {
        chain.advance_to(i);
        let full_degree = chain.sieve_gcd(&t_dense).degree().expect("nonzero") as u64;
        if full_degree > known_below(&outcome.per_degree, i) {
            return Ok(AitVerdict::reject(RejectStage::SmallFactorBound, Some(outcome)));
        }
    }

    let start = powmod_big(&DensePoly::x(), &f, t);
    let mut lifted = Pow2Chain::from_start(t, &start);
    lifted.advance_to(r);
    if lifted.residue() != start {
        return Ok(AitVerdict::reject(RejectStage::FullTest, Some(outcome)));
    }
    Ok(AitVerdict { accepted: true, reject_stage: None, outcome: Some(outcome) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DensePoly {
        s.parse().unwrap()
    }

    fn cfg() -> AitConfig {
        AitConfig::default()
    }

    #[test]
    fn sieve_bounds() {
        assert_eq!(default_sieve_bound(13, 3), 7);
        assert_eq!(default_sieve_bound(2, 0), 1);
        assert_eq!(default_sieve_bound(216_091, 12), 21);
        assert_eq!(default_sieve_bound(4253, 8), 16);
    }

    #[test]
    fn known_verdicts() {
        let v = ait(13, 3, 3, &cfg()).unwrap();
        assert!(v.accepted);
        assert_eq!(v.outcome.unwrap().small_product, Some(p("x^3+x^2+1")));

        assert!(!ait(13, 5, 3, &cfg()).unwrap().accepted);
        let even = ait(13, 4, 3, &cfg()).unwrap();
        assert_eq!(even.reject_stage, Some(RejectStage::GcdEven));
        assert!(ait(31, 3, 0, &cfg()).unwrap().accepted);
        assert_eq!(ait(20, 3, 1, &cfg()).unwrap().reject_stage, Some(RejectStage::DeltaOne));
        assert!(ait(13, 0, 3, &cfg()).is_err());
        assert!(ait(13, 3, 13, &cfg()).is_err());
    }

    #[test]
    fn composite_exponents_use_the_subfield_test() {
        // x^6 + x^3 + 1 is irreducible; x^12 + x^5 + 1 too
        assert!(ait(6, 3, 0, &cfg()).unwrap().accepted);
        assert!(ait(12, 5, 0, &cfg()).unwrap().accepted);
        assert!(!ait(16, 3, 0, &cfg()).unwrap().accepted);
        assert!(ait(8, 1, 5, &cfg()).unwrap().accepted);
        assert!(ait(64, 3, 10, &cfg()).unwrap().accepted);
    }

    #[test]
    fn curtailment_inequalities() {
        assert!(curtail_check(0, 0, 2, 2, Parity::Even));
        assert!(!curtail_check(3, 1, 3, 3, Parity::Odd));
        // second form only applies when the count parity differs from ν
        assert!(curtail_check(2, 1, 2, 7, Parity::Even));
        assert!(!curtail_check(2, 1, 2, 7, Parity::Odd));
    }

    #[test]
    fn mersenne_variant_examples() {
        let v = ait_mersenne(13, 3, 3, &cfg()).unwrap();
        assert!(v.accepted);
        assert_eq!(v.outcome.unwrap().period_multiple, Some(BigUint::from(7u32)));
        let v = ait_mersenne(107, 8, 2, &cfg()).unwrap();
        assert!(v.accepted);
        assert_eq!(v.outcome.unwrap().period_multiple, Some(BigUint::from(3u32)));
        assert!(ait_mersenne(12, 5, 0, &cfg()).is_err());
    }

    #[test]
    fn explicit_bound_is_validated() {
        let c = AitConfig { sieve_bound: Some(13), ..cfg() };
        assert!(ait(13, 3, 3, &c).is_err());
        let c = AitConfig { sieve_bound: Some(3), ..cfg() };
        assert!(ait(13, 3, 3, &c).unwrap().accepted);
    }
}
