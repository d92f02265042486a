//! Arithmetic in `GF(2^r) = Z2[x]/D` carried out modulo the trinomial `T = S·D`,
//! without ever forming the dense factor `D`.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::ait::{ait, AitConfig};
use crate::apt::{small_factor_periods, FactorTable};
use crate::error::{Error, Result};
use crate::numtheory::{factor_u64, mersenne, order_by_descent};
use crate::poly::{powmod_big, rem_trinomial, DensePoly, Trinomial};

/// `T = x^n + x^s + 1 = S·D` with `D` irreducible of degree `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingContext {
    trinomial: Trinomial,
    small: DensePoly,
    exponent: u64,
}

/// Identifies the context an element belongs to: `(n, s, δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ContextKey {
    pub n: u64,
    pub s: u64,
    pub delta: u64,
}

/// A residue modulo `T`; many residues represent the same field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    value: DensePoly,
    key: ContextKey,
}

impl RingElement {
    pub fn value(&self) -> &DensePoly {
        &self.value
    }

    pub fn key(&self) -> ContextKey {
        self.key
    }
}

impl RingContext {
    /// Certifies with the sieve that `x^(r+δ) + x^s + 1` has an irreducible
    /// factor of degree `r` and keeps the small cofactor `S`.
    pub fn new(r: u64, s: u64, delta: u64) -> Result<Self> {
        let verdict = ait(r, s, delta, &AitConfig::default())?;
        if !verdict.accepted {
            return Err(Error::CertificationFailed {
                r,
                n: r + delta,
                s,
                stage: verdict.reject_stage.map(|st| st.to_string()).unwrap_or_default(),
            });
        }
        let small = verdict.outcome.and_then(|o| o.small_product).expect("accepted runs form S");
        Ok(Self { trinomial: Trinomial::new(r + delta, s)?, small, exponent: r })
    }

    pub fn trinomial(&self) -> Trinomial {
        self.trinomial
    }

    pub fn small(&self) -> &DensePoly {
        &self.small
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn delta(&self) -> u64 {
        self.trinomial.n() - self.exponent
    }

    pub fn key(&self) -> ContextKey {
        ContextKey { n: self.trinomial.n(), s: self.trinomial.s(), delta: self.delta() }
    }

    /// The residue of `a` modulo `T` as an element of this ring.
    pub fn element(&self, a: &DensePoly) -> RingElement {
        RingElement { value: rem_trinomial(a, self.trinomial), key: self.key() }
    }

    pub fn one(&self) -> RingElement {
        self.element(&DensePoly::one())
    }

    pub fn x(&self) -> RingElement {
        self.element(&DensePoly::x())
    }

    fn check(&self, a: &RingElement) -> Result<()> {
        if a.key == self.key() {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// `(a·S mod T) / S`: the representative of degree `< r`, equal to `a mod D`.
    pub fn canonicalize(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        let scaled = rem_trinomial(&(&a.value * &self.small), self.trinomial);
        let value = scaled.exact_div(&self.small)?;
        Ok(RingElement { value, key: a.key })
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement { value: &a.value + &b.value, key: a.key })
    }

    /// `a·b mod T`, not canonicalized.
    pub fn ring_mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.element(&(&a.value * &b.value)))
    }

    pub fn pow(&self, a: &RingElement, e: &BigUint) -> Result<RingElement> {
        self.check(a)?;
        Ok(RingElement { value: powmod_big(&a.value, e, self.trinomial), key: a.key })
    }

    /// Equality in `GF(2^r)`, i.e. after canonicalization.
    pub fn field_equal(&self, a: &RingElement, b: &RingElement) -> Result<bool> {
        Ok(self.canonicalize(&self.add(a, b)?)?.value.is_zero())
    }

    /// Whether `x^e = 1` modulo `D`, tested as `(x^e + 1)·S = 0 mod T`.
    fn x_power_is_one_mod_d(&self, e: &BigUint) -> bool {
        let h = powmod_big(&DensePoly::x(), e, self.trinomial) + DensePoly::one();
        rem_trinomial(&(&h * &self.small), self.trinomial).is_zero()
    }

    /// Order of `x` in the field `Z2[x]/D`.
    pub fn field_order_of_x(&self, table: &FactorTable) -> Result<BigUint> {
        let primes = table.distinct_primes(self.exponent)?;
        Ok(order_by_descent(&mersenne(self.exponent), &primes, |e| self.x_power_is_one_mod_d(e)))
    }

    /// The period `ρ` of `T`: the order of `x` modulo `T`, checked directly.
    pub fn ring_order_of_x(&self, table: &FactorTable) -> Result<BigUint> {
        let field_order = self.field_order_of_x(table)?;
        let small = small_factor_periods(&self.small)?;
        let rho = small.iter().fold(field_order.clone(), |acc, (_, e)| acc.lcm(e));

        let mut primes: Vec<BigUint> =
            table.distinct_primes(self.exponent)?.into_iter().filter(|p| (&field_order % p) == BigUint::ZERO).collect();
        for (_, period) in &small {
            let v = u64::try_from(period).expect("small periods fit in 64 bits");
            primes.extend(factor_u64(v).into_iter().map(BigUint::from));
        }
        primes.sort();
        primes.dedup();
        let is_one = |e: &BigUint| powmod_big(&DensePoly::x(), e, self.trinomial).is_one();
        if !is_one(&rho) || primes.iter().any(|q| is_one(&(&rho / q))) {
            return Err(Error::Precondition(format!("period check failed for {}", self.trinomial)));
        }
        Ok(rho)
    }

    /// Seed whose sequence has no component along `S`: the first `n` terms of
    /// the power series `S·b / T`, so the stream satisfies the recurrence of `D`.
    pub fn projected_seed(&self, b: &DensePoly) -> Vec<bool> {
        let b = self.canonicalize(&self.element(b)).expect("own context").value;
        let numerator = &self.small * &b;
        let n = self.trinomial.n() as usize;
        let s = self.trinomial.s() as usize;
        let mut u = vec![false; n];
        for k in 0..n {
            let mut bit = numerator.coeff(k);
            if k >= s {
                bit ^= u[k - s];
            }
            u[k] = bit;
        }
        u
    }
}

/// Generator for `u_k = u_(k-s) + u_(k-n)` over GF(2).
#[derive(Clone, Debug)]
pub struct Lfsr {
    n: usize,
    s: usize,
    state: Vec<bool>,
    pos: usize,
}

impl Lfsr {
    /// `seed` holds `u_0 .. u_(n-1)` and must not be all zero.
    pub fn new(t: Trinomial, seed: &[bool]) -> Result<Self> {
        let n = t.n() as usize;
        if seed.len() != n || !seed.iter().any(|&b| b) {
            return Err(Error::BadSeed { expected: n });
        }
        Ok(Self { n, s: t.s() as usize, state: seed.to_vec(), pos: 0 })
    }

    /// The current window `u_k .. u_(k+n-1)`, oldest first.
    pub fn window(&self) -> Vec<bool> {
        (0..self.n).map(|i| self.state[(self.pos + i) % self.n]).collect()
    }
}

impl Iterator for Lfsr {
    type Item = bool;

    fn next(&mut self) -> Option<bool> {
        // the ring buffer holds u_(k-n) .. u_(k-1) with u_(k-n) at `pos`
        let oldest = self.state[self.pos];
        let back_s = self.state[(self.pos + self.n - self.s) % self.n];
        let bit = oldest ^ back_s;
        self.state[self.pos] = bit;
        self.pos = (self.pos + 1) % self.n;
        Some(bit)
    }
}

/// `u_n, u_(n+1), ...`: `count` terms of the recurrence seeded with `u_0 .. u_(n-1)`.
pub fn lfsr_stream(ctx: &RingContext, seed: &[bool], count: usize) -> Result<Vec<bool>> {
    Ok(Lfsr::new(ctx.trinomial(), seed)?.take(count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> DensePoly {
        s.parse().unwrap()
    }

    fn d13() -> DensePoly {
        p("x^13+x^12+x^11+x^9+x^6+x^5+x^4+x^2+1")
    }

    #[test]
    fn contexts() {
        let ctx = RingContext::new(13, 3, 3).unwrap();
        assert_eq!(ctx.small(), &p("x^3+x^2+1"));
        assert_eq!(RingContext::new(31, 3, 0).unwrap().small(), &DensePoly::one());
        assert!(matches!(RingContext::new(13, 5, 3), Err(Error::CertificationFailed { .. })));
    }

    #[test]
    fn canonical_forms() {
        let ctx = RingContext::new(13, 3, 3).unwrap();
        let multiple = ctx.element(&(&d13() * &DensePoly::x()));
        assert!(ctx.canonicalize(&multiple).unwrap().value().is_zero());
        assert_eq!(ctx.canonicalize(&ctx.x()).unwrap(), ctx.x());
        let a = ctx.element(&p("x^15+x^14+x^7+1"));
        let c = ctx.canonicalize(&a).unwrap();
        assert!(c.value().degree().unwrap() < 13);
        // the canonical form is the remainder modulo D
        assert_eq!(c.value(), &a.value().rem(&d13()).unwrap());
    }

    #[test]
    fn products_and_equality() {
        let ctx = RingContext::new(13, 3, 3).unwrap();
        let x8 = ctx.element(&DensePoly::monomial(8));
        assert_eq!(ctx.ring_mul(&x8, &x8).unwrap().value(), &p("x^3+1"));
        assert_eq!(ctx.ring_mul(&x8, &ctx.one()).unwrap(), x8);
        let shifted = ctx.add(&x8, &ctx.element(&(&d13() * &p("x^2+1")))).unwrap();
        assert!(ctx.field_equal(&x8, &shifted).unwrap());
        assert!(!ctx.field_equal(&ctx.x(), &ctx.add(&ctx.x(), &ctx.one()).unwrap()).unwrap());

        let other = RingContext::new(19, 3, 3).unwrap();
        assert_eq!(ctx.ring_mul(&x8, &other.x()), Err(Error::ContextMismatch));
    }

    #[test]
    fn orders() {
        let table = FactorTable::bundled();
        let ctx = RingContext::new(13, 3, 3).unwrap();
        assert_eq!(ctx.ring_order_of_x(table).unwrap(), BigUint::from(57_337u32));
        let ctx = RingContext::new(31, 3, 0).unwrap();
        assert_eq!(ctx.ring_order_of_x(table).unwrap(), mersenne(31));
        let ctx = RingContext::new(6, 3, 0).unwrap();
        assert_eq!(ctx.ring_order_of_x(table).unwrap(), BigUint::from(9u32));
        assert_eq!(ctx.field_order_of_x(table).unwrap(), BigUint::from(9u32));
    }

    #[test]
    fn lfsr_basics() {
        let ctx = RingContext::new(5, 2, 0).unwrap();
        let mut seed = vec![false; 5];
        assert_eq!(lfsr_stream(&ctx, &seed, 3), Err(Error::BadSeed { expected: 5 }));
        assert!(lfsr_stream(&ctx, &[true], 3).is_err());
        seed[0] = true;
        // u_k = u_(k-2) + u_(k-5) from 1,0,0,0,0
        let bits: Vec<u8> = lfsr_stream(&ctx, &seed, 10).unwrap().into_iter().map(u8::from).collect();
        assert_eq!(bits, vec![1, 0, 1, 0, 1, 1, 1, 0, 1, 1]);
    }

    #[test]
    fn projected_seed_kills_the_small_component() {
        let ctx = RingContext::new(13, 3, 3).unwrap();
        let seed = ctx.projected_seed(&p("x^7+x+1"));
        let mut gen = Lfsr::new(ctx.trinomial(), &seed).unwrap();
        // the sequence now satisfies the recurrence of D, of period 2^13 - 1
        let start = gen.window();
        for _ in 0..8191 {
            gen.next();
        }
        assert_eq!(gen.window(), start);
    }
}
