//! Integer helpers: primality, Pollard rho, Möbius function, Mersenne and
//! cyclotomic values, and order computation by descent.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin; the first twelve prime bases suffice below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in SMALL_PRIMES {
        if n % p == 0 {
            return n == p;
        }
    }
    let tz = (n - 1).trailing_zeros();
    let d = (n - 1) >> tz;
    'bases: for a in SMALL_PRIMES {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..tz {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin with 32 bases (the small primes plus seeded random ones);
/// deterministic for values below 2^64.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    for p in SMALL_PRIMES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let tz = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> tz;
    let mut rng = StdRng::seed_from_u64(0x6d72_7072);
    let random_bases = (0..20).map(|_| BigUint::from(rng.random_range(41u64..u64::MAX)));
    'bases: for a in SMALL_PRIMES.iter().map(|&p| BigUint::from(p)).chain(random_bases) {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..tz {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` odd and composite.
fn rho_u64(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let (mut x, mut ys) = (0u64, 0u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..128.min(r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let (mut r, mut q, mut g) = (1u64, one.clone(), one.clone());
        let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
        let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..128.min(r - k) {
                    y = f(&y);
                    q = (q * diff(&x, &y)) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = diff(&x, &ys).gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
    }
    unreachable!()
}

/// Prime factors of `n` with multiplicity, ascending.
pub fn factor_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in SMALL_PRIMES {
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            out.push(m);
        } else {
            let d = rho_u64(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    out.sort_unstable();
    out
}

/// Prime factors of `n` with multiplicity, ascending.
pub fn factor_biguint(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut stack = vec![n.clone()];
    while let Some(m) = stack.pop() {
        if m.is_one() || m.is_zero() {
            continue;
        }
        if let Some(v) = m.to_u64() {
            out.extend(factor_u64(v).into_iter().map(BigUint::from));
        } else if is_probable_prime(&m) {
            out.push(m);
        } else if m.is_even() {
            stack.push(BigUint::from(2u32));
            stack.push(m >> 1);
        } else {
            let d = rho_big(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    out.sort_unstable();
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn distinct_prime_factors(n: u64) -> Vec<u64> {
    let mut f = factor_u64(n);
    f.dedup();
    f
}

pub fn mobius(n: u64) -> i32 {
    assert!(n > 0);
    let f = factor_u64(n);
    if f.windows(2).any(|w| w[0] == w[1]) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    let f = factor_u64(n);
    let mut i = 0;
    while i < f.len() {
        let p = f[i];
        let mult = f[i..].iter().take_while(|&&q| q == p).count();
        let base = out.clone();
        let mut pk = 1;
        for _ in 0..mult {
            pk *= p;
            out.extend(base.iter().map(|d| d * pk));
        }
        i += mult;
    }
    out.sort_unstable();
    out
}

/// `2^r - 1`.
pub fn mersenne(r: u64) -> BigUint {
    (BigUint::one() << r) - 1u32
}

/// `Φ_d(2)`, the d-th cyclotomic polynomial at 2; `2^r - 1` is the product over `d | r`.
pub fn cyclotomic_at_2(d: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in divisors(d) {
        match mobius(d / e) {
            1 => num *= mersenne(e),
            -1 => den *= mersenne(e),
            _ => {}
        }
    }
    num / den
}

/// Lucas–Lehmer test: whether `2^p - 1` is prime, for prime `p`.
pub fn lucas_lehmer(p: u64) -> bool {
    if p == 2 {
        return true;
    }
    if !is_prime_u64(p) {
        return false;
    }
    let m = mersenne(p);
    let mut x = BigUint::from(4u32);
    for _ in 0..p - 2 {
        x = &x * &x;
        // reduce modulo 2^p - 1 by folding the high bits onto the low ones
        while x.bits() > p {
            x = (&x >> p) + (&x & &m);
        }
        if x == m {
            x.set_zero();
        }
        x = if x >= BigUint::from(2u32) { x - 2u32 } else { x + &m - 2u32 };
    }
    x.is_zero()
}

/// Smallest divisor `e` of `n` such that `is_identity(e)` holds, assuming the
/// predicate describes "the order divides e". `primes` lists the distinct primes of `n`.
pub fn order_by_descent(n: &BigUint, primes: &[BigUint], mut is_identity: impl FnMut(&BigUint) -> bool) -> BigUint {
    let mut order = n.clone();
    for p in primes {
        while (&order % p).is_zero() {
            let candidate = &order / p;
            if !is_identity(&candidate) {
                break;
            }
            order = candidate;
        }
    }
    order
}
