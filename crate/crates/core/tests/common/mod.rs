//! Brute-force reference for small polynomials, built only from u64 bit masks
//! so that it shares no code with the library.

#![allow(dead_code)]

use std::sync::OnceLock;

/// Bit `i` is the coefficient of `x^i`.
pub type Mask = u64;

pub fn deg(p: Mask) -> u32 {
    63 - p.leading_zeros()
}

pub fn mul(a: Mask, b: Mask) -> Mask {
    let mut out = 0;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            out ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    out
}

pub fn rem(mut a: Mask, m: Mask) -> Mask {
    let dm = deg(m);
    while a != 0 && deg(a) >= dm {
        a ^= m << (deg(a) - dm);
    }
    a
}

pub fn div(mut a: Mask, m: Mask) -> (Mask, Mask) {
    let dm = deg(m);
    let mut q = 0;
    while a != 0 && deg(a) >= dm {
        let sh = deg(a) - dm;
        q |= 1 << sh;
        a ^= m << sh;
    }
    (q, a)
}

pub fn mulmod(a: Mask, b: Mask, m: Mask) -> Mask {
    // operands stay below 2^deg(m) <= 2^24, so the product fits
    rem(mul(a, b), m)
}

pub fn powmod(base: Mask, mut e: u128, m: Mask) -> Mask {
    let mut acc = rem(1, m);
    let mut b = rem(base, m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Largest degree covered by the smallest-factor sieve.
pub const SIEVE_DEGREE: u32 = 20;

/// `spf[p]` = an irreducible factor of least degree of `p`, for `deg p <= 20`.
pub fn smallest_factor_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let size = 1usize << (SIEVE_DEGREE + 1);
        let mut spf = vec![0u32; size];
        for p in 2..size as Mask {
            if spf[p as usize] != 0 {
                continue;
            }
            spf[p as usize] = p as u32;
            let dp = deg(p);
            if 2 * dp > SIEVE_DEGREE {
                continue;
            }
            // multiples p·q with deg q >= deg p, so p is their least-degree factor
            for q in (1 << dp)..(1 << (SIEVE_DEGREE - dp + 1)) {
                let pq = mul(p, q) as usize;
                if spf[pq] == 0 {
                    spf[pq] = p as u32;
                }
            }
        }
        spf
    })
}

pub fn irreducibles_up_to(d: u32) -> &'static [Mask] {
    static LIST: OnceLock<Vec<Mask>> = OnceLock::new();
    let all = LIST.get_or_init(|| {
        let spf = smallest_factor_table();
        (2..spf.len() as Mask).filter(|&p| spf[p as usize] as Mask == p).collect()
    });
    let end = all.partition_point(|&p| deg(p) <= d);
    &all[..end]
}

pub fn is_irreducible(p: Mask) -> bool {
    if deg(p) <= SIEVE_DEGREE {
        return smallest_factor_table()[p as usize] as Mask == p;
    }
    let d = deg(p);
    irreducibles_up_to(d / 2).iter().all(|&q| rem(p, q) != 0)
}

/// Irreducible factors with multiplicity, sorted by (degree, value).
pub fn factor(mut p: Mask) -> Vec<Mask> {
    assert!(p != 0 && deg(p) <= 2 * SIEVE_DEGREE);
    let mut out = Vec::new();
    let spf = smallest_factor_table();
    if deg(p) > SIEVE_DEGREE {
        for &q in irreducibles_up_to(SIEVE_DEGREE) {
            if deg(p) <= SIEVE_DEGREE {
                break;
            }
            if 2 * deg(q) > deg(p) {
                // no factor of degree <= deg/2 left, so p is irreducible
                out.push(p);
                p = 1;
                break;
            }
            loop {
                let (quot, r) = div(p, q);
                if r != 0 {
                    break;
                }
                out.push(q);
                p = quot;
            }
        }
        if deg(p) > SIEVE_DEGREE {
            // every factor of degree <= 20 is gone and deg p <= 40
            out.push(p);
            p = 1;
        }
    }
    while p > 1 {
        let q = spf[p as usize] as Mask;
        out.push(q);
        p = div(p, q).0;
    }
    out.sort_by_key(|&q| (deg(q), q));
    out
}

pub fn trinomial(n: u32, s: u32) -> Mask {
    (1 << n) | (1 << s) | 1
}

/// Prime factors of `m` by trial division.
pub fn prime_factors(mut m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Multiplicative order of `x` modulo the irreducible `d` (not `x`).
pub fn order_of_x(d: Mask) -> u128 {
    let group = (1u128 << deg(d)) - 1;
    let mut order = group;
    for p in prime_factors(group) {
        while order % p == 0 && powmod(2, order / p, d) == 1 {
            order /= p;
        }
    }
    order
}

pub fn is_primitive(d: Mask) -> bool {
    is_irreducible(d) && order_of_x(d) == (1u128 << deg(d)) - 1
}

/// The oracle's verdict for "x^n + x^s + 1 has an irreducible factor of degree r".
pub fn has_factor_of_degree(n: u32, s: u32, r: u32) -> Option<Mask> {
    factor(trinomial(n, s)).into_iter().find(|&q| deg(q) == r)
}

/// Renders a mask in the same exponent notation as the library.
pub fn render(p: Mask) -> String {
    if p == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for i in (0..=deg(p)).rev() {
        if (p >> i) & 1 == 1 {
            terms.push(match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            });
        }
    }
    terms.join("+")
}
