//! Complete factorization of (small) polynomials into irreducibles:
//! square-free split, distinct-degree split, then Cantor–Zassenhaus with the
//! trace map for the equal-degree parts.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::DensePoly;
use crate::error::{Error, Result};

fn sqrmod(a: &DensePoly, m: &DensePoly) -> DensePoly {
    a.square().rem(m).expect("nonzero modulus")
}

/// Rabin-style test: no factor of degree `<= deg/2`.
pub fn is_irreducible(f: &DensePoly) -> bool {
    let Some(deg) = f.degree() else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let x = DensePoly::x();
    let mut h = x.rem(f).expect("nonzero");
    for _ in 1..=deg / 2 {
        h = sqrmod(&h, f);
        if !f.gcd(&(&h + &x)).expect("nonzero").is_one() {
            return false;
        }
    }
    true
}

fn square_free_parts(f: &DensePoly, mult_scale: u32, out: &mut Vec<(DensePoly, u32)>) {
    let gcd = |a: &DensePoly, b: &DensePoly| a.gcd(b).expect("nonzero operand");
    let div = |a: &DensePoly, b: &DensePoly| a.exact_div(b).expect("exact");

    let mut repeated = gcd(f, &f.derivative());
    let mut square_free = div(f, &repeated);
    let mut mult = 0;
    while square_free.degree() > Some(0) {
        let shared = gcd(&repeated, &square_free);
        let part = div(&square_free, &shared);
        repeated = div(&repeated, &shared);
        square_free = shared;
        mult += mult_scale;
        if part.degree() > Some(0) {
            out.push((part, mult));
        }
    }
    if repeated.degree() > Some(0) {
        let root = repeated.sqrt_of_square().expect("remaining part is a square");
        square_free_parts(&root, mult_scale * 2, out);
    }
}

/// Distinct-degree split of a square-free polynomial: `(product, degree)` pairs.
fn distinct_degree(f: &DensePoly) -> Vec<(DensePoly, usize)> {
    let x = DensePoly::x();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest).expect("nonzero");
    let mut i = 0;
    while rest.degree().unwrap_or(0) >= 2 * (i + 1) {
        i += 1;
        h = sqrmod(&h, &rest);
        let g = rest.gcd(&(&h + &x)).expect("nonzero");
        if !g.is_one() {
            rest = rest.exact_div(&g).expect("exact");
            h = h.rem(&rest).expect("nonzero");
            out.push((g, i));
        }
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    out
}

fn equal_degree(g: DensePoly, d: usize, rng: &mut StdRng, out: &mut Vec<DensePoly>) {
    let deg = g.degree().expect("nonzero");
    if deg == d {
        out.push(g);
        return;
    }
    loop {
        let exps: Vec<usize> = (0..deg).filter(|_| rng.random_bool(0.5)).collect();
        let a = DensePoly::from_exponents(&exps);
        let mut acc = a.clone();
        let mut term = a;
        for _ in 1..d {
            term = sqrmod(&term, &g);
            acc += &term;
        }
        let h = g.gcd(&acc).expect("nonzero");
        if h.degree().is_some_and(|e| e > 0 && e < deg) {
            let other = g.exact_div(&h).expect("exact");
            equal_degree(h, d, rng, out);
            equal_degree(other, d, rng, out);
            return;
        }
    }
}

/// Irreducible factors with multiplicities, sorted by degree and then by coefficients.
pub fn factor(f: &DensePoly) -> Result<Vec<(DensePoly, u32)>> {
    if f.is_zero() {
        return Err(Error::Precondition("cannot factor the zero polynomial".into()));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed_2f2f);
    let mut parts = Vec::new();
    square_free_parts(f, 1, &mut parts);
    let mut factors = Vec::new();
    for (part, mult) in parts {
        for (product, d) in distinct_degree(&part) {
            let mut irreducibles = Vec::new();
            equal_degree(product, d, &mut rng, &mut irreducibles);
            factors.extend(irreducibles.into_iter().map(|p| (p, mult)));
        }
    }
    factors.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(factors)
}

/// Irreducible factors of a polynomial, one item per factor with multiplicity.
pub type FactorIter = std::vec::IntoIter<(DensePoly, u32)>;
