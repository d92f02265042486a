//! Bit-packed polynomials over GF(2).
//!
//! Bit `i` of the flattened word array is the coefficient of `x^i`
//! (little-endian within and across words). The word vector never carries
//! trailing zero words, so the degree is read off the top word in O(1) and
//! the zero polynomial is the empty vector.

mod factor;
mod format;
mod mul;
mod trinomial;
mod word;

pub use factor::{factor, is_irreducible, FactorIter};
pub use mul::KARATSUBA_THRESHOLD_WORDS;
pub use trinomial::{pow2_chain, powmod_big, powmod_dense, rem_trinomial, trinomial_mod_cyclic, Pow2Chain, Trinomial};
pub use word::{clmul, Word, WORD_BITS};

use std::ops::{Add, AddAssign, Mul, MulAssign};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DensePoly {
    words: Vec<Word>,
}

pub(crate) fn normalize(words: &mut Vec<Word>) {
    while words.last() == Some(&0) {
        words.pop();
    }
}

#[inline]
pub(crate) fn degree_of(words: &[Word]) -> Option<usize> {
    words.last().map(|&top| (words.len() - 1) * WORD_BITS + (WORD_BITS - 1 - top.leading_zeros() as usize))
}

/// `dst ^= src * x^shift`, growing `dst` as needed. `dst` may be left unnormalized.
pub(crate) fn xor_shifted(dst: &mut Vec<Word>, src: &[Word], shift: usize) {
    if src.is_empty() {
        return;
    }
    let q = shift / WORD_BITS;
    let r = shift % WORD_BITS;
    let need = q + src.len() + usize::from(r != 0);
    if dst.len() < need {
        dst.resize(need, 0);
    }
    if r == 0 {
        for (d, &s) in dst[q..].iter_mut().zip(src) {
            *d ^= s;
        }
    } else {
        let back = WORD_BITS - r;
        let mut carry: Word = 0;
        for (j, &s) in src.iter().enumerate() {
            dst[q + j] ^= (s << r) | carry;
            carry = s >> back;
        }
        dst[q + src.len()] ^= carry;
    }
}

/// In-place remainder of `a` modulo the nonzero `m`.
pub(crate) fn rem_words(a: &mut Vec<Word>, m: &[Word]) {
    let dm = degree_of(m).expect("nonzero modulus");
    if dm == 0 {
        a.clear();
        return;
    }
    while let Some(da) = degree_of(a) {
        if da < dm {
            break;
        }
        xor_shifted(a, m, da - dm);
        normalize(a);
    }
}

fn gcd_words(mut a: Vec<Word>, mut b: Vec<Word>) -> Vec<Word> {
    loop {
        if b.is_empty() {
            return a;
        }
        rem_words(&mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
}

impl DensePoly {
    pub fn zero() -> Self {
        Self { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self { words: vec![1] }
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut words = vec![0; k / WORD_BITS + 1];
        words[k / WORD_BITS] = 1 << (k % WORD_BITS);
        Self { words }
    }

    /// Sum of `x^e` over the given exponents; repeated exponents cancel.
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exponents {
            p.toggle_coeff(e);
        }
        p
    }

    pub fn from_words(mut words: Vec<Word>) -> Self {
        normalize(&mut words);
        Self { words }
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Self::zero();
        for i in 0..64 {
            if (bits >> i) & 1 == 1 {
                p.set_coeff(i, true);
            }
        }
        p
    }

    /// The coefficient vector as an integer, if the degree is below 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.degree() {
            None => Some(0),
            Some(d) if d < 64 => Some(self.exponents().fold(0u64, |acc, e| acc | 1 << e)),
            Some(_) => None,
        }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub(crate) fn into_words(self) -> Vec<Word> {
        self.words
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        degree_of(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / WORD_BITS).is_some_and(|w| (w >> (i % WORD_BITS)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if self.coeff(i) != value {
            self.toggle_coeff(i);
        }
    }

    fn toggle_coeff(&mut self, i: usize) {
        let q = i / WORD_BITS;
        if self.words.len() <= q {
            self.words.resize(q + 1, 0);
        }
        self.words[q] ^= 1 << (i % WORD_BITS);
        normalize(&mut self.words);
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn exponents(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(j, &w)| (0..WORD_BITS).filter(move |b| (w >> b) & 1 == 1).map(move |b| j * WORD_BITS + b))
    }

    /// `self * x^k`.
    pub fn shl(&self, k: usize) -> Self {
        let mut words = Vec::new();
        xor_shifted(&mut words, &self.words, k);
        Self::from_words(words)
    }

    /// `self` divided by `x^k`, dropping the low terms.
    pub fn shr(&self, k: usize) -> Self {
        let q = k / WORD_BITS;
        let r = k % WORD_BITS;
        if q >= self.words.len() {
            return Self::zero();
        }
        let src = &self.words[q..];
        let words = if r == 0 {
            src.to_vec()
        } else {
            (0..src.len())
                .map(|j| {
                    let hi = src.get(j + 1).map_or(0, |&w| w << (WORD_BITS - r));
                    (src[j] >> r) | hi
                })
                .collect()
        };
        Self::from_words(words)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out += other;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_words(mul::mul_words(&self.words, &other.words))
    }

    /// `self^2`, computed by spreading bits rather than a general product.
    pub fn square(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.words.len());
        mul::square_words_into(&self.words, &mut out);
        Self::from_words(out)
    }

    pub fn rem(&self, m: &Self) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut words = self.words.clone();
        rem_words(&mut words, &m.words);
        Ok(Self { words })
    }

    /// Quotient and remainder of `self` by `m`.
    pub fn div_rem(&self, m: &Self) -> Result<(Self, Self)> {
        let dm = m.degree().ok_or(Error::DivisionByZero)?;
        let mut r = self.words.clone();
        let mut q = Self::zero();
        while let Some(dr) = degree_of(&r) {
            if dr < dm {
                break;
            }
            q.toggle_coeff(dr - dm);
            xor_shifted(&mut r, &m.words, dr - dm);
            normalize(&mut r);
        }
        Ok((q, Self { words: r }))
    }

    /// Quotient of an exact division; a nonzero remainder is an error.
    pub fn exact_div(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(b)?;
        match r.degree() {
            None => Ok(q),
            Some(remainder_degree) => Err(Error::InexactDivision { remainder_degree }),
        }
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::GcdOfZeros);
        }
        Ok(Self { words: gcd_words(self.words.clone(), other.words.clone()) })
    }

    /// Formal derivative: odd-index coefficients move down one place, even ones vanish.
    pub fn derivative(&self) -> Self {
        const ODD: Word = (0xAAAA_AAAA_AAAA_AAAAu64) as Word;
        let masked: Vec<Word> = self.words.iter().map(|w| w & ODD).collect();
        Self::from_words(masked).shr(1)
    }

    /// Square root of a polynomial with only even-degree terms.
    pub(crate) fn sqrt_of_square(&self) -> Option<Self> {
        if !self.derivative().is_zero() {
            return None;
        }
        let halves: Vec<usize> = self.exponents().map(|e| e / 2).collect();
        Some(Self::from_exponents(&halves))
    }

    pub fn is_square_free(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).is_ok_and(|g| g.is_one()),
        }
    }
}

impl AddAssign<&DensePoly> for DensePoly {
    fn add_assign(&mut self, rhs: &DensePoly) {
        if self.words.len() < rhs.words.len() {
            self.words.resize(rhs.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
        normalize(&mut self.words);
    }
}

impl AddAssign for DensePoly {
    fn add_assign(&mut self, rhs: DensePoly) {
        *self += &rhs;
    }
}

impl Add for &DensePoly {
    type Output = DensePoly;
    fn add(self, rhs: &DensePoly) -> DensePoly {
        DensePoly::add(self, rhs)
    }
}

impl Add for DensePoly {
    type Output = DensePoly;
    fn add(mut self, rhs: DensePoly) -> DensePoly {
        self += &rhs;
        self
    }
}

impl Mul for &DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: &DensePoly) -> DensePoly {
        DensePoly::mul(self, rhs)
    }
}

impl Mul for DensePoly {
    type Output = DensePoly;
    fn mul(self, rhs: DensePoly) -> DensePoly {
        DensePoly::mul(&self, &rhs)
    }
}

impl MulAssign<&DensePoly> for DensePoly {
    fn mul_assign(&mut self, rhs: &DensePoly) {
        *self = DensePoly::mul(self, rhs);
    }
}
