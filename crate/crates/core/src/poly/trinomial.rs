//! Arithmetic modulo a sparse trinomial `x^n + x^s + 1`.

use std::fmt;

use num_bigint::BigUint;

use super::mul::square_words_into;
use super::word::Word;
use super::{normalize, rem_words, DensePoly, WORD_BITS};
use crate::error::{Error, Result};

/// The trinomial `x^n + x^s + 1` with `0 < s < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trinomial {
    n: u64,
    s: u64,
}

impl Trinomial {
    pub fn new(n: u64, s: u64) -> Result<Self> {
        if s == 0 || s >= n {
            return Err(Error::InvalidTrinomial { n, s });
        }
        Ok(Self { n, s })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    /// `x^n + x^(n-s) + 1`, which has the same factorization pattern.
    pub fn reciprocal(&self) -> Self {
        Self { n: self.n, s: self.n - self.s }
    }

    pub fn to_dense(&self) -> DensePoly {
        DensePoly::from_exponents(&[self.n as usize, self.s as usize, 0])
    }
}

impl fmt::Display for Trinomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.s == 1 { "x".to_string() } else { format!("x^{}", self.s) };
        write!(f, "x^{}+{}+1", self.n, s)
    }
}

#[inline]
fn xor_word_at(w: &mut [Word], v: Word, pos: usize) {
    let q = pos / WORD_BITS;
    let r = pos % WORD_BITS;
    w[q] ^= v << r;
    if r != 0 {
        let hi = v >> (WORD_BITS - r);
        if hi != 0 {
            w[q + 1] ^= hi;
        }
    }
}

/// Reduces `w` modulo `x^n + x^s + 1` in place using `x^n = x^s + 1`.
///
/// Words above the one holding bit `n` are folded top-down; each fold moves
/// bits strictly downwards by `n - s` and `n`, so one descending pass suffices
/// apart from re-folding a word when `n - s` is shorter than a word.
pub(crate) fn reduce_trinomial_words(w: &mut Vec<Word>, n: usize, s: usize) {
    let lo = n / WORD_BITS;
    if w.len() <= lo {
        return;
    }
    let mut i = w.len();
    while i > lo + 1 {
        i -= 1;
        loop {
            let v = w[i];
            if v == 0 {
                break;
            }
            w[i] = 0;
            let base = i * WORD_BITS - n;
            xor_word_at(w, v, base + s);
            xor_word_at(w, v, base);
        }
    }
    let off = n % WORD_BITS;
    loop {
        let v = w[lo] >> off;
        if v == 0 {
            break;
        }
        w[lo] ^= v << off;
        xor_word_at(w, v, s);
        xor_word_at(w, v, 0);
    }
    w.truncate(lo + 1);
    normalize(w);
}

/// `a mod (x^n + x^s + 1)` by shifted-XOR folding.
pub fn rem_trinomial(a: &DensePoly, t: Trinomial) -> DensePoly {
    let mut words = a.words().to_vec();
    reduce_trinomial_words(&mut words, t.n as usize, t.s as usize);
    DensePoly::from_words(words)
}

/// Resumable chain of the residues `x^(2^i) mod T`.
///
/// The chain starts at index 0 with residue `x` (or a supplied starting
/// polynomial) and each [`Pow2Chain::step`] squares and reduces once.
#[derive(Clone, Debug)]
pub struct Pow2Chain {
    t: Trinomial,
    index: u64,
    residue: Vec<Word>,
    scratch: Vec<Word>,
}

impl Pow2Chain {
    pub fn new(t: Trinomial) -> Self {
        Self::from_start(t, &DensePoly::x())
    }

    /// Chain of `start^(2^i) mod T`.
    pub fn from_start(t: Trinomial, start: &DensePoly) -> Self {
        let residue = rem_trinomial(start, t).into_words();
        Self { t, index: 0, residue, scratch: Vec::new() }
    }

    pub fn trinomial(&self) -> Trinomial {
        self.t
    }

    /// Number of squarings applied so far.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn residue(&self) -> DensePoly {
        DensePoly::from_words(self.residue.clone())
    }

    pub fn step(&mut self) {
        square_words_into(&self.residue, &mut self.scratch);
        std::mem::swap(&mut self.residue, &mut self.scratch);
        reduce_trinomial_words(&mut self.residue, self.t.n as usize, self.t.s as usize);
        self.index += 1;
    }

    /// Advances to index `i`; does nothing if the chain is already there or past it.
    pub fn advance_to(&mut self, i: u64) {
        while self.index < i {
            self.step();
        }
    }
}

/// `x^(2^i) mod T` for `i = 1..=i_max`.
pub fn pow2_chain(t: Trinomial, i_max: u64) -> Vec<DensePoly> {
    let mut chain = Pow2Chain::new(t);
    (1..=i_max)
        .map(|_| {
            chain.step();
            chain.residue()
        })
        .collect()
}

/// Shifts `w` left by one bit and reduces, i.e. multiplies by `x` mod T.
fn mul_x_in_place(w: &mut Vec<Word>, t: Trinomial) {
    let mut carry: Word = 0;
    for word in w.iter_mut() {
        let next = *word >> (WORD_BITS - 1);
        *word = (*word << 1) | carry;
        carry = next;
    }
    if carry != 0 {
        w.push(carry);
    }
    reduce_trinomial_words(w, t.n as usize, t.s as usize);
}

/// `base^e mod T` by left-to-right square-and-multiply, reducing with [`rem_trinomial`].
pub fn powmod_big(base: &DensePoly, e: &BigUint, t: Trinomial) -> DensePoly {
    let base = rem_trinomial(base, t);
    let bits = e.bits();
    let mut acc = vec![1 as Word];
    let mut scratch = Vec::new();
    let is_x = base == DensePoly::x();
    for i in (0..bits).rev() {
        square_words_into(&acc, &mut scratch);
        std::mem::swap(&mut acc, &mut scratch);
        reduce_trinomial_words(&mut acc, t.n as usize, t.s as usize);
        if e.bit(i) {
            if is_x {
                mul_x_in_place(&mut acc, t);
            } else {
                let mut prod = DensePoly::from_words(acc).mul(&base).into_words();
                reduce_trinomial_words(&mut prod, t.n as usize, t.s as usize);
                acc = prod;
            }
        }
    }
    // T has degree >= 2, so 1 is already reduced
    DensePoly::from_words(acc)
}

/// `base^e mod m` for an arbitrary nonzero modulus.
pub fn powmod_dense(base: &DensePoly, e: &BigUint, m: &DensePoly) -> Result<DensePoly> {
    let base = base.rem(m)?;
    let mut acc = DensePoly::one().rem(m)?.into_words();
    for i in (0..e.bits()).rev() {
        let mut sq = DensePoly::from_words(acc).square().into_words();
        rem_words(&mut sq, m.words());
        acc = sq;
        if e.bit(i) {
            let mut prod = DensePoly::from_words(acc).mul(&base).into_words();
            rem_words(&mut prod, m.words());
            acc = prod;
        }
    }
    Ok(DensePoly::from_words(acc))
}

/// `x^(n mod m) + x^(s mod m) + 1` in `Z2[x]/(x^m + 1)`; coinciding exponents cancel.
pub fn trinomial_mod_cyclic(n: u64, s: u64, m: u64) -> Result<DensePoly> {
    if m == 0 {
        return Err(Error::Precondition("cyclic modulus m must be at least 1".into()));
    }
    Ok(DensePoly::from_exponents(&[(n % m) as usize, (s % m) as usize, 0]))
}
