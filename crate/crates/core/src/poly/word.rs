//! Machine-word kernels: carry-less word products and bit spreading for squaring.

#[cfg(not(feature = "word32"))]
pub type Word = u64;
#[cfg(not(feature = "word32"))]
type DWord = u128;

#[cfg(feature = "word32")]
pub type Word = u32;
#[cfg(feature = "word32")]
type DWord = u64;

pub const WORD_BITS: usize = Word::BITS as usize;

/// Byte -> 16-bit value with the byte's bits moved to the even positions.
const SPREAD_BYTE: [u16; 256] = {
    let mut table = [0u16; 256];
    let mut b = 0;
    while b < 256 {
        let mut v = 0u16;
        let mut bit = 0;
        while bit < 8 {
            if b & (1 << bit) != 0 {
                v |= 1 << (2 * bit);
            }
            bit += 1;
        }
        table[b] = v;
        b += 1;
    }
    table
};

#[inline]
fn spread32(x: u32) -> u64 {
    let b = x.to_le_bytes();
    SPREAD_BYTE[b[0] as usize] as u64
        | (SPREAD_BYTE[b[1] as usize] as u64) << 16
        | (SPREAD_BYTE[b[2] as usize] as u64) << 32
        | (SPREAD_BYTE[b[3] as usize] as u64) << 48
}

/// Square of a single word as a polynomial: `(low word, high word)`.
#[inline]
#[cfg(not(feature = "word32"))]
pub fn square_word(w: Word) -> (Word, Word) {
    (spread32(w as u32), spread32((w >> 32) as u32))
}

#[inline]
#[cfg(feature = "word32")]
pub fn square_word(w: Word) -> (Word, Word) {
    let v = spread32(w);
    (v as u32, (v >> 32) as u32)
}

/// Multiples of `a` by every polynomial of degree < 4, used by the 4-bit window product.
#[inline]
pub(crate) fn window_table(a: Word) -> [DWord; 16] {
    let a = a as DWord;
    let mut table = [0 as DWord; 16];
    let mut j = 1;
    while j < 16 {
        table[j] = (table[j >> 1] << 1) ^ if j & 1 == 1 { a } else { 0 };
        j += 1;
    }
    table
}

#[inline]
pub(crate) fn clmul_with_table(table: &[DWord; 16], b: Word) -> (Word, Word) {
    let mut acc: DWord = 0;
    let mut shift = WORD_BITS;
    while shift > 0 {
        shift -= 4;
        acc = (acc << 4) ^ table[((b >> shift) & 15) as usize];
    }
    (acc as Word, (acc >> WORD_BITS) as Word)
}

/// Carry-less product of two words: `(low word, high word)`.
#[inline]
pub fn clmul(a: Word, b: Word) -> (Word, Word) {
    clmul_with_table(&window_table(a), b)
}
