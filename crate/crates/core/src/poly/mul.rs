use super::word::{clmul_with_table, square_word, window_table, Word};
use super::WORD_BITS;

/// Operand size (in words, per factor) above which Karatsuba splitting is used.
/// 256 words is degree 2^14 with 64-bit words.
pub const KARATSUBA_THRESHOLD_WORDS: usize = (1 << 14) / WORD_BITS;

pub(crate) fn mul_words(a: &[Word], b: &[Word]) -> Vec<Word> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len()];
    mul_into(a, b, &mut out);
    out
}

/// `out ^= a * b`; `out` must hold at least `a.len() + b.len()` words.
fn mul_into(a: &[Word], b: &[Word], out: &mut [Word]) {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.len() < KARATSUBA_THRESHOLD_WORDS {
        schoolbook(a, b, out);
    } else if a.len() > b.len() + b.len() / 2 {
        // unbalanced: slice the long operand into chunks of the short one's length
        for (k, chunk) in a.chunks(b.len()).enumerate() {
            let off = k * b.len();
            mul_into(chunk, b, &mut out[off..off + chunk.len() + b.len()]);
        }
    } else {
        karatsuba(a, b, out);
    }
}

fn schoolbook(a: &[Word], b: &[Word], out: &mut [Word]) {
    // b is the shorter operand; one window table per word of b
    for (j, &bw) in b.iter().enumerate() {
        if bw == 0 {
            continue;
        }
        let table = window_table(bw);
        for (i, &aw) in a.iter().enumerate() {
            let (lo, hi) = clmul_with_table(&table, aw);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

fn karatsuba(a: &[Word], b: &[Word], out: &mut [Word]) {
    let half = b.len() / 2;
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);

    let mut low = vec![0; a0.len() + b0.len()];
    mul_into(a0, b0, &mut low);
    let mut high = vec![0; a1.len() + b1.len()];
    mul_into(a1, b1, &mut high);

    let sa = xor_sum(a0, a1);
    let sb = xor_sum(b0, b1);
    let mut mid = vec![0; sa.len() + sb.len()];
    mul_into(&sa, &sb, &mut mid);
    for (m, &v) in mid.iter_mut().zip(&low) {
        *m ^= v;
    }
    for (m, &v) in mid.iter_mut().zip(&high) {
        *m ^= v;
    }

    for (o, &v) in out.iter_mut().zip(&low) {
        *o ^= v;
    }
    for (o, &v) in out[half..].iter_mut().zip(&mid) {
        *o ^= v;
    }
    for (o, &v) in out[2 * half..].iter_mut().zip(&high) {
        *o ^= v;
    }
}

fn xor_sum(x: &[Word], y: &[Word]) -> Vec<Word> {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut s = long.to_vec();
    for (d, &v) in s.iter_mut().zip(short) {
        *d ^= v;
    }
    s
}

/// Writes `a^2` into `out` (cleared first). Not normalized when `a` is empty.
pub(crate) fn square_words_into(a: &[Word], out: &mut Vec<Word>) {
    out.clear();
    out.reserve(2 * a.len());
    for &w in a {
        let (lo, hi) = square_word(w);
        out.push(lo);
        out.push(hi);
    }
    super::normalize(out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn schoolbook_only(a: &[Word], b: &[Word]) -> Vec<Word> {
        let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
        let mut out = vec![0; a.len() + b.len()];
        schoolbook(a, b, &mut out);
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn karatsuba_agrees_with_schoolbook(
            a in proptest::collection::vec(any::<Word>(), KARATSUBA_THRESHOLD_WORDS..3 * KARATSUBA_THRESHOLD_WORDS),
            b in proptest::collection::vec(any::<Word>(), KARATSUBA_THRESHOLD_WORDS..2 * KARATSUBA_THRESHOLD_WORDS),
        ) {
            prop_assert_eq!(mul_words(&a, &b), schoolbook_only(&a, &b));
        }
    }
}
