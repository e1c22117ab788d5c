//! Basis words of the Clifford algebra of `T ⊕ T*` and their action on
//! basis forms.
//!
//! A word is a bitmask over the `2m` generators: bit `i < m` is `∂_{i+1}`,
//! bit `m + i` is `dx^{i+1}`. Bits are read in increasing order, so every
//! word is a product of its generators in that fixed order. A basis form
//! `dx^S` is a bitmask over the `m` cotangent directions.

use std::collections::BTreeMap;

pub type Word = u32;
pub type FormWord = u32;

#[inline]
fn below(w: u32, bit: u32) -> u32 {
    w & ((1u32 << bit) - 1)
}

/// `⟨e_a, e_b⟩` doubled: 1 for a pair `(∂_i, dx^i)`, 0 otherwise.
#[inline]
pub fn twice_pairing(m: usize, a: u32, b: u32) -> i64 {
    i64::from(a.abs_diff(b) == m as u32)
}

/// Product `w · e_g` as an integer combination of words.
pub fn mul_word_gen(m: usize, w: Word, g: u32, out: &mut Vec<(i64, Word)>) {
    if w == 0 {
        out.push((1, 1 << g));
        return;
    }
    let h = 31 - w.leading_zeros();
    if h < g {
        out.push((1, w | (1 << g)));
        return;
    }
    if h == g {
        return;
    }
    // w = u·e_h with h > g: u·e_h·e_g = −(u·e_g)·e_h + 2⟨e_h,e_g⟩ u.
    let u = w & !(1 << h);
    let start = out.len();
    mul_word_gen(m, u, g, out);
    for t in &mut out[start..] {
        t.0 = -t.0;
        t.1 |= 1 << h;
    }
    if twice_pairing(m, h, g) != 0 {
        out.push((1, u));
    }
}

/// Product of two basis words as an integer combination of words.
pub fn mul_words(m: usize, a: Word, b: Word) -> BTreeMap<Word, i64> {
    let mut cur: BTreeMap<Word, i64> = BTreeMap::new();
    cur.insert(a, 1);
    let mut bits = b;
    let mut buf = Vec::new();
    while bits != 0 {
        let g = bits.trailing_zeros();
        bits &= bits - 1;
        let mut next: BTreeMap<Word, i64> = BTreeMap::new();
        for (&w, &c) in &cur {
            buf.clear();
            mul_word_gen(m, w, g, &mut buf);
            for &(s, v) in &buf {
                *next.entry(v).or_insert(0) += s * c;
            }
        }
        next.retain(|_, c| *c != 0);
        cur = next;
    }
    cur
}

/// Action of the generator `e_g` on the basis form `dx^S`.
#[inline]
pub fn gen_on_form(m: usize, g: u32, s: FormWord) -> Option<(i64, FormWord)> {
    let (i, wedge) = if (g as usize) < m {
        (g, false)
    } else {
        (g - m as u32, true)
    };
    let present = s & (1 << i) != 0;
    if present == wedge {
        return None;
    }
    let sign = if below(s, i).count_ones() % 2 == 0 {
        1
    } else {
        -1
    };
    Some((sign, s ^ (1 << i)))
}

/// Action of a basis word on `dx^S`: generators act right to left.
pub fn word_on_form(m: usize, w: Word, s: FormWord) -> Option<(i64, FormWord)> {
    let mut sign = 1;
    let mut cur = s;
    let mut bits = w;
    while bits != 0 {
        let g = 31 - bits.leading_zeros();
        bits &= !(1 << g);
        let (sg, next) = gen_on_form(m, g, cur)?;
        sign *= sg;
        cur = next;
    }
    Some((sign, cur))
}

pub fn word_len(w: Word) -> usize {
    w.count_ones() as usize
}

/// Generator name: `d1…dm` for `∂_i`, `dx1…dxm` for `dx^i`.
pub fn gen_name(m: usize, g: u32) -> String {
    if (g as usize) < m {
        format!("d{}", g + 1)
    } else {
        format!("dx{}", g as usize - m + 1)
    }
}

pub fn word_name(m: usize, w: Word) -> String {
    if w == 0 {
        return "1".into();
    }
    (0..2 * m as u32)
        .filter(|g| w & (1 << g) != 0)
        .map(|g| gen_name(m, g))
        .collect::<Vec<_>>()
        .join("*")
}

pub fn form_word_name(s: FormWord) -> String {
    if s == 0 {
        return "1".into();
    }
    (0..32)
        .filter(|i| s & (1 << i) != 0)
        .map(|i| format!("dx{}", i + 1))
        .collect::<Vec<_>>()
        .join("^")
}

/// Parses a generator name back to its bit index.
pub fn parse_gen(m: usize, name: &str) -> Option<u32> {
    let (base, idx) = if let Some(r) = name.strip_prefix("dx") {
        (m, r)
    } else if let Some(r) = name.strip_prefix('d') {
        (0, r)
    } else {
        return None;
    };
    let i: usize = idx.parse().ok()?;
    (1..=m).contains(&i).then(|| (base + i - 1) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_relation() {
        // ∂₁·dx¹ + dx¹·∂₁ = 1 with m = 1: words ∂₁ = bit 0, dx¹ = bit 1.
        let a = mul_words(1, 0b01, 0b10);
        let b = mul_words(1, 0b10, 0b01);
        assert_eq!(a.get(&0b11), Some(&1));
        assert_eq!(b.get(&0b11), Some(&-1));
        assert_eq!(b.get(&0), Some(&1));
        assert!(a.get(&0).is_none());
    }

    #[test]
    fn isotropic_squares() {
        assert!(mul_words(2, 0b0001, 0b0001).is_empty());
        assert!(mul_words(2, 0b0100, 0b0100).is_empty());
    }

    #[test]
    fn interior_and_wedge() {
        // ∂₁ · (dx¹∧dx²) = dx²
        assert_eq!(word_on_form(2, 0b0001, 0b11), Some((1, 0b10)));
        // ∂₂ · (dx¹∧dx²) = −dx¹
        assert_eq!(word_on_form(2, 0b0010, 0b11), Some((-1, 0b01)));
        // dx¹ · 1 = dx¹
        assert_eq!(word_on_form(2, 0b0100, 0), Some((1, 0b01)));
    }

    #[test]
    fn names_round_trip() {
        assert_eq!(word_name(2, 0b1001), "d1*dx2");
        assert_eq!(parse_gen(2, "dx2"), Some(3));
        assert_eq!(parse_gen(2, "d3"), None);
        assert_eq!(form_word_name(0b101), "dx1^dx3");
    }
}
