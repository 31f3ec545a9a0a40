//! Words in a free group of finite rank.
//!
//! Letters are signed generator indices. Generator `g` is written `a`, `b`,
//! `c`, `d` for `g <= 4` and `x5`, `x6`, ... above that; inverses are
//! capitalised (`A`, `X5`). The derived order on [`Letter`] is the base order
//! `x_r^-1 < ... < x_1^-1 < x_1 < ... < x_r`, and [`Word`]'s `Ord` is the
//! shortlex extension of it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest rank accepted by [`Rank::new`].
pub const MAX_RANK: usize = 8;

/// Rank of a free group, `1 <= r <= MAX_RANK`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rank(u8);

impl Rank {
    pub fn new(r: usize) -> Result<Rank> {
        if r == 0 || r > MAX_RANK {
            return Err(invalid(format!("rank {r} outside 1..={MAX_RANK}")));
        }
        Ok(Rank(r as u8))
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Letters of the rank in base order.
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        let r = self.0 as i8;
        (-r..=r).filter(|&x| x != 0).map(Letter)
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A generator or its inverse.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct Letter(i8);

impl Letter {
    /// # Panics
    /// If `generator` is 0 or larger than 127.
    pub fn new(generator: usize, positive: bool) -> Letter {
        assert!(
            (1..=127).contains(&generator),
            "generator index {generator} out of range"
        );
        let g = generator as i8;
        Letter(if positive { g } else { -g })
    }

    pub(crate) const fn from_raw(raw: i8) -> Letter {
        Letter(raw)
    }

    pub(crate) const fn raw(self) -> i8 {
        self.0
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Dense index into `X^±`: `x_g -> 2(g-1)`, `x_g^-1 -> 2(g-1)+1`.
    pub fn index(self) -> usize {
        2 * (self.generator() - 1) + usize::from(self.0 < 0)
    }

    pub fn from_index(i: usize) -> Letter {
        Letter::new(i / 2 + 1, i.is_multiple_of(2))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.generator();
        if g <= 4 {
            let base = if self.is_positive() { b'a' } else { b'A' };
            write!(f, "{}", (base + (g as u8 - 1)) as char)
        } else if self.is_positive() {
            write!(f, "x{g}")
        } else {
            write!(f, "X{g}")
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parse a letter sequence without reducing it.
pub fn parse_letters(s: &str) -> Result<Vec<Letter>> {
    let bytes = s.as_bytes();
    let mut out = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'a'..=b'd' => out.push(Letter::new((c - b'a' + 1) as usize, true)),
            b'A'..=b'D' => out.push(Letter::new((c - b'A' + 1) as usize, false)),
            b'x' | b'X' => {
                let start = i + 1;
                let mut end = start;
                while end < bytes.len() && bytes[end].is_ascii_digit() {
                    end += 1;
                }
                let g: usize = s[start..end]
                    .parse()
                    .map_err(|_| invalid(format!("expected generator number after '{}' in {s:?}", c as char)))?;
                if g == 0 || g > 127 {
                    return Err(invalid(format!("generator x{g} out of range in {s:?}")));
                }
                out.push(Letter::new(g, c == b'x'));
                i = end;
                continue;
            }
            b' ' | b'\t' | b'.' => {}
            _ => return Err(invalid(format!("unexpected character {:?} in {s:?}", c as char))),
        }
        i += 1;
    }
    Ok(out)
}

fn reduce_into(out: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for x in letters {
        if out.last() == Some(&x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Freely reduce `raw`, rejecting letters whose generator exceeds `rank`.
    pub fn free_reduce(raw: &[Letter], rank: Rank) -> Result<Word> {
        if let Some(x) = raw.iter().find(|x| x.generator() > rank.get()) {
            return Err(invalid(format!("letter {x} exceeds rank {rank}")));
        }
        Ok(Word::reduce(raw.iter().copied()))
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Word {
        let mut out = Vec::new();
        reduce_into(&mut out, raw);
        Word(out)
    }

    /// Caller guarantees `letters` is freely reduced.
    pub(crate) fn from_reduced(letters: Vec<Letter>) -> Word {
        debug_assert!(is_freely_reduced(&letters));
        Word(letters)
    }

    /// Parse and freely reduce.
    pub fn parse(s: &str) -> Result<Word> {
        Ok(Word::reduce(parse_letters(s)?))
    }

    /// Parse, reduce, and check every letter lies in `rank`.
    pub fn parse_in(s: &str, rank: Rank) -> Result<Word> {
        Word::free_reduce(&parse_letters(s)?, rank)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    /// Free reduction of `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        reduce_into(&mut out, other.0.iter().copied());
        Word(out)
    }

    pub fn pow(&self, k: usize) -> Word {
        let mut out = Vec::with_capacity(self.len() * k);
        for _ in 0..k {
            reduce_into(&mut out, self.0.iter().copied());
        }
        Word(out)
    }

    /// `c · self · c^-1`, freely reduced.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.concat(self).concat(&c.inverse())
    }

    /// `|w|_g`: occurrences of generator `g` or its inverse.
    pub fn occurrence_count(&self, generator: usize) -> usize {
        occurrence_count(&self.0, generator)
    }

    /// Bit `g-1` is set when generator `g` occurs.
    pub fn support_mask(&self) -> u64 {
        support_mask(&self.0)
    }

    /// Number of distinct generators occurring.
    pub fn support_size(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.generator()).max().unwrap_or(0)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Split `self = conjugator · core · conjugator^-1` with `core`
    /// cyclically reduced. `core` is the literal middle segment, not rotated.
    pub fn cyclic_reduce(&self) -> CyclicReduction {
        let n = self.0.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.0[i] == self.0[n - 1 - i].inverse() {
            i += 1;
        }
        CyclicReduction {
            core: Word(self.0[i..n - i].to_vec()),
            conjugator: Word(self.0[..i].to_vec()),
        }
    }

    /// `||w||`, the length of the cyclic reduction.
    pub fn cyclic_length(&self) -> usize {
        let n = self.0.len();
        let mut i = 0;
        while 2 * i + 1 < n && self.0[i] == self.0[n - 1 - i].inverse() {
            i += 1;
        }
        n - 2 * i
    }

    pub fn to_cyclic(&self) -> CyclicWord {
        CyclicWord::new(self)
    }

    /// Maximal root decomposition `self = root^exponent`.
    pub fn power_decompose(&self) -> Result<PowerDecomposition> {
        if self.is_empty() {
            return Err(invalid("the trivial word has no root"));
        }
        let CyclicReduction { core, conjugator } = self.cyclic_reduce();
        let period = minimal_period(&core.0);
        let root = Word(core.0[..period].to_vec()).conjugate_by(&conjugator);
        Ok(PowerDecomposition {
            root,
            exponent: core.len() / period,
        })
    }

    pub fn is_proper_power(&self) -> bool {
        !self.is_empty() && minimal_period(&self.cyclic_reduce().core.0) < self.cyclic_length()
    }
}

/// Smallest `d | n` such that `letters` is `d`-periodic (as a cyclic word).
pub(crate) fn minimal_period(letters: &[Letter]) -> usize {
    let n = letters.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (d..n).all(|i| letters[i] == letters[i - d]))
        .unwrap_or(n)
}

pub(crate) fn is_freely_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|p| p[0] != p[1].inverse())
}

pub(crate) fn occurrence_count(letters: &[Letter], generator: usize) -> usize {
    letters.iter().filter(|x| x.generator() == generator).count()
}

pub(crate) fn support_mask(letters: &[Letter]) -> u64 {
    letters.iter().fold(0u64, |m, x| m | 1 << (x.generator() - 1))
}

/// Shortlex comparison of letter slices.
pub fn shortlex_cmp(u: &[Letter], v: &[Letter]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// Shortlex comparison in the base order `x_r^-1 < ... < x_1^-1 < x_1 < ... < x_r`.
pub fn shortlex_compare(u: &Word, v: &Word) -> Ordering {
    shortlex_cmp(&u.0, &v.0)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self:?})", self = self.to_string())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s)
    }
}

/// Output of [`Word::cyclic_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicReduction {
    pub core: Word,
    pub conjugator: Word,
}

impl CyclicReduction {
    pub fn cyclic(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(self.core.0.clone())
    }
}

/// `word = root^exponent` with `exponent` maximal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerDecomposition {
    pub root: Word,
    pub exponent: usize,
}

/// A conjugacy class of words: cyclically reduced, stored in its
/// shortlex-least rotation.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct CyclicWord(Vec<Letter>);

impl CyclicWord {
    pub fn new(w: &Word) -> CyclicWord {
        w.cyclic_reduce().cyclic()
    }

    pub fn parse(s: &str) -> Result<CyclicWord> {
        Ok(CyclicWord::new(&Word::parse(s)?))
    }

    pub fn parse_in(s: &str, rank: Rank) -> Result<CyclicWord> {
        Ok(CyclicWord::new(&Word::parse_in(s, rank)?))
    }

    pub(crate) fn from_cyclically_reduced(letters: Vec<Letter>) -> CyclicWord {
        debug_assert!(Word(letters.clone()).is_cyclically_reduced());
        debug_assert!(is_freely_reduced(&letters));
        let k = least_rotation(&letters);
        let mut letters = letters;
        letters.rotate_left(k);
        CyclicWord(letters)
    }

    /// Trust that `letters` is cyclically reduced and already the least rotation.
    pub(crate) fn from_canonical(letters: Vec<Letter>) -> CyclicWord {
        debug_assert_eq!(least_rotation(&letters), 0);
        CyclicWord(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::from_cyclically_reduced(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    /// All `len()` rotations, starting with the canonical one.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.0.len();
        (0..n).map(move |k| {
            let mut v = self.0.clone();
            v.rotate_left(k);
            Word(v)
        })
    }

    pub fn occurrence_count(&self, generator: usize) -> usize {
        occurrence_count(&self.0, generator)
    }

    pub fn support_mask(&self) -> u64 {
        support_mask(&self.0)
    }

    pub fn support_size(&self) -> usize {
        self.support_mask().count_ones() as usize
    }

    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|x| x.generator()).max().unwrap_or(0)
    }

    pub fn is_proper_power(&self) -> bool {
        !self.is_empty() && minimal_period(&self.0) < self.0.len()
    }
}

/// Index of the shortlex-least rotation.
pub(crate) fn least_rotation(letters: &[Letter]) -> usize {
    let n = letters.len();
    let mut best = 0;
    for k in 1..n {
        for i in 0..n {
            let a = letters[(k + i) % n];
            let b = letters[(best + i) % n];
            if a != b {
                if a < b {
                    best = k;
                }
                break;
            }
        }
    }
    best
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex_cmp(&self.0, &other.0)
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord({:?})", self.to_string())
    }
}

impl FromStr for CyclicWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<CyclicWord> {
        CyclicWord::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn free_reduce_examples() {
        let r2 = Rank::new(2).unwrap();
        let r3 = Rank::new(3).unwrap();
        assert_eq!(Word::free_reduce(&parse_letters("abBA").unwrap(), r2).unwrap(), Word::identity());
        assert_eq!(Word::free_reduce(&parse_letters("abBc").unwrap(), r3).unwrap().to_string(), "ac");
        assert_eq!(Word::free_reduce(&parse_letters("abAB").unwrap(), r2).unwrap().to_string(), "abAB");
    }

    #[test]
    fn free_reduce_rejects_letters_above_rank() {
        let r2 = Rank::new(2).unwrap();
        let err = Word::free_reduce(&parse_letters("abc").unwrap(), r2).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn rank_bounds() {
        assert!(Rank::new(0).is_err());
        assert!(Rank::new(MAX_RANK + 1).is_err());
        assert_eq!(Rank::new(2).unwrap().letters().map(|x| x.to_string()).collect::<String>(), "BAab");
    }

    #[test]
    fn cyclic_reduce_examples() {
        let r = w("Aba").cyclic_reduce();
        assert_eq!(r.core.to_string(), "b");
        assert_eq!(r.conjugator.to_string(), "A");
        let r = w("abAB").cyclic_reduce();
        assert_eq!(r.core.to_string(), "abAB");
        assert!(r.conjugator.is_empty());
        let r = w("").cyclic_reduce();
        assert!(r.core.is_empty() && r.conjugator.is_empty());
    }

    #[test]
    fn shortlex_examples() {
        assert_eq!(shortlex_compare(&w("B"), &w("a")), Ordering::Less);
        assert_eq!(shortlex_compare(&w("BA"), &w("Ba")), Ordering::Less);
        assert_eq!(shortlex_compare(&w("b"), &w("AA")), Ordering::Less);
        let mut order: Vec<Word> = ["b", "a", "A", "B"].iter().map(|s| w(s)).collect();
        order.sort();
        assert_eq!(order.iter().map(|x| x.to_string()).collect::<Vec<_>>(), ["B", "A", "a", "b"]);
    }

    #[test]
    fn occurrence_count_examples() {
        assert_eq!(w("abAB").occurrence_count(1), 2);
        assert_eq!(w("abAB").occurrence_count(2), 2);
        assert_eq!(w("").occurrence_count(1), 0);
    }

    /// Independent oracle: try every divisor of the cyclic length and test
    /// periodicity of the cyclic word directly, then conjugate back.
    fn power_oracle(x: &Word) -> (Word, usize) {
        let CyclicReduction { core, conjugator } = x.cyclic_reduce();
        let n = core.len();
        let l = core.letters();
        for d in 1..=n {
            if n % d == 0 && (0..n).all(|i| l[i] == l[(i + d) % n]) {
                let root = Word::reduce(
                    conjugator
                        .letters()
                        .iter()
                        .chain(&l[..d])
                        .chain(conjugator.inverse().letters())
                        .copied(),
                );
                return (root, n / d);
            }
        }
        unreachable!()
    }

    #[test]
    fn power_decompose_examples() {
        let p = w("abab").power_decompose().unwrap();
        assert_eq!((p.root.to_string(), p.exponent), ("ab".into(), 2));
        let p = w("abaab").power_decompose().unwrap();
        assert_eq!((p.root.to_string(), p.exponent), ("abaab".into(), 1));
        // a^-1 b^2 a
        let p = w("Abba").power_decompose().unwrap();
        assert_eq!((p.root.to_string(), p.exponent), ("Aba".into(), 2));
        assert_eq!(power_oracle(&w("Abba")), (w("Aba"), 2));
        // a^-1 b^2 a^-1 is cyclically reduced and aperiodic
        let p = w("AbbA").power_decompose().unwrap();
        assert_eq!((p.root.to_string(), p.exponent), ("AbbA".into(), 1));
        assert_eq!(power_oracle(&w("AbbA")), (w("AbbA"), 1));
        assert!(matches!(w("").power_decompose(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn cyclic_word_canonical_rotation() {
        let c = CyclicWord::parse("abAB").unwrap();
        assert_eq!(c.to_string(), "BabA");
        assert_eq!(c, CyclicWord::parse("ABab").unwrap());
        assert_eq!(CyclicWord::parse("Aba").unwrap().to_string(), "b");
        assert_eq!(c.rotations().count(), 4);
    }

    #[test]
    fn high_rank_syntax() {
        let x = Word::parse("x5X5x6ax1").unwrap();
        assert_eq!(x.to_string(), "x6aa");
        assert!(Word::parse("ae").is_err());
        assert!(Word::parse("x0").is_err());
    }
}
