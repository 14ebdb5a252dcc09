//! Letters, path words and free-group words.
//!
//! A [`PathWord`] is an arbitrary finite sequence of letters. It names an
//! irreducible object and, equivalently, a walk in the Cayley graph of the
//! free group that starts at the identity and may turn back on itself. A
//! [`GroupWord`] is always freely reduced and names a vertex of that graph.
//! The two types never convert silently: [`PathWord::endpoint`] reduces and
//! [`GroupWord::shortest_path`] reinterprets a reduced word as a geodesic.
//!
//! Both word types share an immutable, reference-counted letter buffer with a
//! precomputed hash, so cloning is cheap and hashing is constant-time.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The number `n` of free factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    rank: u32,
}

impl Signature {
    pub fn new(rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        Ok(Self { rank })
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// Size of the letter alphabet, `2n`.
    pub fn alphabet_len(&self) -> usize {
        2 * self.rank as usize
    }

    /// All `2n` letters in canonical order.
    pub fn alphabet(&self) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * self.rank).map(Letter)
    }

    pub fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.index() > self.rank {
            return Err(Error::SignatureMismatch {
                index: letter.index(),
                rank: self.rank,
            });
        }
        Ok(())
    }

    pub fn check(&self, letters: &[Letter]) -> Result<()> {
        letters.iter().try_for_each(|&l| self.check_letter(l))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One oriented edge type of the Cayley graph: generator `a_j` or its inverse.
///
/// Letters are ordered by index first, then `+1` before `-1`. Internally the
/// letter is the code `2(j-1) + [sign = -1]`, which realizes that order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    /// # Panics
    /// If `index` is zero.
    pub fn new(index: u32, sign: Sign) -> Letter {
        assert!(index >= 1, "letter indices start at 1");
        Letter(2 * (index - 1) + matches!(sign, Sign::Minus) as u32)
    }

    pub fn pos(index: u32) -> Letter {
        Letter::new(index, Sign::Plus)
    }

    pub fn neg(index: u32) -> Letter {
        Letter::new(index, Sign::Minus)
    }

    pub fn index(self) -> u32 {
        self.0 / 2 + 1
    }

    pub fn sign(self) -> Sign {
        if self.0 & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.0 ^ 1 == other.0
    }

    /// Dense code in `0..2n`, usable as an array slot.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Letter {
        Letter(code as u32)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign() {
            Sign::Plus => write!(f, "a{}", self.index()),
            Sign::Minus => write!(f, "A{}", self.index()),
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn hash_letters(letters: &[Letter]) -> u64 {
    // FNV-1a over letter codes, finished with a 64-bit avalanche.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for l in letters {
        h ^= l.0 as u64 + 1;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^= letters.len() as u64;
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h
}

#[derive(Clone)]
struct Word {
    letters: Arc<[Letter]>,
    hash: u64,
}

impl Word {
    fn new(letters: Vec<Letter>) -> Word {
        let hash = hash_letters(&letters);
        Word {
            letters: letters.into(),
            hash,
        }
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash
            && (Arc::ptr_eq(&self.letters, &other.letters) || self.letters == other.letters)
    }
}

impl Eq for Word {}

impl Hash for Word {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

/// Length first, then lexicographic in letter order.
pub fn canonical_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(&self.letters, &other.letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[Letter]) -> fmt::Result {
    if letters.is_empty() {
        return f.write_str("1");
    }
    for (i, l) in letters.iter().enumerate() {
        if i > 0 {
            f.write_str(".")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// Parses the word grammar: `a<d>` / `A<d>` tokens separated by `.` or
/// whitespace, or the literal `1` alone for the empty word.
pub fn parse_letters(sig: Signature, text: &str) -> Result<Vec<Letter>> {
    let err = |reason: String| Error::Parse {
        text: text.to_string(),
        reason,
    };
    let tokens: Vec<&str> = text
        .split(|c: char| c == '.' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    match tokens.as_slice() {
        [] => return Err(err("empty input".into())),
        ["1"] => return Ok(Vec::new()),
        _ => {}
    }
    let mut letters = Vec::with_capacity(tokens.len());
    for token in tokens {
        let sign = match token.as_bytes()[0] {
            b'a' => Sign::Plus,
            b'A' => Sign::Minus,
            _ => return Err(err(format!("unexpected token {token:?}"))),
        };
        let digits = &token[1..];
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err(format!("unexpected token {token:?}")));
        }
        let index: u32 = digits
            .parse()
            .map_err(|_| err(format!("index in {token:?} is too large")))?;
        if index == 0 {
            return Err(err("letter indices start at 1".into()));
        }
        let letter = Letter::new(index, sign);
        sig.check_letter(letter)?;
        letters.push(letter);
    }
    Ok(letters)
}

/// Free reduction by a single left-to-right stack pass.
fn freely_reduce(raw: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        match out.last() {
            Some(&last) if last.is_inverse_of(l) => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    out
}

macro_rules! word_common {
    ($ty:ident) => {
        impl $ty {
            pub fn empty() -> Self {
                $ty(Word::new(Vec::new()))
            }

            pub fn letters(&self) -> &[Letter] {
                &self.0.letters
            }

            pub fn len(&self) -> usize {
                self.0.letters.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.letters.is_empty()
            }

            pub fn first(&self) -> Option<Letter> {
                self.0.letters.first().copied()
            }

            pub fn last(&self) -> Option<Letter> {
                self.0.letters.last().copied()
            }

            /// Bracket notation, one bracket per letter: `[a1][A2]`.
            pub fn bracketed(&self) -> String {
                if self.is_empty() {
                    return "[1]".to_string();
                }
                self.letters().iter().map(|l| format!("[{l}]")).collect()
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_letters(f, self.letters())
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(", stringify!($ty))?;
                write_letters(f, self.letters())?;
                f.write_str(")")
            }
        }

        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }
    };
}

/// An element of the free monoid on `2n` letters: an irreducible object,
/// read as a walk from the identity in the Cayley graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathWord(Word);

/// A freely reduced word: an element of the free group, a vertex of the
/// Cayley graph.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord(Word);

word_common!(PathWord);
word_common!(GroupWord);

impl PathWord {
    /// Wraps the sequence verbatim; nothing is cancelled.
    pub fn new(letters: impl Into<Vec<Letter>>) -> PathWord {
        PathWord(Word::new(letters.into()))
    }

    pub fn checked(sig: Signature, letters: impl Into<Vec<Letter>>) -> Result<PathWord> {
        let letters = letters.into();
        sig.check(&letters)?;
        Ok(PathWord::new(letters))
    }

    pub fn parse(sig: Signature, text: &str) -> Result<PathWord> {
        parse_letters(sig, text).map(PathWord::new)
    }

    /// The terminal vertex of the walk.
    pub fn endpoint(&self) -> GroupWord {
        GroupWord(Word::new(freely_reduce(self.letters())))
    }

    /// The vertex reached after each prefix of length `0..=len`, in order.
    /// Deduplicating the list gives the vertex set of the walk.
    pub fn prefix_endpoints(&self) -> Vec<GroupWord> {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        let mut out = Vec::with_capacity(self.len() + 1);
        out.push(GroupWord::empty());
        for &l in self.letters() {
            match stack.last() {
                Some(&last) if last.is_inverse_of(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
            out.push(GroupWord(Word::new(stack.clone())));
        }
        out
    }

    /// Monoid product: the walk `self` followed by the translate of `other`.
    pub fn concat(&self, other: &PathWord) -> PathWord {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(self.letters());
        letters.extend_from_slice(other.letters());
        PathWord::new(letters)
    }

    pub fn prefix(&self, len: usize) -> PathWord {
        PathWord::new(&self.letters()[..len])
    }

    pub fn suffix_from(&self, start: usize) -> PathWord {
        PathWord::new(&self.letters()[start..])
    }
}

impl GroupWord {
    /// Freely reduces `raw`, checking each letter against `sig`.
    pub fn reduce(sig: Signature, raw: &[Letter]) -> Result<GroupWord> {
        sig.check(raw)?;
        Ok(GroupWord::from_letters(raw))
    }

    /// Freely reduces `raw` without a signature check.
    pub fn from_letters(raw: &[Letter]) -> GroupWord {
        GroupWord(Word::new(freely_reduce(raw)))
    }

    pub fn parse(sig: Signature, text: &str) -> Result<GroupWord> {
        parse_letters(sig, text).map(|l| GroupWord::from_letters(&l))
    }

    pub fn is_identity(&self) -> bool {
        self.is_empty()
    }

    pub fn multiply(&self, other: &GroupWord) -> GroupWord {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let a = self.letters();
        let b = other.letters();
        let mut cancel = 0;
        while cancel < a.len().min(b.len()) && a[a.len() - 1 - cancel].is_inverse_of(b[cancel]) {
            cancel += 1;
        }
        let mut letters = Vec::with_capacity(a.len() + b.len() - 2 * cancel);
        letters.extend_from_slice(&a[..a.len() - cancel]);
        letters.extend_from_slice(&b[cancel..]);
        GroupWord(Word::new(letters))
    }

    pub fn invert(&self) -> GroupWord {
        GroupWord(Word::new(
            self.letters().iter().rev().map(|l| l.inverse()).collect(),
        ))
    }

    /// The geodesic from the identity to this vertex, as a path word.
    pub fn shortest_path(&self) -> PathWord {
        PathWord(self.0.clone())
    }

    /// Geodesic prefixes `g_0 = 1, g_1, ..., g_len = self`.
    pub fn prefixes(&self) -> impl Iterator<Item = GroupWord> + '_ {
        (0..=self.len()).map(|k| GroupWord(Word::new(self.letters()[..k].to_vec())))
    }
}
