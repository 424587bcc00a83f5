//! Alphabets, words and letter maps.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Ordered list of distinct generator names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty() || s == "1" || s.contains('^') || s.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("bad generator name {s:?}")));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::Parse(format!("duplicate generator {s}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, sym: u32) -> &str {
        &self.symbols[sym as usize]
    }

    pub fn index(&self, name: &str) -> Option<u32> {
        self.symbols.iter().position(|s| s == name).map(|i| i as u32)
    }

    pub fn require(&self, name: &str) -> Result<u32> {
        self.index(name)
            .ok_or_else(|| Error::AlphabetMismatch(format!("unknown generator {name}")))
    }

    /// Parses one token: `x`, `x^-1` or `x^n` for a nonzero integer n.
    fn parse_token(&self, tok: &str, out: &mut Vec<Letter>) -> Result<()> {
        let (name, exp) = match tok.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?;
                (n, e)
            }
            None => (tok, 1),
        };
        let sym = self.require(name)?;
        let l = if exp < 0 { Letter::neg(sym) } else { Letter::pos(sym) };
        for _ in 0..exp.unsigned_abs() {
            out.push(l);
        }
        Ok(())
    }

    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            self.parse_token(tok, &mut out)?;
        }
        Ok(out)
    }

    pub fn format_letters(&self, letters: &[Letter]) -> String {
        if letters.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, l) in letters.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(self.name(l.sym()));
            if l.is_inverse() {
                s.push_str("^-1");
            }
        }
        s
    }
}

/// A signed generator. Stored as `±(sym + 1)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(i32);

impl Letter {
    pub fn pos(sym: u32) -> Self {
        Letter(sym as i32 + 1)
    }

    pub fn neg(sym: u32) -> Self {
        Letter(-(sym as i32 + 1))
    }

    pub fn new(sym: u32, inverse: bool) -> Self {
        if inverse {
            Self::neg(sym)
        } else {
            Self::pos(sym)
        }
    }

    pub fn sym(self) -> u32 {
        (self.0.unsigned_abs()) - 1
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i64 {
        if self.0 < 0 {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    pub fn positive(self) -> Self {
        Letter(self.0.abs())
    }
}

pub fn reduce_letters(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// True when `a` is a rotation of `b`.
pub fn is_rotation(a: &[Letter], b: &[Letter]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..b.len()).any(|s| (0..a.len()).all(|i| a[i] == b[(s + i) % b.len()]))
}

/// All rotations of `w` and of its inverse, deduplicated.
pub fn signed_rotations(w: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    if w.is_empty() {
        out.insert(Vec::new());
        return out;
    }
    let inv = invert_letters(w);
    for base in [w, &inv[..]] {
        for s in 0..base.len() {
            let mut r = base[s..].to_vec();
            r.extend_from_slice(&base[..s]);
            out.insert(r);
        }
    }
    out
}

/// A word over a shared alphabet.
#[derive(Clone, Debug)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && same_alphabet(&self.alphabet, &other.alphabet)
    }
}

impl Eq for Word {}

pub fn same_alphabet(a: &Arc<Alphabet>, b: &Arc<Alphabet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl Word {
    pub fn new(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Result<Self> {
        if let Some(l) = letters.iter().find(|l| l.sym() as usize >= alphabet.len()) {
            return Err(Error::AlphabetMismatch(format!(
                "symbol index {} outside alphabet of size {}",
                l.sym(),
                alphabet.len()
            )));
        }
        Ok(Word { alphabet, letters })
    }

    pub(crate) fn from_raw(alphabet: Arc<Alphabet>, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.iter().all(|l| (l.sym() as usize) < alphabet.len()));
        Word { alphabet, letters }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Word { alphabet, letters: Vec::new() }
    }

    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Self> {
        let letters = alphabet.parse_letters(text)?;
        Ok(Word { alphabet: alphabet.clone(), letters })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_same(&self, other: &Word) -> Result<()> {
        if same_alphabet(&self.alphabet, &other.alphabet) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch("words over different alphabets".into()))
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.check_same(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { alphabet: self.alphabet.clone(), letters })
    }

    pub fn inverse(&self) -> Word {
        Word { alphabet: self.alphabet.clone(), letters: invert_letters(&self.letters) }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * e.unsigned_abs() as usize);
        for _ in 0..e.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { alphabet: self.alphabet.clone(), letters }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != p[1].inverse())
    }

    pub fn free_reduce(&self) -> Word {
        Word { alphabet: self.alphabet.clone(), letters: reduce_letters(&self.letters) }
    }

    pub fn freely_equal(&self, other: &Word) -> bool {
        self.check_same(other).is_ok() && reduce_letters(&self.letters) == reduce_letters(&other.letters)
    }

    pub fn exponent_sum(&self, x: &str) -> Result<i64> {
        let s = self.alphabet.require(x)?;
        Ok(self.exponent_sum_sym(s))
    }

    pub fn exponent_sum_sym(&self, s: u32) -> i64 {
        self.letters.iter().filter(|l| l.sym() == s).map(|l| l.sign()).sum()
    }

    pub fn letter_count(&self, x: &str) -> Result<usize> {
        let s = self.alphabet.require(x)?;
        Ok(self.letter_count_sym(s))
    }

    pub fn letter_count_sym(&self, s: u32) -> usize {
        self.letters.iter().filter(|l| l.sym() == s).count()
    }

    /// Rotations of the word and of its inverse.
    pub fn cyclic_conjugates(&self) -> Vec<Word> {
        signed_rotations(&self.letters)
            .into_iter()
            .map(|letters| Word { alphabet: self.alphabet.clone(), letters })
            .collect()
    }

    pub fn is_cyclic_conjugate_of(&self, other: &Word) -> bool {
        is_rotation(&self.letters, &other.letters)
            || is_rotation(&self.letters, &invert_letters(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.format_letters(&self.letters))
    }
}

/// Image of one source generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Image {
    Letter(Letter),
    Erase,
}

/// A map from source generators to target letters or to the empty word.
#[derive(Clone, Debug)]
pub struct LetterMap {
    source: Arc<Alphabet>,
    target: Arc<Alphabet>,
    images: Vec<Image>,
}

impl LetterMap {
    pub fn new(source: Arc<Alphabet>, target: Arc<Alphabet>, images: Vec<Image>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::Param("letter map must assign every source generator".into()));
        }
        for im in &images {
            if let Image::Letter(l) = im {
                if l.sym() as usize >= target.len() {
                    return Err(Error::AlphabetMismatch("image outside target alphabet".into()));
                }
            }
        }
        Ok(LetterMap { source, target, images })
    }

    /// Maps generators by name: `pairs` gives name -> image text (`x`, `x^-1` or `1`).
    pub fn from_names(
        source: Arc<Alphabet>,
        target: Arc<Alphabet>,
        pairs: &[(&str, &str)],
    ) -> Result<Self> {
        let mut images = vec![Image::Erase; source.len()];
        let mut set = vec![false; source.len()];
        for (from, to) in pairs {
            let s = source.require(from)? as usize;
            let img = target.parse_letters(to)?;
            images[s] = match img.as_slice() {
                [] => Image::Erase,
                [l] => Image::Letter(*l),
                _ => return Err(Error::Param(format!("image of {from} must be one letter"))),
            };
            set[s] = true;
        }
        if let Some(i) = set.iter().position(|b| !b) {
            return Err(Error::Param(format!("no image for {}", source.name(i as u32))));
        }
        Self::new(source, target, images)
    }

    /// Sends each generator to the target generator of the same name; others are erased.
    pub fn by_name(source: Arc<Alphabet>, target: Arc<Alphabet>) -> Self {
        let images = source
            .symbols()
            .iter()
            .map(|n| match target.index(n) {
                Some(t) => Image::Letter(Letter::pos(t)),
                None => Image::Erase,
            })
            .collect();
        LetterMap { source, target, images }
    }

    pub fn identity(alphabet: Arc<Alphabet>) -> Self {
        let images = (0..alphabet.len() as u32).map(|s| Image::Letter(Letter::pos(s))).collect();
        LetterMap { source: alphabet.clone(), target: alphabet, images }
    }

    pub fn source(&self) -> &Arc<Alphabet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Alphabet> {
        &self.target
    }

    pub fn images(&self) -> &[Image] {
        &self.images
    }

    pub fn image_of(&self, l: Letter) -> Image {
        match self.images[l.sym() as usize] {
            Image::Erase => Image::Erase,
            Image::Letter(t) => Image::Letter(if l.is_inverse() { t.inverse() } else { t }),
        }
    }

    /// Letter-by-letter image with erase slots kept.
    pub fn map_raw(&self, w: &Word) -> Result<Vec<Image>> {
        if !same_alphabet(&self.source, &w.alphabet) {
            return Err(Error::AlphabetMismatch("word is not over the map's source".into()));
        }
        Ok(w.letters.iter().map(|&l| self.image_of(l)).collect())
    }

    pub fn map_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        letters
            .iter()
            .filter_map(|&l| match self.image_of(l) {
                Image::Letter(t) => Some(t),
                Image::Erase => None,
            })
            .collect()
    }

    /// Image word, not freely reduced.
    pub fn map_word(&self, w: &Word) -> Result<Word> {
        if !same_alphabet(&self.source, &w.alphabet) {
            return Err(Error::AlphabetMismatch("word is not over the map's source".into()));
        }
        Ok(Word { alphabet: self.target.clone(), letters: self.map_letters(&w.letters) })
    }
}
