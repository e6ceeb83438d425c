//! Involutive alphabets: a set of positive letters together with their formal
//! inverses. In text, the inverse of `a` is written `a'`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::Word;

/// A letter of the involutive closure. Positive letters have even ids, their
/// inverses the following odd id, so `inverse` is a single bit flip.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(pub(crate) u32);

impl Letter {
    pub fn positive(index: usize) -> Letter {
        Letter((index as u32) << 1)
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Index of the underlying positive letter.
    pub fn base_index(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// Position in the full involutive closure, ordered `a, a', b, b', ...`.
    pub fn closure_index(self) -> usize {
        self.0 as usize
    }
}

/// A finite set of positive letters closed under a formal, fixed-point-free
/// involution.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InvolutiveAlphabet {
    positives: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl InvolutiveAlphabet {
    pub fn new<S: AsRef<str>>(positive_letters: &[S]) -> Result<InvolutiveAlphabet> {
        let mut positives = Vec::new();
        let mut index = BTreeMap::new();
        for name in positive_letters {
            let name = name.as_ref();
            if name.is_empty()
                || name == "1"
                || name.ends_with('\'')
                || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                || name.chars().next().is_some_and(|c| c.is_ascii_digit())
            {
                return Err(Error::InvalidParameter(format!(
                    "`{name}` is not a valid letter name"
                )));
            }
            if index.insert(name.to_owned(), positives.len()).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate letter `{name}`")));
            }
            positives.push(name.to_owned());
        }
        if positives.is_empty() {
            return Err(Error::InvalidParameter("alphabet has no letters".into()));
        }
        Ok(InvolutiveAlphabet { positives, index })
    }

    /// Alphabet with positive letters `a, b, c, ...` of the given rank.
    pub fn of_rank(rank: usize) -> Result<InvolutiveAlphabet> {
        if rank == 0 || rank > 26 {
            return Err(Error::InvalidParameter(format!(
                "rank {rank} out of range 1..=26"
            )));
        }
        let names: Vec<String> = (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        InvolutiveAlphabet::new(&names)
    }

    pub fn positive_count(&self) -> usize {
        self.positives.len()
    }

    /// Number of letters in the involutive closure.
    pub fn closure_len(&self) -> usize {
        self.positives.len() * 2
    }

    pub fn contains(&self, letter: Letter) -> bool {
        letter.base_index() < self.positives.len()
    }

    pub fn positive_letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.positives.len()).map(Letter::positive)
    }

    /// All letters of the closure, positive and inverse alternating.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.closure_len()).map(|i| Letter(i as u32))
    }

    pub fn parse_letter(&self, token: &str) -> Result<Letter> {
        let (name, inv) = match token.strip_suffix('\'') {
            Some(base) => (base, true),
            None => (token, false),
        };
        let idx = *self
            .index
            .get(name)
            .ok_or_else(|| Error::UnknownLetter(token.to_owned()))?;
        let letter = Letter::positive(idx);
        Ok(if inv { letter.inverse() } else { letter })
    }

    /// Parse a whitespace-separated word. The single token `1` is the empty
    /// word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens == ["1"] {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(tokens.len());
        for token in tokens {
            letters.push(self.parse_letter(token)?);
        }
        Ok(Word(letters))
    }

    pub fn display_letter(&self, letter: Letter) -> String {
        let name = &self.positives[letter.base_index()];
        if letter.is_positive() {
            name.clone()
        } else {
            format!("{name}'")
        }
    }

    pub fn display_word(&self, word: &Word) -> String {
        if word.is_empty() {
            return "1".to_owned();
        }
        word.0
            .iter()
            .map(|&l| self.display_letter(l))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn positive_names(&self) -> &[String] {
        &self.positives
    }

    /// All bijections of the closure that commute with the involution, as maps
    /// indexed by `closure_index`. There are `2^r * r!` of them.
    pub fn relabelings(&self) -> Vec<Vec<Letter>> {
        let r = self.positive_count();
        let mut perms = Vec::new();
        let mut current: Vec<usize> = (0..r).collect();
        permutations(&mut current, 0, &mut perms);
        let mut maps = Vec::new();
        for perm in &perms {
            for signs in 0..(1u32 << r) {
                let mut map = vec![Letter(0); 2 * r];
                for (i, &p) in perm.iter().enumerate() {
                    let image = if signs >> i & 1 == 0 {
                        Letter::positive(p)
                    } else {
                        Letter::positive(p).inverse()
                    };
                    map[Letter::positive(i).closure_index()] = image;
                    map[Letter::positive(i).inverse().closure_index()] = image.inverse();
                }
                maps.push(map);
            }
        }
        maps
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

impl fmt::Display for InvolutiveAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.positives.join(" "))
    }
}
