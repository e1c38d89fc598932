//! Words over weighted generating sets.
//!
//! A word is kept in canonical run-length form: a list of `(letter, exponent)`
//! blocks with positive exponents and distinct adjacent letters. The textual
//! grammar is letter names separated by whitespace or `*`, each optionally
//! followed by `^` and a nonzero integer; a negative exponent refers to the
//! generating set's letter whose element is the inverse.

use crate::group::{GroupDescriptor, GroupElement, GroupError};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("unknown letter `{name}`")]
    UnknownLetter { name: String },
    #[error("the generating set has no letter inverse to `{name}`")]
    MissingInverseLetter { name: String },
    #[error("zero exponent")]
    ZeroExponent,
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid generating set: {0}")]
    BadGenSet(String),
}

/// A named generator with its group element and positive integer weight.
#[derive(Debug, Clone)]
pub struct Letter {
    pub name: String,
    pub element: GroupElement,
    pub weight: u64,
}

/// A finite weighted generating set together with the semantic inverse table.
#[derive(Debug, Clone)]
pub struct GenSet {
    letters: Vec<Letter>,
    inverse: Vec<Option<usize>>,
}

impl GenSet {
    pub fn new(
        desc: &GroupDescriptor,
        letters: Vec<(String, GroupElement, u64)>,
    ) -> Result<GenSet, WordError> {
        if letters.is_empty() {
            return Err(WordError::BadGenSet("no letters".into()));
        }
        for (i, (name, _, w)) in letters.iter().enumerate() {
            if *w == 0 {
                return Err(WordError::BadGenSet(format!("letter `{name}` has weight 0")));
            }
            if name.is_empty()
                || name.contains(char::is_whitespace)
                || name.contains('*')
                || (name.contains('^') && !name.ends_with("^-1"))
                || name == "^-1"
            {
                return Err(WordError::BadGenSet(format!("bad letter name `{name}`")));
            }
            if letters[..i].iter().any(|(n, _, _)| n == name) {
                return Err(WordError::BadGenSet(format!("duplicate letter `{name}`")));
            }
        }
        let elements: Vec<GroupElement> = letters.iter().map(|(_, e, _)| e.clone()).collect();
        let mut inverse = vec![None; letters.len()];
        for (i, e) in elements.iter().enumerate() {
            let ei = desc
                .inv(e)
                .map_err(|err| WordError::BadGenSet(err.to_string()))?;
            inverse[i] = elements.iter().position(|f| *f == ei);
        }
        // A letter literally named `X^-1` must be the inverse of letter `X`.
        for (i, (name, _, _)) in letters.iter().enumerate() {
            if let Some(base) = name.strip_suffix("^-1") {
                let Some(j) = letters.iter().position(|(n, _, _)| n == base) else {
                    return Err(WordError::BadGenSet(format!(
                        "letter `{name}` has no base letter `{base}`"
                    )));
                };
                if inverse[j] != Some(i) {
                    return Err(WordError::BadGenSet(format!(
                        "letter `{name}` is not the inverse of `{base}`"
                    )));
                }
            }
        }
        Ok(GenSet {
            letters: letters
                .into_iter()
                .map(|(name, element, weight)| Letter {
                    name,
                    element,
                    weight,
                })
                .collect(),
            inverse,
        })
    }

    /// The group's canonical letters, all with weight 1.
    pub fn default_for(desc: &GroupDescriptor) -> GenSet {
        GenSet::new(
            desc,
            desc.letters()
                .iter()
                .map(|(n, e)| (n.clone(), e.clone(), 1))
                .collect(),
        )
        .expect("registry letters are well-formed")
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letter(&self, i: usize) -> &Letter {
        &self.letters[i]
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    /// Index of the letter whose element is inverse to letter `i`, if any.
    pub fn inverse_of(&self, i: usize) -> Option<usize> {
        self.inverse[i]
    }
}

/// A word in canonical run-length form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    blocks: Vec<(usize, u64)>,
}

impl Word {
    pub fn empty() -> Word {
        Word { blocks: Vec::new() }
    }

    /// Build from blocks, merging adjacent blocks with equal letters.
    pub fn from_blocks(blocks: impl IntoIterator<Item = (usize, u64)>) -> Word {
        let mut w = Word::empty();
        for (l, m) in blocks {
            w.push_block(l, m);
        }
        w
    }

    pub fn from_letters(letters: &[usize]) -> Word {
        Word::from_blocks(letters.iter().map(|&l| (l, 1)))
    }

    pub fn push_block(&mut self, letter: usize, mult: u64) {
        if mult == 0 {
            return;
        }
        match self.blocks.last_mut() {
            Some((l, m)) if *l == letter => *m += mult,
            _ => self.blocks.push((letter, mult)),
        }
    }

    pub fn blocks(&self) -> &[(usize, u64)] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of blocks (the coarse length `k`).
    pub fn coarse_len(&self) -> u64 {
        self.blocks.len() as u64
    }

    /// Plain letter count.
    pub fn letter_len(&self) -> u64 {
        self.blocks.iter().map(|(_, m)| m).sum()
    }

    /// Weighted length `sum m_i * sigma(s_i)`.
    pub fn weighted_len(&self, gens: &GenSet) -> u64 {
        self.blocks
            .iter()
            .map(|&(l, m)| m * gens.letter(l).weight)
            .sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_blocks(self.blocks.iter().chain(&other.blocks).copied())
    }

    /// Letters in order, blocks expanded.
    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks
            .iter()
            .flat_map(|&(l, m)| std::iter::repeat_n(l, m as usize))
    }

    /// Canonical printing; parses back to the same word over the same gens.
    pub fn display(&self, gens: &GenSet) -> String {
        let mut out = String::new();
        for (i, &(l, m)) in self.blocks.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let name = &gens.letter(l).name;
            match name.strip_suffix("^-1") {
                Some(base) if m > 1 => {
                    let _ = write!(out, "{base}^-{m}");
                }
                _ if m > 1 => {
                    let _ = write!(out, "{name}^{m}");
                }
                _ => out.push_str(name),
            }
        }
        out
    }
}

/// Parse the word grammar over `gens`.
pub fn parse_word(text: &str, gens: &GenSet) -> Result<Word, WordError> {
    let mut word = Word::empty();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() || bytes[i] == b'*' {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() && bytes[i] != b'*' {
            i += 1;
        }
        let token = &text[start..i];
        let (name, exp) = match token.split_once('^') {
            None => (token, 1i64),
            Some((name, exp_str)) => {
                if name.is_empty() {
                    return Err(WordError::Syntax {
                        position: start,
                        message: "exponent without a letter".into(),
                    });
                }
                let exp = exp_str.parse::<i64>().map_err(|_| WordError::Syntax {
                    position: start + name.len() + 1,
                    message: format!("`{exp_str}` is not an integer exponent"),
                })?;
                (name, exp)
            }
        };
        if exp == 0 {
            return Err(WordError::ZeroExponent);
        }
        let idx = gens.find(name).ok_or_else(|| WordError::UnknownLetter {
            name: name.to_string(),
        })?;
        let idx = if exp < 0 {
            gens.inverse_of(idx)
                .ok_or_else(|| WordError::MissingInverseLetter {
                    name: name.to_string(),
                })?
        } else {
            idx
        };
        word.push_block(idx, exp.unsigned_abs());
    }
    Ok(word)
}

/// Left-to-right product of the word's letters in the group.
pub fn evaluate(
    word: &Word,
    gens: &GenSet,
    desc: &GroupDescriptor,
) -> Result<GroupElement, GroupError> {
    let mut acc = desc.id();
    for &(l, m) in word.blocks() {
        let p = desc.pow(&gens.letter(l).element, m)?;
        acc = desc.mul(&acc, &p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engel::EngelElement;
    use crate::group::lookup;
    use crate::rat::{rat, rat_int};

    fn ve() -> (&'static GroupDescriptor, GenSet) {
        let d = lookup("vE").unwrap();
        (d, GenSet::default_for(d))
    }

    #[test]
    fn parse_examples() {
        let (_, gens) = ve();
        let w = parse_word("a^3 t a^-2", &gens).unwrap();
        let a = gens.find("a").unwrap();
        let ai = gens.find("a^-1").unwrap();
        let t = gens.find("t").unwrap();
        assert_eq!(w.blocks(), &[(a, 3), (t, 1), (ai, 2)]);
        assert_eq!(w.coarse_len(), 3);
        assert_eq!(w.weighted_len(&gens), 6);

        assert_eq!(
            parse_word("a^0 t", &gens).unwrap_err(),
            WordError::ZeroExponent
        );
        assert_eq!(
            parse_word("b", &gens).unwrap_err(),
            WordError::UnknownLetter { name: "b".into() }
        );
        // t is an involution, so t^-1 resolves to t itself.
        let w = parse_word("t^-2", &gens).unwrap();
        assert_eq!(w.blocks(), &[(t, 2)]);
        // Inverse notation reaches the named inverse letter.
        let w = parse_word("a^-1 * a^-1", &gens).unwrap();
        assert_eq!(w.blocks(), &[(ai, 2)]);
        assert!(matches!(
            parse_word("a^x", &gens),
            Err(WordError::Syntax { .. })
        ));
        assert!(matches!(
            parse_word("^2", &gens),
            Err(WordError::Syntax { position: 0, .. })
        ));
    }

    #[test]
    fn missing_inverse_letter() {
        let d = lookup("G2rot").unwrap();
        let gens = GenSet::default_for(d);
        assert_eq!(
            parse_word("x^-1", &gens).unwrap_err(),
            WordError::MissingInverseLetter { name: "x".into() }
        );
    }

    #[test]
    fn lengths() {
        let (_, gens) = ve();
        let e = Word::empty();
        assert_eq!(e.coarse_len(), 0);
        assert_eq!(e.weighted_len(&gens), 0);
    }

    #[test]
    fn weighted_conjugate_letter() {
        // A single conjugate letter t a t^-1 with cost 1: the square has
        // coarse length 1 and weighted length 2.
        let d = lookup("vE").unwrap();
        let gens = GenSet::default_for(d);
        let tat = evaluate(&parse_word("t a t", &gens).unwrap(), &gens, d).unwrap();
        let xgens = GenSet::new(d, vec![("c".into(), tat, 1)]).unwrap();
        let w = parse_word("c^2", &xgens).unwrap();
        assert_eq!(w.coarse_len(), 1);
        assert_eq!(w.weighted_len(&xgens), 2);
        // With the cost-2 letter tt (trivial element), weights multiply.
        let tt = evaluate(&parse_word("t t", &gens).unwrap(), &gens, d).unwrap();
        let ygens = GenSet::new(d, vec![("u".into(), tt, 2)]).unwrap();
        let w = parse_word("u^3", &ygens).unwrap();
        assert_eq!(w.coarse_len(), 1);
        assert_eq!(w.weighted_len(&ygens), 6);
    }

    #[test]
    fn evaluate_engel_words() {
        let d = lookup("Engel").unwrap();
        let gens = GenSet::default_for(d);
        let ab = evaluate(&parse_word("a b", &gens).unwrap(), &gens, d).unwrap();
        assert_eq!(
            ab,
            GroupElement::Engel(EngelElement::new(
                rat_int(2),
                rat_int(0),
                rat_int(-1),
                rat(-1, 3)
            ))
        );
        let e = evaluate(&Word::empty(), &gens, d).unwrap();
        assert_eq!(e, d.id());
        let a2b2 = evaluate(&parse_word("a^2 b^2", &gens).unwrap(), &gens, d).unwrap();
        assert_eq!(
            a2b2,
            GroupElement::Engel(EngelElement::new(
                rat_int(4),
                rat_int(0),
                rat_int(-4),
                rat(-8, 3)
            ))
        );
    }

    #[test]
    fn concat_properties() {
        let (d, gens) = ve();
        let w1 = parse_word("a^2 t", &gens).unwrap();
        let w2 = parse_word("t a^-1", &gens).unwrap();
        let cat = w1.concat(&w2);
        // The t-blocks merge across the seam.
        assert_eq!(cat.coarse_len(), w1.coarse_len() + w2.coarse_len() - 1);
        assert_eq!(
            cat.weighted_len(&gens),
            w1.weighted_len(&gens) + w2.weighted_len(&gens)
        );
        let lhs = evaluate(&cat, &gens, d).unwrap();
        let rhs = d
            .mul(
                &evaluate(&w1, &gens, d).unwrap(),
                &evaluate(&w2, &gens, d).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip() {
        let (_, gens) = ve();
        for text in ["a^3 t a^-2", "t", "a^-1", "a t a t a^-5", ""] {
            let w = parse_word(text, &gens).unwrap();
            let printed = w.display(&gens);
            assert_eq!(parse_word(&printed, &gens).unwrap(), w, "via `{printed}`");
        }
    }

    #[test]
    fn genset_validation() {
        let d = lookup("Z1").unwrap();
        let bad = GenSet::new(
            d,
            vec![
                ("a".into(), d.letters()[0].1.clone(), 1),
                ("a".into(), d.letters()[1].1.clone(), 1),
            ],
        );
        assert!(matches!(bad, Err(WordError::BadGenSet(_))));
        let bad = GenSet::new(d, vec![("a".into(), d.letters()[0].1.clone(), 0)]);
        assert!(matches!(bad, Err(WordError::BadGenSet(_))));
        // `b^-1` whose element is not inverse to `b` is rejected.
        let bad = GenSet::new(
            d,
            vec![
                ("b".into(), d.letters()[0].1.clone(), 1),
                ("b^-1".into(), d.letters()[0].1.clone(), 1),
            ],
        );
        assert!(matches!(bad, Err(WordError::BadGenSet(_))));
    }
}
