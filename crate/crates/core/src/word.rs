use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator name qualified by the construction that owns it.
///
/// Printed as `namespace.name`, or just `name` when the namespace is empty.
/// Nested constructions stack their tags with `/`, so `vk/pi.g0` is the
/// generator `g0` of the `pi` factor inside a `vk` construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorSymbol {
    namespace: String,
    name: String,
}

impl GeneratorSymbol {
    pub fn new(namespace: impl Into<String>, name: impl Into<String>) -> Result<Self> {
        let namespace = namespace.into();
        let name = name.into();
        if name.is_empty() || name.contains('.') || name.contains('/') {
            return Err(Error::input(format!("bad generator name `{name}`")));
        }
        if namespace.contains('.') {
            return Err(Error::input(format!("bad namespace `{namespace}`")));
        }
        Ok(GeneratorSymbol { namespace, name })
    }

    /// A symbol with an empty namespace. Panics on an invalid name, so only
    /// use it with literal names.
    pub fn bare(name: &str) -> Self {
        GeneratorSymbol::new("", name).expect("valid literal generator name")
    }

    pub fn namespace(&self) -> &str {
        &self.namespace
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Re-tags the symbol under an enclosing construction.
    pub fn under(&self, tag: &str) -> Self {
        let namespace = if self.namespace.is_empty() {
            tag.to_string()
        } else {
            format!("{tag}/{}", self.namespace)
        };
        GeneratorSymbol {
            namespace,
            name: self.name.clone(),
        }
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.namespace.is_empty() {
            write!(f, "{}", self.name)
        } else {
            write!(f, "{}.{}", self.namespace, self.name)
        }
    }
}

impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.rsplit_once('.') {
            Some((ns, name)) => GeneratorSymbol::new(ns, name),
            None => GeneratorSymbol::new("", s),
        }
    }
}

impl Serialize for GeneratorSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A freely reduced word: no zero exponents, no two adjacent letters on the
/// same symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<(GeneratorSymbol, i32)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(sym: GeneratorSymbol, exp: i32) -> Self {
        Word::from_letters(vec![(sym, exp)])
    }

    pub fn gen(sym: &GeneratorSymbol) -> Self {
        Word::letter(sym.clone(), 1)
    }

    /// Builds a word and freely reduces it.
    pub fn from_letters(letters: impl IntoIterator<Item = (GeneratorSymbol, i32)>) -> Self {
        let mut out: Vec<(GeneratorSymbol, i32)> = Vec::new();
        for (sym, exp) in letters {
            push_reduced(&mut out, sym, exp);
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[(GeneratorSymbol, i32)] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Total length counting exponents.
    pub fn length(&self) -> usize {
        self.letters
            .iter()
            .map(|(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|(s, e)| (s.clone(), -e))
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for (s, e) in &other.letters {
            push_reduced(&mut out, s.clone(), *e);
        }
        Word { letters: out }
    }

    /// `self^-1 * w * self`.
    pub fn conjugating(&self, w: &Word) -> Word {
        self.inverse().concat(w).concat(self)
    }

    pub fn power(&self, k: i32) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty();
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// Cyclically reduced representative: strips inverse-pairs across the
    /// ends and merges a first and last letter on the same symbol.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters = self.letters.clone();
        loop {
            if letters.len() < 2 {
                break;
            }
            let first = letters[0].0.clone();
            let last_idx = letters.len() - 1;
            if letters[last_idx].0 != first {
                break;
            }
            let e = letters[0].1 + letters[last_idx].1;
            letters.pop();
            letters.remove(0);
            if e != 0 {
                letters.insert(0, (first, e));
                break;
            }
        }
        Word { letters }
    }

    pub fn generators(&self) -> BTreeSet<GeneratorSymbol> {
        self.letters.iter().map(|(s, _)| s.clone()).collect()
    }

    pub fn mentions(&self, sym: &GeneratorSymbol) -> bool {
        self.letters.iter().any(|(s, _)| s == sym)
    }

    /// Number of occurrences of `sym` and the sum of their absolute exponents.
    pub fn occurrences(&self, sym: &GeneratorSymbol) -> (usize, u32) {
        self.letters
            .iter()
            .filter(|(s, _)| s == sym)
            .fold((0, 0), |(n, t), (_, e)| (n + 1, t + e.unsigned_abs()))
    }

    pub fn under(&self, tag: &str) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|(s, e)| (s.under(tag), *e))
                .collect(),
        }
    }

    /// Replaces every symbol present in `map` by its image word; symbols not
    /// in the map are kept.
    pub fn substitute(&self, map: &BTreeMap<GeneratorSymbol, Word>) -> Word {
        let mut out = Word::empty();
        for (s, e) in &self.letters {
            let piece = match map.get(s) {
                Some(w) => w.power(*e),
                None => Word::letter(s.clone(), *e),
            };
            out = out.concat(&piece);
        }
        out
    }

    /// Canonical key of the cyclic word up to rotation and inversion. Two
    /// relators with the same key define the same normal closure.
    pub fn cyclic_key(&self) -> Vec<(GeneratorSymbol, i32)> {
        let base = self.cyclically_reduced();
        let mut best: Option<Vec<(GeneratorSymbol, i32)>> = None;
        for w in [base.clone(), base.inverse()] {
            let flat = expand(&w);
            let n = flat.len();
            for r in 0..n.max(1) {
                let rotated: Vec<(GeneratorSymbol, i32)> =
                    flat[r..].iter().chain(flat[..r].iter()).cloned().collect();
                let cand = Word::from_letters(rotated).cyclically_reduced().letters;
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        best.unwrap_or_default()
    }
}

fn expand(w: &Word) -> Vec<(GeneratorSymbol, i32)> {
    w.letters
        .iter()
        .flat_map(|(s, e)| std::iter::repeat_n((s.clone(), e.signum()), e.unsigned_abs() as usize))
        .collect()
}

fn push_reduced(out: &mut Vec<(GeneratorSymbol, i32)>, sym: GeneratorSymbol, exp: i32) {
    if exp == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.0 == sym {
            last.1 += exp;
            if last.1 == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push((sym, exp));
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (i, (s, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letters = Vec::<(GeneratorSymbol, i32)>::deserialize(d)?;
        if letters.iter().any(|(_, e)| *e == 0) {
            return Err(serde::de::Error::custom("zero exponent in word"));
        }
        Ok(Word::from_letters(letters))
    }
}
