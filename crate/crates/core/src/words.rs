//! Words over a symmetrized alphabet, relator text syntax, and presentations.

use std::cmp::Ordering;
use std::fmt;

use crate::affine::AffineIsometry;
use crate::error::{Error, Result};

/// Generator `i` is code `2i`, its inverse `2i+1`; so `a < a^-1 < b < b^-1`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter(2 * generator as u32 + u32::from(inverse))
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inv(self) -> Self {
        Letter(self.0 ^ 1)
    }
}

/// A word; `Ord` is shortlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub Vec<Letter>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn generator(i: usize) -> Self {
        Word(vec![Letter::new(i, false)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        self.0.iter().rev().map(|l| l.inv()).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        free_reduce(&Word(v))
    }

    /// `self^k` for any integer `k`, freely reduced.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut v = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            v.extend_from_slice(&base.0);
        }
        free_reduce(&Word(v))
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().concat(&y.inverse()).concat(x).concat(y)
    }

    pub fn rotate(&self, k: usize) -> Word {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let mut v = self.0[k % n..].to_vec();
        v.extend_from_slice(&self.0[..k % n]);
        Word(v)
    }

    /// Highest generator index used plus one.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|l| l.generator() + 1).max().unwrap_or(0)
    }

    /// Generator indices renamed through `map`.
    pub fn relabel(&self, map: &[usize]) -> Word {
        self.0
            .iter()
            .map(|l| Letter::new(map[l.generator()], l.is_inverse()))
            .collect()
    }
}

pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}

pub fn cyclic_reduce(w: &Word) -> Word {
    let v = free_reduce(w).0;
    let mut lo = 0;
    let mut hi = v.len();
    while hi - lo >= 2 && v[lo] == v[hi - 1].inv() {
        lo += 1;
        hi -= 1;
    }
    Word(v[lo..hi].to_vec())
}

/// Representative of the cyclic class of `w` and `w^-1`: the lexicographically
/// least rotation of either, after cyclic reduction.
pub fn canonical_relator(w: &Word) -> Word {
    let r = cyclic_reduce(w);
    let inv = r.inverse();
    (0..r.len().max(1))
        .flat_map(|k| [r.rotate(k), inv.rotate(k)])
        .min()
        .unwrap_or(r)
}

/// True when `u` and `v` agree up to rotation and inversion.
pub fn same_relator(u: &Word, v: &Word) -> bool {
    canonical_relator(u) == canonical_relator(v)
}

/// Evaluates a word with generator `i` assigned `assignment[i]`; letters act left to right.
pub fn evaluate(w: &Word, assignment: &[AffineIsometry]) -> Result<AffineIsometry> {
    let dim = assignment.first().map_or(0, AffineIsometry::dim);
    let inverses: Vec<AffineIsometry> = assignment.iter().map(AffineIsometry::inverse).collect();
    let mut acc = AffineIsometry::identity(dim);
    for &l in &w.0 {
        let g = l.generator();
        let m = if l.is_inverse() { inverses.get(g) } else { assignment.get(g) };
        acc = acc.then(m.ok_or(Error::Unassigned(g))?)?;
    }
    Ok(acc)
}

fn syntax(pos: usize, message: impl Into<String>) -> Error {
    Error::Syntax { pos, message: message.into() }
}

struct WordParser<'a> {
    chars: Vec<(usize, char)>,
    at: usize,
    names: &'a [char],
}

impl WordParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.at).map(|&(_, c)| c)
    }

    fn pos(&self) -> usize {
        self.chars.get(self.at).map_or_else(|| self.chars.last().map_or(0, |&(i, _)| i + 1), |&(i, _)| i)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None | Some(')') | Some(']') | Some(',') => break,
                Some('*') | Some('.') => self.at += 1,
                Some('1') if out.is_empty() => self.at += 1,
                _ => {
                    let f = self.factor()?;
                    out.extend(f.0);
                }
            }
        }
        Ok(Word(out))
    }

    fn factor(&mut self) -> Result<Word> {
        let pos = self.pos();
        let atom = match self.peek() {
            Some('(') => {
                self.at += 1;
                let w = self.word()?;
                self.expect(')')?;
                w
            }
            Some('[') => {
                self.at += 1;
                let x = self.word()?;
                self.expect(',')?;
                let y = self.word()?;
                self.expect(']')?;
                Word::commutator(&x, &y)
            }
            Some(c) => match self.names.iter().position(|&n| n == c) {
                Some(i) => {
                    self.at += 1;
                    Word::generator(i)
                }
                None => return Err(syntax(pos, format!("unknown generator `{c}`"))),
            },
            None => return Err(syntax(pos, "unexpected end")),
        };
        if self.peek() != Some('^') {
            return Ok(atom);
        }
        self.at += 1;
        let neg = self.peek() == Some('-');
        if neg {
            self.at += 1;
        }
        let start = self.at;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.at += 1;
        }
        if start == self.at {
            return Err(syntax(self.pos(), "expected exponent"));
        }
        let digits: String = self.chars[start..self.at].iter().map(|&(_, c)| c).collect();
        let k: i64 = digits.parse().map_err(|_| syntax(pos, "exponent too large"))?;
        Ok(atom.pow(if neg { -k } else { k }))
    }
}

/// Parses relator syntax: juxtaposition, `^k` / `^-k`, parentheses, `[x,y]`.
pub fn parse_word(text: &str, names: &[char]) -> Result<Word> {
    let mut p = WordParser {
        chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
        at: 0,
        names,
    };
    let w = p.word()?;
    if p.peek().is_some() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(w)
}

fn letter_text(l: Letter, names: &[char]) -> String {
    let c = names.get(l.generator()).copied().unwrap_or('?');
    if l.is_inverse() {
        format!("{c}^-1")
    } else {
        c.to_string()
    }
}

const DP_LIMIT: usize = 160;
const WEIGHT: usize = 2 * DP_LIMIT;

/// Compact text: shortest rendering with powers, e.g. `(ac^-1)^2`.
pub fn format_word(w: &Word, names: &[char]) -> String {
    let n = w.len();
    if n == 0 {
        return "1".into();
    }
    if n > DP_LIMIT {
        return w.0.iter().map(|&l| letter_text(l, names)).collect();
    }
    // best[i][j]: (cost, text) for w[i..j]. Cost is WEIGHT per symbol or power mark,
    // minus one per power mark, so powers win ties.
    let mut best: Vec<Vec<(usize, String)>> = vec![vec![(0, String::new()); n + 1]; n + 1];
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len;
            let seg = &w.0[i..j];
            let mut cand: Option<(usize, String)> = None;
            if len == 1 {
                cand = Some((WEIGHT, letter_text(seg[0], names)));
            }
            for p in 1..len {
                if len % p != 0 || len / p < 2 {
                    continue;
                }
                if (p..len).all(|k| seg[k] == seg[k - p]) {
                    let k = len / p;
                    let (c, t) = &best[i][i + p];
                    let text = if p == 1 {
                        let l = seg[0];
                        let c = names.get(l.generator()).copied().unwrap_or('?');
                        if l.is_inverse() {
                            format!("{c}^-{k}")
                        } else {
                            format!("{c}^{k}")
                        }
                    } else {
                        format!("({t})^{k}")
                    };
                    let c = c + WEIGHT - 1;
                    if cand.as_ref().is_none_or(|(bc, _)| c < *bc) {
                        cand = Some((c, text));
                    }
                    break;
                }
            }
            for m in i + 1..j {
                let c = best[i][m].0 + best[m][j].0;
                if cand.as_ref().is_none_or(|(bc, _)| c < *bc) {
                    cand = Some((c, format!("{}{}", best[i][m].1, best[m][j].1)));
                }
            }
            best[i][j] = cand.expect("nonempty segment");
        }
    }
    std::mem::take(&mut best[0][n].1)
}

/// Generators and relators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Presentation {
    pub names: Vec<char>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(names: Vec<char>, relators: Vec<Word>) -> Self {
        Presentation { names, relators }
    }

    pub fn parse(names: &[char], relators: &[&str]) -> Result<Self> {
        Ok(Presentation {
            names: names.to_vec(),
            relators: relators.iter().map(|r| parse_word(r, names)).collect::<Result<_>>()?,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn relator_texts(&self) -> Vec<String> {
        self.relators.iter().map(|r| format_word(r, &self.names)).collect()
    }

    pub fn with_extra(&self, extra: &[Word]) -> Presentation {
        let mut p = self.clone();
        p.relators.extend_from_slice(extra);
        p
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: String = self.names.iter().map(char::to_string).collect::<Vec<_>>().join(", ");
        write!(f, "< {gens} | {} >", self.relator_texts().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::symop::parse_symop;

    const ABC: [char; 3] = ['a', 'b', 'c'];

    fn w(s: &str) -> Word {
        parse_word(s, &ABC).unwrap()
    }

    #[test]
    fn free_reduction() {
        assert!(free_reduce(&w("aa^-1")).is_empty());
        assert_eq!(free_reduce(&w("abb^-1a")), w("aa"));
        assert_eq!(free_reduce(&w("ac^-1acbaa^-1")), w("ac^-1acb"));
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(cyclic_reduce(&w("b^-1ab")), w("a"));
        assert!(cyclic_reduce(&Word::empty()).is_empty());
        assert!(same_relator(&w("c^-1acb"), &w("bc^-1ac")));
        assert!(same_relator(&w("abc"), &w("c^-1b^-1a^-1")));
        assert!(!same_relator(&w("abc"), &w("acb")));
    }

    #[test]
    fn parse_powers_and_commutators() {
        assert_eq!(w("(ab)^2c^-1"), w("ababc^-1"));
        assert_eq!(w("[a,b]"), w("a^-1b^-1ab"));
        assert_eq!(w("c^-2"), w("c^-1c^-1"));
        assert_eq!(w("1"), Word::empty());
        assert!(matches!(parse_word("ad", &ABC), Err(Error::Syntax { pos: 1, .. })));
        assert!(parse_word("(ab", &ABC).is_err());
        assert!(parse_word("a^", &ABC).is_err());
    }

    #[test]
    fn compact_format() {
        assert_eq!(format_word(&w("ac^-1ac^-1"), &ABC), "(ac^-1)^2");
        assert_eq!(format_word(&w("cccc"), &ABC), "c^4");
        assert_eq!(format_word(&w("aa"), &ABC), "a^2");
        assert_eq!(format_word(&w("bc^-1ac"), &ABC), "bc^-1ac");
        assert_eq!(format_word(&w("abcabac^-1b"), &ABC), "abcabac^-1b");
        assert_eq!(format_word(&w("c^-1c^-1"), &ABC), "c^-2");
        assert_eq!(format_word(&Word::empty(), &ABC), "1");
    }

    #[test]
    fn shortlex_order() {
        assert!(w("b") < w("aa"));
        assert!(w("a") < w("a^-1"));
        assert!(w("a^-1") < w("b"));
    }

    #[test]
    fn evaluation_of_plane_relator() {
        let a = AffineIsometry::from_translation(vec![int(1), int(0)]);
        let b = AffineIsometry::from_translation(vec![int(0), int(1)]);
        let c = AffineIsometry::from_translation(vec![int(2), int(2)]);
        let gens = [a, b, c];
        assert!(evaluate(&w("(ab)^2c^-1"), &gens).unwrap().is_identity());
        assert!(evaluate(&Word::empty(), &gens).unwrap().is_identity());
        assert_eq!(evaluate(&Word::generator(5), &gens), Err(Error::Unassigned(5)));
    }

    #[test]
    fn evaluation_of_tetragonal_relator() {
        let gens = [
            parse_symop("x, 1/2-y, 1/4-z", 3).unwrap(),
            parse_symop("1/2-x, y, -1/4-z", 3).unwrap(),
            parse_symop("y,-x,-z", 3).unwrap(),
        ];
        for r in ["a^2", "b^2", "c^4", "bc^-1ac", "abcabac^-1b"] {
            assert!(evaluate(&w(r), &gens).unwrap().is_identity(), "{r}");
        }
    }
}
