//! Normal ordering in the universal enveloping algebra.
//!
//! Monomials are ordered `X1 < X2 < X3 < X4`; an out-of-order pair is rewritten as
//! `Xj Xi = Xi Xj - [Xi, Xj]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// A coefficient times a product of generators, letters in `1..=4`.
#[derive(Clone, Debug, PartialEq)]
pub struct Word {
    pub coeff: BigRational,
    pub letters: Vec<u8>,
}

impl Word {
    pub fn new(coeff: BigRational, letters: Vec<u8>) -> Self {
        Self { coeff, letters }
    }

    pub fn unit(letters: &[u8]) -> Self {
        Self::new(BigRational::one(), letters.to_vec())
    }
}

/// Which out-of-order pair gets rewritten first.
#[derive(Clone, Copy, Debug)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
    Random(u64),
}

pub type Exponents = [u32; 4];

/// Exact element of the enveloping algebra in ordered-monomial form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PbwPolynomial {
    terms: BTreeMap<Exponents, BigRational>,
}

/// `[Xi, Xj]` for `i < j` as a single generator, when nonzero.
fn bracket_letter(i: u8, j: u8) -> Option<u8> {
    match (i, j) {
        (1, 2) => Some(3),
        (1, 3) => Some(4),
        _ => None,
    }
}

fn exponents_of(letters: &[u8]) -> Exponents {
    let mut e = [0u32; 4];
    for &l in letters {
        e[(l - 1) as usize] += 1;
    }
    e
}

fn letters_of(e: &Exponents) -> Vec<u8> {
    let mut v = Vec::new();
    for (k, &p) in e.iter().enumerate() {
        v.extend(std::iter::repeat_n(k as u8 + 1, p as usize));
    }
    v
}

/// Rewrite a word into ordered monomials.
pub fn normal_form(word: &Word, order: RewriteOrder) -> PbwPolynomial {
    let mut rng = match order {
        RewriteOrder::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut out = PbwPolynomial::zero();
    let mut stack = vec![word.clone()];
    while let Some(w) = stack.pop() {
        if w.coeff.is_zero() {
            continue;
        }
        let inversions: Vec<usize> = (0..w.letters.len().saturating_sub(1)).filter(|&k| w.letters[k] > w.letters[k + 1]).collect();
        if inversions.is_empty() {
            out.add_term(exponents_of(&w.letters), w.coeff);
            continue;
        }
        let k = match order {
            RewriteOrder::Leftmost => inversions[0],
            RewriteOrder::Rightmost => inversions[inversions.len() - 1],
            RewriteOrder::Random(_) => {
                let rng = rng.as_mut().expect("seeded");
                inversions[rng.gen_range(0..inversions.len())]
            }
        };
        let (j, i) = (w.letters[k], w.letters[k + 1]);
        let mut swapped = w.letters.clone();
        swapped.swap(k, k + 1);
        if let Some(c) = bracket_letter(i, j) {
            let mut contracted = w.letters[..k].to_vec();
            contracted.push(c);
            contracted.extend_from_slice(&w.letters[k + 2..]);
            stack.push(Word::new(-w.coeff.clone(), contracted));
        }
        stack.push(Word::new(w.coeff, swapped));
    }
    out
}

impl PbwPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial([0; 4], BigRational::one())
    }

    pub fn monomial(e: Exponents, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    /// Normal form of a product of generators.
    pub fn word(letters: &[u8]) -> Self {
        normal_form(&Word::unit(letters), RewriteOrder::Leftmost)
    }

    pub fn generator(i: u8) -> Self {
        Self::word(&[i])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Exponents) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let mut r = Self::zero();
        for (e, c) in &self.terms {
            r.add_term(*e, c * s);
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-BigRational::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut letters = letters_of(ea);
                letters.extend(letters_of(eb));
                let w = Word::new(ca * cb, letters);
                r = r.add(&normal_form(&w, RewriteOrder::Leftmost));
            }
        }
        r
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text `c * X1^a X2^b X3^c X4^d + ...`, terms in lexicographic exponent order.
impl fmt::Display for PbwPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write_rational(f, c)?;
            write!(f, " * X1^{} X2^{} X3^{} X4^{}", e[0], e[1], e[2], e[3])?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParsePbwError {
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("generator index {0} outside 1..=4")]
    BadGenerator(u64),
    #[error("term degree {0} exceeds the limit {1}")]
    TooLarge(u64, u64),
    #[error("number too long")]
    NumberTooLong,
}

/// Total degree allowed for an already ordered term.
pub const MAX_ORDERED_DEGREE: u64 = 256;
/// Total degree allowed for a term that needs rewriting.
pub const MAX_UNORDERED_DEGREE: u64 = 14;

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn unexpected(&self) -> ParsePbwError {
        match std::str::from_utf8(&self.s[self.pos..]).ok().and_then(|r| r.chars().next()) {
            Some(c) => ParsePbwError::Unexpected(c, self.pos),
            None if self.pos >= self.s.len() => ParsePbwError::Eof,
            None => ParsePbwError::Unexpected('\u{fffd}', self.pos),
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParsePbwError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.unexpected());
        }
        if self.pos - start > 4096 {
            return Err(ParsePbwError::NumberTooLong);
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn small_int(&mut self) -> Result<u64, ParsePbwError> {
        let d = self.digits()?;
        d.parse::<u64>().map_err(|_| ParsePbwError::NumberTooLong)
    }

    fn rational(&mut self) -> Result<BigRational, ParsePbwError> {
        let n: num_bigint::BigInt = self.digits()?.parse().expect("digits");
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d: num_bigint::BigInt = self.digits()?.parse().expect("digits");
            if d.is_zero() {
                return Err(ParsePbwError::ZeroDenominator);
            }
            Ok(BigRational::new(n, d))
        } else {
            Ok(BigRational::from_integer(n))
        }
    }

    /// `[coeff [*]] factor*` where a factor is `X<i>[^<k>]`.
    fn term(&mut self) -> Result<Word, ParsePbwError> {
        let mut coeff = BigRational::one();
        let mut saw_coeff = false;
        if matches!(self.peek(), Some(b'0'..=b'9')) {
            coeff = self.rational()?;
            saw_coeff = true;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        let mut letters = Vec::new();
        let mut degree = 0u64;
        while self.peek() == Some(b'X') {
            self.pos += 1;
            let g = self.small_int()?;
            if !(1..=4).contains(&g) {
                return Err(ParsePbwError::BadGenerator(g));
            }
            let mut k = 1;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                k = self.small_int()?;
            }
            degree = degree.saturating_add(k);
            if degree > MAX_ORDERED_DEGREE {
                return Err(ParsePbwError::TooLarge(degree, MAX_ORDERED_DEGREE));
            }
            letters.extend(std::iter::repeat_n(g as u8, k as usize));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
        }
        if !saw_coeff && letters.is_empty() {
            return Err(self.unexpected());
        }
        let ordered = letters.windows(2).all(|w| w[0] <= w[1]);
        if !ordered && degree > MAX_UNORDERED_DEGREE {
            return Err(ParsePbwError::TooLarge(degree, MAX_UNORDERED_DEGREE));
        }
        Ok(Word::new(coeff, letters))
    }
}

/// Parses sums of rational multiples of generator words and returns their normal form.
///
/// Accepts the canonical output of `Display` as well as unordered words such as `X2 X1 - 1/2 X3`.
impl FromStr for PbwPolynomial {
    type Err = ParsePbwError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cur = Cursor { s: s.as_bytes(), pos: 0 };
        let mut total = PbwPolynomial::zero();
        let mut sign = BigRational::one();
        loop {
            // "+ -c" appears in the canonical form of negative coefficients
            if cur.peek() == Some(b'-') {
                cur.pos += 1;
                sign = -sign;
            }
            let mut w = cur.term()?;
            w.coeff *= &sign;
            total = total.add(&normal_form(&w, RewriteOrder::Leftmost));
            match cur.peek() {
                None => break,
                Some(b'+') => sign = BigRational::one(),
                Some(b'-') => sign = -BigRational::one(),
                Some(_) => return Err(cur.unexpected()),
            }
            cur.pos += 1;
        }
        Ok(total)
    }
}

impl PbwPolynomial {
    /// True when every coefficient is an integer of absolute value at most `bound`.
    pub fn has_small_integer_coefficients(&self, bound: i64) -> bool {
        self.terms
            .values()
            .all(|c| c.is_integer() && c.abs() <= BigRational::from_integer(bound.into()))
    }
}
