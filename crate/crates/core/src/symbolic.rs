//! Symbols, admissible sequences, λ-encoding and the parity-lexicographic order.
//!
//! An admissible sequence is a word over `{L, R}` closed by a single `C`. The
//! order used throughout the crate is the parity-lexicographic one: compare
//! under `L < C < R` at the first differing position, reversed when the common
//! prefix holds an odd number of `R`s.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Longest word the text parser will expand.
pub const MAX_PARSED_LEN: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    L,
    C,
    R,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::C => 'C',
            Symbol::R => 'R',
        }
    }

    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            'L' => Some(Symbol::L),
            'C' => Some(Symbol::C),
            'R' => Some(Symbol::R),
            _ => None,
        }
    }

    /// Swaps `L` and `R`; `C` is fixed.
    pub fn flip(self) -> Symbol {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
            Symbol::C => Symbol::C,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A plain symbol word. S-blocks, shifted suffixes and similar fragments live here.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn extend_from_slice(&mut self, s: &[Symbol]) {
        self.0.extend_from_slice(s);
    }

    /// Longest run of consecutive `L`s.
    pub fn max_l_run(&self) -> usize {
        max_l_run(&self.0)
    }

    pub fn count_r(&self) -> usize {
        count_r(&self.0)
    }

    /// Run-length form such as `RL^2RC`.
    pub fn compact(&self) -> String {
        compact(&self.0)
    }
}

impl Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `R`, `L` and `C` with optional `^n` exponents.
    fn from_str(s: &str) -> Result<Self> {
        parse_runs(s, true).map(Word)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An admissible sequence: `{L,R}*` followed by exactly one `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequence(Vec<Symbol>);

impl Sequence {
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Self> {
        match symbols.split_last() {
            None => Err(Error::NotAdmissible("empty sequence".into())),
            Some((last, body)) => {
                if *last != Symbol::C {
                    return Err(Error::NotAdmissible(format!(
                        "{} does not end with C",
                        compact(&symbols)
                    )));
                }
                if let Some(i) = body.iter().position(|&s| s == Symbol::C) {
                    return Err(Error::NotAdmissible(format!(
                        "interior C at position {}",
                        i + 1
                    )));
                }
                Ok(Sequence(symbols))
            }
        }
    }

    /// Closes an `{L,R}` body with `C`.
    pub fn from_body(body: &[Symbol]) -> Result<Self> {
        let mut v = Vec::with_capacity(body.len() + 1);
        v.extend_from_slice(body);
        v.push(Symbol::C);
        Self::from_symbols(v)
    }

    pub(crate) fn from_body_unchecked(mut body: Vec<Symbol>) -> Self {
        debug_assert!(body.iter().all(|&s| s != Symbol::C));
        body.push(Symbol::C);
        Sequence(body)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Everything but the closing `C`.
    pub fn body(&self) -> &[Symbol] {
        &self.0[..self.0.len() - 1]
    }

    /// The period `p`.
    pub fn period(&self) -> usize {
        self.0.len()
    }

    pub fn starts_with_r(&self) -> bool {
        self.0[0] == Symbol::R
    }

    /// Length of the L-run right after the leading `R` (0 if the sequence
    /// does not start `RL`).
    pub fn leading_l_run(&self) -> usize {
        if !self.starts_with_r() {
            return 0;
        }
        self.0[1..].iter().take_while(|&&s| s == Symbol::L).count()
    }

    pub fn compact(&self) -> String {
        compact(&self.0)
    }

    pub fn to_word(&self) -> Word {
        Word(self.0.clone())
    }
}

impl Deref for Sequence {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Sequence {
    type Err = Error;

    /// `SEQ := BODY 'C'`, `BODY := (('R'|'L') EXP?)*`, `EXP := '^' positive-decimal`.
    fn from_str(s: &str) -> Result<Self> {
        let Some(body) = s.strip_suffix('C') else {
            return Err(Error::Parse {
                pos: s.len(),
                msg: "sequence must end with C".into(),
            });
        };
        let symbols = parse_runs(body, false)?;
        if symbols.len() + 1 > MAX_PARSED_LEN {
            return Err(Error::Parse {
                pos: 0,
                msg: format!("expanded length exceeds {MAX_PARSED_LEN}"),
            });
        }
        Ok(Sequence::from_body_unchecked(symbols))
    }
}

impl Serialize for Sequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn parse_runs(s: &str, allow_c: bool) -> Result<Vec<Symbol>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let sym = match Symbol::from_char(c) {
            Some(Symbol::C) if !allow_c => {
                return Err(Error::Parse {
                    pos: i,
                    msg: "interior C".into(),
                })
            }
            Some(sym) => sym,
            None => {
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character {c:?}"),
                })
            }
        };
        i += 1;
        let mut count = 1usize;
        if i < bytes.len() && bytes[i] == b'^' {
            let start = i + 1;
            let mut end = start;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return Err(Error::Parse {
                    pos: start,
                    msg: "exponent needs digits".into(),
                });
            }
            count = s[start..end]
                .parse::<usize>()
                .ok()
                .filter(|&n| n > 0 && n <= MAX_PARSED_LEN)
                .ok_or_else(|| Error::Parse {
                    pos: start,
                    msg: "exponent must be a positive integer".into(),
                })?;
            i = end;
        }
        if out.len() + count > MAX_PARSED_LEN {
            return Err(Error::Parse {
                pos: i,
                msg: format!("expanded length exceeds {MAX_PARSED_LEN}"),
            });
        }
        out.extend(std::iter::repeat_n(sym, count));
    }
    Ok(out)
}

pub(crate) fn compact(symbols: &[Symbol]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < symbols.len() {
        let s = symbols[i];
        let mut j = i + 1;
        while j < symbols.len() && symbols[j] == s {
            j += 1;
        }
        out.push(s.as_char());
        if j - i > 1 {
            out.push('^');
            out.push_str(&(j - i).to_string());
        }
        i = j;
    }
    out
}

pub(crate) fn max_l_run(symbols: &[Symbol]) -> usize {
    let mut best = 0;
    let mut cur = 0;
    for &s in symbols {
        if s == Symbol::L {
            cur += 1;
            best = best.max(cur);
        } else {
            cur = 0;
        }
    }
    best
}

pub(crate) fn count_r(symbols: &[Symbol]) -> usize {
    symbols.iter().filter(|&&s| s == Symbol::R).count()
}

/// Number of `R`s strictly before 1-based position `i`.
pub fn beta(seq: &Sequence, i: usize) -> Result<usize> {
    if i == 0 || i > seq.period() {
        return Err(Error::PositionOutOfRange {
            index: i,
            len: seq.period(),
        });
    }
    Ok(count_r(&seq[..i - 1]))
}

/// The ±1/0 encoding of a word: `R` gives `(-1)^β`, `L` gives `(-1)^(β+1)`,
/// `C` gives 0, with β the running count of earlier `R`s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Lambda(Vec<i8>);

impl Lambda {
    pub fn of_symbols(symbols: &[Symbol]) -> Lambda {
        let mut odd = false;
        let v = symbols
            .iter()
            .map(|&s| {
                let sign = if odd { -1 } else { 1 };
                match s {
                    Symbol::R => {
                        odd = !odd;
                        sign
                    }
                    Symbol::L => -sign,
                    Symbol::C => 0,
                }
            })
            .collect();
        Lambda(v)
    }

    pub fn entries(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `σ^k` at λ level: drop `k` entries and pad with `k` zeros.
    pub fn shifted(&self, k: usize) -> Lambda {
        let k = k.min(self.0.len());
        let mut v = self.0[k..].to_vec();
        v.resize(self.0.len(), 0);
        Lambda(v)
    }

    pub fn negated(&self) -> Lambda {
        Lambda(self.0.iter().map(|&a| -a).collect())
    }

    /// Decodes a λ vector back to symbols. Zeros decode to `C`.
    pub fn decode(entries: &[i8]) -> Vec<Symbol> {
        let mut odd = false;
        entries
            .iter()
            .map(|&a| {
                let r_value = if odd { -1 } else { 1 };
                if a == 0 {
                    Symbol::C
                } else if a == r_value {
                    odd = !odd;
                    Symbol::R
                } else {
                    Symbol::L
                }
            })
            .collect()
    }
}

impl Deref for Lambda {
    type Target = [i8];
    fn deref(&self) -> &[i8] {
        &self.0
    }
}

pub fn lambda_of(seq: &Sequence) -> Lambda {
    Lambda::of_symbols(seq)
}

/// `σ^k(P)`: the suffix after the first `k` symbols, no padding.
pub fn shift(seq: &Sequence, k: usize) -> Result<Word> {
    if k > seq.period() {
        return Err(Error::ShiftOutOfRange {
            k,
            len: seq.period(),
        });
    }
    Ok(Word::from(&seq[k..]))
}

/// Parity-lexicographic comparison over the common span of `a` and `b`.
/// Running out of one word without a difference is `Equal`.
pub fn parity_lex_cmp(a: &[Symbol], b: &[Symbol]) -> Ordering {
    let mut odd = false;
    for (&x, &y) in a.iter().zip(b) {
        if x != y {
            let o = x.cmp(&y);
            return if odd { o.reverse() } else { o };
        }
        if x == Symbol::R {
            odd = !odd;
        }
    }
    Ordering::Equal
}

/// Plain lexicographic order on λ entries over the common span.
pub fn lambda_cmp(a: &[i8], b: &[i8]) -> Ordering {
    a.iter()
        .zip(b)
        .find(|(x, y)| x != y)
        .map_or(Ordering::Equal, |(x, y)| x.cmp(y))
}

/// Direct shift-maximality: no proper right shift compares `Greater`.
pub fn is_shift_maximal(seq: &Sequence) -> bool {
    (1..seq.period()).all(|k| parity_lex_cmp(&seq[k..], seq) != Ordering::Greater)
}

/// Index of the first proper shift that beats `seq`, if any.
pub fn first_violating_shift(seq: &Sequence) -> Option<usize> {
    (1..seq.period()).find(|&k| parity_lex_cmp(&seq[k..], seq) == Ordering::Greater)
}

/// Shift-maximality at λ level. Of `±σ^k(λ_P)` only the copy starting with
/// `+1` can exceed `λ_P`; that copy is compared against `λ_P`. An all-zero
/// shift is below every admissible λ.
pub fn is_shift_maximal_lambda(seq: &Sequence) -> bool {
    let lam = lambda_of(seq);
    if lam[0] < 0 {
        // The trailing C alone would beat an L-led sequence.
        return false;
    }
    (1..=seq.period()).all(|k| {
        let s = lam.shifted(k);
        match s[0] {
            0 => true,
            1 => lambda_cmp(&s, &lam) != Ordering::Greater,
            _ => lambda_cmp(&s.negated(), &lam) != Ordering::Greater,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn symbol_order() {
        assert!(Symbol::L < Symbol::C && Symbol::C < Symbol::R);
    }

    #[test]
    fn beta_examples() {
        let p = seq("RLLRC");
        assert_eq!(beta(&p, 1).unwrap(), 0);
        assert_eq!(beta(&p, 4).unwrap(), 1);
        assert_eq!(beta(&p, 5).unwrap(), 2);
        assert!(beta(&p, 0).is_err());
        assert!(beta(&p, 6).is_err());
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_of(&seq("RLLRC")).entries(), &[1, 1, 1, -1, 0]);
        assert_eq!(lambda_of(&seq("RC")).entries(), &[1, 0]);
        assert_eq!(lambda_of(&seq("RLRC")).entries(), &[1, 1, -1, 0]);
    }

    #[test]
    fn lambda_decode_inverts() {
        let p = seq("RLLRRLRLLC");
        assert_eq!(Lambda::decode(&lambda_of(&p)), p.symbols());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&seq("RLLC"), 1).unwrap().to_string(), "LLC");
        assert!(shift(&seq("RLLC"), 4).unwrap().is_empty());
        assert_eq!(shift(&seq("RLRLC"), 2).unwrap().to_string(), "RLC");
        assert!(shift(&seq("RLLC"), 5).is_err());
    }

    #[test]
    fn parity_lex_examples() {
        assert_eq!(parity_lex_cmp(&seq("RLRC"), &seq("RLC")), Ordering::Less);
        assert_eq!(parity_lex_cmp(&seq("RLC"), &seq("RLLC")), Ordering::Less);
        assert_eq!(parity_lex_cmp(&seq("RLC"), &seq("RLC")), Ordering::Equal);
        assert_eq!(parity_lex_cmp(&seq("RLC"), &seq("RLRC")), Ordering::Greater);
    }

    #[test]
    fn shift_maximal_examples() {
        assert!(is_shift_maximal(&seq("RLLC")));
        assert!(!is_shift_maximal(&seq("RLRLC")));
        assert!(is_shift_maximal(&seq("RLC")));
        assert_eq!(first_violating_shift(&seq("RLRLC")), Some(2));
        for s in ["RLLC", "RLRLC", "RLC", "RLLRLLRC", "RC", "C", "LRC", "RRC"] {
            let p = seq(s);
            assert_eq!(is_shift_maximal(&p), is_shift_maximal_lambda(&p), "{s}");
        }
    }

    #[test]
    fn parse_grammar() {
        assert_eq!(seq("RL^2RC").to_string(), "RLLRC");
        assert_eq!(seq("C").period(), 1);
        assert_eq!(seq("R^3L^10C").period(), 14);
        for bad in ["", "RL", "RCLC", "rlc", "RL^C", "RL^0C", "R L C", "RL^-1C", "RX C"] {
            assert!(bad.parse::<Sequence>().is_err(), "{bad:?}");
        }
        assert!("R^2000000C".parse::<Sequence>().is_err());
    }

    #[test]
    fn compact_form() {
        assert_eq!(seq("RLLRC").compact(), "RL^2RC");
        assert_eq!(seq("RRRLC").compact(), "R^3LC");
        assert_eq!(seq("C").compact(), "C");
    }

    #[test]
    fn admissibility_checks() {
        assert!(Sequence::from_symbols(vec![]).is_err());
        assert!(Sequence::from_symbols(vec![Symbol::R, Symbol::L]).is_err());
        assert!(Sequence::from_symbols(vec![Symbol::C, Symbol::C]).is_err());
        assert!(Sequence::from_body(&[Symbol::R]).is_ok());
    }
}
