//! Block decomposition `P = (RL^q)^{n_1} S_1 … (RL^q)^{n_r} S_r C` and the
//! structured MSS test built on it.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::{compact, lambda_cmp, parity_lex_cmp, Lambda, Sequence, Symbol, Word};

/// Canonical block form. Each run is `(n_i, S_i)`: `n_i` consecutive `RL^q`
/// blocks followed by the chunk `S_i`. Only the last chunk may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockForm {
    pub q: usize,
    pub runs: Vec<(usize, Word)>,
}

impl BlockForm {
    pub fn r(&self) -> usize {
        self.runs.len()
    }

    fn block(&self) -> Vec<Symbol> {
        let mut b = vec![Symbol::R];
        b.extend(std::iter::repeat_n(Symbol::L, self.q));
        b
    }

    /// Rebuilds the sequence the form describes.
    pub fn reassemble(&self) -> Sequence {
        let block = self.block();
        let mut body = Vec::new();
        for (n, s) in &self.runs {
            for _ in 0..*n {
                body.extend_from_slice(&block);
            }
            body.extend_from_slice(s);
        }
        Sequence::from_body_unchecked(body)
    }

    /// All `n_i` equal to one.
    pub fn unit_exponents(&self) -> bool {
        self.runs.iter().all(|(n, _)| *n == 1)
    }
}

impl fmt::Display for BlockForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let block = if self.q == 0 {
            "R".to_string()
        } else {
            compact(&self.block())
        };
        for (n, s) in &self.runs {
            if *n == 1 {
                write!(f, "({block})")?;
            } else {
                write!(f, "({block})^{n}")?;
            }
            if !s.is_empty() {
                write!(f, "[{}]", s.compact())?;
            }
        }
        write!(f, "C")
    }
}

/// Splits a body into `R L^k` units: `(start, k)`. The body must start with `R`.
fn units(body: &[Symbol]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < body.len() {
        debug_assert_eq!(body[i], Symbol::R);
        let start = i;
        i += 1;
        while i < body.len() && body[i] == Symbol::L {
            i += 1;
        }
        out.push((start, i - start - 1));
    }
    out
}

pub fn block_decompose(seq: &Sequence) -> Result<BlockForm> {
    if !seq.starts_with_r() {
        return Err(Error::NotAdmissible(format!(
            "{} does not start with R",
            seq.compact()
        )));
    }
    let q = seq.leading_l_run();
    let body = seq.body();
    let mut runs: Vec<(usize, Word)> = Vec::new();
    for (start, k) in units(body) {
        if k > q {
            return Err(Error::Lemma1Violation {
                position: start,
                run: k,
                q,
            });
        }
        let unit = &body[start..=start + k];
        if k == q {
            match runs.last_mut() {
                Some((n, s)) if s.is_empty() => *n += 1,
                _ => runs.push((1, Word::new())),
            }
        } else {
            // The first unit is always a block, so `runs` is non-empty here.
            runs.last_mut().expect("leading block").1.extend_from_slice(unit);
        }
    }
    Ok(BlockForm { q, runs })
}

/// No `R` is followed by more `L`s than the run after the leading `R`.
pub fn check_lemma1(seq: &Sequence) -> bool {
    if !seq.starts_with_r() {
        return false;
    }
    let q = seq.leading_l_run();
    units(seq.body()).iter().all(|&(_, k)| k <= q)
}

/// False when `n_1 ≥ 2`, or when `r ≥ 2` and the last chunk is empty.
pub fn check_prop1(bf: &BlockForm) -> bool {
    let n1_ok = bf.runs.first().is_none_or(|(n, _)| *n < 2);
    let tail_ok = bf.r() < 2 || bf.runs.last().is_none_or(|(_, s)| !s.is_empty());
    n1_ok && tail_ok
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum FailingRule {
    /// An L-run longer than the leading one.
    Lemma1,
    /// The first group repeats the leading block.
    Prop1a,
    /// A repeated-group sequence ends on a bare block.
    Prop1b,
    /// Two shifted S-chunks diverge the wrong way.
    Thm4,
    /// Matching chunks, exponents ordered the wrong way for their parity.
    Thm5,
    /// The sequence starts with `L`, so its final `C` already beats it.
    LeadingSymbol,
}

impl fmt::Display for FailingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuredVerdict {
    pub is_mss: bool,
    /// `k` such that `σ^k(P)` exceeds `P`.
    pub failing_shift: Option<usize>,
    pub failing_rule: Option<FailingRule>,
}

impl StructuredVerdict {
    fn accept() -> Self {
        StructuredVerdict {
            is_mss: true,
            failing_shift: None,
            failing_rule: None,
        }
    }

    fn reject(shift: usize, rule: FailingRule) -> Self {
        StructuredVerdict {
            is_mss: false,
            failing_shift: Some(shift),
            failing_rule: Some(rule),
        }
    }
}

/// Group-level layout of `P`: where every group of blocks and every chunk starts.
struct Layout {
    group_start: Vec<usize>,
    chunk_start: Vec<usize>,
    /// `r_before[i]` = number of `R`s in `P[..i]`.
    r_before: Vec<usize>,
}

impl Layout {
    fn new(seq: &Sequence, bf: &BlockForm) -> Self {
        let mut group_start = Vec::with_capacity(bf.r());
        let mut chunk_start = Vec::with_capacity(bf.r());
        let mut pos = 0;
        for (n, s) in &bf.runs {
            group_start.push(pos);
            pos += n * (bf.q + 1);
            chunk_start.push(pos);
            pos += s.len();
        }
        let mut r_before = Vec::with_capacity(seq.period() + 1);
        let mut c = 0;
        r_before.push(0);
        for &s in seq.iter() {
            if s == Symbol::R {
                c += 1;
            }
            r_before.push(c);
        }
        Layout {
            group_start,
            chunk_start,
            r_before,
        }
    }
}

/// Local comparison of two diverging chunk windows, signed by the parity of
/// the `R`s in front of them.
fn chunk_window_passes(beta: usize, shifted: &[Symbol], original: &[Symbol]) -> bool {
    let a = Lambda::of_symbols(shifted);
    let b = Lambda::of_symbols(original);
    let o = lambda_cmp(&a, &b);
    let o = if beta % 2 == 1 { o.reverse() } else { o };
    o == Ordering::Less
}

/// Exponent rule: after equal chunks, `P` continues with `a` blocks and the
/// shift with `b` blocks (`b = 0` when the shift has reached its `C`).
fn exponent_rule_passes(beta: usize, a: usize, b: usize) -> bool {
    debug_assert_ne!(a, b);
    if beta.is_multiple_of(2) {
        (b > a && a % 2 == 1) || (b < a && b.is_multiple_of(2))
    } else {
        (b > a && a.is_multiple_of(2)) || (b < a && b % 2 == 1)
    }
}

/// MSS test driven by the block form. Only shifts landing on the last block
/// of a group need a comparison; all other shifts are settled by the leading
/// run and the chunk cap.
pub fn is_mss_structured(seq: &Sequence) -> StructuredVerdict {
    let p = seq.period();
    if p == 1 {
        return StructuredVerdict::accept();
    }
    if !seq.starts_with_r() {
        return StructuredVerdict::reject(p - 1, FailingRule::LeadingSymbol);
    }
    let bf = match block_decompose(seq) {
        Ok(bf) => bf,
        Err(Error::Lemma1Violation { position, .. }) => {
            return StructuredVerdict::reject(position, FailingRule::Lemma1)
        }
        Err(e) => unreachable!("R-led sequences always decompose: {e}"),
    };
    let q = bf.q;
    let r = bf.r();
    let n1 = bf.runs[0].0;
    if n1 >= 2 {
        return StructuredVerdict::reject((n1 - 1) * (q + 1), FailingRule::Prop1a);
    }
    if r >= 2 && bf.runs[r - 1].1.is_empty() {
        return StructuredVerdict::reject(p - q - 2, FailingRule::Prop1b);
    }
    if r == 1 {
        return StructuredVerdict::accept();
    }

    let layout = Layout::new(seq, &bf);
    let block: Vec<Symbol> = std::iter::once(Symbol::R)
        .chain(std::iter::repeat_n(Symbol::L, q))
        .collect();

    for g in 1..r {
        let k = layout.chunk_start[g] - (q + 1);
        let direct = parity_lex_cmp(&seq[k..], seq);
        let (passes, rule) = group_shift_verdict(seq, &bf, &layout, &block, g);
        assert_eq!(
            passes,
            direct == Ordering::Less,
            "block rule {rule:?} disagrees with direct comparison at shift {k} of {seq}"
        );
        if !passes {
            return StructuredVerdict::reject(k, rule);
        }
    }
    StructuredVerdict::accept()
}

/// Walks the shifted tail starting at group `g` against the tail of `P`,
/// group by group, and applies the chunk or exponent rule at the first
/// divergence.
fn group_shift_verdict(
    seq: &Sequence,
    bf: &BlockForm,
    layout: &Layout,
    block: &[Symbol],
    g: usize,
) -> (bool, FailingRule) {
    let r = bf.r();
    let mut j = 0;
    loop {
        let s_orig = &bf.runs[j].1;
        let s_shift = &bf.runs[g + j].1;
        if s_orig != s_shift {
            let mut w0 = s_orig.as_slice().to_vec();
            w0.extend_from_slice(block);
            let mut wg = s_shift.as_slice().to_vec();
            if g + j + 1 < r {
                wg.extend_from_slice(block);
            } else {
                wg.push(Symbol::C);
            }
            let beta = layout.r_before[layout.chunk_start[j]];
            return (chunk_window_passes(beta, &wg, &w0), FailingRule::Thm4);
        }
        let a = bf.runs[j + 1].0;
        let b = if g + j + 1 < r { bf.runs[g + j + 1].0 } else { 0 };
        if a != b {
            let beta = layout.r_before[layout.group_start[j + 1]];
            return (exponent_rule_passes(beta, a, b), FailingRule::Thm5);
        }
        j += 1;
        debug_assert!(g + j < r, "tail of {seq} exhausted without divergence");
    }
}
