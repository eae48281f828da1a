//! Construction of capped S-blocks, derived chunks, and whole-period enumeration.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::is_mss_structured;
use crate::symbolic::{is_shift_maximal, max_l_run, parity_lex_cmp, Lambda, Sequence, Symbol, Word};

/// Largest period the brute-force enumerator accepts.
pub const MAX_BRUTEFORCE_PERIOD: usize = 40;

/// Words of length `m` starting with `R` with at most `qcap` consecutive `L`s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SBlockSpec {
    pub m: usize,
    pub qcap: usize,
}

/// Pushes every `{L,R}` word of length `n` onto copies of `prefix`.
fn variations(prefix: &[Symbol], n: usize, out: &mut Vec<Vec<Symbol>>) {
    for bits in 0u64..(1u64 << n) {
        let mut w = prefix.to_vec();
        w.extend((0..n).map(|i| if bits >> i & 1 == 1 { Symbol::R } else { Symbol::L }));
        out.push(w);
    }
}

/// Fillings of a block of `len` boxes whose first `R` sits at 1-based `f`
/// and last `R` at `l`: `L^{f-1} R VR(l-f-1) R L^{len-l}`, or
/// `L^{f-1} R L^{len-l}` when `f = l`. Each filling is appended to `prefix`.
fn block_fillings(prefix: &[Symbol], len: usize, f: usize, l: usize, out: &mut Vec<Vec<Symbol>>) {
    let mut head = prefix.to_vec();
    head.extend(std::iter::repeat_n(Symbol::L, f - 1));
    head.push(Symbol::R);
    let mut middles = Vec::new();
    if l == f {
        middles.push(head);
    } else {
        variations(&head, l - f - 1, &mut middles);
        for m in &mut middles {
            m.push(Symbol::R);
        }
    }
    for mut m in middles {
        m.extend(std::iter::repeat_n(Symbol::L, len - l));
        out.push(m);
    }
}

/// Box-filling construction: `m = jq + r` with `q = qcap + 1`; `j` blocks of
/// `q` boxes each holding at least one `R`, then a tail of `r` boxes.
pub fn enumerate_s(spec: SBlockSpec) -> Vec<Word> {
    let SBlockSpec { m, qcap } = spec;
    if m == 0 {
        return Vec::new();
    }
    let q = qcap + 1;
    let (j, r) = (m / q, m % q);
    let mut set = BTreeSet::new();

    if j == 0 {
        let mut out = Vec::new();
        variations(&[Symbol::R], r - 1, &mut out);
        set.extend(out.into_iter().map(Word::from_symbols));
        return set.into_iter().collect();
    }

    // (word so far, position of its last R inside the latest block)
    let mut frontier: Vec<(Vec<Symbol>, usize)> = Vec::new();
    for l in 1..=q {
        let mut out = Vec::new();
        block_fillings(&[], q, 1, l, &mut out);
        frontier.extend(out.into_iter().map(|w| (w, l)));
    }
    for _ in 1..j {
        let mut next = Vec::new();
        for (w, l_prev) in &frontier {
            for f in 1..=*l_prev {
                for l in f..=q {
                    let mut out = Vec::new();
                    block_fillings(w, q, f, l, &mut out);
                    next.extend(out.into_iter().map(|w| (w, l)));
                }
            }
        }
        frontier = next;
    }

    for (w, l_j) in frontier {
        let mut out = Vec::new();
        if r == 0 {
            out.push(w);
        } else if l_j <= r {
            for f in 1..=l_j {
                for l in f..=r {
                    block_fillings(&w, r, f, l, &mut out);
                }
            }
        } else {
            variations(&w, r, &mut out);
        }
        set.extend(out.into_iter().map(Word::from_symbols));
    }
    set.into_iter().collect()
}

/// Length of the maximal run of `+1` entries through index `i`.
fn plus_run_through(lam: &[i8], i: usize) -> usize {
    let left = lam[..i].iter().rev().take_while(|&&a| a == 1).count();
    let right = lam[i + 1..].iter().take_while(|&&a| a == 1).count();
    left + 1 + right
}

/// Chunks that a later group may carry after `S1`: every `-1` of
/// `λ(S1·RL^q)` sitting right after at most `q-1` consecutive `+1`s is
/// flipped, the prefix up to it decoded, and every capped tail `Q` of length
/// `0..=max_len` appended.
pub fn derive_si_candidates(q: usize, s1: &Word, max_len: usize) -> Result<Vec<Word>> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    if s1.first() != Some(&Symbol::R) {
        return Err(Error::InvalidArgument(format!(
            "S1 {:?} must be non-empty and start with R",
            s1.to_string()
        )));
    }
    if s1.max_l_run() > q - 1 {
        return Err(Error::CapViolation {
            word: s1.to_string(),
            cap: q - 1,
        });
    }
    let mut base = s1.as_slice().to_vec();
    base.push(Symbol::R);
    base.extend(std::iter::repeat_n(Symbol::L, q));
    let lam = Lambda::of_symbols(&base);

    let mut tails: Vec<Vec<Symbol>> = vec![Vec::new()];
    for len in 1..=max_len {
        variations(&[], len, &mut tails);
    }
    tails.retain(|t| max_l_run(t) < q);

    let mut set = BTreeSet::new();
    for j in 1..lam.len() {
        if lam[j] != -1 {
            continue;
        }
        let k = lam[..j].iter().rev().take_while(|&&a| a == 1).count();
        if k > q - 1 {
            continue;
        }
        let mut flipped = lam[..j].to_vec();
        flipped.push(1);
        let prefix = Lambda::decode(&flipped);
        for t in &tails {
            let mut cand = prefix.clone();
            cand.extend_from_slice(t);
            if max_l_run(&cand) > q - 1 {
                continue;
            }
            if plus_run_through(&Lambda::of_symbols(&cand), j) > q {
                continue;
            }
            set.insert(Word::from_symbols(cand));
        }
    }
    Ok(set.into_iter().collect())
}

/// All MSS-sequences of one period, increasing in parity-lex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodEnumeration {
    pub period: usize,
    pub sequences: Vec<Sequence>,
}

impl PeriodEnumeration {
    fn sorted(period: usize, mut sequences: Vec<Sequence>) -> Self {
        sequences.sort_by(|a, b| parity_lex_cmp(a, b));
        sequences.dedup();
        PeriodEnumeration { period, sequences }
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

fn check_period(p: usize, max: usize) -> Result<()> {
    if p < 2 || p > max {
        return Err(Error::InvalidArgument(format!(
            "period {p} outside 2..={max}"
        )));
    }
    Ok(())
}

/// Memoised `S(m, q-1)` lists for one `q`.
struct ChunkTable(Vec<Vec<Word>>);

impl ChunkTable {
    fn new(q: usize, max_m: usize) -> Self {
        ChunkTable(
            (0..=max_m)
                .map(|m| enumerate_s(SBlockSpec { m, qcap: q - 1 }))
                .collect(),
        )
    }
}

/// Extends `prefix` with every `(RL^q)^n S` continuation that reaches exactly
/// `remaining` more body symbols, passing each complete body to `emit`.
fn extend_groups(
    prefix: &mut Vec<Symbol>,
    remaining: usize,
    q: usize,
    chunks: &ChunkTable,
    emit: &mut dyn FnMut(&[Symbol]),
) {
    if remaining == 0 {
        emit(prefix);
        return;
    }
    let b = q + 1;
    let mut n = 1;
    while n * b < remaining {
        let rest = remaining - n * b;
        for m in 1..=rest {
            for s in &chunks.0[m] {
                let mark = prefix.len();
                for _ in 0..n {
                    prefix.push(Symbol::R);
                    prefix.extend(std::iter::repeat_n(Symbol::L, q));
                }
                prefix.extend_from_slice(s);
                extend_groups(prefix, rest - m, q, chunks, emit);
                prefix.truncate(mark);
            }
        }
        n += 1;
    }
}

/// Builds candidates `RL^q S_1 (RL^q)^{n_2} S_2 … (RL^q)^{n_r} S_r C` with
/// non-empty capped chunks, plus `RL^qC` and `RC`, and keeps the ones the
/// block test accepts.
pub fn enumerate_mss_structured(p: usize) -> Result<PeriodEnumeration> {
    check_period(p, MAX_BRUTEFORCE_PERIOD)?;
    let body_len = p - 1;
    let mut found = Vec::new();
    if p == 2 {
        found.push(Sequence::from_body_unchecked(vec![Symbol::R]));
    }
    // RL^{p-2}C
    if p >= 3 {
        let mut body = vec![Symbol::R];
        body.extend(std::iter::repeat_n(Symbol::L, p - 2));
        found.push(Sequence::from_body_unchecked(body));
    }

    // Work items: (q, S_1)
    let mut items: Vec<(usize, Word)> = Vec::new();
    for q in 1..body_len.saturating_sub(1) {
        let max_m1 = body_len - (q + 1);
        for m1 in 1..=max_m1 {
            for s1 in enumerate_s(SBlockSpec { m: m1, qcap: q - 1 }) {
                items.push((q, s1));
            }
        }
    }
    let tables: Vec<ChunkTable> = (0..body_len)
        .map(|q| {
            if q == 0 {
                ChunkTable(Vec::new())
            } else {
                ChunkTable::new(q, body_len)
            }
        })
        .collect();

    let more: Vec<Sequence> = items
        .par_iter()
        .flat_map_iter(|(q, s1)| {
            let q = *q;
            let mut prefix = vec![Symbol::R];
            prefix.extend(std::iter::repeat_n(Symbol::L, q));
            prefix.extend_from_slice(s1);
            let remaining = body_len - prefix.len();
            let mut local = Vec::new();
            extend_groups(&mut prefix, remaining, q, &tables[q], &mut |body| {
                let s = Sequence::from_body_unchecked(body.to_vec());
                if is_mss_structured(&s).is_mss {
                    local.push(s);
                }
            });
            local
        })
        .collect();
    found.extend(more);
    Ok(PeriodEnumeration::sorted(p, found))
}

/// Filters all `2^{p-2}` words `R{L,R}^{p-2}C` by direct shift-maximality.
pub fn enumerate_mss_bruteforce(p: usize) -> Result<PeriodEnumeration> {
    check_period(p, MAX_BRUTEFORCE_PERIOD)?;
    let n = p - 2;
    let found: Vec<Sequence> = (0u64..(1u64 << n))
        .into_par_iter()
        .filter_map(|bits| {
            let mut body = Vec::with_capacity(p - 1);
            body.push(Symbol::R);
            body.extend((0..n).map(|i| if bits >> i & 1 == 1 { Symbol::R } else { Symbol::L }));
            let s = Sequence::from_body_unchecked(body);
            is_shift_maximal(&s).then_some(s)
        })
        .collect();
    Ok(PeriodEnumeration::sorted(p, found))
}
