//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use msskit::composition::{compose, factor_once, factorizations};
use msskit::counting::{
    card_s, count_nonprimary_repeated, count_nonprimary_single_block, enumerated_nonprimary_repeated,
    single_block_sequences, DivisorSet,
};
use msskit::generators::{
    derive_si_candidates, enumerate_mss_bruteforce, enumerate_mss_structured, enumerate_s, SBlockSpec,
};
use msskit::locator::{itinerary, locate, verify_order, DEFAULT_EPS, DEFAULT_TOL};
use msskit::structure::block_decompose;
use msskit::{is_mss_structured, is_shift_maximal, is_shift_maximal_lambda, Sequence, Symbol, Word};
use num_bigint::BigUint;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }
}

// Independent oracle over ASCII words.

fn rank(c: u8) -> u8 {
    match c {
        b'L' => 0,
        b'C' => 1,
        b'R' => 2,
        _ => panic!("unexpected symbol {c}"),
    }
}

fn oracle_cmp(a: &[u8], b: &[u8]) -> std::cmp::Ordering {
    let mut rs = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            let o = rank(*x).cmp(&rank(*y));
            return if rs % 2 == 1 { o.reverse() } else { o };
        }
        if *x == b'R' {
            rs += 1;
        }
    }
    std::cmp::Ordering::Equal
}

fn oracle_mss(w: &[u8]) -> bool {
    (1..w.len()).all(|k| oracle_cmp(&w[k..], w) != std::cmp::Ordering::Greater)
}

fn oracle_compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    let q = &a[..a.len() - 1];
    let odd = q.iter().filter(|&&c| c == b'R').count() % 2 == 1;
    let mut out = Vec::new();
    for &y in &b[..b.len() - 1] {
        out.extend_from_slice(q);
        out.push(match (y, odd) {
            (b'R', true) => b'L',
            (b'L', true) => b'R',
            (c, _) => c,
        });
    }
    out.extend_from_slice(q);
    out.push(b'C');
    out
}

fn words_of(p: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..(1u64 << (p - 1))).map(move |bits| {
        let mut w: Vec<u8> = (0..p - 1)
            .map(|i| if bits >> i & 1 == 1 { b'R' } else { b'L' })
            .collect();
        w.push(b'C');
        w
    })
}

fn seq_of(w: &[u8]) -> Sequence {
    std::str::from_utf8(w).unwrap().parse().unwrap()
}

fn seq(s: &str) -> Sequence {
    s.parse().unwrap()
}

/// `RL^k C`.
fn rl_c(k: usize) -> Sequence {
    let mut body = vec![Symbol::R];
    body.extend(std::iter::repeat_n(Symbol::L, k));
    Sequence::from_body(&body).unwrap()
}

fn oracle_mss_of_period(p: usize) -> Vec<Vec<u8>> {
    words_of(p).filter(|w| w[0] == b'R' && oracle_mss(w)).collect()
}

fn criterion_1() -> Outcome {
    let mut checked = 0usize;
    let mut disagreements = Vec::new();
    for p in 1..=16 {
        for w in words_of(p) {
            let s = seq_of(&w);
            let a = is_mss_structured(&s).is_mss;
            let b = is_shift_maximal(&s);
            let c = is_shift_maximal_lambda(&s);
            let o = oracle_mss(&w);
            if !(a == b && b == c && c == o) {
                disagreements.push(format!("{s}: structured={a} direct={b} lambda={c} oracle={o}"));
            }
            checked += 1;
        }
    }
    Outcome::new(
        disagreements.is_empty(),
        format!(
            "{checked} admissible sequences, p <= 16, {} disagreements {:?}",
            disagreements.len(),
            disagreements.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut diffs = Vec::new();
    let mut counts = Vec::new();
    for p in 2..=16 {
        let a: BTreeSet<String> = enumerate_mss_structured(p)
            .unwrap()
            .sequences
            .iter()
            .map(|s| s.to_string())
            .collect();
        let b: BTreeSet<String> = enumerate_mss_bruteforce(p)
            .unwrap()
            .sequences
            .iter()
            .map(|s| s.to_string())
            .collect();
        let o: BTreeSet<String> = oracle_mss_of_period(p)
            .into_iter()
            .map(|w| String::from_utf8(w).unwrap())
            .collect();
        let sym: usize = a.symmetric_difference(&b).count() + b.symmetric_difference(&o).count();
        if sym > 0 {
            diffs.push((p, sym));
        }
        counts.push(a.len());
    }
    Outcome::new(
        diffs.is_empty(),
        format!("counts p=2..16 {counts:?}, symmetric differences {diffs:?}"),
    )
}

fn criterion_3() -> Outcome {
    let mut text = String::from("RL^4");
    text.push_str(&"RL^3R".repeat(2));
    text.push_str(&"RL^4".repeat(3));
    text.push_str("RL^3RRL^3C");
    let p = seq(&text);
    let want = (seq("RLLLC"), seq("RLLRRRLC"));
    let got = factor_once(&p).unwrap();
    let recomposed = compose(&want.0, &want.1);
    let oracle = oracle_compose(b"RLLLC", b"RLLRRRLC");
    let pass = got.as_ref() == Some(&want)
        && recomposed == p
        && recomposed.to_string().as_bytes() == oracle.as_slice();
    Outcome::new(
        pass,
        format!(
            "factor({}) = {:?}, recompose exact = {}",
            p.compact(),
            got.map(|(a, b)| (a.to_string(), b.to_string())),
            recomposed == p
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for p in 2..=16 {
        let mut found = BTreeSet::new();
        for s in single_block_sequences(p).unwrap() {
            let f = factorizations(&s).unwrap();
            if f.is_empty() {
                continue;
            }
            let q = block_decompose(&s).unwrap().q;
            let expected = (q >= 1 && p % (q + 1) == 0 && q + 1 < p)
                .then(|| (rl_c(q - 1), rl_c(p / (q + 1) - 2)));
            match expected {
                Some(e) if f == vec![e.clone()] => {}
                _ => bad.push(format!("{s}: factorizations {f:?}")),
            }
            found.insert(s.to_string());
        }
        let predicted: BTreeSet<String> = DivisorSet::of(p)
            .proper()
            .into_iter()
            .map(|d| compose(&rl_c(d - 2), &rl_c(p / d - 2)).to_string())
            .collect();
        let formula = count_nonprimary_single_block(p).unwrap() as usize;
        if found != predicted || found.len() != formula {
            bad.push(format!(
                "p={p}: found {found:?} predicted {predicted:?} formula {formula}"
            ));
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("p <= 16, {} mismatches {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn oracle_card_s(m: usize, qm1: usize) -> usize {
    if m == 0 {
        return 0;
    }
    (0u64..(1u64 << (m - 1)))
        .filter(|bits| {
            let mut run = 0;
            let mut best = 0;
            for i in 0..m - 1 {
                if bits >> i & 1 == 0 {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 0;
                }
            }
            best <= qm1
        })
        .count()
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    for m in 0..=14 {
        for qm1 in 0..=6 {
            let f = card_s(m, qm1);
            let o = oracle_card_s(m, qm1);
            let e = enumerate_s(SBlockSpec { m, qcap: qm1 }).len();
            if f != BigUint::from(o) || e != o {
                bad.push((m, qm1, f.to_string(), o, e));
            }
        }
    }
    let example = card_s(4, 2) == BigUint::from(7u32);
    Outcome::new(
        bad.is_empty() && example,
        format!("m <= 14, qm1 <= 6, card_S(4,2) = {}, mismatches {bad:?}", card_s(4, 2)),
    )
}

fn criterion_6() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for p in 2..=16 {
        let formula = count_nonprimary_repeated(p).unwrap();
        let enumerated = enumerated_nonprimary_repeated(p).unwrap();
        let ok = formula == BigUint::from(enumerated.len());
        pass &= ok;
        rows.push(format!(
            "  p={p:2} formula={formula:3} enumerated={:3} {}",
            enumerated.len(),
            if ok { "ok" } else { "MISMATCH" }
        ));
    }
    let mut o = Outcome::new(
        pass,
        "repeated-group double sum vs enumerated unit-exponent non-primary sequences, p <= 16",
    );
    o.notes = rows;
    if !pass {
        o.notes.push(
            "  reported against the open question on the repeated-group count: the sum counts \
             single-group O_h words (including those whose chunk ends in RL^{q-1}, which merge \
             into squared blocks) and assumes one O_s per O_h"
                .into(),
        );
    }
    o
}

fn criterion_7() -> Outcome {
    let mut mss: Vec<Sequence> = Vec::new();
    for p in 2..=12 {
        mss.extend(enumerate_mss_bruteforce(p).unwrap().sequences);
    }
    let mut pairs = 0;
    let mut bad = Vec::new();
    for a in &mss {
        for b in &mss {
            if a.period() * b.period() > 24 {
                continue;
            }
            pairs += 1;
            let c = compose(a, b);
            let oracle = oracle_compose(a.to_string().as_bytes(), b.to_string().as_bytes());
            if c.to_string().as_bytes() != oracle.as_slice() || !is_shift_maximal(&c) {
                bad.push(format!("{a}*{b}: composition"));
                continue;
            }
            match factor_once(&c) {
                Ok(Some((x, y))) if compose(&x, &y) == c => {}
                other => bad.push(format!("{a}*{b}: factor {other:?}")),
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!("{pairs} pairs with |A||B| <= 24, {} failures {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>()),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let rep = match verify_order(8, DEFAULT_TOL) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("verify_order failed: {e}")),
    };
    let elapsed = start.elapsed();
    let rc = locate(&seq("RC"), DEFAULT_TOL).unwrap();
    let rlc = locate(&seq("RLC"), DEFAULT_TOL).unwrap();
    let rc_ok = (rc.r_star - (1.0 + 5f64.sqrt())).abs() < 1e-10;
    let rlc_ok = rlc.r_star > 3.8318 && rlc.r_star < 3.8319;
    let itineraries_ok = rep.entries.iter().all(|e| {
        let p = e.sequence.period();
        let w = itinerary(e.param(), p - 1, DEFAULT_EPS);
        w.as_slice() == e.sequence.body()
    });
    let pass = rep.entries.len() == 37
        && rep.ordered
        && rep.max_residual < 1e-13
        && rep.min_gap > 1e-6
        && rc_ok
        && rlc_ok
        && itineraries_ok
        && elapsed < Duration::from_secs(5);
    Outcome::new(
        pass,
        format!(
            "{} located, ordered={}, max residual {:.3e}, min gap {:.3e}, r*(RC)={:.12}, r*(RLC)={:.9}, max |multiplier| {:.2e}, dead-band hits {}, {:.2?}",
            rep.entries.len(),
            rep.ordered,
            rep.max_residual,
            rep.min_gap,
            rc.r_star,
            rlc.r_star,
            rep.max_abs_multiplier,
            rep.dead_band_hits,
            elapsed
        ),
    )
}

fn block(q: usize) -> Vec<Symbol> {
    let mut b = vec![Symbol::R];
    b.extend(std::iter::repeat_n(Symbol::L, q));
    b
}

fn criterion_9() -> Outcome {
    const PMAX: usize = 14;
    let mut assembled = 0usize;
    let mut accepted = 0usize;
    let mut unsound = Vec::new();
    // S_1 -> observed S_2 (from oracle-accepted P with at least two groups)
    let mut observed: BTreeMap<(usize, Word), BTreeSet<Word>> = BTreeMap::new();
    for p in 2..=PMAX {
        for s in enumerate_mss_bruteforce(p).unwrap().sequences {
            let bf = block_decompose(&s).unwrap();
            if bf.r() >= 2 && !bf.runs[1].1.is_empty() {
                observed
                    .entry((bf.q, bf.runs[0].1.clone()))
                    .or_default()
                    .insert(bf.runs[1].1.clone());
            }
        }
    }

    let mut missing: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut missing_examples = Vec::new();
    for q in 1..PMAX {
        let b = block(q);
        for m1 in 1..PMAX {
            let base = 2 * (q + 1) + m1 + 1;
            if base + 1 > PMAX {
                break;
            }
            for s1 in enumerate_s(SBlockSpec { m: m1, qcap: q - 1 }) {
                let cands = derive_si_candidates(q, &s1, PMAX - base).unwrap();
                for si in &cands {
                    let mut n2 = 1;
                    while base - (q + 1) + n2 * (q + 1) + si.len() <= PMAX {
                        let mut body = b.clone();
                        body.extend_from_slice(&s1);
                        for _ in 0..n2 {
                            body.extend_from_slice(&b);
                        }
                        body.extend_from_slice(si);
                        let p = Sequence::from_body(&body).unwrap();
                        assembled += 1;
                        if is_mss_structured(&p).is_mss {
                            accepted += 1;
                            let bytes = p.to_string().into_bytes();
                            if !is_shift_maximal(&p) || !oracle_mss(&bytes) {
                                unsound.push(p.to_string());
                            }
                        }
                        n2 += 1;
                    }
                }
                if let Some(obs) = observed.get(&(q, s1.clone())) {
                    let longest = obs.iter().map(|w| w.len()).max().unwrap_or(0);
                    let wide = derive_si_candidates(q, &s1, longest).unwrap();
                    let wide: BTreeSet<&Word> = wide.iter().collect();
                    let mut s1rl = s1.as_slice().to_vec();
                    s1rl.extend_from_slice(&b);
                    for s2 in obs {
                        if wide.contains(s2) {
                            continue;
                        }
                        let class = if *s2 == s1 {
                            "equal-to-S1"
                        } else if s1rl.starts_with(s2) {
                            "prefix-of-S1RL^q"
                        } else {
                            "other"
                        };
                        *missing.entry(class).or_default() += 1;
                        if missing_examples.len() < 4 {
                            missing_examples.push(format!("q={q} S1={s1} S2={s2} ({class})"));
                        }
                    }
                }
            }
        }
    }
    let total_observed: usize = observed.values().map(|v| v.len()).sum();
    let mut o = Outcome::new(
        unsound.is_empty() && accepted > 0,
        format!(
            "soundness: {assembled} assembled, {accepted} accepted by the block test, {} rejected by brute force {:?}",
            unsound.len(),
            unsound.iter().take(3).collect::<Vec<_>>()
        ),
    );
    let n_missing: usize = missing.values().sum();
    o.notes.push(format!(
        "  COMPLETENESS-DEVIATION (open question on generator completeness, not gating): {n_missing} of {total_observed} observed (q, S1, S2) triples missing, by class {missing:?}, e.g. {missing_examples:?}"
    ));
    o
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", criterion_1),
        ("construction completeness", criterion_2),
        ("worked factorization regression", criterion_3),
        ("single-group non-primary shape and count", criterion_4),
        ("S-block cardinality formula", criterion_5),
        ("repeated-group non-primary count", criterion_6),
        ("compose/factor round-trip", criterion_7),
        ("parameter order isomorphism", criterion_8),
        ("derived-chunk soundness", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} ({name}): {status} [{:.2?}] {}",
            i + 1,
            start.elapsed(),
            o.detail
        );
        for n in o.notes {
            println!("{n}");
        }
    }
    println!("acceptance: {} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
