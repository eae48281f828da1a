//! Built-in cross-checks printed as a pass/fail matrix.

use std::time::Instant;

use clap::ValueEnum;
use msskit::composition::{compose, factor_tree, factorizations};
use msskit::counting::{
    card_s, count_nonprimary_repeated, count_nonprimary_single_block, enumerated_card_s,
    enumerated_nonprimary_repeated, enumerated_nonprimary_single_block,
};
use msskit::generators::{enumerate_mss_bruteforce, enumerate_mss_structured};
use msskit::locator::{verify_order, DEFAULT_TOL};
use msskit::{
    is_mss_structured, is_shift_maximal, is_shift_maximal_lambda, Error, Sequence, Symbol,
};
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::Failure;

const MAX_PMAX: usize = 20;
const MAX_ORDER_PMAX: usize = 10;
const MAX_COMPOSE_PERIOD: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Construction,
    Counting,
    Composition,
    Locator,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Construction => "construction",
            Suite::Counting => "counting",
            Suite::Composition => "composition",
            Suite::Locator => "locator",
        }
    }
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, failures: &[String], detail: String) -> Check {
    let passed = failures.is_empty();
    let detail = if passed {
        detail
    } else {
        let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
        format!("{detail}; {} failures: {}", failures.len(), shown.join(", "))
    };
    Check {
        name,
        passed,
        detail,
    }
}

/// Every admissible sequence of period `p`.
fn admissible(p: usize) -> Vec<Sequence> {
    let n = p - 1;
    (0u64..1 << n)
        .map(|bits| {
            let body: Vec<Symbol> = (0..n)
                .map(|i| if bits >> (n - 1 - i) & 1 == 1 { Symbol::R } else { Symbol::L })
                .collect();
            Sequence::from_body(&body).expect("admissible body")
        })
        .collect()
}

fn oracle(pmax: usize) -> Result<Vec<Check>, Error> {
    let pmax = pmax.min(MAX_PMAX);
    let mut bad = Vec::new();
    let mut total = 0;
    for p in 1..=pmax {
        let all = admissible(p);
        total += all.len();
        bad.extend(all.par_iter().filter_map(|s| {
            let direct = is_shift_maximal(s);
            let ok = is_mss_structured(s).is_mss == direct && is_shift_maximal_lambda(s) == direct;
            (!ok).then(|| s.to_string())
        }).collect::<Vec<_>>());
    }
    Ok(vec![check(
        "structured = direct = lambda",
        &bad,
        format!("{total} sequences, p <= {pmax}"),
    )])
}

fn construction(pmax: usize) -> Result<Vec<Check>, Error> {
    let mut bad = Vec::new();
    let mut total = 0;
    for p in 2..=pmax {
        let a = enumerate_mss_structured(p)?;
        let b = enumerate_mss_bruteforce(p)?;
        total += b.len();
        if a.sequences != b.sequences {
            bad.push(format!("p={p} ({} vs {})", a.len(), b.len()));
        }
    }
    Ok(vec![check(
        "structured = brute force",
        &bad,
        format!("{total} sequences, 2 <= p <= {pmax}"),
    )])
}

fn counting(pmax: usize) -> Result<Vec<Check>, Error> {
    let mut bad = Vec::new();
    for m in 0..=14 {
        for q in 0..=6 {
            if card_s(m, q) != BigUint::from(enumerated_card_s(m, q)) {
                bad.push(format!("m={m} qcap={q}"));
            }
        }
    }
    let sblocks = check("S-block sizes", &bad, "m <= 14, qcap <= 6".into());

    let mut bad = Vec::new();
    for p in 2..=pmax {
        let f = count_nonprimary_single_block(p)?;
        let e = enumerated_nonprimary_single_block(p)?.len() as u64;
        if f != e {
            bad.push(format!("p={p} ({f} vs {e})"));
        }
    }
    let single = check("single-block non-primary", &bad, format!("2 <= p <= {pmax}"));

    let mut bad = Vec::new();
    for p in 2..=pmax {
        let f = count_nonprimary_repeated(p)?;
        let e = BigUint::from(enumerated_nonprimary_repeated(p)?.len());
        if f != e {
            bad.push(format!("p={p} ({f} vs {e})"));
        }
    }
    let repeated = check("repeated-block non-primary", &bad, format!("2 <= p <= {pmax}"));
    Ok(vec![sblocks, single, repeated])
}

fn composition(pmax: usize) -> Result<Vec<Check>, Error> {
    let mut mss = Vec::new();
    for p in 2..=pmax.min(MAX_COMPOSE_PERIOD / 2) {
        mss.extend(enumerate_mss_bruteforce(p)?.sequences);
    }
    let mut bad = Vec::new();
    let mut pairs = 0;
    for a in &mss {
        for b in &mss {
            if a.period() * b.period() > MAX_COMPOSE_PERIOD {
                continue;
            }
            pairs += 1;
            let c = compose(a, b);
            if !is_shift_maximal(&c) {
                bad.push(format!("{a}*{b} not MSS"));
            } else if !factorizations(&c)?.contains(&(a.clone(), b.clone())) {
                bad.push(format!("{a}*{b} not recovered"));
            }
        }
    }
    let closure = check("compose is MSS and factors back", &bad, format!("{pairs} pairs"));

    let mut bad = Vec::new();
    let mut total = 0;
    for p in 2..=pmax {
        for s in enumerate_mss_bruteforce(p)?.sequences {
            total += 1;
            let t = factor_tree(&s)?;
            let product: usize = t.leaves().iter().map(|l| l.period()).product();
            if product != p {
                bad.push(s.to_string());
            }
        }
    }
    let trees = check(
        "factor-tree leaf periods multiply out",
        &bad,
        format!("{total} sequences, 2 <= p <= {pmax}"),
    );
    Ok(vec![closure, trees])
}

fn locator(pmax: usize) -> Result<Vec<Check>, Error> {
    let pmax = pmax.clamp(2, MAX_ORDER_PMAX);
    let rep = verify_order(pmax, DEFAULT_TOL)?;
    let bad = if rep.passed(DEFAULT_TOL) {
        Vec::new()
    } else {
        vec![format!("ordered={} max residual {:.2e}", rep.ordered, rep.max_residual)]
    };
    Ok(vec![check(
        "parameter order = sequence order",
        &bad,
        format!(
            "{} sequences, p <= {pmax}, min gap {:.2e}",
            rep.entries.len(),
            rep.min_gap
        ),
    )])
}

pub fn run(pmax: usize, only: Option<Suite>) -> Result<(), Failure> {
    if !(2..=MAX_PMAX).contains(&pmax) {
        return Err(Failure::Usage(format!("--pmax must lie in 2..={MAX_PMAX}")));
    }
    let suites = match only {
        Some(s) => vec![s],
        None => Suite::value_variants().to_vec(),
    };
    let mut failed = 0;
    let mut total = 0;
    for suite in suites {
        let start = Instant::now();
        let checks = match suite {
            Suite::Oracle => oracle(pmax),
            Suite::Construction => construction(pmax),
            Suite::Counting => counting(pmax),
            Suite::Composition => composition(pmax),
            Suite::Locator => locator(pmax),
        }?;
        let secs = start.elapsed().as_secs_f64();
        for c in checks {
            total += 1;
            if !c.passed {
                failed += 1;
            }
            println!(
                "{:<12} {:<40} {}  {} [{secs:.2}s]",
                suite.name(),
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
    }
    println!("selftest: {} of {total} checks passed", total - failed);
    if failed > 0 {
        Err(Failure::Checked)
    } else {
        Ok(())
    }
}
