//! Command implementations and their text, JSON and CSV renderings.

use std::io::Write;

use msskit::composition::{compose, factor_once, factor_tree, is_primary, FactorTree};
use msskit::counting::{
    card_s, count_nonprimary_repeated, count_nonprimary_single_block, enumerated_card_s,
    enumerated_nonprimary_repeated, enumerated_nonprimary_single_block,
};
use msskit::generators::{enumerate_mss_bruteforce, enumerate_mss_structured};
use msskit::locator::{locate, verify_order};
use msskit::structure::block_decompose;
use msskit::{is_mss_structured, is_shift_maximal, Sequence};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::Value;

use crate::{CountKind, Failure, Format};

/// Largest period the enumerated cross-checks of `count --verify` accept.
const MAX_VERIFY_PERIOD: usize = 24;
const MAX_VERIFY_M: usize = 24;
const MAX_ORDER_PERIOD: usize = 16;

pub struct Printer {
    expand: bool,
}

fn json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string(v).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{s}");
    Ok(())
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(std::io::stdout().lock());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    w.flush().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(())
}

fn no_csv(verb: &str) -> Failure {
    Failure::Usage(format!("csv output is not available for {verb}"))
}

fn big_value(v: &BigUint) -> Value {
    match u64::try_from(v) {
        Ok(n) => Value::from(n),
        Err(_) => Value::from(v.to_string()),
    }
}

#[derive(Serialize)]
struct EnumRow {
    index: usize,
    sequence: String,
    q: usize,
    block_form: String,
    is_primary: bool,
}

#[derive(Serialize)]
struct EnumerateOut<'a> {
    period: usize,
    method: &'a str,
    count: usize,
    sequences: Vec<EnumRow>,
}

#[derive(Serialize)]
struct CheckOut {
    sequence: String,
    is_mss: bool,
    failing_shift: Option<usize>,
    failing_rule: Option<String>,
}

#[derive(Serialize)]
struct ComposeOut {
    sequence: String,
    primary: Option<bool>,
    factors: [String; 2],
}

#[derive(Serialize)]
struct FactorOut {
    sequence: String,
    primary: bool,
    factors: Option<[String; 2]>,
}

#[derive(Serialize)]
struct TreeNode {
    sequence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    children: Option<Box<[TreeNode; 2]>>,
}

#[derive(Serialize)]
struct TreeOut {
    sequence: String,
    primary: bool,
    tree: TreeNode,
}

#[derive(Serialize)]
struct CountOut {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    period: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qcap: Option<usize>,
    formula_value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    enumerated_value: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agrees: Option<bool>,
}

#[derive(Serialize)]
struct LocateOut {
    sequence: String,
    r_star: f64,
    r_star_lo: f64,
    residual: f64,
    iterations: usize,
    dead_band_hits: usize,
}

#[derive(Serialize)]
struct OrderRow {
    index: usize,
    sequence: String,
    r_star: f64,
    residual: f64,
}

#[derive(Serialize)]
struct OrderOut {
    pmax: usize,
    count: usize,
    passed: bool,
    ordered: bool,
    min_gap: f64,
    max_residual: f64,
    max_abs_multiplier: f64,
    dead_band_hits: usize,
    entries: Vec<OrderRow>,
}

impl Printer {
    pub fn new(expand: bool) -> Self {
        Printer { expand }
    }

    fn show(&self, s: &Sequence) -> String {
        if self.expand {
            s.to_string()
        } else {
            s.compact()
        }
    }

    fn tree(&self, t: &FactorTree) -> TreeNode {
        TreeNode {
            sequence: self.show(&t.node),
            children: t
                .children
                .as_ref()
                .map(|c| Box::new([self.tree(&c.0), self.tree(&c.1)])),
        }
    }

    fn print_tree(&self, t: &FactorTree, depth: usize, out: &mut impl Write) {
        let label = if t.is_leaf() { "primary" } else { "*" };
        let _ = writeln!(out, "{}{} {label}", "  ".repeat(depth), self.show(&t.node));
        if let Some(c) = &t.children {
            self.print_tree(&c.0, depth + 1, out);
            self.print_tree(&c.1, depth + 1, out);
        }
    }

    pub fn enumerate(&self, period: usize, structured: bool, format: Format) -> Result<(), Failure> {
        let e = if structured {
            enumerate_mss_structured(period)?
        } else {
            enumerate_mss_bruteforce(period)?
        };
        let mut rows = Vec::with_capacity(e.len());
        for (i, s) in e.sequences.iter().enumerate() {
            let bf = block_decompose(s)?;
            rows.push(EnumRow {
                index: i + 1,
                sequence: self.show(s),
                q: bf.q,
                block_form: bf.to_string(),
                is_primary: factor_once(s)?.is_none(),
            });
        }
        match format {
            Format::Text => {
                let mut out = std::io::stdout().lock();
                for r in &rows {
                    let kind = if r.is_primary { "primary" } else { "non-primary" };
                    let _ = writeln!(out, "{}\t{}\t{}\t{kind}", r.index, r.sequence, r.block_form);
                }
                Ok(())
            }
            Format::Json => json(&EnumerateOut {
                period,
                method: if structured { "structured" } else { "bruteforce" },
                count: rows.len(),
                sequences: rows,
            }),
            Format::Csv => csv_rows(&rows),
        }
    }

    pub fn check(&self, s: &Sequence, format: Format) -> Result<(), Failure> {
        let v = is_mss_structured(s);
        let out = CheckOut {
            sequence: self.show(s),
            is_mss: v.is_mss,
            failing_shift: v.failing_shift,
            failing_rule: v.failing_rule.map(|r| r.to_string()),
        };
        match format {
            Format::Json => json(&out),
            Format::Csv => csv_rows(&[out]),
            Format::Text => {
                match (out.failing_shift, &out.failing_rule) {
                    (Some(k), Some(rule)) => {
                        println!("{}: not MSS (shift {k} exceeds it, rule {rule})", out.sequence)
                    }
                    _ => println!("{}: MSS", out.sequence),
                }
                Ok(())
            }
        }
    }

    pub fn compose(&self, a: &Sequence, b: &Sequence, format: Format) -> Result<(), Failure> {
        let c = compose(a, b);
        let primary = if is_shift_maximal(&c) && c.starts_with_r() {
            Some(is_primary(&c)?)
        } else {
            None
        };
        let out = ComposeOut {
            sequence: self.show(&c),
            primary,
            factors: [self.show(a), self.show(b)],
        };
        match format {
            Format::Json => json(&out),
            Format::Text => {
                println!("{} * {} = {}", out.factors[0], out.factors[1], out.sequence);
                Ok(())
            }
            Format::Csv => Err(no_csv("compose")),
        }
    }

    pub fn factor(&self, s: &Sequence, tree: bool, format: Format) -> Result<(), Failure> {
        if tree {
            let t = factor_tree(s)?;
            match format {
                Format::Json => json(&TreeOut {
                    sequence: self.show(s),
                    primary: t.is_leaf(),
                    tree: self.tree(&t),
                }),
                Format::Text => {
                    self.print_tree(&t, 0, &mut std::io::stdout().lock());
                    Ok(())
                }
                Format::Csv => Err(no_csv("factor")),
            }
        } else {
            let f = factor_once(s)?;
            let out = FactorOut {
                sequence: self.show(s),
                primary: f.is_none(),
                factors: f.map(|(a, b)| [self.show(&a), self.show(&b)]),
            };
            match format {
                Format::Json => json(&out),
                Format::Text => {
                    match &out.factors {
                        Some([a, b]) => println!("{} = {a} * {b}", out.sequence),
                        None => println!("{} is primary", out.sequence),
                    }
                    Ok(())
                }
                Format::Csv => Err(no_csv("factor")),
            }
        }
    }

    pub fn count(
        &self,
        period: Option<usize>,
        kind: CountKind,
        m: Option<usize>,
        qcap: Option<usize>,
        verify: bool,
        format: Format,
    ) -> Result<(), Failure> {
        let out = match kind {
            CountKind::Sblocks => {
                let (Some(m), Some(qcap)) = (m, qcap) else {
                    return Err(Failure::Usage("--kind sblocks needs --m and --qcap".into()));
                };
                if verify && m > MAX_VERIFY_M {
                    return Err(Failure::Usage(format!("--verify supports m <= {MAX_VERIFY_M}")));
                }
                let f = card_s(m, qcap);
                let e = verify.then(|| BigUint::from(enumerated_card_s(m, qcap)));
                CountOut {
                    kind: "sblocks",
                    period: None,
                    m: Some(m),
                    qcap: Some(qcap),
                    formula_value: big_value(&f),
                    agrees: e.as_ref().map(|e| *e == f),
                    enumerated_value: e.as_ref().map(big_value),
                }
            }
            CountKind::Single | CountKind::Repeated => {
                let Some(p) = period else {
                    return Err(Failure::Usage("--period is required".into()));
                };
                if verify && p > MAX_VERIFY_PERIOD {
                    return Err(Failure::Usage(format!(
                        "--verify supports periods up to {MAX_VERIFY_PERIOD}"
                    )));
                }
                let single = kind == CountKind::Single;
                let f = if single {
                    BigUint::from(count_nonprimary_single_block(p)?)
                } else {
                    count_nonprimary_repeated(p)?
                };
                let e = if !verify {
                    None
                } else if single {
                    Some(BigUint::from(enumerated_nonprimary_single_block(p)?.len()))
                } else {
                    Some(BigUint::from(enumerated_nonprimary_repeated(p)?.len()))
                };
                CountOut {
                    kind: if single { "single" } else { "repeated" },
                    period: Some(p),
                    m: None,
                    qcap: None,
                    formula_value: big_value(&f),
                    agrees: e.as_ref().map(|e| *e == f),
                    enumerated_value: e.as_ref().map(big_value),
                }
            }
        };
        match format {
            Format::Json => json(&out)?,
            Format::Text => {
                let mut line = format!("{} formula={}", out.kind, out.formula_value);
                if let Some(p) = out.period {
                    line = format!("p={p} {line}");
                }
                if let (Some(m), Some(q)) = (out.m, out.qcap) {
                    line = format!("m={m} qcap={q} {line}");
                }
                if let Some(e) = &out.enumerated_value {
                    line.push_str(&format!(" enumerated={e}"));
                }
                match out.agrees {
                    Some(true) => line.push_str(" agree"),
                    Some(false) => line.push_str(" MISMATCH"),
                    None => {}
                }
                println!("{line}");
            }
            Format::Csv => return Err(no_csv("count")),
        }
        if out.agrees == Some(false) {
            eprintln!("count mismatch: formula and enumeration disagree");
            return Err(Failure::Checked);
        }
        Ok(())
    }

    pub fn locate(&self, s: &Sequence, tol: f64, format: Format) -> Result<(), Failure> {
        let l = locate(s, tol)?;
        let out = LocateOut {
            sequence: self.show(&l.sequence),
            r_star: l.r_star,
            r_star_lo: l.r_star_lo,
            residual: l.residual,
            iterations: l.iterations,
            dead_band_hits: l.dead_band_hits,
        };
        match format {
            Format::Json => json(&out),
            Format::Csv => csv_rows(&[out]),
            Format::Text => {
                println!(
                    "{} r*={:.15} residual={:.3e} iterations={}",
                    out.sequence, out.r_star, out.residual, out.iterations
                );
                Ok(())
            }
        }
    }

    pub fn verify_order(&self, pmax: usize, tol: f64, format: Format) -> Result<(), Failure> {
        if !(2..=MAX_ORDER_PERIOD).contains(&pmax) {
            return Err(Failure::Usage(format!("--pmax must lie in 2..={MAX_ORDER_PERIOD}")));
        }
        let rep = verify_order(pmax, tol)?;
        let passed = rep.passed(tol);
        let rows: Vec<OrderRow> = rep
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| OrderRow {
                index: i + 1,
                sequence: self.show(&e.sequence),
                r_star: e.r_star,
                residual: e.residual,
            })
            .collect();
        match format {
            Format::Json => json(&OrderOut {
                pmax,
                count: rows.len(),
                passed,
                ordered: rep.ordered,
                min_gap: rep.min_gap,
                max_residual: rep.max_residual,
                max_abs_multiplier: rep.max_abs_multiplier,
                dead_band_hits: rep.dead_band_hits,
                entries: rows,
            })?,
            Format::Csv => csv_rows(&rows)?,
            Format::Text => {
                let mut out = std::io::stdout().lock();
                for r in &rows {
                    let _ = writeln!(
                        out,
                        "{:>5}  {:<20} {:.15}  {:.2e}",
                        r.index, r.sequence, r.r_star, r.residual
                    );
                }
                let _ = writeln!(
                    out,
                    "order {}: {} sequences, ordered={}, min gap {:.3e}, max residual {:.3e}, dead-band hits {}",
                    if passed { "PASS" } else { "FAIL" },
                    rows.len(),
                    rep.ordered,
                    rep.min_gap,
                    rep.max_residual,
                    rep.dead_band_hits
                );
            }
        }
        if passed {
            Ok(())
        } else {
            Err(Failure::Checked)
        }
    }
}
