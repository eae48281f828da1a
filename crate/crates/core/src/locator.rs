//! Superstable parameters of the logistic family `f_r(x) = r x (1 - x)`.
//!
//! Orbits are iterated in double-double arithmetic: at plain `f64` resolution
//! the closest representable parameter for some period-7 orbits still leaves
//! `|f^p(1/2) - 1/2|` above `1e-13`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::generators::enumerate_mss_bruteforce;
use crate::symbolic::{is_shift_maximal, parity_lex_cmp, Sequence, Symbol, Word};

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-13;
pub const MAX_ITERATIONS: usize = 200;
pub const BRACKET: (f64, f64) = (3.0, 4.0);

/// A logistic parameter held to double-double precision.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MapParam(TwoFloat);

impl MapParam {
    pub fn new(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 4.0) {
            return Err(Error::InvalidArgument(format!("parameter {r} outside (0, 4]")));
        }
        Ok(MapParam(TwoFloat::from(r)))
    }

    fn from_two(r: TwoFloat) -> Self {
        MapParam(r)
    }

    pub fn value(&self) -> f64 {
        self.0.hi() + self.0.lo()
    }

    pub fn hi(&self) -> f64 {
        self.0.hi()
    }

    pub fn lo(&self) -> f64 {
        self.0.lo()
    }

    fn apply(&self, x: TwoFloat) -> TwoFloat {
        self.0 * x * (1.0 - x)
    }

    /// `f_r(1/2), f_r^2(1/2), …` for `steps` steps.
    fn critical_orbit(&self, steps: usize) -> Vec<TwoFloat> {
        let mut x = TwoFloat::from(0.5);
        (0..steps)
            .map(|_| {
                x = self.apply(x);
                x
            })
            .collect()
    }
}

fn classify(x: TwoFloat, eps: f64) -> Symbol {
    let d = f64::from(x - 0.5);
    if d.abs() <= eps {
        Symbol::C
    } else if d > 0.0 {
        Symbol::R
    } else {
        Symbol::L
    }
}

/// Symbols of `f_r^i(1/2)`, `i = 1..=steps`, with a dead band of width `eps`
/// around `1/2` read as `C`.
pub fn itinerary(r: MapParam, steps: usize, eps: f64) -> Word {
    Word::from_symbols(
        r.critical_orbit(steps)
            .into_iter()
            .map(|x| classify(x, eps))
            .collect(),
    )
}

/// `|f_r^p(1/2) - 1/2|`.
pub fn residual(r: MapParam, p: usize) -> f64 {
    let x = *r.critical_orbit(p).last().expect("p >= 1");
    f64::from(x - 0.5).abs()
}

/// Multiplier `Π_{i=1}^{p} f_r'(x_i)` of the cycle through `x_p`.
pub fn multiplier(r: MapParam, p: usize) -> f64 {
    let prod = r
        .critical_orbit(p)
        .into_iter()
        .fold(TwoFloat::from(1.0), |acc, x| acc * (r.0 * (1.0 - 2.0 * x)));
    f64::from(prod)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocatedSequence {
    pub sequence: Sequence,
    /// Parameter, high word.
    pub r_star: f64,
    /// Parameter, low word (`r* = r_star + r_star_lo`).
    pub r_star_lo: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Orbits that hit the dead band before the last step during the search.
    pub dead_band_hits: usize,
}

impl LocatedSequence {
    pub fn param(&self) -> MapParam {
        MapParam::from_two(TwoFloat::new_add(self.r_star, self.r_star_lo))
    }
}

/// Where the itinerary at `r` stands relative to the target.
enum Probe {
    /// Prefix matches; `sign` is the last step's raw comparison, plus `|x_p - 1/2|`.
    Matched(Ordering, f64),
    Differs(Ordering),
    DeadBand,
}

fn probe(r: MapParam, seq: &Sequence, eps: f64) -> Probe {
    let p = seq.period();
    let orbit = r.critical_orbit(p);
    let mut odd = false;
    for (i, &x) in orbit[..p - 1].iter().enumerate() {
        let s = classify(x, eps);
        if s == Symbol::C {
            return Probe::DeadBand;
        }
        if s != seq[i] {
            let o = s.cmp(&seq[i]);
            return Probe::Differs(if odd { o.reverse() } else { o });
        }
        if s == Symbol::R {
            odd = !odd;
        }
    }
    let d = orbit[p - 1] - 0.5;
    let dv = f64::from(d);
    let raw = if dv > 0.0 {
        Ordering::Greater
    } else if dv < 0.0 {
        Ordering::Less
    } else {
        Ordering::Equal
    };
    Probe::Matched(if odd { raw.reverse() } else { raw }, dv.abs())
}

/// Bisection on `[3, 4]` driven by the parity-lex position of the itinerary
/// relative to `seq`. `C` alone maps to `r = 2`.
pub fn locate(seq: &Sequence, tol: f64) -> Result<LocatedSequence> {
    locate_with(seq, tol, DEFAULT_EPS)
}

pub fn locate_with(seq: &Sequence, tol: f64, eps: f64) -> Result<LocatedSequence> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    if seq.period() == 1 {
        return Ok(LocatedSequence {
            sequence: seq.clone(),
            r_star: 2.0,
            r_star_lo: 0.0,
            residual: 0.0,
            iterations: 0,
            dead_band_hits: 0,
        });
    }
    if !seq.starts_with_r() || !is_shift_maximal(seq) {
        return Err(Error::NotMss(seq.to_string()));
    }
    let mut lo = TwoFloat::from(BRACKET.0);
    let mut hi = TwoFloat::from(BRACKET.1);
    let mut best: Option<(TwoFloat, f64)> = None;
    let mut dead_band_hits = 0;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = (lo + hi) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        match probe(MapParam::from_two(mid), seq, eps) {
            Probe::DeadBand => {
                dead_band_hits += 1;
                lo = mid;
            }
            Probe::Differs(Ordering::Greater) => hi = mid,
            Probe::Differs(_) => lo = mid,
            Probe::Matched(o, res) => {
                if best.is_none_or(|(_, b)| res < b) {
                    best = Some((mid, res));
                }
                match o {
                    Ordering::Greater => hi = mid,
                    Ordering::Less => lo = mid,
                    Ordering::Equal => break,
                }
                if res < tol {
                    break;
                }
            }
        }
    }
    match best {
        Some((r, res)) if res < tol => Ok(LocatedSequence {
            sequence: seq.clone(),
            r_star: r.hi(),
            r_star_lo: r.lo(),
            residual: res,
            iterations,
            dead_band_hits,
        }),
        _ => Err(Error::NotFound {
            sequence: seq.to_string(),
            iterations,
            residual: best.map_or(f64::INFINITY, |(_, b)| b),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderReport {
    pub pmax: usize,
    /// Located sequences in increasing parity-lex order.
    pub entries: Vec<LocatedSequence>,
    /// Parameters strictly increase along `entries`.
    pub ordered: bool,
    pub min_gap: f64,
    pub max_residual: f64,
    pub max_abs_multiplier: f64,
    pub dead_band_hits: usize,
}

impl OrderReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.ordered && self.max_residual < tol
    }
}

/// Locates every MSS-sequence of period `2..=pmax` and checks that parameter
/// order matches parity-lex order.
pub fn verify_order(pmax: usize, tol: f64) -> Result<OrderReport> {
    if pmax < 2 {
        return Err(Error::InvalidArgument(format!("pmax {pmax} below 2")));
    }
    let mut all = Vec::new();
    for p in 2..=pmax {
        all.extend(enumerate_mss_bruteforce(p)?.sequences);
    }
    all.sort_by(|a, b| parity_lex_cmp(a, b));
    let entries = all
        .par_iter()
        .map(|s| locate(s, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut ordered = true;
    let mut min_gap = f64::INFINITY;
    for w in entries.windows(2) {
        let gap = (w[1].param().0 - w[0].param().0).hi();
        ordered &= gap > 0.0;
        min_gap = min_gap.min(gap);
    }
    let max_residual = entries.iter().map(|e| e.residual).fold(0.0, f64::max);
    let max_abs_multiplier = entries
        .iter()
        .map(|e| multiplier(e.param(), e.sequence.period()).abs())
        .fold(0.0, f64::max);
    let dead_band_hits = entries.iter().map(|e| e.dead_band_hits).sum();
    Ok(OrderReport {
        pmax,
        entries,
        ordered,
        min_gap,
        max_residual,
        max_abs_multiplier,
        dead_band_hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> Sequence {
        s.parse().unwrap()
    }

    #[test]
    fn itinerary_examples() {
        let two = MapParam::new(2.0).unwrap();
        assert_eq!(itinerary(two, 1, 1e-12).to_string(), "C");
        let four = MapParam::new(4.0).unwrap();
        assert_eq!(itinerary(four, 2, 1e-12).to_string(), "RL");
        assert!(MapParam::new(4.5).is_err());
        assert!(MapParam::new(0.0).is_err());
    }

    #[test]
    fn period_two_closed_form() {
        let l = locate(&seq("RC"), DEFAULT_TOL).unwrap();
        assert!((l.r_star - (1.0 + 5f64.sqrt())).abs() < 1e-10);
        assert!(l.residual < DEFAULT_TOL);
    }

    #[test]
    fn period_three() {
        let l = locate(&seq("RLC"), DEFAULT_TOL).unwrap();
        assert!(l.r_star > 3.8318 && l.r_star < 3.8319, "{}", l.r_star);
        let steps = itinerary(l.param(), 3, DEFAULT_EPS);
        assert_eq!(steps.to_string(), "RLC");
    }

    #[test]
    fn degenerate_and_invalid() {
        assert_eq!(locate(&seq("C"), DEFAULT_TOL).unwrap().r_star, 2.0);
        assert!(matches!(locate(&seq("RLRLC"), DEFAULT_TOL), Err(Error::NotMss(_))));
        assert!(locate(&seq("RC"), 0.0).is_err());
        // A dead band covering the whole interval never lets a prefix match.
        assert!(matches!(
            locate_with(&seq("RLC"), DEFAULT_TOL, 0.6),
            Err(Error::NotFound { .. })
        ));
    }

    #[test]
    fn multiplier_vanishes() {
        let l = locate(&seq("RLLRC"), DEFAULT_TOL).unwrap();
        assert!(multiplier(l.param(), 5).abs() < 1e-6);
    }

    #[test]
    fn small_order() {
        let rep = verify_order(4, DEFAULT_TOL).unwrap();
        let names: Vec<String> = rep.entries.iter().map(|e| e.sequence.to_string()).collect();
        assert_eq!(names, vec!["RC", "RLRC", "RLC", "RLLC"]);
        assert!(rep.passed(DEFAULT_TOL));
        assert!(verify_order(2, DEFAULT_TOL).unwrap().passed(DEFAULT_TOL));
    }
}
