//! Closed-form counts and their enumerated counterparts.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::composition::{factor_once, factorizations};
use crate::error::{Error, Result};
use crate::generators::{enumerate_mss_bruteforce, enumerate_s, SBlockSpec};
use crate::structure::block_decompose;
use crate::symbolic::Sequence;

/// All divisors of `p`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorSet {
    pub p: usize,
    pub divisors: Vec<usize>,
}

impl DivisorSet {
    pub fn of(p: usize) -> Self {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1;
        while d * d <= p {
            if p.is_multiple_of(d) {
                small.push(d);
                if d * d != p {
                    large.push(p / d);
                }
            }
            d += 1;
        }
        large.reverse();
        small.extend(large);
        DivisorSet { p, divisors: small }
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Divisors strictly between 1 and `p`.
    pub fn proper(&self) -> Vec<usize> {
        self.divisors
            .iter()
            .copied()
            .filter(|&d| d > 1 && d < self.p)
            .collect()
    }
}

pub fn proper_divisors(p: usize) -> Vec<usize> {
    DivisorSet::of(p).proper()
}

fn check_p(p: usize, min: usize) -> Result<()> {
    if p < min {
        return Err(Error::InvalidArgument(format!("period {p} below {min}")));
    }
    Ok(())
}

/// Non-primary sequences among the single-group shape `RL^q S C`: `|D_p| - 2`.
pub fn count_nonprimary_single_block(p: usize) -> Result<u64> {
    check_p(p, 2)?;
    Ok(DivisorSet::of(p).len() as u64 - 2)
}

/// `C(n, k)`, zero whenever `n < 0`, `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Words of length `m` starting with `R` with at most `qm1` consecutive `L`s,
/// by inclusion-exclusion over the `k+1` L-gaps around the `k` further `R`s.
pub fn card_s(m: usize, qm1: usize) -> BigUint {
    let q = qm1 as i64 + 1;
    let m = m as i64;
    let mut total = BigInt::zero();
    for k in 0..m {
        for r in 0..=k + 1 {
            let term = BigInt::from(binomial(k + 1, r) * binomial(m - 1 - r * q, k));
            if r % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    debug_assert!(!total.is_negative());
    total.to_biguint().unwrap_or_default()
}

/// `card_s` with an empty chunk counted once at `m = 0`.
pub fn card_s_with_empty(m: usize, qm1: usize) -> BigUint {
    if m == 0 {
        BigUint::one()
    } else {
        card_s(m, qm1)
    }
}

/// `Σ_{d} Σ_{q=1}^{d-2} |S(d-q-2, q-1)|` over proper divisors `d` of `p`,
/// counting the empty chunk once.
pub fn count_nonprimary_repeated(p: usize) -> Result<BigUint> {
    check_p(p, 2)?;
    let mut total = BigUint::zero();
    for d in proper_divisors(p) {
        for q in 1..d.saturating_sub(1) {
            total += card_s_with_empty(d - q - 2, q - 1);
        }
    }
    Ok(total)
}

fn serialize_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(n) => s.serialize_u64(n),
        None => s.collect_str(v),
    }
}

fn serialize_big_opt<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_big(v, s),
        None => s.serialize_none(),
    }
}

/// A closed-form value with an optional enumerated cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub p: usize,
    #[serde(serialize_with = "serialize_big")]
    pub formula_value: BigUint,
    #[serde(serialize_with = "serialize_big_opt")]
    pub enumerated_value: Option<BigUint>,
}

impl CountReport {
    pub fn new(p: usize, formula_value: BigUint, enumerated_value: Option<BigUint>) -> Self {
        CountReport {
            p,
            formula_value,
            enumerated_value,
        }
    }

    /// False when an enumerated value is present and differs.
    pub fn agrees(&self) -> bool {
        self.enumerated_value
            .as_ref()
            .is_none_or(|e| *e == self.formula_value)
    }
}

/// Brute-force size of `S(m, qm1)`.
pub fn enumerated_card_s(m: usize, qm1: usize) -> usize {
    enumerate_s(SBlockSpec { m, qcap: qm1 }).len()
}

/// Period-`p` MSS-sequences with a single `RL^q` group (`RL^q S C`).
pub fn single_block_sequences(p: usize) -> Result<Vec<Sequence>> {
    Ok(enumerate_mss_bruteforce(p)?
        .sequences
        .into_iter()
        .filter(|s| block_decompose(s).is_ok_and(|bf| bf.r() == 1 && bf.runs[0].0 == 1))
        .collect())
}

pub fn enumerated_nonprimary_single_block(p: usize) -> Result<Vec<Sequence>> {
    let mut out = Vec::new();
    for s in single_block_sequences(p)? {
        if factor_once(&s)?.is_some() {
            out.push(s);
        }
    }
    Ok(out)
}

/// Non-primary period-`p` MSS-sequences with all block exponents equal to
/// one that factor through some `O_h = RL^q S C` with a single group and `q ≥ 1`.
pub fn enumerated_nonprimary_repeated(p: usize) -> Result<Vec<Sequence>> {
    let mut out = Vec::new();
    for s in enumerate_mss_bruteforce(p)?.sequences {
        let Ok(bf) = block_decompose(&s) else { continue };
        if !bf.unit_exponents() {
            continue;
        }
        let single_group_factor = factorizations(&s)?.iter().any(|(oh, _)| {
            block_decompose(oh).is_ok_and(|h| h.q >= 1 && h.r() == 1 && h.runs[0].0 == 1)
        });
        if single_group_factor {
            out.push(s);
        }
    }
    Ok(out)
}
