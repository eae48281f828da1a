//! The *-composition of sequences, factorization and primality.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::structure::block_decompose;
use crate::symbolic::{count_r, is_shift_maximal, Sequence, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RParity {
    Even,
    Odd,
}

pub fn r_parity(seq: &Sequence) -> RParity {
    if count_r(seq).is_multiple_of(2) {
        RParity::Even
    } else {
        RParity::Odd
    }
}

fn maybe_flip(s: Symbol, parity: RParity) -> Symbol {
    match parity {
        RParity::Even => s,
        RParity::Odd => s.flip(),
    }
}

/// `O_h * O_s = Q y_1 Q y_2 … y_{s-1} Q C` with `Q` the body of `O_h`; the
/// `y_i` are flipped when `O_h` has an odd number of `R`s.
pub fn compose(oh: &Sequence, os: &Sequence) -> Sequence {
    let q = oh.body();
    let parity = r_parity(oh);
    let mut body = Vec::with_capacity(oh.period() * os.period() - 1);
    for &y in os.body() {
        body.extend_from_slice(q);
        body.push(maybe_flip(y, parity));
    }
    body.extend_from_slice(q);
    Sequence::from_body_unchecked(body)
}

fn ensure_mss(p: &Sequence) -> Result<()> {
    if is_shift_maximal(p) && (p.period() == 1 || p.starts_with_r()) {
        Ok(())
    } else {
        Err(Error::NotMss(p.to_string()))
    }
}

/// Tries `|O_h| = h`: `P` must read `Q z_1 Q z_2 … Q C` with `Q` of length `h-1`.
fn split_at_divisor(p: &Sequence, h: usize) -> Option<(Sequence, Sequence)> {
    let n = p.period();
    if h < 2 || h >= n || !n.is_multiple_of(h) {
        return None;
    }
    let q = &p[..h - 1];
    let oh = Sequence::from_body(q).ok()?;
    let parity = r_parity(&oh);
    let s = n / h;
    let mut ys = Vec::with_capacity(s - 1);
    for i in 0..s {
        let chunk = &p[i * h..(i + 1) * h];
        if &chunk[..h - 1] != q {
            return None;
        }
        if i + 1 < s {
            ys.push(maybe_flip(chunk[h - 1], parity));
        }
    }
    let os = Sequence::from_body(&ys).ok()?;
    (is_shift_maximal(&oh) && is_shift_maximal(&os)).then_some((oh, os))
}

/// Every `(O_h, O_s)` pair of MSS factors, by increasing `|O_h|`.
pub fn factorizations(p: &Sequence) -> Result<Vec<(Sequence, Sequence)>> {
    ensure_mss(p)?;
    Ok((2..p.period())
        .filter_map(|h| split_at_divisor(p, h))
        .collect())
}

/// The factorization with the shortest `O_h`, or `None` for a primary sequence.
pub fn factor_once(p: &Sequence) -> Result<Option<(Sequence, Sequence)>> {
    ensure_mss(p)?;
    Ok((2..p.period()).find_map(|h| split_at_divisor(p, h)))
}

pub fn is_primary(p: &Sequence) -> Result<bool> {
    factor_once(p).map(|f| f.is_none())
}

/// Binary factorization down to primary leaves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorTree {
    pub node: Sequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub children: Option<Box<(FactorTree, FactorTree)>>,
}

impl FactorTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    /// Primary leaves, left to right.
    pub fn leaves(&self) -> Vec<&Sequence> {
        match &self.children {
            None => vec![&self.node],
            Some(c) => {
                let mut v = c.0.leaves();
                v.extend(c.1.leaves());
                v
            }
        }
    }

    pub fn depth(&self) -> usize {
        match &self.children {
            None => 0,
            Some(c) => 1 + c.0.depth().max(c.1.depth()),
        }
    }
}

pub fn factor_tree(p: &Sequence) -> Result<FactorTree> {
    let children = match factor_once(p)? {
        None => None,
        Some((oh, os)) => Some(Box::new((factor_tree(&oh)?, factor_tree(&os)?))),
    };
    Ok(FactorTree {
        node: p.clone(),
        children,
    })
}

/// Unit-exponent shape `RL^q (S_r z_1) RL^q (S_r z_2) … RL^q S_r C` whose
/// recovered `O_s` starts `RL`, with `S_r` not ending in `RL^{q-1}`.
/// The `z_i` are read through the parity of `O_h = RL^q S_r C`.
pub fn check_thm8_shape(p: &Sequence) -> bool {
    let Ok(bf) = block_decompose(p) else {
        return false;
    };
    let q = bf.q;
    let r = bf.r();
    if q == 0 || r < 2 || !bf.unit_exponents() {
        return false;
    }
    let sr = &bf.runs[r - 1].1;
    let mut z = Vec::with_capacity(r - 1);
    for (_, s) in &bf.runs[..r - 1] {
        match s.split_last() {
            Some((&last, head)) if head == sr.as_slice() => z.push(last),
            _ => return false,
        }
    }
    let tail_len = q; // RL^{q-1}
    if sr.len() >= tail_len
        && sr[sr.len() - tail_len] == Symbol::R
        && sr[sr.len() - tail_len + 1..].iter().all(|&s| s == Symbol::L)
    {
        return false;
    }
    let parity = if (1 + count_r(sr)).is_multiple_of(2) {
        RParity::Even
    } else {
        RParity::Odd
    };
    let y1 = maybe_flip(z[0], parity);
    let y2 = z.get(1).map(|&s| maybe_flip(s, parity));
    y1 == Symbol::R && y2.is_none_or(|y| y == Symbol::L)
}

/// Shape `RL^q (RL^{q-1}R)^{n_1} (RL^q)^{m_1} … (RL^{q-1}R)^{n_r} (RL^q)^{m_r} RL^{q-1}C`
/// with `n_1, m_1 ≥ 1` and `n_1 ≥ n_i`; returns `(RL^{q-1}C, O_s)`.
pub fn check_thm9_shape(p: &Sequence) -> Result<(Sequence, Sequence)> {
    let mismatch = |why: &str| Error::ShapeMismatch(format!("{}: {why}", p.compact()));
    if !p.starts_with_r() {
        return Err(mismatch("does not start with R"));
    }
    let q = p.leading_l_run();
    if q == 0 {
        return Err(mismatch("no leading L-run"));
    }
    let h = q + 1;
    if !p.period().is_multiple_of(h) || p.period() / h < 4 {
        return Err(mismatch("period is not a multiple of q+1 with at least four chunks"));
    }
    let s = p.period() / h;
    let mut z = Vec::with_capacity(s - 1);
    for i in 0..s {
        let chunk = &p[i * h..(i + 1) * h];
        if chunk[0] != Symbol::R || chunk[1..h - 1].iter().any(|&c| c != Symbol::L) {
            return Err(mismatch("chunk is not RL^{q-1} followed by one symbol"));
        }
        if i + 1 < s {
            z.push(chunk[h - 1]);
        }
    }
    if z[0] != Symbol::L {
        return Err(mismatch("first chunk is not RL^q"));
    }
    // Run lengths of z_2…: R^{n_1} L^{m_1} R^{n_2} …
    let mut runs: Vec<(Symbol, usize)> = Vec::new();
    for &c in &z[1..] {
        match runs.last_mut() {
            Some((sym, n)) if *sym == c => *n += 1,
            _ => runs.push((c, 1)),
        }
    }
    if runs.len() < 2 || runs[0].0 != Symbol::R {
        return Err(mismatch("needs RL^{q-1}R groups followed by RL^q groups"));
    }
    let n1 = runs[0].1;
    if let Some(&(_, ni)) = runs.iter().filter(|(s, _)| *s == Symbol::R).find(|(_, n)| *n > n1) {
        return Err(mismatch(&format!("exponent {ni} exceeds n_1 = {n1}")));
    }
    let oh = Sequence::from_body(&p[..q])?;
    let os = Sequence::from_body(&z.iter().map(|c| c.flip()).collect::<Vec<_>>())?;
    Ok((oh, os))
}
