//! Exact canonical labeling of finite posets.
//!
//! Colour refinement splits elements by the colours of their strict down-
//! and up-sets; remaining ties are broken by individualizing each candidate
//! of the first non-singleton cell in turn. The canonical encoding is the
//! lexicographically least `leq` bit matrix over all leaves. Candidates that
//! are twins (incomparable, with identical relations to everything else)
//! are interchangeable by an automorphism, so only one per twin class is
//! tried.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{FinPoset, MonotoneMap};
use crate::error::{Error, Result};

/// Leaves the search may visit before giving up.
pub const CANON_LEAF_BUDGET: usize = 200_000;

fn refine(p: &FinPoset, mut colors: Vec<usize>) -> Vec<usize> {
    let n = p.len();
    let mut classes = count_classes(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
            .map(|x| {
                let mut below: Vec<usize> = (0..n)
                    .filter(|&y| y != x && p.leq(y, x))
                    .map(|y| colors[y])
                    .collect();
                let mut above: Vec<usize> = (0..n)
                    .filter(|&y| y != x && p.leq(x, y))
                    .map(|y| colors[y])
                    .collect();
                below.sort_unstable();
                above.sort_unstable();
                (colors[x], below, above)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> =
            sigs.iter().map(|s| (s, 0)).collect();
        let ranks: BTreeMap<_, usize> = ranks.into_keys().enumerate().map(|(i, s)| (s, i)).collect();
        colors = sigs.iter().map(|s| ranks[s]).collect();
        let next = ranks.len();
        if next == classes {
            return colors;
        }
        classes = next;
    }
}

fn count_classes(colors: &[usize]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn twins(p: &FinPoset, x: usize, y: usize) -> bool {
    if p.leq(x, y) || p.leq(y, x) {
        return false;
    }
    (0..p.len())
        .filter(|&z| z != x && z != y)
        .all(|z| p.leq(z, x) == p.leq(z, y) && p.leq(x, z) == p.leq(y, z))
}

fn encode(p: &FinPoset, order: &[usize]) -> Vec<u8> {
    let n = order.len();
    let mut bytes = vec![0u8; (n * n).div_ceil(8)];
    for (i, &a) in order.iter().enumerate() {
        for (j, &b) in order.iter().enumerate() {
            if p.leq(a, b) {
                let k = i * n + j;
                bytes[k / 8] |= 0x80 >> (k % 8);
            }
        }
    }
    bytes
}

struct Search<'a> {
    p: &'a FinPoset,
    best: Option<(Vec<u8>, Vec<usize>)>,
    leaves: usize,
    budget: usize,
}

impl Search<'_> {
    fn run(&mut self, colors: Vec<usize>) -> Result<()> {
        let colors = refine(self.p, colors);
        let n = self.p.len();
        let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            cells.entry(colors[x]).or_default().push(x);
        }
        let Some((&target, members)) = cells.iter().find(|(_, m)| m.len() > 1) else {
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(Error::CanonBudget(self.budget));
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&x| colors[x]);
            let code = encode(self.p, &order);
            if self.best.as_ref().is_none_or(|(b, _)| code < *b) {
                self.best = Some((code, order));
            }
            return Ok(());
        };
        let mut reps: Vec<usize> = Vec::new();
        for &x in members {
            if !reps.iter().any(|&r| twins(self.p, r, x)) {
                reps.push(x);
            }
        }
        for x in reps {
            let next = colors
                .iter()
                .enumerate()
                .map(|(y, &c)| 2 * c + usize::from(c == target && y != x))
                .collect();
            self.run(next)?;
        }
        Ok(())
    }
}

/// Canonical element order of `p` and the `leq` encoding in that order.
/// Isomorphic posets get identical encodings.
pub fn canonical_labeling(p: &FinPoset) -> Result<(Vec<usize>, Vec<u8>)> {
    let mut s = Search {
        p,
        best: None,
        leaves: 0,
        budget: CANON_LEAF_BUDGET,
    };
    s.run(vec![0; p.len()])?;
    let (code, order) = s.best.expect("search visits at least one leaf");
    Ok((order, code))
}

/// A string that is equal for two posets exactly when they are
/// order-isomorphic: `<size>:<hex of the canonical leq matrix>`.
pub fn canonical_form(p: &FinPoset) -> Result<String> {
    let (_, code) = canonical_labeling(p)?;
    let mut s = format!("{}:", p.len());
    for b in code {
        s.push_str(&format!("{b:02x}"));
    }
    Ok(s)
}

/// An order-isomorphism `p -> q` if one exists.
pub fn iso_check(p: &Arc<FinPoset>, q: &Arc<FinPoset>) -> Result<Option<MonotoneMap>> {
    if p.len() != q.len() {
        return Ok(None);
    }
    let (op, cp) = canonical_labeling(p)?;
    let (oq, cq) = canonical_labeling(q)?;
    if cp != cq {
        return Ok(None);
    }
    let mut table = vec![0; p.len()];
    for (a, b) in op.into_iter().zip(oq) {
        table[a] = b;
    }
    let f = MonotoneMap::new(p.clone(), q.clone(), table)?;
    debug_assert!(f.inverse().is_some());
    Ok(Some(f))
}
