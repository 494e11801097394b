//! Exhaustive and seeded random generation of posets, chains and map chains.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::chains::OmegaChain;
use crate::config::Caps;
use crate::error::Result;
use crate::finposet::{canonical_labeling, monotone_maps, FinPoset, MonotoneMap};
use crate::opairs::{enumerate_pairs, PairHom, PairKind};

fn poset_from_matrix(n: usize, leq: Vec<bool>) -> FinPoset {
    let elems = (0..n).map(|i| format!("x{i}")).collect();
    let least = (0..n).find(|&b| (0..n).all(|x| leq[b * n + x]));
    FinPoset::from_parts(elems, leq, least).expect("generated order is valid")
}

/// Every poset with `1..=max` elements, one per isomorphism class, ordered
/// by size. Elements are `x0, x1, …`; a least element, when present, is
/// recorded as the bottom.
///
/// Every finite poset arises from a smaller one by adding a maximal element
/// above some down-set, so the classes of size `n` come from extending
/// those of size `n - 1` in every possible way.
pub fn all_posets(max: usize) -> Vec<Arc<FinPoset>> {
    let mut out: Vec<Arc<FinPoset>> = Vec::new();
    if max == 0 {
        return out;
    }
    let mut level = vec![FinPoset::chain(1)];
    out.push(Arc::new(poset_from_matrix(1, vec![true])));
    for n in 2..=max {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for p in &level {
            let m = n - 1;
            for mask in 0u32..(1 << m) {
                let inside = |x: usize| mask >> x & 1 == 1;
                let closed = (0..m).all(|y| !inside(y) || (0..m).all(|x| !p.leq(x, y) || inside(x)));
                if !closed {
                    continue;
                }
                let mut leq = vec![false; n * n];
                for i in 0..m {
                    for j in 0..m {
                        leq[i * n + j] = p.leq(i, j);
                    }
                    leq[i * n + m] = inside(i);
                }
                leq[m * n + m] = true;
                let q = poset_from_matrix(n, leq);
                let (_, code) = canonical_labeling(&q).expect("small poset");
                if seen.insert(code) {
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned().map(Arc::new));
        level = next;
    }
    out
}

fn random_pair(rng: &mut impl Rng, a: &Arc<FinPoset>, b: &Arc<FinPoset>, kind: PairKind, caps: &Caps) -> Result<Option<PairHom>> {
    let pairs = enumerate_pairs(a, b, kind, caps)?;
    Ok(pairs.choose(rng).cloned())
}

/// A seeded random chain of `kind` over posets from `pool`, with at most
/// `max_len` objects and a verified stabilization witness. Links after the
/// witness are random automorphism pairs; links before it are random pairs
/// of the kind between random pool members.
pub fn random_chain(rng: &mut impl Rng, kind: PairKind, pool: &[Arc<FinPoset>], max_len: usize, caps: &Caps) -> Result<OmegaChain> {
    let len = rng.random_range(1..=max_len.max(1));
    let stab = rng.random_range(0..len);
    let start = pool.choose(rng).expect("nonempty pool").clone();
    let mut objects = vec![start];
    let mut links = Vec::new();
    while objects.len() < len {
        let cur = objects.last().expect("nonempty").clone();
        let mut link = None;
        if links.len() < stab {
            for _ in 0..16 {
                let target = pool.choose(rng).expect("nonempty pool");
                if kind == PairKind::Ep && target.len() < cur.len() {
                    continue;
                }
                if let Some(p) = random_pair(rng, &cur, target, kind, caps)? {
                    link = Some(p);
                    break;
                }
            }
        }
        let link = match link {
            Some(l) => l,
            None => {
                let autos: Vec<PairHom> = enumerate_pairs(&cur, &cur, kind, caps)?
                    .into_iter()
                    .filter(PairHom::is_iso)
                    .collect();
                autos.choose(rng).expect("identity is an automorphism").clone()
            }
        };
        objects.push(link.target().clone());
        links.push(link);
    }
    let chain = OmegaChain::new(kind, objects, links, None)?;
    // the witness is the drawn index unless an earlier link happens to start an iso tail
    let stab = chain.witnessed_stabilization().map_or(stab, |w| w.min(stab));
    chain.with_stab_index(Some(stab))
}

/// An increasing chain of monotone maps `p → q` with a stabilization
/// witness, as `(terms, stab_index)`.
pub fn random_map_chain(rng: &mut impl Rng, p: &Arc<FinPoset>, q: &Arc<FinPoset>, max_len: usize, caps: &Caps) -> Result<(Vec<MonotoneMap>, usize)> {
    let tables = monotone_maps(p, q, caps.elems)?;
    let maps: Vec<MonotoneMap> = tables
        .into_iter()
        .map(|t| MonotoneMap::new(p.clone(), q.clone(), t))
        .collect::<Result<_>>()?;
    let len = rng.random_range(1..=max_len.max(1));
    let stab = rng.random_range(0..len);
    let mut terms = vec![maps.choose(rng).expect("maps into nonempty q").clone()];
    while terms.len() < len {
        let last = terms.last().expect("nonempty");
        let next = if terms.len() <= stab {
            let above: Vec<&MonotoneMap> = maps
                .iter()
                .filter(|m| (0..p.len()).all(|x| q.leq(last.apply(x), m.apply(x))))
                .collect();
            (*above.choose(rng).expect("last is above itself")).clone()
        } else {
            last.clone()
        };
        terms.push(next);
    }
    Ok((terms, stab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finposet::canonical_form;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn poset_counts_up_to_iso() {
        // 1, 2, 5, 16, 63 unlabeled posets of sizes 1..=5
        let ps = all_posets(5);
        let count = |n: usize| ps.iter().filter(|p| p.len() == n).count();
        assert_eq!((1..=5).map(count).collect::<Vec<_>>(), vec![1, 2, 5, 16, 63]);
        let forms: HashSet<String> = ps.iter().map(|p| canonical_form(p).unwrap()).collect();
        assert_eq!(forms.len(), ps.len());
        assert_eq!(ps.iter().filter(|p| p.len() == 4 && p.is_pointed()).count(), 5);
    }

    #[test]
    fn random_chains_are_valid_and_stabilize() {
        let pool = all_posets(4);
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [PairKind::Ep, PairKind::Adj] {
            for _ in 0..50 {
                let d = random_chain(&mut rng, kind, &pool, 5, &caps).unwrap();
                assert!(d.len() <= 5);
                let s = d.stab_index().unwrap();
                assert!(d.links()[s..].iter().all(PairHom::is_iso));
                assert!(d.objects().iter().all(|p| p.len() <= 4));
            }
        }
    }

    #[test]
    fn random_chains_are_deterministic() {
        let pool = all_posets(4);
        let caps = Caps::default();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| random_chain(&mut rng, PairKind::Ep, &pool, 5, &caps).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }

    #[test]
    fn random_map_chains_increase() {
        let pool = all_posets(3);
        let caps = Caps::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let p = pool.choose(&mut rng).unwrap();
            let q = pool.choose(&mut rng).unwrap();
            let (terms, stab) = random_map_chain(&mut rng, p, q, 5, &caps).unwrap();
            assert!(stab < terms.len());
            for w in terms.windows(2) {
                assert!(crate::finposet::leq_map(&w[0], &w[1]).unwrap());
            }
            assert!(terms[stab..].iter().all(|t| *t == terms[stab]));
        }
    }
}
