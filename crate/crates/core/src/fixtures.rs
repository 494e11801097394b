//! Small named chains and cocones used by the tests, the CLI demos and the
//! acceptance suite.

use std::sync::Arc;

use crate::chains::{Cocone, OmegaChain};
use crate::finposet::{lift, lift_map, FinPoset, MonotoneMap};
use crate::opairs::{pair_identity, PairHom, PairKind};

/// `1 → 2-chain`: embed at the bottom, project everything to `*`.
pub fn bottom_inclusion(kind: PairKind) -> PairHom {
    bottom_inclusion_into(&Arc::new(FinPoset::chain(2)), kind).expect("2-chain is pointed")
}

/// `1 → target` embedding `*` at the bottom of a pointed `target`.
pub fn bottom_inclusion_into(target: &Arc<FinPoset>, kind: PairKind) -> Option<PairHom> {
    let one = Arc::new(FinPoset::one());
    let l = MonotoneMap::constant(&one, target, target.bottom()?).ok()?;
    let r = MonotoneMap::constant(target, &one, 0).ok()?;
    PairHom::new(kind, l, r).ok()
}

/// `1 → 2-chain → 2-chain` (bottom inclusion, then identity), stabilized at 1.
pub fn one_two_two_chain() -> OmegaChain {
    let incl = bottom_inclusion(PairKind::Ep);
    let id = pair_identity(incl.target(), PairKind::Ep);
    OmegaChain::from_links(incl.source().clone(), vec![incl, id], Some(1))
        .expect("valid chain")
}

/// Constant chain at `1` of `len` objects, apex the 2-chain, every leg the
/// bottom inclusion. Commutes, but `⊔ c_n^L ∘ c_n^R` is `const-⊥`.
pub fn counterexample_cocone(len: usize) -> Cocone {
    let incl = bottom_inclusion(PairKind::Ep);
    let chain = OmegaChain::constant(incl.source(), PairKind::Ep, len);
    let n = chain.len();
    Cocone::new(chain, incl.target().clone(), vec![incl; n]).expect("valid cocone")
}

/// `2-chain → 1 → 1` with the collapse whose right adjoint picks `⊤`,
/// then the identity; an adjoint chain stabilized at 1.
pub fn adjoint_collapse_chain() -> OmegaChain {
    let two = Arc::new(FinPoset::chain(2));
    let one = Arc::new(FinPoset::one());
    let l = MonotoneMap::constant(&two, &one, 0).expect("collapse");
    let r = MonotoneMap::constant(&one, &two, 1).expect("pick top");
    let collapse = PairHom::new(PairKind::Adj, l, r).expect("adjoint pair");
    OmegaChain::from_links(two, vec![collapse, pair_identity(&one, PairKind::Adj)], Some(1))
        .expect("valid chain")
}

/// `1 → lift(1) → lift²(1) → …` with `depth` links; no stabilization.
pub fn lift_chain(depth: usize) -> OmegaChain {
    let first = Arc::new(lift(&FinPoset::one()).expect("lift"));
    let mut links = vec![bottom_inclusion_into(&first, PairKind::Ep).expect("lift is pointed")];
    let mut start = links[0].source().clone();
    if depth == 0 {
        links.clear();
    }
    while links.len() < depth {
        let prev = links.last().expect("nonempty");
        let l = lift_map(prev.l()).expect("lift");
        let r = lift_map(prev.r()).expect("lift");
        links.push(PairHom::new(PairKind::Ep, l, r).expect("lift preserves ep-pairs"));
    }
    if let Some(first) = links.first() {
        start = first.source().clone();
    }
    debug_assert!(links
        .last()
        .is_none_or(|l| **l.target() == nth_lift(depth)));
    OmegaChain::from_links(start, links, None).expect("valid chain")
}

fn nth_lift(n: usize) -> FinPoset {
    (0..n).fold(FinPoset::one(), |p, _| lift(&p).expect("lift"))
}
