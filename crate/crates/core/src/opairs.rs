//! Projection (ep-) pairs and adjoint pairs: the morphisms of `PR K`.
//!
//! Both kinds share one representation tagged by [`PairKind`]. An ep-pair
//! `⟨l, r⟩ : A → B` satisfies `r ∘ l = id_A` and `l ∘ r ≤ id_B`; an adjoint
//! pair relaxes the first equation to `id_A ≤ r ∘ l`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{compose, leq_map, visit_monotone_maps, FinPoset, MonotoneMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairKind {
    #[serde(rename = "EP")]
    Ep,
    #[serde(rename = "ADJ")]
    Adj,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairKind::Ep => "EP",
            PairKind::Adj => "ADJ",
        })
    }
}

fn check_shape(l: &MonotoneMap, r: &MonotoneMap) -> Result<()> {
    if l.dom() != r.cod() || l.cod() != r.dom() {
        return Err(Error::ShapeMismatch(
            "pair legs must run A -> B and B -> A".into(),
        ));
    }
    Ok(())
}

/// `r ∘ l = id_A` and `l ∘ r ≤ id_B`.
pub fn is_ep_pair(l: &MonotoneMap, r: &MonotoneMap) -> Result<bool> {
    check_shape(l, r)?;
    let rl = compose(r, l)?;
    let lr = compose(l, r)?;
    Ok(rl.is_identity() && leq_map(&lr, &MonotoneMap::identity(l.cod()))?)
}

/// `l ∘ r ≤ id_B` and `id_A ≤ r ∘ l`.
pub fn is_adjoint_pair(l: &MonotoneMap, r: &MonotoneMap) -> Result<bool> {
    check_shape(l, r)?;
    let rl = compose(r, l)?;
    let lr = compose(l, r)?;
    Ok(leq_map(&lr, &MonotoneMap::identity(l.cod()))?
        && leq_map(&MonotoneMap::identity(l.dom()), &rl)?)
}

fn satisfies(kind: PairKind, l: &MonotoneMap, r: &MonotoneMap) -> Result<bool> {
    match kind {
        PairKind::Ep => is_ep_pair(l, r),
        PairKind::Adj => is_adjoint_pair(l, r),
    }
}

/// A morphism of `PR K` (or of its adjoint-pair analogue).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PairHom {
    kind: PairKind,
    l: MonotoneMap,
    r: MonotoneMap,
}

impl PairHom {
    pub fn new(kind: PairKind, l: MonotoneMap, r: MonotoneMap) -> Result<Self> {
        if !satisfies(kind, &l, &r)? {
            return Err(Error::InvalidPair {
                kind,
                reason: match kind {
                    PairKind::Ep => "need r∘l = id and l∘r ≤ id".into(),
                    PairKind::Adj => "need l∘r ≤ id and id ≤ r∘l".into(),
                },
            });
        }
        Ok(PairHom { kind, l, r })
    }


    pub fn kind(&self) -> PairKind {
        self.kind
    }

    /// The embedding (left) leg `A → B`.
    pub fn l(&self) -> &MonotoneMap {
        &self.l
    }

    /// The projection (right) leg `B → A`.
    pub fn r(&self) -> &MonotoneMap {
        &self.r
    }

    pub fn source(&self) -> &Arc<FinPoset> {
        self.l.dom()
    }

    pub fn target(&self) -> &Arc<FinPoset> {
        self.l.cod()
    }

    /// Reinterprets the pair under another kind, checking the new invariant.
    /// Every ep-pair is an adjoint pair, so `Ep -> Adj` never fails.
    pub fn with_kind(&self, kind: PairKind) -> Result<PairHom> {
        PairHom::new(kind, self.l.clone(), self.r.clone())
    }

    /// Both legs are mutually inverse order-isomorphisms.
    pub fn is_iso(&self) -> bool {
        self.source().len() == self.target().len()
            && compose(&self.r, &self.l).is_ok_and(|m| m.is_identity())
            && compose(&self.l, &self.r).is_ok_and(|m| m.is_identity())
    }

    /// `⟨r, l⟩` for an isomorphism pair.
    pub fn inverse(&self) -> Option<PairHom> {
        self.is_iso().then(|| PairHom {
            kind: self.kind,
            l: self.r.clone(),
            r: self.l.clone(),
        })
    }
}

impl fmt::Debug for PairHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}⟨L={:?}, R={:?}⟩", self.kind, self.l, self.r)
    }
}

/// `(g ∘ f)^L = g^L ∘ f^L`, `(g ∘ f)^R = f^R ∘ g^R`.
pub fn pair_compose(g: &PairHom, f: &PairHom) -> Result<PairHom> {
    if g.kind != f.kind {
        return Err(Error::KindMismatch {
            expected: f.kind,
            found: g.kind,
        });
    }
    let l = compose(&g.l, &f.l)?;
    let r = compose(&f.r, &g.r)?;
    if !satisfies(f.kind, &l, &r)? {
        return Err(Error::Internal(format!(
            "composite of two {} pairs broke the invariant",
            f.kind
        )));
    }
    Ok(PairHom { kind: f.kind, l, r })
}

pub fn pair_identity(p: &Arc<FinPoset>, kind: PairKind) -> PairHom {
    PairHom {
        kind,
        l: MonotoneMap::identity(p),
        r: MonotoneMap::identity(p),
    }
}

/// Componentwise order: `f ≤ g` iff `f^L ≤ g^L` and `f^R ≤ g^R`.
pub fn pair_leq(f: &PairHom, g: &PairHom) -> Result<bool> {
    if f.kind != g.kind {
        return Err(Error::KindMismatch {
            expected: f.kind,
            found: g.kind,
        });
    }
    Ok(leq_map(&f.l, &g.l)? && leq_map(&f.r, &g.r)?)
}

/// The greatest `x` with `l(x) ≤ y`, for each `y`, if all exist.
fn right_adjoint(l: &MonotoneMap) -> Option<Vec<usize>> {
    let (a, b) = (l.dom(), l.cod());
    (0..b.len())
        .map(|y| {
            let below: Vec<usize> = (0..a.len()).filter(|&x| b.leq(l.apply(x), y)).collect();
            below
                .iter()
                .copied()
                .find(|&m| below.iter().all(|&x| a.leq(x, m)))
        })
        .collect()
}

/// Every pair `A → B` of the given kind, ordered by `(l, r)` tables.
///
/// The right leg of a pair of either kind is the right adjoint of the left
/// leg, so the search runs over left legs only. Embeddings are injective,
/// and a left adjoint sends a least element to a least element; both facts
/// prune the search.
pub fn enumerate_pairs(
    a: &Arc<FinPoset>,
    b: &Arc<FinPoset>,
    kind: PairKind,
    caps: &Caps,
) -> Result<Vec<PairHom>> {
    enumerate_pairs_pinned(a, b, kind, caps, &vec![None; a.len()])
}

/// [`enumerate_pairs`] restricted to left legs with `l(x) = pins[x]`
/// wherever a pin is given.
pub(crate) fn enumerate_pairs_pinned(
    a: &Arc<FinPoset>,
    b: &Arc<FinPoset>,
    kind: PairKind,
    caps: &Caps,
    pins: &[Option<usize>],
) -> Result<Vec<PairHom>> {
    let needed = a.len() * b.len();
    if needed > caps.pair_product {
        return Err(Error::CapExceeded {
            what: "pair enumeration |A|·|B|",
            needed,
            cap: caps.pair_product,
        });
    }
    let mut fixed = pins.to_vec();
    if let Some(x0) = a.least() {
        match b.least() {
            Some(y0) if fixed[x0].is_none_or(|v| v == y0) => fixed[x0] = Some(y0),
            _ => return Ok(Vec::new()),
        }
    }
    let mut out = Vec::new();
    visit_monotone_maps(a, b, kind == PairKind::Ep, &fixed, &mut |table| {
        let l = MonotoneMap::new_unchecked(a.clone(), b.clone(), table.to_vec());
        if let Some(rt) = right_adjoint(&l) {
            let r = MonotoneMap::new_unchecked(b.clone(), a.clone(), rt);
            if satisfies(kind, &l, &r)? {
                out.push(PairHom { kind, l, r });
            }
        }
        Ok(())
    })?;
    out.sort_by(|p, q| (p.l.table(), p.r.table()).cmp(&(q.l.table(), q.r.table())));
    Ok(out)
}
