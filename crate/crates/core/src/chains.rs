//! ω-chains of pairs, cocones over them, and the local-determination
//! checkers.
//!
//! A chain is a finite list `Δ_0 → Δ_1 → … → Δ_len` of pairs of one kind.
//! When a stabilization witness `N` is present every listed link from `N`
//! on is an isomorphism pair, and the chain is read as constant (up to
//! those isos) from `Δ_N` onward; this is what makes its colimit finite.
//! Chains without a witness are only analysed through bounded-depth
//! thread approximants.

use std::sync::Arc;

use serde::Serialize;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{compose, lub_map_chain, FinPoset, MapChain, MonotoneMap};
use crate::opairs::{enumerate_pairs_pinned, pair_compose, pair_identity, PairHom, PairKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaChain {
    kind: PairKind,
    objects: Vec<Arc<FinPoset>>,
    links: Vec<PairHom>,
    stab_index: Option<usize>,
}

impl OmegaChain {
    pub fn new(
        kind: PairKind,
        objects: Vec<Arc<FinPoset>>,
        links: Vec<PairHom>,
        stab_index: Option<usize>,
    ) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::InvalidChain("no objects".into()));
        }
        if links.len() + 1 != objects.len() {
            return Err(Error::InvalidChain(format!(
                "{} objects need {} links, got {}",
                objects.len(),
                objects.len() - 1,
                links.len()
            )));
        }
        for (n, link) in links.iter().enumerate() {
            if link.kind() != kind {
                return Err(Error::KindMismatch {
                    expected: kind,
                    found: link.kind(),
                });
            }
            if *link.source() != objects[n] || *link.target() != objects[n + 1] {
                return Err(Error::InvalidChain(format!(
                    "link {n} does not run Δ_{n} → Δ_{}",
                    n + 1
                )));
            }
        }
        if let Some(s) = stab_index {
            if s >= objects.len() {
                return Err(Error::InvalidChain(format!(
                    "stab_index {s} beyond last object {}",
                    objects.len() - 1
                )));
            }
            if let Some(n) = (s..links.len()).find(|&n| !links[n].is_iso()) {
                return Err(Error::BadWitness {
                    index: s,
                    failing: n,
                });
            }
        }
        Ok(OmegaChain {
            kind,
            objects,
            links,
            stab_index,
        })
    }

    /// Chain whose objects are read off the links.
    pub fn from_links(start: Arc<FinPoset>, links: Vec<PairHom>, stab_index: Option<usize>) -> Result<Self> {
        let kind = links.first().map_or(PairKind::Ep, PairHom::kind);
        let mut objects = vec![start];
        objects.extend(links.iter().map(|l| l.target().clone()));
        Self::new(kind, objects, links, stab_index)
    }

    /// The constant chain at `p` with identity links.
    pub fn constant(p: &Arc<FinPoset>, kind: PairKind, len: usize) -> Self {
        OmegaChain {
            kind,
            objects: vec![p.clone(); len.max(1)],
            links: vec![pair_identity(p, kind); len.max(1) - 1],
            stab_index: Some(0),
        }
    }

    pub fn kind(&self) -> PairKind {
        self.kind
    }

    pub fn objects(&self) -> &[Arc<FinPoset>] {
        &self.objects
    }

    pub fn links(&self) -> &[PairHom] {
        &self.links
    }

    pub fn stab_index(&self) -> Option<usize> {
        self.stab_index
    }

    /// Number of listed objects.
    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last_index(&self) -> usize {
        self.objects.len() - 1
    }

    /// Smallest `N` such that every listed link from `N` on is an iso and
    /// at least one such link is listed.
    pub fn witnessed_stabilization(&self) -> Option<usize> {
        let mut n = self.links.len();
        while n > 0 && self.links[n - 1].is_iso() {
            n -= 1;
        }
        (n < self.links.len()).then_some(n)
    }

    /// Same chain with a different witness (checked).
    pub fn with_stab_index(&self, stab_index: Option<usize>) -> Result<Self> {
        Self::new(self.kind, self.objects.clone(), self.links.clone(), stab_index)
    }

    /// Objects `Δ_0 … Δ_m`.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m >= self.objects.len() {
            return Err(Error::OutOfRange(format!("prefix {m} of chain of length {}", self.len())));
        }
        Ok(OmegaChain {
            kind: self.kind,
            objects: self.objects[..=m].to_vec(),
            links: self.links[..m].to_vec(),
            stab_index: self.stab_index.filter(|&s| s <= m),
        })
    }

    /// Reinterprets every link under `kind`.
    pub fn with_kind(&self, kind: PairKind) -> Result<Self> {
        let links = self
            .links
            .iter()
            .map(|l| l.with_kind(kind))
            .collect::<Result<_>>()?;
        Self::new(kind, self.objects.clone(), links, self.stab_index)
    }
}

/// `Δ_{n≤m} = Δ_{m-1} ∘ … ∘ Δ_n`, the identity when `n = m`.
pub fn link_composite(d: &OmegaChain, n: usize, m: usize) -> Result<PairHom> {
    if n > m || m > d.last_index() {
        return Err(Error::OutOfRange(format!(
            "composite {n}..{m} of chain with last index {}",
            d.last_index()
        )));
    }
    let mut acc = pair_identity(&d.objects[n], d.kind);
    for link in &d.links[n..m] {
        acc = pair_compose(link, &acc)?;
    }
    Ok(acc)
}

/// A cocone `⟨C, c⟩`: legs `c_n : Δ_n → C` for a prefix `n = 0 … L` of the
/// chain's objects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    chain: OmegaChain,
    apex: Arc<FinPoset>,
    legs: Vec<PairHom>,
}

impl Cocone {
    /// Checks leg shapes and kinds; commutation is checked by [`is_cocone`].
    pub fn new(chain: OmegaChain, apex: Arc<FinPoset>, legs: Vec<PairHom>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::InvalidCocone("no legs".into()));
        }
        if legs.len() > chain.len() {
            return Err(Error::InvalidCocone(format!(
                "{} legs for {} objects",
                legs.len(),
                chain.len()
            )));
        }
        for (n, leg) in legs.iter().enumerate() {
            if leg.kind() != chain.kind {
                return Err(Error::KindMismatch {
                    expected: chain.kind,
                    found: leg.kind(),
                });
            }
            if *leg.source() != chain.objects[n] || *leg.target() != apex {
                return Err(Error::InvalidCocone(format!("leg {n} does not run Δ_{n} → C")));
            }
        }
        Ok(Cocone { chain, apex, legs })
    }

    pub fn chain(&self) -> &OmegaChain {
        &self.chain
    }

    pub fn apex(&self) -> &Arc<FinPoset> {
        &self.apex
    }

    pub fn legs(&self) -> &[PairHom] {
        &self.legs
    }

    pub fn kind(&self) -> PairKind {
        self.chain.kind
    }

    /// `c_n` for any listed object: a listed leg, or beyond the last listed
    /// leg `c_L ∘ Δ_{L≤n}⁻¹`, defined when those links are isos.
    pub fn leg_at(&self, n: usize) -> Result<PairHom> {
        if let Some(leg) = self.legs.get(n) {
            return Ok(leg.clone());
        }
        let last = self.legs.len() - 1;
        let between = link_composite(&self.chain, last, n)?;
        let inv = between.inverse().ok_or_else(|| {
            Error::InvalidCocone(format!("links {last}..{n} are not isos; leg {n} is not determined"))
        })?;
        pair_compose(&self.legs[last], &inv)
    }

    /// Legs post-composed with `u : C → C'`.
    pub fn transport(&self, u: &PairHom) -> Result<Cocone> {
        if *u.source() != self.apex {
            return Err(Error::DomainMismatch("transport map must start at the apex".into()));
        }
        let legs = self
            .legs
            .iter()
            .map(|c| pair_compose(u, c))
            .collect::<Result<_>>()?;
        Cocone::new(self.chain.clone(), u.target().clone(), legs)
    }

    /// Reinterprets chain and legs under `kind`.
    pub fn with_kind(&self, kind: PairKind) -> Result<Cocone> {
        let legs = self
            .legs
            .iter()
            .map(|l| l.with_kind(kind))
            .collect::<Result<_>>()?;
        Cocone::new(self.chain.with_kind(kind)?, self.apex.clone(), legs)
    }
}

/// `c_n = c_{n+1} ∘ Δ_n` for every pair of consecutive listed legs.
pub fn is_cocone(k: &Cocone) -> bool {
    k.legs.windows(2).enumerate().all(|(n, w)| {
        pair_compose(&w[1], &k.chain.links[n]).is_ok_and(|c| c == w[0])
    })
}

/// The canonical colimit of a stabilizing chain: apex `Δ_N`, legs
/// `c_n = Δ_{n≤N}` for `n ≤ N`.
pub fn colimit_finite(d: &OmegaChain) -> Result<Cocone> {
    let n_stab = d
        .stab_index
        .ok_or_else(|| Error::InvalidChain("missing stabilization witness".into()))?;
    let legs = (0..=n_stab)
        .map(|n| link_composite(d, n, n_stab))
        .collect::<Result<_>>()?;
    let k = Cocone::new(d.clone(), d.objects[n_stab].clone(), legs)?;
    debug_assert!(is_cocone(&k));
    Ok(k)
}

/// Local-determination verdict with per-stage defects.
///
/// `defects[n]` counts apex elements moved by `c_n^L ∘ c_n^R`. For adjoint
/// cocones `adj_residuals[n][j]` counts elements of `Δ_n` where
/// `Δ_{n≤n+j}^R ∘ Δ_{n≤n+j}^L` differs from `c_n^R ∘ c_n^L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LdReport {
    pub kind: PairKind,
    pub verdict: bool,
    pub defects: Vec<usize>,
    pub adj_residuals: Option<Vec<Vec<usize>>>,
}

fn moved(f: &MonotoneMap, g: &MonotoneMap) -> usize {
    f.table().iter().zip(g.table()).filter(|(a, b)| a != b).count()
}

fn require_cocone(k: &Cocone, kind: PairKind) -> Result<()> {
    if k.kind() != kind {
        return Err(Error::KindMismatch {
            expected: kind,
            found: k.kind(),
        });
    }
    if !is_cocone(k) {
        return Err(Error::InvalidCocone("legs do not commute with the links".into()));
    }
    Ok(())
}

/// Index at which the listed sequence `n ↦ c_n` is known to be constant:
/// the chain's witness when it is among the listed legs, else the last leg.
fn lub_witness(k: &Cocone) -> usize {
    match k.chain.stab_index {
        Some(s) if s < k.legs.len() => s,
        _ => k.legs.len() - 1,
    }
}

/// `⊔_n c_n^L ∘ c_n^R = id_C`, with defects.
fn first_condition(k: &Cocone) -> Result<(bool, Vec<usize>)> {
    let id = MonotoneMap::identity(&k.apex);
    let e: Vec<MonotoneMap> = k
        .legs
        .iter()
        .map(|c| compose(c.l(), c.r()))
        .collect::<Result<_>>()?;
    let defects = e.iter().map(|en| moved(en, &id)).collect();
    let lub = lub_map_chain(&MapChain::new(e, lub_witness(k))?)?;
    Ok((lub == id, defects))
}

/// Checks `⊔_n c_n^L ∘ c_n^R = id_C` for a cocone of ep-pairs.
pub fn check_local_determination_ep(k: &Cocone) -> Result<LdReport> {
    require_cocone(k, PairKind::Ep)?;
    let (verdict, defects) = first_condition(k)?;
    Ok(LdReport {
        kind: PairKind::Ep,
        verdict,
        defects,
        adj_residuals: None,
    })
}

/// Checks both conditions for a cocone of adjoint pairs: the ep condition,
/// and for every listed `n`, `⊔_{m≥n} Δ_{n≤m}^R ∘ Δ_{n≤m}^L = c_n^R ∘ c_n^L`.
pub fn check_local_determination_adj(k: &Cocone) -> Result<LdReport> {
    require_cocone(k, PairKind::Adj)?;
    let (first, defects) = first_condition(k)?;
    let d = &k.chain;
    let last = d.last_index();
    let mut second = true;
    let mut residuals = Vec::with_capacity(k.legs.len());
    for (n, c) in k.legs.iter().enumerate() {
        let target = compose(c.r(), c.l())?;
        let terms: Vec<MonotoneMap> = (n..=last)
            .map(|m| link_composite(d, n, m).and_then(|dm| compose(dm.r(), dm.l())))
            .collect::<Result<_>>()?;
        residuals.push(terms.iter().map(|s| moved(s, &target)).collect());
        let witness = match d.stab_index {
            Some(s) => s.max(n) - n,
            None => last - n,
        };
        let lub = lub_map_chain(&MapChain::new(terms, witness)?)?;
        second &= lub == target;
    }
    Ok(LdReport {
        kind: PairKind::Adj,
        verdict: first && second,
        defects,
        adj_residuals: Some(residuals),
    })
}

/// Dispatches on the cocone's kind.
pub fn check_local_determination(k: &Cocone) -> Result<LdReport> {
    match k.kind() {
        PairKind::Ep => check_local_determination_ep(k),
        PairKind::Adj => check_local_determination_adj(k),
    }
}

/// Every pair `u : Δ_N → C` from the canonical colimit's apex with
/// `u ∘ κ_n = c_n` for all listed legs, found by exhaustive search.
pub fn mediators(k: &Cocone, caps: &Caps) -> Result<Vec<PairHom>> {
    let canon = colimit_finite(&k.chain)?;
    let kappa = (0..k.legs.len())
        .map(|n| canon.leg_at(n))
        .collect::<Result<Vec<_>>>()?;
    // u^L ∘ κ_n^L = c_n^L pins u^L on the image of every κ_n^L
    let mut pins = vec![None; canon.apex.len()];
    for (kn, cn) in kappa.iter().zip(&k.legs) {
        if kn.target() != &canon.apex || cn.source() != kn.source() || cn.target() != &k.apex {
            return Ok(Vec::new());
        }
        for y in 0..kn.source().len() {
            let (x, v) = (kn.l().apply(y), cn.l().apply(y));
            match pins[x] {
                Some(w) if w != v => return Ok(Vec::new()),
                _ => pins[x] = Some(v),
            }
        }
    }
    let candidates = enumerate_pairs_pinned(&canon.apex, &k.apex, k.kind(), caps, &pins)?;
    Ok(candidates
        .into_iter()
        .filter(|u| {
            kappa
                .iter()
                .zip(&k.legs)
                .all(|(kn, cn)| pair_compose(u, kn).is_ok_and(|x| x == *cn))
        })
        .collect())
}

/// Whether `k` is a colimiting cocone, decided by the universal property
/// rather than by local determination: `k` is colimiting iff some mediator
/// from the canonical colimit is an isomorphism pair.
pub fn is_colimiting(k: &Cocone, caps: &Caps) -> Result<bool> {
    if !is_cocone(k) {
        return Ok(false);
    }
    Ok(mediators(k, caps)?.iter().any(PairHom::is_iso))
}

/// A compatible family `x_k ∈ Δ_k` with `Δ_k^R(x_{k+1}) = x_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thread {
    pub components: Vec<usize>,
}

impl Thread {
    pub fn depth(&self) -> usize {
        self.components.len() - 1
    }

    pub fn is_compatible(&self, d: &OmegaChain) -> bool {
        self.components.len() <= d.len()
            && self.components.iter().enumerate().all(|(k, &x)| x < d.objects[k].len())
            && self
                .components
                .windows(2)
                .enumerate()
                .all(|(k, w)| d.links[k].r().apply(w[1]) == w[0])
    }

    pub fn name(&self, d: &OmegaChain) -> String {
        let parts: Vec<&str> = self
            .components
            .iter()
            .enumerate()
            .map(|(k, &x)| d.objects[k].name(x))
            .collect();
        format!("<{}>", parts.join("|"))
    }
}

/// All threads of depth `depth`, one per element of `Δ_depth`.
pub fn threads(d: &OmegaChain, depth: usize) -> Result<Vec<Thread>> {
    let proj: Vec<PairHom> = (0..=depth)
        .map(|n| link_composite(d, n, depth))
        .collect::<Result<_>>()?;
    Ok((0..d.objects[depth].len())
        .map(|y| Thread {
            components: proj.iter().map(|p| p.r().apply(y)).collect(),
        })
        .collect())
}

/// Bounded-depth view of a (possibly non-stabilizing) chain: the apex is the
/// poset of depth-`depth` threads, ordered componentwise, and
/// `c_n` embeds `x ∈ Δ_n` as the thread of `Δ_{n≤depth}^L(x)`.
pub fn thread_approximant(d: &OmegaChain, depth: usize) -> Result<(Cocone, Vec<Thread>)> {
    if depth >= d.len() {
        return Err(Error::OutOfRange(format!(
            "depth {depth} for chain of length {}",
            d.len()
        )));
    }
    let ts = threads(d, depth)?;
    let top = &d.objects[depth];
    let n = ts.len();
    let elems = ts.iter().map(|t| t.name(d)).collect();
    let leq = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    ts[i].components
                        .iter()
                        .zip(&ts[j].components)
                        .enumerate()
                        .all(|(k, (&a, &b))| d.objects[k].leq(a, b))
                })
                .collect()
        })
        .collect();
    let bottom = top.bottom().map(|b| ts[b].name(d));
    let apex = Arc::new(FinPoset::new(elems, leq, bottom)?);
    // threads are indexed by their last component, so Δ_depth ≅ apex by index
    let iso_l = MonotoneMap::new(top.clone(), apex.clone(), (0..n).collect())?;
    let iso_r = MonotoneMap::new(apex.clone(), top.clone(), (0..n).collect())?;
    let iso = PairHom::new(d.kind, iso_l, iso_r)?;
    let prefix = d.prefix(depth)?;
    let legs = (0..=depth)
        .map(|m| link_composite(d, m, depth).and_then(|c| pair_compose(&iso, &c)))
        .collect::<Result<_>>()?;
    Ok((Cocone::new(prefix, apex, legs)?, ts))
}

/// `defects[d]` = defect sequence of the depth-`d` approximant.
pub fn defect_matrix(d: &OmegaChain, depth: usize) -> Result<Vec<Vec<usize>>> {
    (0..=depth)
        .map(|m| {
            let (k, _) = thread_approximant(d, m)?;
            Ok(check_local_determination(&k)?.defects)
        })
        .collect()
}
