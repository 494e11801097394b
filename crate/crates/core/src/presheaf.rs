//! Finite O-categories, O-presheaves on them and the enriched Yoneda
//! embedding `y x = K(-, x)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chains::Cocone;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{
    compose, function_space_with_maps, leq_map, lub_map_chain, monotone_maps, FinPoset, MapChain,
    MonotoneMap, PosetData,
};

/// Wire form of a finite O-category. Hom keys are `"a->b"`, composition
/// keys `"a->b->c"` with entries `[g, f, g∘f]` for `f : a → b`, `g : b → c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryData {
    pub objects: Vec<String>,
    pub hom: BTreeMap<String, PosetData>,
    pub comp: BTreeMap<String, Vec<[String; 3]>>,
    pub ids: BTreeMap<String, String>,
}

/// A morphism token `index ∈ hom(src, dst)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub src: usize,
    pub dst: usize,
    pub index: usize,
}

/// A category whose hom-sets are finite posets of tokens and whose
/// composition is monotone in each argument.
#[derive(Debug, Clone)]
pub struct FinOCategory {
    objects: Vec<String>,
    hom: Vec<Arc<FinPoset>>,
    /// `comp[(a·n + b)·n + c][g·|hom(a,b)| + f] = g∘f`.
    comp: Vec<Vec<usize>>,
    ids: Vec<usize>,
    /// Present when built over concrete posets: carrier per object and the
    /// monotone map behind every token.
    carriers: Option<Vec<Arc<FinPoset>>>,
    maps: Option<Vec<Vec<Vec<usize>>>>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidCategory(msg.into())
}

impl FinOCategory {
    fn n(&self) -> usize {
        self.objects.len()
    }

    fn h(&self, a: usize, b: usize) -> &Arc<FinPoset> {
        &self.hom[a * self.n() + b]
    }

    fn validated(self) -> Result<Self> {
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                if self.objects[i] == self.objects[j] {
                    return Err(bad(format!("duplicate object {:?}", self.objects[i])));
                }
            }
        }
        if self.hom.len() != n * n || self.comp.len() != n * n * n || self.ids.len() != n {
            return Err(bad("table shapes do not match the object count"));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let t = &self.comp[(a * n + b) * n + c];
                    let (ab, bc, ac) = (self.h(a, b).len(), self.h(b, c).len(), self.h(a, c).len());
                    if t.len() != ab * bc || t.iter().any(|&x| x >= ac) {
                        return Err(bad(format!(
                            "composition {}->{}->{} is incomplete",
                            self.objects[a], self.objects[b], self.objects[c]
                        )));
                    }
                }
            }
            if self.ids[a] >= self.h(a, a).len() {
                return Err(bad(format!("missing identity on {}", self.objects[a])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for f in 0..self.h(a, b).len() {
                    let ida = self.ids[a];
                    let idb = self.ids[b];
                    if self.compose_idx(a, b, b, idb, f) != f || self.compose_idx(a, a, b, f, ida) != f {
                        return Err(bad(format!("unit law fails at {}", self.h(a, b).name(f))));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        for f in 0..self.h(a, b).len() {
                            for g in 0..self.h(b, c).len() {
                                for k in 0..self.h(c, d).len() {
                                    let l = self.compose_idx(a, c, d, k, self.compose_idx(a, b, c, g, f));
                                    let r = self.compose_idx(a, b, d, self.compose_idx(b, c, d, k, g), f);
                                    if l != r {
                                        return Err(bad("composition is not associative"));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc) = (self.h(a, b).clone(), self.h(b, c).clone());
                    let hac = self.h(a, c).clone();
                    for f in 0..hab.len() {
                        for f2 in 0..hab.len() {
                            for g in 0..hbc.len() {
                                for g2 in 0..hbc.len() {
                                    if hab.leq(f, f2)
                                        && hbc.leq(g, g2)
                                        && !hac.leq(self.compose_idx(a, b, c, g, f), self.compose_idx(a, b, c, g2, f2))
                                    {
                                        return Err(bad("composition is not monotone"));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(self)
    }

    fn compose_idx(&self, a: usize, b: usize, c: usize, g: usize, f: usize) -> usize {
        let n = self.n();
        self.comp[(a * n + b) * n + c][g * self.h(a, b).len() + f]
    }

    pub fn from_data(data: &CategoryData) -> Result<Self> {
        let n = data.objects.len();
        let obj = |s: &str| {
            data.objects
                .iter()
                .position(|o| o == s)
                .ok_or_else(|| Error::UnknownObject(s.to_string()))
        };
        let mut hom = Vec::with_capacity(n * n);
        for a in &data.objects {
            for b in &data.objects {
                let key = format!("{a}->{b}");
                let p = data.hom.get(&key).ok_or_else(|| bad(format!("missing hom {key}")))?;
                hom.push(Arc::new(FinPoset::from_data(p.clone())?));
            }
        }
        let tok = |a: usize, b: usize, s: &str| {
            hom[a * n + b]
                .index_of(s)
                .ok_or_else(|| Error::UnknownToken(s.to_string()))
        };
        for key in data.hom.keys() {
            let (a, b) = key.split_once("->").ok_or_else(|| bad(format!("bad hom key {key:?}")))?;
            obj(a)?;
            obj(b)?;
        }
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let key = format!("{}->{}->{}", data.objects[a], data.objects[b], data.objects[c]);
                    let (ab, bc) = (hom[a * n + b].len(), hom[b * n + c].len());
                    let mut t = vec![None; ab * bc];
                    for [g, f, gf] in data.comp.get(&key).map(Vec::as_slice).unwrap_or(&[]) {
                        let (g, f, gf) = (tok(b, c, g)?, tok(a, b, f)?, tok(a, c, gf)?);
                        t[g * ab + f] = Some(gf);
                    }
                    if t.iter().any(Option::is_none) {
                        return Err(bad(format!("composition {key} is incomplete")));
                    }
                    comp.push(t.into_iter().flatten().collect());
                }
            }
        }
        let mut ids = vec![usize::MAX; n];
        for (o, t) in &data.ids {
            let a = obj(o)?;
            ids[a] = tok(a, a, t)?;
        }
        FinOCategory {
            objects: data.objects.clone(),
            hom,
            comp,
            ids,
            carriers: None,
            maps: None,
        }
        .validated()
    }

    pub fn to_data(&self) -> CategoryData {
        let n = self.n();
        let mut hom = BTreeMap::new();
        let mut comp = BTreeMap::new();
        for a in 0..n {
            for b in 0..n {
                hom.insert(format!("{}->{}", self.objects[a], self.objects[b]), self.h(a, b).to_data());
                for c in 0..n {
                    let mut entries = Vec::new();
                    for g in 0..self.h(b, c).len() {
                        for f in 0..self.h(a, b).len() {
                            let gf = self.compose_idx(a, b, c, g, f);
                            entries.push([
                                self.h(b, c).name(g).to_string(),
                                self.h(a, b).name(f).to_string(),
                                self.h(a, c).name(gf).to_string(),
                            ]);
                        }
                    }
                    comp.insert(format!("{}->{}->{}", self.objects[a], self.objects[b], self.objects[c]), entries);
                }
            }
        }
        let ids = (0..n)
            .map(|a| (self.objects[a].clone(), self.h(a, a).name(self.ids[a]).to_string()))
            .collect();
        CategoryData {
            objects: self.objects.clone(),
            hom,
            comp,
            ids,
        }
    }

    /// The full sub-O-category of finite posets and monotone maps on the
    /// given objects; `hom(a, b)` is the function space with pointwise order.
    pub fn full_subcategory(objects: &[(String, Arc<FinPoset>)], caps: &Caps) -> Result<Self> {
        let n = objects.len();
        let mut hom = Vec::with_capacity(n * n);
        let mut maps = Vec::with_capacity(n * n);
        for (_, a) in objects {
            for (_, b) in objects {
                let (fs, tables) = function_space_with_maps(a, b, caps.elems)?;
                hom.push(Arc::new(fs));
                maps.push(tables);
            }
        }
        let index: Vec<HashMap<&[usize], usize>> = maps
            .iter()
            .map(|ts| ts.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect())
            .collect();
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (fs, gs) = (&maps[a * n + b], &maps[b * n + c]);
                    let mut t = Vec::with_capacity(fs.len() * gs.len());
                    for g in gs {
                        for f in fs {
                            let gf: Vec<usize> = f.iter().map(|&x| g[x]).collect();
                            t.push(index[a * n + c][gf.as_slice()]);
                        }
                    }
                    comp.push(t);
                }
            }
        }
        let ids = (0..n)
            .map(|a| {
                let id: Vec<usize> = (0..objects[a].1.len()).collect();
                index[a * n + a][id.as_slice()]
            })
            .collect();
        drop(index);
        FinOCategory {
            objects: objects.iter().map(|(s, _)| s.clone()).collect(),
            hom,
            comp,
            ids,
            carriers: Some(objects.iter().map(|(_, p)| p.clone()).collect()),
            maps: Some(maps),
        }
        .validated()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom(&self, a: usize, b: usize) -> &Arc<FinPoset> {
        self.h(a, b)
    }

    pub fn token(&self, a: &str, b: &str, name: &str) -> Result<Token> {
        let (src, dst) = (self.object(a)?, self.object(b)?);
        let index = self
            .h(src, dst)
            .index_of(name)
            .ok_or_else(|| Error::UnknownToken(name.to_string()))?;
        Ok(Token { src, dst, index })
    }

    pub fn tokens(&self, a: usize, b: usize) -> impl Iterator<Item = Token> {
        (0..self.h(a, b).len()).map(move |index| Token { src: a, dst: b, index })
    }

    pub fn id(&self, a: usize) -> Token {
        Token { src: a, dst: a, index: self.ids[a] }
    }

    /// `g ∘ f`.
    pub fn compose(&self, g: Token, f: Token) -> Result<Token> {
        if f.dst != g.src {
            return Err(Error::DomainMismatch("tokens are not composable".into()));
        }
        Ok(Token {
            src: f.src,
            dst: g.dst,
            index: self.compose_idx(f.src, f.dst, g.dst, g.index, f.index),
        })
    }

    pub fn token_leq(&self, f: Token, g: Token) -> bool {
        f.src == g.src && f.dst == g.dst && self.h(f.src, f.dst).leq(f.index, g.index)
    }

    fn carrier_index(&self, p: &FinPoset) -> Result<usize> {
        let carriers = self.carriers.as_ref().ok_or_else(|| Error::NotInCategory("category has no carriers".into()))?;
        carriers
            .iter()
            .position(|c| **c == *p)
            .ok_or_else(|| Error::NotInCategory(format!("poset {p:?} is not an object")))
    }

    /// The token standing for a monotone map between registered carriers.
    pub fn token_of(&self, f: &MonotoneMap) -> Result<Token> {
        let (src, dst) = (self.carrier_index(f.dom())?, self.carrier_index(f.cod())?);
        let tables = &self.maps.as_ref().expect("carriers imply maps")[src * self.n() + dst];
        let index = tables
            .iter()
            .position(|t| t.as_slice() == f.table())
            .ok_or_else(|| Error::NotInCategory(format!("map {f:?}")))?;
        Ok(Token { src, dst, index })
    }
}

/// A contravariant functor `K^op → Poset` whose action on each hom-poset
/// is monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presheaf {
    at: Vec<Arc<FinPoset>>,
    /// `act[a·n + b][f] : at(b) → at(a)` for `f : a → b`.
    act: Vec<Vec<MonotoneMap>>,
}

impl Presheaf {
    pub fn new(k: &FinOCategory, at: Vec<Arc<FinPoset>>, act: Vec<Vec<MonotoneMap>>) -> Result<Self> {
        let n = k.n();
        let bad = |m: String| Err(Error::InvalidPresheaf(m));
        if at.len() != n || act.len() != n * n {
            return bad("table shapes do not match the category".into());
        }
        for a in 0..n {
            for b in 0..n {
                let maps = &act[a * n + b];
                if maps.len() != k.h(a, b).len() {
                    return bad(format!("wrong number of actions on {}->{}", k.objects[a], k.objects[b]));
                }
                for m in maps {
                    if m.dom() != &at[b] || m.cod() != &at[a] {
                        return bad("action has the wrong endpoints".into());
                    }
                }
                let h = k.h(a, b);
                for f in 0..h.len() {
                    for g in 0..h.len() {
                        if h.leq(f, g) && !leq_map(&maps[f], &maps[g])? {
                            return bad("action is not monotone on a hom-poset".into());
                        }
                    }
                }
            }
            if !act[a * n + a][k.ids[a]].is_identity() {
                return bad(format!("identity on {} does not act trivially", k.objects[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for f in 0..k.h(a, b).len() {
                        for g in 0..k.h(b, c).len() {
                            let gf = k.compose_idx(a, b, c, g, f);
                            let lhs = &act[a * n + c][gf];
                            let rhs = compose(&act[a * n + b][f], &act[b * n + c][g])?;
                            if *lhs != rhs {
                                return bad("action does not respect composition".into());
                            }
                        }
                    }
                }
            }
        }
        Ok(Presheaf { at, act })
    }

    pub fn at(&self, a: usize) -> &Arc<FinPoset> {
        &self.at[a]
    }

    /// `P(f) : P(b) → P(a)`.
    pub fn act(&self, f: Token) -> &MonotoneMap {
        &self.act[f.src * self.at.len() + f.dst][f.index]
    }
}

/// A family of components `η_a : P(a) → Q(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTrans {
    components: Vec<MonotoneMap>,
}

fn natural(k: &FinOCategory, p: &Presheaf, q: &Presheaf, comps: &[MonotoneMap], upto: usize) -> Result<bool> {
    for a in 0..=upto {
        for b in 0..=upto {
            for f in k.tokens(a, b) {
                if compose(q.act(f), &comps[b])? != compose(&comps[a], p.act(f))? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

impl NatTrans {
    pub fn new(k: &FinOCategory, p: &Presheaf, q: &Presheaf, components: Vec<MonotoneMap>) -> Result<Self> {
        if components.len() != k.n() {
            return Err(Error::NotNatural("one component per object required".into()));
        }
        for (a, c) in components.iter().enumerate() {
            if c.dom() != p.at(a) || c.cod() != q.at(a) {
                return Err(Error::NotNatural(format!("component at {} has wrong endpoints", k.objects[a])));
            }
        }
        if !natural(k, p, q, &components, k.n() - 1)? {
            return Err(Error::NotNatural("a naturality square does not commute".into()));
        }
        Ok(NatTrans { components })
    }

    pub fn components(&self) -> &[MonotoneMap] {
        &self.components
    }

    pub fn identity(p: &Presheaf) -> Self {
        NatTrans {
            components: p.at.iter().map(MonotoneMap::identity).collect(),
        }
    }
}

/// Componentwise order.
pub fn nat_leq(s: &NatTrans, t: &NatTrans) -> Result<bool> {
    for (x, y) in s.components.iter().zip(&t.components) {
        if !leq_map(x, y)? {
            return Ok(false);
        }
    }
    Ok(s.components.len() == t.components.len())
}

/// Vertical composite `t ∘ s`.
pub fn nat_compose(t: &NatTrans, s: &NatTrans) -> Result<NatTrans> {
    Ok(NatTrans {
        components: t
            .components
            .iter()
            .zip(&s.components)
            .map(|(y, x)| compose(y, x))
            .collect::<Result<_>>()?,
    })
}

/// `y x = K(-, x)`: `at(a) = hom(a, x)`, `act(f) = - ∘ f`.
pub fn yoneda(k: &FinOCategory, x: usize) -> Result<Presheaf> {
    let n = k.n();
    if x >= n {
        return Err(Error::UnknownObject(format!("#{x}")));
    }
    let at: Vec<Arc<FinPoset>> = (0..n).map(|a| k.h(a, x).clone()).collect();
    let mut act = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            act.push(
                (0..k.h(a, b).len())
                    .map(|f| {
                        let table = (0..k.h(b, x).len()).map(|h| k.compose_idx(a, b, x, h, f)).collect();
                        MonotoneMap::new(at[b].clone(), at[a].clone(), table)
                    })
                    .collect::<Result<Vec<_>>>()?,
            );
        }
    }
    Presheaf::new(k, at, act).map_err(|e| Error::Internal(format!("representable presheaf: {e}")))
}

/// `y f : y a → y b`, postcomposition with `f : a → b`.
pub fn yoneda_mor(k: &FinOCategory, f: Token) -> Result<NatTrans> {
    let (ya, yb) = (yoneda(k, f.src)?, yoneda(k, f.dst)?);
    let components = (0..k.n())
        .map(|c| {
            let table = (0..k.h(c, f.src).len())
                .map(|h| k.compose_idx(c, f.src, f.dst, f.index, h))
                .collect();
            MonotoneMap::new(ya.at(c).clone(), yb.at(c).clone(), table)
        })
        .collect::<Result<Vec<_>>>()?;
    NatTrans::new(k, &ya, &yb, components).map_err(|e| Error::Internal(format!("yoneda image: {e}")))
}

/// Every natural transformation `P → Q`, ordered lexicographically by
/// component tables.
pub fn enumerate_nat_trans(k: &FinOCategory, p: &Presheaf, q: &Presheaf, caps: &Caps) -> Result<Vec<NatTrans>> {
    let n = k.n();
    let cands = (0..n)
        .map(|a| {
            monotone_maps(p.at(a), q.at(a), caps.elems)?
                .into_iter()
                .map(|t| MonotoneMap::new(p.at(a).clone(), q.at(a).clone(), t))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    let mut out = Vec::new();
    let mut chosen: Vec<MonotoneMap> = Vec::with_capacity(n);
    fn go(
        a: usize,
        k: &FinOCategory,
        p: &Presheaf,
        q: &Presheaf,
        cands: &[Vec<MonotoneMap>],
        chosen: &mut Vec<MonotoneMap>,
        out: &mut Vec<NatTrans>,
    ) -> Result<()> {
        if a == cands.len() {
            out.push(NatTrans { components: chosen.clone() });
            return Ok(());
        }
        for m in &cands[a] {
            chosen.push(m.clone());
            if natural(k, p, q, chosen, a)? {
                go(a + 1, k, p, q, cands, chosen, out)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    if n > 0 {
        go(0, k, p, q, &cands, &mut chosen, &mut out)?;
    }
    Ok(out)
}

/// Whether `f ↦ y f` is an order isomorphism `hom(a, b) ≅ Nat(y a, y b)`
/// for every pair of objects.
pub fn check_fully_faithful(k: &FinOCategory, caps: &Caps) -> Result<bool> {
    for a in 0..k.n() {
        for b in 0..k.n() {
            let nats = enumerate_nat_trans(k, &yoneda(k, a)?, &yoneda(k, b)?, caps)?;
            let images = k.tokens(a, b).map(|f| yoneda_mor(k, f)).collect::<Result<Vec<_>>>()?;
            if images.len() != nats.len() || !nats.iter().all(|t| images.contains(t)) {
                return Ok(false);
            }
            for f in k.tokens(a, b) {
                for g in k.tokens(a, b) {
                    if k.token_leq(f, g) != nat_leq(&images[f.index], &images[g.index])? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Componentwise lub of an increasing chain `P → Q` stabilizing at `stab`,
/// checked to be natural.
pub fn pointwise_lub(k: &FinOCategory, p: &Presheaf, q: &Presheaf, chain: &[NatTrans], stab: usize) -> Result<NatTrans> {
    if chain.is_empty() {
        return Err(Error::InvalidChain("empty chain".into()));
    }
    let components = (0..k.n())
        .map(|a| {
            let terms = chain.iter().map(|t| t.components[a].clone()).collect();
            lub_map_chain(&MapChain::new(terms, stab)?)
        })
        .collect::<Result<Vec<_>>>()?;
    NatTrans::new(k, p, q, components).map_err(|e| Error::Internal(format!("pointwise lub: {e}")))
}

/// Replays `y(⊔ c_n^L ∘ c_n^R) = ⊔ y(c_n^L) ∘ y(c_n^R) = y(id)` for a cocone
/// whose posets and maps are registered in `k`. Both sides are computed
/// independently; the result is whether both equal `y(id)`.
pub fn verify_proof_step(k: &FinOCategory, cocone: &Cocone) -> Result<bool> {
    let legs = cocone.legs();
    if legs.is_empty() {
        return Err(Error::InvalidCocone("no legs".into()));
    }
    let x = k.carrier_index(cocone.apex())?;
    let stab = cocone
        .chain()
        .stab_index()
        .filter(|&s| s < legs.len())
        .unwrap_or(legs.len() - 1);

    let idem = legs
        .iter()
        .map(|c| compose(c.l(), c.r()))
        .collect::<Result<Vec<_>>>()?;
    let lub = lub_map_chain(&MapChain::new(idem, stab)?)?;
    let left = yoneda_mor(k, k.token_of(&lub)?)?;

    let yx = yoneda(k, x)?;
    let images = legs
        .iter()
        .map(|c| nat_compose(&yoneda_mor(k, k.token_of(c.l())?)?, &yoneda_mor(k, k.token_of(c.r())?)?))
        .collect::<Result<Vec<_>>>()?;
    let right = pointwise_lub(k, &yx, &yx, &images, stab)?;

    let id = yoneda_mor(k, k.id(x))?;
    Ok(left == id && right == id)
}

/// `{1, 2-chain}` as a full sub-O-category.
pub fn one_two_category() -> FinOCategory {
    FinOCategory::full_subcategory(
        &[
            ("1".to_string(), Arc::new(FinPoset::one())),
            ("2".to_string(), Arc::new(FinPoset::chain(2))),
        ],
        &Caps::default(),
    )
    .expect("small category")
}
