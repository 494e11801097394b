//! Locally continuous functor combinators and their action on pairs.
//!
//! A [`FunctorExpr`] is interpreted on objects by the poset constructions
//! and on maps by a mixed-variance action `F(contra, co) : F(A) → F(B)`
//! taking `co : A → B` and `contra : B → A`. Only `fun(G, H)` reads
//! `contra` (for its contravariant argument). On a pair `f = ⟨f^L, f^R⟩`
//! the action gives `PR F f = ⟨F(f^R, f^L), F(f^L, f^R)⟩`, which for
//! `fun`-free expressions is literally `⟨F f^L, F f^R⟩`.

mod parse;

pub use parse::{parse_functor, Parser};

use std::cell::{OnceCell, RefCell};
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use serde::Serialize;

use crate::chains::{check_local_determination, is_colimiting, Cocone, LdReport, OmegaChain};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{
    coproduct, function_space_with_maps, leq_map, lift, lift_map_between, lub_map_chain,
    monotone_maps, product, product_map_between, sum_map_between, FinPoset, MapChain,
    MonotoneMap,
};
use crate::opairs::{enumerate_pairs, pair_compose, pair_identity, pair_leq, PairHom, PairKind};

/// A constant poset together with the name it is written under.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedPoset {
    pub name: String,
    pub poset: Arc<FinPoset>,
}

impl NamedPoset {
    pub fn new(name: impl Into<String>, poset: FinPoset) -> Self {
        NamedPoset {
            name: name.into(),
            poset: Arc::new(poset),
        }
    }
}

/// Resolves the names accepted by `const(..)`: `1` (the one-point poset,
/// also written `unit`), `n ≥ 2` (the n-chain), `vee` and `diamond`.
pub fn named_constant(name: &str) -> Option<NamedPoset> {
    let poset = match name {
        "1" | "unit" => FinPoset::one(),
        "vee" => FinPoset::vee(),
        "diamond" => FinPoset::diamond(),
        n => match n.parse::<usize>() {
            Ok(k) if (2..=64).contains(&k) => FinPoset::chain(k),
            _ => return None,
        },
    };
    let name = if name == "unit" { "1" } else { name };
    Some(NamedPoset::new(name, poset))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FunctorExpr {
    Id,
    Const(NamedPoset),
    Lift(Box<FunctorExpr>),
    Prod(Box<FunctorExpr>, Box<FunctorExpr>),
    Sum(Box<FunctorExpr>, Box<FunctorExpr>),
    /// Monotone maps from the first argument (contravariant) to the second.
    Fun(Box<FunctorExpr>, Box<FunctorExpr>),
    /// `Compose(outer, inner)` is `outer ∘ inner`.
    Compose(Box<FunctorExpr>, Box<FunctorExpr>),
}

/// Polarities at which the chain variable `D` occurs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Variance {
    pub covariant: bool,
    pub contravariant: bool,
}

impl Variance {
    fn union(self, o: Variance) -> Variance {
        Variance {
            covariant: self.covariant || o.covariant,
            contravariant: self.contravariant || o.contravariant,
        }
    }

    fn flip(self) -> Variance {
        Variance {
            covariant: self.contravariant,
            contravariant: self.covariant,
        }
    }
}

impl FunctorExpr {
    pub fn constant(c: NamedPoset) -> Self {
        FunctorExpr::Const(c)
    }

    pub fn lift(e: FunctorExpr) -> Self {
        FunctorExpr::Lift(Box::new(e))
    }

    pub fn prod(a: FunctorExpr, b: FunctorExpr) -> Self {
        FunctorExpr::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: FunctorExpr, b: FunctorExpr) -> Self {
        FunctorExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn fun(a: FunctorExpr, b: FunctorExpr) -> Self {
        FunctorExpr::Fun(Box::new(a), Box::new(b))
    }

    pub fn compose(outer: FunctorExpr, inner: FunctorExpr) -> Self {
        FunctorExpr::Compose(Box::new(outer), Box::new(inner))
    }

    pub fn variance(&self) -> Variance {
        use FunctorExpr::*;
        match self {
            Id => Variance {
                covariant: true,
                contravariant: false,
            },
            Const(_) => Variance::default(),
            Lift(e) => e.variance(),
            Prod(a, b) | Sum(a, b) => a.variance().union(b.variance()),
            Fun(a, b) => a.variance().flip().union(b.variance()),
            Compose(outer, inner) => {
                let (o, i) = (outer.variance(), inner.variance());
                let mut v = Variance::default();
                if o.covariant {
                    v = v.union(i);
                }
                if o.contravariant {
                    v = v.union(i.flip());
                }
                v
            }
        }
    }

    /// No `fun` node anywhere in the tree.
    pub fn is_fun_free(&self) -> bool {
        use FunctorExpr::*;
        match self {
            Id | Const(_) => true,
            Lift(e) => e.is_fun_free(),
            Prod(a, b) | Sum(a, b) | Compose(a, b) => a.is_fun_free() && b.is_fun_free(),
            Fun(..) => false,
        }
    }

    pub fn depth(&self) -> usize {
        use FunctorExpr::*;
        match self {
            Id | Const(_) => 0,
            Lift(e) => 1 + e.depth(),
            Prod(a, b) | Sum(a, b) | Fun(a, b) | Compose(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn evaluator(&self, caps: Caps) -> Evaluator<'_> {
        Evaluator {
            expr: self,
            caps,
            cache: RefCell::new(Vec::new()),
        }
    }

    fn write_with(&self, f: &mut fmt::Formatter<'_>, var: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result) -> fmt::Result {
        use FunctorExpr::*;
        let bin = |f: &mut fmt::Formatter<'_>, name: &str, a: &FunctorExpr, b: &FunctorExpr| {
            write!(f, "{name}(")?;
            a.write_with(f, var)?;
            f.write_str(", ")?;
            b.write_with(f, var)?;
            f.write_str(")")
        };
        match self {
            Id => var(f),
            Const(c) if c.name == "1" => f.write_str("unit"),
            Const(c) => write!(f, "const({})", c.name),
            Lift(e) => {
                f.write_str("lift(")?;
                e.write_with(f, var)?;
                f.write_str(")")
            }
            Prod(a, b) => bin(f, "prod", a, b),
            Sum(a, b) => bin(f, "sum", a, b),
            Fun(a, b) => bin(f, "fun", a, b),
            Compose(outer, inner) => outer.write_with(f, &|f| inner.write_with(f, var)),
        }
    }
}

/// Prints in the concrete syntax; a composite prints as the substituted
/// expression, which denotes the same functor.
impl fmt::Display for FunctorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with(f, &|f| f.write_str("D"))
    }
}

/// `F` evaluated at one object, with the evaluations of its subterms.
struct Eval {
    obj: Arc<FinPoset>,
    kids: Vec<Rc<Eval>>,
    /// Tables of the elements of a function space.
    maps: Option<Vec<Vec<usize>>>,
    index: OnceCell<HashMap<Vec<usize>, usize>>,
}

impl Eval {
    fn leaf(obj: Arc<FinPoset>) -> Self {
        Eval {
            obj,
            kids: Vec::new(),
            maps: None,
            index: OnceCell::new(),
        }
    }

    fn node(obj: FinPoset, kids: Vec<Rc<Eval>>) -> Self {
        Eval {
            obj: Arc::new(obj),
            kids,
            maps: None,
            index: OnceCell::new(),
        }
    }

    fn table_index(&self) -> &HashMap<Vec<usize>, usize> {
        self.index.get_or_init(|| {
            self.maps
                .as_ref()
                .map(|m| m.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
                .unwrap_or_default()
        })
    }
}

fn check_size(needed: usize, caps: &Caps) -> Result<()> {
    if needed > caps.elems {
        return Err(Error::CapExceeded {
            what: "poset elements",
            needed,
            cap: caps.elems,
        });
    }
    Ok(())
}

fn eval(expr: &FunctorExpr, p: &Arc<FinPoset>, caps: &Caps) -> Result<Eval> {
    use FunctorExpr::*;
    Ok(match expr {
        Id => Eval::leaf(p.clone()),
        Const(c) => Eval::leaf(c.poset.clone()),
        Lift(e) => {
            let k = eval(e, p, caps)?;
            check_size(k.obj.len() + 1, caps)?;
            Eval::node(lift(&k.obj)?, vec![Rc::new(k)])
        }
        Prod(a, b) => {
            let (ka, kb) = (eval(a, p, caps)?, eval(b, p, caps)?);
            check_size(ka.obj.len() * kb.obj.len(), caps)?;
            Eval::node(product(&ka.obj, &kb.obj)?, vec![Rc::new(ka), Rc::new(kb)])
        }
        Sum(a, b) => {
            let (ka, kb) = (eval(a, p, caps)?, eval(b, p, caps)?);
            check_size(1 + ka.obj.len() + kb.obj.len(), caps)?;
            Eval::node(coproduct(&ka.obj, &kb.obj)?, vec![Rc::new(ka), Rc::new(kb)])
        }
        Fun(a, b) => {
            let (ka, kb) = (eval(a, p, caps)?, eval(b, p, caps)?);
            let (fs, maps) = function_space_with_maps(&ka.obj, &kb.obj, caps.elems)?;
            let mut e = Eval::node(fs, vec![Rc::new(ka), Rc::new(kb)]);
            e.maps = Some(maps);
            e
        }
        Compose(outer, inner) => {
            let ki = eval(inner, p, caps)?;
            let ko = eval(outer, &ki.obj, caps)?;
            Eval {
                obj: ko.obj.clone(),
                kids: vec![Rc::new(ki), Rc::new(ko)],
                maps: None,
                index: OnceCell::new(),
            }
        }
    })
}

/// `F(contra, co) : F(A) → F(B)`, given evaluations of `F` at `A` and `B`.
fn act(
    expr: &FunctorExpr,
    ea: &Eval,
    eb: &Eval,
    contra: Option<&MonotoneMap>,
    co: &MonotoneMap,
) -> Result<MonotoneMap> {
    use FunctorExpr::*;
    Ok(match expr {
        Id => co.clone(),
        Const(_) => MonotoneMap::identity(&ea.obj),
        Lift(e) => {
            let m = act(e, &ea.kids[0], &eb.kids[0], contra, co)?;
            lift_map_between(&m, &ea.obj, &eb.obj)
        }
        Prod(a, b) => {
            let ma = act(a, &ea.kids[0], &eb.kids[0], contra, co)?;
            let mb = act(b, &ea.kids[1], &eb.kids[1], contra, co)?;
            product_map_between(&ma, &mb, &ea.obj, &eb.obj)
        }
        Sum(a, b) => {
            let ma = act(a, &ea.kids[0], &eb.kids[0], contra, co)?;
            let mb = act(b, &ea.kids[1], &eb.kids[1], contra, co)?;
            sum_map_between(&ma, &mb, &ea.obj, &eb.obj)
        }
        Fun(g, h) => {
            let contra = contra.ok_or(Error::MixedVariance)?;
            // G(B) → G(A): the argument runs the other way
            let pre = act(g, &eb.kids[0], &ea.kids[0], Some(co), contra)?;
            let post = act(h, &ea.kids[1], &eb.kids[1], Some(contra), co)?;
            let src = ea.maps.as_ref().expect("function space evaluation");
            let index = eb.table_index();
            let mut table = Vec::with_capacity(src.len());
            let mut t = vec![0; eb.kids[0].obj.len()];
            for h in src {
                for (x, slot) in t.iter_mut().enumerate() {
                    *slot = post.apply(h[pre.apply(x)]);
                }
                table.push(*index.get(&t).ok_or_else(|| {
                    Error::Internal("conjugated map is not monotone".into())
                })?);
            }
            MonotoneMap::new_unchecked(ea.obj.clone(), eb.obj.clone(), table)
        }
        Compose(outer, inner) => {
            let ico = act(inner, &ea.kids[0], &eb.kids[0], contra, co)?;
            let icontra = match contra {
                Some(c) => Some(act(inner, &eb.kids[0], &ea.kids[0], Some(co), c)?),
                None => None,
            };
            act(outer, &ea.kids[1], &eb.kids[1], icontra.as_ref(), &ico)?
        }
    })
}

/// Anything with an object part and a mixed-variance map part. Combinator
/// expressions implement it through [`Evaluator`]; the local-continuity
/// checker is generic so it can be pointed at other actions.
pub trait PairAction {
    fn act_obj(&self, p: &Arc<FinPoset>) -> Result<Arc<FinPoset>>;

    /// `F(contra, co) : F(A) → F(B)` for `co : A → B`, `contra : B → A`.
    fn act_maps(&self, contra: &MonotoneMap, co: &MonotoneMap) -> Result<MonotoneMap>;

    /// `PR F f = ⟨F(f^R, f^L), F(f^L, f^R)⟩`, checked to be a pair of the same kind.
    fn act_pair(&self, f: &PairHom) -> Result<PairHom> {
        let l = self.act_maps(f.r(), f.l())?;
        let r = self.act_maps(f.l(), f.r())?;
        PairHom::new(f.kind(), l, r).map_err(|e| {
            Error::Internal(format!("functor image is not a {} pair: {e}", f.kind()))
        })
    }
}

/// Evaluates one expression, caching its value at every object seen.
pub struct Evaluator<'a> {
    expr: &'a FunctorExpr,
    caps: Caps,
    cache: RefCell<Vec<(Arc<FinPoset>, Rc<Eval>)>>,
}

impl Evaluator<'_> {
    fn eval_at(&self, p: &Arc<FinPoset>) -> Result<Rc<Eval>> {
        if let Some((_, e)) = self.cache.borrow().iter().find(|(q, _)| Arc::ptr_eq(q, p) || q == p) {
            return Ok(e.clone());
        }
        let e = Rc::new(eval(self.expr, p, &self.caps)?);
        self.cache.borrow_mut().push((p.clone(), e.clone()));
        Ok(e)
    }

    /// Covariant action on a single map; rejects expressions with `fun`.
    pub fn apply_mor(&self, f: &MonotoneMap) -> Result<MonotoneMap> {
        if !self.expr.is_fun_free() {
            return Err(Error::MixedVariance);
        }
        let (ea, eb) = (self.eval_at(f.dom())?, self.eval_at(f.cod())?);
        act(self.expr, &ea, &eb, None, f)
    }
}

impl PairAction for Evaluator<'_> {
    fn act_obj(&self, p: &Arc<FinPoset>) -> Result<Arc<FinPoset>> {
        Ok(self.eval_at(p)?.obj.clone())
    }

    fn act_maps(&self, contra: &MonotoneMap, co: &MonotoneMap) -> Result<MonotoneMap> {
        if contra.dom() != co.cod() || contra.cod() != co.dom() {
            return Err(Error::ShapeMismatch("contra must run B -> A".into()));
        }
        let (ea, eb) = (self.eval_at(co.dom())?, self.eval_at(co.cod())?);
        act(self.expr, &ea, &eb, Some(contra), co)
    }
}

pub fn apply_obj(f: &FunctorExpr, p: &Arc<FinPoset>, caps: &Caps) -> Result<Arc<FinPoset>> {
    Ok(eval(f, p, caps)?.obj)
}

/// Structural action on a map; only for expressions without `fun`.
pub fn apply_mor(f: &FunctorExpr, m: &MonotoneMap, caps: &Caps) -> Result<MonotoneMap> {
    f.evaluator(*caps).apply_mor(m)
}

/// `PR F` on a single pair.
pub fn pr_apply_mor(f: &FunctorExpr, pair: &PairHom, caps: &Caps) -> Result<PairHom> {
    f.evaluator(*caps).act_pair(pair)
}

/// `PR F` preserves identities at every probe's endpoints and composition
/// of every composable pair of probes.
pub fn check_functor_laws(f: &FunctorExpr, probes: &[PairHom], caps: &Caps) -> Result<bool> {
    let ev = f.evaluator(*caps);
    for p in probes {
        for obj in [p.source(), p.target()] {
            let image = ev.act_pair(&pair_identity(obj, p.kind()))?;
            if image != pair_identity(&ev.act_obj(obj)?, p.kind()) {
                return Ok(false);
            }
        }
    }
    for a in probes {
        for b in probes {
            if a.kind() != b.kind() || a.target() != b.source() {
                continue;
            }
            let lhs = ev.act_pair(&pair_compose(b, a)?)?;
            let rhs = pair_compose(&ev.act_pair(b)?, &ev.act_pair(a)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Local continuity of `action` on the hom-posets between `a` and `b`.
///
/// Checks that `(contra, co) ↦ F(contra, co)` is monotone on the full
/// hom-posets `[B → A] × [A → B]`, that the image of a witnessed chain's lub
/// is the lub of the images, and that `PR F` is monotone on the pair
/// hom-posets of both kinds.
pub fn check_local_continuity(action: &impl PairAction, a: &Arc<FinPoset>, b: &Arc<FinPoset>, caps: &Caps) -> Result<bool> {
    let maps = |x: &Arc<FinPoset>, y: &Arc<FinPoset>| -> Result<Vec<MonotoneMap>> {
        monotone_maps(x, y, caps.elems)?
            .into_iter()
            .map(|t| MonotoneMap::new(x.clone(), y.clone(), t))
            .collect()
    };
    let cos = maps(a, b)?;
    let contras = maps(b, a)?;
    let mut img = Vec::with_capacity(contras.len());
    for c in &contras {
        img.push(
            cos.iter()
                .map(|f| action.act_maps(c, f))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let steps = |v: &[MonotoneMap]| -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for i in 0..v.len() {
            for j in 0..v.len() {
                if leq_map(&v[i], &v[j])? {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    };
    let contra_steps = steps(&contras)?;
    let co_steps = steps(&cos)?;
    for &(i, i2) in &contra_steps {
        for &(j, j2) in &co_steps {
            let (lo, hi) = (&img[i][j], &img[i2][j2]);
            if !leq_map(lo, hi)? {
                return Ok(false);
            }
            // the chain lo ≤ hi has lub hi; so must its image under F
            let args = MapChain::new(vec![cos[j].clone(), cos[j2].clone()], 1)?;
            let lub_arg = lub_map_chain(&args)?;
            let lub_img = lub_map_chain(&MapChain::new(vec![lo.clone(), hi.clone()], 1)?)?;
            if action.act_maps(&contras[i2], &lub_arg)? != lub_img {
                return Ok(false);
            }
        }
    }
    for kind in [PairKind::Ep, PairKind::Adj] {
        let pairs = match enumerate_pairs(a, b, kind, caps) {
            Ok(p) => p,
            Err(Error::CapExceeded { .. }) => continue,
            Err(e) => return Err(e),
        };
        let images = pairs.iter().map(|p| action.act_pair(p)).collect::<Result<Vec<_>>>()?;
        for (x, fx) in pairs.iter().zip(&images) {
            for (y, fy) in pairs.iter().zip(&images) {
                if pair_leq(x, y)? && !pair_leq(fx, fy)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Image of a cocone under `PR F`, with the verdicts on the image.
#[derive(Debug, Clone)]
pub struct Preservation {
    pub image: Cocone,
    pub colimiting: bool,
    pub locally_determined: LdReport,
}

/// Image of a chain under `PR F`, keeping the stabilization witness.
pub fn image_chain(ev: &Evaluator<'_>, d: &OmegaChain) -> Result<OmegaChain> {
    let objects = d
        .objects()
        .iter()
        .map(|p| ev.act_obj(p))
        .collect::<Result<Vec<_>>>()?;
    let links = d.links().iter().map(|l| ev.act_pair(l)).collect::<Result<Vec<_>>>()?;
    OmegaChain::new(d.kind(), objects, links, d.stab_index())
}

pub fn preserves_cocone(f: &FunctorExpr, k: &Cocone, caps: &Caps) -> Result<Preservation> {
    let ev = f.evaluator(*caps);
    let apex = ev.act_obj(k.apex())?;
    let chain = image_chain(&ev, k.chain())?;
    let legs = k.legs().iter().map(|c| ev.act_pair(c)).collect::<Result<Vec<_>>>()?;
    let image = Cocone::new(chain, apex, legs)?;
    let colimiting = is_colimiting(&image, caps)?;
    let locally_determined = check_local_determination(&image)?;
    Ok(Preservation {
        image,
        colimiting,
        locally_determined,
    })
}

/// Every expression of depth at most `depth` whose leaves are `D` or one
/// of `constants`.
pub fn functor_family(depth: usize, constants: &[NamedPoset]) -> Vec<FunctorExpr> {
    let mut level: Vec<FunctorExpr> = std::iter::once(FunctorExpr::Id)
        .chain(constants.iter().cloned().map(FunctorExpr::Const))
        .collect();
    for _ in 0..depth {
        let mut next: Vec<FunctorExpr> = std::iter::once(FunctorExpr::Id)
            .chain(constants.iter().cloned().map(FunctorExpr::Const))
            .collect();
        next.extend(level.iter().cloned().map(FunctorExpr::lift));
        for ctor in [FunctorExpr::prod, FunctorExpr::sum, FunctorExpr::fun, FunctorExpr::compose] {
            for a in &level {
                for b in &level {
                    next.push(ctor(a.clone(), b.clone()));
                }
            }
        }
        level = next;
    }
    level
}
