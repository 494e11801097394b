//! Finite posets, monotone maps between them, and the constructions that
//! back the functor combinators.
//!
//! Every finite poset is an ω-cpo (increasing chains stabilize), and a map
//! between finite posets is continuous exactly when it is monotone, so the
//! hom-sets here are finite posets under the pointwise order.

mod canon;
mod construct;

pub use canon::{canonical_form, canonical_labeling, iso_check, CANON_LEAF_BUDGET};
pub use construct::{
    coproduct, function_space, function_space_with_maps, lift, lift_map, monotone_maps,
    product, product_map, sum_map, BOTTOM_NAME,
};
pub(crate) use construct::{
    lift_map_between, product_map_between, sum_map_between,
    visit_monotone_maps,
};

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Axiom, Error, Result};

/// Wire form of a poset: element names, a square `leq` table indexed by
/// element position, and an optional declared bottom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetData {
    pub elems: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub bottom: Option<String>,
}

impl PosetData {
    /// Checks every poset axiom, reporting the first one violated together
    /// with witness elements.
    pub fn validate(&self) -> Result<()> {
        let n = self.elems.len();
        if self.leq.len() != n {
            return Err(violation(Axiom::Shape, &[]));
        }
        for (i, row) in self.leq.iter().enumerate() {
            if row.len() != n {
                return Err(violation(Axiom::Shape, &[&self.elems[i]]));
            }
        }
        let mut seen = HashMap::with_capacity(n);
        for (i, e) in self.elems.iter().enumerate() {
            if let Some(j) = seen.insert(e.as_str(), i) {
                return Err(violation(Axiom::Distinctness, &[&self.elems[j], e]));
            }
        }
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(violation(Axiom::Reflexivity, &[&self.elems[i]]));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.leq[i][j] && self.leq[j][i] {
                    return Err(violation(
                        Axiom::Antisymmetry,
                        &[&self.elems[i], &self.elems[j]],
                    ));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.leq[j][k] && !self.leq[i][k] {
                        return Err(violation(
                            Axiom::Transitivity,
                            &[&self.elems[i], &self.elems[j], &self.elems[k]],
                        ));
                    }
                }
            }
        }
        if let Some(b) = &self.bottom {
            let Some(&bi) = seen.get(b.as_str()) else {
                return Err(violation(Axiom::Bottom, &[b]));
            };
            for x in 0..n {
                if !self.leq[bi][x] {
                    return Err(violation(Axiom::Bottom, &[b, &self.elems[x]]));
                }
            }
        }
        Ok(())
    }
}

fn violation(axiom: Axiom, witness: &[&String]) -> Error {
    Error::Violation {
        axiom,
        witness: witness.iter().map(|s| (*s).clone()).collect(),
    }
}

/// Validates raw poset data.
pub fn validate_poset(p: &PosetData) -> Result<()> {
    p.validate()
}

/// A validated finite poset. Immutable once built.
#[derive(Clone)]
pub struct FinPoset {
    elems: Vec<String>,
    leq: Vec<bool>,
    bottom: Option<usize>,
    /// Name lookup, built on first use.
    index: OnceLock<HashMap<String, usize>>,
}

impl FinPoset {
    pub fn new(elems: Vec<String>, leq: Vec<Vec<bool>>, bottom: Option<String>) -> Result<Self> {
        Self::from_data(PosetData { elems, leq, bottom })
    }

    pub fn from_data(data: PosetData) -> Result<Self> {
        data.validate()?;
        let n = data.elems.len();
        let mut leq = Vec::with_capacity(n * n);
        for row in &data.leq {
            leq.extend_from_slice(row);
        }
        let bottom = data
            .bottom
            .as_ref()
            .and_then(|b| data.elems.iter().position(|e| e == b));
        Ok(FinPoset {
            elems: data.elems,
            leq,
            bottom,
            index: OnceLock::new(),
        })
    }

    /// Builds a poset from a generating relation: the result is its
    /// reflexive-transitive closure. Fails if the closure is not antisymmetric.
    pub fn from_relation<S: AsRef<str>>(
        elems: &[S],
        rel: &[(S, S)],
        bottom: Option<&str>,
    ) -> Result<Self> {
        let elems: Vec<String> = elems.iter().map(|s| s.as_ref().to_string()).collect();
        let n = elems.len();
        let pos = |s: &str| {
            elems
                .iter()
                .position(|e| e == s)
                .ok_or_else(|| Error::UnknownElement(s.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in rel {
            leq[pos(a.as_ref())?][pos(b.as_ref())?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::new(elems, leq, bottom.map(str::to_string))
    }

    /// Internal constructor for data already known to be a partial order.
    pub(crate) fn from_parts(elems: Vec<String>, leq: Vec<bool>, bottom: Option<usize>) -> Result<Self> {
        let mut sorted: Vec<&String> = elems.iter().collect();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(violation(Axiom::Distinctness, &[w[0], w[0]]));
        }
        Ok(FinPoset {
            elems,
            leq,
            bottom,
            index: OnceLock::new(),
        })
    }

    /// The one-point poset `{*}`.
    pub fn one() -> Self {
        Self::from_parts(vec!["*".into()], vec![true], Some(0)).expect("one-point poset")
    }

    /// The chain `0 < 1 < ... < n-1`, pointed at `0` when nonempty.
    pub fn chain(n: usize) -> Self {
        let elems = (0..n).map(|i| i.to_string()).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in i..n {
                leq[i * n + j] = true;
            }
        }
        Self::from_parts(elems, leq, (n > 0).then_some(0)).expect("chain")
    }

    /// `n` pairwise incomparable points `a0 .. a{n-1}`.
    pub fn antichain(n: usize) -> Self {
        let elems = (0..n).map(|i| format!("a{i}")).collect();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        Self::from_parts(elems, leq, (n == 1).then_some(0)).expect("antichain")
    }

    /// `⊥ < a, b < ⊤` with `a`, `b` incomparable.
    pub fn diamond() -> Self {
        Self::from_relation(
            &["bot", "a", "b", "top"],
            &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
            Some("bot"),
        )
        .expect("diamond")
    }

    /// Two incomparable points under a bottom.
    pub fn vee() -> Self {
        Self::from_relation(&["bot", "a", "b"], &[("bot", "a"), ("bot", "b")], Some("bot"))
            .expect("vee")
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[String] {
        &self.elems
    }

    pub fn name(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index
            .get_or_init(|| self.elems.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect())
            .get(name)
            .copied()
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elems.len() + j]
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn is_pointed(&self) -> bool {
        self.bottom.is_some()
    }

    /// The least element, whether or not it was declared as the bottom.
    pub fn least(&self) -> Option<usize> {
        let n = self.len();
        (0..n).find(|&b| (0..n).all(|x| self.leq(b, x)))
    }

    pub fn to_data(&self) -> PosetData {
        let n = self.len();
        PosetData {
            elems: self.elems.clone(),
            leq: (0..n)
                .map(|i| (0..n).map(|j| self.leq(i, j)).collect())
                .collect(),
            bottom: self.bottom.map(|b| self.elems[b].clone()),
        }
    }

    /// Copy of this poset with every element renamed by `f`.
    pub fn renamed(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let elems = self.elems.iter().map(|e| f(e)).collect();
        Self::from_parts(elems, self.leq.clone(), self.bottom)
    }
}

impl PartialEq for FinPoset {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.elems == other.elems && self.leq == other.leq && self.bottom == other.bottom)
    }
}

impl Eq for FinPoset {}

impl Hash for FinPoset {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
        self.leq.hash(state);
        self.bottom.hash(state);
    }
}

impl fmt::Debug for FinPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let mut rel = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) {
                    rel.push(format!("{}<{}", self.elems[i], self.elems[j]));
                }
            }
        }
        f.debug_struct("FinPoset")
            .field("elems", &self.elems)
            .field("lt", &rel)
            .field("bottom", &self.bottom.map(|b| &self.elems[b]))
            .finish()
    }
}

impl TryFrom<PosetData> for FinPoset {
    type Error = Error;
    fn try_from(d: PosetData) -> Result<Self> {
        FinPoset::from_data(d)
    }
}

/// True iff `table` is an order-preserving total map `dom -> cod`.
pub fn is_monotone(dom: &FinPoset, cod: &FinPoset, table: &[usize]) -> bool {
    let n = dom.len();
    if table.len() != n || table.iter().any(|&v| v >= cod.len()) {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            if dom.leq(x, y) && !cod.leq(table[x], table[y]) {
                return false;
            }
        }
    }
    true
}

/// An order-preserving map between two finite posets.
#[derive(Clone)]
pub struct MonotoneMap {
    dom: Arc<FinPoset>,
    cod: Arc<FinPoset>,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(dom: Arc<FinPoset>, cod: Arc<FinPoset>, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, domain has {} elements",
                table.len(),
                dom.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= cod.len()) {
            return Err(Error::OutOfRange(format!("codomain index {v}")));
        }
        let n = dom.len();
        for x in 0..n {
            for y in 0..n {
                if dom.leq(x, y) && !cod.leq(table[x], table[y]) {
                    return Err(Error::NotMonotone {
                        x: dom.name(x).into(),
                        y: dom.name(y).into(),
                    });
                }
            }
        }
        Ok(MonotoneMap { dom, cod, table })
    }

    pub(crate) fn new_unchecked(dom: Arc<FinPoset>, cod: Arc<FinPoset>, table: Vec<usize>) -> Self {
        debug_assert!(is_monotone(&dom, &cod, &table));
        MonotoneMap { dom, cod, table }
    }

    /// Builds a map from `(source, target)` element-name pairs.
    pub fn from_names(dom: Arc<FinPoset>, cod: Arc<FinPoset>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut table = vec![usize::MAX; dom.len()];
        for (a, b) in pairs {
            table[dom.require(a)?] = cod.require(b)?;
        }
        if let Some(i) = table.iter().position(|&v| v == usize::MAX) {
            return Err(Error::ShapeMismatch(format!(
                "no image given for {:?}",
                dom.name(i)
            )));
        }
        Self::new(dom, cod, table)
    }

    pub fn identity(p: &Arc<FinPoset>) -> Self {
        MonotoneMap {
            dom: p.clone(),
            cod: p.clone(),
            table: (0..p.len()).collect(),
        }
    }

    pub fn constant(dom: &Arc<FinPoset>, cod: &Arc<FinPoset>, value: usize) -> Result<Self> {
        if value >= cod.len() {
            return Err(Error::OutOfRange(format!("codomain index {value}")));
        }
        Ok(MonotoneMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table: vec![value; dom.len()],
        })
    }

    pub fn dom(&self) -> &Arc<FinPoset> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinPoset> {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn apply_name(&self, x: &str) -> Result<&str> {
        Ok(self.cod.name(self.table[self.dom.require(x)?]))
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(i, &v)| i == v)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        for &v in &self.table {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// The inverse map when this is an order-isomorphism.
    pub fn inverse(&self) -> Option<MonotoneMap> {
        if self.dom.len() != self.cod.len() || !self.is_injective() {
            return None;
        }
        let mut inv = vec![0; self.cod.len()];
        for (x, &y) in self.table.iter().enumerate() {
            inv[y] = x;
        }
        is_monotone(&self.cod, &self.dom, &inv).then(|| MonotoneMap {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            table: inv,
        })
    }

    /// `(source, target)` element names, in domain order.
    pub fn named_table(&self) -> Vec<(String, String)> {
        self.table
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.dom.name(x).to_string(), self.cod.name(y).to_string()))
            .collect()
    }
}

impl PartialEq for MonotoneMap {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.dom == other.dom && self.cod == other.cod
    }
}

impl Eq for MonotoneMap {}

impl Hash for MonotoneMap {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.table.hash(state);
    }
}

impl fmt::Debug for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (a, b)) in self.named_table().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}->{b}")?;
        }
        f.write_str("}")
    }
}

/// `g ∘ f`. Requires `cod(f) = dom(g)` as posets (no implicit relabeling).
pub fn compose(g: &MonotoneMap, f: &MonotoneMap) -> Result<MonotoneMap> {
    if f.cod != g.dom {
        return Err(Error::DomainMismatch(format!(
            "cannot compose: codomain {:?} vs domain {:?}",
            f.cod.elems(),
            g.dom.elems()
        )));
    }
    Ok(MonotoneMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        table: f.table.iter().map(|&x| g.table[x]).collect(),
    })
}

pub fn identity(p: &Arc<FinPoset>) -> MonotoneMap {
    MonotoneMap::identity(p)
}

fn same_shape(f: &MonotoneMap, g: &MonotoneMap) -> Result<()> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::ShapeMismatch(
            "maps do not share domain and codomain".into(),
        ));
    }
    Ok(())
}

/// Pointwise order: `f ≤ g` iff `f(x) ≤ g(x)` for every `x`.
pub fn leq_map(f: &MonotoneMap, g: &MonotoneMap) -> Result<bool> {
    same_shape(f, g)?;
    Ok(f
        .table
        .iter()
        .zip(&g.table)
        .all(|(&a, &b)| f.cod.leq(a, b)))
}

/// An increasing chain of maps with an explicit stabilization witness:
/// every term from `stab_index` on equals `terms[stab_index]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapChain {
    terms: Vec<MonotoneMap>,
    stab_index: usize,
}

impl MapChain {
    pub fn new(terms: Vec<MonotoneMap>, stab_index: usize) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::ShapeMismatch("empty map chain".into()));
        };
        for t in &terms[1..] {
            same_shape(first, t)?;
        }
        if stab_index >= terms.len() {
            return Err(Error::OutOfRange(format!(
                "stab_index {stab_index} for chain of length {}",
                terms.len()
            )));
        }
        Ok(MapChain { terms, stab_index })
    }

    pub fn terms(&self) -> &[MonotoneMap] {
        &self.terms
    }

    pub fn stab_index(&self) -> usize {
        self.stab_index
    }
}

/// Least upper bound of a witnessed increasing chain of maps.
///
/// Rejects a chain that is not increasing (naming the first offending
/// stage) and a witness some later term disagrees with.
pub fn lub_map_chain(c: &MapChain) -> Result<MonotoneMap> {
    for (i, w) in c.terms.windows(2).enumerate() {
        if !leq_map(&w[0], &w[1])? {
            return Err(Error::NotIncreasing { stage: i });
        }
    }
    let lub = &c.terms[c.stab_index];
    if let Some(j) = (c.stab_index..c.terms.len()).find(|&j| c.terms[j] != *lub) {
        return Err(Error::BadWitness {
            index: c.stab_index,
            failing: j,
        });
    }
    Ok(lub.clone())
}

/// Lub of a witnessed increasing chain of elements of `p`.
pub fn lub_elem_chain(p: &FinPoset, terms: &[usize], stab_index: usize) -> Result<usize> {
    if stab_index >= terms.len() {
        return Err(Error::OutOfRange(format!("stab_index {stab_index}")));
    }
    for (i, w) in terms.windows(2).enumerate() {
        if !p.leq(w[0], w[1]) {
            return Err(Error::NotIncreasing { stage: i });
        }
    }
    if let Some(j) = (stab_index..terms.len()).find(|&j| terms[j] != terms[stab_index]) {
        return Err(Error::BadWitness {
            index: stab_index,
            failing: j,
        });
    }
    Ok(terms[stab_index])
}

#[cfg(test)]
mod tests;
