//! Poset constructions and their actions on maps.
//!
//! Element names are derived deterministically: `(a,b)` for products,
//! `bot`/`up(x)` for lifts, `bot`/`inl(x)`/`inr(y)` for sums and
//! `[x->y,...]` for elements of a function space. Element positions are
//! fixed too, so the map actions below work on indices alone.

use std::sync::Arc;

use super::{FinPoset, MonotoneMap};
use crate::error::{Error, Result};

/// Name of the fresh bottom added by [`lift`] and [`coproduct`].
pub const BOTTOM_NAME: &str = "bot";

pub(crate) fn pair_name(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

pub(crate) fn map_name(dom: &FinPoset, cod: &FinPoset, table: &[usize]) -> String {
    let mut s = String::from("[");
    for (x, &y) in table.iter().enumerate() {
        if x > 0 {
            s.push(',');
        }
        s.push_str(dom.name(x));
        s.push_str("->");
        s.push_str(cod.name(y));
    }
    s.push(']');
    s
}

/// Cartesian product with the componentwise order.
pub fn product(p: &FinPoset, q: &FinPoset) -> Result<FinPoset> {
    let (n, m) = (p.len(), q.len());
    let mut elems = Vec::with_capacity(n * m);
    for a in p.elems() {
        for b in q.elems() {
            elems.push(pair_name(a, b));
        }
    }
    let size = n * m;
    let mut leq = vec![false; size * size];
    for i in 0..size {
        for j in 0..size {
            leq[i * size + j] = p.leq(i / m, j / m) && q.leq(i % m, j % m);
        }
    }
    let bottom = match (p.bottom(), q.bottom()) {
        (Some(a), Some(b)) => Some(a * m + b),
        _ => None,
    };
    FinPoset::from_parts(elems, leq, bottom)
}

/// `p` with a fresh bottom strictly below every element.
pub fn lift(p: &FinPoset) -> Result<FinPoset> {
    let n = p.len() + 1;
    let mut elems = Vec::with_capacity(n);
    elems.push(BOTTOM_NAME.to_string());
    elems.extend(p.elems().iter().map(|e| format!("up({e})")));
    let mut leq = vec![false; n * n];
    for j in 0..n {
        leq[j] = true;
    }
    for i in 1..n {
        for j in 1..n {
            leq[i * n + j] = p.leq(i - 1, j - 1);
        }
    }
    FinPoset::from_parts(elems, leq, Some(0))
}

/// Sum of two pointed posets: their disjoint union placed above a fresh
/// bottom. Each summand keeps its own bottom.
pub fn coproduct(p: &FinPoset, q: &FinPoset) -> Result<FinPoset> {
    if !p.is_pointed() || !q.is_pointed() {
        return Err(Error::NotPointed);
    }
    let (np, nq) = (p.len(), q.len());
    let n = 1 + np + nq;
    let mut elems = Vec::with_capacity(n);
    elems.push(BOTTOM_NAME.to_string());
    elems.extend(p.elems().iter().map(|e| format!("inl({e})")));
    elems.extend(q.elems().iter().map(|e| format!("inr({e})")));
    let mut leq = vec![false; n * n];
    for j in 0..n {
        leq[j] = true;
    }
    for i in 0..np {
        for j in 0..np {
            leq[(1 + i) * n + 1 + j] = p.leq(i, j);
        }
    }
    for i in 0..nq {
        for j in 0..nq {
            leq[(1 + np + i) * n + 1 + np + j] = q.leq(i, j);
        }
    }
    FinPoset::from_parts(elems, leq, Some(0))
}

/// Calls `visit` on every monotone map `p -> q` (as an index table in
/// domain order). `fixed[x] = Some(v)` pins the image of `x`; `injective`
/// skips maps that identify two elements.
pub(crate) fn visit_monotone_maps(
    p: &FinPoset,
    q: &FinPoset,
    injective: bool,
    fixed: &[Option<usize>],
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let n = p.len();
    // Linear extension: strict down-sets grow along the order.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| p.leq(y, x)).count());
    let preds: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(k, &x)| (0..k).filter(|&j| p.leq(order[j], x)).collect())
        .collect();

    struct Ctx<'a> {
        order: Vec<usize>,
        preds: Vec<Vec<usize>>,
        q: &'a FinPoset,
        injective: bool,
        fixed: &'a [Option<usize>],
        table: Vec<usize>,
        used: Vec<bool>,
    }
    fn go(k: usize, c: &mut Ctx<'_>, visit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
        if k == c.order.len() {
            return visit(&c.table);
        }
        let x = c.order[k];
        let range = match c.fixed.get(x).copied().flatten() {
            Some(v) => v..v + 1,
            None => 0..c.q.len(),
        };
        for v in range {
            if c.injective && c.used[v] {
                continue;
            }
            if c.preds[k].iter().all(|&j| c.q.leq(c.table[c.order[j]], v)) {
                c.table[x] = v;
                c.used[v] = true;
                go(k + 1, c, visit)?;
                c.used[v] = false;
            }
        }
        Ok(())
    }
    let mut ctx = Ctx {
        order,
        preds,
        q,
        injective,
        fixed,
        table: vec![0; n],
        used: vec![false; q.len()],
    };
    go(0, &mut ctx, visit)
}

/// All monotone maps `p -> q` as index tables, in lexicographic order.
/// Fails once more than `limit` maps have been found.
pub fn monotone_maps(p: &FinPoset, q: &FinPoset, limit: usize) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    visit_monotone_maps(p, q, false, &[], &mut |t| {
        if out.len() == limit {
            return Err(Error::CapExceeded {
                what: "monotone maps",
                needed: limit + 1,
                cap: limit,
            });
        }
        out.push(t.to_vec());
        Ok(())
    })?;
    out.sort_unstable();
    Ok(out)
}

/// The poset of monotone maps `p -> q` under the pointwise order, together
/// with the table of each element. Pointed when `q` is.
pub fn function_space_with_maps(
    p: &FinPoset,
    q: &FinPoset,
    cap: usize,
) -> Result<(FinPoset, Vec<Vec<usize>>)> {
    let maps = monotone_maps(p, q, cap).map_err(|e| match e {
        Error::CapExceeded { needed, cap, .. } => Error::CapExceeded {
            what: "function space elements",
            needed,
            cap,
        },
        other => other,
    })?;
    let size = maps.len();
    let elems = maps.iter().map(|t| map_name(p, q, t)).collect();
    let mut leq = vec![false; size * size];
    for i in 0..size {
        for j in 0..size {
            leq[i * size + j] = maps[i].iter().zip(&maps[j]).all(|(&a, &b)| q.leq(a, b));
        }
    }
    let bottom = q
        .bottom()
        .map(|b| maps.iter().position(|t| t.iter().all(|&v| v == b)).expect("constant map is monotone"));
    Ok((FinPoset::from_parts(elems, leq, bottom)?, maps))
}

/// The poset of monotone maps `p -> q`, refusing results larger than `cap`.
pub fn function_space(p: &FinPoset, q: &FinPoset, cap: usize) -> Result<FinPoset> {
    function_space_with_maps(p, q, cap).map(|(fs, _)| fs)
}

pub(crate) fn lift_map_between(f: &MonotoneMap, dom: &Arc<FinPoset>, cod: &Arc<FinPoset>) -> MonotoneMap {
    debug_assert_eq!(dom.len(), f.dom().len() + 1);
    debug_assert_eq!(cod.len(), f.cod().len() + 1);
    let mut table = Vec::with_capacity(dom.len());
    table.push(0);
    table.extend(f.table().iter().map(|&y| y + 1));
    MonotoneMap::new_unchecked(dom.clone(), cod.clone(), table)
}

/// Action of [`lift`] on maps: fixes the new bottom, acts as `f` above it.
pub fn lift_map(f: &MonotoneMap) -> Result<MonotoneMap> {
    let dom = Arc::new(lift(f.dom())?);
    let cod = Arc::new(lift(f.cod())?);
    Ok(lift_map_between(f, &dom, &cod))
}

pub(crate) fn product_map_between(
    f: &MonotoneMap,
    g: &MonotoneMap,
    dom: &Arc<FinPoset>,
    cod: &Arc<FinPoset>,
) -> MonotoneMap {
    let (m, m2) = (g.dom().len(), g.cod().len());
    debug_assert_eq!(dom.len(), f.dom().len() * m);
    let table = (0..dom.len())
        .map(|i| f.apply(i / m) * m2 + g.apply(i % m))
        .collect();
    MonotoneMap::new_unchecked(dom.clone(), cod.clone(), table)
}

/// `f × g`, acting componentwise.
pub fn product_map(f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
    let dom = Arc::new(product(f.dom(), g.dom())?);
    let cod = Arc::new(product(f.cod(), g.cod())?);
    Ok(product_map_between(f, g, &dom, &cod))
}

pub(crate) fn sum_map_between(
    f: &MonotoneMap,
    g: &MonotoneMap,
    dom: &Arc<FinPoset>,
    cod: &Arc<FinPoset>,
) -> MonotoneMap {
    let (np, np2) = (f.dom().len(), f.cod().len());
    let mut table = Vec::with_capacity(dom.len());
    table.push(0);
    table.extend(f.table().iter().map(|&y| 1 + y));
    table.extend(g.table().iter().map(|&y| 1 + np2 + y));
    debug_assert_eq!(table.len(), 1 + np + g.dom().len());
    MonotoneMap::new_unchecked(dom.clone(), cod.clone(), table)
}

/// `f + g` on sums: fixes the fresh bottom and acts on each summand.
pub fn sum_map(f: &MonotoneMap, g: &MonotoneMap) -> Result<MonotoneMap> {
    let dom = Arc::new(coproduct(f.dom(), g.dom())?);
    let cod = Arc::new(coproduct(f.cod(), g.cod())?);
    Ok(sum_map_between(f, g, &dom, &cod))
}
