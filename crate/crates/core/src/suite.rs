//! Seeded property suite shared by `epsolve verify-theorems` and the
//! acceptance target. Each criterion reports counts, a verdict and, on
//! failure, a JSON counterexample.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chains::{
    check_local_determination, check_local_determination_ep, colimit_finite, is_colimiting,
    link_composite, Cocone, OmegaChain,
};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{canonical_form, compose, leq_map, lub_map_chain, monotone_maps, FinPoset, MapChain, MonotoneMap};
use crate::fixtures::{counterexample_cocone, one_two_two_chain};
use crate::functors::{apply_obj, functor_family, named_constant, preserves_cocone, FunctorExpr};
use crate::gen::{all_posets, random_chain, random_map_chain};
use crate::json::encode_cocone;
use crate::opairs::{enumerate_pairs, pair_compose, PairKind};
use crate::presheaf::{check_fully_faithful, enumerate_nat_trans, one_two_category, verify_proof_step, yoneda};
use crate::solver::{parse_equation, solve};

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub description: String,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub detail: String,
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Largest chain object.
    pub max_size: usize,
    /// Most objects per chain.
    pub max_len: usize,
    pub chains: usize,
    /// Largest apex tried when enumerating cocones.
    pub apex_max: usize,
    pub functor_depth: usize,
    pub lub_cases: usize,
    pub caps: Caps,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            max_size: 4,
            max_len: 5,
            chains: 200,
            apex_max: 5,
            functor_depth: 2,
            lub_cases: 50,
            caps: Caps {
                elems: 64,
                ..Caps::default()
            },
        }
    }
}

fn criterion(id: &str, description: &str) -> CriterionResult {
    CriterionResult {
        id: id.into(),
        description: description.into(),
        passed: true,
        checked: 0,
        skipped: 0,
        detail: String::new(),
        counterexample: None,
    }
}

fn fail(c: &mut CriterionResult, payload: Value) {
    c.passed = false;
    if c.counterexample.is_none() {
        c.counterexample = Some(payload);
    }
}

fn salt(kind: PairKind) -> u64 {
    match kind {
        PairKind::Ep => 0x51ed_0001,
        PairKind::Adj => 0x51ed_0002,
    }
}

/// The seeded chains used by the cocone criteria; half are drawn from
/// pointed posets only.
pub fn suite_chains(cfg: &SuiteConfig, kind: PairKind) -> Result<Vec<OmegaChain>> {
    let pool = all_posets(cfg.max_size);
    let pointed: Vec<Arc<FinPoset>> = pool.iter().filter(|p| p.is_pointed()).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt(kind));
    (0..cfg.chains)
        .map(|_| {
            let from = if rng.random_bool(0.5) { &pointed } else { &pool };
            random_chain(&mut rng, kind, from, cfg.max_len, &cfg.caps)
        })
        .collect()
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    cocones: usize,
    colimiting_not_ld: usize,
    violation: Option<Value>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.checked += o.checked;
        self.skipped += o.skipped;
        self.cocones += o.cocones;
        self.colimiting_not_ld += o.colimiting_not_ld;
        self.violation = self.violation.or(o.violation);
        self
    }
}

/// Every cocone over `d` whose apex is one of `apexes`: the last leg is any
/// enumerated pair, the earlier legs are forced by commutation.
fn ld_implies_colimiting(d: &OmegaChain, apexes: &[Arc<FinPoset>], caps: &Caps) -> Result<Tally> {
    let mut t = Tally::default();
    let last = d.last_index();
    let composites = (0..=last).map(|n| link_composite(d, n, last)).collect::<Result<Vec<_>>>()?;
    for c in apexes {
        let pairs = match enumerate_pairs(&d.objects()[last], c, d.kind(), caps) {
            Ok(p) => p,
            Err(Error::CapExceeded { .. }) => {
                t.skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        for top in pairs {
            let legs = composites.iter().map(|dn| pair_compose(&top, dn)).collect::<Result<Vec<_>>>()?;
            let k = Cocone::new(d.clone(), c.clone(), legs)?;
            t.cocones += 1;
            let ld = check_local_determination(&k)?;
            let colim = is_colimiting(&k, caps)?;
            if ld.verdict {
                t.checked += 1;
                if !colim && t.violation.is_none() {
                    t.violation = Some(json!({ "cocone": encode_cocone(&k), "ld": ld }));
                }
            } else if colim {
                t.colimiting_not_ld += 1;
            }
        }
    }
    Ok(t)
}

/// LD ⟹ colimiting over every enumerable cocone on the given chains.
pub fn check_ld_implies_colimiting(cfg: &SuiteConfig, chains: &[OmegaChain], id: &str) -> Result<CriterionResult> {
    let kind = chains.first().map_or(PairKind::Ep, OmegaChain::kind);
    let mut c = criterion(
        id,
        &format!("{kind} chains: every locally determined cocone (apex ≤ {} elements) is colimiting", cfg.apex_max),
    );
    let apexes = all_posets(cfg.apex_max);
    let t = chains
        .par_iter()
        .map(|d| ld_implies_colimiting(d, &apexes, &cfg.caps))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    c.checked = t.checked;
    c.skipped = t.skipped;
    c.detail = format!(
        "{} chains, {} cocones, {} locally determined, {} colimiting but not locally determined",
        chains.len(),
        t.cocones,
        t.checked,
        t.colimiting_not_ld
    );
    if let Some(v) = t.violation {
        fail(&mut c, v);
    }
    if chains.is_empty() || t.checked == 0 {
        c.passed = false;
        c.detail.push_str("; nothing was checked");
    }
    Ok(c)
}

/// Image sizes `|F(p)|` for every family member, `None` on a cap or
/// pointedness failure.
fn image_sizes(family: &[FunctorExpr], p: &Arc<FinPoset>, caps: &Caps) -> Result<Vec<Option<usize>>> {
    family
        .par_iter()
        .map(|f| match apply_obj(f, p, caps) {
            Ok(q) => Ok(Some(q.len())),
            Err(Error::CapExceeded { .. } | Error::NotPointed) => Ok(None),
            Err(e) => Err(e),
        })
        .collect()
}

/// Every family member maps each canonical colimit to a colimiting,
/// locally determined cocone.
pub fn check_preservation(cfg: &SuiteConfig, chains: &[OmegaChain], id: &str) -> Result<CriterionResult> {
    let kind = chains.first().map_or(PairKind::Ep, OmegaChain::kind);
    let consts = [named_constant("1").expect("builtin"), named_constant("2").expect("builtin")];
    let family = functor_family(cfg.functor_depth, &consts);
    let mut c = criterion(
        id,
        &format!(
            "{kind} chains: each of the {} functor expressions of depth ≤ {} over {{1, 2-chain}} preserves every canonical colimit (a generated family, not all locally continuous functors)",
            family.len(),
            cfg.functor_depth
        ),
    );
    let colimits = chains.iter().map(colimit_finite).collect::<Result<Vec<_>>>()?;
    let mut sizes: HashMap<String, Vec<Option<usize>>> = HashMap::new();
    for k in &colimits {
        let form = canonical_form(k.apex())?;
        if !sizes.contains_key(&form) {
            sizes.insert(form, image_sizes(&family, k.apex(), &cfg.caps)?);
        }
    }
    let forms = colimits.iter().map(|k| canonical_form(k.apex())).collect::<Result<Vec<_>>>()?;
    let t = colimits
        .par_iter()
        .zip(&forms)
        .map(|(k, form)| -> Result<Tally> {
            let mut t = Tally::default();
            for (f, size) in family.iter().zip(&sizes[form]) {
                // the mediator search pairs the image apex with itself
                match size {
                    Some(s) if s * s <= cfg.caps.pair_product => {}
                    _ => {
                        t.skipped += 1;
                        continue;
                    }
                }
                match preserves_cocone(f, k, &cfg.caps) {
                    Ok(p) => {
                        t.checked += 1;
                        if !(p.colimiting && p.locally_determined.verdict) && t.violation.is_none() {
                            t.violation = Some(json!({
                                "functor": f.to_string(),
                                "cocone": encode_cocone(k),
                                "image_colimiting": p.colimiting,
                                "image_ld": p.locally_determined,
                            }));
                        }
                    }
                    Err(Error::CapExceeded { .. } | Error::NotPointed) => t.skipped += 1,
                    Err(e) => {
                        if t.violation.is_none() {
                            t.violation = Some(json!({ "functor": f.to_string(), "cocone": encode_cocone(k), "error": e.to_string() }));
                        }
                    }
                }
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    c.checked = t.checked;
    c.skipped = t.skipped;
    c.detail = format!(
        "{} colimits × {} functors: {} preserved, {} skipped by caps or pointedness",
        colimits.len(),
        family.len(),
        t.checked,
        t.skipped
    );
    if let Some(v) = t.violation {
        fail(&mut c, v);
    }
    if t.checked == 0 {
        c.passed = false;
    }
    Ok(c)
}

/// The constant chain at 1 with apex 2-chain fails both checks.
pub fn check_counterexample() -> Result<CriterionResult> {
    let mut c = criterion(
        "P3",
        "constant chain at 1, apex 2-chain, bottom-inclusion legs: not locally determined and not colimiting under the identity functor",
    );
    let k = counterexample_cocone(4);
    let ld = check_local_determination_ep(&k)?;
    let image = preserves_cocone(&FunctorExpr::Id, &k, &Caps::default())?;
    c.checked = 1;
    c.detail = format!("defects {:?}, verdict {}, colimiting {}", ld.defects, ld.verdict, image.colimiting);
    let expected = vec![1; k.legs().len()];
    if ld.verdict || ld.defects != expected || image.colimiting {
        fail(&mut c, json!({ "ld": ld, "colimiting": image.colimiting }));
    }
    Ok(c)
}

/// For ep-chains, `Δ_{n≤m}^R ∘ Δ_{n≤m}^L` and `c_n^R ∘ c_n^L` are both identities.
pub fn check_ep_second_condition(chains: &[OmegaChain]) -> Result<(usize, Option<Value>)> {
    let mut checked = 0;
    for d in chains {
        let k = colimit_finite(d)?;
        for (n, cn) in k.legs().iter().enumerate() {
            let rhs = compose(cn.r(), cn.l())?;
            for m in n..d.len() {
                let dm = link_composite(d, n, m)?;
                let lhs = compose(dm.r(), dm.l())?;
                checked += 1;
                if !(lhs.is_identity() && rhs.is_identity()) {
                    return Ok((checked, Some(json!({ "chain": encode_cocone(&k), "n": n, "m": m }))));
                }
            }
        }
        let as_adj = check_local_determination(&k.with_kind(PairKind::Adj)?)?;
        let zero = as_adj.adj_residuals.iter().flatten().flatten().all(|&r| r == 0);
        if !as_adj.verdict || !zero {
            return Ok((checked, Some(json!({ "cocone": encode_cocone(&k), "adj_report": as_adj }))));
        }
    }
    Ok((checked, None))
}

pub fn check_yoneda() -> Result<CriterionResult> {
    let mut c = criterion(
        "P5",
        "O-category {1, 2-chain}: Yoneda is fully faithful, |Nat(y1, y2)| = 2, |Nat(y2, y1)| = 1, proof equation holds on the canonical colimit and fails on the counterexample",
    );
    let caps = Caps::default();
    let k = one_two_category();
    let ff = check_fully_faithful(&k, &caps)?;
    let (y1, y2) = (yoneda(&k, 0)?, yoneda(&k, 1)?);
    let n12 = enumerate_nat_trans(&k, &y1, &y2, &caps)?.len();
    let n21 = enumerate_nat_trans(&k, &y2, &y1, &caps)?.len();
    let good = verify_proof_step(&k, &colimit_finite(&one_two_two_chain())?)?;
    let bad = verify_proof_step(&k, &counterexample_cocone(3))?;
    c.checked = 5;
    c.detail = format!("fully faithful {ff}, |Nat(y1,y2)| = {n12}, |Nat(y2,y1)| = {n21}, proof step {good} / {bad}");
    if !(ff && n12 == 2 && n21 == 1 && good && !bad) {
        fail(&mut c, json!({ "fully_faithful": ff, "nat_1_2": n12, "nat_2_1": n21, "proof_step_colimit": good, "proof_step_counterexample": bad }));
    }
    Ok(c)
}

pub fn check_solver() -> Result<CriterionResult> {
    let mut c = criterion(
        "P6",
        "solve \"D = lift(D)\" --depth 4: sizes 1..5, depth-4 defects 4,3,2,1,0, byte-identical JSON across runs",
    );
    let mut spec = parse_equation("D = lift(D)")?;
    spec.depth = 4;
    let a = solve(&spec)?;
    let b = solve(&spec)?;
    let sizes: Vec<usize> = a.stages.iter().map(|s| s.size).collect();
    let row = a.defect_matrix.as_ref().and_then(|m| m.get(4)).cloned();
    let (ja, jb) = (a.to_json()?, b.to_json()?);
    c.checked = 3;
    c.detail = format!("sizes {sizes:?}, depth-4 defects {row:?}");
    if sizes != [1, 2, 3, 4, 5] || row.as_deref() != Some(&[4, 3, 2, 1, 0][..]) || ja != jb {
        fail(&mut c, json!({ "sizes": sizes, "defects": row, "identical_json": ja == jb }));
    }
    Ok(c)
}

/// The least element of `{ m | terms ≤ m }` found by scanning every map.
pub fn brute_force_lub(terms: &[MonotoneMap], all: &[MonotoneMap]) -> Result<Option<MonotoneMap>> {
    let mut upper = Vec::new();
    for m in all {
        if terms.iter().map(|t| leq_map(t, m)).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b) {
            upper.push(m);
        }
    }
    for u in &upper {
        if upper.iter().map(|v| leq_map(u, v)).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b) {
            return Ok(Some((*u).clone()));
        }
    }
    Ok(None)
}

pub fn check_lub_oracle(cfg: &SuiteConfig) -> Result<CriterionResult> {
    let mut c = criterion("P7", "lub of witnessed map chains agrees with a brute-force least upper bound search");
    let pool = all_posets(3);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x51ed_0007);
    for _ in 0..cfg.lub_cases {
        let p = &pool[rng.random_range(0..pool.len())];
        let q = &pool[rng.random_range(0..pool.len())];
        let (terms, stab) = random_map_chain(&mut rng, p, q, 6, &cfg.caps)?;
        let all = monotone_maps(p, q, cfg.caps.elems)?
            .into_iter()
            .map(|t| MonotoneMap::new(p.clone(), q.clone(), t))
            .collect::<Result<Vec<_>>>()?;
        let fast = lub_map_chain(&MapChain::new(terms.clone(), stab)?)?;
        let slow = brute_force_lub(&terms, &all)?;
        c.checked += 1;
        if slow.as_ref() != Some(&fast) {
            fail(&mut c, json!({
                "terms": terms.iter().map(|t| t.named_table()).collect::<Vec<_>>(),
                "stab_index": stab,
                "lub": fast.named_table(),
                "brute_force": slow.map(|m| m.named_table()),
            }));
        }
    }
    c.detail = format!("{} cases", c.checked);
    Ok(c)
}

/// Runs P1 to P7.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let ep = suite_chains(cfg, PairKind::Ep)?;
    let adj = suite_chains(cfg, PairKind::Adj)?;
    let mut criteria = vec![
        check_ld_implies_colimiting(cfg, &ep, "P1")?,
        check_preservation(cfg, &ep, "P2")?,
        check_counterexample()?,
    ];

    let a1 = check_ld_implies_colimiting(cfg, &adj, "P4")?;
    let a2 = check_preservation(cfg, &adj, "P4")?;
    let (second, witness) = check_ep_second_condition(&ep)?;
    let mut p4 = criterion(
        "P4",
        "adjoint chains: LD ⟹ colimiting and preservation as above; on ep-chains the adjoint second condition holds with both sides identity",
    );
    p4.checked = a1.checked + a2.checked + second;
    p4.skipped = a1.skipped + a2.skipped;
    p4.detail = format!("{}; {}; {} second-condition instances", a1.detail, a2.detail, second);
    p4.passed = a1.passed && a2.passed && witness.is_none();
    p4.counterexample = a1.counterexample.or(a2.counterexample).or(witness);
    criteria.push(p4);

    criteria.push(check_yoneda()?);
    criteria.push(check_solver()?);
    criteria.push(check_lub_oracle(cfg)?);
    Ok(SuiteReport { seed: cfg.seed, criteria })
}
