//! Domain equations `D = F(D)`: the initial chain `1 → F(1) → F²(1) → …`
//! and its report.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::chains::{check_local_determination, colimit_finite, defect_matrix, is_colimiting, LdReport, OmegaChain};
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::finposet::{canonical_form, FinPoset};
use crate::fixtures::bottom_inclusion_into;
use crate::functors::{FunctorExpr, PairAction, Parser};
use crate::opairs::{is_ep_pair, PairKind};
use crate::suite::{CriterionResult, SuiteReport};

pub const DEFAULT_DEPTH: usize = 4;

#[derive(Debug, Clone)]
pub struct EquationSpec {
    pub var: String,
    pub body: FunctorExpr,
    pub depth: usize,
    pub caps: Caps,
}

/// Parses `D = <expr>`; depth and caps start at their defaults.
pub fn parse_equation(text: &str) -> Result<EquationSpec> {
    let mut p = Parser::new(text)?;
    let var = p.binder()?;
    let body = p.expr()?;
    p.expect_eof()?;
    Ok(EquationSpec {
        var,
        body,
        depth: DEFAULT_DEPTH,
        caps: Caps::from_env(),
    })
}

fn at(stage: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtStage {
        stage,
        source: Box::new(e),
    }
}

/// `Δ_0 = 1`, `Δ_{n+1} = F(Δ_n)`, first link the bottom inclusion
/// `1 → F(1)`, later links `PR F` of the previous one. The witness is set
/// when the chain ends in isomorphisms.
pub fn iterate(spec: &EquationSpec) -> Result<OmegaChain> {
    if spec.depth > spec.caps.depth {
        return Err(Error::CapExceeded {
            what: "chain depth",
            needed: spec.depth,
            cap: spec.caps.depth,
        });
    }
    let ev = spec.body.evaluator(spec.caps);
    let one = Arc::new(FinPoset::one());
    let mut links = Vec::with_capacity(spec.depth);
    if spec.depth > 0 {
        let f1 = ev.act_obj(&one).map_err(at(1))?;
        links.push(bottom_inclusion_into(&f1, PairKind::Ep).ok_or_else(|| at(1)(Error::NotPointed))?);
    }
    for n in 1..spec.depth {
        let next = ev.act_pair(&links[n - 1]).map_err(at(n + 1))?;
        links.push(next);
    }
    let d = OmegaChain::from_links(one, links, None)?;
    let stab = d.witnessed_stabilization();
    d.with_stab_index(stab)
}

#[derive(Debug, Clone, Serialize)]
pub struct Stage {
    pub n: usize,
    pub size: usize,
    /// Absent when the labeling search exceeds its budget.
    pub canonical_form: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub equation: String,
    pub depth: usize,
    pub stages: Vec<Stage>,
    pub stabilized_at: Option<usize>,
    /// Verdict on the canonical colimit, for stabilizing chains.
    pub ld: Option<LdReport>,
    /// `defect_matrix[m][n]` on the depth-`m` approximant, otherwise.
    pub defect_matrix: Option<Vec<Vec<usize>>>,
    pub theorem_suite: SuiteReport,
}

fn check(id: &str, description: &str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult {
        id: id.into(),
        description: description.into(),
        passed,
        checked: 1,
        skipped: 0,
        detail,
        counterexample: None,
    }
}

pub fn solve(spec: &EquationSpec) -> Result<RunReport> {
    let d = iterate(spec)?;
    let stages = d
        .objects()
        .iter()
        .enumerate()
        .map(|(n, p)| {
            let canonical_form = match canonical_form(p) {
                Ok(f) => Some(f),
                Err(Error::CanonBudget(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(Stage { n, size: p.len(), canonical_form })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut checks = Vec::new();
    let bad_link = d
        .links()
        .iter()
        .map(|l| is_ep_pair(l.l(), l.r()))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .position(|ok| !ok);
    checks.push(check(
        "links",
        "every link is an ep-pair",
        bad_link.is_none(),
        bad_link.map_or_else(|| format!("{} links", d.links().len()), |n| format!("link {n} fails")),
    ));

    let (ld, matrix) = match d.stab_index() {
        Some(_) => {
            let k = colimit_finite(&d)?;
            let ld = check_local_determination(&k)?;
            checks.push(check("colimit_ld", "canonical colimit is locally determined", ld.verdict, format!("defects {:?}", ld.defects)));
            match is_colimiting(&k, &spec.caps) {
                Ok(c) => checks.push(check("colimit_oracle", "canonical colimit passes the mediator search", c, String::new())),
                Err(Error::CapExceeded { .. }) => {
                    let mut c = check("colimit_oracle", "canonical colimit passes the mediator search", true, "skipped: pair cap".into());
                    c.checked = 0;
                    c.skipped = 1;
                    checks.push(c);
                }
                Err(e) => return Err(e),
            }
            (Some(ld), None)
        }
        None => {
            let m = defect_matrix(&d, d.last_index())?;
            let last_zero = m.iter().all(|row| row.last() == Some(&0));
            checks.push(check(
                "approximants",
                "each approximant's own stage has defect 0",
                last_zero,
                format!("{} approximants", m.len()),
            ));
            (None, Some(m))
        }
    };

    Ok(RunReport {
        equation: format!("{} = {}", spec.var, spec.body),
        depth: spec.depth,
        stages,
        stabilized_at: d.stab_index(),
        ld,
        defect_matrix: matrix,
        theorem_suite: SuiteReport { seed: 0, criteria: checks },
    })
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.theorem_suite.all_passed()
    }

    /// Defect of stage `n` on the deepest approximant, or on the colimit.
    pub fn defect(&self, n: usize) -> Option<usize> {
        match (&self.ld, &self.defect_matrix) {
            (Some(ld), _) => Some(ld.defects.get(n).copied().unwrap_or(0)),
            (None, Some(m)) => m.last().and_then(|row| row.get(n).copied()),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,size,canonical_form,defect\n");
        for s in &self.stages {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.n,
                s.size,
                s.canonical_form.as_deref().unwrap_or(""),
                self.defect(s.n).map_or(String::new(), |d| d.to_string())
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{}  (depth {})\n", self.equation, self.depth);
        let _ = writeln!(out, "{:>3}  {:>6}  {:>6}  canonical form", "n", "size", "defect");
        for s in &self.stages {
            let _ = writeln!(
                out,
                "{:>3}  {:>6}  {:>6}  {}",
                s.n,
                s.size,
                self.defect(s.n).map_or("-".into(), |d| d.to_string()),
                s.canonical_form.as_deref().unwrap_or("(budget exceeded)")
            );
        }
        match self.stabilized_at {
            Some(n) => {
                let _ = writeln!(out, "stabilized at {n}");
            }
            None => {
                let _ = writeln!(out, "no stabilization within depth {}", self.depth);
            }
        }
        if let Some(m) = &self.defect_matrix {
            let _ = writeln!(out, "defects by approximant depth:");
            for (i, row) in m.iter().enumerate() {
                let _ = writeln!(out, "  {i}: {row:?}");
            }
        }
        out.push_str(&render_checks(&self.theorem_suite));
        out
    }
}

pub fn render_checks(r: &SuiteReport) -> String {
    let mut out = String::new();
    for c in &r.criteria {
        let _ = writeln!(
            out,
            "{} {}: {} [{}]",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.description,
            c.detail
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str, depth: usize) -> RunReport {
        let mut spec = parse_equation(text).unwrap();
        spec.depth = depth;
        solve(&spec).unwrap()
    }

    fn sizes(r: &RunReport) -> Vec<usize> {
        r.stages.iter().map(|s| s.size).collect()
    }

    #[test]
    fn parse_examples() {
        let s = parse_equation("D = lift(unit + D)").unwrap();
        assert_eq!(s.var, "D");
        assert_eq!(s.body.to_string(), "lift(sum(unit, D))");
        assert_eq!(parse_equation("D = fun(D, D)").unwrap().body.to_string(), "fun(D, D)");
        match parse_equation("D = lift(") {
            Err(Error::Syntax { line: 1, column: 10, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_equation("E = D"), Err(Error::Syntax { column: 1, .. })));
    }

    #[test]
    fn identity_equation_stabilizes_at_once() {
        let r = run("D = D", 4);
        assert_eq!(sizes(&r), vec![1; 5]);
        assert_eq!(r.stabilized_at, Some(0));
        assert!(r.passed());
    }

    #[test]
    fn lift_grows_by_one() {
        let r = run("D = lift(D)", 4);
        assert_eq!(sizes(&r), vec![1, 2, 3, 4, 5]);
        assert_eq!(r.stabilized_at, None);
        let m = r.defect_matrix.as_ref().unwrap();
        assert_eq!(m[4], vec![4, 3, 2, 1, 0]);
        for (depth, row) in m.iter().enumerate() {
            assert_eq!(*row, (0..=depth).rev().collect::<Vec<_>>());
        }
        assert!(r.passed());
        assert_eq!(r.to_json().unwrap(), run("D = lift(D)", 4).to_json().unwrap());
    }

    #[test]
    fn function_space_equation_is_trivial() {
        let r = run("D = fun(D, D)", 4);
        assert_eq!(sizes(&r), vec![1; 5]);
        assert_eq!(r.stabilized_at, Some(0));
    }

    #[test]
    fn lifted_separated_sum_grows_by_three() {
        let r = run("D = lift(unit + D)", 4);
        assert_eq!(sizes(&r), vec![1, 4, 7, 10, 13]);
        assert!(r.defect_matrix.is_some());
        assert!(r.passed());
    }

    #[test]
    fn constant_equation_stabilizes_after_one_step() {
        let r = run("D = const(vee)", 3);
        assert_eq!(sizes(&r), vec![1, 3, 3, 3]);
        assert_eq!(r.stabilized_at, Some(1));
        assert_eq!(r.ld.as_ref().unwrap().defects, vec![2, 0]);
        assert!(r.passed());
    }

    #[test]
    fn csv_columns() {
        let csv = run("D = lift(D)", 2).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "n,size,canonical_form,defect");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,1,"));
        assert!(lines[3].ends_with(",0"));
    }

    #[test]
    fn caps_surface_with_stage() {
        let mut spec = parse_equation("D = prod(lift(D), lift(D))").unwrap();
        spec.depth = 5;
        spec.caps.elems = 100;
        match iterate(&spec) {
            Err(Error::AtStage { stage, source }) => {
                assert!(matches!(*source, Error::CapExceeded { .. }));
                assert!(stage >= 2);
            }
            other => panic!("{other:?}"),
        }
        spec.depth = 9;
        assert!(matches!(iterate(&spec), Err(Error::CapExceeded { what: "chain depth", .. })));
    }
}
