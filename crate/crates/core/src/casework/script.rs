//! Derivation scripts: ordered arithmetic claims, checked exactly, interleaved
//! with recorded uses of imported facts.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::axioms;
use super::expr::{ClassExpr, Cond, Ctx, EvalError, Expr, Op};
use super::Rel;
use crate::acm::{check_assumptions, AcmError, Assumption};
use crate::lattice::{DivClass, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("step {step}: unknown axiom id {id:?}")]
    UnknownAxiom { step: usize, id: String },
    #[error("step {step}: variable {name:?} is not bound by an earlier claim")]
    UnboundVar { step: usize, name: String },
    #[error("step {step}: only '=' claims can bind a variable")]
    BadBind { step: usize },
    #[error("step {step}: variable {name:?} is bound twice")]
    DuplicateBind { step: usize, name: String },
    #[error("contradiction script must end with an arithmetic claim refuting an axiom used earlier: {0}")]
    BadContradiction(String),
    #[error("established conclusion needs a statement id")]
    EmptyConclusion,
    #[error("bad assumptions: {0}")]
    Assumptions(#[from] AcmError),
}

/// An exact integer comparison between two expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArithClaim {
    pub lhs: Expr,
    pub rel: Rel,
    pub rhs: Expr,
    #[serde(default)]
    pub cite: String,
    /// On success of an `=` claim, binds the value of `lhs` to this name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bind: Option<String>,
    /// Axiom whose requirement this claim contradicts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refutes: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClaimValue {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

impl ArithClaim {
    pub fn new(lhs: Expr, rel: Rel, rhs: Expr, cite: impl Into<String>) -> Self {
        ArithClaim {
            lhs,
            rel,
            rhs,
            cite: cite.into(),
            bind: None,
            refutes: None,
        }
    }

    pub fn bind(mut self, name: &str) -> Self {
        self.bind = Some(name.to_string());
        self
    }

    pub fn refutes(mut self, axiom: &str) -> Self {
        self.refutes = Some(axiom.to_string());
        self
    }

    pub fn check(&self, ctx: &mut Ctx<'_>) -> std::result::Result<ClaimValue, EvalError> {
        let lhs = ctx.eval(&self.lhs)?;
        let rhs = ctx.eval(&self.rhs)?;
        Ok(ClaimValue {
            lhs,
            rhs,
            holds: self.rel.holds(lhs, rhs),
        })
    }

    fn map_classes(&self, f: &dyn Fn(&ClassExpr) -> ClassExpr) -> Self {
        ArithClaim {
            lhs: self.lhs.map_classes(f),
            rhs: self.rhs.map_classes(f),
            ..self.clone()
        }
    }
}

impl fmt::Display for ArithClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel, self.rhs)
    }
}

/// A cited fact that is recorded, not checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxiomUse {
    pub id: String,
    #[serde(default)]
    pub cite: String,
    /// What the fact is applied to.
    #[serde(default)]
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    Arith(ArithClaim),
    Axiom(AxiomUse),
}

impl Step {
    pub fn axiom(id: &str, cite: &str, instance: &str) -> Step {
        Step::Axiom(AxiomUse {
            id: id.to_string(),
            cite: cite.to_string(),
            instance: instance.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    Contradiction,
    Established(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivationScript {
    pub tag: String,
    pub lattice: Lattice,
    #[serde(default)]
    pub assumptions: Vec<Assumption>,
    /// The curve class the script is about, when there is one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<DivClass>,
    pub steps: Vec<Step>,
    pub conclusion: Conclusion,
}

impl DerivationScript {
    /// Same steps evaluated against another lattice.
    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = lattice;
        self
    }

    /// Rewrites every class through `m` (row `j` is the image of basis
    /// vector `j`), keeping the lattice.
    pub fn mapped(&self, tag: &str, m: &[Vec<i64>]) -> Self {
        let f = |c: &ClassExpr| super::expr::apply_basis_map(m, c);
        let map_lit = |d: &DivClass| {
            let e = super::expr::lit(&d.0);
            let mapped = f(&e);
            DivClass(
                mapped
                    .iter()
                    .map(|x| match x {
                        Expr::Int(v) => *v,
                        _ => unreachable!("literal classes map to literals"),
                    })
                    .collect(),
            )
        };
        DerivationScript {
            tag: tag.to_string(),
            lattice: self.lattice.clone(),
            assumptions: self
                .assumptions
                .iter()
                .map(|a| Assumption {
                    subject: map_lit(&a.subject),
                    ..a.clone()
                })
                .collect(),
            subject: self.subject.as_ref().map(map_lit),
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Arith(c) => Step::Arith(c.map_classes(&f)),
                    Step::Axiom(a) => Step::Axiom(a.clone()),
                })
                .collect(),
            conclusion: self.conclusion.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepStatus {
    Verified,
    AxiomUsed,
    #[serde(rename = "FAILED")]
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub status: StepStatus,
    pub statement: String,
    pub detail: String,
    pub cite: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Overall {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub tag: String,
    pub steps: Vec<StepReport>,
    pub status: Overall,
    pub verdict: String,
}

impl DerivationReport {
    pub fn is_success(&self) -> bool {
        self.status == Overall::Success
    }

    pub fn failed(&self) -> impl Iterator<Item = &StepReport> {
        self.steps.iter().filter(|s| s.status == StepStatus::Failed)
    }

    /// Plain-text rendering, one line per step, verdict last.
    pub fn render(&self) -> String {
        let mut out = format!("script {}\n", self.tag);
        for s in &self.steps {
            let status = match s.status {
                StepStatus::Verified => "Verified ",
                StepStatus::AxiomUsed => "AxiomUsed",
                StepStatus::Failed => "FAILED   ",
            };
            out.push_str(&format!("  [{:>2}] {status} {}", s.index, s.statement));
            if !s.detail.is_empty() {
                out.push_str(&format!("  ({})", s.detail));
            }
            if !s.cite.is_empty() {
                out.push_str(&format!("  -- {}", s.cite));
            }
            out.push('\n');
        }
        out.push_str(&self.verdict);
        out.push('\n');
        out
    }
}

fn collect_vars(e: &Expr, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
    let Expr::Op(op) = e else { return };
    let mut go = |e: &Expr, bound: &mut Vec<String>| collect_vars(e, bound, free);
    match op.as_ref() {
        Op::Var(n) => {
            if !bound.contains(n) {
                free.insert(n.clone());
            }
        }
        Op::Count { vars, conds } | Op::Unique { vars, conds } => {
            let depth = bound.len();
            for v in vars {
                go(&v.1, bound);
                go(&v.2, bound);
                bound.push(v.0.clone());
            }
            for c in conds {
                cond_vars(c, bound, free);
            }
            bound.truncate(depth);
        }
        other => {
            for sub in op_children(other) {
                collect_vars(sub, bound, free);
            }
        }
    }
}

fn cond_vars(c: &Cond, bound: &mut Vec<String>, free: &mut BTreeSet<String>) {
    match c {
        Cond::Cmp { lhs, rhs, .. } => {
            collect_vars(lhs, bound, free);
            collect_vars(rhs, bound, free);
        }
        Cond::Not { not } => cond_vars(not, bound, free),
        Cond::Any { any: cs } | Cond::All { all: cs } => {
            for c in cs {
                cond_vars(c, bound, free);
            }
        }
    }
}

// Direct subexpressions of operations that do not bind variables.
fn op_children(op: &Op) -> Vec<&Expr> {
    match op {
        Op::Pair(a, b) => a.iter().chain(b).collect(),
        Op::Sq(a) | Op::Deg(a) => a.iter().collect(),
        Op::Add(v) | Op::Mul(v) => v.iter().collect(),
        Op::Sub(a, b) | Op::HodgeLower(a, b) => vec![a, b],
        Op::Neg(a) | Op::Half(a) | Op::Genus(a) | Op::ChiLine(a) => vec![a],
        Op::BrillNoether(a, b, c) | Op::LmH0(a, b, c) => vec![a, b, c],
        Op::TwistChi(a, b, c, d) => vec![a, b, c, d],
        Op::ChiBundle { rank, c1, c2 } => std::iter::once(rank)
            .chain(c1)
            .chain(std::iter::once(c2))
            .collect(),
        Op::TwistC2 { c1, c2, by } => c1.iter().chain(std::iter::once(c2)).chain(by).collect(),
        Op::DestabSurvivors { c, d, .. } => c.iter().chain(std::iter::once(d)).collect(),
        Op::Var(_)
        | Op::Count { .. }
        | Op::Unique { .. }
        | Op::MinMaxAffine(_)
        | Op::EvenLattice => vec![],
    }
}

/// Static well-formedness: known axiom ids, variables bound before use,
/// and a refuting final claim for contradiction scripts.
pub fn validate(script: &DerivationScript) -> Result<(), ScriptError> {
    check_assumptions(&script.lattice, &script.assumptions)?;
    let mut bound: BTreeSet<String> = BTreeSet::new();
    let mut used_axioms: BTreeSet<&str> = BTreeSet::new();
    for (i, step) in script.steps.iter().enumerate() {
        match step {
            Step::Axiom(a) => {
                if !axioms::is_known(&a.id) {
                    return Err(ScriptError::UnknownAxiom {
                        step: i,
                        id: a.id.clone(),
                    });
                }
                used_axioms.insert(&a.id);
            }
            Step::Arith(c) => {
                let mut free = BTreeSet::new();
                collect_vars(&c.lhs, &mut vec![], &mut free);
                collect_vars(&c.rhs, &mut vec![], &mut free);
                if let Some(name) = free.iter().find(|n| !bound.contains(*n)) {
                    return Err(ScriptError::UnboundVar {
                        step: i,
                        name: name.clone(),
                    });
                }
                if let Some(r) = &c.refutes {
                    if !axioms::is_known(r) {
                        return Err(ScriptError::UnknownAxiom {
                            step: i,
                            id: r.clone(),
                        });
                    }
                }
                if let Some(name) = &c.bind {
                    if c.rel != Rel::Eq {
                        return Err(ScriptError::BadBind { step: i });
                    }
                    if !bound.insert(name.clone()) {
                        return Err(ScriptError::DuplicateBind {
                            step: i,
                            name: name.clone(),
                        });
                    }
                }
            }
        }
    }
    match &script.conclusion {
        Conclusion::Contradiction => match script.steps.last() {
            Some(Step::Arith(ArithClaim {
                refutes: Some(r), ..
            })) => {
                let earlier = script.steps[..script.steps.len() - 1]
                    .iter()
                    .any(|s| matches!(s, Step::Axiom(a) if &a.id == r));
                if !earlier {
                    return Err(ScriptError::BadContradiction(format!(
                        "{r} is not used before the final claim"
                    )));
                }
            }
            _ => {
                return Err(ScriptError::BadContradiction(
                    "last step is not a refuting claim".into(),
                ))
            }
        },
        Conclusion::Established(id) => {
            if id.trim().is_empty() {
                return Err(ScriptError::EmptyConclusion);
            }
        }
    }
    Ok(())
}

/// Checks every claim exactly. A claim that evaluates false or fails to
/// evaluate is reported as FAILED; only malformed scripts are errors.
pub fn run_script(script: &DerivationScript) -> Result<DerivationReport, ScriptError> {
    validate(script)?;
    let mut ctx = Ctx::new(&script.lattice, &script.assumptions);
    let mut steps = Vec::with_capacity(script.steps.len());
    for (index, step) in script.steps.iter().enumerate() {
        steps.push(match step {
            Step::Axiom(a) => StepReport {
                index,
                status: StepStatus::AxiomUsed,
                statement: a.id.clone(),
                detail: a.instance.clone(),
                cite: a.cite.clone(),
            },
            Step::Arith(c) => {
                let (status, detail) = match c.check(&mut ctx) {
                    Ok(v) => {
                        if v.holds {
                            if let Some(name) = &c.bind {
                                ctx.env.insert(name.clone(), v.lhs);
                            }
                        }
                        let status = if v.holds {
                            StepStatus::Verified
                        } else {
                            StepStatus::Failed
                        };
                        let mut detail = format!("{} {} {}", v.lhs, c.rel, v.rhs);
                        if let (true, Some(name)) = (v.holds, &c.bind) {
                            detail.push_str(&format!("; {name} := {}", v.lhs));
                        }
                        (status, detail)
                    }
                    Err(e) => (StepStatus::Failed, format!("evaluation error: {e}")),
                };
                StepReport {
                    index,
                    status,
                    statement: c.to_string(),
                    detail,
                    cite: c.cite.clone(),
                }
            }
        });
    }
    let ok = steps.iter().all(|s| s.status != StepStatus::Failed);
    let verdict = match (&script.conclusion, ok) {
        (_, false) => "FAILED".to_string(),
        (Conclusion::Contradiction, true) => "CONTRADICTION ESTABLISHED".to_string(),
        (Conclusion::Established(id), true) => format!("ESTABLISHED: {id}"),
    };
    Ok(DerivationReport {
        tag: script.tag.clone(),
        steps,
        status: if ok {
            Overall::Success
        } else {
            Overall::Failure
        },
        verdict,
    })
}
