//! Integer expressions over lattice data, evaluated exactly.
//!
//! JSON form: a bare integer, or a single-key object naming the operation,
//! e.g. `{"sq": [3, -2]}` or `{"add": [1, {"var": "g"}]}`. Class arguments
//! are coordinate lists whose entries are themselves expressions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::destab::{enumerate_destabilizing, DestabError, PairMode};
use super::Rel;
use crate::acm::Assumption;
use crate::invariants::{self, InvariantError};
use crate::lattice::{DivClass, Lattice, LatticeError};

/// Upper limit on assignments visited by `count` and `unique`.
pub const ITERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    UnboundVar(String),
    #[error("half of odd value {0}")]
    OddHalf(i64),
    #[error("integer overflow")]
    Overflow,
    #[error("expected exactly one solution, found {0}")]
    NotUnique(u64),
    #[error("min of max of affine pieces is unbounded below")]
    Unbounded,
    #[error("search exceeded {ITERATION_CAP} assignments")]
    IterationCap,
    #[error("rank must be 1 or 2, got {0}")]
    BadRank(i64),
    #[error("{0}")]
    Destab(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

impl From<DestabError> for EvalError {
    fn from(e: DestabError) -> Self {
        EvalError::Destab(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, EvalError>;

/// A class given by coordinate expressions.
pub type ClassExpr = Vec<Expr>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Expr {
    Int(i64),
    Op(Box<Op>),
}

/// `[name, lo, hi]`, inclusive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarRange(pub String, pub Expr, pub Expr);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    Pair(ClassExpr, ClassExpr),
    Sq(ClassExpr),
    /// Pairing with the ample class.
    Deg(ClassExpr),
    Var(String),
    Add(Vec<Expr>),
    Sub(Expr, Expr),
    Mul(Vec<Expr>),
    Neg(Expr),
    /// Exact halving; odd input is an error.
    Half(Expr),
    /// Genus of a curve with the given square.
    Genus(Expr),
    /// Euler characteristic of a line bundle with the given square.
    ChiLine(Expr),
    /// `rho(g, r, d)`
    BrillNoether(Expr, Expr, Expr),
    /// `(l, C.H, g, d)`
    TwistChi(Expr, Expr, Expr, Expr),
    /// `h^0` of the Lazarsfeld-Mukai bundle for `(g, r, d)`.
    LmH0(Expr, Expr, Expr),
    HodgeLower(Expr, Expr),
    ChiBundle {
        rank: Expr,
        c1: ClassExpr,
        c2: Expr,
    },
    /// `c2` of a rank-2 bundle after twisting by `by`.
    TwistC2 {
        c1: ClassExpr,
        c2: Expr,
        by: ClassExpr,
    },
    /// Number of assignments satisfying every condition.
    Count {
        vars: Vec<VarRange>,
        #[serde(rename = "where")]
        conds: Vec<Cond>,
    },
    /// Value of the first variable in the single satisfying assignment.
    Unique {
        vars: Vec<VarRange>,
        #[serde(rename = "where")]
        conds: Vec<Cond>,
    },
    /// `min over integers a of max_i (m_i * a + c_i)` for pieces `[m_i, c_i]`.
    MinMaxAffine(Vec<(i64, i64)>),
    /// 1 when every diagonal entry of the gram matrix is even, else 0.
    EvenLattice,
    /// Number of destabilizing-pair branches left unresolved.
    DestabSurvivors {
        c: ClassExpr,
        d: Expr,
        mode: PairMode,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Cond {
    Cmp { lhs: Expr, rel: Rel, rhs: Expr },
    Not { not: Box<Cond> },
    Any { any: Vec<Cond> },
    All { all: Vec<Cond> },
}

/// Shorthand constructors.
impl Expr {
    pub fn op(op: Op) -> Expr {
        Expr::Op(Box::new(op))
    }
    pub fn var(name: &str) -> Expr {
        Expr::op(Op::Var(name.to_string()))
    }
    pub fn sq(c: &[i64]) -> Expr {
        Expr::op(Op::Sq(lit(c)))
    }
    pub fn pair(a: &[i64], b: &[i64]) -> Expr {
        Expr::op(Op::Pair(lit(a), lit(b)))
    }
    pub fn deg(c: &[i64]) -> Expr {
        Expr::op(Op::Deg(lit(c)))
    }
    pub fn add(items: Vec<Expr>) -> Expr {
        Expr::op(Op::Add(items))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::op(Op::Sub(a, b))
    }
    pub fn mul(items: Vec<Expr>) -> Expr {
        Expr::op(Op::Mul(items))
    }
    pub fn neg(a: Expr) -> Expr {
        Expr::op(Op::Neg(a))
    }
}

/// A literal class.
pub fn lit(c: &[i64]) -> ClassExpr {
    c.iter().map(|&x| Expr::Int(x)).collect()
}

impl Cond {
    pub fn cmp(lhs: Expr, rel: Rel, rhs: Expr) -> Cond {
        Cond::Cmp { lhs, rel, rhs }
    }
}

/// Evaluation state: the lattice, declared assumptions and bound variables.
pub struct Ctx<'a> {
    pub lattice: &'a Lattice,
    pub assumptions: &'a [Assumption],
    pub env: BTreeMap<String, i64>,
}

impl<'a> Ctx<'a> {
    pub fn new(lattice: &'a Lattice, assumptions: &'a [Assumption]) -> Self {
        Ctx {
            lattice,
            assumptions,
            env: BTreeMap::new(),
        }
    }

    pub fn class(&mut self, c: &ClassExpr) -> Result<DivClass> {
        let coords = c.iter().map(|e| self.eval(e)).collect::<Result<Vec<_>>>()?;
        Ok(self.lattice.class(coords)?)
    }

    pub fn eval(&mut self, e: &Expr) -> Result<i64> {
        match e {
            Expr::Int(v) => Ok(*v),
            Expr::Op(op) => self.eval_op(op),
        }
    }

    pub fn holds(&mut self, c: &Cond) -> Result<bool> {
        Ok(match c {
            Cond::Cmp { lhs, rel, rhs } => {
                let (a, b) = (self.eval(lhs)?, self.eval(rhs)?);
                rel.holds(a, b)
            }
            Cond::Not { not } => !self.holds(not)?,
            Cond::Any { any } => {
                for c in any {
                    if self.holds(c)? {
                        return Ok(true);
                    }
                }
                false
            }
            Cond::All { all } => {
                for c in all {
                    if !self.holds(c)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    fn eval_op(&mut self, op: &Op) -> Result<i64> {
        let l = self.lattice;
        match op {
            Op::Pair(a, b) => {
                let (a, b) = (self.class(a)?, self.class(b)?);
                Ok(l.pair(&a, &b)?)
            }
            Op::Sq(a) => {
                let a = self.class(a)?;
                Ok(l.self_int(&a)?)
            }
            Op::Deg(a) => {
                let a = self.class(a)?;
                Ok(l.degree(&a)?)
            }
            Op::Var(name) => self
                .env
                .get(name)
                .copied()
                .ok_or_else(|| EvalError::UnboundVar(name.clone())),
            Op::Add(items) => items.iter().try_fold(0i64, |acc, e| {
                acc.checked_add(self.eval(e)?).ok_or(EvalError::Overflow)
            }),
            Op::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                a.checked_sub(b).ok_or(EvalError::Overflow)
            }
            Op::Mul(items) => items.iter().try_fold(1i64, |acc, e| {
                acc.checked_mul(self.eval(e)?).ok_or(EvalError::Overflow)
            }),
            Op::Neg(a) => self.eval(a)?.checked_neg().ok_or(EvalError::Overflow),
            Op::Half(a) => {
                let v = self.eval(a)?;
                if v % 2 != 0 {
                    return Err(EvalError::OddHalf(v));
                }
                Ok(v / 2)
            }
            Op::Genus(a) => Ok(invariants::genus_of(self.eval(a)?)?),
            Op::ChiLine(a) => Ok(invariants::chi_line(self.eval(a)?)?),
            Op::BrillNoether(g, r, d) => {
                let (g, r, d) = (self.eval(g)?, self.eval(r)?, self.eval(d)?);
                Ok(invariants::brill_noether(g, r, d))
            }
            Op::TwistChi(lv, ch, g, d) => {
                let (lv, ch, g, d) = (self.eval(lv)?, self.eval(ch)?, self.eval(g)?, self.eval(d)?);
                Ok(invariants::twist_chi(lv, ch, g, d))
            }
            Op::LmH0(g, r, d) => {
                let (g, r, d) = (self.eval(g)?, self.eval(r)?, self.eval(d)?);
                Ok(invariants::lm_invariants(g, r, d)?.h0)
            }
            Op::HodgeLower(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                Ok(invariants::hodge_lower(a, b))
            }
            Op::ChiBundle { rank, c1, c2 } => {
                let rank = self.eval(rank)?;
                let rank = u32::try_from(rank).map_err(|_| EvalError::BadRank(rank))?;
                let c1 = self.class(c1)?;
                let c2 = self.eval(c2)?;
                let inv = invariants::BundleInvariants::new(rank, c1, c2)?;
                Ok(invariants::chi_bundle(&inv, l)?)
            }
            Op::TwistC2 { c1, c2, by } => {
                let c1 = self.class(c1)?;
                let c2 = self.eval(c2)?;
                let by = self.class(by)?;
                let inv = invariants::BundleInvariants::new(2, c1, c2)?;
                Ok(invariants::chern_twist(&inv, &by, l)?.c2)
            }
            Op::Count { vars, conds } => {
                let mut hits = Vec::new();
                let mut budget = ITERATION_CAP;
                self.search(vars, conds, &mut hits, &mut budget, u64::MAX)?;
                Ok(hits.len() as i64)
            }
            Op::Unique { vars, conds } => {
                let mut hits = Vec::new();
                let mut budget = ITERATION_CAP;
                self.search(vars, conds, &mut hits, &mut budget, 2)?;
                if hits.len() != 1 {
                    return Err(EvalError::NotUnique(hits.len() as u64));
                }
                Ok(hits[0])
            }
            Op::MinMaxAffine(pieces) => min_max_affine(pieces),
            Op::EvenLattice => Ok(l.is_even() as i64),
            Op::DestabSurvivors { c, d, mode } => {
                let c = self.class(c)?;
                let d = self.eval(d)?;
                let recs = enumerate_destabilizing(l, &c, d, self.assumptions, *mode)?;
                Ok(recs.iter().filter(|r| !r.outcome.is_eliminated()).count() as i64)
            }
        }
    }

    // Depth-first over the variable ranges; records the first variable of
    // every satisfying assignment, stopping once `limit` hits are found.
    fn search(
        &mut self,
        vars: &[VarRange],
        conds: &[Cond],
        hits: &mut Vec<i64>,
        budget: &mut u64,
        limit: u64,
    ) -> Result<()> {
        let Some((first, rest)) = vars.split_first() else {
            if *budget == 0 {
                return Err(EvalError::IterationCap);
            }
            *budget -= 1;
            for c in conds {
                if !self.holds(c)? {
                    return Ok(());
                }
            }
            hits.push(0);
            return Ok(());
        };
        let lo = self.eval(&first.1)?;
        let hi = self.eval(&first.2)?;
        let saved = self.env.get(&first.0).copied();
        let mut result = Ok(());
        for v in lo..=hi {
            self.env.insert(first.0.clone(), v);
            let before = hits.len();
            if let Err(e) = self.search(rest, conds, hits, budget, limit) {
                result = Err(e);
                break;
            }
            for h in &mut hits[before..] {
                // innermost pushes 0; overwrite so each hit carries this level's value
                *h = v;
            }
            if hits.len() as u64 >= limit {
                break;
            }
        }
        match saved {
            Some(v) => self.env.insert(first.0.clone(), v),
            None => self.env.remove(&first.0),
        };
        result
    }
}

fn min_max_affine(pieces: &[(i64, i64)]) -> Result<i64> {
    if pieces.is_empty() {
        return Err(EvalError::Unbounded);
    }
    let has_pos = pieces.iter().any(|p| p.0 > 0);
    let has_neg = pieces.iter().any(|p| p.0 < 0);
    let has_flat = pieces.iter().any(|p| p.0 == 0);
    if !(has_flat || (has_pos && has_neg)) {
        return Err(EvalError::Unbounded);
    }
    let f = |a: i128| {
        pieces
            .iter()
            .map(|&(m, c)| m as i128 * a + c as i128)
            .max()
            .expect("nonempty")
    };
    // The function is convex; its integer minimum sits at the floor or
    // ceiling of some pairwise crossing point.
    let mut cands = vec![0i128];
    for (i, &(m1, c1)) in pieces.iter().enumerate() {
        for &(m2, c2) in &pieces[i + 1..] {
            if m1 != m2 {
                let num = c2 as i128 - c1 as i128;
                let den = m1 as i128 - m2 as i128;
                let fl = floor_div(num, den);
                cands.push(fl);
                cands.push(fl + 1);
            }
        }
    }
    let best = cands.into_iter().map(f).min().expect("nonempty");
    i64::try_from(best).map_err(|_| EvalError::Overflow)
}

fn floor_div(a: i128, b: i128) -> i128 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

impl Expr {
    /// Rewrites every class argument with `f`.
    pub fn map_classes(&self, f: &dyn Fn(&ClassExpr) -> ClassExpr) -> Expr {
        match self {
            Expr::Int(_) => self.clone(),
            Expr::Op(op) => Expr::op(op.map_classes(f)),
        }
    }
}

impl Op {
    fn map_classes(&self, f: &dyn Fn(&ClassExpr) -> ClassExpr) -> Op {
        let m = |e: &Expr| e.map_classes(f);
        let mc = |c: &ClassExpr| f(&c.iter().map(|e| e.map_classes(f)).collect());
        let mr = |v: &VarRange| VarRange(v.0.clone(), m(&v.1), m(&v.2));
        match self {
            Op::Pair(a, b) => Op::Pair(mc(a), mc(b)),
            Op::Sq(a) => Op::Sq(mc(a)),
            Op::Deg(a) => Op::Deg(mc(a)),
            Op::Var(_) | Op::MinMaxAffine(_) | Op::EvenLattice => self.clone(),
            Op::Add(v) => Op::Add(v.iter().map(m).collect()),
            Op::Sub(a, b) => Op::Sub(m(a), m(b)),
            Op::Mul(v) => Op::Mul(v.iter().map(m).collect()),
            Op::Neg(a) => Op::Neg(m(a)),
            Op::Half(a) => Op::Half(m(a)),
            Op::Genus(a) => Op::Genus(m(a)),
            Op::ChiLine(a) => Op::ChiLine(m(a)),
            Op::BrillNoether(a, b, c) => Op::BrillNoether(m(a), m(b), m(c)),
            Op::TwistChi(a, b, c, d) => Op::TwistChi(m(a), m(b), m(c), m(d)),
            Op::LmH0(a, b, c) => Op::LmH0(m(a), m(b), m(c)),
            Op::HodgeLower(a, b) => Op::HodgeLower(m(a), m(b)),
            Op::ChiBundle { rank, c1, c2 } => Op::ChiBundle {
                rank: m(rank),
                c1: mc(c1),
                c2: m(c2),
            },
            Op::TwistC2 { c1, c2, by } => Op::TwistC2 {
                c1: mc(c1),
                c2: m(c2),
                by: mc(by),
            },
            Op::Count { vars, conds } => Op::Count {
                vars: vars.iter().map(mr).collect(),
                conds: conds.iter().map(|c| c.map_classes(f)).collect(),
            },
            Op::Unique { vars, conds } => Op::Unique {
                vars: vars.iter().map(mr).collect(),
                conds: conds.iter().map(|c| c.map_classes(f)).collect(),
            },
            Op::DestabSurvivors { c, d, mode } => Op::DestabSurvivors {
                c: mc(c),
                d: m(d),
                mode: *mode,
            },
        }
    }
}

impl Cond {
    pub fn map_classes(&self, f: &dyn Fn(&ClassExpr) -> ClassExpr) -> Cond {
        match self {
            Cond::Cmp { lhs, rel, rhs } => Cond::Cmp {
                lhs: lhs.map_classes(f),
                rel: *rel,
                rhs: rhs.map_classes(f),
            },
            Cond::Not { not } => Cond::Not {
                not: Box::new(not.map_classes(f)),
            },
            Cond::Any { any } => Cond::Any {
                any: any.iter().map(|c| c.map_classes(f)).collect(),
            },
            Cond::All { all } => Cond::All {
                all: all.iter().map(|c| c.map_classes(f)).collect(),
            },
        }
    }
}

/// Applies an integer matrix to a class: coordinate `i` of the result is
/// `sum_j m[j][i] * c_j`, so row `j` is the image of basis vector `j`.
/// Literal entries are folded.
pub fn apply_basis_map(m: &[Vec<i64>], c: &ClassExpr) -> ClassExpr {
    let n = m.first().map_or(0, |r| r.len());
    if let Some(vals) = c
        .iter()
        .map(|e| match e {
            Expr::Int(v) => Some(*v),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
    {
        return (0..n)
            .map(|i| Expr::Int(vals.iter().zip(m).map(|(v, row)| v * row[i]).sum()))
            .collect();
    }
    (0..n)
        .map(|i| {
            Expr::add(
                c.iter()
                    .zip(m)
                    .map(|(e, row)| Expr::mul(vec![Expr::Int(row[i]), e.clone()]))
                    .collect(),
            )
        })
        .collect()
}

fn write_class(f: &mut fmt::Formatter<'_>, c: &ClassExpr) -> fmt::Result {
    write!(f, "(")?;
    for (i, e) in c.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, items: &[&Expr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{e}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Op(op) => match op.as_ref() {
                Op::Pair(a, b) => {
                    write_class(f, a)?;
                    write!(f, ".")?;
                    write_class(f, b)
                }
                Op::Sq(a) => {
                    write_class(f, a)?;
                    write!(f, "^2")
                }
                Op::Deg(a) => {
                    write!(f, "h.")?;
                    write_class(f, a)
                }
                Op::Var(n) => write!(f, "{n}"),
                Op::Add(v) => {
                    write!(f, "(")?;
                    for (i, e) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, " + ")?;
                        }
                        write!(f, "{e}")?;
                    }
                    write!(f, ")")
                }
                Op::Sub(a, b) => write!(f, "({a} - {b})"),
                Op::Mul(v) => {
                    for (i, e) in v.iter().enumerate() {
                        if i > 0 {
                            write!(f, "*")?;
                        }
                        write!(f, "{e}")?;
                    }
                    Ok(())
                }
                Op::Neg(a) => write!(f, "-{a}"),
                Op::Half(a) => write!(f, "{a}/2"),
                Op::Genus(a) => write_list(f, "genus", &[a]),
                Op::ChiLine(a) => write_list(f, "chi_line", &[a]),
                Op::BrillNoether(a, b, c) => write_list(f, "rho", &[a, b, c]),
                Op::TwistChi(a, b, c, d) => write_list(f, "twist_chi", &[a, b, c, d]),
                Op::LmH0(a, b, c) => write_list(f, "lm_h0", &[a, b, c]),
                Op::HodgeLower(a, b) => write_list(f, "hodge_lower", &[a, b]),
                Op::ChiBundle { rank, c1, c2 } => {
                    write!(f, "chi(rk={rank}, c1=")?;
                    write_class(f, c1)?;
                    write!(f, ", c2={c2})")
                }
                Op::TwistC2 { c1, c2, by } => {
                    write!(f, "c2_twist(c1=")?;
                    write_class(f, c1)?;
                    write!(f, ", c2={c2}, by=")?;
                    write_class(f, by)?;
                    write!(f, ")")
                }
                Op::Count { vars, .. } => {
                    write!(f, "count[")?;
                    for (i, v) in vars.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{} in {}..{}", v.0, v.1, v.2)?;
                    }
                    write!(f, "]")
                }
                Op::Unique { vars, .. } => {
                    write!(f, "unique[")?;
                    for (i, v) in vars.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{} in {}..{}", v.0, v.1, v.2)?;
                    }
                    write!(f, "]")
                }
                Op::MinMaxAffine(p) => {
                    write!(f, "min_a max(")?;
                    for (i, (m, c)) in p.iter().enumerate() {
                        if i > 0 {
                            write!(f, ", ")?;
                        }
                        write!(f, "{m}a{c:+}")?;
                    }
                    write!(f, ")")
                }
                Op::EvenLattice => write!(f, "is_even"),
                Op::DestabSurvivors { c, d, mode } => {
                    write!(f, "unresolved_pairs(C=")?;
                    write_class(f, c)?;
                    write!(f, ", d={d}, {mode:?})")
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(b2: i64, hb: i64) -> Lattice {
        Lattice::quartic(b2, hb).unwrap()
    }

    fn ev(l: &Lattice, e: &Expr) -> Result<i64> {
        Ctx::new(l, &[]).eval(e)
    }

    #[test]
    fn lattice_ops() {
        let l = q(-2, 2);
        assert_eq!(ev(&l, &Expr::sq(&[2, 2])), Ok(24));
        assert_eq!(ev(&l, &Expr::deg(&[2, 2])), Ok(12));
        assert_eq!(ev(&l, &Expr::pair(&[1, 0], &[0, 1])), Ok(2));
        assert_eq!(ev(&l, &Expr::op(Op::EvenLattice)), Ok(1));
        assert!(matches!(
            ev(&l, &Expr::sq(&[1, 2, 3])),
            Err(EvalError::Lattice(_))
        ));
    }

    #[test]
    fn arithmetic_and_invariants() {
        let l = q(-2, 2);
        let e = Expr::op(Op::Genus(Expr::sq(&[2, 2])));
        assert_eq!(ev(&l, &e), Ok(13));
        assert_eq!(
            ev(&l, &Expr::op(Op::Half(Expr::Int(7)))),
            Err(EvalError::OddHalf(7))
        );
        assert_eq!(
            ev(&l, &Expr::var("x")),
            Err(EvalError::UnboundVar("x".into()))
        );
        let big = Expr::mul(vec![Expr::Int(i64::MAX), Expr::Int(2)]);
        assert_eq!(ev(&l, &big), Err(EvalError::Overflow));
        let chi = Expr::op(Op::ChiBundle {
            rank: Expr::Int(2),
            c1: lit(&[0, 0]),
            c2: Expr::Int(2),
        });
        assert_eq!(ev(&l, &chi), Ok(2));
        let tw = Expr::op(Op::TwistC2 {
            c1: lit(&[2, 2]),
            c2: Expr::Int(8),
            by: lit(&[-1, -1]),
        });
        assert_eq!(ev(&l, &tw), Ok(2));
    }

    #[test]
    fn count_and_unique() {
        let l = q(-2, 2);
        let vars = vec![VarRange("d".into(), Expr::Int(1), Expr::Int(20))];
        let conds = vec![
            Cond::cmp(
                Expr::op(Op::LmH0(Expr::Int(13), Expr::Int(1), Expr::var("d"))),
                Rel::Le,
                Expr::Int(8),
            ),
            Cond::cmp(
                Expr::op(Op::TwistChi(
                    Expr::Int(1),
                    Expr::Int(12),
                    Expr::Int(13),
                    Expr::var("d"),
                )),
                Rel::Ge,
                Expr::Int(0),
            ),
        ];
        let u = Expr::op(Op::Unique {
            vars: vars.clone(),
            conds: conds.clone(),
        });
        assert_eq!(ev(&l, &u), Ok(8));
        let c = Expr::op(Op::Count {
            vars: vars.clone(),
            conds: vec![],
        });
        assert_eq!(ev(&l, &c), Ok(20));
        let none = Expr::op(Op::Unique {
            vars,
            conds: vec![Cond::cmp(Expr::var("d"), Rel::Gt, Expr::Int(99))],
        });
        assert_eq!(ev(&l, &none), Err(EvalError::NotUnique(0)));
        let huge = Expr::op(Op::Count {
            vars: vec![
                VarRange("a".into(), Expr::Int(0), Expr::Int(2000)),
                VarRange("b".into(), Expr::Int(0), Expr::Int(2000)),
            ],
            conds: vec![],
        });
        assert_eq!(ev(&l, &huge), Err(EvalError::IterationCap));
    }

    #[test]
    fn nested_ranges_see_outer_vars() {
        let l = q(-2, 2);
        let e = Expr::op(Op::Count {
            vars: vec![
                VarRange("a".into(), Expr::Int(0), Expr::Int(3)),
                VarRange("b".into(), Expr::Int(0), Expr::var("a")),
            ],
            conds: vec![],
        });
        assert_eq!(ev(&l, &e), Ok(10));
    }

    #[test]
    fn min_max_affine_oracle() {
        assert_eq!(min_max_affine(&[(1, -1), (-1, 0)]), Ok(0));
        assert_eq!(min_max_affine(&[(1, 0)]), Err(EvalError::Unbounded));
        assert_eq!(min_max_affine(&[(1, 0), (0, -5)]), Ok(-5));
        assert_eq!(min_max_affine(&[]), Err(EvalError::Unbounded));
        let mut rng = 12345u64;
        let mut next = || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng % 21) as i64 - 10
        };
        for _ in 0..500 {
            let k = 1 + (next().unsigned_abs() % 4) as usize;
            let pieces: Vec<(i64, i64)> = (0..k).map(|_| (next(), next() * 3)).collect();
            let brute = (-200..=200)
                .map(|a: i64| pieces.iter().map(|&(m, c)| m * a + c).max().unwrap())
                .min()
                .unwrap();
            match min_max_affine(&pieces) {
                Ok(v) => assert_eq!(v, brute, "{pieces:?}"),
                Err(EvalError::Unbounded) => {
                    assert!(pieces.iter().all(|p| p.0 > 0) || pieces.iter().all(|p| p.0 < 0))
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn basis_map_folds_literals() {
        // B -> h - B
        let m = vec![vec![1, 0], vec![1, -1]];
        assert_eq!(apply_basis_map(&m, &lit(&[2, 2])), lit(&[4, -2]));
        let sym = vec![Expr::var("x"), Expr::Int(1)];
        let mapped = apply_basis_map(&m, &sym);
        let l = q(-2, 2);
        let mut ctx = Ctx::new(&l, &[]);
        ctx.env.insert("x".into(), 3);
        assert_eq!(ctx.class(&mapped).unwrap().0, vec![4, -1]);
    }

    #[test]
    fn json_shape() {
        let e: Expr = serde_json::from_str(r#"{"add": [1, {"sq": [3, -2]}]}"#).unwrap();
        assert_eq!(ev(&q(-2, 1), &e), Ok(17));
        let e: Expr = serde_json::from_str(r#""even_lattice""#).unwrap();
        assert_eq!(e, Expr::op(Op::EvenLattice));
        let c: Cond = serde_json::from_str(r#"{"not": {"lhs": 1, "rel": "<", "rhs": 2}}"#).unwrap();
        assert!(!Ctx::new(&q(-2, 1), &[]).holds(&c).unwrap());
        assert!(serde_json::from_str::<Expr>(r#"{"frobnicate": 1}"#).is_err());
        let s = serde_json::to_string(&Expr::sq(&[1, 2])).unwrap();
        assert_eq!(s, r#"{"sq":[1,2]}"#);
    }
}
