//! Elimination of destabilizing pairs `0 -> M -> E -> N (x) J_Z' -> 0` for a
//! rank-2 Lazarsfeld-Mukai bundle with `c1 = C`, `c2 = d`.
//!
//! `N` lives in the full Picard lattice, not necessarily in the span of the
//! given basis, so a candidate is a numerical profile: the pairings `N.e_i`
//! with the basis, `N^2`, and for `N^2 = 0` the multiplicity `r` with
//! `N = r F`. Every intersection number used by the rules is a function of
//! that profile. `M = C - N` throughout.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{Ctx, Expr, Op};
use super::script::ArithClaim;
use super::Rel;
use crate::acm::{
    acm_companions, effectivity, is_initialized_acm, AcmError, Assumption, AssumptionKind,
    Effectivity,
};
use crate::invariants::{chi_line, hodge_lower};
use crate::lattice::{DivClass, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DestabError {
    #[error("destabilizing pairs are only enumerated on rank-2 lattices, got rank {0}")]
    UnsupportedRank(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal: trace claim {0} did not verify")]
    Internal(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Acm(#[from] AcmError),
}

pub type Result<T> = std::result::Result<T, DestabError>;

/// Which existence statement supplies the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    /// `d` is the gonality and `rho < 0`: `Z'` is empty, `M.N = d`,
    /// `h^1(M) = h^1(N) = 0`.
    Gonality,
    /// `E` is not simple: `M.N + length(Z') = d`.
    IdealSheaf,
}

/// Numerical data of a candidate `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    /// `N.e_i` for each basis vector.
    pub pairings: Vec<i64>,
    pub h_dot_n: i64,
    pub c_dot_n: i64,
    /// `N = r F` with `F` primitive; 1 unless `N^2 = 0`.
    pub multiplicity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Eliminated {
        rules: Vec<String>,
    },
    Unresolved {
        missing: Vec<String>,
        survivors: Vec<Profile>,
    },
}

impl Outcome {
    pub fn is_eliminated(&self) -> bool {
        matches!(self, Outcome::Eliminated { .. })
    }
}

/// One branch `(N^2, length Z')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairElimination {
    pub c: DivClass,
    pub d: i64,
    pub n_square: i64,
    pub len_zprime: i64,
    pub m_dot_n: i64,
    pub outcome: Outcome,
    pub trace: Vec<ArithClaim>,
}

pub mod rule {
    pub const HODGE_MN: &str = "R-HODGE-MN";
    pub const NO_CANDIDATE: &str = "R-NO-CANDIDATE";
    pub const ORDER: &str = "R-ORDER";
    pub const HODGE_K: &str = "R-HODGE-K";
    pub const NEF: &str = "R-NEF";
    pub const VA3_N: &str = "R-VA3-N";
    pub const ELLIPTIC_MULTIPLE: &str = "R-ELLIPTIC-MULTIPLE";
    pub const TWO_CONN: &str = "R-2CONN";
    pub const INITIALIZED_RESTRICT: &str = "R-INITIALIZED-RESTRICT";
    pub const SPLIT: &str = "R-SPLIT";
    pub const DEGREE_ORDER: &str = "R-DEGREE-ORDER";
    pub const DEGREE_ZERO: &str = "R-DEGREE-ZERO";
    pub const VA3_D: &str = "R-VA3-D";
    pub const TWO_CONN_SPLIT: &str = "R-2CONN-SPLIT";
    pub const MINUS2_SPLIT: &str = "R-MINUS2-SPLIT";
    pub const TWIST_H1: &str = "R-TWIST-H1";
}

/// An effective class of the sublattice with what is known about it.
#[derive(Debug, Clone)]
struct Known {
    class: DivClass,
    sq: i64,
    deg: i64,
    /// base point free with positive square
    bpf_positive: bool,
    /// elliptic pencil (moving, square zero)
    moving_sq0: bool,
    h1_zero: bool,
}

impl Known {
    fn moving(&self) -> bool {
        self.bpf_positive || self.moving_sq0
    }
}

fn known_classes(l: &Lattice, assumptions: &[Assumption]) -> Result<Vec<Known>> {
    let h = l.ample().clone();
    let mut out = vec![Known {
        sq: l.self_int(&h)?,
        deg: l.degree(&h)?,
        class: h.clone(),
        bpf_positive: true,
        moving_sq0: false,
        h1_zero: true,
    }];
    let mut queue: Vec<DivClass> = (0..l.rank())
        .map(|i| DivClass::basis(l.rank(), i))
        .collect();
    let mut seen: BTreeSet<DivClass> = BTreeSet::new();
    seen.insert(h);
    while let Some(b) = queue.pop() {
        if !seen.insert(b.clone()) || l.degree(&b)? <= 0 {
            continue;
        }
        let cls = match is_initialized_acm(l, &b, assumptions) {
            Ok(c) if c.is_acm() => c,
            _ => continue,
        };
        let sq = l.self_int(&b)?;
        out.push(Known {
            deg: l.degree(&b)?,
            class: b.clone(),
            sq,
            bpf_positive: sq >= 2,
            moving_sq0: sq == 0,
            h1_zero: true,
        });
        if let Ok(comps) = acm_companions(l, &b, &cls, assumptions) {
            queue.extend(comps.into_iter().map(|(c, _)| c));
        }
    }
    for a in assumptions {
        if !a.kind.implies_effective() || seen.contains(&a.subject) || a.subject.len() != l.rank() {
            continue;
        }
        let sq = l.self_int(&a.subject)?;
        let deg = l.degree(&a.subject)?;
        if deg <= 0 {
            continue;
        }
        seen.insert(a.subject.clone());
        out.push(Known {
            class: a.subject.clone(),
            sq,
            deg,
            bpf_positive: a.kind == AssumptionKind::BasePointFree && sq > 0,
            moving_sq0: a.kind == AssumptionKind::EllipticPencil && sq == 0,
            h1_zero: false,
        });
    }
    Ok(out)
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

// K.N as a literal sum over the profile.
fn dot(k: &DivClass, y: &[i64]) -> Expr {
    Expr::add(
        k.0.iter()
            .zip(y)
            .map(|(&a, &b)| Expr::mul(vec![Expr::Int(a), Expr::Int(b)]))
            .collect(),
    )
}

fn dotv(k: &DivClass, y: &[i64]) -> i64 {
    k.0.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn claim(lhs: Expr, rel: Rel, rhs: Expr, cite: String) -> ArithClaim {
    ArithClaim::new(lhs, rel, rhs, cite)
}

struct Setup<'a> {
    l: &'a Lattice,
    assumptions: &'a [Assumption],
    c: DivClass,
    c2: i64,
    ch: i64,
    h2: i64,
    known: Vec<Known>,
    mode: PairMode,
}

struct Cand {
    y: Vec<i64>,
    n: i64,
    r: i64,
    hn: i64,
    cn: i64,
    len: i64,
}

impl Setup<'_> {
    // First rule that kills the candidate, with its witnessing claims.
    fn kill(&self, k: &Cand) -> Result<Option<(&'static str, Vec<ArithClaim>)>> {
        let h = self.l.ample();
        let c = &self.c;
        let (n, y) = (k.n, &k.y[..]);
        let m2 = self.c2 - 2 * k.cn + n;
        let m2_expr = Expr::add(vec![
            Expr::sq(&c.0),
            Expr::mul(vec![Expr::Int(-2), dot(c, y)]),
            Expr::Int(n),
        ]);
        if m2 < n {
            return Ok(Some((
                rule::ORDER,
                vec![claim(
                    m2_expr,
                    Rel::Lt,
                    Expr::Int(n),
                    "M^2 = C^2 - 2C.N + N^2 < N^2, but M^2 >= N^2 [AX-DESTAB-PAIR]".into(),
                )],
            )));
        }
        let mut pos: Vec<&DivClass> = vec![c];
        pos.extend(self.known.iter().filter(|q| q.sq > 0).map(|q| &q.class));
        for kc in pos {
            let ksq = self.l.self_int(kc)?;
            if dotv(kc, y) < hodge_lower(ksq, n) {
                return Ok(Some((
                    rule::HODGE_K,
                    vec![claim(
                        dot(kc, y),
                        Rel::Lt,
                        Expr::op(Op::HodgeLower(Expr::sq(&kc.0), Expr::Int(n))),
                        format!("K = {kc}: K.N is below the Hodge index bound [AX-HODGE-INDEX]"),
                    )],
                )));
            }
        }
        for q in &self.known {
            if dotv(&q.class, y) < 0 {
                return Ok(Some((
                    rule::NEF,
                    vec![claim(
                        dot(&q.class, y),
                        Rel::Lt,
                        Expr::Int(0),
                        format!(
                            "N base point free is nef, but N.{} < 0 [AX-BPF-NEF]",
                            q.class
                        ),
                    )],
                )));
            }
        }
        if n == 0 {
            if k.hn < 3 * k.r {
                return Ok(Some((
                    rule::VA3_N,
                    vec![claim(
                        dot(h, y),
                        Rel::Lt,
                        Expr::Int(3 * k.r),
                        format!("N = {}F with h.F < 3 [AX-ELLIPTIC-H1, AX-VA-DEGREE3]", k.r),
                    )],
                )));
            }
            if k.r >= 2 && (self.mode == PairMode::Gonality || k.len == 0) {
                return Ok(Some((
                    rule::ELLIPTIC_MULTIPLE,
                    vec![claim(
                        Expr::Int(k.r - 1),
                        Rel::Gt,
                        Expr::Int(0),
                        "h^1(N) = r - 1 > 0, but h^1(N) = 0 when Z' is empty [AX-ELLIPTIC-H1]"
                            .into(),
                    )],
                )));
            }
        }
        for q in &self.known {
            let applies = if n == 0 { q.bpf_positive } else { q.moving() };
            if applies && dotv(&q.class, y) < 2 {
                return Ok(Some((
                    rule::TWO_CONN,
                    vec![claim(
                        dot(&q.class, y),
                        Rel::Lt,
                        Expr::Int(2),
                        format!(
                            "{}.N < 2 for two moving classes, one big [AX-2CONNECTED]",
                            q.class
                        ),
                    )],
                )));
            }
        }
        if n == 0 && k.r == 1 {
            for q in self.known.iter().filter(|q| q.moving_sq0) {
                if dotv(&q.class, y) <= 1 {
                    let rest = c.checked_sub(h)?.checked_sub(&q.class)?;
                    if effectivity(self.l, &rest, self.assumptions)?.value == Effectivity::Effective
                    {
                        return Ok(Some((
                            rule::INITIALIZED_RESTRICT,
                            vec![
                                claim(dot(&q.class, y), Rel::Le, Expr::Int(1),
                                    format!("K = {}: h^0(O_N(K)) <= 1 forces h^0(K - N) > 0", q.class)),
                                claim(Expr::deg(&rest.0), Rel::Gt, Expr::Int(0),
                                    format!("C - h - K = {rest} is effective, so h^0(E(-1)) > 0 [AX-INITIALIZED-CRIT]")),
                            ],
                        )));
                    }
                }
            }
        }
        let c2n_sq = self.c2 - 4 * k.cn + 4 * n;
        let c2n_deg = self.ch - 2 * k.hn;
        let numerically_split = c2n_sq == 0 && c2n_deg == 0;
        if numerically_split && k.len == 0 {
            return Ok(Some((
                rule::SPLIT,
                vec![
                    claim(
                        Expr::add(vec![Expr::sq(&c.0), Expr::mul(vec![Expr::Int(-4), dot(c, y)]), Expr::Int(4 * n)]),
                        Rel::Eq,
                        Expr::Int(0),
                        "(C - 2N)^2 = 0".into(),
                    ),
                    claim(
                        Expr::sub(Expr::deg(&c.0), Expr::mul(vec![Expr::Int(2), dot(h, y)])),
                        Rel::Eq,
                        Expr::Int(0),
                        "h.(C - 2N) = 0, so M = N and E = N + N splits [AX-HODGE-INDEX, AX-SPLIT-EXT, HYP-INDECOMPOSABLE]".into(),
                    ),
                ],
            )));
        }
        if !numerically_split && c2n_deg <= 0 {
            return Ok(Some((
                rule::DEGREE_ORDER,
                vec![claim(
                    Expr::sub(Expr::deg(&c.0), Expr::mul(vec![Expr::Int(2), dot(h, y)])),
                    Rel::Le,
                    Expr::Int(0),
                    "h.(M - N) <= 0, but M - N is effective and nonzero [AX-SPLIT-EXT, HYP-INDECOMPOSABLE, AX-AMPLE]".into(),
                )],
            )));
        }
        for q in &self.known {
            let kn = dotv(&q.class, y);
            let d2 = n - 2 * kn + q.sq;
            let hd = k.hn - q.deg;
            let d2_expr = Expr::add(vec![
                Expr::Int(n),
                Expr::mul(vec![Expr::Int(-2), dot(&q.class, y)]),
                Expr::sq(&q.class.0),
            ]);
            let hd_expr = Expr::sub(dot(h, y), Expr::deg(&q.class.0));
            if hd == 0 && (d2 == -2 || d2 > 0) {
                return Ok(Some((
                    rule::DEGREE_ZERO,
                    vec![
                        claim(hd_expr, Rel::Eq, Expr::Int(0), format!("D = N - {}: h.D = 0", q.class)),
                        claim(d2_expr, Rel::Ge, Expr::Int(-2),
                            "D^2 >= -2 with h.D = 0 is impossible for an ample h [AX-RR-EFFECTIVE, AX-AMPLE, AX-HODGE-INDEX]".into()),
                    ],
                )));
            }
            if d2 >= 0 && hd != 0 && hd.abs() < 3 {
                return Ok(Some((
                    rule::VA3_D,
                    vec![
                        claim(
                            d2_expr,
                            Rel::Ge,
                            Expr::Int(0),
                            format!("D = N - {}: D^2 >= 0", q.class),
                        ),
                        claim(
                            Expr::mul(vec![hd_expr.clone(), hd_expr]),
                            Rel::Lt,
                            Expr::Int(9),
                            "0 < |h.D| < 3 for a nonzero class with D^2 >= 0 [AX-VA-DEGREE3]"
                                .into(),
                        ),
                    ],
                )));
            }
        }
        for q in &self.known {
            let kn = dotv(&q.class, y);
            let e2 = q.sq - 2 * kn + n;
            let he = q.deg - k.hn;
            let e2_expr = Expr::add(vec![
                Expr::sq(&q.class.0),
                Expr::mul(vec![Expr::Int(-2), dot(&q.class, y)]),
                Expr::Int(n),
            ]);
            let he_expr = Expr::sub(Expr::deg(&q.class.0), dot(h, y));
            if q.bpf_positive && e2 >= -2 && he > 0 && kn - n < 2 {
                return Ok(Some((
                    rule::TWO_CONN_SPLIT,
                    vec![
                        claim(
                            e2_expr,
                            Rel::Ge,
                            Expr::Int(-2),
                            format!("E = {} - N has E^2 >= -2", q.class),
                        ),
                        claim(
                            he_expr,
                            Rel::Gt,
                            Expr::Int(0),
                            "h.E > 0, so E is effective [AX-RR-EFFECTIVE]".into(),
                        ),
                        claim(
                            Expr::sub(dot(&q.class, y), Expr::Int(n)),
                            Rel::Lt,
                            Expr::Int(2),
                            "N.E < 2 in a member of a base point free big system [AX-2CONNECTED]"
                                .into(),
                        ),
                    ],
                )));
            }
            let d2 = n - 2 * kn + q.sq;
            let hd = k.hn - q.deg;
            if n > 0 && d2 >= -2 && hd > 0 && kn - q.sq < 2 {
                return Ok(Some((
                    rule::TWO_CONN_SPLIT,
                    vec![
                        claim(
                            Expr::add(vec![
                                Expr::Int(n),
                                Expr::mul(vec![Expr::Int(-2), dot(&q.class, y)]),
                                Expr::sq(&q.class.0),
                            ]),
                            Rel::Ge,
                            Expr::Int(-2),
                            format!("D = N - {} has D^2 >= -2", q.class),
                        ),
                        claim(
                            Expr::sub(dot(h, y), Expr::deg(&q.class.0)),
                            Rel::Gt,
                            Expr::Int(0),
                            "h.D > 0, so D is effective [AX-RR-EFFECTIVE]".into(),
                        ),
                        claim(
                            Expr::sub(dot(&q.class, y), Expr::sq(&q.class.0)),
                            Rel::Lt,
                            Expr::Int(2),
                            "K.D < 2 in a member of |N| [AX-2CONNECTED]".into(),
                        ),
                    ],
                )));
            }
            if q.h1_zero && e2 == -2 && he == 1 && kn == n {
                return Ok(Some((
                    rule::MINUS2_SPLIT,
                    vec![
                        claim(e2_expr, Rel::Eq, Expr::Int(-2), format!("G = {} - N has G^2 = -2", q.class)),
                        claim(he_expr, Rel::Eq, Expr::Int(1), "h.G = 1, so G is a (-2)-curve [AX-MINUS2-CURVE]".into()),
                        claim(Expr::sub(dot(&q.class, y), Expr::Int(n)), Rel::Eq, Expr::Int(0),
                            "N.G = 0 forces h^1 != 0, against h^1 = 0 for an aCM class [AX-MINUS2-FIXED]".into()),
                    ],
                )));
            }
        }
        let hm = self.ch - k.hn;
        let mh2 = m2 - 2 * hm + self.h2;
        if k.hn < self.h2 && chi_line(mh2).is_ok_and(|x| x < 0) {
            let hm_expr = Expr::sub(Expr::deg(&c.0), dot(h, y));
            let mh2_expr = Expr::add(vec![
                m2_expr,
                Expr::mul(vec![Expr::Int(-2), hm_expr]),
                Expr::sq(&h.0),
            ]);
            return Ok(Some((
                rule::TWIST_H1,
                vec![
                    claim(dot(h, y), Rel::Lt, Expr::sq(&h.0), "h.(N - h) < 0, so h^0(N(-1)) = 0".into()),
                    claim(Expr::op(Op::ChiLine(mh2_expr)), Rel::Lt, Expr::Int(0),
                        "chi(M(-1)) < 0 gives h^1(M(-1)) > 0, but h^1(E(-1)) = 0 forces h^1(M(-1)) = 0 [HYP-ACM, AX-H1NONNEG]".into()),
                ],
            )));
        }
        Ok(None)
    }
}

/// Enumerates every branch `(N^2, length Z')` for `c1 = C`, `c2 = d`, and
/// tries to eliminate each candidate profile of `N`.
pub fn enumerate_destabilizing(
    lattice: &Lattice,
    c: &DivClass,
    d: i64,
    assumptions: &[Assumption],
    mode: PairMode,
) -> Result<Vec<PairElimination>> {
    if lattice.rank() != 2 {
        return Err(DestabError::UnsupportedRank(lattice.rank()));
    }
    let c = lattice.class(c.0.clone())?;
    let c2 = lattice.self_int(&c)?;
    if c2 < 4 {
        return Err(DestabError::Precondition(format!("C^2 = {c2} < 4")));
    }
    if !(1..=1000).contains(&d) {
        return Err(DestabError::Precondition(format!(
            "d = {d} outside 1..=1000"
        )));
    }
    let h = lattice.ample().clone();
    let det = h.0[0] * c.0[1] - h.0[1] * c.0[0];
    if det == 0 {
        return Err(DestabError::Precondition("C is proportional to h".into()));
    }
    let ch = lattice.pair(&c, &h)?;
    let setup = Setup {
        l: lattice,
        assumptions,
        c2,
        ch,
        h2: lattice.self_int(&h)?,
        known: known_classes(lattice, assumptions)?,
        c: c.clone(),
        mode,
    };

    let mut out = Vec::new();
    let mut n = 0;
    while 4 * n <= c2 {
        let lens: Vec<i64> = match mode {
            PairMode::Gonality => vec![0],
            PairMode::IdealSheaf => (0..=d).collect(),
        };
        for len in lens {
            let m = d - len;
            let mut trace = vec![claim(
                Expr::mul(vec![Expr::Int(4), Expr::Int(n)]),
                Rel::Le,
                Expr::sq(&c.0),
                "4N^2 <= (M + N)^2 = C^2 [AX-HODGE-INDEX]".into(),
            )];
            let outcome = if n > 0 && m < n {
                trace.push(claim(
                    Expr::Int(m),
                    Rel::Lt,
                    Expr::Int(n),
                    "M.N < N^2, but M.N >= N^2 when M^2 >= N^2 > 0 [AX-HODGE-INDEX]".into(),
                ));
                Outcome::Eliminated {
                    rules: vec![rule::HODGE_MN.into()],
                }
            } else {
                branch(&setup, n, m, len, det, &mut trace)?
            };
            out.push(PairElimination {
                c: c.clone(),
                d,
                n_square: n,
                len_zprime: len,
                m_dot_n: m,
                outcome,
                trace,
            });
        }
        n += 2;
    }
    for rec in &out {
        let mut ctx = Ctx::new(lattice, assumptions);
        for cl in &rec.trace {
            match cl.check(&mut ctx) {
                Ok(v) if v.holds => {}
                _ => return Err(DestabError::Internal(cl.to_string())),
            }
        }
    }
    Ok(out)
}

fn branch(
    s: &Setup<'_>,
    n: i64,
    m: i64,
    len: i64,
    det: i64,
    trace: &mut Vec<ArithClaim>,
) -> Result<Outcome> {
    let h = s.l.ample();
    let c = &s.c;
    let cn = m + n;
    let mut rules = BTreeSet::new();
    let mut survivors = Vec::new();
    for hn in 1..s.ch {
        // solve h.N = hn, C.N = cn for the pairings y_i = N.e_i
        let y0 = hn * c.0[1] - h.0[1] * cn;
        let y1 = h.0[0] * cn - hn * c.0[0];
        if y0 % det != 0 || y1 % det != 0 {
            continue;
        }
        let y = vec![y0 / det, y1 / det];
        let rs: Vec<i64> = if n == 0 {
            let g = gcd(y[0], y[1]);
            (1..=g).filter(|r| g % r == 0).collect()
        } else {
            vec![1]
        };
        for r in rs {
            let cand = Cand {
                y: y.clone(),
                n,
                r,
                hn,
                cn,
                len,
            };
            let profile = vec![
                claim(
                    dot(h, &y),
                    Rel::Eq,
                    Expr::Int(hn),
                    format!("profile N.e = {y:?}, r = {r}: h.N"),
                ),
                claim(
                    dot(c, &y),
                    Rel::Eq,
                    Expr::Int(cn),
                    format!("C.N = M.N + N^2 = {m} + {n}"),
                ),
            ];
            trace.extend(profile);
            match s.kill(&cand)? {
                Some((id, claims)) => {
                    rules.insert(id.to_string());
                    trace.extend(claims);
                }
                None => survivors.push(Profile {
                    pairings: y.clone(),
                    h_dot_n: hn,
                    c_dot_n: cn,
                    multiplicity: r,
                }),
            }
        }
    }
    Ok(if !survivors.is_empty() {
        Outcome::Unresolved {
            missing: vec![
                "no elimination rule applies; an additional geometric fact is needed".into(),
            ],
            survivors,
        }
    } else if rules.is_empty() {
        Outcome::Eliminated {
            rules: vec![rule::NO_CANDIDATE.into()],
        }
    } else {
        Outcome::Eliminated {
            rules: rules.into_iter().collect(),
        }
    })
}
