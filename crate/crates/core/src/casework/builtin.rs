//! The shipped derivation scripts: one per excluded curve class, their
//! mirrors under `B -> k*h - B`, the gonality bound for `|2B|`, and the
//! identity block for the double cover of a degree-2 del Pezzo surface.

use super::destab::PairMode;
use super::expr::{lit, ClassExpr, Cond, Expr, Op, VarRange};
use super::script::{ArithClaim, Conclusion, DerivationScript, Step};
use super::Rel;
use crate::acm::{Assumption, AssumptionKind};
use crate::lattice::{DivClass, Lattice};

const H: [i64; 2] = [1, 0];
const B: [i64; 2] = [0, 1];

fn claim(lhs: Expr, rel: Rel, rhs: Expr, cite: &str) -> ArithClaim {
    ArithClaim::new(lhs, rel, rhs, cite)
}

fn eq(lhs: Expr, rhs: i64, cite: &str) -> Step {
    Step::Arith(claim(lhs, Rel::Eq, Expr::Int(rhs), cite))
}

fn bind(lhs: Expr, rhs: i64, name: &str, cite: &str) -> Step {
    Step::Arith(claim(lhs, Rel::Eq, Expr::Int(rhs), cite).bind(name))
}

fn ax(id: &str, cite: &str, instance: &str) -> Step {
    Step::axiom(id, cite, instance)
}

fn v(name: &str) -> Expr {
    Expr::var(name)
}

fn i(x: i64) -> Expr {
    Expr::Int(x)
}

/// `sum k * class`, coordinate by coordinate, left unevaluated.
fn comb(terms: &[(i64, &[i64])]) -> ClassExpr {
    let n = terms[0].1.len();
    (0..n)
        .map(|j| {
            Expr::add(
                terms
                    .iter()
                    .map(|(k, c)| Expr::mul(vec![i(*k), i(c[j])]))
                    .collect(),
            )
        })
        .collect()
}

fn sq_of(c: ClassExpr) -> Expr {
    Expr::op(Op::Sq(c))
}

fn pair_of(a: ClassExpr, b: ClassExpr) -> Expr {
    Expr::op(Op::Pair(a, b))
}

fn quartic_header(b2: i64, hb: i64) -> Vec<Step> {
    vec![
        eq(
            Expr::sq(&H),
            4,
            "h^2 = 4 for the hyperplane class of a quartic",
        ),
        eq(Expr::sq(&B), b2, "B^2"),
        eq(Expr::pair(&H, &B), hb, "h.B"),
    ]
}

// g and C.H of the subject, bound as `g` and `ch`.
fn genus_degree(c: &[i64], g: i64, ch: i64) -> Vec<Step> {
    vec![
        bind(
            Expr::op(Op::Genus(Expr::sq(c))),
            g,
            "g",
            &format!("g = {g}"),
        ),
        bind(Expr::deg(c), ch, "ch", &format!("C.H = {ch}")),
    ]
}

// d forced by h^0(E) <= 8 and chi(E(-1)) >= 0, bound as `d`.
fn forced_degree(d: i64, extra: Vec<Cond>) -> Vec<Step> {
    let mut conds = vec![
        Cond::cmp(Expr::op(Op::LmH0(v("g"), i(1), v("x"))), Rel::Le, i(8)),
        Cond::cmp(
            Expr::op(Op::TwistChi(i(1), v("ch"), v("g"), v("x"))),
            Rel::Ge,
            i(0),
        ),
    ];
    conds.extend(extra);
    vec![
        ax(
            "AX-LM-INVARIANTS",
            "h^0(E) = g - d + 3, h^1(E) = h^2(E) = 0",
            "",
        ),
        ax(
            "AX-ULRICH-BOUND",
            "h^0(E) <= 8 for an initialized aCM bundle of rank 2",
            "",
        ),
        ax("HYP-ACM", "h^1(E(-1)) = 0", ""),
        ax("HYP-INITIALIZED", "h^0(E(-1)) = 0", ""),
        ax("AX-SERRE", "h^2(E(-1)) = h^0(E^dual(1)) = 0", ""),
        bind(
            Expr::op(Op::Unique {
                vars: vec![VarRange("x".into(), i(1), i(60))],
                conds,
            }),
            d,
            "d",
            &format!("d = {d}"),
        ),
    ]
}

fn rho_steps(rho: i64) -> Vec<Step> {
    vec![
        bind(
            Expr::op(Op::BrillNoether(v("g"), i(1), v("d"))),
            rho,
            "rho",
            &format!("rho(g, 1, d) = {rho}"),
        ),
        Step::Arith(claim(v("rho"), Rel::Lt, i(0), "rho < 0")),
    ]
}

fn no_pair(c: &[i64], mode: PairMode, axiom: &str) -> Step {
    Step::Arith(
        claim(
            Expr::op(Op::DestabSurvivors {
                c: lit(c),
                d: v("d"),
                mode,
            }),
            Rel::Lt,
            i(1),
            "every branch of the destabilizing pair is eliminated, yet a pair must exist",
        )
        .refutes(axiom),
    )
}

fn ulrich_assumptions() -> Vec<Assumption> {
    vec![
        Assumption::new(
            DivClass::new([-1, 1]),
            AssumptionKind::Empty,
            "|B - h| is empty",
        ),
        Assumption::new(
            DivClass::new([2, -1]),
            AssumptionKind::Empty,
            "|2h - B| is empty",
        ),
    ]
}

fn quartic(b2: i64, hb: i64) -> Lattice {
    Lattice::quartic(b2, hb).expect("canonical quartic lattices are valid")
}

fn case_b2neg2_bh1() -> DerivationScript {
    let c = [3, -2];
    let f = [1, -1];
    let mut steps = quartic_header(-2, 1);
    steps.extend([
        eq(Expr::sq(&c), 16, "C^2 = 16"),
        eq(Expr::op(Op::Genus(Expr::sq(&c))), 9, "g = 9"),
        eq(Expr::deg(&c), 10, "C.H = 10"),
        eq(Expr::sq(&f), 0, "F = h - B: F^2 = 0"),
        eq(Expr::deg(&f), 3, "h.F = 3"),
        ax("AX-VA-DEGREE3", "|F| is an elliptic pencil", "F = h - B"),
        ax("HYP-INITIALIZED", "h^0(E(-h-F)) = 0", ""),
        ax(
            "AX-MINUS2-CURVE",
            "B^2 = -2, B.h = 1: the member of |B| is a (-2)-curve",
            "Gamma in |B|",
        ),
        eq(
            sq_of(comb(&[(1, &H), (1, &f), (1, &B), (-2, &H)])),
            0,
            "h + F + B = 2h, so E(-2) -> E(-h-F) -> E(-h-F)|Gamma",
        ),
        eq(
            pair_of(comb(&[(1, &c), (-2, &H), (-2, &f)]), lit(&B)),
            -1,
            "deg E(-h-F)|Gamma = -H.Gamma = -1",
        ),
        ax(
            "AX-ACM-RESTRICT",
            "h^0(E(-2)) = h^1(E(-2)) = 0 gives h^0(E(-h-F)|Gamma) = 0",
            "",
        ),
        ax("AX-SPLITTING-P1", "E(-h-F)|Gamma = O(-1+a) + O(-a)", ""),
        Step::Arith(
            claim(
                Expr::op(Op::MinMaxAffine(vec![(1, -1), (-1, 0)])),
                Rel::Ge,
                i(0),
                "for every a, one of -1+a and -a is >= 0, so h^0(E(-h-F)|Gamma) > 0",
            )
            .refutes("AX-ACM-RESTRICT"),
        ),
    ]);
    DerivationScript {
        tag: "case-B2neg2-Bh1".into(),
        lattice: quartic(-2, 1),
        assumptions: vec![],
        subject: Some(DivClass::new(c)),
        steps,
        conclusion: Conclusion::Contradiction,
    }
}

fn case_b2neg2_bh2() -> DerivationScript {
    let c = [2, 2];
    let twist = [-1, -1];
    let mut steps = quartic_header(-2, 2);
    steps.push(eq(Expr::sq(&c), 24, "C^2 = 24"));
    steps.extend(genus_degree(&c, 13, 12));
    steps.push(eq(Expr::add(vec![v("g"), i(3)]), 16, "h^0(E) = 16 - d"));
    steps.extend(forced_degree(8, vec![]));
    steps.extend([
        ax(
            "AX-INITIALIZED-CRIT",
            "h^0(O(C - H) (x) J_Z) = 0, hence h^0(O(h + B) (x) J_Z) = 0",
            "C - H = h + 2B",
        ),
        eq(sq_of(comb(&[(1, &c), (2, &twist)])), 0, "det E(-h-B) = O_X"),
        bind(
            Expr::op(Op::TwistC2 {
                c1: lit(&c),
                c2: v("d"),
                by: lit(&twist),
            }),
            2,
            "c2t",
            "c2(E(-h-B)) = 2",
        ),
        bind(
            Expr::op(Op::ChiBundle {
                rank: i(2),
                c1: comb(&[(1, &c), (2, &twist)]),
                c2: v("c2t"),
            }),
            2,
            "chi",
            "chi(E(-h-B)) = 2",
        ),
        ax(
            "AX-SERRE",
            "h^2(E(-h-B)) = h^0(E(-h-B)) = 0",
            "from 0 -> O(-h-B) -> E(-h-B) -> O(h+B) (x) J_Z -> 0",
        ),
        ax(
            "AX-H1NONNEG",
            "h^1(E(-h-B)) = -chi(E(-h-B)) must be >= 0",
            "",
        ),
        Step::Arith(
            claim(
                Expr::neg(v("chi")),
                Rel::Lt,
                i(0),
                "h^1(E(-h-B)) = -chi(E(-h-B)) = -2",
            )
            .refutes("AX-H1NONNEG"),
        ),
    ]);
    DerivationScript {
        tag: "case-B2neg2-Bh2".into(),
        lattice: quartic(-2, 2),
        assumptions: vec![],
        subject: Some(DivClass::new(c)),
        steps,
        conclusion: Conclusion::Contradiction,
    }
}

fn case_b2neg2_bh3() -> DerivationScript {
    let c = [4, -2];
    let k = [2, -1];
    let mut steps = quartic_header(-2, 3);
    steps.push(eq(Expr::sq(&c), 8, "C^2 = 8"));
    steps.extend(genus_degree(&c, 5, 10));
    steps.extend([
        ax("HYP-ACM", "h^1(E(-1)) = 0", ""),
        ax(
            "AX-SERRE",
            "chi(E(-1)) = h^0(E(-1)) - h^1(E(-1)) + h^2(E(-1)) >= 0",
            "",
        ),
        ax("AX-PENCIL-DEGREE", "d >= 2", ""),
        bind(
            Expr::op(Op::Unique {
                vars: vec![VarRange("x".into(), i(1), i(60))],
                conds: vec![
                    Cond::cmp(v("x"), Rel::Ge, i(2)),
                    Cond::cmp(
                        Expr::op(Op::TwistChi(i(1), v("ch"), v("g"), v("x"))),
                        Rel::Ge,
                        i(0),
                    ),
                ],
            }),
            2,
            "d",
            "chi(E(-1)) = 2 - d >= 0, so d = 2",
        ),
    ]);
    steps.extend(rho_steps(-3));
    steps.extend([
        ax(
            "AX-DESTAB-PAIR",
            "0 -> M -> E -> N -> 0, N base point free, M^2 >= N^2",
            "d = 2 is the gonality",
        ),
        eq(Expr::sq(&k), 2, "(2h - B)^2 = 2"),
        eq(Expr::deg(&k), 5, "(2h - B).h = 5"),
        ax("AX-BPF-ACM", "|2h - B| is base point free", "2h - B"),
        ax("AX-2CONNECTED", "N^2 = 0: (2h - B).N >= 2", ""),
        eq(
            sq_of(comb(&[(1, &c), (-2, &k)])),
            0,
            "C = 2(2h - B), so M.N = C.N = 2(2h - B).N >= 4",
        ),
        Step::Arith(claim(i(4), Rel::Gt, v("d"), "4 > d = 2")),
        eq(
            Expr::add(vec![Expr::sq(&k), Expr::mul(vec![i(-2), i(2)]), i(2)]),
            0,
            "N^2 = 2: (2h - B).N = 2 and (2h - B - N)^2 = 0",
        ),
        ax("AX-SPLIT-EXT", "N = 2h - B gives E = O(2h - B)^2", ""),
        ax("HYP-INDECOMPOSABLE", "E is indecomposable", ""),
        ax("AX-HODGE-INDEX", "N^2 >= 4 gives M.N >= N^2 >= 4", ""),
        Step::Arith(claim(v("d"), Rel::Lt, i(4), "2 = M.N < 4")),
        no_pair(&c, PairMode::Gonality, "AX-DESTAB-PAIR"),
    ]);
    DerivationScript {
        tag: "case-B2neg2-Bh3".into(),
        lattice: quartic(-2, 3),
        assumptions: vec![],
        subject: Some(DivClass::new(c)),
        steps,
        conclusion: Conclusion::Contradiction,
    }
}

fn case_b20_bh4() -> DerivationScript {
    let c = [1, 2];
    let mut steps = quartic_header(0, 4);
    steps.push(eq(Expr::sq(&c), 20, "C^2 = 20"));
    steps.extend(genus_degree(&c, 11, 12));
    steps.push(eq(Expr::add(vec![v("g"), i(3)]), 14, "h^0(E) = 14 - d"));
    steps.extend(forced_degree(6, vec![]));
    steps.extend(rho_steps(-1));
    steps.extend([
        ax(
            "AX-DESTAB-PAIR-IDEAL",
            "0 -> M -> E -> N (x) J_Z' -> 0, N base point free, M^2 >= N^2",
            "",
        ),
        ax("AX-ELLIPTIC-H1", "N^2 = 0: N = rF with F elliptic", ""),
        ax("AX-VA-DEGREE3", "H.F >= 3", ""),
        eq(
            Expr::op(Op::Count {
                vars: vec![VarRange("r".into(), i(1), i(20))],
                conds: vec![Cond::cmp(Expr::mul(vec![i(3), v("r")]), Rel::Le, v("d"))],
            }),
            2,
            "3r <= r(h + 2B).F = C.N = M.N <= 6, so r <= 2",
        ),
        Step::Arith(claim(
            Expr::add(vec![i(3), Expr::mul(vec![i(2), i(2)])]),
            Rel::Gt,
            v("d"),
            "r = 1 and N.B >= 2: 7 <= N.(h + 2B) = N.M, against d = 6",
        )),
        eq(
            Expr::op(Op::Count {
                vars: vec![VarRange("k".into(), i(0), i(20))],
                conds: vec![Cond::cmp(
                    Expr::mul(vec![i(8), v("k")]),
                    Rel::Le,
                    Expr::sq(&c),
                )],
            }),
            3,
            "4N^2 <= C^2 = 20 with N^2 even leaves N^2 in {0, 2, 4}",
        ),
        eq(
            Expr::op(Op::HodgeLower(Expr::sq(&c), i(4))),
            9,
            "N^2 = 4: C.N >= sqrt(80), so C.N = 9 or 10",
        ),
        eq(
            Expr::add(vec![i(4), Expr::mul(vec![i(-2), i(2)]), Expr::sq(&B)]),
            0,
            "(B.N, h.N) = (2, 5): (N - B)^2 = 0",
        ),
        eq(Expr::sub(i(5), Expr::deg(&B)), 1, "h.(N - B) = 1"),
        ax("AX-2CONNECTED", "N.B >= 2", ""),
        ax(
            "AX-MINUS2-FIXED",
            "B = N + Gamma with N.Gamma = 0 contradicts h^1(B) = 0",
            "",
        ),
        no_pair(&c, PairMode::IdealSheaf, "AX-DESTAB-PAIR-IDEAL"),
    ]);
    DerivationScript {
        tag: "case-B20-Bh4".into(),
        lattice: quartic(0, 4),
        assumptions: vec![],
        subject: Some(DivClass::new(c)),
        steps,
        conclusion: Conclusion::Contradiction,
    }
}

fn case_b24() -> DerivationScript {
    let c = [0, 2];
    let mut steps = quartic_header(4, 6);
    steps.push(eq(Expr::sq(&c), 16, "C^2 = 16"));
    steps.extend(genus_degree(&c, 9, 12));
    steps.push(eq(Expr::add(vec![v("g"), i(3)]), 12, "h^0(E) = 12 - d"));
    steps.extend(forced_degree(4, vec![]));
    steps.extend(rho_steps(-3));
    steps.extend([
        ax(
            "AX-DESTAB-PAIR",
            "d = 4 is the gonality (see gonality-2B); 0 -> M -> E -> N -> 0",
            "",
        ),
        ax(
            "HYP-INDECOMPOSABLE",
            "M != N and h^0(M - N) > 0, so h.M > h.N",
            "",
        ),
        bind(
            Expr::mul(vec![
                i(2),
                Expr::sub(
                    Expr::sub(Expr::op(Op::LmH0(v("g"), i(1), v("d"))), i(2)),
                    i(2),
                ),
            ]),
            8,
            "m2",
            "N^2 = 0: M^2/2 + 2 = h^0(M) = h^0(E) - h^0(N) = 6, so M^2 = 8",
        ),
        ax("AX-VA-DEGREE3", "h.N >= 3 and h.(B - N) >= 3", ""),
        bind(
            Expr::op(Op::Unique {
                vars: vec![VarRange("x".into(), i(1), v("ch"))],
                conds: vec![
                    Cond::cmp(v("x"), Rel::Ge, i(3)),
                    Cond::cmp(Expr::sub(Expr::deg(&B), v("x")), Rel::Ge, i(3)),
                ],
            }),
            3,
            "hn",
            "h.N = 3",
        ),
        bind(Expr::sub(v("ch"), v("hn")), 9, "hm", "h.M = H.C - 3 = 9"),
        bind(
            Expr::add(vec![v("m2"), Expr::mul(vec![i(-2), v("hm")]), Expr::sq(&H)]),
            -6,
            "mh2",
            "(M - h)^2 = -6",
        ),
        Step::Arith(claim(
            Expr::op(Op::ChiLine(v("mh2"))),
            Rel::Lt,
            i(0),
            "chi(M(-1)) = -1, so h^1(M(-1)) != 0",
        )),
        Step::Arith(claim(
            Expr::sub(v("hn"), Expr::sq(&H)),
            Rel::Lt,
            i(0),
            "h.(N - h) = -1 < 0, so |N(-1)| is empty",
        )),
        ax("HYP-ACM", "h^1(E(-1)) = 0 forces h^1(M(-1)) = 0", ""),
        eq(
            Expr::sub(Expr::Int(3), i(2)),
            1,
            "N^2 = 2: B.N = 3, so (B - N).N = 1",
        ),
        ax(
            "AX-2CONNECTED",
            "|B| base point free and |B - N| nonempty need (B - N).N >= 2",
            "",
        ),
        no_pair(&c, PairMode::Gonality, "AX-DESTAB-PAIR"),
    ]);
    DerivationScript {
        tag: "case-B24".into(),
        lattice: quartic(4, 6),
        assumptions: ulrich_assumptions(),
        subject: Some(DivClass::new(c)),
        steps,
        conclusion: Conclusion::Contradiction,
    }
}

fn gonality_2b() -> DerivationScript {
    let c = [0, 2];
    let mut steps = quartic_header(4, 6);
    steps.push(eq(Expr::sq(&c), 16, "C0 in |2B|: C0^2 = 16"));
    steps.push(bind(
        Expr::op(Op::Genus(Expr::sq(&c))),
        9,
        "g",
        "the genus of C0 is 9",
    ));
    steps.extend([
        ax(
            "AX-BPF-ACM",
            "|B| is base point free and h^1(B) = h^0(-B) = 0",
            "B",
        ),
        ax(
            "AX-LM-EXISTENCE",
            "some C1 in |2B| has a degree-4 pencil with E = B + B, so d0 <= 4",
            "",
        ),
        eq(
            Expr::op(Op::BrillNoether(v("g"), i(1), i(3))),
            -5,
            "rho(9, 1, 3) = -5",
        ),
        eq(
            Expr::op(Op::Count {
                vars: vec![VarRange("x".into(), i(1), i(3))],
                conds: vec![Cond::cmp(
                    Expr::op(Op::BrillNoether(v("g"), i(1), v("x"))),
                    Rel::Gt,
                    i(-5),
                )],
            }),
            0,
            "rho(9, 1, d0) <= -5 < 0 for d0 <= 3",
        ),
        ax("AX-DESTAB-PAIR", "0 -> M -> E -> N -> 0 for d0 <= 3", ""),
        ax("AX-2CONNECTED", "N^2 = 0: B.N >= 2, so M.N = 2B.N >= 4", ""),
        ax(
            "AX-HODGE-INDEX",
            "N^2 = 2: B.N >= 3; N^2 >= 4: M.N >= 4",
            "",
        ),
        eq(
            Expr::op(Op::HodgeLower(Expr::sq(&B), i(2))),
            3,
            "B.N >= sqrt(8)",
        ),
        eq(
            Expr::add(
                (1..=3)
                    .map(|d| {
                        Expr::op(Op::DestabSurvivors {
                            c: lit(&c),
                            d: i(d),
                            mode: PairMode::Gonality,
                        })
                    })
                    .collect(),
            ),
            0,
            "no destabilizing pair for d0 in {1, 2, 3}",
        ),
    ]);
    DerivationScript {
        tag: "gonality-2B".into(),
        lattice: quartic(4, 6),
        assumptions: ulrich_assumptions(),
        subject: None,
        steps,
        conclusion: Conclusion::Established("the minimal gonality of curves in |2B| is 4".into()),
    }
}

/// Rank-8 lattice of the double cover of a degree-2 del Pezzo surface, basis
/// `l, e1..e7`, ample class `3l - e1 - ... - e7`.
pub fn delpezzo_cover_lattice() -> Lattice {
    let mut gram = vec![vec![0; 8]; 8];
    gram[0][0] = 2;
    for (k, row) in gram.iter_mut().enumerate().skip(1) {
        row[k] = -2;
    }
    let mut labels = vec!["l".to_string()];
    labels.extend((1..=7).map(|k| format!("e{k}")));
    Lattice::new(
        gram,
        labels,
        DivClass::new([3, -1, -1, -1, -1, -1, -1, -1]),
        true,
    )
    .expect("del Pezzo cover lattice is valid")
}

/// `f = 2l - e1 - e2 - e3 - e4`
pub fn delpezzo_f() -> DivClass {
    DivClass::new([2, -1, -1, -1, -1, 0, 0, 0])
}

/// `f_j = l - e_j`
pub fn delpezzo_fj(j: usize) -> DivClass {
    let mut v = vec![0; 8];
    v[0] = 1;
    v[j] = -1;
    DivClass(v)
}

fn delpezzo_cover() -> DerivationScript {
    let h = [3, -1, -1, -1, -1, -1, -1, -1];
    let f = delpezzo_f();
    let mut steps = vec![
        eq(Expr::sq(&h), 4, "h = 3l - e1 - ... - e7: h^2 = 4"),
        eq(Expr::sq(&f.0), 0, "f^2 = 0"),
        eq(Expr::pair(&h, &f.0), 4, "h.f = 4"),
    ];
    for j in 5..=7 {
        let fj = delpezzo_fj(j);
        steps.extend([
            eq(Expr::sq(&fj.0), 0, &format!("f_{j}^2 = 0")),
            eq(Expr::pair(&h, &fj.0), 4, &format!("h.f_{j} = 4")),
            eq(
                sq_of(comb(&[(1, &f.0), (-1, &fj.0)])),
                -8,
                &format!("(f - f_{j})^2 = -8"),
            ),
            eq(
                sq_of(comb(&[(1, &f.0), (1, &fj.0), (-2, &h)])),
                -8,
                &format!("(f + f_{j} - 2h)^2 = -8"),
            ),
        ]);
    }
    steps.extend([
        eq(Expr::op(Op::EvenLattice), 1, "the lattice is even"),
        ax("AX-VA-DEGREE3", "|f| and |f_j| are elliptic pencils", ""),
        eq(
            Expr::op(Op::ChiLine(i(-8))),
            -2,
            "chi(f - f_j) = -2, so h^1(f - f_j) != 0",
        ),
        ax(
            "AX-NONSPLIT-EXT",
            "a nonsplit extension 0 -> O(f) -> E -> O(f_j) -> 0 exists",
            "",
        ),
    ]);
    let mut assumptions = vec![Assumption::new(f, AssumptionKind::EllipticPencil, "f")];
    for j in 5..=7 {
        assumptions.push(Assumption::new(
            delpezzo_fj(j),
            AssumptionKind::EllipticPencil,
            format!("f_{j}"),
        ));
    }
    DerivationScript {
        tag: "delpezzo-cover".into(),
        lattice: delpezzo_cover_lattice(),
        assumptions,
        subject: None,
        steps,
        conclusion: Conclusion::Established(
            "f, f_j elliptic with (f - f_j)^2 = -8 on an even lattice".into(),
        ),
    }
}

/// `B -> k*h - B`, as a map on `(h, B)` coordinates.
fn mirror_map(k: i64) -> Vec<Vec<i64>> {
    vec![vec![1, 0], vec![k, -1]]
}

pub fn builtin_scripts() -> Vec<DerivationScript> {
    let b = case_b2neg2_bh2();
    let d = case_b20_bh4();
    let e = case_b24();
    vec![
        case_b2neg2_bh1(),
        b.mapped("case-B2neg2-Bh2-mirror", &mirror_map(1)),
        b,
        case_b2neg2_bh3(),
        d.mapped("case-B20-Bh4-mirror", &mirror_map(2)),
        d,
        e.mapped("case-B24-mirror", &mirror_map(3)),
        e,
        gonality_2b(),
        delpezzo_cover(),
    ]
}

pub fn builtin_script(tag: &str) -> Option<DerivationScript> {
    builtin_scripts().into_iter().find(|s| s.tag == tag)
}
