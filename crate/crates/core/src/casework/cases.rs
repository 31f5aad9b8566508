//! Declarative inequality systems over `C = s*h + t*B` and their exhaustive
//! enumeration over a box.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{axioms, Rel};
use crate::invariants::hodge_lower;
use crate::lattice::{DivClass, Lattice, LatticeError};

pub const DEFAULT_BOX: i64 = 32;
pub const MIN_BOX: i64 = 16;
/// Enumeration refuses boxes wider than this.
pub const MAX_BOX: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaseError {
    #[error("solution ({s}, {t}) touches the box boundary {bound}; the search may be truncated")]
    BoxTooSmall { s: i64, t: i64, bound: i64 },
    #[error("box bound {0} outside the allowed range [{MIN_BOX}, {MAX_BOX}]")]
    BadBox(i64),
    #[error("unknown axiom id {0:?} in constraint justification")]
    UnknownAxiom(String),
    #[error("parity modulus must be positive, got {0}")]
    BadModulus(i64),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

pub type Result<T> = std::result::Result<T, CaseError>;

/// Where a constraint comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Justification {
    pub axiom: String,
    pub cite: String,
}

/// Predicates that don't fit the other kinds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "predicate", rename_all = "snake_case", deny_unknown_fields)]
pub enum CustomPredicate {
    /// `C.with == residue (mod modulus)`.
    Parity {
        with: DivClass,
        modulus: i64,
        residue: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConstraintKind {
    /// `C.with rel bound`
    LinearIneq {
        with: DivClass,
        rel: Rel,
        bound: i64,
    },
    /// `C^2 rel bound`
    QuadraticIneq {
        rel: Rel,
        bound: i64,
    },
    /// `C.with >= ceil(sqrt(c2min * with^2))`
    HodgeLower {
        with: DivClass,
        c2min: i64,
    },
    /// `|t| >= min`
    AbsTAtLeast {
        min: i64,
    },
    Custom(CustomPredicate),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub justification: Justification,
}

impl Constraint {
    pub fn new(kind: ConstraintKind, axiom: &str, cite: &str) -> Self {
        Constraint {
            kind,
            justification: Justification {
                axiom: axiom.to_string(),
                cite: cite.to_string(),
            },
        }
    }
}

/// An inequality system in the unknowns `(s, t)` where `C = s*h + t*b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseSpec {
    pub tag: String,
    pub lattice: Lattice,
    pub h: DivClass,
    pub b: DivClass,
    pub constraints: Vec<Constraint>,
    /// Search range is `|s|, |t| <= bound`.
    #[serde(rename = "box")]
    pub bound: i64,
}

impl CaseSpec {
    pub fn with_box(mut self, bound: i64) -> Self {
        self.bound = bound;
        self
    }

    /// Drops every constraint whose kind matches `pred`.
    pub fn without(mut self, pred: impl Fn(&ConstraintKind) -> bool) -> Self {
        self.constraints.retain(|c| !pred(&c.kind));
        self
    }

    /// The class `s*h + t*b`.
    pub fn class_at(&self, s: i64, t: i64) -> std::result::Result<DivClass, LatticeError> {
        DivClass::lin_comb(&[(s, &self.h), (t, &self.b)])
    }
}

// A constraint reduced to polynomial data in (s, t).
enum Compiled {
    // a*s + b*t rel bound
    Linear {
        a: i128,
        b: i128,
        rel: Rel,
        bound: i128,
    },
    // qss*s^2 + qst*s*t + qtt*t^2 rel bound
    Quad {
        qss: i128,
        qst: i128,
        qtt: i128,
        rel: Rel,
        bound: i128,
    },
    AbsT(i128),
    Parity {
        a: i128,
        b: i128,
        m: i128,
        r: i128,
    },
}

impl Compiled {
    fn holds(&self, s: i128, t: i128) -> bool {
        match *self {
            Compiled::Linear { a, b, rel, bound } => rel.holds(a * s + b * t, bound),
            Compiled::Quad {
                qss,
                qst,
                qtt,
                rel,
                bound,
            } => rel.holds(qss * s * s + qst * s * t + qtt * t * t, bound),
            Compiled::AbsT(min) => t.abs() >= min,
            Compiled::Parity { a, b, m, r } => (a * s + b * t).rem_euclid(m) == r.rem_euclid(m),
        }
    }
}

fn compile(spec: &CaseSpec) -> Result<Vec<Compiled>> {
    let l = &spec.lattice;
    let (h, b) = (&spec.h, &spec.b);
    l.class(h.0.clone())?;
    l.class(b.0.clone())?;
    let coeffs = |d: &DivClass| -> Result<(i128, i128)> {
        Ok((l.pair(h, d)? as i128, l.pair(b, d)? as i128))
    };
    let mut out = Vec::with_capacity(spec.constraints.len());
    for c in &spec.constraints {
        if !axioms::is_known(&c.justification.axiom) {
            return Err(CaseError::UnknownAxiom(c.justification.axiom.clone()));
        }
        out.push(match &c.kind {
            ConstraintKind::LinearIneq { with, rel, bound } => {
                let (a, b) = coeffs(with)?;
                Compiled::Linear {
                    a,
                    b,
                    rel: *rel,
                    bound: *bound as i128,
                }
            }
            ConstraintKind::QuadraticIneq { rel, bound } => Compiled::Quad {
                qss: l.self_int(h)? as i128,
                qst: 2 * l.pair(h, b)? as i128,
                qtt: l.self_int(b)? as i128,
                rel: *rel,
                bound: *bound as i128,
            },
            ConstraintKind::HodgeLower { with, c2min } => {
                let (a, b) = coeffs(with)?;
                let lower = hodge_lower(*c2min, l.self_int(with)?);
                Compiled::Linear {
                    a,
                    b,
                    rel: Rel::Ge,
                    bound: lower as i128,
                }
            }
            ConstraintKind::AbsTAtLeast { min } => Compiled::AbsT(*min as i128),
            ConstraintKind::Custom(CustomPredicate::Parity {
                with,
                modulus,
                residue,
            }) => {
                if *modulus <= 0 {
                    return Err(CaseError::BadModulus(*modulus));
                }
                let (a, b) = coeffs(with)?;
                Compiled::Parity {
                    a,
                    b,
                    m: *modulus as i128,
                    r: *residue as i128,
                }
            }
        });
    }
    Ok(out)
}

/// All `(s, t)` in the box satisfying every constraint, sorted.
///
/// Fails with [`CaseError::BoxTooSmall`] when a solution sits on the boundary.
pub fn enumerate_case(spec: &CaseSpec) -> Result<Vec<(i64, i64)>> {
    if !(MIN_BOX..=MAX_BOX).contains(&spec.bound) {
        return Err(CaseError::BadBox(spec.bound));
    }
    let compiled = compile(spec)?;
    let n = spec.bound;
    let mut out = Vec::new();
    for s in -n..=n {
        for t in -n..=n {
            if compiled.iter().all(|c| c.holds(s as i128, t as i128)) {
                if s.abs() == n || t.abs() == n {
                    return Err(CaseError::BoxTooSmall { s, t, bound: n });
                }
                out.push((s, t));
            }
        }
    }
    Ok(out)
}

pub const PRESET_TAGS: [&str; 5] = ["i-a", "i-b", "i-c", "ii", "iii"];

/// `(B^2, h.B)` of the quartic lattice a preset lives on.
pub fn preset_lattice_data(tag: &str) -> Option<(i64, i64)> {
    Some(match tag {
        "i-a" => (-2, 1),
        "i-b" => (-2, 2),
        "i-c" => (-2, 3),
        "ii" => (0, 4),
        "iii" => (4, 6),
        _ => return None,
    })
}

/// One of the five case lists for `|t| >= 2`, on the lattice with basis `(h, B)`.
pub fn case_preset(tag: &str) -> Result<CaseSpec> {
    let (b2, hb) = preset_lattice_data(tag).ok_or_else(|| CaseError::UnknownPreset(tag.into()))?;
    let lattice = Lattice::quartic(b2, hb)?;
    let h = DivClass::new([1, 0]);
    let b = DivClass::new([0, 1]);
    let kh_minus_b = |k: i64| DivClass::new([k, -1]);
    use ConstraintKind::*;
    let mut cs = vec![
        Constraint::new(
            QuadraticIneq {
                rel: Rel::Ge,
                bound: 4,
            },
            "HYP-GENUS",
            "g >= 3, so C^2 >= 4",
        ),
        Constraint::new(
            LinearIneq {
                with: h.clone(),
                rel: Rel::Le,
                bound: 12,
            },
            "AX-ULRICH-BOUND",
            match tag {
                "i-a" => "C.H = 4s+t <= 12",
                "i-b" => "C.H = 4s+2t <= 12",
                "i-c" => "C.H = 4s+3t <= 12",
                "ii" => "C.H = 4s+4t <= 12",
                _ => "C.H = 4s+6t <= 12",
            },
        ),
    ];
    match tag {
        "i-a" => {
            cs.push(Constraint::new(
                LinearIneq {
                    with: b.clone(),
                    rel: Rel::Ge,
                    bound: 0,
                },
                "AX-IRREDUCIBLE-CURVE",
                "C.B = s-2t >= 0",
            ));
            cs.push(Constraint::new(
                LinearIneq {
                    with: kh_minus_b(1),
                    rel: Rel::Ge,
                    bound: 1,
                },
                "AX-1CONNECTED",
                "|h-B| is an elliptic pencil and C^2 > 0, so C.(h-B) = 3(s+t) > 0",
            ));
        }
        "i-b" => {
            cs.push(Constraint::new(
                LinearIneq {
                    with: b.clone(),
                    rel: Rel::Ge,
                    bound: 0,
                },
                "AX-IRREDUCIBLE-CURVE",
                "C.B = 2s-2t >= 0",
            ));
            cs.push(Constraint::new(
                LinearIneq {
                    with: kh_minus_b(1),
                    rel: Rel::Ge,
                    bound: 0,
                },
                "AX-IRREDUCIBLE-CURVE",
                "h-B is a (-2)-class of degree 2 playing the role of B: C.(h-B) = 2s+4t >= 0",
            ));
        }
        "i-c" => {
            cs.push(Constraint::new(
                LinearIneq {
                    with: b.clone(),
                    rel: Rel::Ge,
                    bound: 0,
                },
                "AX-IRREDUCIBLE-CURVE",
                "C.B = 3s-2t >= 0",
            ));
            cs.push(Constraint::new(
                HodgeLower {
                    with: kh_minus_b(2),
                    c2min: 4,
                },
                "AX-HODGE-INDEX",
                "(2h-B)^2 = 2 and C^2 >= 4 give C.(2h-B) = 5s+8t >= 3",
            ));
        }
        "ii" => {
            cs.push(Constraint::new(
                LinearIneq {
                    with: b.clone(),
                    rel: Rel::Ge,
                    bound: 1,
                },
                "AX-1CONNECTED",
                "C.B = 4s > 0",
            ));
            cs.push(Constraint::new(
                LinearIneq {
                    with: kh_minus_b(2),
                    rel: Rel::Ge,
                    bound: 1,
                },
                "AX-1CONNECTED",
                "2h-B plays the role of B: C.(2h-B) = 4s+8t > 0",
            ));
        }
        _ => {
            cs.push(Constraint::new(
                HodgeLower {
                    with: b.clone(),
                    c2min: 4,
                },
                "AX-HODGE-INDEX",
                "C.B = 6s+4t >= 4",
            ));
            cs.push(Constraint::new(
                HodgeLower {
                    with: kh_minus_b(3),
                    c2min: 4,
                },
                "AX-HODGE-INDEX",
                "3h-B plays the role of B: C.(3h-B) = 6s+14t >= 4",
            ));
        }
    }
    cs.push(Constraint::new(
        AbsTAtLeast { min: 2 },
        "HYP-ABS-T",
        "|t| >= 2",
    ));
    Ok(CaseSpec {
        tag: tag.to_string(),
        lattice,
        h,
        b,
        constraints: cs,
        bound: DEFAULT_BOX,
    })
}

pub fn case_presets() -> Vec<CaseSpec> {
    PRESET_TAGS
        .iter()
        .map(|t| case_preset(t).expect("preset tags are fixed"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: evaluate each constraint through the lattice on the
    // actual class, no coefficient precomputation.
    fn brute(spec: &CaseSpec) -> Vec<(i64, i64)> {
        let l = &spec.lattice;
        let n = spec.bound;
        let mut out = vec![];
        for s in -n..=n {
            for t in -n..=n {
                let c = spec.class_at(s, t).unwrap();
                let ok = spec.constraints.iter().all(|k| match &k.kind {
                    ConstraintKind::LinearIneq { with, rel, bound } => {
                        rel.holds(l.pair(&c, with).unwrap(), *bound)
                    }
                    ConstraintKind::QuadraticIneq { rel, bound } => {
                        rel.holds(l.self_int(&c).unwrap(), *bound)
                    }
                    ConstraintKind::HodgeLower { with, c2min } => {
                        let x = l.pair(&c, with).unwrap();
                        let p = c2min * l.self_int(with).unwrap();
                        x >= 1 && x * x >= p
                    }
                    ConstraintKind::AbsTAtLeast { min } => t.abs() >= *min,
                    ConstraintKind::Custom(CustomPredicate::Parity {
                        with,
                        modulus,
                        residue,
                    }) => (l.pair(&c, with).unwrap() - residue) % modulus == 0,
                });
                if ok {
                    out.push((s, t));
                }
            }
        }
        out
    }

    #[test]
    fn presets_reproduce_case_lists() {
        let expected: [&[(i64, i64)]; 5] = [
            &[(3, -2)],
            &[(2, 2), (4, -2)],
            &[(4, -2)],
            &[(1, 2), (5, -2)],
            &[(0, 2), (6, -2)],
        ];
        for (spec, want) in case_presets().iter().zip(expected) {
            assert_eq!(enumerate_case(spec).unwrap(), want, "{}", spec.tag);
            assert_eq!(brute(spec), want, "{}", spec.tag);
        }
    }

    #[test]
    fn presets_stable_under_box() {
        for spec in case_presets() {
            let base = enumerate_case(&spec).unwrap();
            for n in [16, 64] {
                assert_eq!(enumerate_case(&spec.clone().with_box(n)).unwrap(), base);
            }
        }
    }

    #[test]
    fn preset_quotes_are_present() {
        let ia = case_preset("i-a").unwrap();
        assert!(ia.constraints.iter().any(|c| matches!(&c.kind,
            ConstraintKind::LinearIneq { with, rel: Rel::Ge, bound: 1 } if with.0 == [1, -1])));
        let ic = case_preset("i-c").unwrap();
        assert!(ic.constraints.iter().any(|c| matches!(&c.kind,
            ConstraintKind::HodgeLower { with, c2min: 4 } if with.0 == [2, -1])));
        // 5s + 8t >= 3 at the boundary
        let l = &ic.lattice;
        let w = DivClass::new([2, -1]);
        assert_eq!(l.pair(&ic.class_at(1, 0).unwrap(), &w).unwrap(), 5);
        assert_eq!(l.pair(&ic.class_at(0, 1).unwrap(), &w).unwrap(), 8);
        assert_eq!(hodge_lower(4, l.self_int(&w).unwrap()), 3);
        let iii = case_preset("iii").unwrap();
        assert_eq!(hodge_lower(4, iii.lattice.self_int(&iii.b).unwrap()), 4);
    }

    #[test]
    fn dropping_abs_t_gives_superset() {
        let spec = case_preset("i-b")
            .unwrap()
            .without(|k| matches!(k, ConstraintKind::AbsTAtLeast { .. }));
        let sols = enumerate_case(&spec).unwrap();
        assert!(sols.contains(&(2, 2)) && sols.contains(&(4, -2)));
        assert!(sols.iter().any(|(_, t)| t.abs() <= 1));
        assert_eq!(sols, brute(&spec));
    }

    #[test]
    fn boundary_touch_is_reported() {
        let spec = case_preset("i-a")
            .unwrap()
            .without(|k| matches!(k, ConstraintKind::LinearIneq { .. }));
        assert!(matches!(
            enumerate_case(&spec),
            Err(CaseError::BoxTooSmall { .. })
        ));
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(
            case_preset("iv"),
            Err(CaseError::UnknownPreset(_))
        ));
        let spec = case_preset("ii").unwrap();
        assert!(matches!(
            enumerate_case(&spec.clone().with_box(8)),
            Err(CaseError::BadBox(8))
        ));
        let mut bad = spec.clone();
        bad.constraints[0].justification.axiom = "AX-MADE-UP".into();
        assert!(matches!(
            enumerate_case(&bad),
            Err(CaseError::UnknownAxiom(_))
        ));
        let mut bad = spec;
        bad.constraints.push(Constraint::new(
            ConstraintKind::Custom(CustomPredicate::Parity {
                with: DivClass::new([1, 0]),
                modulus: 0,
                residue: 1,
            }),
            "AX-AMPLE",
            "",
        ));
        assert!(matches!(
            enumerate_case(&bad),
            Err(CaseError::BadModulus(0))
        ));
    }

    #[test]
    fn parity_constraint_filters() {
        let mut spec = case_preset("ii").unwrap();
        // C.H = 4s + 4t is always even
        spec.constraints.push(Constraint::new(
            ConstraintKind::Custom(CustomPredicate::Parity {
                with: DivClass::new([1, 0]),
                modulus: 2,
                residue: 1,
            }),
            "AX-AMPLE",
            "odd degree",
        ));
        assert!(enumerate_case(&spec).unwrap().is_empty());
    }

    #[test]
    fn json_round_trip() {
        for spec in case_presets() {
            let js = serde_json::to_string(&spec).unwrap();
            let back: CaseSpec = serde_json::from_str(&js).unwrap();
            assert_eq!(back, spec);
        }
    }
}
