//! Acceptance gate: one PASS/FAIL line per criterion, written straight to
//! stdout so it shows up even when test output is captured.

use std::io::Write;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use k3_acm::acm::{is_initialized_acm, AcmError, AcmStatus, Assumption, AssumptionKind};
use k3_acm::casework::builtin::{builtin_script, delpezzo_cover_lattice};
use k3_acm::casework::cases::{case_preset, CaseError, CaseSpec, Constraint, ConstraintKind};
use k3_acm::casework::script::{run_script, DerivationReport, StepStatus};
use k3_acm::casework::theorem::{frame, frame_scripts};
use k3_acm::casework::{enumerate_case, Rel};
use k3_acm::config::LatticeConfig;
use k3_acm::invariants::{chern_twist, chi_bundle, lm_invariants, twist_chi, BundleInvariants};
use k3_acm::{DivClass, Lattice};

type Check = Result<String, String>;

const QUARTICS: [&str; 7] = [
    "quartic_b2neg2_bh1.json",
    "quartic_b2neg2_bh2.json",
    "quartic_b2neg2_bh3.json",
    "quartic_b20_bh3.json",
    "quartic_b20_bh4.json",
    "quartic_b22_bh5.json",
    "quartic_b24_bh6.json",
];

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn case_lists() -> Check {
    let want: [(&str, Vec<(i64, i64)>); 5] = [
        ("i-a", vec![(3, -2)]),
        ("i-b", vec![(2, 2), (4, -2)]),
        ("i-c", vec![(4, -2)]),
        ("ii", vec![(1, 2), (5, -2)]),
        ("iii", vec![(0, 2), (6, -2)]),
    ];
    let start = Instant::now();
    for (tag, expect) in &want {
        let got = enumerate_case(&case_preset(tag).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(&got == expect, || {
            format!("{tag}: got {got:?}, want {expect:?}")
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    for (tag, expect) in &want {
        let spec = case_preset(tag).map_err(|e| e.to_string())?.with_box(64);
        let got = enumerate_case(&spec).map_err(|e| e.to_string())?;
        ensure(&got == expect, || format!("{tag} at box 64: {got:?}"))?;
    }
    Ok(format!(
        "5 presets exact at box 32 in {:.1} ms, identical at box 64",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn classifier_sweep() -> Check {
    let ulrich = [
        Assumption::new(DivClass::new([-1, 1]), AssumptionKind::Empty, ""),
        Assumption::new(DivClass::new([2, -1]), AssumptionKind::Empty, ""),
    ];
    let (mut checked, mut skipped) = (0, 0);
    for b2 in (-8..=8).step_by(2) {
        for hb in 0..=12 {
            let Ok(l) = Lattice::quartic(b2, hb) else {
                skipped += 1;
                continue;
            };
            let b = DivClass::new([0, 1]);
            let status = |a: &[Assumption]| match is_initialized_acm(&l, &b, a) {
                Ok(c) => Ok(c.status),
                Err(AcmError::NotEffectiveCandidate(_)) => Ok(AcmStatus::NotAcm),
                Err(e) => Err(e.to_string()),
            };
            let expect = match (b2, hb) {
                (-2, 1..=3) | (0, 3..=4) | (2, 5) => (AcmStatus::Acm, AcmStatus::Acm),
                (4, 6) => (AcmStatus::NeedsAssumption, AcmStatus::AcmUlrich),
                _ => (AcmStatus::NotAcm, AcmStatus::NotAcm),
            };
            let got = (status(&[])?, status(&ulrich)?);
            ensure(got == expect, || {
                format!("({b2}, {hb}): got {got:?}, want {expect:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!(
        "{checked} lattices match the table, {skipped} pairs are not hyperbolic and were skipped"
    ))
}

fn bound(r: &DerivationReport, name: &str) -> Option<i64> {
    let key = format!("; {name} := ");
    r.steps
        .iter()
        .filter(|s| s.status == StepStatus::Verified)
        .find_map(|s| {
            s.detail
                .split_once(&key)
                .and_then(|(_, v)| v.trim().parse().ok())
        })
}

fn constants_table() -> Check {
    let rows: [(&str, i64, i64, i64, Option<i64>); 4] = [
        ("case-B2neg2-Bh2", 13, 12, 8, None),
        ("case-B2neg2-Bh3", 5, 10, 2, Some(-3)),
        ("case-B20-Bh4", 11, 12, 6, Some(-1)),
        ("case-B24", 9, 12, 4, Some(-3)),
    ];
    for (tag, g, ch, d, rho) in rows {
        let s = builtin_script(tag).ok_or_else(|| format!("missing {tag}"))?;
        let r = run_script(&s).map_err(|e| e.to_string())?;
        ensure(r.is_success(), || format!("{tag} did not verify"))?;
        let got = (
            bound(&r, "g"),
            bound(&r, "ch"),
            bound(&r, "d"),
            bound(&r, "rho"),
        );
        ensure(got == (Some(g), Some(ch), Some(d), rho), || {
            format!("{tag}: {got:?}")
        })?;
    }
    let r = run_script(&builtin_script("case-B2neg2-Bh2").unwrap()).map_err(|e| e.to_string())?;
    let det_zero = r
        .steps
        .iter()
        .any(|s| s.cite == "det E(-h-B) = O_X" && s.status == StepStatus::Verified);
    ensure(det_zero, || "c1^2 = 0 of the twist is not verified".into())?;
    ensure(
        bound(&r, "c2t") == Some(2) && bound(&r, "chi") == Some(2),
        || "twisted c2/chi".into(),
    )?;
    ensure(r.verdict == "CONTRADICTION ESTABLISHED", || {
        r.verdict.clone()
    })?;
    Ok("B (13,12,8), C (5,10,2,-3), D (11,12,6,-1), E (9,12,4,-3); twist c1^2=0, c2=2, chi=2 => h^1=-2".into())
}

fn delpezzo_block() -> Check {
    let s = builtin_script("delpezzo-cover").ok_or("missing script")?;
    let r = run_script(&s).map_err(|e| e.to_string())?;
    ensure(r.is_success(), || r.render())?;
    let verified = r
        .steps
        .iter()
        .filter(|s| s.status == StepStatus::Verified)
        .count();
    for j in 5..=7 {
        for c in [
            format!("(f - f_{j})^2 = -8"),
            format!("(f + f_{j} - 2h)^2 = -8"),
        ] {
            ensure(
                r.steps
                    .iter()
                    .any(|s| s.cite == c && s.status == StepStatus::Verified),
                || c.clone(),
            )?;
        }
    }
    let l = delpezzo_cover_lattice();
    let sig = l.signature().map_err(|e| e.to_string())?;
    ensure(sig == (1, 7) && l.is_even(), || {
        format!("signature {sig:?}, even {}", l.is_even())
    })?;
    let cfg =
        LatticeConfig::load(configs().join("delpezzo_cover.json")).map_err(|e| e.to_string())?;
    ensure(cfg.lattice == l, || {
        "shipped config differs from the builtin lattice".into()
    })?;
    Ok(format!(
        "{verified} identities verified, even, signature (1, 7)"
    ))
}

fn theorem_replay() -> Check {
    let mut survivors = 0;
    for q in QUARTICS {
        let out = Command::new(env!("CARGO_BIN_EXE_k3acm"))
            .args(["theorem", "--json", "-c"])
            .arg(configs().join(q))
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.code() == Some(0), || {
            format!("{q}: exit {:?}", out.status.code())
        })?;
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| format!("{q}: {e}"))?;
        ensure(v["status"] == "VERIFIED", || {
            format!("{q}: {}", v["status"])
        })?;
        let sv = v["survivors"].as_array().ok_or("no survivors array")?;
        ensure(sv.iter().all(|s| s["script"].is_string()), || {
            format!("{q}: unmatched survivor")
        })?;
        let low = v["low_t"].as_array().ok_or("no low_t array")?;
        ensure(
            low.len() == 3 && low.iter().all(|l| l["via"].is_string()),
            || format!("{q}: |t| <= 1"),
        )?;
        survivors += sv.len();
    }
    Ok(format!(
        "{} quartic configs exit 0, {survivors} survivors matched, every |t| <= 1 reduced",
        QUARTICS.len()
    ))
}

fn random_class(rng: &mut ChaCha8Rng, rank: usize, r: i64) -> DivClass {
    DivClass((0..rank).map(|_| rng.gen_range(-r..=r)).collect())
}

fn shipped_lattices() -> Result<Vec<Lattice>, String> {
    let mut v = Vec::new();
    for q in QUARTICS.iter().chain(["delpezzo_cover.json"].iter()) {
        v.push(
            LatticeConfig::load(configs().join(q))
                .map_err(|e| e.to_string())?
                .lattice,
        );
    }
    Ok(v)
}

fn brute(spec: &CaseSpec) -> Result<Vec<(i64, i64)>, ()> {
    let l = &spec.lattice;
    let n = spec.bound;
    let mut out = Vec::new();
    for s in -n..=n {
        for t in -n..=n {
            let c = spec.class_at(s, t).map_err(|_| ())?;
            let ok = spec.constraints.iter().all(|k| match &k.kind {
                ConstraintKind::LinearIneq { with, rel, bound } => {
                    rel.holds(l.pair(&c, with).unwrap(), *bound)
                }
                ConstraintKind::QuadraticIneq { rel, bound } => {
                    rel.holds(l.self_int(&c).unwrap(), *bound)
                }
                ConstraintKind::HodgeLower { with, c2min } => {
                    let x = l.pair(&c, with).unwrap();
                    x >= 1 && x * x >= c2min * l.self_int(with).unwrap()
                }
                ConstraintKind::AbsTAtLeast { min } => t.abs() >= *min,
                ConstraintKind::Custom(_) => true,
            });
            if ok {
                if s.abs() == n || t.abs() == n {
                    return Err(());
                }
                out.push((s, t));
            }
        }
    }
    Ok(out)
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4b33);
    let lattices = shipped_lattices()?;
    for l in &lattices {
        for _ in 0..1000 {
            let [x, y, z] = [0, 1, 2].map(|_| random_class(&mut rng, l.rank(), 40));
            let k = rng.gen_range(-9..=9);
            let lhs = l
                .pair(&x.checked_scale(k).unwrap().checked_add(&y).unwrap(), &z)
                .unwrap();
            ensure(
                lhs == k * l.pair(&x, &z).unwrap() + l.pair(&y, &z).unwrap(),
                || "bilinearity".into(),
            )?;
            ensure(l.pair(&x, &y).unwrap() == l.pair(&y, &x).unwrap(), || {
                "symmetry".into()
            })?;
            ensure(l.self_int(&x).unwrap() % 2 == 0, || "evenness".into())?;
        }
    }

    let dp = delpezzo_cover_lattice();
    let mut pairs = 0;
    while pairs < 1000 {
        let mut x = random_class(&mut rng, 8, 4);
        let mut y = random_class(&mut rng, 8, 4);
        x.0[0] = rng.gen_range(1..=25);
        y.0[0] = rng.gen_range(1..=25);
        if dp.self_int(&x).unwrap() <= 0 || dp.self_int(&y).unwrap() <= 0 {
            continue;
        }
        ensure(dp.hodge_check(&x, &y).unwrap(), || {
            format!("Hodge index fails for {x}, {y}")
        })?;
        pairs += 1;
    }

    let mut specs = 0;
    while specs < 100 {
        let b2 = 2 * rng.gen_range(-4..=4);
        let hb = rng.gen_range(0..=12);
        let Ok(lattice) = Lattice::quartic(b2, hb) else {
            continue;
        };
        let h = DivClass::new([1, 0]);
        let mut cs = vec![
            Constraint::new(
                ConstraintKind::QuadraticIneq {
                    rel: Rel::Ge,
                    bound: rng.gen_range(0..=8),
                },
                "HYP-GENUS",
                "",
            ),
            Constraint::new(
                ConstraintKind::LinearIneq {
                    with: h.clone(),
                    rel: Rel::Ge,
                    bound: 1,
                },
                "AX-AMPLE",
                "",
            ),
            Constraint::new(
                ConstraintKind::LinearIneq {
                    with: h.clone(),
                    rel: Rel::Le,
                    bound: rng.gen_range(1..=12),
                },
                "AX-ULRICH-BOUND",
                "",
            ),
        ];
        for _ in 0..rng.gen_range(0..3) {
            let with = random_class(&mut rng, 2, 3);
            cs.push(match rng.gen_range(0..3) {
                0 => Constraint::new(
                    ConstraintKind::LinearIneq {
                        with,
                        rel: Rel::Ge,
                        bound: rng.gen_range(-10..=10),
                    },
                    "AX-AMPLE",
                    "",
                ),
                1 => Constraint::new(
                    ConstraintKind::HodgeLower {
                        with,
                        c2min: rng.gen_range(0..=8),
                    },
                    "AX-HODGE-INDEX",
                    "",
                ),
                _ => Constraint::new(
                    ConstraintKind::AbsTAtLeast {
                        min: rng.gen_range(0..=3),
                    },
                    "HYP-ABS-T",
                    "",
                ),
            });
        }
        let spec = CaseSpec {
            tag: "random".into(),
            lattice,
            h,
            b: DivClass::new([0, 1]),
            constraints: cs,
            bound: 24,
        };
        match (enumerate_case(&spec), brute(&spec)) {
            (Ok(a), Ok(b)) if a == b => {}
            (Err(CaseError::BoxTooSmall { .. }), Err(())) => {}
            (a, b) => return Err(format!("oracle mismatch on ({b2}, {hb}): {a:?} vs {b:?}")),
        }
        specs += 1;
    }

    let mutations = gram_mutations()?;
    Ok(format!(
        "bilinear/symmetric/even on {} lattices x 1000, Hodge index on {pairs} pairs, {specs} specs match brute force, {mutations} gram mutations all caught",
        lattices.len()
    ))
}

// Every +-1 change of one gram entry (kept symmetric) of a shipped quartic
// must make some claim in that quartic's scripts fail.
fn gram_mutations() -> Result<usize, String> {
    let mut n = 0;
    for q in QUARTICS {
        let cfg = LatticeConfig::load(configs().join(q)).map_err(|e| e.to_string())?;
        let b = cfg.acm_class.clone().ok_or("config without acm_class")?;
        let fr = frame(&cfg.lattice, &b).map_err(|e| e.to_string())?;
        let scripts = frame_scripts(&fr.preset).map_err(|e| e.to_string())?;
        for (i, j) in [(0, 0), (0, 1), (1, 1)] {
            for delta in [-1, 1] {
                let mut g = cfg.lattice.gram().to_vec();
                g[i][j] += delta;
                g[j][i] = g[i][j];
                let mutated = Lattice::new(
                    g,
                    cfg.lattice.labels().to_vec(),
                    cfg.lattice.ample().clone(),
                    false,
                )
                .map_err(|e| e.to_string())?;
                let frame_lat = fr.lattice(&mutated).map_err(|e| e.to_string())?;
                let caught = scripts.iter().any(|s| {
                    match run_script(&s.clone().with_lattice(frame_lat.clone())) {
                        Ok(r) => r.steps.iter().any(|st| st.status == StepStatus::Failed),
                        Err(_) => false,
                    }
                });
                ensure(caught, || {
                    format!("{q}: gram[{i}][{j}] {delta:+} goes unnoticed")
                })?;
                n += 1;
            }
        }
    }
    Ok(n)
}

fn consistency() -> Check {
    for g in 3..=20 {
        for d in 1..=20 {
            let lm = lm_invariants(g, 1, d).map_err(|e| e.to_string())?;
            let tc = twist_chi(0, 2 * g - 2, g, d);
            ensure(tc == g - d + 3 && lm.h0 == tc, || {
                format!("g={g}, d={d}: {tc} vs {}", lm.h0)
            })?;
        }
    }
    let cases = [
        (-2, 1, [3, -2], 9),
        (-2, 2, [2, 2], 8),
        (-2, 3, [4, -2], 2),
        (0, 4, [1, 2], 6),
        (4, 6, [0, 2], 4),
    ];
    let mut twists = 0;
    for (b2, hb, c, d) in cases {
        let lat = Lattice::quartic(b2, hb).map_err(|e| e.to_string())?;
        let e = BundleInvariants::new(2, DivClass::new(c), d).map_err(|e| e.to_string())?;
        let chi = chi_bundle(&e, &lat).map_err(|e| e.to_string())?;
        for a in -3..=3 {
            for b in -3..=3 {
                let l = DivClass::new([a, b]);
                let t = chern_twist(&e, &l, &lat).map_err(|e| e.to_string())?;
                let back = chern_twist(&t, &l.checked_scale(-1).unwrap(), &lat)
                    .map_err(|e| e.to_string())?;
                ensure(back == e, || format!("round trip fails for {l}"))?;
                // chi(E(L)) = chi(E) + c1.L + L^2 for rank 2.
                let want = chi + lat.pair(&e.c1, &l).unwrap() + lat.self_int(&l).unwrap();
                ensure(chi_bundle(&t, &lat).unwrap() == want, || {
                    format!("chi(E({l}))")
                })?;
                twists += 1;
            }
        }
    }
    Ok(format!(
        "twist_chi(0) = g-d+3 = h0 on 18x20 grid; {twists} twist round trips"
    ))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("case lists", case_lists),
        ("classifier table sweep", classifier_sweep),
        ("casework constants", constants_table),
        ("del Pezzo cover identities", delpezzo_block),
        ("necessity replay", theorem_replay),
        ("property suites", property_suites),
        ("consistency identities", consistency),
    ];
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed.push(k + 1);
                ("FAIL", m)
            }
        };
        writeln!(out, "acceptance {}: {tag} {name}: {msg}", k + 1).unwrap();
    }
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
