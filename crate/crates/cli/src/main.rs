//! `k3acm`: command-line front end for the k3-acm library.
//!
//! Exit codes: 0 success, 1 a check did not go through (failed claim,
//! unresolved branch, boundary touch, incomplete replay), 2 bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use k3_acm::acm::{acm_companions, is_initialized_acm, Assumption};
use k3_acm::casework::builtin::{builtin_script, builtin_scripts};
use k3_acm::casework::cases::{case_preset, CaseError, PRESET_TAGS};
use k3_acm::casework::script::{run_script, DerivationScript};
use k3_acm::casework::{
    enumerate_case, enumerate_destabilizing, verify_theorem_necessity, PairMode,
};
use k3_acm::config::LatticeConfig;
use k3_acm::Lattice;

#[derive(Parser)]
#[command(
    name = "k3acm",
    version,
    about = "Exact lattice casework for aCM bundles on quartic K3 surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Lattice configuration file.
    #[arg(short = 'c', long = "config")]
    config: Option<PathBuf>,
    /// Emit JSON on standard output.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the gram matrix, signature and parity of a lattice.
    LatticeInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Classify a class as an initialized aCM line bundle.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated coefficients in label order.
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
    },
    /// List the aCM companions of a class.
    Companions {
        #[command(flatten)]
        common: Common,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
    },
    /// Enumerate the (s, t) case list of a preset (all presets if omitted).
    Enumerate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long = "box")]
        bound: Option<i64>,
    },
    /// Try to eliminate every destabilizing pair for c1 = C, c2 = d.
    Destabilize {
        #[command(flatten)]
        common: Common,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: String,
        #[arg(long)]
        d: i64,
        /// Use the non-simple (ideal sheaf) form of the pair.
        #[arg(long)]
        ideal_sheaf: bool,
    },
    /// Run a derivation script: a builtin tag or a JSON file.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        script: Option<String>,
        /// Print the script as JSON instead of running it.
        #[arg(long)]
        dump: bool,
    },
    /// Replay the necessity direction for the aCM class of a quartic config.
    Theorem {
        #[command(flatten)]
        common: Common,
        #[arg(long = "class", allow_hyphen_values = true)]
        class: Option<String>,
    },
    /// Check the identities on the double cover of a degree-2 del Pezzo surface.
    ExampleDelpezzo {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Check(String),
    Input(String),
}

type Outcome = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn emit(json: bool, value: &Value, text: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string(value).unwrap_or_default());
    } else {
        print!("{}", text());
    }
}

fn load(common: &Common) -> Result<LatticeConfig, Failure> {
    match &common.config {
        Some(p) => LatticeConfig::load(p).map_err(input),
        None => Err(Failure::Input("this command needs -c <config>".into())),
    }
}

fn load_opt(common: &Common) -> Result<Option<LatticeConfig>, Failure> {
    common.config.as_ref().map(|_| load(common)).transpose()
}

fn fmt_gram(g: &[Vec<i64>]) -> String {
    g.iter()
        .map(|r| {
            format!(
                "  {}\n",
                r.iter().map(|x| format!("{x:>4}")).collect::<String>()
            )
        })
        .collect()
}

fn lattice_info(common: &Common) -> Outcome {
    let cfg = load(common)?;
    let l = &cfg.lattice;
    let (pos, neg) = l.signature().map_err(input)?;
    let h2 = l.self_int(l.ample()).map_err(input)?;
    let v = json!({
        "rank": l.rank(),
        "labels": l.labels(),
        "gram": l.gram(),
        "ample": l.ample(),
        "ample_square": h2,
        "signature": [pos, neg],
        "even": l.is_even(),
        "k3": l.is_k3(),
        "assumptions": cfg.assumptions.len(),
    });
    emit(common.json, &v, || {
        format!(
            "rank {}  labels {}\ngram:\n{}ample {}  (square {h2})\nsignature ({pos}, {neg})  {}  k3 {}\n",
            l.rank(),
            l.labels().join(" "),
            fmt_gram(l.gram()),
            l.ample(),
            if l.is_even() { "even" } else { "odd" },
            l.is_k3()
        )
    });
    Ok(())
}

fn classify(common: &Common, class: &str) -> Outcome {
    let cfg = load(common)?;
    let b = cfg.parse_class(class).map_err(input)?;
    let c = is_initialized_acm(&cfg.lattice, &b, &cfg.assumptions).map_err(input)?;
    let v = json!({ "class": b, "status": c.status, "case": c.case_tag, "missing": c.missing });
    emit(common.json, &v, || {
        let mut s = format!("{b}: {:?} (table case {})\n", c.status, c.case_tag);
        for m in &c.missing {
            s.push_str(&format!("  needs {:?} {}: {}\n", m.kind, m.subject, m.note));
        }
        s
    });
    Ok(())
}

fn companions(common: &Common, class: &str) -> Outcome {
    let cfg = load(common)?;
    let b = cfg.parse_class(class).map_err(input)?;
    let c = is_initialized_acm(&cfg.lattice, &b, &cfg.assumptions).map_err(input)?;
    if !c.is_acm() {
        return Err(Failure::Check(format!(
            "{b} classifies as {:?}, not aCM",
            c.status
        )));
    }
    let comps = acm_companions(&cfg.lattice, &b, &c, &cfg.assumptions)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let v = json!({
        "class": b,
        "companions": comps.iter().map(|(d, r)| json!({"class": d, "rule": r})).collect::<Vec<_>>(),
    });
    emit(common.json, &v, || {
        comps.iter().map(|(d, r)| format!("{d}  {r}\n")).collect()
    });
    Ok(())
}

fn enumerate(common: &Common, preset: Option<&str>, bound: Option<i64>) -> Outcome {
    let cfg = load_opt(common)?;
    let tags: Vec<&str> = match preset {
        Some(p) => vec![p],
        None => PRESET_TAGS.to_vec(),
    };
    let mut results = Vec::new();
    for tag in tags {
        let mut spec = case_preset(tag).map_err(input)?;
        if let Some(b) = bound {
            spec = spec.with_box(b);
        }
        if let Some(cfg) = &cfg {
            if cfg.lattice.gram() != spec.lattice.gram() {
                return Err(Failure::Input(format!(
                    "preset {tag} lives on gram {:?}, config has {:?}",
                    spec.lattice.gram(),
                    cfg.lattice.gram()
                )));
            }
        }
        match enumerate_case(&spec) {
            Ok(sol) => results.push((tag, sol)),
            Err(e @ CaseError::BoxTooSmall { .. }) => return Err(Failure::Check(e.to_string())),
            Err(e) => return Err(input(e)),
        }
    }
    let v = if results.len() == 1 {
        json!({ "solutions": results[0].1 })
    } else {
        Value::Object(
            results
                .iter()
                .map(|(t, s)| (t.to_string(), json!({ "solutions": s })))
                .collect(),
        )
    };
    emit(common.json, &v, || {
        results
            .iter()
            .map(|(t, s)| {
                let list: Vec<String> = s.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                format!("{t}: {}\n", list.join(" "))
            })
            .collect()
    });
    Ok(())
}

fn destabilize(common: &Common, class: &str, d: i64, ideal: bool) -> Outcome {
    let cfg = load(common)?;
    let c = cfg.parse_class(class).map_err(input)?;
    let mode = if ideal {
        PairMode::IdealSheaf
    } else {
        PairMode::Gonality
    };
    let elims =
        enumerate_destabilizing(&cfg.lattice, &c, d, &cfg.assumptions, mode).map_err(input)?;
    let open = elims.iter().filter(|e| !e.outcome.is_eliminated()).count();
    let v = json!({ "class": c, "d": d, "mode": mode, "branches": elims, "unresolved": open });
    emit(common.json, &v, || {
        let mut s = String::new();
        for e in &elims {
            s.push_str(&format!(
                "N^2 = {:>2}  len Z' = {}  M.N = {:>2}  {}\n",
                e.n_square,
                e.len_zprime,
                e.m_dot_n,
                serde_json::to_string(&e.outcome).unwrap_or_default()
            ));
        }
        s.push_str(if open == 0 {
            "all branches eliminated\n"
        } else {
            "UNRESOLVED\n"
        });
        s
    });
    if open == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!("{open} branch(es) unresolved")))
    }
}

fn find_script(arg: &str) -> Result<DerivationScript, Failure> {
    if let Some(s) = builtin_script(arg) {
        return Ok(s);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        let tags: Vec<String> = builtin_scripts().into_iter().map(|s| s.tag).collect();
        Failure::Input(format!(
            "{arg}: not a builtin script ({}) and not readable: {e}",
            tags.join(", ")
        ))
    })?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{arg}: {e}")))
}

fn verify(common: &Common, script: Option<&str>, dump: bool) -> Outcome {
    let cfg = load_opt(common)?;
    let scripts = match script {
        Some(s) => vec![find_script(s)?],
        None => builtin_scripts(),
    };
    let scripts: Vec<DerivationScript> = match &cfg {
        Some(c) => scripts
            .into_iter()
            .map(|s| s.with_lattice(c.lattice.clone()))
            .collect(),
        None => scripts,
    };
    if dump {
        let v = if scripts.len() == 1 {
            json!(scripts[0])
        } else {
            json!(scripts)
        };
        println!("{}", serde_json::to_string_pretty(&v).unwrap_or_default());
        return Ok(());
    }
    let mut reports = Vec::new();
    for s in &scripts {
        reports.push(run_script(s).map_err(input)?);
    }
    let v = if reports.len() == 1 {
        json!(reports[0])
    } else {
        json!(reports)
    };
    emit(common.json, &v, || {
        reports
            .iter()
            .map(|r| r.render())
            .collect::<Vec<_>>()
            .join("\n")
    });
    let bad: Vec<&str> = reports
        .iter()
        .filter(|r| !r.is_success())
        .map(|r| r.tag.as_str())
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(format!("failed: {}", bad.join(", "))))
    }
}

fn theorem(common: &Common, class: Option<&str>) -> Outcome {
    let cfg = load(common)?;
    let b = match (class, &cfg.acm_class) {
        (Some(c), _) => cfg.parse_class(c).map_err(input)?,
        (None, Some(b)) => b.clone(),
        (None, None) => {
            return Err(Failure::Input(
                "no --class given and the config has no acm_class".into(),
            ))
        }
    };
    let r = verify_theorem_necessity(&cfg.lattice, &cfg.assumptions, &b).map_err(input)?;
    emit(common.json, &json!(r), || r.render());
    if r.is_verified() {
        Ok(())
    } else {
        Err(Failure::Check("INCOMPLETE".into()))
    }
}

fn example_delpezzo(common: &Common) -> Outcome {
    let cfg = load_opt(common)?;
    let mut script =
        builtin_script("delpezzo-cover").ok_or_else(|| Failure::Check("missing builtin".into()))?;
    let (lattice, assumptions): (Lattice, Vec<Assumption>) = match cfg {
        Some(c) => (c.lattice, c.assumptions),
        None => (script.lattice.clone(), script.assumptions.clone()),
    };
    script = script.with_lattice(lattice.clone());
    script.assumptions = assumptions;
    let (pos, neg) = lattice.signature().map_err(input)?;
    let r = run_script(&script).map_err(input)?;
    let ok = r.is_success() && (pos, neg) == (1, 7) && lattice.is_even();
    let v = json!({ "signature": [pos, neg], "even": lattice.is_even(), "report": r });
    emit(common.json, &v, || {
        format!(
            "signature ({pos}, {neg}), {}\n{}",
            if lattice.is_even() { "even" } else { "odd" },
            r.render()
        )
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(
            "del Pezzo cover identities do not all hold".into(),
        ))
    }
}

fn run(cli: Cli) -> Outcome {
    match &cli.command {
        Command::LatticeInfo { common } => lattice_info(common),
        Command::Classify { common, class } => classify(common, class),
        Command::Companions { common, class } => companions(common, class),
        Command::Enumerate {
            common,
            preset,
            bound,
        } => enumerate(common, preset.as_deref(), *bound),
        Command::Destabilize {
            common,
            class,
            d,
            ideal_sheaf,
        } => destabilize(common, class, *d, *ideal_sheaf),
        Command::Verify {
            common,
            script,
            dump,
        } => verify(common, script.as_deref(), *dump),
        Command::Theorem { common, class } => theorem(common, class.as_deref()),
        Command::ExampleDelpezzo { common } => example_delpezzo(common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("k3acm: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("k3acm: {m}");
            ExitCode::from(2)
        }
    }
}
