use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superint::catalog::{self, match_nlcc, template_match, verify_potential, CatalogEntry};
use superint::compat::{classification_report, classify, lcc, nlcc, Nlcc};
use superint::deteq::{counts, determining_system_to, AMap, IntegralAnsatz};
use superint::painleve::{painleve_test, OdeSpec};
use superint::symcore::{parse_expr, prettify, DPoly};
use superint::Error;

const SCHEMA: &str = "1";

#[derive(Parser)]
#[command(
    name = "superint",
    version,
    about = "Determining equations, compatibility conditions and Painleve tests"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Render expressions with unicode symbols.
    #[arg(long, global = true)]
    pretty: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "I")]
    One,
    #[value(name = "II")]
    Two,
}

#[derive(Args)]
struct AnsatzArgs {
    /// Order N of the integral.
    #[arg(long)]
    order: usize,
    /// Leading part of one of the two families.
    #[arg(long, value_enum, conflicts_with = "amap")]
    family: Option<FamilyArg>,
    /// Explicit leading coefficients, e.g. "A_1_2_2=1, A_0_5_0=cgamma".
    /// Without --family or --amap every coefficient is a free parameter.
    #[arg(long)]
    amap: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Number of determining equations and unknown functions.
    Counts {
        #[arg(long)]
        order: usize,
    },
    /// Determining equations level by level.
    Deteq {
        #[command(flatten)]
        ans: AnsatzArgs,
        /// Highest level (default: WORKBENCH_MAX_LEVEL, else all).
        #[arg(long)]
        level: Option<usize>,
    },
    /// Linear compatibility condition and its one-variable pieces.
    Lcc {
        #[command(flatten)]
        ans: AnsatzArgs,
    },
    /// Doubly exotic / singly exotic / standard.
    Classify {
        #[command(flatten)]
        ans: AnsatzArgs,
        /// Also compute the level-2 condition for doubly exotic cases.
        #[arg(long)]
        nlcc: bool,
    },
    /// Nonlinear compatibility condition at a level.
    Nlcc {
        #[command(flatten)]
        ans: AnsatzArgs,
        #[arg(long, default_value_t = 2)]
        level: usize,
    },
    /// Painleve test of an ODE file (`-` for stdin) or a catalog entry.
    Painleve {
        #[arg(
            long = "in",
            conflicts_with = "catalog",
            required_unless_present = "catalog"
        )]
        input: Option<PathBuf>,
        #[arg(long)]
        catalog: Option<String>,
        /// Specialise a parameter or hbar before testing, e.g. --set hbar=0.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Substitute a catalog potential into the determining equations.
    Verify {
        #[arg(long)]
        catalog: String,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Painleve regression over the catalog.
    CatalogRun {
        /// Restrict to these ids (repeatable).
        #[arg(long)]
        catalog: Vec<String>,
        /// Also match generated NLCCs and verify potentials.
        #[arg(long)]
        verify: bool,
    },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::UnknownIdent { .. }
            | Error::UnknownCatalogId(_)
            | Error::BadOde(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e.to_string()),
        }
    }
}

struct Output {
    result: Value,
    warnings: Vec<String>,
    /// Exit status 1 without an error message (catalog-run mismatches).
    failed: bool,
}

impl Output {
    fn ok(result: Value) -> Self {
        Output {
            result,
            warnings: Vec::new(),
            failed: false,
        }
    }
}

fn max_level_env() -> Result<Option<usize>, Failure> {
    match std::env::var("WORKBENCH_MAX_LEVEL") {
        Ok(s) => s.trim().parse().map(Some).map_err(|_| {
            Failure::Usage(format!(
                "WORKBENCH_MAX_LEVEL must be a non-negative integer, got `{s}`"
            ))
        }),
        Err(_) => Ok(None),
    }
}

fn ansatz(a: &AnsatzArgs) -> Result<IntegralAnsatz, Failure> {
    let n = a.order;
    if n < 1 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    if let Some(f) = a.family {
        return match f {
            FamilyArg::One => Ok(IntegralAnsatz::family_one(n)),
            FamilyArg::Two if n < 4 => Err(Failure::Usage("family II needs --order >= 4".into())),
            FamilyArg::Two => Ok(IntegralAnsatz::family_two(n)),
        };
    }
    let Some(text) = &a.amap else {
        return Ok(IntegralAnsatz::full(n));
    };
    let mut map = AMap::new();
    for item in text
        .split([',', ';'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected A_a_m_n=value, got `{item}`")))?;
        let idx: Vec<usize> = name
            .trim()
            .strip_prefix("A_")
            .map(|r| r.split('_').filter_map(|x| x.parse().ok()).collect())
            .unwrap_or_default();
        let [ea, m, k] = idx[..] else {
            return Err(Failure::Usage(format!(
                "`{}` is not of the form A_a_m_n",
                name.trim()
            )));
        };
        map.insert((ea, m, k), parse_expr(value.trim())?);
    }
    IntegralAnsatz::new(n, map).map_err(|e| Failure::Usage(e.to_string()))
}

fn ansatz_json(ans: &IntegralAnsatz) -> Value {
    let a: serde_json::Map<String, Value> = ans
        .a
        .iter()
        .map(|(&(ea, m, k), v)| (format!("A_{ea}_{m}_{k}"), json!(v.to_string())))
        .collect();
    json!({ "N": ans.n, "A": a })
}

fn nlcc_json(r: &Nlcc) -> Value {
    let fixed: Vec<Value> = r
        .fixed
        .order
        .iter()
        .map(|u| json!([u, r.fixed.values[u].to_string()]))
        .collect();
    json!({
        "level": r.level,
        "constants": r.constants,
        "fixed": fixed,
        "condition": r.fixed.apply(&r.condition).to_string(),
        "x_part": r.x_part.to_string(),
        "y_part": r.y_part.to_string(),
        "separation_constants": r.odes.constants,
        "lower_conditions": r.lower_conditions.iter().map(DPoly::to_string).collect::<Vec<_>>(),
    })
}

fn load_ode(
    input: &Option<PathBuf>,
    catalog: &Option<String>,
) -> Result<(OdeSpec, Option<&'static CatalogEntry>), Failure> {
    if let Some(id) = catalog {
        let e = catalog::get(id)?;
        return Ok((e.ode.clone(), Some(e)));
    }
    let path = input.as_ref().expect("clap requires --in or --catalog");
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    Ok((OdeSpec::parse(&text)?, None))
}

fn run(cmd: &Cmd) -> Result<Output, Failure> {
    Ok(match cmd {
        Cmd::Counts { order } => {
            let (equations, unknowns) = counts(*order);
            Output::ok(json!({ "N": order, "equations": equations, "unknowns": unknowns }))
        }
        Cmd::Deteq { ans, level } => {
            let ans = ansatz(ans)?;
            let max = level.or(max_level_env()?).unwrap_or(ans.top_level());
            let sys = determining_system_to(&ans, max);
            let mut r = sys.to_json();
            r["ansatz"] = ansatz_json(&ans);
            r["equation_count"] = json!(sys.equation_count());
            Output::ok(r)
        }
        Cmd::Lcc { ans } => {
            let ans = ansatz(ans)?;
            let l = lcc(&ans);
            let extras: Vec<Value> = l
                .extras
                .iter()
                .map(|(v, k, p)| json!({ "var": v.name(), "power": k, "coeff": p.to_string() }))
                .collect();
            Output::ok(json!({
                "ansatz": ansatz_json(&ans),
                "condition": l.full.to_string(),
                "tau1": l.tau1.to_string(),
                "ups1": l.ups1.to_string(),
                "tau2": l.tau2.to_string(),
                "ups2": l.ups2.to_string(),
                "extras": extras,
            }))
        }
        Cmd::Classify { ans, nlcc: want } => {
            let ans = ansatz(ans)?;
            let c = classify(&ans);
            let mut warnings = Vec::new();
            let parts = if *want
                && c.class == superint::compat::ExoticClass::DoublyExotic
                && ans.top_level() >= 2
            {
                match nlcc(&ans, 2) {
                    Ok(r) => Some((r.x_part, r.y_part)),
                    Err(e) => {
                        warnings.push(format!("level-2 condition not computed: {e}"));
                        None
                    }
                }
            } else {
                None
            };
            let r = classification_report(&ans, &c, parts.as_ref().map(|(x, y)| (x, y)));
            Output {
                result: r,
                warnings,
                failed: false,
            }
        }
        Cmd::Nlcc { ans: a, level } => {
            let ans = ansatz(a)?;
            if *level < 2 || *level > ans.top_level() {
                return Err(Failure::Usage(format!(
                    "--level must lie in 2..={}",
                    ans.top_level()
                )));
            }
            let r = nlcc(&ans, *level)?;
            let mut out = nlcc_json(&r);
            out["ansatz"] = ansatz_json(&ans);
            let family = a.family.map(|f| match f {
                FamilyArg::One => catalog::Family::I,
                FamilyArg::Two => catalog::Family::II,
            });
            let entry = catalog::all()
                .iter()
                .find(|e| Some(e.family) == family && e.n == ans.n);
            if let Some(e) = entry.filter(|e| catalog::nlcc_level(e) == *level) {
                out["catalog_match"] = match match_nlcc(e) {
                    Ok(m) => json!({ "id": e.id, "report": m }),
                    Err(err) => json!({ "id": e.id, "error": err.to_string() }),
                };
            }
            Output::ok(out)
        }
        Cmd::Painleve {
            input,
            catalog,
            set,
        } => {
            let (mut ode, entry) = load_ode(input, catalog)?;
            for s in set {
                let (name, value) = s.split_once('=').ok_or_else(|| {
                    Failure::Usage(format!("--set expects NAME=VALUE, got `{s}`"))
                })?;
                ode = ode.with_value(name.trim(), &parse_expr(value.trim())?);
            }
            let rep = painleve_test(&ode);
            let mut warnings: Vec<String> = rep.diagnostics.clone();
            for b in &rep.branches {
                if let Some(e) = &b.expansion {
                    for c in e.checks.iter().filter(|c| !c.constraints.is_empty()) {
                        warnings.push(format!(
                            "p = {}: resonance {} holds only if {}",
                            b.balance.p,
                            c.r,
                            c.constraints.join(", ")
                        ));
                    }
                }
            }
            let mut r = rep.to_json();
            r["ode"] = json!(ode.eq.to_string());
            if let Some(e) = entry {
                r["catalog"] = json!(e.id);
                r["expected_resonances"] = json!(e.expected_resonances);
                r["matches_expected"] = json!(rep.has_passing_resonances(&e.expected_resonances));
            }
            Output {
                result: r,
                warnings,
                failed: false,
            }
        }
        Cmd::Verify { catalog: id, level } => {
            let e = catalog::get(id)?;
            let level = level.or(max_level_env()?);
            let rep = verify_potential(e, level)?;
            let mut r = serde_json::to_value(&rep).expect("report serialises");
            r["passes"] = json!(rep.passes());
            let warnings = rep
                .levels
                .iter()
                .filter(|l| !l.literal_residuals.is_empty())
                .map(|l| {
                    format!(
                        "level {}: the catalog's literal constants violate {}",
                        l.level,
                        l.literal_residuals.join(", ")
                    )
                })
                .collect();
            Output {
                result: r,
                warnings,
                failed: false,
            }
        }
        Cmd::CatalogRun {
            catalog: ids,
            verify,
        } => catalog_run(ids, *verify)?,
    })
}

fn catalog_run(ids: &[String], verify: bool) -> Result<Output, Failure> {
    let entries: Vec<&CatalogEntry> = if ids.is_empty() {
        catalog::all().iter().collect()
    } else {
        ids.iter()
            .map(|id| catalog::get(id))
            .collect::<superint::Result<_>>()?
    };
    let rows: Vec<Value> = std::thread::scope(|s| {
        let handles: Vec<_> = entries
            .iter()
            .map(|e| s.spawn(move || catalog_row(e, verify)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("catalog worker panicked"))
            .collect()
    });
    let mismatches: Vec<String> = rows
        .iter()
        .filter(|r| r["matches_expected"] == json!(false))
        .map(|r| r["id"].as_str().unwrap_or("").to_string())
        .collect();
    let warnings = mismatches
        .iter()
        .map(|id| format!("{id}: expected resonances not found on a passing branch"))
        .collect();
    Ok(Output {
        result: json!({ "entries": rows, "mismatches": mismatches }),
        warnings,
        failed: !mismatches.is_empty(),
    })
}

fn catalog_row(e: &CatalogEntry, verify: bool) -> Value {
    let rep = painleve_test(&e.ode);
    let branches: Vec<Value> = rep
        .branches
        .iter()
        .map(|b| {
            json!({
                "p": b.balance.p.to_string(),
                "verdict": b.verdict.as_str(),
                "resonances": b.resonances.as_ref().map(|r| r.integers.clone()),
            })
        })
        .collect();
    let t = template_match(&e.ode, e.template());
    let mut row = json!({
        "id": e.id,
        "N": e.n,
        "family": e.family.as_str(),
        "verdict": rep.verdict.as_str(),
        "expected_resonances": e.expected_resonances,
        "resonance_source": e.resonance_source,
        "matches_expected": rep.has_passing_resonances(&e.expected_resonances),
        "branches": branches,
        "template": t.matched,
    });
    if verify {
        row["nlcc_match"] = match match_nlcc(e) {
            Ok(m) => {
                json!({ "matched": m.matched, "mapping": m.mapping, "unresolved": m.unresolved })
            }
            Err(err) => json!({ "error": err.to_string() }),
        };
        row["verify"] = match verify_potential(e, None) {
            Ok(v) => json!({
                "passes": v.passes(),
                "levels": v.levels.iter().map(|l| json!([l.level, l.status])).collect::<Vec<_>>(),
            }),
            Err(err) => json!({ "error": err.to_string() }),
        };
    }
    row
}

fn prettify_value(v: &mut Value) {
    match v {
        Value::String(s) => *s = prettify(s),
        Value::Array(a) => a.iter_mut().for_each(prettify_value),
        Value::Object(o) => o.values_mut().for_each(prettify_value),
        _ => {}
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat(x) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat(x) {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    text(x, indent + 1, out);
                }
            }
        }
        x => out.push_str(&format!("{pad}{}\n", scalar(x))),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(o) => o.is_empty(),
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Object(_) => "{}".into(),
        x => x.to_string(),
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Counts { .. } => "counts",
        Cmd::Deteq { .. } => "deteq",
        Cmd::Lcc { .. } => "lcc",
        Cmd::Classify { .. } => "classify",
        Cmd::Nlcc { .. } => "nlcc",
        Cmd::Painleve { .. } => "painleve",
        Cmd::Verify { .. } => "verify",
        Cmd::CatalogRun { .. } => "catalog-run",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let t0 = Instant::now();
    let outcome = run(&cli.cmd);
    let elapsed = t0.elapsed();
    let out = match outcome {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let mut result = out.result;
    if cli.pretty {
        prettify_value(&mut result);
    }
    let report = json!({
        "schema": SCHEMA,
        "command": command_name(&cli.cmd),
        "args": args,
        "result": result,
        "warnings": out.warnings,
    });
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serialisable") + "\n",
        Format::Text => {
            let mut s = String::new();
            text(&report, 0, &mut s);
            s
        }
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, rendered) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    eprintln!("elapsed: {:.3} s", elapsed.as_secs_f64());
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
