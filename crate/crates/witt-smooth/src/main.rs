use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use witt_smooth::suites::{resolve_seed, SUITES};
use witt_smooth::{eval, run_suite, CliError, SuiteOptions};

/// Exact computations with polynomial vector fields and their smooth modules.
///
/// Inputs are JSON given as a file path, inline text, or `-` for stdin.
/// Exit codes: 0 success, 1 failed check or domain error, 2 usage error.
#[derive(Parser)]
#[command(name = "witt-smooth", version)]
struct Cli {
    /// Arity used when a module descriptor omits `n`, and by `induce`/`suite`.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Truncation window degree D.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Largest acting grade K (defaults to D + level).
    #[arg(long = "grade-cap", global = true, allow_hyphen_values = true)]
    grade_cap: Option<i32>,
    /// Sampling seed; falls back to WITT_SMOOTH_SEED, then a fixed default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Compact single-line JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleArg {
    /// Module descriptor {"family", "n", "data"}.
    #[arg(long)]
    module: String,
}

#[derive(Subcommand)]
enum Command {
    /// Lie bracket of two Witt elements.
    Bracket { inputs: Vec<String> },
    /// Product of two Weyl-algebra elements.
    WeylMul { inputs: Vec<String> },
    /// Checks the gl_n relations for {"n", "dim", "E"}.
    GlnCheck { input: Option<String> },
    /// Acts with a Witt element on a module vector.
    Act {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        x: String,
        #[arg(long)]
        v: String,
    },
    /// Induces a gl_n-module (with g≥1 acting by zero) or the character
    /// with value `lambda`; certifies the tensor-module isomorphism, or acts
    /// when --x and --v are given.
    Induce {
        #[arg(long, conflicts_with = "lambda")]
        gln: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, requires = "v")]
        x: Option<String>,
        #[arg(long, requires = "x")]
        v: Option<String>,
    },
    /// Graded dimensions of the quotient by the submodule generated by
    /// --generators, or by the L_n generators of rank --ln.
    QuotientDims {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, conflicts_with = "ln")]
        generators: Option<String>,
        #[arg(long)]
        ln: Option<usize>,
    },
    /// Height inside the truncation window.
    Height {
        #[command(flatten)]
        module: ModuleArg,
    },
    /// Basis of vectors killed by all grades r..=K.
    Annihilator {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, allow_hyphen_values = true)]
        r: i32,
    },
    /// Truncated cyclicity evidence for the submodule generated by --v.
    Cyclicity {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        v: String,
        #[arg(long = "slice-degree")]
        slice_degree: Option<u32>,
    },
    /// Orbit dimension of t_i^{k+1} d_i on --v (i is 1-based).
    Orbit {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        v: String,
    },
    /// det A_phi for a character of g≥1 (n = 2).
    AphiDet {
        /// {"p": [4 values], "q": [2 values]}.
        #[arg(long, conflicts_with = "p")]
        phi: Option<String>,
        /// Comma-separated p0,p1,p2,p3.
        #[arg(long, allow_hyphen_values = true)]
        p: Option<String>,
        /// Comma-separated q0,q1.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Checks that 1 ⊗ e_k ↦ images[k] extends to an isomorphism.
    Intertwine {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        images: String,
    },
    /// Runs a named verification suite.
    Suite {
        name: String,
        /// Leave out the wall time so the report is byte-stable.
        #[arg(long = "no-timing")]
        no_timing: bool,
    },
    /// Evaluates a request {"op", ...} or a list of requests.
    Eval { input: Option<String> },
}

fn read_source(s: &str) -> Result<String, CliError> {
    if s == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') || t.starts_with('"') {
        return Ok(s.to_string());
    }
    std::fs::read_to_string(s).map_err(|e| CliError::Usage(format!("cannot read {s}: {e}")))
}

fn parse(text: &str, what: &str) -> Result<Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{what} is not valid JSON: {e}")))
}

fn value(s: &str) -> Result<Value, CliError> {
    parse(&read_source(s)?, s)
}

/// Every JSON value on stdin, accepting either a stream or one array.
fn stdin_values() -> Result<Vec<Value>, CliError> {
    let text = read_source("-")?;
    let mut out = Vec::new();
    for v in serde_json::Deserializer::from_str(&text).into_iter::<Value>() {
        out.push(v.map_err(|e| CliError::Usage(format!("stdin is not valid JSON: {e}")))?);
    }
    if out.len() == 1 {
        if let Value::Array(a) = &out[0] {
            return Ok(a.clone());
        }
    }
    Ok(out)
}

fn two_inputs(inputs: &[String]) -> Result<(Value, Value), CliError> {
    let vals = match inputs {
        [] => stdin_values()?,
        [one] if one == "-" => stdin_values()?,
        [a, b] => vec![value(a)?, value(b)?],
        _ => return Err(CliError::Usage(format!("expected two inputs, got {}", inputs.len()))),
    };
    match <[Value; 2]>::try_from(vals) {
        Ok([a, b]) => Ok((a, b)),
        Err(v) => Err(CliError::Usage(format!("expected two JSON values, got {}", v.len()))),
    }
}

fn scalar_list(s: &str) -> Value {
    Value::Array(s.split(',').map(|x| Value::String(x.trim().to_string())).collect())
}

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn module(&self, s: &str) -> Result<Value, CliError> {
        let mut m = value(s)?;
        if m.get("n").is_none() {
            if let (Some(n), Some(obj)) = (self.cli.n, m.as_object_mut()) {
                obj.insert("n".into(), json!(n));
            }
        }
        Ok(m)
    }

    fn window(&self) -> Value {
        let mut w = json!({});
        if let Some(d) = self.cli.degree {
            w["degree"] = json!(d);
        }
        if let Some(k) = self.cli.grade_cap {
            w["grade_cap"] = json!(k);
        }
        w
    }

    fn request(&self) -> Result<Value, CliError> {
        let w = self.window();
        Ok(match &self.cli.command {
            Command::Bracket { inputs } => {
                let (x, y) = two_inputs(inputs)?;
                json!({"op": "bracket", "x": x, "y": y})
            }
            Command::WeylMul { inputs } => {
                let (a, b) = two_inputs(inputs)?;
                json!({"op": "weyl_multiply", "a": a, "b": b})
            }
            Command::GlnCheck { input } => {
                json!({"op": "check_gln_relations", "module": value(input.as_deref().unwrap_or("-"))?})
            }
            Command::Act { module, x, v } => {
                json!({"op": "act", "module": self.module(&module.module)?, "x": value(x)?, "v": value(v)?})
            }
            Command::Induce { gln, lambda, x, v } => {
                let n = self.cli.n;
                let (source, target) = match (gln, lambda) {
                    (Some(g), None) => {
                        let g = value(g)?;
                        let n = g
                            .get("n")
                            .cloned()
                            .ok_or_else(|| CliError::Usage("gl_n module needs \"n\"".into()))?;
                        (
                            json!({"family": "induced", "n": n, "data": {"gln": g.clone()}}),
                            json!({"family": "tensor", "n": n, "data": {"gln": g, "twist": true}}),
                        )
                    }
                    (None, Some(l)) => {
                        let n = n.ok_or_else(|| CliError::Usage("--lambda requires --n".into()))?;
                        let lam = witt_smooth::json::parse_rational(l).map_err(CliError::Usage)?;
                        let b = lam + witt_smooth_core::Scalar::from_integer((n as i64).into());
                        (
                            json!({"family": "wphi", "n": n, "data": {"lambda": l}}),
                            json!({"family": "tensor", "n": n, "data": {"one_dim": witt_smooth::json::format_rational(&b)}}),
                        )
                    }
                    _ => return Err(CliError::Usage("give exactly one of --gln, --lambda".into())),
                };
                match (x, v) {
                    (Some(x), Some(v)) => json!({"op": "act", "module": source, "x": value(x)?, "v": value(v)?}),
                    _ => {
                        let module = witt_smooth::module_from(&target)?;
                        let dim = witt_smooth_core::module::SmoothModule::fiber_dim(&module);
                        let nn = witt_smooth_core::module::SmoothModule::arity(&module);
                        let images: Vec<Value> = (0..dim)
                            .map(|k| {
                                let c: Vec<String> =
                                    (0..dim).map(|q| if q == k { "1".into() } else { "0".into() }).collect();
                                json!({"n": nn, "terms": [{"alpha": vec![0; nn], "c": c}]})
                            })
                            .collect();
                        json!({"op": "intertwiner_check", "source": source, "target": target,
                               "images": images, "window": w})
                    }
                }
            }
            Command::QuotientDims { module, generators, ln } => {
                let mut r = json!({"op": "quotient_graded_dims", "module": self.module(&module.module)?, "window": w});
                match (generators, ln) {
                    (Some(g), None) => r["generators"] = value(g)?,
                    (None, Some(l)) => r["l_n"] = json!(l),
                    _ => return Err(CliError::Usage("give exactly one of --generators, --ln".into())),
                }
                r
            }
            Command::Height { module } => {
                json!({"op": "height", "module": self.module(&module.module)?, "window": w})
            }
            Command::Annihilator { module, r } => {
                json!({"op": "annihilator_space", "module": self.module(&module.module)?, "r": r, "window": w})
            }
            Command::Cyclicity { module, v, slice_degree } => {
                let mut r = json!({"op": "cyclicity_certificate", "module": self.module(&module.module)?,
                                   "v": value(v)?, "window": w});
                if let Some(d) = slice_degree {
                    r["slice_degree"] = json!(d);
                }
                r
            }
            Command::Orbit { module, i, k, v } => json!({
                "op": "local_finiteness_orbit", "module": self.module(&module.module)?,
                "i": i, "k": k, "v": value(v)?, "window": w,
            }),
            Command::AphiDet { phi, p, q } => {
                let phi = match (phi, p) {
                    (Some(f), None) => value(f)?,
                    (None, Some(p)) => {
                        let mut f = json!({"p": scalar_list(p)});
                        if let Some(q) = q {
                            f["q"] = scalar_list(q);
                        }
                        f
                    }
                    _ => return Err(CliError::Usage("give exactly one of --phi, --p".into())),
                };
                json!({"op": "aphi_det", "phi": phi})
            }
            Command::Intertwine { source, target, images } => json!({
                "op": "intertwiner_check", "source": self.module(source)?, "target": self.module(target)?,
                "images": value(images)?, "window": w,
            }),
            Command::Eval { input } => value(input.as_deref().unwrap_or("-"))?,
            Command::Suite { .. } => unreachable!("suites are not requests"),
        })
    }
}

fn render(v: &Value, compact: bool) -> String {
    if compact {
        serde_json::to_string(v).expect("JSON values serialize")
    } else {
        serde_json::to_string_pretty(v).expect("JSON values serialize")
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(p) => std::fs::write(p, format!("{text}\n"))
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| CliError::Usage(format!("cannot write stdout: {e}")))
        }
    }
}

fn suite_text(report: &witt_smooth::SuiteReport, timing: bool) -> String {
    let mut s = String::new();
    for c in &report.checks {
        s.push_str(&format!("{} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name));
        if !c.passed {
            s.push_str(&format!("     {}\n", c.witness));
        }
    }
    let failed = report.failures().count();
    s.push_str(&format!(
        "suite {} seed {}: {} ({} checks, {} failed)",
        report.suite,
        report.seed,
        if report.passed() { "pass" } else { "fail" },
        report.checks.len(),
        failed
    ));
    if timing {
        s.push_str(&format!(" in {} ms", report.elapsed_ms));
    }
    s
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    if let Command::Suite { name, no_timing } = &cli.command {
        if !SUITES.contains(&name.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown suite {name:?}; expected one of {}",
                SUITES.join(", ")
            )));
        }
        let opts = SuiteOptions {
            seed: resolve_seed(cli.seed)?,
            n: cli.n,
            degree: cli.degree,
            grade_cap: cli.grade_cap,
        };
        let report = run_suite(name, &opts)?;
        let text = if cli.json {
            render(&report.to_json(!no_timing), true)
        } else {
            suite_text(&report, !no_timing)
        };
        emit(cli, &text)?;
        return Ok(report.passed());
    }
    let req = Ctx { cli }.request()?;
    let out = eval(&req)?;
    emit(cli, &render(&out, cli.json))?;
    let failed = |v: &Value| v.get("pass") == Some(&Value::Bool(false));
    Ok(match &out {
        Value::Array(list) if matches!(cli.command, Command::Eval { .. }) => !list.iter().any(failed),
        v => !failed(v),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(witt_smooth::EXIT_FAILURE as u8),
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            println!("{}", render(&e.to_json(), true));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
