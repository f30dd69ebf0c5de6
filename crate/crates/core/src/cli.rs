//! The `qfactor` command line.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::extract::DynamicalSystem;
use crate::factor::{find_conjugacy, ConjugacyOutcome, FactorSystem, DEFAULT_BUDGET};
use crate::fdqg::GroupTable;
use crate::fixtures::{self, FIXTURES};
use crate::fusionring::{positive_ring_homs, DEFAULT_STARTS};
use crate::io::{self, AlgebraJson, CatalogJson, FactorSystemJson, GroupSpec};
use crate::numerics::Tolerance;
use crate::reconstruct::{assemble_algebra, check_free_m_surjective, verify_unitary_tensor_functor};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_STRUCTURAL: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "qfactor", version, about = "Factor systems of free actions of finite quantum groups")]
struct Cli {
    /// Absolute and relative tolerance.
    #[arg(long, global = true, env = "QFACTOR_TOL")]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Artifact path (algebra, factor system, catalog, fixture directory) or, for pure checks, the JSON report.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the factor-system axioms and the tensor-functor obligations, or the coaction axioms of a dynamical system.
    Validate { file: PathBuf },
    /// Build the algebra of a factor system.
    Reconstruct { file: PathBuf },
    /// Read off the factor system of a free dynamical system.
    Extract { file: PathBuf },
    /// Ellwood density and surjectivity of the multiplication maps.
    CheckFree { file: PathBuf },
    /// Murray–von Neumann comparison of γ_π(1) with 1 ⊗ 1_B.
    CheckCleft { file: PathBuf },
    /// Search for a conjugacy between two factor systems.
    Conjugate {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Positive ring homomorphisms of a representation ring.
    FusionHoms {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STARTS)]
        starts: usize,
    },
    /// List built-in quantum groups, or build one from a reference or a group-table file.
    Catalog {
        group: Option<String>,
        /// Algebra built on a bare group table.
        #[arg(long, value_parser = ["dual", "fun"], default_value = "dual")]
        algebra: String,
    },
    /// List the bundled example files, or write them to the `--out` directory.
    Fixtures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => EXIT_PASS,
            Verdict::Fail => EXIT_CHECK_FAILED,
            Verdict::Undecided => EXIT_UNDECIDED,
            Verdict::Error => EXIT_STRUCTURAL,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputHash>,
    pub tolerance: Tolerance,
    pub seed: u64,
    pub verdict: Verdict,
    pub checks: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub wall_time_ms: f64,
}

/// Exit code, report and the text written to standard output.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: Option<Report>,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    tol: Tolerance,
    seed: u64,
    out: Option<PathBuf>,
    inputs: Vec<InputHash>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Result<String> {
        let bytes = std::fs::read(path).map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        if bytes.len() > io::MAX_INPUT_BYTES {
            return Err(Error::Invalid(format!("{} exceeds the {}-byte limit", path.display(), io::MAX_INPUT_BYTES)));
        }
        self.inputs.push(InputHash { path: path.display().to_string(), sha256: hex(&Sha256::digest(&bytes)) });
        String::from_utf8(bytes).map_err(|_| Error::Parse(format!("{} is not UTF-8", path.display())))
    }

    fn write(&self, path: &Path, text: &str) -> Result<()> {
        std::fs::write(path, text).map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn pass_or_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

enum Input {
    Factor(Box<FactorSystem>),
    Dynamical(Box<DynamicalSystem>),
}

/// Factor-system files carry `"H"`; everything else is read as a dynamical system.
fn load_any(ctx: &mut Ctx, path: &Path) -> Result<Input> {
    let text = ctx.read(path)?;
    let probe: Value = serde_json::from_str(&text)?;
    if probe.get("H").is_some() {
        let (fs, _) = io::decode_factor_system(&text)?;
        Ok(Input::Factor(Box::new(fs)))
    } else {
        let (ds, _) = io::decode_dynamical_system(&text, &ctx.tol)?;
        Ok(Input::Dynamical(Box::new(ds)))
    }
}

fn load_factor(ctx: &mut Ctx, path: &Path) -> Result<(FactorSystem, GroupSpec)> {
    let text = ctx.read(path)?;
    let (fs, doc) = io::decode_factor_system(&text)?;
    Ok((fs, doc.group))
}

fn invariants(fs: &FactorSystem, tol: &Tolerance) -> Value {
    let alg = assemble_algebra(fs, tol);
    json!({ "dim": alg.dim, "center_dim": alg.report.center_dim, "algebra_checks_pass": alg.report.pass })
}

fn ds_freeness(ds: &DynamicalSystem, tol: &Tolerance) -> (Value, bool, bool) {
    let ell = ds.ellwood(tol);
    let m = ds.m_surjective(tol);
    let (a, b) = (ell.free, m.free);
    (json!({ "ellwood": ell, "m_surjective": m }), a, b)
}

fn execute(cmd: &Command, ctx: &mut Ctx) -> Result<(Verdict, Value)> {
    let tol = ctx.tol;
    match cmd {
        Command::Validate { file } => match load_any(ctx, file)? {
            Input::Factor(fs) => {
                let axioms = fs.validate(&tol);
                let functor = verify_unitary_tensor_functor(&fs, &tol);
                let ok = axioms.pass && functor.pass;
                Ok((pass_or_fail(ok), json!({ "kind": "factor_system", "axioms": axioms, "functor": functor, "valid": ok })))
            }
            Input::Dynamical(ds) => {
                let rep = ds.verify(&tol);
                Ok((pass_or_fail(rep.pass), json!({ "kind": "dynamical_system", "dynamical_system": rep, "valid": rep.pass })))
            }
        },
        Command::Reconstruct { file } => {
            let (fs, group) = load_factor(ctx, file)?;
            let functor = verify_unitary_tensor_functor(&fs, &tol);
            let alg = assemble_algebra(&fs, &tol);
            let ok = functor.pass && alg.report.pass;
            if ok {
                if let Some(out) = &ctx.out {
                    let doc = AlgebraJson::from_algebra(&alg, group, &tol)?;
                    ctx.write(out, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
                }
            }
            let checks = json!({
                "dim": alg.dim,
                "center_dim": alg.report.center_dim,
                "summands": alg.summands,
                "functor": functor,
                "algebra": alg.report,
            });
            Ok((pass_or_fail(ok), checks))
        }
        Command::Extract { file } => {
            let text = ctx.read(file)?;
            let (ds, doc) = io::decode_dynamical_system(&text, &tol)?;
            let rep = ds.verify(&tol);
            if !rep.pass {
                return Ok((Verdict::Fail, json!({ "dynamical_system": rep })));
            }
            let ex = match ds.factor_system_of(&tol) {
                Ok(ex) => ex,
                Err(e @ Error::NotFree { .. }) => return Ok((Verdict::Fail, json!({ "dynamical_system": rep, "free": false, "reason": e.to_string() }))),
                Err(e) => return Err(e),
            };
            let axioms = ex.system.validate(&tol);
            if let Some(out) = &ctx.out {
                let fj = FactorSystemJson::from_system(&ex.system, doc.group);
                ctx.write(out, &(serde_json::to_string_pretty(&fj)? + "\n"))?;
            }
            let h: serde_json::Map<String, Value> = (0..ex.system.catalog.len()).map(|i| (ex.system.catalog.label(i).to_string(), json!(ex.system.h[i]))).collect();
            let checks = json!({
                "dynamical_system": rep,
                "free": true,
                "base": ex.system.base,
                "H": h,
                "axioms": axioms,
            });
            Ok((pass_or_fail(axioms.pass), checks))
        }
        Command::CheckFree { file } => match load_any(ctx, file)? {
            Input::Dynamical(ds) => {
                let (checks, a, b) = ds_freeness(&ds, &tol);
                Ok((pass_or_fail(a && b), json!({ "kind": "dynamical_system", "checks": checks, "free": a && b, "agree": a == b })))
            }
            Input::Factor(fs) => {
                let m = check_free_m_surjective(&fs, &tol);
                let alg = assemble_algebra(&fs, &tol);
                let ell = if alg.report.pass {
                    let ds = DynamicalSystem::from_algebra(&alg, fs.catalog.clone(), &tol)?;
                    Some(ds.ellwood(&tol))
                } else {
                    None
                };
                let ell_free = ell.as_ref().is_some_and(|e| e.free);
                let free = m.free && ell_free;
                Ok((pass_or_fail(free), json!({ "kind": "factor_system", "m_surjective": m, "ellwood": ell, "free": free, "agree": m.free == ell_free })))
            }
        },
        Command::CheckCleft { file } => {
            let (fs, _) = load_factor(ctx, file)?;
            let rep = fs.is_cleft(&tol);
            Ok((pass_or_fail(rep.cleft), to_value(&rep)))
        }
        Command::Conjugate { first, second, budget } => {
            let (a, _) = load_factor(ctx, first)?;
            let (b, _) = load_factor(ctx, second)?;
            let (ia, ib) = (invariants(&a, &tol), invariants(&b, &tol));
            let differ = ia["dim"] != ib["dim"] || ia["center_dim"] != ib["center_dim"];
            let evidence = json!({ "first": ia, "second": ib, "invariants_differ": differ });
            if differ {
                return Ok((Verdict::Undecided, json!({ "conjugate": Value::Null, "budget": budget, "attempts": 0, "evidence": evidence })));
            }
            match find_conjugacy(&a, &b, &tol, ctx.seed, *budget)? {
                ConjugacyOutcome::Found { residuals, attempts, .. } => {
                    Ok((Verdict::Pass, json!({ "conjugate": true, "residuals": residuals, "attempts": attempts })))
                }
                ConjugacyOutcome::Exhausted { best, attempts } => {
                    let checks = json!({
                        "conjugate": Value::Null,
                        "budget": budget,
                        "attempts": attempts,
                        "best_residuals": best,
                        "evidence": evidence,
                    });
                    Ok((Verdict::Undecided, checks))
                }
            }
        }
        Command::FusionHoms { file, starts } => {
            let text = ctx.read(file)?;
            let fr = io::decode_fusion_ring(&text)?;
            let search = positive_ring_homs(&fr, 1e-9, ctx.seed, *starts)?;
            let dims = fr.dims_f64();
            let unique = search.homs.len() == 1
                && search.homs[0].values.iter().zip(&dims).all(|(v, d)| (v - d).abs() <= 1e-6)
                && search.homs[0].certificate.forces_dims(1e-6);
            Ok((pass_or_fail(unique), json!({ "labels": fr.labels, "dims": fr.dims, "search": search, "unique_dimension_function": unique })))
        }
        Command::Catalog { group, algebra } => {
            let Some(g) = group else {
                let names: Vec<String> = GroupTable::small_group_names().iter().flat_map(|n| [format!("dual:{n}"), format!("fun:{n}")]).collect();
                return Ok((Verdict::Pass, json!({ "catalogs": names })));
            };
            let spec = if Path::new(g).is_file() {
                let text = ctx.read(Path::new(g))?;
                match serde_json::from_str::<GroupSpec>(&text) {
                    Ok(spec) => spec,
                    Err(_) => {
                        let t = io::decode_group_table(&text)?;
                        GroupSpec::Inline { algebra: algebra.clone(), order: t.order, table: t.table }
                    }
                }
            } else {
                GroupSpec::Ref(g.clone())
            };
            let cat = spec.build()?;
            let axioms = cat.group.verify();
            let fusion = cat.fusion_residual();
            let conj = cat.conjugation_residual();
            let ok = axioms.passes(&tol) && fusion <= tol.atol && conj <= tol.atol;
            if let Some(out) = &ctx.out {
                ctx.write(out, &(serde_json::to_string_pretty(&CatalogJson::from_catalog(&cat, spec))? + "\n"))?;
            }
            let irreps: Vec<Value> = cat.irreps.iter().map(|p| json!({ "label": p.label, "dim": p.dim, "conjugate": cat.label(p.conjugate) })).collect();
            Ok((pass_or_fail(ok), json!({ "name": cat.name, "dim": cat.group.dim, "irreps": irreps, "axioms": axioms, "fusion_residual": fusion, "conjugation_residual": conj })))
        }
        Command::Fixtures => {
            let mut listed = Vec::new();
            for f in FIXTURES {
                let mut entry = json!({ "name": f.name, "file": f.file, "kind": f.kind, "tag": f.tag, "description": f.description });
                if let Some(dir) = &ctx.out {
                    std::fs::create_dir_all(dir).map_err(|e| Error::Invalid(format!("cannot create {}: {e}", dir.display())))?;
                    let text = fixtures::render(f)?;
                    ctx.write(&dir.join(f.file), &text)?;
                    entry["sha256"] = json!(hex(&Sha256::digest(text.as_bytes())));
                }
                listed.push(entry);
            }
            Ok((Verdict::Pass, json!({ "fixtures": listed })))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Validate { .. } => "validate",
        Command::Reconstruct { .. } => "reconstruct",
        Command::Extract { .. } => "extract",
        Command::CheckFree { .. } => "check-free",
        Command::CheckCleft { .. } => "check-cleft",
        Command::Conjugate { .. } => "conjugate",
        Command::FusionHoms { .. } => "fusion-homs",
        Command::Catalog { .. } => "catalog",
        Command::Fixtures => "fixtures",
    }
}

/// Commands whose `--out` is an artifact rather than the report.
fn writes_artifact(cmd: &Command) -> bool {
    matches!(cmd, Command::Reconstruct { .. } | Command::Extract { .. } | Command::Catalog { .. } | Command::Fixtures)
}

fn render_text(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                render_text(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                render_text(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

pub fn render(report: &Report, format: Format) -> String {
    let value = to_value(report);
    match format {
        Format::Json => serde_json::to_string_pretty(&value).unwrap_or_default() + "\n",
        Format::Text => {
            let mut s = String::new();
            render_text("", &value["checks"], &mut s);
            s.push_str(&format!("verdict: {}\n", value["verdict"].as_str().unwrap_or("")));
            if let Some(e) = &report.error {
                s.push_str(&format!("error: {e}\n"));
            }
            s
        }
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_STRUCTURAL } else { EXIT_PASS };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, report: None, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, report: None, stdout: text, stderr: String::new() }
            };
        }
    };
    let tol = match cli.tol.map_or(Ok(Tolerance::default()), Tolerance::uniform) {
        Ok(t) => t,
        Err(e) => return Outcome { code: EXIT_STRUCTURAL, report: None, stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let start = Instant::now();
    let mut ctx = Ctx { tol, seed: cli.seed, out: cli.out.clone(), inputs: Vec::new() };
    let (verdict, checks, error) = match execute(&cli.command, &mut ctx) {
        Ok((v, c)) => (v, c, None),
        Err(e) => {
            let v = if e.is_structural() { Verdict::Error } else { Verdict::Fail };
            (v, Value::Null, Some(e.to_string()))
        }
    };
    let report = Report {
        command: command_name(&cli.command).into(),
        inputs: ctx.inputs,
        tolerance: tol,
        seed: cli.seed,
        verdict,
        checks,
        error,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let mut stderr = String::new();
    if let (Some(out), false) = (&cli.out, writes_artifact(&cli.command)) {
        if let Err(e) = std::fs::write(out, render(&report, Format::Json)) {
            stderr = format!("error: cannot write {}: {e}\n", out.display());
        }
    }
    let code = if stderr.is_empty() { verdict.exit_code() } else { EXIT_STRUCTURAL };
    Outcome { code, stdout: render(&report, cli.format), report: Some(report), stderr }
}
