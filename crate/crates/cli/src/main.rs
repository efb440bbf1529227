//! `distnav`: command-line front end for the distributional navigation
//! toolkit.
//!
//! Every subcommand writes its artifact plus a `<stem>.manifest.json`
//! recording the flags, the seed (when one is involved), and the crate
//! versions, so identical invocations produce byte-identical outputs.
//! Randomized commands require an explicit `--seed`. Outputs land in
//! `--out-dir`, else `$DISTNAV_OUT_DIR`, else the working directory.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use distnav_core::bounds::bounds_table;
use distnav_core::coincidence::{
    coincidence_set, search_coincidence_free, section_continuity, section_from_function,
    CertificateStatus, FreeSphereComplex, PLFunction, QuotientMesh,
};
use distnav_core::geometry::{LensAction, SpherePoint};
use distnav_core::groups::{
    centralizer_dichotomy_violations, frobenius_injective, property_n_check, FiniteGroup,
};
use distnav_core::planner::{lens_navigation, verify_planner, Parity, VerifierConfig};
use distnav_core::simplicial::{homology_summary, measure_skeleton, SimplicialComplex};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "distnav", version, about = "Distributional navigation toolkit")]
struct Cli {
    /// Directory receiving outputs and manifests.
    #[arg(long, global = true, env = "DISTNAV_OUT_DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the multipath between two sphere points and its evaluations.
    Plan(PlanArgs),
    /// Run the randomized planner invariants and write the report.
    VerifyPlanner(VerifyArgs),
    /// Analyze a finite group given by its multiplication table.
    Group(GroupArgs),
    /// Simplicial complex utilities.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Coincidence search, certification, and sections on sphere joins.
    #[command(subcommand, name = "borsuk-ulam")]
    BorsukUlam(BorsukUlamCommand),
    /// Transcribed bound tables for lens spaces.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct PlanArgs {
    /// Lens parameters `p,n`: order and complex dimension.
    #[arg(long)]
    lens: String,
    /// Start point, `2n` comma-separated coordinates on the unit sphere.
    #[arg(long)]
    from: String,
    /// End point, same format.
    #[arg(long)]
    to: String,
    /// Evaluation grid resolution over `t` in `[0, 1]`.
    #[arg(long, default_value_t = 21)]
    t_samples: usize,
    #[arg(long, default_value = "traj.json")]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    lens: String,
    #[arg(long)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    /// Angular margin for the continuity statistics.
    #[arg(long, default_value_t = 0.1)]
    margin: f64,
    #[arg(long, default_value_t = 21)]
    t_samples: usize,
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
}

#[derive(Args)]
struct GroupArgs {
    /// Plain-text multiplication table: first the order, then its rows.
    #[arg(long, conflicts_with = "builtin")]
    table: Option<PathBuf>,
    /// Built-in group: `cyclic:N`, `product:N,M`, or `symmetric:3`.
    #[arg(long)]
    builtin: Option<String>,
    /// Check injectivity of the power maps with these exponents.
    #[arg(long, value_delimiter = ',')]
    frobenius: Vec<u64>,
    /// Search for power-closure violations up to this exponent.
    #[arg(long)]
    property_n: Option<u64>,
    /// Report centralizer dichotomy violations.
    #[arg(long)]
    dichotomy: bool,
    #[arg(long, default_value = "group.json")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ComplexCommand {
    /// Integral homology of a complex given as JSON.
    Homology {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "homology.json")]
        out: PathBuf,
    },
    /// The complex of measures on `m` points with support at most `n + 1`.
    Skeleton {
        #[arg(long)]
        points: usize,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value = "skeleton.json")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum BorsukUlamCommand {
    /// Anneal towards a coincidence-free function and certify exactly.
    Search {
        /// Sphere parameters `k,p,N`: join factors, order, steps.
        #[arg(long)]
        sphere: String,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 300)]
        iterations: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "result.json")]
        out: PathBuf,
    },
    /// Decide exactly whether a vertex function has empty coincidence set.
    Certify {
        #[arg(long)]
        sphere: String,
        /// JSON file holding a flat array of vertex values.
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value = "certificate.json")]
        out: PathBuf,
    },
    /// Build the measure-valued section induced by a function.
    Section {
        #[arg(long)]
        sphere: String,
        #[arg(long)]
        from_f: PathBuf,
        #[arg(long, default_value_t = 1)]
        mesh_level: u32,
        #[arg(long, default_value = "section.json")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    p: u64,
    /// Sphere dimension of the lens space (odd).
    #[arg(long)]
    m: u64,
    /// Product power for the counterexample rows.
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value = "bounds.csv")]
    out: PathBuf,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    let out_dir = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Plan(args) => cmd_plan(&out_dir, args),
        Command::VerifyPlanner(args) => cmd_verify(&out_dir, args),
        Command::Group(args) => cmd_group(&out_dir, args),
        Command::Complex(command) => cmd_complex(&out_dir, command),
        Command::BorsukUlam(command) => cmd_borsuk_ulam(&out_dir, command),
        Command::Bounds(args) => cmd_bounds(&out_dir, args),
    }
}

/// A manifest written before the artifact (status partial) and rewritten
/// after it (status complete), so interrupted runs are visible.
struct Manifest {
    path: PathBuf,
    command: String,
    flags: BTreeMap<String, String>,
    seed: Option<u64>,
    outputs: Vec<String>,
}

impl Manifest {
    fn start(
        out_dir: &Path,
        out: &Path,
        command: &str,
        flags: BTreeMap<String, String>,
        seed: Option<u64>,
    ) -> Result<(Manifest, PathBuf)> {
        let artifact = if out.is_absolute() {
            out.to_path_buf()
        } else {
            out_dir.join(out)
        };
        if let Some(parent) = artifact.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
        }
        let stem = artifact
            .file_stem()
            .ok_or_else(|| anyhow!("output path needs a file name"))?
            .to_string_lossy()
            .into_owned();
        let path = artifact.with_file_name(format!("{stem}.manifest.json"));
        let outputs = vec![artifact
            .file_name()
            .expect("artifact has a name")
            .to_string_lossy()
            .into_owned()];
        let manifest = Manifest {
            path,
            command: command.to_string(),
            flags,
            seed,
            outputs,
        };
        manifest.write("partial")?;
        Ok((manifest, artifact))
    }

    fn write(&self, status: &str) -> Result<()> {
        let value = json!({
            "command": self.command,
            "flags": self.flags,
            "seed": self.seed,
            "versions": {
                "distnav-cli": env!("CARGO_PKG_VERSION"),
                "distnav-core": distnav_core::VERSION,
            },
            "outputs": self.outputs,
            "status": status,
        });
        write_text(&self.path, &pretty(&value))
    }

    fn complete(&self) -> Result<()> {
        self.write("complete")
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_json(path: &Path) -> Result<serde_json::Value> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_pair(spec: &str) -> Result<(u32, usize)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 2 {
        bail!("expected `p,n`, got `{spec}`");
    }
    Ok((parts[0].trim().parse()?, parts[1].trim().parse()?))
}

fn parse_triple(spec: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        bail!("expected `k,p,N`, got `{spec}`");
    }
    Ok((
        parts[0].trim().parse()?,
        parts[1].trim().parse()?,
        parts[2].trim().parse()?,
    ))
}

fn parse_coords(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|c| c.trim().parse::<f64>().map_err(Into::into))
        .collect()
}

fn parse_function(path: &Path, expected: usize) -> Result<PLFunction> {
    let value = read_json(path)?;
    let array = value
        .as_array()
        .ok_or_else(|| anyhow!("{} must hold a flat array", path.display()))?;
    let values: Vec<f64> = array
        .iter()
        .map(|v| {
            v.as_f64()
                .ok_or_else(|| anyhow!("non-numeric vertex value in {}", path.display()))
        })
        .collect::<Result<_>>()?;
    if values.len() != expected {
        bail!(
            "{} has {} values, the sphere has {} vertices",
            path.display(),
            values.len(),
            expected
        );
    }
    Ok(PLFunction(values))
}

fn build_sphere_arg(spec: &str) -> Result<FreeSphereComplex> {
    let (k, p, steps) = parse_triple(spec)?;
    FreeSphereComplex::build_sphere(k, p, steps)
        .map_err(|e| anyhow!("invalid sphere `{spec}`: {e}"))
}

fn cmd_plan(out_dir: &Path, args: PlanArgs) -> Result<ExitCode> {
    let (p, n) = parse_pair(&args.lens)?;
    let action = LensAction::new(p, n)?;
    let from = SpherePoint::new(parse_coords(&args.from)?)?;
    let to = SpherePoint::new(parse_coords(&args.to)?)?;
    if args.t_samples < 2 {
        bail!("--t-samples must be at least 2");
    }
    let flags = BTreeMap::from([
        ("lens".to_string(), args.lens.clone()),
        ("from".to_string(), args.from.clone()),
        ("to".to_string(), args.to.clone()),
        ("t-samples".to_string(), args.t_samples.to_string()),
    ]);
    let (manifest, artifact) = Manifest::start(out_dir, &args.out, "plan", flags, None)?;
    let multipath = lens_navigation(&action, &from, &to)?;
    let entries: Vec<serde_json::Value> = multipath
        .entries()
        .iter()
        .map(|entry| {
            json!({
                "weight": entry.weight,
                "angle": entry.path.angle(),
                "u": entry.path.u(),
                "v": entry.path.v(),
            })
        })
        .collect();
    let measures: Vec<serde_json::Value> = (0..args.t_samples)
        .map(|i| {
            let t = i as f64 / (args.t_samples - 1) as f64;
            json!({"t": t, "measure": multipath.eval_lens(t).to_json()})
        })
        .collect();
    let value = json!({
        "lens": {"p": p, "n": n},
        "parity": match multipath.parity() {
            Parity::OddSphere => "odd-sphere",
            Parity::EvenLine => "even-line",
        },
        "from": from.coords(),
        "to": to.coords(),
        "support_limit": multipath.support_limit(),
        "entries": entries,
        "measures": measures,
    });
    write_text(&artifact, &pretty(&value))?;
    manifest.complete()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(out_dir: &Path, args: VerifyArgs) -> Result<ExitCode> {
    let (p, n) = parse_pair(&args.lens)?;
    let action = LensAction::new(p, n)?;
    let mut config = VerifierConfig::new(args.samples, args.seed);
    config.margin = args.margin;
    config.t_samples = args.t_samples;
    let flags = BTreeMap::from([
        ("lens".to_string(), args.lens.clone()),
        ("samples".to_string(), args.samples.to_string()),
        ("seed".to_string(), args.seed.to_string()),
        ("margin".to_string(), args.margin.to_string()),
        ("t-samples".to_string(), args.t_samples.to_string()),
    ]);
    let (manifest, artifact) =
        Manifest::start(out_dir, &args.out, "verify-planner", flags, Some(args.seed))?;
    let report = verify_planner(&action, &config);
    let value = serde_json::to_value(&report)?;
    write_text(&artifact, &pretty(&value))?;
    manifest.complete()?;
    if report.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("planner invariants violated: {:?}", report.failures);
        Ok(ExitCode::FAILURE)
    }
}

fn load_group(args: &GroupArgs) -> Result<FiniteGroup> {
    if let Some(path) = &args.table {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        return FiniteGroup::from_text(&text).map_err(Into::into);
    }
    let spec = args
        .builtin
        .as_deref()
        .ok_or_else(|| anyhow!("pass --table FILE or --builtin SPEC"))?;
    let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
    match name {
        "cyclic" => Ok(FiniteGroup::cyclic(params.parse()?)),
        "product" => {
            let mut orders = params.split(',');
            let a: usize = orders
                .next()
                .ok_or_else(|| anyhow!("product needs two orders"))?
                .parse()?;
            let b: usize = orders
                .next()
                .ok_or_else(|| anyhow!("product needs two orders"))?
                .parse()?;
            Ok(FiniteGroup::cyclic(a).product(&FiniteGroup::cyclic(b)))
        }
        "symmetric" if params == "3" => Ok(FiniteGroup::symmetric3()),
        _ => bail!("unknown builtin `{spec}`"),
    }
}

fn cmd_group(out_dir: &Path, args: GroupArgs) -> Result<ExitCode> {
    let group = load_group(&args)?;
    let mut flags = BTreeMap::new();
    if let Some(path) = &args.table {
        flags.insert("table".to_string(), path.display().to_string());
    }
    if let Some(builtin) = &args.builtin {
        flags.insert("builtin".to_string(), builtin.clone());
    }
    if !args.frobenius.is_empty() {
        flags.insert(
            "frobenius".to_string(),
            args.frobenius
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        );
    }
    if let Some(max) = args.property_n {
        flags.insert("property-n".to_string(), max.to_string());
    }
    if args.dichotomy {
        flags.insert("dichotomy".to_string(), "true".to_string());
    }
    let (manifest, artifact) = Manifest::start(out_dir, &args.out, "group", flags, None)?;
    let labels: Vec<String> = group
        .elements()
        .map(|x| group.label(x).to_string())
        .collect();
    let frobenius: Vec<serde_json::Value> = args
        .frobenius
        .iter()
        .map(|&k| serde_json::to_value(frobenius_injective(&group, k)).map_err(Into::into))
        .collect::<Result<_>>()?;
    let property_n = args
        .property_n
        .map(|max| -> Result<serde_json::Value> {
            let violations = property_n_check(&group, max);
            Ok(json!({
                "max_exponent": max,
                "violations": serde_json::to_value(&violations)?,
            }))
        })
        .transpose()?;
    let dichotomy = args.dichotomy.then(|| {
        let violations = centralizer_dichotomy_violations(&group);
        json!({"count": violations.len(), "violations": violations})
    });
    let value = json!({
        "order": group.order(),
        "abelian": group.is_abelian(),
        "labels": labels,
        "frobenius": frobenius,
        "property_n": property_n,
        "dichotomy": dichotomy,
    });
    write_text(&artifact, &pretty(&value))?;
    manifest.complete()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_complex(out_dir: &Path, command: ComplexCommand) -> Result<ExitCode> {
    match command {
        ComplexCommand::Homology { input, out } => {
            let complex = SimplicialComplex::from_json(&read_json(&input)?)?;
            let flags = BTreeMap::from([("in".to_string(), input.display().to_string())]);
            let (manifest, artifact) =
                Manifest::start(out_dir, &out, "complex homology", flags, None)?;
            let summary = homology_summary(&complex);
            write_text(&artifact, &pretty(&serde_json::to_value(&summary)?))?;
            manifest.complete()?;
            Ok(ExitCode::SUCCESS)
        }
        ComplexCommand::Skeleton { points, n, out } => {
            let complex = measure_skeleton(points, n)?;
            let flags = BTreeMap::from([
                ("points".to_string(), points.to_string()),
                ("n".to_string(), n.to_string()),
            ]);
            let (manifest, artifact) =
                Manifest::start(out_dir, &out, "complex skeleton", flags, None)?;
            let mut value = complex.to_json();
            value["f_vector"] = json!(complex.f_vector());
            write_text(&artifact, &pretty(&value))?;
            manifest.complete()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Exit code used when a search or certification conclusively reports that
/// no coincidence-free function exists (or the given one is not).
const EXIT_NO_CERTIFICATE: u8 = 2;

fn cmd_borsuk_ulam(out_dir: &Path, command: BorsukUlamCommand) -> Result<ExitCode> {
    match command {
        BorsukUlamCommand::Search {
            sphere,
            restarts,
            iterations,
            seed,
            out,
        } => {
            let x = build_sphere_arg(&sphere)?;
            let flags = BTreeMap::from([
                ("sphere".to_string(), sphere.clone()),
                ("restarts".to_string(), restarts.to_string()),
                ("iterations".to_string(), iterations.to_string()),
                ("seed".to_string(), seed.to_string()),
            ]);
            let (manifest, artifact) =
                Manifest::start(out_dir, &out, "borsuk-ulam search", flags, Some(seed))?;
            let report = search_coincidence_free(&x, restarts, iterations, seed);
            let found = report.found.is_some();
            let value = json!({
                "sphere": {"k": x.join_factors(), "p": x.order(), "steps": x.steps()},
                "restarts": report.restarts,
                "iterations": report.iterations,
                "seed": seed,
                "found": found,
                "best_spread": report.best_spread,
                "function": report.found.as_ref().unwrap_or(&report.best).0,
            });
            write_text(&artifact, &pretty(&value))?;
            manifest.complete()?;
            Ok(if found {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NO_CERTIFICATE)
            })
        }
        BorsukUlamCommand::Certify { sphere, f, out } => {
            let x = build_sphere_arg(&sphere)?;
            let function = parse_function(&f, x.complex().vertex_count())?;
            let flags = BTreeMap::from([
                ("sphere".to_string(), sphere.clone()),
                ("f".to_string(), f.display().to_string()),
            ]);
            let (manifest, artifact) =
                Manifest::start(out_dir, &out, "borsuk-ulam certify", flags, None)?;
            let certificate = coincidence_set(&x, &function)?;
            let witness = match &certificate.status {
                CertificateStatus::Empty => serde_json::Value::Null,
                CertificateStatus::Witness {
                    simplex,
                    barycentric,
                } => json!({"simplex": simplex, "barycentric": barycentric}),
            };
            let value = json!({
                "sphere": {"k": x.join_factors(), "p": x.order(), "steps": x.steps()},
                "empty": certificate.is_empty(),
                "simplices_checked": certificate.simplices_checked,
                "feasible_count": certificate.feasible_simplices.len(),
                "witness": witness,
            });
            let empty = certificate.is_empty();
            write_text(&artifact, &pretty(&value))?;
            manifest.complete()?;
            Ok(if empty {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_NO_CERTIFICATE)
            })
        }
        BorsukUlamCommand::Section {
            sphere,
            from_f,
            mesh_level,
            out,
        } => {
            let x = build_sphere_arg(&sphere)?;
            let function = parse_function(&from_f, x.complex().vertex_count())?;
            let flags = BTreeMap::from([
                ("sphere".to_string(), sphere.clone()),
                ("from-f".to_string(), from_f.display().to_string()),
                ("mesh-level".to_string(), mesh_level.to_string()),
            ]);
            let (manifest, artifact) =
                Manifest::start(out_dir, &out, "borsuk-ulam section", flags, None)?;
            let mesh = QuotientMesh::new(&x, mesh_level);
            let section = section_from_function(&x, &function, &mesh)?;
            let continuity = section_continuity(&x, &section, &mesh);
            let entries: Vec<serde_json::Value> = section
                .entries
                .iter()
                .map(|entry| {
                    json!({
                        "mesh_index": entry.mesh_index,
                        "fiber_values": entry.fiber_values,
                        "splus": entry.splus,
                        "lambdas": entry.lambdas,
                        "measure": entry.measure.to_json(),
                    })
                })
                .collect();
            let value = json!({
                "sphere": {"k": x.join_factors(), "p": x.order(), "steps": x.steps()},
                "mesh_level": mesh_level,
                "mesh_points": mesh.len(),
                "support_bound": section.support_bound,
                "continuity": {
                    "threshold": continuity.threshold,
                    "pairs": continuity.pairs,
                    "max_ratio": continuity.max_ratio,
                },
                "entries": entries,
            });
            write_text(&artifact, &pretty(&value))?;
            manifest.complete()?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_bounds(out_dir: &Path, args: BoundsArgs) -> Result<ExitCode> {
    let rows = bounds_table(args.p, args.m, args.k)?;
    let flags = BTreeMap::from([
        ("p".to_string(), args.p.to_string()),
        ("m".to_string(), args.m.to_string()),
        ("k".to_string(), args.k.to_string()),
    ]);
    let (manifest, artifact) = Manifest::start(out_dir, &args.out, "bounds", flags, None)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["space", "invariant", "lower", "upper", "status", "citation"])?;
    for row in &rows {
        let cell = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
        writer.write_record([
            row.space.clone(),
            row.invariant.to_string(),
            cell(row.lower),
            cell(row.upper),
            row.status.to_string(),
            row.citation.clone(),
        ])?;
    }
    let bytes = writer.into_inner()?;
    write_text(&artifact, std::str::from_utf8(&bytes)?)?;
    manifest.complete()?;
    Ok(ExitCode::SUCCESS)
}
