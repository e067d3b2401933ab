mod cache;
mod config;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qcharlab::braid::{apply_word, apply_word_inverse, BraidWord};
use qcharlab::extremal::verify_qchar;
use qcharlab::linalg::{Fp, Scalar};
use qcharlab::lweights::{factor_to_a, LatticeVector, LaurentMonomial};
use qcharlab::qchar::{fm_qchar, FmOptions, QChar};
use qcharlab::quiver::{
    chain_reflect, exhaustive_search, reflect, rep_to_json, stability_check, validate_relations, AnyRep,
    GradedQuiverRep, ReflectOptions, SearchOptions, StabilityOptions,
};
use qcharlab::{with_any_rep, CartanDatum, Error, WeightVector, CONVENTIONS};

use cache::{cache_key, Cache};
use config::{GlobalFlags, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "qcharlab", version, about = "q-characters, braid group actions and graded quiver reflections")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Key-value configuration file (`key = value` per line).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for cached q-characters.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    cap_monomials: Option<usize>,
    #[arg(long, global = true)]
    cap_height: Option<usize>,
    /// Bound on the order of the Weyl group.
    #[arg(long, global = true)]
    cap_w: Option<usize>,
    /// Bound on free matrix entries in exhaustive search.
    #[arg(long, global = true)]
    cap_entries: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct Target {
    /// Cartan type label, e.g. `B2`.
    #[arg(long = "type")]
    kind: Option<String>,
    /// One-based node.
    #[arg(long)]
    node: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute the q-character of a fundamental module.
    Qchar {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check every monomial image under every Weyl group element.
    ExtremalCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Cone vertices, or the images of the highest monomial under one word.
    BraidOrbit {
        #[command(flatten)]
        target: Target,
        /// One-based comma-separated word, e.g. `1,2,1`.
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate the relations of a point and decide stability when possible.
    QuiverCheck {
        point: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
    },
    /// Apply the reflection functor at a node or along a word.
    QuiverReflect {
        point: PathBuf,
        #[arg(long)]
        node: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        word: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<String>,
        /// Accept the input as stable without deciding it.
        #[arg(long)]
        trusted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate all points with given dimensions over a prime field.
    QuiverSearch {
        #[arg(long = "type")]
        kind: Option<String>,
        /// Dimension vector of V, e.g. `1@(1,1),1@(2,2)`.
        #[arg(long)]
        v: String,
        /// Dimension vector of W, e.g. `1@(1,0)`.
        #[arg(long)]
        w: String,
        #[arg(long)]
        field: Option<String>,
        /// Stability parameter; repeat for several. Defaults to the negative chamber.
        #[arg(long, allow_hyphen_values = true)]
        theta: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures grouped by exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Resource(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Resource(_) => 2,
            Failure::Violation(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Resource(m) | Failure::Violation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::CapExceeded { .. } => Failure::Resource(msg),
            Error::UnsupportedType(_)
            | Error::InvalidNode { .. }
            | Error::Parse(_)
            | Error::ShapeMismatch(_)
            | Error::NonGenericTheta
            | Error::ThetaNotNegative { .. }
            | Error::FieldNotFinite => Failure::Usage(msg),
            Error::NotFactorable
            | Error::FmFailure(_)
            | Error::NotStable
            | Error::NotSurjective { .. }
            | Error::RelationViolated(_)
            | Error::DimensionMismatch { .. }
            | Error::PostconditionFailed(_) => Failure::Violation(msg),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn usage(msg: impl Display) -> Failure {
    Failure::Usage(msg.to_string())
}

fn datum_of(cfg: &RunConfig, kind: &Option<String>) -> Outcome<CartanDatum> {
    let label = cfg.text(kind, "type").ok_or_else(|| usage("--type is required"))?;
    Ok(CartanDatum::from_label(&label)?)
}

fn node_of(cfg: &RunConfig, datum: &CartanDatum, node: Option<usize>) -> Outcome<Option<usize>> {
    let node = match node {
        Some(n) => Some(n),
        None => cfg
            .file
            .get("node")
            .map(|s| s.parse::<usize>().map_err(|_| usage("config `node` must be an integer")))
            .transpose()?,
    };
    match node {
        None => Ok(None),
        Some(0) => Err(usage("nodes are one-based")),
        Some(n) => {
            datum.check_node(n - 1)?;
            Ok(Some(n - 1))
        }
    }
}

fn required_node(cfg: &RunConfig, datum: &CartanDatum, node: Option<usize>) -> Outcome<usize> {
    node_of(cfg, datum, node)?.ok_or_else(|| usage("--node is required"))
}

fn write_json(path: &Path, value: &Value) -> Outcome {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialize");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::Resource(format!("{}: {e}", path.display())))
}

fn print_table(rows: &[(String, String)]) {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        println!("{k:<width$}  {v}");
    }
}

fn row(k: &str, v: impl Display) -> (String, String) {
    (k.to_string(), v.to_string())
}

/// The q-character, through the cache when one is configured.
fn load_qchar(cfg: &RunConfig, datum: &CartanDatum, node: usize) -> Outcome<QChar> {
    let label = datum.label();
    let key = cache_key(&label, node);
    let cache = cfg.cache_dir.as_deref().map(Cache::new);
    if let Some(c) = &cache {
        if let Some(payload) = c.load(&key).map_err(Failure::Resource)? {
            let q = QChar::from_json(&payload)
                .map_err(|e| Failure::Resource(format!("cache integrity error: {e}")))?;
            if q.label != label || q.anchor != node {
                return Err(Failure::Resource("cache integrity error: entry for another module".into()));
            }
            return Ok(q);
        }
    }
    let opts = FmOptions {
        caps: cfg.fm_caps,
        ..FmOptions::default()
    };
    let q = fm_qchar(datum, node, opts)?;
    if let Some(c) = &cache {
        c.store(&key, &q.to_json()).map_err(Failure::Resource)?;
    }
    Ok(q)
}

fn cmd_qchar(cfg: &RunConfig, target: &Target, out: &Option<PathBuf>) -> Outcome {
    let datum = datum_of(cfg, &target.kind)?;
    let node = required_node(cfg, &datum, target.node)?;
    let q = load_qchar(cfg, &datum, node)?;
    print_table(&[
        row("type", datum.label()),
        row("node", node + 1),
        row("monomials", q.len()),
        row("max height", q.max_height()),
        row("sum of multiplicities", q.total_multiplicity()),
    ]);
    if let Some(path) = cfg.path(out, "out") {
        write_json(&path, &q.to_json())?;
    }
    Ok(())
}

fn cmd_extremal(cfg: &RunConfig, target: &Target, report: &Option<PathBuf>) -> Outcome {
    let datum = datum_of(cfg, &target.kind)?;
    let nodes: Vec<usize> = match node_of(cfg, &datum, target.node)? {
        Some(n) => vec![n],
        None => datum.nodes().collect(),
    };
    let elements = datum.weyl_elements(cfg.weyl_cap)?;
    let mut summaries = Vec::new();
    for node in nodes {
        let start = Instant::now();
        let q = load_qchar(cfg, &datum, node)?;
        summaries.push((verify_qchar(&datum, &q, &elements, 48), start.elapsed()));
    }
    let mut results = Vec::new();
    let mut violations = Vec::new();
    println!("{:<6} {:>5} {:>10} {:>6} {:>8} {:>11} {:>9}", "type", "node", "monomials", "|W|", "checks", "violations", "time");
    for (summary, elapsed) in summaries {
        let node = summary.node;
        println!(
            "{:<6} {:>5} {:>10} {:>6} {:>8} {:>11} {:>8.3}s",
            datum.label(),
            node + 1,
            summary.monomials,
            summary.weyl_order,
            summary.checks,
            summary.violations.len(),
            elapsed.as_secs_f64()
        );
        if summary.word_mismatches > 0 {
            violations.push(format!(
                "node {}: {} elements act differently through two reduced words",
                node + 1,
                summary.word_mismatches
            ));
        }
        for v in &summary.violations {
            violations.push(format!(
                "node {}: v = {} under w = {} gives {} at {}",
                node + 1,
                v.v,
                BraidWord(v.word.clone()),
                v.value,
                v.site
            ));
        }
        results.push(summary.to_json());
    }
    if let Some(path) = cfg.path(report, "out") {
        write_json(&path, &json!({ "type": datum.label(), "conventions": CONVENTIONS, "results": results }))?;
    }
    if violations.is_empty() {
        Ok(())
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Err(Failure::Violation(format!("{} violations", violations.len())))
    }
}

fn factor_text(datum: &CartanDatum, node: usize, m: &LaurentMonomial) -> (String, Value) {
    match factor_to_a(datum, node, m) {
        Ok(x) => (x.v.to_string(), json!(x.v.to_triples())),
        Err(_) => ("(not a monomial of the module)".into(), Value::Null),
    }
}

fn cmd_braid_orbit(cfg: &RunConfig, target: &Target, word: &Option<String>, out: &Option<PathBuf>) -> Outcome {
    let datum = datum_of(cfg, &target.kind)?;
    let node = required_node(cfg, &datum, target.node)?;
    let psi = LaurentMonomial::y(node, 0, 1);
    let value = match cfg.text(word, "word") {
        Some(text) => {
            let w: BraidWord = text.parse()?;
            w.validate(&datum)?;
            let forward = apply_word(&datum, w.letters(), &psi);
            let backward = apply_word_inverse(&datum, w.letters(), &psi);
            let (fa, fj) = factor_text(&datum, node, &forward);
            let (ba, bj) = factor_text(&datum, node, &backward);
            print_table(&[
                row("word", &w),
                row("S_w(psi)", &forward),
                row("  as v", fa),
                row("S_w^-1(psi)", &backward),
                row("  as v", ba),
            ]);
            json!({
                "type": datum.label(),
                "node": node + 1,
                "conventions": CONVENTIONS,
                "word": w.letters().iter().map(|i| i + 1).collect::<Vec<_>>(),
                "image": forward.to_json(),
                "image_v": fj,
                "inverse_image": backward.to_json(),
                "inverse_image_v": bj,
            })
        }
        None => {
            let elements = datum.weyl_elements(cfg.weyl_cap)?;
            let mut vertices: Vec<LatticeVector> = Vec::new();
            let mut rows = Vec::new();
            println!("{:<24} vertex", "w");
            for e in &elements {
                let m = apply_word_inverse(&datum, &e.word, &psi);
                let x = factor_to_a(&datum, node, &m)?;
                println!("{:<24} {}", BraidWord(e.word.clone()).to_string(), x.v);
                rows.push(json!({
                    "word": e.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "v": x.v.to_triples(),
                }));
                if !vertices.contains(&x.v) {
                    vertices.push(x.v);
                }
            }
            println!("{} elements, {} distinct vertices", elements.len(), vertices.len());
            json!({
                "type": datum.label(),
                "node": node + 1,
                "conventions": CONVENTIONS,
                "vertices": rows,
                "distinct": vertices.len(),
            })
        }
    };
    if let Some(path) = cfg.path(out, "out") {
        write_json(&path, &value)?;
    }
    Ok(())
}

fn read_point(path: &Path) -> Outcome<(AnyRep, Option<WeightVector>)> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(AnyRep::from_json(&value)?)
}

fn theta_arg(cfg: &RunConfig, flag: &Option<String>, from_file: Option<WeightVector>) -> Outcome<Option<WeightVector>> {
    match cfg.text(flag, "theta") {
        Some(t) => Ok(Some(t.parse()?)),
        None => Ok(from_file),
    }
}

fn stability_opts(cfg: &RunConfig) -> StabilityOptions {
    StabilityOptions {
        max_total_dim: cfg.max_stability_dim,
        ..StabilityOptions::default()
    }
}

fn point_json<F: Scalar>(rep: &GradedQuiverRep<F>, theta: Option<&WeightVector>) -> Value {
    let mut v = rep_to_json(rep, theta);
    v["conventions"] = json!(CONVENTIONS);
    v
}

fn check_point<F: Scalar>(cfg: &RunConfig, rep: &GradedQuiverRep<F>, theta: Option<&WeightVector>) -> Outcome {
    let violations = validate_relations(rep);
    let mut rows = vec![
        row("field", F::field_name()),
        row("type", rep.datum().label()),
        row("v", rep.v()),
        row("w", rep.w()),
        row("relations", if violations.is_empty() { "ok".to_string() } else { format!("{} violated", violations.len()) }),
    ];
    if let Some(t) = theta {
        let verdict = match stability_check(rep, t, stability_opts(cfg)) {
            Ok(true) => "stable".to_string(),
            Ok(false) => "not stable".to_string(),
            Err(Error::FieldNotFinite) => "undecided over an infinite field".to_string(),
            Err(Error::CapExceeded { what, cap }) => format!("undecided ({what} exceeds cap {cap})"),
            Err(e) => return Err(e.into()),
        };
        rows.push(row("theta", t));
        rows.push(row("stability", verdict));
    }
    print_table(&rows);
    if violations.is_empty() {
        Ok(())
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Err(Failure::Violation(format!("{} relation violations", violations.len())))
    }
}

fn cmd_quiver_check(cfg: &RunConfig, point: &Path, theta: &Option<String>) -> Outcome {
    let (rep, from_file) = read_point(point)?;
    let theta = theta_arg(cfg, theta, from_file)?;
    with_any_rep!(&rep, r => check_point(cfg, r, theta.as_ref()))
}

struct ReflectRequest<'a> {
    word: Vec<usize>,
    theta: &'a WeightVector,
    opts: ReflectOptions,
    out: Option<PathBuf>,
}

fn reflect_point<F: Scalar>(rep: &GradedQuiverRep<F>, req: &ReflectRequest<'_>) -> Outcome {
    let result = if req.word.len() == 1 {
        reflect(rep, req.word[0], req.theta, req.opts)?
    } else {
        chain_reflect(rep, req.theta, &req.word, req.opts)?
    };
    print_table(&[
        row("field", F::field_name()),
        row("type", rep.datum().label()),
        row("word", BraidWord(req.word.clone())),
        row("theta", req.theta),
        row("v", rep.v()),
        row("reflected v", result.rep.v()),
        row("reflected theta", &result.theta),
        row("maps", result.rep.maps().count()),
    ]);
    if let Some(path) = &req.out {
        write_json(path, &point_json(&result.rep, Some(&result.theta)))?;
    }
    Ok(())
}

fn cmd_quiver_reflect(
    cfg: &RunConfig,
    point: &Path,
    node: Option<usize>,
    word: &Option<String>,
    theta: &Option<String>,
    trusted: bool,
    out: &Option<PathBuf>,
) -> Outcome {
    let (rep, from_file) = read_point(point)?;
    let datum = with_any_rep!(&rep, r => r.datum().clone());
    let theta = theta_arg(cfg, theta, from_file)?.ok_or_else(|| usage("--theta is required"))?;
    if theta.0.len() != datum.rank() {
        return Err(usage(format!("theta needs {} entries", datum.rank())));
    }
    let word = match (node, word) {
        (Some(_), Some(_)) => return Err(usage("give either --node or --word")),
        (Some(n), None) => {
            if n == 0 {
                return Err(usage("nodes are one-based"));
            }
            datum.check_node(n - 1)?;
            vec![n - 1]
        }
        (None, Some(w)) => {
            let w: BraidWord = w.parse()?;
            w.validate(&datum)?;
            w.0
        }
        (None, None) => match node_of(cfg, &datum, None)? {
            Some(n) => vec![n],
            None => return Err(usage("--node or --word is required")),
        },
    };
    let req = ReflectRequest {
        word,
        theta: &theta,
        opts: ReflectOptions {
            stability: stability_opts(cfg),
            trusted,
            ..ReflectOptions::default()
        },
        out: cfg.path(out, "out"),
    };
    with_any_rep!(&rep, r => reflect_point(r, &req))
}

fn search_in<F: Scalar>(
    cfg: &RunConfig,
    datum: &CartanDatum,
    v: &LatticeVector,
    w: &LatticeVector,
    thetas: &[WeightVector],
    out: Option<PathBuf>,
) -> Outcome {
    let opts = SearchOptions {
        max_entries: cfg.max_entries,
        stability: stability_opts(cfg),
    };
    let result = exhaustive_search::<F>(datum, v, w, thetas, opts)?;
    print_table(&[
        row("field", F::field_name()),
        row("type", datum.label()),
        row("v", v),
        row("w", w),
        row("tuples", result.tuples),
        row("points", result.points.len()),
    ]);
    for (k, t) in thetas.iter().enumerate() {
        let stable: Vec<usize> = result
            .points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.stable[k])
            .map(|(n, _)| n)
            .collect();
        println!("theta {t}: {} stable points {:?}", stable.len(), stable);
    }
    if let Some(path) = out {
        let points: Vec<Value> = result
            .points
            .iter()
            .map(|p| json!({ "point": rep_to_json(&p.rep, None), "stable": p.stable }))
            .collect();
        let thetas: Vec<Value> = thetas.iter().map(qcharlab::quiver::json::theta_to_json).collect();
        write_json(
            &path,
            &json!({
                "conventions": CONVENTIONS,
                "field": F::field_name(),
                "type": datum.label(),
                "v": v.to_triples(),
                "w": w.to_triples(),
                "thetas": thetas,
                "tuples": result.tuples,
                "points": points,
            }),
        )?;
    }
    Ok(())
}

fn cmd_quiver_search(
    cfg: &RunConfig,
    kind: &Option<String>,
    v: &str,
    w: &str,
    field: &Option<String>,
    theta: &[String],
    out: &Option<PathBuf>,
) -> Outcome {
    let datum = datum_of(cfg, kind)?;
    let v: LatticeVector = v.parse()?;
    let w: LatticeVector = w.parse()?;
    for site in v.iter().chain(w.iter()).map(|(s, _)| s) {
        datum.check_node(site.node)?;
    }
    let thetas: Vec<WeightVector> = if theta.is_empty() {
        match cfg.file.get("theta") {
            Some(t) => vec![t.parse()?],
            None => vec![datum.negative_chamber_theta()],
        }
    } else {
        theta.iter().map(|t| t.parse()).collect::<Result<_, _>>()?
    };
    if thetas.iter().any(|t| t.0.len() != datum.rank()) {
        return Err(usage(format!("theta needs {} entries", datum.rank())));
    }
    let out = cfg.path(out, "out");
    let field = cfg.text(field, "field").unwrap_or_else(|| "F2".into());
    match field.as_str() {
        "F2" => search_in::<Fp<2>>(cfg, &datum, &v, &w, &thetas, out),
        "F3" => search_in::<Fp<3>>(cfg, &datum, &v, &w, &thetas, out),
        "F5" => search_in::<Fp<5>>(cfg, &datum, &v, &w, &thetas, out),
        "F7" => search_in::<Fp<7>>(cfg, &datum, &v, &w, &thetas, out),
        "Q" => Err(Error::FieldNotFinite.into()),
        other => Err(usage(format!("unsupported field `{other}`"))),
    }
}

fn run(cli: Cli) -> Outcome {
    let flags = GlobalFlags {
        config: cli.global.config,
        cache_dir: cli.global.cache_dir,
        cap_monomials: cli.global.cap_monomials,
        cap_height: cli.global.cap_height,
        cap_w: cli.global.cap_w,
        cap_entries: cli.global.cap_entries,
    };
    let cfg = RunConfig::resolve(&flags).map_err(Failure::Usage)?;
    match &cli.command {
        Command::Qchar { target, out } => cmd_qchar(&cfg, target, out),
        Command::ExtremalCheck { target, report } => cmd_extremal(&cfg, target, report),
        Command::BraidOrbit { target, word, out } => cmd_braid_orbit(&cfg, target, word, out),
        Command::QuiverCheck { point, theta } => cmd_quiver_check(&cfg, point, theta),
        Command::QuiverReflect {
            point,
            node,
            word,
            theta,
            trusted,
            out,
        } => cmd_quiver_reflect(&cfg, point, *node, word, theta, *trusted, out),
        Command::QuiverSearch {
            kind,
            v,
            w,
            field,
            theta,
            out,
        } => cmd_quiver_search(&cfg, kind, v, w, field, theta, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
