use std::fs;
use std::path::Path;
use std::time::Instant;

use polycast::bounds::BoundsTable;
use polycast::casting::{cast_verdict, Strictness};
use polycast::fatness::{check_size_bounds, SizeBounds};
use polycast::genlab::{self, GenSpec, Platonic};
use polycast::off::{read_off, write_off};
use polycast::{
    annulus_at, best_center, search_two_castable, validate_general_position, ConvexPolyhedron,
    Error, Point3, Strategy, DEFAULT_TOL,
};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{
    AnalyzeArgs, BoundsArgs, Cli, Command, CutSearchArgs, GenerateArgs, Kind, Solid, EXIT_GEOMETRY,
    EXIT_NEGATIVE, EXIT_OK, EXIT_PARSE, EXIT_USAGE,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub input_digest: Option<String>,
    pub config: Value,
    pub results: Value,
    pub runtime_ms: f64,
    pub tool_version: &'static str,
}

pub enum Output {
    Report(RunReport, u8),
    Text(String),
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } => EXIT_PARSE,
            Error::InvalidPolyhedron(_)
            | Error::DegenerateInput(_)
            | Error::DegenerateCut(_)
            | Error::CenterOutside { .. } => EXIT_GEOMETRY,
            Error::CapExceeded { .. }
            | Error::PerturbationFailed { .. }
            | Error::NotCastable { .. }
            | Error::PreconditionFailed(_) => EXIT_NEGATIVE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Run = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Run {
    let start = Instant::now();
    let out = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::CutSearch(a) => cut_search(cli, a),
        Command::Bounds(a) => bounds(a),
        Command::Generate(a) => generate(cli, a),
    }?;
    Ok(match out {
        Output::Report(mut r, code) => {
            r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
            Output::Report(r, code)
        }
        text => text,
    })
}

fn report(command: &'static str, digest: Option<String>, config: Value, results: Value) -> RunReport {
    RunReport {
        schema_version: SCHEMA_VERSION,
        command,
        input_digest: digest,
        config,
        results,
        runtime_ms: 0.0,
        tool_version: env!("CARGO_PKG_VERSION"),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Reads and parses an OFF file, returning the polyhedron and the SHA-256 of its bytes.
fn load(path: &Path) -> Result<(ConvexPolyhedron, String), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let digest = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| Failure {
        code: EXIT_PARSE,
        message: format!("{} is not valid UTF-8", path.display()),
    })?;
    Ok((read_off(&text)?, digest))
}

fn require_seed(cli: &Cli, seed: Option<u64>) -> Result<u64, Failure> {
    match seed {
        Some(s) => Ok(s),
        None if cli.strict => Err(Failure::usage("--strict requires --seed for randomized commands")),
        None => Ok(0),
    }
}

fn parse_center(s: &str) -> Result<Option<Point3>, Failure> {
    if s == "auto" {
        return Ok(None);
    }
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::usage(format!("bad --center {s:?}; expected auto or x,y,z")))?;
    match parts.as_slice() {
        [x, y, z] if parts.iter().all(|v| v.is_finite()) => Ok(Some(Point3::new(*x, *y, *z))),
        _ => Err(Failure::usage(format!("bad --center {s:?}; expected auto or x,y,z"))),
    }
}

fn analyze(a: &AnalyzeArgs) -> Run {
    let center = parse_center(&a.center)?;
    let (p, digest) = load(&a.file)?;
    let fat = match center {
        Some(c) => annulus_at(&p, c)?,
        None => best_center(&p, a.iters),
    };
    let verdicts: Vec<_> = (0..p.num_facets()).map(|f| cast_verdict(&p, f, DEFAULT_TOL)).collect();
    let weak = verdicts.iter().filter(|v| v.castable(Strictness::Weak)).count();
    let strong = verdicts.iter().filter(|v| v.castable(Strictness::Strong)).count();
    let size = check_size_bounds(&p, &fat, 1e-9);
    let gp = validate_general_position(&p, DEFAULT_TOL);
    let v = p.num_vertices() as i64;
    let e = p.edges().len() as i64;
    let f = p.num_facets() as i64;
    let results = json!({
        "vertices": v,
        "edges": e,
        "facets": f,
        "euler_characteristic": v - e + f,
        "volume": p.volume(),
        "surface_area": p.total_area(),
        "diameter": p.diameter(),
        "fatness": fat,
        "size_bounds_limits": SizeBounds::for_ratio(fat.ratio),
        "size_bounds": { "pass": size.pass(), "items": size.items },
        "castable_weak": weak,
        "castable_strong": strong,
        "volume_bound_ok": verdicts.iter().all(|v| v.volume_bound_ok),
        "facet_verdicts": verdicts,
        "general_position": gp,
    });
    let config = json!({ "file": a.file, "center": a.center, "iters": a.iters });
    Ok(Output::Report(report("analyze", Some(digest), config, results), EXIT_OK))
}

fn cut_search(cli: &Cli, a: &CutSearchArgs) -> Run {
    let seed = require_seed(cli, a.seed)?;
    let strategies: Vec<Strategy> = a
        .strategies
        .iter()
        .map(|s| s.parse::<Strategy>().map_err(Failure::usage))
        .collect::<Result<_, _>>()?;
    if strategies.is_empty() {
        return Err(Failure::usage("--strategies must name at least one strategy"));
    }
    let (p, digest) = load(&a.file)?;
    let budget = usize::try_from(a.budget).map_err(|_| Failure::usage("--budget too large"))?;
    let input = a.file.display().to_string();
    let search = search_two_castable(&p, &input, &strategies, budget, seed, DEFAULT_TOL);
    let code = if search.witness.is_some() { EXIT_OK } else { EXIT_NEGATIVE };
    let config = json!({
        "file": a.file,
        "budget": budget,
        "seed": seed,
        "strategies": strategies.iter().map(|s| s.name()).collect::<Vec<_>>(),
    });
    Ok(Output::Report(report("cut-search", Some(digest), config, to_value(&search)), code))
}

fn bounds(a: &BoundsArgs) -> Run {
    let table = BoundsTable::compute();
    if a.text {
        return Ok(Output::Text(table.render()));
    }
    let code = if table.all_match() { EXIT_OK } else { EXIT_NEGATIVE };
    let results = json!({ "all_match": table.all_match(), "table": table });
    Ok(Output::Report(report("bounds", None, json!({}), results), code))
}

fn platonic(s: Solid) -> Platonic {
    match s {
        Solid::Tetrahedron => Platonic::Tetrahedron,
        Solid::Cube => Platonic::Cube,
        Solid::Octahedron => Platonic::Octahedron,
        Solid::Dodecahedron => Platonic::Dodecahedron,
        Solid::Icosahedron => Platonic::Icosahedron,
    }
}

fn generate(cli: &Cli, a: &GenerateArgs) -> Run {
    let kind = a.kind.unwrap_or(if a.ratio.is_some() { Kind::TargetRatio } else { Kind::SphereHull });
    let spec = match kind {
        Kind::Platonic => GenSpec::Platonic { solid: platonic(a.solid) },
        Kind::SphereHull => GenSpec::SphereHull { n: a.n, seed: require_seed(cli, a.seed)? },
        Kind::TargetRatio => {
            let ratio = a.ratio.ok_or_else(|| Failure::usage("--kind target-ratio needs --ratio"))?;
            if !(ratio.is_finite() && ratio > 1.0) {
                return Err(Failure::usage("--ratio must be a finite number greater than 1"));
            }
            GenSpec::TargetRatio { ratio, cap: a.cap, seed: require_seed(cli, a.seed)? }
        }
        Kind::Prism => GenSpec::Prism { sides: a.sides, height: a.height, seed: require_seed(cli, a.seed)? },
        Kind::Perturbed => GenSpec::Perturbed {
            base: Box::new(GenSpec::Platonic { solid: platonic(a.solid) }),
            epsilon: a.eps,
            seed: require_seed(cli, a.seed)?,
        },
    };
    let generated = genlab::generate(&spec)?;
    let manifest = generated.manifest();
    let off = write_off(&generated.polyhedron);

    let mut results = json!({ "manifest": manifest });
    let manifest_path = a
        .manifest
        .clone()
        .or_else(|| a.out.as_ref().map(|p| p.with_extension("json")));
    if let Some(out) = &a.out {
        write_file(out, off.as_bytes())?;
        results["off_path"] = json!(out);
    } else {
        results["off"] = json!(off);
    }
    if let Some(mp) = &manifest_path {
        let text = serde_json::to_string_pretty(&manifest).map_err(|e| Failure {
            code: EXIT_NEGATIVE,
            message: e.to_string(),
        })?;
        write_file(mp, text.as_bytes())?;
        results["manifest_path"] = json!(mp);
    }
    let config = json!({
        "spec": spec,
        "out": a.out,
        "manifest": manifest_path,
    });
    Ok(Output::Report(report("generate", None, config, results), EXIT_OK))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure {
        code: EXIT_NEGATIVE,
        message: format!("cannot write {}: {e}", path.display()),
    })
}
