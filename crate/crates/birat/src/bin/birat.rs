//! Command-line front end: validate surfaces, construct involutions, verify
//! selfmaps, and factorize birational selfmaps of cubic surfaces.

use birat::error::Error;
use birat::involution::{bertini_involution, geiser_involution, is_surface_selfmap};
use birat::io::{
    coords_to_strings, form_to_json, form_to_text, mat_to_json, parse_ideal_spec, parse_map_file,
    parse_point_spec, parse_surface_file,
};
use birat::maps::{map_compose, map_evaluate, BirationalMap};
use birat::nf::Fe;
use birat::sarkisov::factorize;
use birat::scheme::{
    normalize_coords, point_split, sample_points, seeded_rng, ClosedPoint, Seeded, Surface,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "birat", version, about = "Involutions and Sarkisov factorization on del Pezzo surfaces of degree 3 and 4")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Geiser,
    Bertini,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Selfmap,
    Involution,
    Equal,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a surface file and report the validation checks
    Validate {
        surface: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Construct a Geiser or Bertini involution at a centre
    Involution {
        surface: String,
        #[arg(long, value_enum)]
        kind: Kind,
        /// rational centre coordinates, e.g. "1,-1,-1,1"
        #[arg(long, conflicts_with = "ideal")]
        point: Option<String>,
        /// forms cutting the centre together with the surface, e.g. "x, z, s"
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, default_value_t = 8)]
        retries: u32,
    },
    /// Factorize a birational selfmap of a cubic surface into involutions
    Factorize {
        surface: String,
        map: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// verify the multiplicity threshold at each chosen centre
        #[arg(long)]
        check_maximal_centre: bool,
        #[arg(long, default_value_t = 8)]
        retries: u32,
    },
    /// Verify a map property on sampled points of the surface
    Verify {
        surface: String,
        map: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// second map file for mode "equal"
        #[arg(long)]
        map2: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse { .. } | Error::Io(_) => 1,
                Error::Validation(_) => 2,
                _ => 3,
            };
            std::process::exit(code);
        }
    }
}

fn emit(format: Format, value: &Value, text: &str) {
    match format {
        Format::Json => println!("{}", serde_json::to_string(value).unwrap()),
        Format::Text => println!("{text}"),
    }
}

/// Retries transient (computation-stage) failures, keeping the rng stream.
fn with_retries<T>(
    retries: u32,
    mut f: impl FnMut() -> Result<T, Error>,
) -> Result<T, Error> {
    let mut last = None;
    for _ in 0..=retries {
        match f() {
            Ok(v) => return Ok(v),
            Err(e @ (Error::Parse { .. } | Error::Validation(_) | Error::Io(_))) => {
                return Err(e)
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap())
}

fn resolve_centre(
    x: &Surface,
    vars: &[String],
    point: &Option<String>,
    ideal: &Option<String>,
    rng: &mut Seeded,
) -> Result<ClosedPoint, Error> {
    match (point, ideal) {
        (Some(spec), None) => {
            let coords = parse_point_spec(spec)?;
            if coords.len() != x.nvars() {
                return Err(Error::Validation(format!(
                    "centre has {} coordinates, surface ambient needs {}",
                    coords.len(),
                    x.nvars()
                )));
            }
            let p = ClosedPoint::rational(&x.field, coords);
            if !x.contains_point(&p.coords) {
                return Err(Error::Validation("centre is not on the surface".into()));
            }
            Ok(p)
        }
        (None, Some(spec)) => {
            let forms = parse_ideal_spec(spec, vars)?;
            point_split(x, &forms, rng)
        }
        _ => Err(Error::Validation(
            "exactly one of --point and --ideal is required".into(),
        )),
    }
}

fn require_valid(x: &Surface) -> Result<(), Error> {
    let report = x.validate();
    if !report.pass {
        let failing = report
            .checks
            .iter()
            .find(|(_, ok, _)| !ok)
            .map(|(name, _, detail)| format!("{name}: {detail}"))
            .unwrap_or_default();
        return Err(Error::Validation(failing));
    }
    Ok(())
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Validate { surface, format } => {
            let (vars, x) = parse_surface_file(&surface)?;
            let report = x.validate();
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|(name, ok, detail)| json!({"check": name, "pass": ok, "detail": detail}))
                .collect();
            let text = report
                .checks
                .iter()
                .map(|(name, ok, detail)| {
                    format!("check {name}: {} ({detail})", if *ok { "pass" } else { "FAIL" })
                })
                .collect::<Vec<_>>()
                .join("\n");
            emit(
                format,
                &json!({"variables": vars, "checks": checks, "pass": report.pass}),
                &format!("{text}\nsurface: {}", if report.pass { "valid" } else { "invalid" }),
            );
            if !report.pass {
                return Err(Error::Validation("surface validation failed".into()));
            }
            Ok(())
        }
        Cmd::Involution {
            surface,
            kind,
            point,
            ideal,
            seed,
            format,
            retries,
        } => {
            let (vars, x) = parse_surface_file(&surface)?;
            require_valid(&x)?;
            let mut rng = seeded_rng(seed);
            let centre = resolve_centre(&x, &vars, &point, &ideal, &mut rng)?;
            let inv = with_retries(retries, || match kind {
                Kind::Geiser => geiser_involution(&x, &centre, &mut rng),
                Kind::Bertini => bertini_involution(&x, &centre, &mut rng),
            })?;
            let selfmap = is_surface_selfmap(&x, &inv.map, &mut rng)?;
            let forms = &inv.map.stages[0];
            let jforms: Vec<Value> = forms.iter().map(|f| form_to_json(f, &vars)).collect();
            let mut text = format!(
                "kind: {}\ncentre degree: {}\nsystem dimension: {}",
                match kind {
                    Kind::Geiser => "geiser",
                    Kind::Bertini => "bertini",
                },
                centre.degree,
                inv.system_basis.dim()
            );
            for (i, f) in forms.iter().enumerate() {
                text += &format!("\nform[{i}]: {}", form_to_text(f, &vars));
            }
            text += "\ntheta:";
            for row in &inv.theta.rows {
                text += &format!(
                    "\n  {}",
                    row.iter()
                        .map(|c| c.as_rat().unwrap().to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            text += &format!("\nselfmap: {selfmap}");
            emit(
                format,
                &json!({
                    "kind": match kind { Kind::Geiser => "geiser", Kind::Bertini => "bertini" },
                    "centre": {
                        "degree": centre.degree,
                        "prime": centre.prime.iter().map(|f| form_to_json(f, &vars)).collect::<Vec<_>>(),
                    },
                    "system_dimension": inv.system_basis.dim(),
                    "forms": jforms,
                    "theta": mat_to_json(&inv.theta),
                    "selfmap": selfmap,
                }),
                &text,
            );
            Ok(())
        }
        Cmd::Factorize {
            surface,
            map,
            seed,
            format,
            check_maximal_centre,
            retries,
        } => {
            let (vars, x) = parse_surface_file(&surface)?;
            require_valid(&x)?;
            let m = parse_map_file(&map, &x)?;
            let mut rng = seeded_rng(seed);
            let fac =
                with_retries(retries, || factorize(&x, &m, check_maximal_centre, &mut rng))?;
            let jlinks: Vec<Value> = fac
                .links
                .iter()
                .map(|l| {
                    json!({
                        "kind": match l.kind {
                            birat::involution::InvolutionKind::Geiser => "geiser",
                            birat::involution::InvolutionKind::Bertini => "bertini",
                        },
                        "centre": {
                            "degree": l.centre.degree,
                            "prime": l.centre.prime.iter().map(|f| form_to_json(f, &vars)).collect::<Vec<_>>(),
                        },
                        "degree_before": l.degree_before,
                        "degree_after": l.degree_after,
                    })
                })
                .collect();
            let mut text = format!("links: {}", fac.links.len());
            for (i, l) in fac.links.iter().enumerate() {
                text += &format!(
                    "\nlink[{i}]: {} at degree-{} centre, degree {} -> {}",
                    match l.kind {
                        birat::involution::InvolutionKind::Geiser => "geiser",
                        birat::involution::InvolutionKind::Bertini => "bertini",
                    },
                    l.centre.degree,
                    l.degree_before,
                    l.degree_after
                );
            }
            text += "\nterminal automorphism:";
            for row in &fac.terminal_automorphism.rows {
                text += &format!(
                    "\n  {}",
                    row.iter()
                        .map(|c| c.as_rat().unwrap().to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                );
            }
            text += "\nround trip: true";
            emit(
                format,
                &json!({
                    "links": jlinks,
                    "terminal": mat_to_json(&fac.terminal_automorphism),
                    "round_trip": true,
                }),
                &text,
            );
            Ok(())
        }
        Cmd::Verify {
            surface,
            map,
            mode,
            map2,
            seed,
            format,
        } => {
            let (_, x) = parse_surface_file(&surface)?;
            require_valid(&x)?;
            let m = parse_map_file(&map, &x)?;
            let mut rng = seeded_rng(seed);
            let (verdict, witnesses) = match mode {
                Mode::Selfmap => {
                    let symbolic = is_surface_selfmap(&x, &m, &mut rng)?;
                    let (ok, w) = check_on_samples(&x, &m, None, true, &mut rng)?;
                    (symbolic && ok, w)
                }
                Mode::Involution => {
                    let twice = map_compose(&m, &m)?;
                    let id = BirationalMap::identity(&x);
                    check_on_samples(&x, &twice, Some(&id), false, &mut rng)?
                }
                Mode::Equal => {
                    let path2 = map2.ok_or_else(|| {
                        Error::Validation("mode 'equal' needs --map2".into())
                    })?;
                    let m2 = parse_map_file(&path2, &x)?;
                    check_on_samples(&x, &m, Some(&m2), false, &mut rng)?
                }
            };
            let jw: Vec<Value> = witnesses
                .iter()
                .map(|p| json!(coords_to_strings(p)))
                .collect();
            let mut text = format!("verdict: {verdict}\nsamples: {}", witnesses.len());
            for (i, p) in witnesses.iter().enumerate() {
                text += &format!("\nsample[{i}]: ({})", coords_to_strings(p).join(" : "));
            }
            emit(
                format,
                &json!({"verdict": verdict, "samples": jw}),
                &text,
            );
            if !verdict {
                std::process::exit(3);
            }
            Ok(())
        }
    }
}

/// Compares f with g (or, when g is None, checks that f maps samples back
/// into X) on up to 20 sampled points; returns the witnesses used.
fn check_on_samples(
    x: &Surface,
    f: &BirationalMap,
    g: Option<&BirationalMap>,
    containment: bool,
    rng: &mut Seeded,
) -> Result<(bool, Vec<Vec<Fe>>), Error> {
    let max_degree = if x.ambient_dim == 3 { 3 } else { 4 };
    let mut witnesses = vec![];
    let mut attempts = 0;
    while witnesses.len() < 20 {
        attempts += 1;
        if attempts > 60 {
            if witnesses.is_empty() {
                return Err(Error::IndeterminateAtAllSamples);
            }
            break;
        }
        for p in sample_points(x, rng, 4, max_degree)? {
            let Ok(img) = map_evaluate(f, &p.coords) else {
                continue;
            };
            if containment && !x.contains_point(&img) {
                return Ok((false, vec![p.coords]));
            }
            if let Some(g) = g {
                let Ok(img2) = map_evaluate(g, &p.coords) else {
                    continue;
                };
                if normalize_coords(&img) != normalize_coords(&img2) {
                    return Ok((false, vec![p.coords]));
                }
            }
            witnesses.push(p.coords.clone());
        }
    }
    Ok((true, witnesses))
}
