use std::fmt::Display;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use tropsing::counting::{self, decimal};
use tropsing::exactlin::{rat_to_f64, Rational};
use tropsing::gradedcircuits::{self, GradedCircuit};
use tropsing::mgcenum::{self, enumerate_mgc, face_points, mikhalkin_triangulation, MgcDescriptor};
use tropsing::realsigns::{self, SignAssignment};
use tropsing::simplex::SimplexContext;
use tropsing::symweights::{parse_rational, WeightFunction};
use tropsing::tropdual::{self, normalized_volume};

#[derive(Parser)]
#[command(name = "tropsing", version, about = "Singular tropical hypersurfaces and Mikhalkin graded circuits")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Io {
    /// Output format; tables default to csv, single records to text.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List Mikhalkin graded circuits of Δ_d^(n).
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        descriptor: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Totals, per-descriptor counts and finite-difference fits over a degree window.
    Count {
        #[arg(long)]
        dim: usize,
        /// Inclusive range A..B.
        #[arg(long)]
        degrees: String,
        #[arg(long)]
        per_type: bool,
        #[arg(long)]
        fit: bool,
        #[command(flatten)]
        io: Io,
    },
    /// α, β, γ up to index N.
    Sequences {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Truncated β series against its closed form.
    Genfun {
        #[arg(long)]
        z: String,
        #[arg(long)]
        terms: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Lower and upper bounds on α, β, γ.
    Bounds {
        #[arg(long)]
        max_n: usize,
        #[command(flatten)]
        io: Io,
    },
    /// Mikhalkin triangulation of Δ or of a face.
    Triangulate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: i64,
        /// Fixed coordinates, e.g. `2=0,0=1`.
        #[arg(long)]
        face: Option<String>,
        #[command(flatten)]
        io: Io,
    },
    /// Singularity at the origin of a weight function (JSON).
    SingularCheck {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        io: Io,
    },
    /// Mikhalkin condition for a graded circuit (JSON).
    Admits {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        io: Io,
    },
    /// Real solution counts under a sign assignment, or their average over Ω.
    RealAverage {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// all-plus | witness | file:PATH | sweep
        #[arg(long, default_value = "sweep")]
        xi: String,
        #[command(flatten)]
        io: Io,
    },
    /// δ-nodal count from the K_{d,a} groups.
    DeltaNodal {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: i64,
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        real: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Lattice paths of the pencil.
    Paths {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        degree: i64,
        #[command(flatten)]
        io: Io,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain<E: std::fmt::Debug>(e: E) -> Failure {
    Failure::Domain(format!("{e:?}"))
}

enum Report {
    Table { headers: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value },
    Record { fields: Vec<(&'static str, String)>, json: Value },
}

fn csv_of(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn render(r: &Report, f: Option<Format>) -> String {
    match (r, f) {
        (Report::Table { json, .. } | Report::Record { json, .. }, Some(Format::Json)) => {
            serde_json::to_string_pretty(json).expect("serializable") + "\n"
        }
        (Report::Table { headers, rows, .. }, _) => csv_of(headers, rows),
        (Report::Record { fields, .. }, Some(Format::Csv)) => {
            let h: Vec<&str> = fields.iter().map(|f| f.0).collect();
            csv_of(&h, &[fields.iter().map(|f| f.1.clone()).collect()])
        }
        (Report::Record { fields, .. }, _) => fields.iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
    }
}

fn s(x: impl Display) -> String {
    x.to_string()
}

fn check_dims(n: usize, d: i64) -> Result<SimplexContext, Failure> {
    if n == 0 || d < 1 {
        return Err(Failure::Usage("--dim and --degree must be positive".into()));
    }
    Ok(SimplexContext::new(n, d))
}

fn parse_range(r: &str) -> Result<Vec<i64>, Failure> {
    let bad = || Failure::Usage(format!("--degrees expects A..B, got `{r}`"));
    let (a, b) = match r.split_once("..") {
        Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse::<i64>().map_err(|_| bad())?),
        None => {
            let a = r.trim().parse::<i64>().map_err(|_| bad())?;
            (a, a)
        }
    };
    if a < 1 || b < a {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

fn read_json<T: serde::de::DeserializeOwned>(p: &PathBuf) -> Result<T, Failure> {
    let text = fs::read_to_string(p).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", p.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("ParseError(\"{}: {e}\")", p.display())))
}

fn rat_json(x: &Rational) -> Value {
    json!(x.to_string())
}

fn run(cmd: Cmd) -> Result<(Report, Io), Failure> {
    Ok(match cmd {
        Cmd::Enumerate { dim, degree, descriptor, io } => {
            let ctx = check_dims(dim, degree)?;
            let filter: Option<MgcDescriptor> = descriptor.map(|g| g.parse().map_err(domain)).transpose()?;
            let all = enumerate_mgc(&ctx);
            let kept: Vec<_> = all.iter().filter(|e| filter.as_ref().is_none_or(|g| &e.descriptor == g)).collect();
            let rows = kept
                .iter()
                .map(|e| {
                    let lv: Vec<String> = e
                        .circuit
                        .levels
                        .iter()
                        .map(|l| l.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "))
                        .collect();
                    vec![s(&e.circuit.center), s(&e.descriptor), s(e.multiplicity()), s(e.first_level_multiplicity()), lv.join(" | ")]
                })
                .collect();
            let json = Value::Array(
                kept.iter()
                    .map(|e| {
                        json!({"center": e.circuit.center, "descriptor": e.descriptor, "multiplicity": e.multiplicity(),
                               "first_level_multiplicity": e.first_level_multiplicity(), "levels": e.circuit.levels})
                    })
                    .collect(),
            );
            (Report::Table { headers: vec!["center", "descriptor", "multiplicity", "m1", "levels"], rows, json }, io)
        }
        Cmd::Count { dim, degrees, per_type, fit, io } => {
            check_dims(dim, 1)?;
            let ds = parse_range(&degrees)?;
            let reports: Vec<_> = ds.iter().map(|&d| counting::count_report(&SimplexContext::new(dim, d))).collect();
            if fit {
                let f = counting::fit_from_reports(dim, &reports).map_err(domain)?;
                let mut rows: Vec<Vec<String>> =
                    f.per_descriptor.iter().map(|(k, v)| vec![s(k), s(v), decimal(v, 4)]).collect();
                rows.push(vec!["total".into(), s(&f.total), decimal(&f.total, 4)]);
                rows.push(vec!["total_real".into(), s(&f.total_real), decimal(&f.total_real, 4)]);
                let json = serde_json::to_value(&f).expect("serializable");
                (Report::Table { headers: vec!["series", "exact", "decimal"], rows, json }, io)
            } else if per_type {
                let rows = reports
                    .iter()
                    .flat_map(|r| {
                        r.per_descriptor.iter().map(move |(k, v)| vec![s(r.d), s(k), s(v.count), s(v.total_mult), s(v.total_m1)])
                    })
                    .collect();
                let json = serde_json::to_value(&reports).expect("serializable");
                (Report::Table { headers: vec!["degree", "descriptor", "count", "sum_m", "sum_m1"], rows, json }, io)
            } else {
                let rows = reports.iter().map(|r| vec![s(r.d), s(r.circuit_count()), s(r.totals.0), s(r.totals.1)]).collect();
                let json = Value::Array(
                    reports
                        .iter()
                        .map(|r| json!({"degree": r.d, "circuits": r.circuit_count(), "sum_m": r.totals.0, "sum_m1": r.totals.1}))
                        .collect(),
                );
                (Report::Table { headers: vec!["degree", "circuits", "sum_m", "sum_m1"], rows, json }, io)
            }
        }
        Cmd::Sequences { max_n, exact, io } => {
            let t = counting::recurrence_sequences(max_n);
            let mut headers = vec!["n", "alpha", "beta", "gamma"];
            if exact {
                headers.extend(["alpha_exact", "beta_exact", "gamma_exact"]);
            }
            let rows = (0..=max_n)
                .map(|i| {
                    let mut r = vec![s(i), decimal(&t.alpha[i], 3), decimal(&t.beta[i], 3), decimal(&t.gamma[i], 3)];
                    if exact {
                        r.extend([s(&t.alpha[i]), s(&t.beta[i]), s(&t.gamma[i])]);
                    }
                    r
                })
                .collect();
            (Report::Table { headers, rows, json: serde_json::to_value(&t).expect("serializable") }, io)
        }
        Cmd::Genfun { z, terms, io } => {
            let zf = parse_rational(&z).map(|q| rat_to_f64(&q)).or_else(|| z.trim().parse::<f64>().ok());
            let zf = zf.ok_or_else(|| Failure::Usage(format!("--z expects a rational or decimal, got `{z}`")))?;
            if terms < 2 {
                return Err(Failure::Usage("--terms must be at least 2".into()));
            }
            let res = counting::beta_genfun_residual(zf, terms).map_err(domain)?;
            let t = counting::recurrence_sequences(terms);
            let ratio = (&t.beta[terms] / &t.beta[terms - 1]).to_f64().unwrap_or(f64::NAN);
            let limit = 3.0 * 3f64.sqrt() / (2.0 * std::f64::consts::PI);
            let fields = vec![
                ("z", s(zf)),
                ("terms", s(terms)),
                ("residual", format!("{res:.3e}")),
                ("ratio", format!("{ratio:.6}")),
                ("ratio_limit", format!("{limit:.6}")),
                ("radius", format!("{:.6}", counting::beta_radius())),
            ];
            let json = json!({"z": zf, "terms": terms, "residual": res, "ratio": ratio, "ratio_limit": limit, "radius": counting::beta_radius()});
            (Report::Record { fields, json }, io)
        }
        Cmd::Bounds { max_n, io } => {
            let b = counting::bounds_check(max_n).map_err(domain)?;
            let rows = b
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), s(c.holds), c.first_failure.map_or(String::new(), s)])
                .collect();
            let json = serde_json::to_value(&b).expect("serializable");
            (Report::Table { headers: vec!["bound", "holds", "first_failure"], rows, json }, io)
        }
        Cmd::Triangulate { dim, degree, face, io } => {
            let ctx = check_dims(dim, degree)?;
            let mut fixed = Vec::new();
            for part in face.iter().flat_map(|f| f.split(',')).filter(|p| !p.trim().is_empty()) {
                let (i, v) = part.split_once('=').ok_or_else(|| Failure::Usage(format!("--face expects i=v pairs, got `{part}`")))?;
                let i: usize = i.trim().parse().map_err(|_| Failure::Usage(format!("bad coordinate `{i}`")))?;
                let v: i64 = v.trim().parse().map_err(|_| Failure::Usage(format!("bad value `{v}`")))?;
                if i > dim {
                    return Err(Failure::Usage(format!("coordinate {i} exceeds --dim")));
                }
                fixed.push((i, v));
            }
            let pts = face_points(&ctx, &fixed);
            if pts.is_empty() {
                return Err(Failure::Domain("EmptyFace".into()));
            }
            let sub = mikhalkin_triangulation(&pts, None).map_err(domain)?;
            let rows = sub
                .cells
                .iter()
                .map(|c| vec![c.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" "), s(normalized_volume(c))])
                .collect();
            let json = serde_json::to_value(&sub).expect("serializable");
            (Report::Table { headers: vec!["cell", "volume"], rows, json }, io)
        }
        Cmd::SingularCheck { input, io } => {
            let nu: WeightFunction = read_json(&input)?;
            let sing = tropdual::is_singular_at_origin(&nu);
            let ty = tropdual::geometric_type_check(&nu);
            let ty_s = serde_json::to_value(ty).expect("serializable").as_str().unwrap_or_default().to_string();
            let fields = vec![("singular_at_origin", s(sing)), ("geometric_type", ty_s)];
            (Report::Record { fields, json: json!({"singular_at_origin": sing, "geometric_type": ty}) }, io)
        }
        Cmd::Admits { input, io } => {
            let c: GradedCircuit = read_json(&input)?;
            let valid = gradedcircuits::validate(&c).map_err(domain)?;
            let ok = gradedcircuits::admits_mikhalkin(&valid);
            let m = gradedcircuits::multiplicity(&valid);
            let fields = vec![("admits_mikhalkin", s(ok)), ("height", s(valid.height())), ("multiplicity", s(m))];
            (Report::Record { fields, json: json!({"admits_mikhalkin": ok, "height": valid.height(), "multiplicity": m}) }, io)
        }
        Cmd::RealAverage { dim, degree, circuit, xi, io } => {
            let ctx = check_dims(dim, degree)?;
            let circuits: Vec<(GradedCircuit, String)> = match &circuit {
                Some(p) => {
                    let c: GradedCircuit = read_json(p)?;
                    if c.n != dim || c.d != degree {
                        return Err(Failure::Usage("circuit does not match --dim/--degree".into()));
                    }
                    vec![(c, String::new())]
                }
                None => enumerate_mgc(&ctx).into_iter().map(|e| (e.circuit, e.descriptor.to_string())).collect(),
            };
            let assignment = match xi.as_str() {
                "sweep" => None,
                "all-plus" => Some(SignAssignment::all_plus(realsigns::condition_count(&ctx, 1), dim)),
                "witness" => Some(realsigns::omega_witness(&ctx).map_err(domain)?),
                other => match other.strip_prefix("file:") {
                    Some(p) => Some(read_json(&PathBuf::from(p))?),
                    None => return Err(Failure::Usage(format!("--xi expects all-plus, witness, file:PATH or sweep, got `{other}`"))),
                },
            };
            let mut rows = Vec::new();
            let mut items = Vec::new();
            let mut total = Rational::from_integer(0.into());
            for (c, desc) in &circuits {
                let m1 = gradedcircuits::first_level_multiplicity(c);
                let value = match &assignment {
                    None => realsigns::average_mt(c, &ctx).map_err(domain)?,
                    Some(a) => Rational::from_integer(realsigns::real_count(c, a).map_err(domain)?.into()),
                };
                total += &value;
                rows.push(vec![s(&c.center), desc.clone(), s(gradedcircuits::multiplicity(c)), s(m1), s(&value)]);
                items.push(json!({"center": c.center, "descriptor": desc, "multiplicity": gradedcircuits::multiplicity(c),
                                  "m1": m1, "value": rat_json(&value)}));
            }
            rows.push(vec!["total".into(), String::new(), String::new(), String::new(), s(&total)]);
            let mode = if assignment.is_none() { "omega_average" } else { "real_count" };
            let json = json!({"mode": mode, "circuits": items, "total": rat_json(&total)});
            (Report::Table { headers: vec!["center", "descriptor", "multiplicity", "m1", mode], rows, json }, io)
        }
        Cmd::DeltaNodal { dim, degree, nodes, real, io } => {
            let ctx = check_dims(dim, degree)?;
            let r = counting::count_report(&ctx);
            let count = counting::delta_nodal_count(&r, nodes, real).map_err(domain)?;
            let scale = num_bigint::BigInt::from(degree).pow((dim * nodes) as u32);
            let norm = Rational::new(count.clone(), scale);
            let fields = vec![
                ("dim", s(dim)),
                ("degree", s(degree)),
                ("nodes", s(nodes)),
                ("real", s(real)),
                ("count", s(&count)),
                ("normalized", decimal(&norm, 6)),
            ];
            let json = json!({"dim": dim, "degree": degree, "nodes": nodes, "real": real, "count": count.to_string(), "normalized": rat_json(&norm)});
            (Report::Record { fields, json }, io)
        }
        Cmd::Paths { dim, degree, io } => {
            let ctx = check_dims(dim, degree)?;
            let paths = tropdual::pencil_paths(&ctx);
            let kind = |k: tropdual::PathKind| serde_json::to_value(k).expect("serializable").as_str().unwrap_or_default().to_string();
            let rows = paths
                .iter()
                .map(|p| {
                    let e: Vec<String> = p.edges.iter().map(|e| format!("{}->{}", e.tail, e.head)).collect();
                    vec![kind(p.kind), s(&p.point), s(p.edges.len()), e.join(" ")]
                })
                .collect();
            let json = serde_json::to_value(&paths).expect("serializable");
            (Report::Table { headers: vec!["kind", "point", "edges", "path"], rows, json }, io)
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    mgcenum::configure_threads();
    match run(cli.cmd) {
        Ok((report, io)) => {
            let text = render(&report, io.format);
            match io.out {
                Some(p) => {
                    if let Err(e) = fs::write(&p, text) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
