use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cxdist::algebra::GR;
use cxdist::complex_plane::{check_reductions, distance_statistics, growth_sets, Sign, DEFAULT_QUADRUPLE_CAP};
use cxdist::esgk::esgk_summary;
use cxdist::harness::generate::{generate, Dataset, Generator, ProductVariant, SetSpec};
use cxdist::harness::io::{emit, read_lines, read_points, render_dataset, to_json_string, Format, Table};
use cxdist::harness::report;
use cxdist::harness::verify::{verify_lines, verify_points};
use cxdist::harness::ExperimentConfig;
use cxdist::incidence::{rich_points, rich_surfaces, structure_report, DEFAULT_TRIPLE_CAP};
use cxdist::lines::LineC3;
use cxdist::{Error, Result};

/// Exact experiments on squared complex distances and the lines they
/// induce in ℂ³.
#[derive(Parser)]
#[command(name = "cxdist", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Largest point set for the O(n⁴) checks.
    #[arg(long, global = true, default_value_t = DEFAULT_QUADRUPLE_CAP)]
    cap_quadruples: usize,
    /// Budget of line triples for quadric discovery.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIPLE_CAP)]
    cap_triples: usize,
    /// Worker threads; rayon's default when absent.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point set or line set.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Distance statistics of a point set.
    Distances {
        #[arg(long)]
        points: PathBuf,
    },
    /// The line family of a point set and its pair counts.
    Esgk {
        #[arg(long)]
        points: PathBuf,
        /// Where to write the line set.
        #[arg(long)]
        lines_out: Option<PathBuf>,
    },
    /// Rich points of a line set.
    Rich {
        #[command(flatten)]
        input: LineInput,
    },
    /// Planes and quadrics holding many lines.
    Surfaces {
        #[command(flatten)]
        input: LineInput,
        #[arg(long)]
        threshold: usize,
    },
    /// Rich planes and the residual rich points outside them.
    Structure {
        #[command(flatten)]
        input: LineInput,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Growth sets of a set of scalars and their distance-set reductions.
    Sumprod {
        #[command(flatten)]
        set: SetArgs,
    },
    /// Run the invariant suite; exit status 1 on any violation.
    Verify {
        #[arg(long)]
        points: Option<PathBuf>,
        /// With `--points`: replaces the computed family, `ℓ_{a,c}` at
        /// index `a·n + c`. Alone: a line set to check.
        #[arg(long)]
        lines: Option<PathBuf>,
    },
    /// Exact counts next to reference curves.
    Report {
        #[command(subcommand)]
        table: ReportTable,
    },
}

#[derive(Subcommand)]
enum GenKind {
    Grid {
        #[arg(long)]
        k: usize,
    },
    Isotropic {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        k: GR,
    },
    Product {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, default_value = "plus")]
        variant: ProductVariant,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bound: u32,
    },
    PlantedPlanes {
        #[arg(long)]
        planes: usize,
        #[arg(long)]
        per: usize,
        #[arg(long)]
        extra: usize,
    },
}

#[derive(Args)]
struct SetArgs {
    /// Comma-separated scalars, e.g. `0,1,2` or `1+i,-1/2`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    set: Option<Vec<GR>>,
    /// Size of a random integer set, used when `--set` is absent.
    #[arg(long, default_value_t = 4)]
    size: usize,
    #[arg(long, default_value_t = 10)]
    bound: u32,
}

impl SetArgs {
    fn spec(&self) -> SetSpec {
        match &self.set {
            Some(v) => SetSpec::Explicit(v.clone()),
            None => SetSpec::Random { size: self.size, bound: self.bound },
        }
    }
}

#[derive(Args)]
struct LineInput {
    /// Point set whose line family is used.
    #[arg(long, conflicts_with = "lines", required_unless_present = "lines")]
    points: Option<PathBuf>,
    #[arg(long)]
    lines: Option<PathBuf>,
}

impl LineInput {
    fn load(&self) -> Result<Vec<LineC3>> {
        match (&self.points, &self.lines) {
            (Some(p), _) => Ok(cxdist::esgk::esgk_family(&read_points(p)?)?.lines),
            (None, Some(l)) => read_lines(l),
            (None, None) => Err(Error::InvalidParams("one of --points or --lines is required".into())),
        }
    }
}

#[derive(Subcommand)]
enum ReportTable {
    /// Distinct distances of k×k grids.
    Distances {
        #[arg(long, default_value_t = 3)]
        kmin: usize,
        #[arg(long, default_value_t = 30)]
        kmax: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Rich points of the family of a random point set, dyadic r.
    Rich {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 50)]
        bound: u32,
    },
    /// Distances on one isotropic line.
    Isotropic {
        #[arg(long, default_value_t = 10)]
        mmax: usize,
    },
    /// Structure residuals of a line set for several r.
    Structure {
        #[command(flatten)]
        input: LineInput,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        r: Vec<usize>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
}

fn render_table(t: &Table, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json_string(&t.to_json_value()),
        Format::Csv => t.to_csv(),
    }
}

/// Renders `value` as JSON, or `table` as CSV.
fn render(value: serde_json::Value, table: impl FnOnce() -> Table, format: Format) -> Result<String> {
    match format {
        Format::Json => to_json_string(&value),
        Format::Csv => table().to_csv(),
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<bool> {
    let g = &cli.global;
    let config = ExperimentConfig { seed: g.seed, cap_quadruples: g.cap_quadruples, cap_triples: g.cap_triples };
    let out = g.out.as_deref();
    let mut passed = true;
    let text = match cli.command {
        Command::Gen { kind } => {
            let generator = match kind {
                GenKind::Grid { k } => Generator::Grid { k },
                GenKind::Isotropic { m, sign, k } => Generator::Isotropic { m, sign, k },
                GenKind::Product { set, variant } => Generator::Product { set: set.spec(), variant },
                GenKind::Random { n, bound } => Generator::Random { n, bound },
                GenKind::PlantedPlanes { planes, per, extra } => Generator::PlantedPlanes { planes, per, extra },
            };
            render_dataset(&generate(&generator, config.seed)?, g.format)?
        }
        Command::Distances { points } => {
            let pts = read_points(&points)?;
            let s = distance_statistics(&pts)?;
            let value = json!({
                "n": s.n,
                "distinctDistanceCount": s.distinct_distances.len(),
                "distinctDistances": s.distinct_distances,
                "histogram": s.histogram.iter().map(|(d, c)| json!({ "distance": d, "pairs": c })).collect::<Vec<_>>(),
                "quadrupleCount": s.quadruple_count,
                "zeroPairs": s.zero_pairs,
            });
            render(value, || {
                let mut t = Table::new(["distance", "pairs"]);
                if s.zero_pairs > 0 {
                    t.push([GR::zero().to_string(), s.zero_pairs.to_string()]);
                }
                for (d, c) in &s.histogram {
                    t.push([d.to_string(), c.to_string()]);
                }
                t
            }, g.format)?
        }
        Command::Esgk { points, lines_out } => {
            let pts = read_points(&points)?;
            let (family, summary) = esgk_summary(&pts)?;
            if let Some(path) = lines_out {
                emit(Some(&path), &render_dataset(&Dataset::Lines(family.lines.clone()), Format::Json)?)?;
            }
            render(serde_json::to_value(&summary)?, || {
                let mut t = Table::new(["n", "lineCount", "parallelPairs", "badPlanePairs", "coplanarNonBadPairs", "quadrupleCount"]);
                t.push([
                    summary.n as u64,
                    summary.line_count as u64,
                    summary.parallel_pairs,
                    summary.bad_plane_pairs,
                    summary.coplanar_non_bad_pairs,
                    summary.quadruple_count,
                ]);
                t
            }, g.format)?
        }
        Command::Rich { input } => {
            let lines = input.load()?;
            let r = rich_points(&lines)?;
            let value = json!({
                "lineCount": lines.len(),
                "maxRichness": r.max_richness,
                "pointsByRichness": r.points_by_richness.iter()
                    .map(|(k, v)| json!({ "richness": k, "points": v }))
                    .collect::<Vec<_>>(),
            });
            render(value, || {
                let mut t = Table::new(["richness", "x", "y", "z", "lines"]);
                for (k, pts) in r.points_by_richness.iter().rev() {
                    for p in pts {
                        t.push([k.to_string(), p.x().to_string(), p.y().to_string(), p.z().to_string(), join(&r.incidences[p])]);
                    }
                }
                t
            }, g.format)?
        }
        Command::Surfaces { input, threshold } => {
            let lines = input.load()?;
            let s = rich_surfaces(&lines, threshold, config.cap_triples)?;
            render(serde_json::to_value(&s)?, || {
                let mut t = Table::new(["kind", "surface", "line_count", "lines"]);
                for w in &s.planes {
                    t.push(["plane".to_string(), format!("{:?}", w.surface), w.lines.len().to_string(), join(&w.lines)]);
                }
                for w in &s.quadrics {
                    t.push(["quadric".to_string(), format!("{:?}", w.surface), w.lines.len().to_string(), join(&w.lines)]);
                }
                t
            }, g.format)?
        }
        Command::Structure { input, r, epsilon } => {
            let lines = input.load()?;
            match g.format {
                Format::Json => to_json_string(&structure_report(&lines, r, epsilon)?)?,
                Format::Csv => report::structure_table(&lines, &[r], epsilon)?.to_csv()?,
            }
        }
        Command::Sumprod { set } => {
            let mut rng_set = set.spec();
            if let SetSpec::Random { .. } = rng_set {
                // Materialize with the command's seed so the output names the set used.
                let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(config.seed);
                rng_set = SetSpec::Explicit(rng_set.materialize(&mut rng)?.into_iter().collect());
            }
            let SetSpec::Explicit(v) = rng_set else { unreachable!() };
            let a: BTreeSet<GR> = v.into_iter().collect();
            let gs = growth_sets(&a);
            let inc = check_reductions(&a)?;
            passed = inc.plus && inc.minus && inc.product;
            let value = json!({
                "set": a,
                "plusSize": gs.plus_set.len(),
                "minusSize": gs.minus_set.len(),
                "productSize": gs.product_set.len(),
                "reductions": inc,
            });
            render(value, || {
                let mut t = Table::new(["set", "plus_size", "minus_size", "product_size", "plus_ok", "minus_ok", "product_ok"]);
                let set = a.iter().map(GR::to_string).collect::<Vec<_>>().join(" ");
                t.push([
                    set,
                    gs.plus_set.len().to_string(),
                    gs.minus_set.len().to_string(),
                    gs.product_set.len().to_string(),
                    inc.plus.to_string(),
                    inc.minus.to_string(),
                    inc.product.to_string(),
                ]);
                t
            }, g.format)?
        }
        Command::Verify { points, lines } => {
            let opts = config.verify_options();
            let report = match (points, lines) {
                (Some(p), l) => {
                    let pts = read_points(&p)?;
                    let lines = l.as_deref().map(read_lines).transpose()?;
                    verify_points(&pts, lines.as_deref(), &opts)?
                }
                (None, Some(l)) => verify_lines(&read_lines(&l)?, &opts)?,
                (None, None) => return Err(Error::InvalidParams("verify needs --points or --lines".into())),
            };
            passed = report.passed;
            render(serde_json::to_value(&report)?, || {
                let mut t = Table::new(["check", "status", "detail"]);
                for c in &report.checks {
                    t.push([c.name.to_string(), serde_json::to_value(c.status).unwrap().as_str().unwrap().to_string(), c.detail.clone()]);
                }
                t
            }, g.format)?
        }
        Command::Report { table } => {
            let t = match table {
                ReportTable::Distances { kmin, kmax, epsilon } => report::distances_table(kmin, kmax, epsilon)?,
                ReportTable::Rich { n, bound } => report::rich_table(n, bound, config.seed)?,
                ReportTable::Isotropic { mmax } => report::isotropic_table(mmax)?,
                ReportTable::Structure { input, r, epsilon } => report::structure_table(&input.load()?, &r, epsilon)?,
            };
            render_table(&t, g.format)?
        }
    };
    emit(out, &text)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
