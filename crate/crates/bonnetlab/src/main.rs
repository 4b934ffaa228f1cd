use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bonnetlab::chart::Chart;
use bonnetlab::error::{exit, Error, Result};
use bonnetlab::pipeline::{self, Options, SchemeChoice};
use bonnetlab::report::to_json;
use bonnetlab::{fields, summary};
use bonnetlab_core::surface::lookup;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bonnetlab", version, about = "Numerical lab for the Bonnet problem")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ChartArgs {
    /// Gallery surface to sample.
    #[arg(long, conflicts_with = "chart", required_unless_present = "chart")]
    gallery: Option<String>,
    /// Chart specification file (JSON).
    #[arg(long)]
    chart: Option<PathBuf>,
    /// Gallery parameter NAME=VALUE. `--NAME VALUE` works too.
    #[arg(long = "param", value_name = "NAME=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[arg(long, value_enum, default_value_t = SchemeChoice::SpectralAuto)]
    scheme: SchemeChoice,
    /// Conformality tolerance; defaults to the chart's own.
    #[arg(long)]
    tol_conf: Option<f64>,
}

#[derive(Args)]
struct Output {
    /// Print the JSON report instead of the summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// List the gallery, or describe one entry.
    Gallery {
        name: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Invariants, structure residuals and classification.
    Analyze {
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: Output,
        /// Comma list from u,H,h,K,deltag.
        #[arg(long, value_name = "LIST")]
        dump_fields: Option<String>,
        /// Directory for field CSVs.
        #[arg(long, default_value = ".")]
        dump_dir: PathBuf,
    },
    /// Apply the no-mate theorem to the chart.
    Verdict {
        #[command(flatten)]
        chart: ChartArgs,
        #[command(flatten)]
        out: Output,
    },
    /// Build the theta-associate of a CMC chart and check it.
    Mate {
        #[command(flatten)]
        chart: ChartArgs,
        /// Rotation angle in radians.
        #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
        theta: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Observed convergence orders under grid refinement.
    Converge {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Write the sampled chart as a binary table plus chart file.
    Export {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, value_name = "DIR")]
        out_dir: PathBuf,
        /// Base name of the written files; defaults to the chart name.
        #[arg(long)]
        name: Option<String>,
        /// Store positions only, so derivatives are recomputed on ingest.
        #[arg(long)]
        positions_only: bool,
    },
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let v: f64 = v.parse().map_err(|e| format!("{v}: {e}"))?;
    Ok((k.to_string(), v))
}

/// Turn `--R 2` style gallery parameters into `--param R=2`.
fn rewrite_params(args: Vec<String>) -> Vec<String> {
    let entry = args.iter().enumerate().find_map(|(k, a)| {
        let name = match a.strip_prefix("--gallery") {
            Some("") => args.get(k + 1)?.as_str(),
            Some(rest) => rest.strip_prefix('=')?,
            None => return None,
        };
        lookup(name).ok()
    });
    let Some(entry) = entry else { return args };
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let flag = a.strip_prefix("--").and_then(|f| {
            let (name, value) = match f.split_once('=') {
                Some((n, v)) => (n, Some(v.to_string())),
                None => (f, None),
            };
            entry
                .params
                .iter()
                .any(|p| p.name == name)
                .then(|| (name.to_string(), value))
        });
        match flag {
            Some((name, Some(v))) => out.push(format!("--param={name}={v}")),
            Some((name, None)) => match it.next() {
                Some(v) => out.push(format!("--param={name}={v}")),
                None => out.push(a),
            },
            None => out.push(a),
        }
    }
    out
}

fn load(c: &ChartArgs) -> Result<(Chart, Options)> {
    let chart = match (&c.gallery, &c.chart) {
        (Some(name), _) => Chart::gallery(name, &c.params)?,
        (None, Some(path)) => {
            if !c.params.is_empty() {
                return Err(Error::Usage("gallery parameters need --gallery".into()));
            }
            Chart::load(path)?
        }
        (None, None) => return Err(Error::Usage("need --gallery or --chart".into())),
    };
    Ok((chart, Options {
        resolution: None,
        scheme: c.scheme,
        tol_conf: c.tol_conf,
    }))
}

/// `--nx`/`--ny` as a resolution; a missing axis keeps its default.
fn resolution(chart: &Chart, c: &ChartArgs, coarsest: bool) -> Result<Option<(usize, usize)>> {
    if c.nx.is_none() && c.ny.is_none() {
        return Ok(None);
    }
    let g = chart.grid(None)?;
    let (nx, ny) = if coarsest && chart.resizable() {
        (
            pipeline::default_level(g.periodic_x()),
            pipeline::default_level(g.periodic_y()),
        )
    } else {
        (g.nx(), g.ny())
    };
    Ok(Some((c.nx.unwrap_or(nx), c.ny.unwrap_or(ny))))
}

fn emit(out: &Output, json: &str, text: &str) -> Result<()> {
    if let Some(path) = &out.report {
        std::fs::write(path, json).map_err(|e| Error::io(path, e))?;
    }
    if out.json {
        print!("{json}");
    } else {
        print!("{text}");
    }
    Ok(())
}

fn dump(run: &pipeline::Run, name: &str, list: &str, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for f in fields::parse_list(list)? {
        match fields::field(&run.analysis, &f)? {
            Some(field) => fields::save_csv(&dir.join(format!("{name}_{f}.csv")), &field)?,
            None => eprintln!("bonnetlab: {f} not written: every node is umbilic"),
        }
    }
    Ok(())
}

fn execute(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Gallery { name, json } => match name {
            Some(n) => {
                let e = lookup(&n)?;
                if json {
                    print!("{}", to_json(&summary::GalleryListing::from(e)));
                } else {
                    print!("{}", summary::gallery_entry(e));
                }
            }
            None if json => print!("{}", to_json(&summary::gallery_listing())),
            None => print!("{}", summary::gallery_table()),
        },
        Cmd::Analyze {
            chart: c,
            out,
            dump_fields,
            dump_dir,
        } => {
            let (chart, mut opts) = load(&c)?;
            opts.resolution = resolution(&chart, &c, false)?;
            let run = pipeline::run(&chart, &opts)?;
            let report = run.report("analyze");
            if let Some(list) = dump_fields {
                dump(&run, &chart.spec.name, &list, &dump_dir)?;
            }
            emit(&out, &to_json(&report), &summary::analysis(&report))?;
        }
        Cmd::Verdict { chart: c, out } => {
            let (chart, mut opts) = load(&c)?;
            opts.resolution = resolution(&chart, &c, false)?;
            let report = pipeline::run(&chart, &opts)?.verdict_report(&chart);
            emit(&out, &to_json(&report), &summary::verdict(&report))?;
        }
        Cmd::Mate {
            chart: c,
            theta,
            out,
        } => {
            let (chart, mut opts) = load(&c)?;
            opts.resolution = resolution(&chart, &c, false)?;
            let report = pipeline::run(&chart, &opts)?.mate_report(theta)?;
            emit(&out, &to_json(&report), &summary::mate(&report))?;
        }
        Cmd::Converge {
            chart: c,
            levels,
            out,
        } => {
            let (chart, mut opts) = load(&c)?;
            opts.resolution = resolution(&chart, &c, true)?;
            let report = pipeline::converge(&chart, &opts, levels)?;
            emit(&out, &to_json(&report), &summary::converge(&report))?;
        }
        Cmd::Export {
            chart: c,
            out_dir,
            name,
            positions_only,
        } => {
            let (chart, _) = load(&c)?;
            let grid = chart.grid(resolution(&chart, &c, false)?)?;
            std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
            let name = name.unwrap_or_else(|| chart.spec.name.clone());
            let (json, table) = chart.export(&grid, &out_dir, &name, positions_only)?;
            println!("{}", json.display());
            println!("{}", table.display());
        }
    }
    Ok(())
}

fn threads() -> Result<()> {
    let Ok(v) = std::env::var("BONNETLAB_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("BONNETLAB_THREADS={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let args = rewrite_params(std::env::args().collect());
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::SCHEMA } else { exit::OK } as u8);
        }
    };
    match threads().and_then(|()| execute(cli.cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bonnetlab: error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
