use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use schur_sigma::classify::{self, Catalog};
use schur_sigma::covers;
use schur_sigma::heuristics;
use schur_sigma::schur::{self, SubgroupRecipe, Verdict};
use schur_sigma::{filtrations, PcGroup};
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

/// Exit status for an inconclusive powerfulness verdict.
const EXIT_INCONCLUSIVE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "schur-sigma", version, about = "Weak Schur sigma-groups with two generators for p = 3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// The prime. Only 3 is supported by the catalog and the model.
    #[arg(long, global = true, default_value_t = 3)]
    p: u32,
    /// Largest p-class explored by the powerfulness recursion.
    #[arg(long, global = true, default_value_t = schur::DEFAULT_MAX_CLASS)]
    max_class: usize,
    /// Progress and timing on stderr; repeat for more.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the 19 types of G/D4(G) and print them as JSON.
    Catalog {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify relator records into catalog types.
    Classify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// IPAD of a two-generated group given in the pc text format.
    Ipad {
        #[arg(long)]
        group: PathBuf,
    },
    /// Immediate descendants of the given step size.
    Descendants {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        step: usize,
    },
    /// Run the powerfulness recursion for one catalog type.
    Powerful {
        #[arg(long = "type")]
        type_label: String,
        #[arg(long)]
        subgroup: Term,
    },
    /// Observed against expected frequencies for classified labels.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Run the built-in invariant checks.
    Selfcheck,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Term {
    D2,
    D3,
    D4,
}

impl Term {
    fn recipe(self) -> SubgroupRecipe {
        match self {
            Term::D2 => SubgroupRecipe::d(2),
            Term::D3 => SubgroupRecipe::d(3),
            Term::D4 => SubgroupRecipe::d(4),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Tsv,
    Markdown,
    Json,
}

struct Ctx {
    verbose: u8,
    start: Instant,
}

impl Ctx {
    fn log(&self, level: u8, msg: impl AsRef<str>) {
        if self.verbose >= level {
            eprintln!("[{:>8.2}s] {}", self.start.elapsed().as_secs_f64(), msg.as_ref());
        }
    }

    fn catalog(&self) -> Result<Catalog> {
        self.log(1, "building catalog");
        let cat = Catalog::build()?;
        self.log(1, format!("catalog has {} entries", cat.entries.len()));
        Ok(cat)
    }
}

fn main() -> ExitCode {
    // Usage errors exit 1 so that 2 stays reserved for inconclusive verdicts.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("thread pool")?;
    }
    let ctx = Ctx { verbose: cli.verbose, start: Instant::now() };
    let needs_three = !matches!(cli.command, Command::Ipad { .. } | Command::Descendants { .. });
    if needs_three && cli.p != classify::P {
        bail!("--p {} is not supported by this subcommand; only p = {} is", cli.p, classify::P);
    }
    match cli.command {
        Command::Catalog { out } => {
            let cat = ctx.catalog()?;
            let text = serde_json::to_string_pretty(&cat.to_json())? + "\n";
            write_output(out.as_deref(), &text)?;
        }
        Command::Classify { input, out } => {
            check_input(&input)?;
            let recs = classify::read_massey_csv(open(&input)?).with_context(|| format!("{}", input.display()))?;
            for (i, r) in recs.iter().enumerate() {
                r.validate().with_context(|| format!("{}: record {}", input.display(), i + 1))?;
            }
            let cat = ctx.catalog()?;
            let rows: Vec<(i64, String)> =
                recs.iter().map(|r| (r.discriminant, cat.classify_record(r).display_name())).collect();
            let file = fs::File::create(&out).with_context(|| format!("cannot create {}", out.display()))?;
            heuristics::write_labels_csv(file, &rows)?;
            ctx.log(1, format!("classified {} records", rows.len()));
        }
        Command::Ipad { group } => {
            let g = read_group(&group, cli.p)?;
            println!("{}", classify::ipad(&g)?);
        }
        Command::Descendants { group, step } => {
            let g = read_group(&group, cli.p)?;
            let kids = covers::immediate_descendants(&g, step)?;
            ctx.log(1, format!("{} descendants", kids.len()));
            let mut out = String::new();
            for k in &kids {
                out.push_str(&k.to_text());
                out.push('\n');
            }
            write_output(None, &out)?;
        }
        Command::Powerful { type_label, subgroup } => {
            let cat = ctx.catalog()?;
            let entry = cat.lookup(&type_label)?;
            if entry.order != 243 {
                bail!("{} has order {}; the recursion starts from the order-243 types", entry.display_name(), entry.order);
            }
            let e = subgroup.recipe();
            ctx.log(1, format!("recursion for {} with E = {e}", entry.display_name()));
            let report = schur::powerfulness_recursion(&entry.display_name(), &entry.group, &e, cli.max_class)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if report.verdict == Verdict::Inconclusive {
                return Ok(EXIT_INCONCLUSIVE);
            }
        }
        Command::Report { input, format } => {
            check_input(&input)?;
            let rows = heuristics::read_labels_csv(open(&input)?).with_context(|| format!("{}", input.display()))?;
            let cat = ctx.catalog()?;
            let model = heuristics::expected_model::<f64>(&cat)?;
            let report = heuristics::frequency_report(rows, &cat, &model)?;
            let text = match format {
                Format::Tsv => report.to_tsv(),
                Format::Markdown => report.to_markdown(),
                Format::Json => serde_json::to_string_pretty(&report.to_json())? + "\n",
            };
            write_output(None, &text)?;
        }
        Command::Selfcheck => return selfcheck(&ctx),
    }
    Ok(0)
}

fn check_input(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("input file {} does not exist", path.display());
    }
    Ok(())
}

fn open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))
}

fn read_group(path: &Path, p: u32) -> Result<PcGroup> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        check_input(path)?;
        text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    }
    let g = PcGroup::from_text(&text).with_context(|| format!("{}", path.display()))?;
    if g.prime() != p {
        bail!("{} is a presentation for p = {}, but --p is {p}", path.display(), g.prime());
    }
    Ok(g)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn selfcheck(ctx: &Ctx) -> Result<u8> {
    let mut failures = 0;
    let mut check = |name: &str, ok: bool| {
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    let cat = ctx.catalog()?;
    let count = |o: u128| cat.entries.iter().filter(|e| e.order == o).count();
    check("catalog has 13 + 5 + 1 types", (count(243), count(729), count(2187)) == (13, 5, 1));
    let dims_ok = cat.entries.iter().all(|e| {
        let dims = filtrations::zassenhaus_chain(&e.group).graded_dims;
        match e.order {
            243 => dims == [2, 1, 2],
            2187 => dims == [2, 1, 4],
            _ => dims.len() == 3,
        }
    });
    check("Zassenhaus graded dimensions", dims_ok);
    let sizes: Vec<usize> = [2, 1].iter().map(|&k| cat.entries.iter().filter(|e| e.subspace_dim == k).map(|e| e.orbit_size).sum()).collect();
    check("orbit sizes cover 130 planes and 40 lines", sizes == [130, 40]);
    let model = heuristics::expected_model::<f64>(&cat)?;
    let ms: Vec<usize> = [243, 729, 2187]
        .iter()
        .map(|&o| model.entries.iter().zip(&cat.entries).find(|(_, e)| e.order == o).map(|(m, _)| m.m).unwrap_or(9))
        .collect();
    check("relation ranks 2 / 1 / 0", ms == [2, 1, 0]);
    check("conditional frequencies sum to 1", model.is_normalized());
    check("mu_inf(Sch_2) near 0.01969", (model.mu_sch2 - 0.01969).abs() < 1e-4);
    let sigma_ok = cat.entries.iter().filter(|e| e.order == 243).all(|e| schur::is_sigma_group(&e.group).is_some());
    check("order-243 types carry a sigma-structure", sigma_ok);
    let crit_ok = cat.entries.iter().filter(|e| e.order == 243).all(|e| {
        let d2 = SubgroupRecipe::d(2);
        let q = e.group.quotient(&d2.e2().eval(&e.group).unwrap()).unwrap().0;
        schur::powerful_via_criterion(&d2, &q).ok() == schur::is_powerful_subgroup(&e.group, &d2).ok()
    });
    check("powerfulness criterion agrees with the definition", crit_ok);
    ctx.log(1, format!("{failures} failures"));
    Ok(if failures == 0 { 0 } else { 1 })
}
