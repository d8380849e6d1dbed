use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use protofusion::arith::prime_power;
use protofusion::bounds::Bounds;
use protofusion::cache::AutCache;
use protofusion::corpus::{self, NamedGroup};
use protofusion::fusion::RealizedFusionSystem;
use protofusion::io::{self, GroupSpec, RunConfig};
use protofusion::protoessential::{proto_essential_scan, ConjugacyMode, RankTestMode, ScanConfig};
use protofusion::{Error, Result};

#[derive(Parser)]
#[command(name = "protofusion", version, about = "Fusion systems and proto-essential subgroups of small groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the five-stage filter on a p-group (or a Sylow subgroup of the group).
    Protoessential(Common),
    /// Essential subgroups of F_S(G), with focal data and J(S) closure.
    Essentials(Common),
    /// Saturation flags per F-class and the Alperin generation check.
    Saturation(Common),
    /// Focal and hyperfocal subgroups with their group-theoretic cross-checks.
    Focal(Common),
    /// Weak and strong closure per F-class.
    Closure(Common),
    /// The bundled corpus.
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand)]
enum CorpusCommand {
    List {
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Emit the group-spec JSON of a corpus group.
    Emit {
        name: String,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Inner,
    #[value(alias = "automorphism")]
    Aut,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankTest {
    Conservative,
    Strict,
}

#[derive(Args)]
struct Common {
    /// corpus:NAME or file:PATH
    #[arg(long)]
    group: String,
    /// Defaults to the prime of a p-group.
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, value_enum, default_value = "aut")]
    mode: Mode,
    #[arg(long = "rank-test", value_enum, default_value = "conservative")]
    rank_test: RankTest,
    #[arg(long)]
    diagnostic: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Aut cache file; defaults to $PROTOFUSION_CACHE_DIR/aut_cache.json.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Common {
    fn config(&self, group: &NamedGroup) -> Result<RunConfig> {
        let prime = match self.prime {
            Some(p) => p,
            None => prime_power(group.group.order())
                .map(|(p, _)| p)
                .ok_or_else(|| Error::input("--prime is required for a group that is not a p-group"))?,
        };
        Ok(RunConfig {
            prime,
            mode: match self.mode {
                Mode::Inner => ConjugacyMode::Inner,
                Mode::Aut => ConjugacyMode::Automorphism,
            },
            rank_test: match self.rank_test {
                RankTest::Conservative => RankTestMode::Conservative,
                RankTest::Strict => RankTestMode::Strict,
            },
            diagnostic: self.diagnostic,
            seed: self.seed,
            bounds: Bounds::default(),
        })
    }
}

fn emit(report: &Option<PathBuf>, text: &str) -> Result<()> {
    match report {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn fusion_system(group: &NamedGroup, config: &RunConfig) -> Result<RealizedFusionSystem> {
    let start = Instant::now();
    let f = RealizedFusionSystem::new(&group.group, config.prime)?;
    log::info!("fusion system built in {:.3}s", start.elapsed().as_secs_f64());
    Ok(f)
}

fn run(cli: Cli) -> Result<()> {
    let common = match &cli.command {
        Command::Corpus(CorpusCommand::List { report }) => {
            return emit(report, &io::to_json(&io::corpus_listing()));
        }
        Command::Corpus(CorpusCommand::Emit { name, report }) => {
            let g = corpus::build(name)?;
            return emit(report, &GroupSpec::from_group(&g.name, &g.group).to_json());
        }
        Command::Protoessential(c)
        | Command::Essentials(c)
        | Command::Saturation(c)
        | Command::Focal(c)
        | Command::Closure(c) => c,
    };
    let group = io::resolve_group(&common.group)?;
    let config = common.config(&group)?;
    let text = match &cli.command {
        Command::Protoessential(_) => {
            let cache = AutCache::from_config(common.cache.as_deref())?;
            let s = if group.group.is_p_group(config.prime) {
                group.group.clone()
            } else {
                group.group.sylow_subgroup(config.prime)?
            };
            let start = Instant::now();
            let scan = proto_essential_scan(
                &s,
                config.prime,
                ScanConfig {
                    mode: config.mode,
                    rank_test: config.rank_test,
                    diagnostic: config.diagnostic,
                },
                &cache,
            )?;
            log::info!("scan finished in {:.3}s", start.elapsed().as_secs_f64());
            cache.save()?;
            io::to_json(&io::pipeline_report(&group.name, &scan, &config))
        }
        Command::Essentials(_) => io::to_json(&io::essential_report(&group.name, &fusion_system(&group, &config)?, &config)?),
        Command::Saturation(_) => {
            io::to_json(&io::saturation_report(&group.name, &fusion_system(&group, &config)?, &config)?)
        }
        Command::Focal(_) => io::to_json(&io::focal_report(&group.name, &fusion_system(&group, &config)?, &config)?),
        Command::Closure(_) => io::to_json(&io::closure_report(&group.name, &fusion_system(&group, &config)?, &config)),
        Command::Corpus(_) => unreachable!(),
    };
    emit(&common.report, &text)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err);
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
