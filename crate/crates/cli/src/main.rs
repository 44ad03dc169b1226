use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use dynaquant::dynquant::dequantize;
use dynaquant::sim::algebra::{check_algebra, Profile};
use dynaquant::sim::config::ScenarioConfig;
use dynaquant::sim::dump::GeneratorDump;
use dynaquant::sim::scenario::{simulate, write_outputs, ALGEBRA_REPORT_FILE};

#[derive(Parser)]
#[command(name = "dynaquant", version, about = "Quantized phase-space dynamics on a truncated Fock space")]
struct Cli {
    /// Seed for randomized checks (overrides the config value)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory (overrides the config value)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario described by a TOML config file
    Run { config: PathBuf },

    /// Verify the operator and superoperator identities
    CheckAlgebra {
        #[arg(long, default_value_t = 32)]
        n: usize,
        /// `default` or `strict`
        #[arg(long, default_value = "default")]
        profile: Profile,
    },

    /// Recover classical coefficients from a dumped generator
    Dequantize {
        dump: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        /// Drop recovered coefficients smaller than this
        #[arg(long, default_value_t = 1e-10)]
        prune: f64,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config } => {
            let mut cfg =
                ScenarioConfig::load(&config).with_context(|| format!("loading {}", config.display()))?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
            }
            if let Some(out) = cli.out {
                cfg.output.dir = out;
            }
            let sim = simulate(&cfg)?;
            let files = write_outputs(&sim, &cfg.output.dir)?;
            if let Some(rep) = &sim.algebra {
                print!("{}", rep.to_text());
            }
            if let Some(fp) = &sim.fp {
                println!("h_star = {:.12} (formula: {:.12}, residual {:.2e})", fp.scan.h_star, fp.scan.formula_h, fp.scan.residual);
            }
            for f in files {
                println!("wrote {}", f.display());
            }
        }
        Command::CheckAlgebra { n, profile } => {
            let report = check_algebra(n, profile, cli.seed.unwrap_or(0))?;
            let text = report.to_text();
            print!("{text}");
            if let Some(dir) = cli.out {
                std::fs::create_dir_all(&dir)?;
                let path = dir.join(ALGEBRA_REPORT_FILE);
                std::fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::Dequantize { dump, degree, prune } => {
            let d = GeneratorDump::read(&dump).with_context(|| format!("reading {}", dump.display()))?;
            let s = d.to_super()?;
            let l = dequantize(s.space(), &s, degree)?.pruned(prune);
            let mut text = String::from("# coeff_re coeff_im q p dq dp\n");
            for t in l.terms() {
                let i = t.index;
                let _ = writeln!(text, "{:.12e} {:.12e} {} {} {} {}", t.coeff.re, t.coeff.im, i.q, i.p, i.dq, i.dp);
            }
            print!("{text}");
            if let Some(dir) = cli.out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("dequantized.txt"), &text)?;
            }
        }
    }
    Ok(())
}
