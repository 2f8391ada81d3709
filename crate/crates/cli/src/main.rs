//! `bowcalc`: command-line front end for `bowcalc-core`.
//!
//! Exit codes: 0 when everything certified, 2 on a certification failure,
//! 3 on an input error, 1 on any other error.

mod commands;
mod config;

use std::process::ExitCode;

use bowcalc_core::bowcore::BraneDiagram;
use bowcalc_core::verify::{Frame, HbarSwap, Pinning};
use bowcalc_core::Error;
use clap::{Parser, Subcommand, ValueEnum};

use commands::Outcome;
use config::{GlobalArgs, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "bowcalc", version, about = "Stable envelopes on type-A bow varieties and their mirror-symmetry identities")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HbarArg {
    On,
    Off,
    Auto,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FrameArg {
    Variety,
    Mirror,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PinningArg {
    Ascending,
    Descending,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a brane diagram ("/1/3/4/5\3\1\" or "r=1,1,2,1;c=2,2,1").
    Parse { diagram: String },
    /// List the fixed points with IDs, margins, crossings and mirror IDs.
    FixedPoints { diagram: String },
    /// Compute W for one fixed point.
    Stab {
        diagram: String,
        id: usize,
        /// Also restrict to this fixed point.
        #[arg(long)]
        restrict_at: Option<usize>,
    },
    /// Restrict W(f) to the fixed point g.
    Restrict { diagram: String, f: usize, g: usize },
    /// Check the diagonal and support axioms and print the induced order.
    VerifyAxioms { diagram: String },
    /// Build and certify the mirror-symmetry identity of a pair.
    MirrorIdentity {
        diagram: String,
        f: usize,
        g: usize,
        /// Whether the identification inverts hbar.
        #[arg(long, value_enum, default_value_t = HbarArg::Auto)]
        hbar: HbarArg,
        /// Variables in which the identity is printed.
        #[arg(long, value_enum, default_value_t = FrameArg::Mirror)]
        frame: FrameArg,
    },
    /// Elliptic to K-theoretic and K-theoretic to cohomological limits.
    Limits {
        diagram: String,
        /// Which ratio of Kähler parameters is pinned.
        #[arg(long, value_enum, default_value_t = PinningArg::Ascending)]
        pinning: PinningArg,
    },
    /// Check the wheel conditions and symmetry of W~ for one fixed point.
    WheelCheck { diagram: String, id: usize },
    /// Tabulate identity shapes over small varieties.
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 6)]
        max_boxes: usize,
        #[arg(long, default_value_t = 12)]
        max_fixed_points: usize,
    },
}

fn run(cli: &Cli) -> bowcalc_core::Result<(Outcome, RunConfig)> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let diagram = |s: &str| BraneDiagram::parse(s);
    let out = match &cli.command {
        Command::Parse { diagram: s } => commands::parse(&diagram(s)?)?,
        Command::FixedPoints { diagram: s } => commands::fixed_points(&diagram(s)?)?,
        Command::Stab { diagram: s, id, restrict_at } => commands::stab(&diagram(s)?, *id, *restrict_at, &cfg)?,
        Command::Restrict { diagram: s, f, g } => commands::restrict(&diagram(s)?, *f, *g, &cfg)?,
        Command::VerifyAxioms { diagram: s } => commands::verify_axioms(&diagram(s)?, &cfg)?,
        Command::MirrorIdentity { diagram: s, f, g, hbar, frame } => {
            let hbar = match hbar {
                HbarArg::On => HbarSwap::On,
                HbarArg::Off => HbarSwap::Off,
                HbarArg::Auto => HbarSwap::Auto,
            };
            let frame = match frame {
                FrameArg::Variety => Frame::Variety,
                FrameArg::Mirror => Frame::Mirror,
            };
            commands::mirror_identity(&diagram(s)?, *f, *g, hbar, frame, &cfg)?
        }
        Command::Limits { diagram: s, pinning } => {
            let pinning = match pinning {
                PinningArg::Ascending => Pinning::Ascending,
                PinningArg::Descending => Pinning::Descending,
            };
            commands::limits(&diagram(s)?, pinning, &cfg)?
        }
        Command::WheelCheck { diagram: s, id } => commands::wheel(&diagram(s)?, *id, &cfg)?,
        Command::Sweep { max_m, max_n, max_boxes, max_fixed_points } => commands::sweep_cmd(*max_m, *max_n, *max_boxes, *max_fixed_points, &cfg)?,
    };
    Ok((out, cfg))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, cfg)) => {
            let body = match out.render(cfg.format) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(3);
                }
            };
            let written = match &cfg.out {
                Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
            ExitCode::from(if out.pass { 0 } else { 2 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::Input(_) => 3,
                _ => 1,
            })
        }
    }
}
