//! `cdo`: command-line front end for the chiral-differential-operator toolkit.
//!
//! Every command prints one key-sorted JSON document `{schema, command, params, payload, checks}`.
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on usage or input errors.

mod commands;
mod doc;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use doc::CliError;

#[derive(Parser, Debug)]
#[command(name = "cdo", version, about = "Exact computations with chiral differential operators")]
struct Cli {
    /// Also write the document to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct VertexOpts {
    #[arg(long)]
    pub rank: usize,
    /// Largest conformal weight kept in states.
    #[arg(long, default_value_t = 8)]
    pub max_weight: u32,
    /// Largest total c_0-degree kept in states.
    #[arg(long, default_value_t = 8)]
    pub c0_degree: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// a_(m) v in CDO_n.
    ModeApply {
        #[command(flatten)]
        opts: VertexOpts,
        #[arg(long)]
        state: String,
        #[arg(long, allow_negative_numbers = true)]
        mode: i64,
        #[arg(long)]
        on: String,
    },
    /// Both sides of the Borcherds identity for (a, b, c) at (l, m).
    Borcherds {
        #[command(flatten)]
        opts: VertexOpts,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// rho_W(X) v.
    RhoW {
        #[command(flatten)]
        opts: VertexOpts,
        #[arg(long)]
        x: String,
        #[arg(long)]
        on: String,
        #[arg(long, default_value_t = 8)]
        jet_order: u32,
    },
    /// The MSV defect against s * rho(ch_2(X, Y)) on every basis state up to --max-weight.
    MsvCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 3)]
        max_weight: u32,
        #[arg(long, default_value_t = 4)]
        c0_degree: u32,
        #[arg(long, default_value_t = 8)]
        jet_order: u32,
    },
    /// ch_2^GF(X, Y).
    Ch2 {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 8)]
        jet_order: u32,
    },
    /// c_1^GF(X) and the conformal anomaly of X.
    C1 {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        jet_order: u32,
    },
    /// The Atiyah-class representative of X, an n x n matrix of one-forms.
    Atiyah {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 8)]
        jet_order: u32,
    },
    /// The Polyakov-Wiegmann identity for a pair of automorphism jets.
    PwCheck {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long, default_value_t = 6)]
        jet_order: u32,
    },
    /// The derivative of the lifted group cocycle at the identity against ch_2.
    GmsD1 {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 6)]
        jet_order: u32,
    },
    /// Virasoro axioms with central charge 2n on every basis state up to --max-weight.
    ConformalCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 4)]
        max_weight: u32,
        #[arg(long, default_value_t = 2)]
        c0_degree: u32,
    },
    /// Td ch(Sym) - prod(1-q^k)^{-2n} e^{c_1/2} Wit.
    CharIdentity {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 4)]
        chern_degree: u32,
        #[arg(long, default_value_t = 6)]
        q_order: u32,
    },
    /// log Wit_n = sum_{k>=2} R_{2k}(q) ch_{2k}.
    WittenLog {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        chern_degree: u32,
        #[arg(long, default_value_t = 4)]
        q_order: u32,
    },
    /// exp(log Wit_n) against the Witten class.
    WittenExpCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        chern_degree: u32,
        #[arg(long, default_value_t = 4)]
        q_order: u32,
    },
    /// E_{2k}: the normalized rational q-series and the lattice sum at tau.
    Eisenstein {
        /// The weight 2k.
        #[arg(long)]
        weight: u32,
        /// tau as `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[arg(long, default_value_t = 200)]
        cutoff: u32,
        #[arg(long, default_value_t = 6)]
        q_order: u32,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Numerical checks of the one-loop analytics.
    #[command(subcommand)]
    Feynman(FeynmanCommand),
}

#[derive(Subcommand, Debug)]
enum FeynmanCommand {
    /// The two-vertex wheel along an epsilon schedule against its closed-form limit.
    Wheel2 {
        /// Comma-separated, strictly decreasing.
        #[arg(long, default_value = "0.1,0.05,0.02,0.01")]
        eps_schedule: String,
        #[arg(long, default_value_t = 40)]
        grid: usize,
        /// Bump table: lines `F|G cx cy radius a0 [a1 ...]`.
        #[arg(long)]
        profiles: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        tolerance: f64,
    },
    /// The bare t-integrals at epsilon, closed form and quadrature.
    TLimits {
        #[arg(long)]
        eps: f64,
    },
}

fn dispatch(cli: &Cli) -> Result<doc::Document, CliError> {
    use commands as c;
    match &cli.command {
        Command::ModeApply { opts, state, mode, on } => c::mode_apply(opts, state, *mode, on),
        Command::Borcherds { opts, a, b, c: cc, l, m } => c::borcherds(opts, a, b, cc, *l, *m),
        Command::RhoW { opts, x, on, jet_order } => c::rho_w(opts, x, on, *jet_order),
        Command::MsvCheck { rank, x, y, max_weight, c0_degree, jet_order } => {
            c::msv_check(*rank, x, y, *max_weight, *c0_degree, *jet_order)
        }
        Command::Ch2 { rank, x, y, jet_order } => c::ch2(*rank, x, y, *jet_order),
        Command::C1 { rank, x, jet_order } => c::c1(*rank, x, *jet_order),
        Command::Atiyah { rank, x, jet_order } => c::atiyah(*rank, x, *jet_order),
        Command::PwCheck { f1, f2, jet_order } => c::pw_check(f1, f2, *jet_order),
        Command::GmsD1 { rank, x, y, jet_order } => c::gms_d1(*rank, x, y, *jet_order),
        Command::ConformalCheck { rank, max_weight, c0_degree } => c::conformal_check(*rank, *max_weight, *c0_degree),
        Command::CharIdentity { rank, chern_degree, q_order } => c::char_identity(*rank, *chern_degree, *q_order),
        Command::WittenLog { rank, chern_degree, q_order } => c::witten_log(*rank, *chern_degree, *q_order),
        Command::WittenExpCheck { rank, chern_degree, q_order } => {
            c::witten_exp_check(*rank, *chern_degree, *q_order)
        }
        Command::Eisenstein { weight, tau, cutoff, q_order, tolerance } => {
            c::eisenstein(*weight, tau, *cutoff, *q_order, *tolerance)
        }
        Command::Feynman(FeynmanCommand::Wheel2 { eps_schedule, grid, profiles, tolerance }) => {
            c::wheel2(eps_schedule, *grid, profiles, *tolerance)
        }
        Command::Feynman(FeynmanCommand::TLimits { eps }) => c::t_limits(*eps),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let document = match dispatch(&cli) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let text = document.render();
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    if document.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
