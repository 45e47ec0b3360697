//! `pencil`: coaxal pencils, circle maps and Poncelet polygons from the
//! command line. Reports go to stdout as JSON, diagnostics to stderr.

mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "pencil",
    version,
    about = "Coaxal pencils and Poncelet polygons"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EllFn {
    #[value(name = "F")]
    F,
    #[value(name = "am")]
    Am,
    #[value(name = "sn")]
    Sn,
    #[value(name = "cn")]
    Cn,
    #[value(name = "dn")]
    Dn,
    #[value(name = "K")]
    K,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate F, am, sn, cn, dn or K.
    #[command(allow_negative_numbers = true)]
    Ell {
        #[arg(long = "fn", value_enum)]
        function: EllFn,
        #[arg(long)]
        k: f64,
        /// Amplitude, for F.
        #[arg(long, conflicts_with = "u")]
        theta: Option<f64>,
        /// Argument of am, sn, cn and dn.
        #[arg(long)]
        u: Option<f64>,
    },
    /// Build a pencil from its limit point or from a pair of nested circles.
    #[command(allow_negative_numbers = true)]
    Pencil {
        #[arg(long, conflicts_with_all = ["outer", "inner"])]
        limit_point: Option<f64>,
        /// Outer circle as "cx,cy,r".
        #[arg(long, requires = "inner", allow_hyphen_values = true)]
        outer: Option<String>,
        /// Inner circle as "cx,cy,r".
        #[arg(long, requires = "outer", allow_hyphen_values = true)]
        inner: Option<String>,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Apply a tangent map to a point of the unit circle. `--k 1` selects
    /// the tangent pencil.
    #[command(allow_negative_numbers = true)]
    Map {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long)]
        conjugate: bool,
    },
    /// Construct the closed n-gon whose sides touch C_{2hK/n}.
    #[command(allow_negative_numbers = true)]
    Ngon {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        #[arg(long, default_value_t = 0.0)]
        start_theta: f64,
        #[arg(long)]
        diagonals: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check closure for every admissible (n, h) up to `--n-max`.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long)]
        k: f64,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Random starts per row, in addition to the fixed edge starts.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Draw a pencil, optionally with a polygon and a conjugate circle.
    #[command(allow_negative_numbers = true)]
    Render {
        #[arg(long)]
        k: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, requires = "h")]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        h: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        start_theta: f64,
        /// Number of pencil members drawn.
        #[arg(long, default_value_t = 6)]
        circles: u32,
        /// Angle of a conjugated map whose tangency circle is drawn.
        #[arg(long)]
        conjugate_alpha: Option<f64>,
        #[arg(long, default_value_t = 800)]
        size: u32,
        #[arg(long)]
        no_pencil: bool,
        #[arg(long)]
        no_radical_axis: bool,
        #[arg(long)]
        no_limit_points: bool,
        #[arg(long)]
        no_diagonals: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ell {
            function,
            k,
            theta,
            u,
        } => commands::ell(function, k, theta, u),
        Command::Pencil {
            limit_point,
            outer,
            inner,
            n_max,
            tol,
        } => commands::pencil(limit_point, outer.as_deref(), inner.as_deref(), n_max, tol),
        Command::Map {
            k,
            alpha,
            theta,
            conjugate,
        } => commands::map(k, alpha, theta, conjugate),
        Command::Ngon {
            k,
            n,
            h,
            start_theta,
            diagonals,
            svg,
        } => commands::ngon(k, n, h, start_theta, diagonals, svg),
        Command::Scan {
            k,
            n_max,
            tol,
            samples,
            seed,
        } => commands::scan(k, n_max, tol, samples, seed),
        Command::Render {
            k,
            out,
            n,
            h,
            start_theta,
            circles,
            conjugate_alpha,
            size,
            no_pencil,
            no_radical_axis,
            no_limit_points,
            no_diagonals,
        } => {
            let mut spec = svg::RenderSpec::new(out);
            spec.size = size;
            spec.show_pencil = !no_pencil;
            spec.show_radical_axis = !no_radical_axis;
            spec.show_limit_points = !no_limit_points;
            spec.show_diagonals = !no_diagonals;
            let polygon = n.zip(h);
            commands::render(k, polygon, start_theta, circles, conjugate_alpha, spec)
        }
    };
    match result {
        Ok(json) => {
            println!("{json}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code())
        }
    }
}
