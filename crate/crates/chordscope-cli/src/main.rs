//! Command-line front end: compute Wigner/chord fields, correlation
//! diagnostics, semiclassical sweeps and parity reports, and run the
//! validation suite.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage/parse error,
//! 3 numeric failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use chordscope::correlations::{fourier_invariance_residual, CorrelationEngine};
use chordscope::error::Error;
use chordscope::geometry::{DualGridPair, PhaseVector};
use chordscope::io::{write_field, CorrelateReport};
use chordscope::parity::parity_report;
use chordscope::recipes::{parse_curve, parse_state, CurveRecipe};
use chordscope::semiclassical::{
    ergodic_chi, small_chord_chi, validity_window, EnergyContour, SemiclassicalChi,
};
use chordscope::states::StateRep;
use chordscope::transforms::{chord_of, wigner_of};
use chordscope::validate::{run as run_validation, ValidationConfig};

#[derive(Parser)]
#[command(
    name = "chordscope",
    about = "Phase-space analysis of one-dimensional quantum states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Samples per grid axis (even)
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Half-width of the centre grid per axis
    #[arg(long, default_value_t = 8.0)]
    extent: f64,
    /// Planck constant
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
}

impl GridArgs {
    fn build(&self) -> Result<DualGridPair, Error> {
        DualGridPair::new(self.n, self.extent, self.hbar)
    }
}

#[derive(Args, Clone)]
struct OutArg {
    /// Output path (stdout when omitted)
    #[arg(short, long)]
    out: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the Wigner function of a state and write the field CSV
    Wigner {
        /// State recipe, e.g. coherent:p=0,q=2 | fock:n=3 |
        /// cat:p=0,q=2,sign=+ | superpose:terms.json
        #[arg(long)]
        state: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Compute the chord (characteristic) function of a state
    Chord {
        #[arg(long)]
        state: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Correlation field CSV plus a JSON diagnostics report
    Correlate {
        #[arg(long)]
        state: String,
        /// Only run the named check (`fourier-invariance`) and emit its
        /// residual as JSON
        #[arg(long)]
        check: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Semiclassical chord function on a convex curve (or energy shell)
    Semiclassical {
        /// Curve recipe: circle:I=50.5 | ellipse:a=1,b=2,I=3 |
        /// quartic:E=1 | curve:samples.json
        #[arg(long)]
        curve: String,
        /// Print the overlap window of the two approximations as JSON
        #[arg(long)]
        window: bool,
        /// Sweep direction `p,q` (chord lengths run over the window)
        #[arg(long)]
        sweep_dir: Option<String>,
        /// Number of sweep samples
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Include the exact quantized-circle chord function in the sweep
        /// (`exact`; circle curves with half-integer action only)
        #[arg(long)]
        compare: Option<String>,
        /// Evaluate at a single chord `p,q` and emit JSON
        #[arg(long)]
        xi: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        hbar: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Parity weights and reality defect about a centre
    Parity {
        #[arg(long)]
        state: String,
        /// Reflection centre `p,q`
        #[arg(long, default_value = "0,0")]
        centre: String,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the validation suite; exit 0 only if every criterion passes
    Validate {
        /// Run only criteria whose name contains this substring
        #[arg(long)]
        filter: Option<String>,
        /// Self-test knob: scale the symplectic-Fourier normalization; any
        /// value other than 1 must make the suite fail
        #[arg(long, default_value_t = 1.0)]
        perturb_fourier: f64,
    },
}

fn parse_pair(text: &str) -> Result<PhaseVector, Error> {
    let (p, q) = text
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected p,q — got `{text}`")))?;
    let p: f64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad number `{p}`")))?;
    let q: f64 = q.trim().parse().map_err(|_| Error::Parse(format!("bad number `{q}`")))?;
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::Parse("components must be finite".into()));
    }
    Ok(PhaseVector::new(p, q))
}

fn open_out(out: &OutArg) -> Result<Box<dyn Write>, Error> {
    Ok(match &out.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn build_state(spec: &str, grid: &DualGridPair) -> Result<StateRep, Error> {
    parse_state(spec)?.build(grid)
}

fn cmd_wigner(state: &str, grid: &GridArgs, out: &OutArg) -> Result<(), Error> {
    let pair = grid.build()?;
    let state = build_state(state, &pair)?;
    let field = wigner_of(&state, &pair)?;
    write_field(field.field(), &mut *open_out(out)?)
}

fn cmd_chord(state: &str, grid: &GridArgs, out: &OutArg) -> Result<(), Error> {
    let pair = grid.build()?;
    let state = build_state(state, &pair)?;
    let field = chord_of(&state, &pair)?;
    write_field(field.field(), &mut *open_out(out)?)
}

fn cmd_correlate(
    state_spec: &str,
    check: Option<&str>,
    grid: &GridArgs,
    out: &OutArg,
) -> Result<(), Error> {
    // the invariance check compares |χ|² with its own transform pointwise,
    // which needs the self-dual lattice
    let self_dual = DualGridPair::self_dual(grid.n, grid.hbar)?;
    let state_sd = build_state(state_spec, &self_dual)?;
    let residual = fourier_invariance_residual(&chord_of(&state_sd, &self_dual)?);

    let mut w = open_out(out)?;
    if let Some(name) = check {
        if name != "fourier-invariance" {
            return Err(Error::Parse(format!("unknown check `{name}`")));
        }
        writeln!(w, "{}", serde_json::json!({ "residual": residual }))?;
        return Ok(());
    }

    let pair = grid.build()?;
    let state = build_state(state_spec, &pair)?;
    let engine = CorrelationEngine::new(&state, &pair)?;
    let mut max_delta: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let xi = PhaseVector::new(
                -1.5 + a as f64,
                -1.5 + b as f64,
            );
            max_delta = max_delta.max(engine.translation_correlation(xi).max_spread());
        }
    }
    let report = CorrelateReport {
        purity: engine.purity(),
        fourier_invariance_residual: residual,
        route_agreement_max_delta: max_delta,
    };
    writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?;

    let field = engine.correlation_field();
    writeln!(w, "# space=chord")?;
    writeln!(w, "# hbar={:.16e}", field.hbar())?;
    writeln!(w, "# n={}", field.n())?;
    writeln!(w, "# extent={:.16e}", field.extent())?;
    writeln!(w, "i,j,x1,x2,re,im")?;
    let n = field.n();
    let o = n / 2;
    for i in 0..n {
        for j in 0..n {
            let p = (i as f64 - o as f64) * field.spacing();
            let q = (j as f64 - o as f64) * field.spacing();
            writeln!(
                w,
                "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}",
                p, q, field.values()[(i, j)], 0.0
            )?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_semiclassical(
    curve_spec: &str,
    window: bool,
    sweep_dir: Option<&str>,
    samples: usize,
    compare: Option<&str>,
    xi: Option<&str>,
    hbar: f64,
    out: &OutArg,
) -> Result<(), Error> {
    let recipe = parse_curve(curve_spec)?;
    let mut w = open_out(out)?;

    // the quartic energy shell goes through the microcanonical average
    if let CurveRecipe::Quartic { energy } = recipe {
        let ham = |x: PhaseVector| 0.5 * x.p * x.p + 0.25 * x.q.powi(4);
        let grad = |x: PhaseVector| PhaseVector::new(x.p, x.q.powi(3));
        let xi = parse_pair(xi.ok_or_else(|| {
            Error::Parse("quartic shells need --xi p,q".into())
        })?)?;
        let value = ergodic_chi(
            &ham,
            Some(&grad),
            energy,
            xi,
            hbar,
            &EnergyContour::Radial { n_theta: 4096 },
        )?;
        writeln!(w, "{}", serde_json::json!({ "re": value.re, "im": value.im }))?;
        return Ok(());
    }

    let curve = recipe.build()?.expect("non-quartic curves have a parametrization");
    let dir = match sweep_dir {
        Some(text) => {
            let v = parse_pair(text)?;
            if v.norm() == 0.0 {
                return Err(Error::Parse("sweep direction must be nonzero".into()));
            }
            v.scale(1.0 / v.norm())
        }
        None => PhaseVector::new(0.0, 1.0),
    };
    let (w_lo, w_hi) = validity_window(curve.as_ref(), dir, hbar)?;
    if window {
        writeln!(w, "{}", serde_json::json!({ "xi_min": w_lo, "xi_max": w_hi }))?;
        return Ok(());
    }

    let engine = SemiclassicalChi::new(curve.as_ref(), hbar, dir)?;
    if let Some(text) = xi {
        let xi = parse_pair(text)?;
        let small = small_chord_chi(curve.as_ref(), xi, hbar);
        let sc = engine.evaluate(xi)?;
        writeln!(
            w,
            "{}",
            serde_json::json!({
                "small_chord": { "re": small.re, "im": small.im },
                "stationary_phase": { "re": sc.value.re, "im": sc.value.im },
                "caustic": sc.caustic,
            })
        )?;
        return Ok(());
    }

    // sweep over the window (slightly past it on both sides for context)
    let fock_level = match (compare, recipe) {
        (Some("exact"), CurveRecipe::Circle { action }) => {
            let level = action / hbar - 0.5;
            if (level - level.round()).abs() < 1e-9 && level >= 0.0 {
                Some(level.round() as usize)
            } else {
                return Err(Error::Parse(
                    "--compare exact needs a circle with half-integer action/ħ".into(),
                ));
            }
        }
        (Some("exact"), _) => {
            return Err(Error::Parse("--compare exact applies to circle curves".into()))
        }
        (Some(other), _) => {
            return Err(Error::Parse(format!("unknown --compare mode `{other}`")))
        }
        (None, _) => None,
    };
    writeln!(w, "# curve={curve_spec}")?;
    writeln!(w, "# hbar={hbar:.16e}")?;
    writeln!(w, "# window={w_lo:.16e},{w_hi:.16e}")?;
    match fock_level {
        Some(n) => writeln!(
            w,
            "xi_len,exact_re,small_re,small_im,stationary_re,stationary_im,caustic"
        )
        .map(|_| n),
        None => writeln!(w, "xi_len,small_re,small_im,stationary_re,stationary_im,caustic")
            .map(|_| 0),
    }?;
    let lo = 0.5 * w_lo;
    let hi = 1.05 * w_hi;
    for k in 0..samples.max(2) {
        let len = lo + (hi - lo) * k as f64 / (samples.max(2) - 1) as f64;
        let xi = dir.scale(len);
        let small = small_chord_chi(curve.as_ref(), xi, hbar);
        let sc = engine.evaluate(xi)?;
        if let Some(n) = fock_level {
            let exact = chordscope::analytic::exact_chord(
                chordscope::analytic::FamilySpec::Fock { n },
                xi,
                hbar,
            )?;
            writeln!(
                w,
                "{len:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                exact.re, small.re, small.im, sc.value.re, sc.value.im, sc.caustic as u8
            )?;
        } else {
            writeln!(
                w,
                "{len:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}",
                small.re, small.im, sc.value.re, sc.value.im, sc.caustic as u8
            )?;
        }
    }
    Ok(())
}

fn cmd_parity(
    state_spec: &str,
    centre: &str,
    grid: &GridArgs,
    out: &OutArg,
) -> Result<(), Error> {
    let pair = grid.build()?;
    let state = build_state(state_spec, &pair)?;
    let centre = parse_pair(centre)?;
    let report = parity_report(&state, centre)?;
    writeln!(open_out(out)?, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(())
}

fn cmd_validate(filter: Option<String>, perturb_fourier: f64) -> ExitCode {
    let config = ValidationConfig { fourier_scale: perturb_fourier, filter };
    let reports = run_validation(&config);
    if reports.is_empty() {
        eprintln!("no criteria matched the filter");
        return ExitCode::from(2);
    }
    let mut all_passed = true;
    for r in &reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("[{status}] {:2}. {:<28} {:>7.2}s  {}", r.id, r.name, r.seconds, r.detail);
        all_passed &= r.passed;
    }
    if all_passed {
        println!("all {} criteria passed", reports.len());
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse(_) | Error::Io(_) | Error::Json(_) => 2,
        _ => 3,
    }
}

fn main() -> ExitCode {
    if let Ok(text) = std::env::var("CHORDSCOPE_THREADS") {
        match text.trim().parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("error: CHORDSCOPE_THREADS must be an integer >= 1, got `{text}`");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Wigner { state, grid, out } => cmd_wigner(state, grid, out),
        Command::Chord { state, grid, out } => cmd_chord(state, grid, out),
        Command::Correlate { state, check, grid, out } => {
            cmd_correlate(state, check.as_deref(), grid, out)
        }
        Command::Semiclassical { curve, window, sweep_dir, samples, compare, xi, hbar, out } => {
            cmd_semiclassical(
                curve,
                *window,
                sweep_dir.as_deref(),
                *samples,
                compare.as_deref(),
                xi.as_deref(),
                *hbar,
                out,
            )
        }
        Command::Parity { state, centre, grid, out } => cmd_parity(state, centre, grid, out),
        Command::Validate { filter, perturb_fourier } => {
            return cmd_validate(filter.clone(), *perturb_fourier)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
