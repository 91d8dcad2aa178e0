// `!(x > 0.0)` style checks are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pipetrack_core::features::{extract_features, object_mask, FeatureVector};
use pipetrack_core::fis::{parse_controller, FuzzyController};
use pipetrack_core::imgproc::pnm::{encode_binary_pgm, encode_pgm, read_pgm};
use pipetrack_core::sim::{
    mission_report, render_view, run_mission, shift_input_centers, tune, Mode, PathRecord,
    Scenario, SimError,
};

mod plot;

#[derive(Parser)]
#[command(name = "pipetrack", version, about = "Vision-based fuzzy pipeline tracking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Setup {
    /// Scenario file; the built-in default scenario when omitted.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Rule file, overriding the scenario's rulebase.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Overrides the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Drift tolerance in cm.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fly a mission and write the path record as CSV.
    Run {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write an SVG path plot.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long, default_value = "sequential")]
        mode: Mode,
    },
    /// Print the six features of every band.
    Features {
        #[command(flatten)]
        setup: Setup,
        /// Binary PGM image; the start view of the scenario when omitted.
        #[arg(long)]
        image: Option<PathBuf>,
    },
    /// Evaluate the controller on one feature vector and trace every rule.
    Infer {
        #[arg(long)]
        rules: Option<PathBuf>,
        /// x1 x2 x3 x4 x5 x6
        #[arg(num_args = 6, allow_negative_numbers = true, required = true)]
        values: Vec<f64>,
    },
    /// Tune membership parameters against one or more scenarios.
    Tune {
        /// Scenario files; the built-in default scenario when none given.
        #[arg(long)]
        scenario: Vec<PathBuf>,
        /// Initial rule file.
        #[arg(long)]
        rules: Option<PathBuf>,
        /// Shift every input term center by this much before tuning.
        #[arg(long)]
        detune: Option<f64>,
        #[arg(long, default_value_t = 500)]
        budget: usize,
        /// Where to write the tuned rule file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the camera view at the scenario's start pose as PGM.
    Render {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        out: PathBuf,
        /// Also write the segmented object mask.
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Turn a path record CSV into an SVG plot.
    Plot {
        csv: PathBuf,
        /// Scenario supplying the envelope and pipeline.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    /// Mission failed or drifted out of tolerance.
    Mission(String),
    /// Bad arguments, files or configuration.
    Usage(String),
}

impl Failure {
    fn from_sim(e: SimError) -> Self {
        if e.is_mission_failure() {
            Failure::Mission(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> Outcome {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => match std::io::stdout().write_all(bytes) {
            // reader went away, as with `| head`
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(|e| usage(format!("stdout: {e}"))),
        },
    }
}

fn load_rules(path: &Path) -> Result<FuzzyController, Failure> {
    parse_controller(&read_text(path)?).map_err(|e| usage(format!("{}:{e}", path.display())))
}

fn load_scenario(path: Option<&Path>) -> Result<Scenario, Failure> {
    match path {
        Some(p) => Scenario::load(p).map_err(usage),
        None => Ok(Scenario::default()),
    }
}

impl Setup {
    fn load(&self) -> Result<(Scenario, FuzzyController), Failure> {
        let mut s = load_scenario(self.scenario.as_deref())?;
        if let Some(seed) = self.seed {
            s.world.seed = seed;
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0) {
                return Err(usage(format!("tolerance {t} must be positive")));
            }
            s.tolerance = t;
        }
        let controller = match &self.rules {
            Some(p) => load_rules(p)?,
            None => s.load_controller().map_err(usage)?,
        };
        Ok((s, controller))
    }
}

fn cmd_run(setup: &Setup, out: Option<&Path>, plot_path: Option<&Path>, mode: Mode) -> Outcome {
    let (scenario, controller) = setup.load()?;
    let record = match mode {
        Mode::Sequential => {
            let report = mission_report(&scenario, &controller);
            if let Some(e) = report.failure {
                // keep what was flown for inspection
                if !report.record.points.is_empty() {
                    if let Some(p) = out {
                        write_out(Some(p), report.record.to_csv().as_bytes())?;
                    }
                }
                return Err(Failure::from_sim(e));
            }
            report.record
        }
        Mode::Overlapped => run_mission(&scenario, &controller, mode).map_err(Failure::from_sim)?,
    };
    let csv = record.to_csv();
    write_out(out, csv.as_bytes())?;
    if let Some(p) = plot_path {
        let rounded = PathRecord::from_csv(&csv, record.tolerance).map_err(usage)?;
        write_out(Some(p), plot::render_svg(&scenario.world, &rounded).as_bytes())?;
    }
    if record.within_tolerance() {
        Ok(())
    } else {
        Err(Failure::Mission(format!(
            "drift {:.1} cm exceeds the {:.1} cm tolerance",
            record.max_abs_drift(),
            record.tolerance
        )))
    }
}

fn print_features(features: &[FeatureVector]) -> Outcome {
    let mut out = String::from("band      x1      x2      x3      x4      x5      x6\n");
    for f in features {
        let v = f.values;
        let _ = writeln!(
            out,
            "{:>4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4} {:>7.4}",
            f.band_index, v[0], v[1], v[2], v[3], v[4], v[5]
        );
    }
    write_out(None, out.as_bytes())
}

fn cmd_features(setup: &Setup, image: Option<&Path>) -> Outcome {
    let (scenario, _) = setup.load()?;
    let img = match image {
        Some(p) => read_pgm(p).map_err(|e| usage(format!("{}: {e}", p.display())))?,
        None => render_view(&scenario.world, &scenario.start, &scenario.camera, 0),
    };
    let features = extract_features(&img, scenario.threshold, scenario.min_area)
        .map_err(|e| Failure::Mission(e.to_string()))?;
    print_features(&features)
}

fn cmd_infer(rules: Option<&Path>, values: &[f64]) -> Outcome {
    let controller = match rules {
        Some(p) => load_rules(p)?,
        None => FuzzyController::default(),
    };
    let mut x = [0.0; 6];
    x.copy_from_slice(values);
    let fv = FeatureVector::new(0, x);
    let result = controller.infer(&fv).map_err(usage)?;
    let mut out = String::new();
    for (i, (rule, alpha)) in controller
        .rules
        .rules()
        .iter()
        .zip(&result.firing_strengths)
        .enumerate()
    {
        let _ = writeln!(
            out,
            "{:>2}  alpha={alpha:.6}  center={:>7.3}  {rule}",
            i + 1,
            controller.terms.output(rule.consequent()).center()
        );
    }
    if result.no_fire {
        out.push_str("no rule fired\n");
    }
    let _ = writeln!(out, "y1 = {:.3}", result.output);
    write_out(None, out.as_bytes())
}

fn cmd_tune(
    scenarios: &[PathBuf],
    rules: Option<&Path>,
    detune: Option<f64>,
    budget: usize,
    out: Option<&Path>,
) -> Outcome {
    let suite = if scenarios.is_empty() {
        vec![Scenario::default()]
    } else {
        scenarios
            .iter()
            .map(|p| load_scenario(Some(p)))
            .collect::<Result<_, _>>()?
    };
    let init = match rules {
        Some(p) => load_rules(p)?,
        None => FuzzyController::default(),
    };
    if budget == 0 {
        return Err(usage("budget must be at least 1"));
    }
    let terms = match detune {
        Some(d) => shift_input_centers(&init.terms, d),
        None => init.terms.clone(),
    };
    let result = tune(&suite, &init.rules, &terms, budget);
    eprintln!(
        "objective: max |drift| {:.3} -> {:.3}, mean |drift| {:.3} -> {:.3} ({} evaluations)",
        result.initial.max_abs_drift,
        result.best.max_abs_drift,
        result.initial.mean_abs_drift,
        result.best.mean_abs_drift,
        result.evaluations
    );
    let tuned = FuzzyController::new(init.rules, result.terms);
    write_out(out, tuned.to_dsl().as_bytes())
}

fn cmd_render(setup: &Setup, out: &Path, mask: Option<&Path>) -> Outcome {
    let (scenario, _) = setup.load()?;
    let img = render_view(&scenario.world, &scenario.start, &scenario.camera, 0);
    write_out(Some(out), &encode_pgm(&img))?;
    if let Some(p) = mask {
        let obj = object_mask(&img, scenario.threshold, scenario.min_area)
            .map_err(|e| Failure::Mission(e.to_string()))?;
        write_out(Some(p), &encode_binary_pgm(&obj))?;
    }
    Ok(())
}

fn cmd_plot(
    csv: &Path,
    scenario: Option<&Path>,
    tolerance: Option<f64>,
    out: Option<&Path>,
) -> Outcome {
    let s = load_scenario(scenario)?;
    let tol = tolerance.unwrap_or(s.tolerance);
    if !(tol > 0.0) {
        return Err(usage(format!("tolerance {tol} must be positive")));
    }
    let record = PathRecord::from_csv(&read_text(csv)?, tol)
        .map_err(|e| usage(format!("{}:{e}", csv.display())))?;
    write_out(out, plot::render_svg(&s.world, &record).as_bytes())
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Run {
            setup,
            out,
            plot,
            mode,
        } => cmd_run(&setup, out.as_deref(), plot.as_deref(), mode),
        Command::Features { setup, image } => cmd_features(&setup, image.as_deref()),
        Command::Infer { rules, values } => cmd_infer(rules.as_deref(), &values),
        Command::Tune {
            scenario,
            rules,
            detune,
            budget,
            out,
        } => cmd_tune(&scenario, rules.as_deref(), detune, budget, out.as_deref()),
        Command::Render { setup, out, mask } => cmd_render(&setup, &out, mask.as_deref()),
        Command::Plot {
            csv,
            scenario,
            tolerance,
            out,
        } => cmd_plot(&csv, scenario.as_deref(), tolerance, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mission(m)) => {
            eprintln!("pipetrack: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("pipetrack: {m}");
            ExitCode::from(2)
        }
    }
}
