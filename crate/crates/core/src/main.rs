use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nalgebra::DVector;
use serde_json::json;

use dynsolve::chain::{
    extract_chain_with_diagnostics, parse_urdf_with_diagnostics, validate_chain, ChainError,
};
use dynsolve::dynamics::DynamicsError;
use dynsolve::solver::{SolverConfig, SolverError, SolverRegistry};
use dynsolve::trajectory::{
    check_limits, compare_torques, compute_along_trajectory, emit_report, load_trajectory,
    sinusoid_trajectory, write_trajectory, Report, Sinusoid, TrajectoryError,
};

const INPUT_FORMAT: u8 = 3;
const MODEL_CONFIG: u8 = 4;
const NUMERICAL: u8 = 5;

/// Inverse dynamics of serial manipulators described in URDF.
#[derive(Parser)]
#[command(name = "dynsolve", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a URDF file and report problems; optionally check a root-to-tip chain.
    Validate {
        #[arg(long)]
        urdf: PathBuf,
        #[arg(long, requires = "tip")]
        root: Option<String>,
        #[arg(long, requires = "root")]
        tip: Option<String>,
    },
    /// Print H, C·q̇, g, f and τ at one joint state as JSON.
    Components {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated joint positions.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Comma-separated joint velocities (default zero).
        #[arg(long, allow_hyphen_values = true)]
        qd: Option<String>,
        /// Comma-separated joint accelerations (default zero).
        #[arg(long, allow_hyphen_values = true)]
        qdd: Option<String>,
    },
    /// Compute dynamics along a trajectory file and write a CSV/JSON report.
    Trajectory {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// Report path; `.csv` and `.json` files are written next to it.
        #[arg(long)]
        output: PathBuf,
        /// Estimate accelerations from velocities when the file has none.
        #[arg(long)]
        differentiate: bool,
        /// Fail if any sample leaves the joint position or velocity limits.
        #[arg(long)]
        check_limits: bool,
    },
    /// Write a sinusoidal excitation trajectory.
    GenTraj {
        #[arg(long)]
        dof: usize,
        /// Seconds.
        #[arg(long)]
        duration: f64,
        /// Radians (or metres); one value or one per joint.
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            required = true
        )]
        amplitude: Vec<f64>,
        /// Hz; one value or one per joint.
        #[arg(long, value_delimiter = ',', required = true)]
        frequency: Vec<f64>,
        /// Radians; one value or one per joint.
        #[arg(
            long,
            allow_hyphen_values = true,
            value_delimiter = ',',
            default_value = "0"
        )]
        phase: Vec<f64>,
        /// Samples per second.
        #[arg(long, default_value_t = 100.0)]
        rate: f64,
        #[arg(long)]
        output: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        let code = match e {
            ChainError::Parse { .. } | ChainError::Io { .. } => INPUT_FORMAT,
            _ => MODEL_CONFIG,
        };
        Self::new(code, e.to_string())
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        let code = match e {
            DynamicsError::Dimension { .. } | DynamicsError::NonFinite { .. } => INPUT_FORMAT,
            DynamicsError::Asymmetry { .. } | DynamicsError::SingularInertia => NUMERICAL,
            DynamicsError::InvalidParameter(_) => MODEL_CONFIG,
        };
        Self::new(code, e.to_string())
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Chain(e) => e.into(),
            SolverError::Dynamics(e) => e.into(),
            other => Self::new(MODEL_CONFIG, other.to_string()),
        }
    }
}

impl From<TrajectoryError> for Failure {
    fn from(e: TrajectoryError) -> Self {
        match e {
            TrajectoryError::Solver { sample, source } => {
                let inner = Failure::from(source);
                Self::new(inner.code, format!("sample {sample}: {}", inner.message))
            }
            TrajectoryError::Dynamics(e) => e.into(),
            TrajectoryError::MissingDriveGains => Self::new(MODEL_CONFIG, e.to_string()),
            other => Self::new(INPUT_FORMAT, other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { urdf, root, tip } => validate(urdf, root.zip(tip)),
        Command::Components { config, q, qd, qdd } => {
            components(config, &q, qd.as_deref(), qdd.as_deref())
        }
        Command::Trajectory {
            config,
            input,
            output,
            differentiate,
            check_limits,
        } => trajectory(config, input, output, differentiate, check_limits),
        Command::GenTraj {
            dof,
            duration,
            amplitude,
            frequency,
            phase,
            rate,
            output,
        } => gen_traj(
            dof,
            duration,
            rate,
            Sinusoid {
                amplitude,
                frequency,
                phase,
            },
            output,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn validate(path: PathBuf, chain: Option<(String, String)>) -> Result<(), Failure> {
    let xml = std::fs::read_to_string(&path)
        .map_err(|e| Failure::new(INPUT_FORMAT, format!("cannot read {}: {e}", path.display())))?;
    let (model, mut diagnostics) = parse_urdf_with_diagnostics(&xml)?;
    println!(
        "robot {}: {} links, {} joints, root {}",
        model.name(),
        model.link_count(),
        model.joint_count(),
        model.root_link()
    );
    if let Some((root, tip)) = chain {
        let (chain, extracted) = extract_chain_with_diagnostics(&model, &root, &tip)?;
        diagnostics.extend(extracted);
        diagnostics.extend(validate_chain(&chain));
        let names: Vec<&str> = chain.joints().iter().map(|j| j.name.as_str()).collect();
        println!(
            "chain {root} -> {tip}: {} dof [{}], moving mass {} kg",
            chain.dof(),
            names.join(", "),
            chain.total_mass()
        );
    }
    for d in &diagnostics {
        println!("{d}");
    }
    if diagnostics.iter().any(|d| d.is_error()) {
        return Err(Failure::new(MODEL_CONFIG, "validation failed"));
    }
    Ok(())
}

fn parse_list(name: &str, text: &str) -> Result<DVector<f64>, Failure> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::new(INPUT_FORMAT, format!("--{name}: {e}")))?;
    Ok(DVector::from_vec(values))
}

fn components(
    config: PathBuf,
    q: &str,
    qd: Option<&str>,
    qdd: Option<&str>,
) -> Result<(), Failure> {
    let config = SolverConfig::from_file(&config)?;
    let solver = SolverRegistry::with_builtins().create(&config)?;
    let q = parse_list("q", q)?;
    let zeros = DVector::zeros(q.len());
    let qd = qd
        .map(|s| parse_list("qd", s))
        .transpose()?
        .unwrap_or_else(|| zeros.clone());
    let qdd = qdd
        .map(|s| parse_list("qdd", s))
        .transpose()?
        .unwrap_or(zeros);

    let parts = solver.dynamic_components(&q, &qd)?;
    let friction = solver.friction_vector(&qd)?;
    let torques = solver.torques(&q, &qd, &qdd)?;
    let currents = match solver.joint_currents(&q, &qd, &qdd) {
        Ok(c) => Some(c),
        Err(SolverError::UnsupportedOperation { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let outputs = [&parts.coriolis, &parts.gravity, &friction, &torques];
    if parts
        .inertia
        .iter()
        .chain(outputs.into_iter().flatten())
        .any(|v| !v.is_finite())
    {
        return Err(Failure::new(
            NUMERICAL,
            "dynamics evaluated to non-finite values",
        ));
    }
    let vec = |v: &DVector<f64>| v.iter().copied().collect::<Vec<f64>>();
    let rows: Vec<Vec<f64>> = parts
        .inertia
        .row_iter()
        .map(|r| r.iter().copied().collect())
        .collect();
    let mut out = json!({
        "plugin_name": solver.plugin_name(),
        "dof": solver.dof(),
        "q": vec(&q),
        "qd": vec(&qd),
        "qdd": vec(&qdd),
        "inertia": rows,
        "coriolis": vec(&parts.coriolis),
        "gravity": vec(&parts.gravity),
        "friction": vec(&friction),
        "torques": vec(&torques),
    });
    if let Some(c) = currents {
        out["currents"] = json!(vec(&c));
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("plain data")
    );
    Ok(())
}

fn trajectory(
    config_path: PathBuf,
    input: PathBuf,
    output: PathBuf,
    differentiate: bool,
    limits: bool,
) -> Result<(), Failure> {
    let config = SolverConfig::from_file(&config_path)?;
    let solver = SolverRegistry::with_builtins().create(&config)?;
    let trajectory = load_trajectory(&input, solver.dof(), differentiate)?;
    if limits {
        let violations = check_limits(solver.chain(), &trajectory.samples);
        if !violations.is_empty() {
            for v in &violations {
                eprintln!("{v}");
            }
            return Err(Failure::new(
                INPUT_FORMAT,
                format!("{} joint limit violations", violations.len()),
            ));
        }
    }
    let records = compute_along_trajectory(solver.as_ref(), &trajectory.samples)?;
    if let Some(index) = records.iter().position(|r| {
        [
            &r.torques,
            &r.inertia_diagonal,
            &r.coriolis,
            &r.gravity,
            &r.friction,
        ]
        .into_iter()
        .flatten()
        .any(|v| !v.is_finite())
    }) {
        return Err(Failure::new(
            NUMERICAL,
            format!("sample {index}: dynamics evaluated to non-finite values"),
        ));
    }
    let comparison = if trajectory.has_measurements() {
        Some(compare_torques(
            &records,
            &trajectory,
            config.drive_gains.as_ref(),
        )?)
    } else {
        None
    };
    let report = Report {
        plugin_name: solver.plugin_name(),
        joint_names: solver
            .chain()
            .joints()
            .iter()
            .map(|j| j.name.clone())
            .collect(),
        records: &records,
        comparison: comparison.as_ref(),
        config: config.echo(),
    };
    let (csv, json) = emit_report(&report, &output)?;
    println!("{} samples, plugin {}", records.len(), solver.plugin_name());
    if let Some(c) = &comparison {
        let rms: Vec<String> = c.per_joint_rms.iter().map(|v| format!("{v:.3e}")).collect();
        println!("per-joint rms error [N·m]: {}", rms.join(" "));
    }
    println!("wrote {} and {}", csv.display(), json.display());
    Ok(())
}

fn gen_traj(
    dof: usize,
    duration: f64,
    rate: f64,
    excitation: Sinusoid,
    output: PathBuf,
) -> Result<(), Failure> {
    let trajectory = sinusoid_trajectory(dof, duration, rate, &excitation)?;
    let file = std::fs::File::create(&output).map_err(|e| {
        Failure::new(
            INPUT_FORMAT,
            format!("cannot write {}: {e}", output.display()),
        )
    })?;
    write_trajectory(std::io::BufWriter::new(file), &trajectory)?;
    println!("wrote {} samples to {}", trajectory.len(), output.display());
    Ok(())
}
