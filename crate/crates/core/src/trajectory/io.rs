use std::io::Write;
use std::path::Path;

use nalgebra::DVector;

use super::{MeasuredUnits, Trajectory, TrajectoryError, TrajectorySample};

/// Reads a trajectory CSV file for a chain with `dof` joints.
///
/// The header is `t,q0..,qd0..` followed by optional `qdd0..` and `tau0..`
/// blocks. Without accelerations, `differentiate` estimates them from the
/// velocities by central differences.
pub fn load_trajectory(
    path: &Path,
    dof: usize,
    differentiate: bool,
) -> Result<Trajectory, TrajectoryError> {
    let text = std::fs::read_to_string(path).map_err(|source| TrajectoryError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_trajectory(&text, dof, differentiate)
}

/// Parses trajectory CSV text; see [`load_trajectory`]. Row numbers in errors
/// count data rows from 1.
pub fn parse_trajectory(
    text: &str,
    dof: usize,
    differentiate: bool,
) -> Result<Trajectory, TrajectoryError> {
    let units = units_directive(text)?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| TrajectoryError::Header(e.to_string()))?
        .clone();
    let layout = Layout::from_header(&header, dof)?;
    if !layout.accelerations && !differentiate {
        return Err(TrajectoryError::MissingAccelerations);
    }

    let mut samples: Vec<TrajectorySample> = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1;
        let record = record.map_err(|e| TrajectoryError::Format {
            row,
            message: e.to_string(),
        })?;
        if record.len() != header.len() {
            return Err(TrajectoryError::Format {
                row,
                message: format!("{} fields, expected {}", record.len(), header.len()),
            });
        }
        let values = record
            .iter()
            .zip(header.iter())
            .map(|(field, name)| parse_number(field, name, row))
            .collect::<Result<Vec<f64>, _>>()?;
        let t = values[0];
        if let Some(previous) = samples.last() {
            if t <= previous.t {
                return Err(TrajectoryError::NonMonotonicTime { row });
            }
        }
        let block = |k: usize| DVector::from_column_slice(&values[1 + k * dof..1 + (k + 1) * dof]);
        samples.push(TrajectorySample {
            t,
            q: block(0),
            qd: block(1),
            qdd: if layout.accelerations {
                block(2)
            } else {
                DVector::zeros(dof)
            },
            measured: layout
                .measured
                .then(|| block(if layout.accelerations { 3 } else { 2 })),
        });
    }
    if samples.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    if !layout.accelerations {
        differentiate_velocities(&mut samples)?;
    }
    Ok(Trajectory {
        dof,
        units,
        samples,
    })
}

/// Writes a trajectory in the format read by [`parse_trajectory`], always
/// including accelerations.
pub fn write_trajectory<W: Write>(
    writer: W,
    trajectory: &Trajectory,
) -> Result<(), TrajectoryError> {
    let io_err = |e: csv::Error| TrajectoryError::Io {
        path: "trajectory output".into(),
        source: e.into(),
    };
    let mut writer = writer;
    if trajectory.units == MeasuredUnits::Current {
        writeln!(writer, "# units=current").map_err(|source| TrajectoryError::Io {
            path: "trajectory output".into(),
            source,
        })?;
    }
    let dof = trajectory.dof;
    let measured = trajectory.has_measurements();
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["t".to_string()];
    for prefix in ["q", "qd", "qdd"] {
        header.extend((0..dof).map(|j| format!("{prefix}{j}")));
    }
    if measured {
        header.extend((0..dof).map(|j| format!("tau{j}")));
    }
    out.write_record(&header).map_err(io_err)?;
    for sample in &trajectory.samples {
        let mut row = vec![sample.t.to_string()];
        for v in [&sample.q, &sample.qd, &sample.qdd] {
            row.extend(v.iter().map(f64::to_string));
        }
        if let (true, Some(m)) = (measured, &sample.measured) {
            row.extend(m.iter().map(f64::to_string));
        }
        out.write_record(&row).map_err(io_err)?;
    }
    out.flush().map_err(|source| TrajectoryError::Io {
        path: "trajectory output".into(),
        source,
    })
}

struct Layout {
    accelerations: bool,
    measured: bool,
}

impl Layout {
    fn from_header(header: &csv::StringRecord, dof: usize) -> Result<Self, TrajectoryError> {
        let names: Vec<&str> = header.iter().collect();
        if names.first() != Some(&"t") {
            return Err(TrajectoryError::Header("first column must be 't'".into()));
        }
        let found = names.iter().filter(|n| indexed(n, "q").is_some()).count();
        if found != dof {
            return Err(TrajectoryError::Dimension {
                expected: dof,
                found,
            });
        }
        let block = |prefix: &str| (0..dof).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>();
        let mut expected: Vec<String> = vec!["t".into()];
        expected.extend(block("q"));
        expected.extend(block("qd"));
        let base = expected.len();
        let rest = &names[base.min(names.len())..];
        let matches = |blocks: &[&str]| {
            let want: Vec<String> = blocks.iter().flat_map(|b| block(b)).collect();
            rest.len() == want.len() && rest.iter().zip(&want).all(|(a, b)| *a == b)
        };
        let prefix_ok =
            names.len() >= base && names[..base].iter().zip(&expected).all(|(a, b)| *a == b);
        let layout = if !prefix_ok {
            None
        } else if matches(&[]) {
            Some((false, false))
        } else if matches(&["qdd"]) {
            Some((true, false))
        } else if matches(&["tau"]) {
            Some((false, true))
        } else if matches(&["qdd", "tau"]) {
            Some((true, true))
        } else {
            None
        };
        let (accelerations, measured) = layout.ok_or_else(|| {
            TrajectoryError::Header(format!(
                "expected t, q0..q{n}, qd0..qd{n}, optional qdd0..qdd{n} and tau0..tau{n}; found {}",
                names.join(","),
                n = dof.saturating_sub(1)
            ))
        })?;
        Ok(Self {
            accelerations,
            measured,
        })
    }
}

fn indexed(name: &str, prefix: &str) -> Option<usize> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn parse_number(field: &str, column: &str, row: usize) -> Result<f64, TrajectoryError> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(TrajectoryError::Format {
            row,
            message: format!("column {column}: '{field}' is not a finite number"),
        }),
    }
}

fn units_directive(text: &str) -> Result<MeasuredUnits, TrajectoryError> {
    let mut units = None;
    for line in text.lines() {
        let Some(comment) = line.trim_start().strip_prefix('#') else {
            continue;
        };
        let Some((key, value)) = comment.split_once('=') else {
            continue;
        };
        if key.trim() != "units" {
            continue;
        }
        let parsed: MeasuredUnits = value.trim().parse().map_err(TrajectoryError::Header)?;
        if units.is_some_and(|u| u != parsed) {
            return Err(TrajectoryError::Header(
                "conflicting units directives".into(),
            ));
        }
        units = Some(parsed);
    }
    Ok(units.unwrap_or_default())
}

/// Central differences of `q̇` on a possibly non-uniform grid, one-sided at
/// the ends.
fn differentiate_velocities(samples: &mut [TrajectorySample]) -> Result<(), TrajectoryError> {
    let n = samples.len();
    if n < 2 {
        return Err(TrajectoryError::Format {
            row: 1,
            message: "differentiation needs at least two samples".into(),
        });
    }
    let qdd: Vec<DVector<f64>> = (0..n)
        .map(|i| {
            let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
            (&samples[b].qd - &samples[a].qd) / (samples[b].t - samples[a].t)
        })
        .collect();
    for (sample, acc) in samples.iter_mut().zip(qdd) {
        sample.qdd = acc;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_ROWS: &str =
        "t,q0,q1,qd0,qd1,qdd0,qdd1\n0,0,0,0,0,0,0\n0.1,1,2,3,4,5,6\n0.2,1,2,3,4,5,6\n";

    #[test]
    fn reads_plain_file() {
        let traj = parse_trajectory(THREE_ROWS, 2, false).unwrap();
        assert_eq!(traj.len(), 3);
        assert_eq!(traj.units, MeasuredUnits::Torque);
        assert!(!traj.has_measurements());
        assert_eq!(traj.samples[1].qdd.as_slice(), &[5.0, 6.0]);
    }

    #[test]
    fn reads_measured_block_and_units() {
        let text =
            "# recorded on the bench\n# units=current\nt,q0,qd0,qdd0,tau0\n0,1,2,3,4\n1,1,2,3,5\n";
        let traj = parse_trajectory(text, 1, false).unwrap();
        assert_eq!(traj.units, MeasuredUnits::Current);
        assert_eq!(traj.samples[1].measured.as_ref().unwrap()[0], 5.0);
    }

    #[test]
    fn reports_decreasing_time_row() {
        let text = "t,q0,qd0,qdd0\n0,0,0,0\n1,0,0,0\n2,0,0,0\n3,0,0,0\n2.5,0,0,0\n";
        assert!(matches!(
            parse_trajectory(text, 1, false),
            Err(TrajectoryError::NonMonotonicTime { row: 5 })
        ));
    }

    #[test]
    fn rejects_wrong_dof_and_bad_fields() {
        assert!(matches!(
            parse_trajectory(THREE_ROWS, 3, false),
            Err(TrajectoryError::Dimension {
                expected: 3,
                found: 2
            })
        ));
        let bad = "t,q0,qd0,qdd0\n0,0,0,0\n1,x,0,0\n";
        assert!(matches!(
            parse_trajectory(bad, 1, false),
            Err(TrajectoryError::Format { row: 2, .. })
        ));
        let short = "t,q0,qd0,qdd0\n0,0,0\n";
        assert!(matches!(
            parse_trajectory(short, 1, false),
            Err(TrajectoryError::Format { row: 1, .. })
        ));
        let nan = "t,q0,qd0,qdd0\n0,NaN,0,0\n";
        assert!(matches!(
            parse_trajectory(nan, 1, false),
            Err(TrajectoryError::Format { row: 1, .. })
        ));
        let order = "t,qd0,q0,qdd0\n0,0,0,0\n";
        assert!(matches!(
            parse_trajectory(order, 1, false),
            Err(TrajectoryError::Header(_))
        ));
        assert!(matches!(
            parse_trajectory("t,q0,qd0,qdd0\n", 1, false),
            Err(TrajectoryError::Empty)
        ));
        assert!(matches!(
            parse_trajectory("# units=volts\nt,q0,qd0,qdd0\n0,0,0,0\n", 1, false),
            Err(TrajectoryError::Header(_))
        ));
    }

    #[test]
    fn differentiates_when_asked() {
        let text = "t,q0,qd0\n0,0,0\n0.5,0,1\n1,0,2\n2,0,4\n";
        assert!(matches!(
            parse_trajectory(text, 1, false),
            Err(TrajectoryError::MissingAccelerations)
        ));
        let traj = parse_trajectory(text, 1, true).unwrap();
        for s in &traj.samples {
            assert!((s.qdd[0] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn write_then_read_is_exact() {
        let text =
            "# units=current\nt,q0,qd0,qdd0,tau0\n0,0.1,0.30000000000000004,-1e-300,7\n1,2,3,4,5\n";
        let traj = parse_trajectory(text, 1, false).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &traj).unwrap();
        let again = parse_trajectory(std::str::from_utf8(&buf).unwrap(), 1, false).unwrap();
        assert_eq!(again, traj);
    }
}
