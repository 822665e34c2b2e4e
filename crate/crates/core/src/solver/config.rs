use std::path::{Path, PathBuf};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{FrictionUnits, SolverError};
use crate::chain::ChainError;
use crate::friction::{DriveGains, FrictionParams};

const KNOWN_KEYS: [&str; 9] = [
    "plugin_name",
    "robot_description_path",
    "robot_description",
    "root",
    "tip",
    "gravity",
    "friction",
    "drive_gains",
    "friction_units",
];

/// Where the URDF text comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum RobotDescription {
    /// Inline URDF text.
    Urdf(String),
    /// Path to a URDF file, as written in the configuration. Relative paths
    /// are resolved against the configuration file's directory.
    Path(PathBuf),
}

/// Run-time selection and parametrization of a solver.
///
/// JSON form:
///
/// ```json
/// {
///   "plugin_name": "franka-friction",
///   "robot_description_path": "arm.urdf",
///   "root": "base_link",
///   "tip": "tool0",
///   "gravity": [0.0, 0.0, -9.81],
///   "friction": [{"model": "viscous-coulomb", "params": {"fv": 0.1, "fc": 0.2}}],
///   "drive_gains": [10.0],
///   "friction_units": "torque"
/// }
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub plugin_name: String,
    pub robot_description: RobotDescription,
    pub root: String,
    pub tip: String,
    pub gravity: Vector3<f64>,
    pub friction: Option<FrictionParams>,
    pub drive_gains: Option<DriveGains>,
    pub friction_units: Option<FrictionUnits>,
    /// Directory relative description paths are resolved against.
    pub base_dir: Option<PathBuf>,
    /// Unrecognized top-level keys, ignored with a warning.
    pub ignored_keys: Vec<String>,
}

#[derive(Deserialize)]
struct RawConfig {
    plugin_name: String,
    robot_description_path: Option<PathBuf>,
    robot_description: Option<String>,
    root: String,
    tip: String,
    gravity: [f64; 3],
    friction: Option<FrictionParams>,
    drive_gains: Option<DriveGains>,
    friction_units: Option<FrictionUnits>,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    plugin_name: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    robot_description_path: Option<String>,
    root: &'a str,
    tip: &'a str,
    gravity: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    friction: Option<&'a FrictionParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    drive_gains: Option<&'a DriveGains>,
    #[serde(skip_serializing_if = "Option::is_none")]
    friction_units: Option<FrictionUnits>,
}

impl SolverConfig {
    /// Minimal configuration with no friction or drive data.
    pub fn new(
        plugin_name: impl Into<String>,
        robot_description: RobotDescription,
        root: impl Into<String>,
        tip: impl Into<String>,
        gravity: Vector3<f64>,
    ) -> Self {
        Self {
            plugin_name: plugin_name.into(),
            robot_description,
            root: root.into(),
            tip: tip.into(),
            gravity,
            friction: None,
            drive_gains: None,
            friction_units: None,
            base_dir: None,
            ignored_keys: Vec::new(),
        }
    }

    /// Parses a JSON configuration document.
    pub fn from_json(text: &str, base_dir: Option<&Path>) -> Result<Self, SolverError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| SolverError::Config(e.to_string()))?;
        let Value::Object(map) = value else {
            return Err(SolverError::Config(
                "configuration must be a JSON object".into(),
            ));
        };
        let ignored_keys: Vec<String> = map
            .keys()
            .filter(|k| !KNOWN_KEYS.contains(&k.as_str()))
            .cloned()
            .collect();
        for key in &ignored_keys {
            log::warn!("ignoring unknown configuration key '{key}'");
        }
        let known: Map<String, Value> = map
            .into_iter()
            .filter(|(k, _)| KNOWN_KEYS.contains(&k.as_str()))
            .collect();
        let raw: RawConfig = serde_json::from_value(Value::Object(known))
            .map_err(|e| SolverError::Config(e.to_string()))?;

        let robot_description = match (raw.robot_description_path, raw.robot_description) {
            (Some(path), None) => RobotDescription::Path(path),
            (None, Some(text)) => RobotDescription::Urdf(text),
            (Some(_), Some(_)) => {
                return Err(SolverError::Config(
                    "give either robot_description_path or robot_description, not both".into(),
                ))
            }
            (None, None) => {
                return Err(SolverError::Config("missing robot_description_path".into()))
            }
        };
        let gravity = Vector3::from(raw.gravity);
        if gravity.iter().any(|g| !g.is_finite()) {
            return Err(SolverError::Config("gravity must be finite".into()));
        }
        Ok(Self {
            plugin_name: raw.plugin_name,
            robot_description,
            root: raw.root,
            tip: raw.tip,
            gravity,
            friction: raw.friction,
            drive_gains: raw.drive_gains,
            friction_units: raw.friction_units,
            base_dir: base_dir.map(Path::to_path_buf),
            ignored_keys,
        })
    }

    /// Reads a JSON configuration file; relative description paths resolve
    /// against its directory.
    pub fn from_file(path: &Path) -> Result<Self, SolverError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SolverError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text, path.parent())
    }

    /// The URDF text, reading it from disk if needed.
    pub fn load_description(&self) -> Result<String, ChainError> {
        match &self.robot_description {
            RobotDescription::Urdf(text) => Ok(text.clone()),
            RobotDescription::Path(path) => {
                let full = match &self.base_dir {
                    Some(dir) if path.is_relative() => dir.join(path),
                    _ => path.clone(),
                };
                std::fs::read_to_string(&full).map_err(|source| ChainError::Io {
                    path: full.display().to_string(),
                    source,
                })
            }
        }
    }

    /// JSON echo of the configuration, with inline URDF text omitted.
    pub fn echo(&self) -> Value {
        let echo = ConfigEcho {
            plugin_name: &self.plugin_name,
            robot_description_path: match &self.robot_description {
                RobotDescription::Path(p) => Some(p.display().to_string()),
                RobotDescription::Urdf(_) => None,
            },
            root: &self.root,
            tip: &self.tip,
            gravity: [self.gravity.x, self.gravity.y, self.gravity.z],
            friction: self.friction.as_ref(),
            drive_gains: self.drive_gains.as_ref(),
            friction_units: self.friction_units,
        };
        serde_json::to_value(echo).expect("config echo is plain data")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::friction::FrictionModel;

    const FULL: &str = r#"{
        "plugin_name": "ur10-current",
        "robot_description_path": "robot.urdf",
        "root": "base_link",
        "tip": "tool0",
        "gravity": [0, 0, -9.81],
        "friction": [{"model": "none"}, {"model": "asymmetric-sigmoid", "params": {"phi1": 1, "phi2": 2, "phi3": 0.5}}],
        "drive_gains": [10, 12.5],
        "friction_units": "current",
        "controller_rate": 500
    }"#;

    #[test]
    fn parses_every_key() {
        let cfg = SolverConfig::from_json(FULL, Some(Path::new("/etc/robot"))).unwrap();
        assert_eq!(cfg.plugin_name, "ur10-current");
        assert_eq!(
            cfg.robot_description,
            RobotDescription::Path("robot.urdf".into())
        );
        assert_eq!(cfg.gravity, Vector3::new(0.0, 0.0, -9.81));
        assert_eq!(
            cfg.friction.as_ref().unwrap().models()[1],
            FrictionModel::sigmoid(1.0, 2.0, 0.5)
        );
        assert_eq!(
            cfg.drive_gains.as_ref().unwrap().gains().as_slice(),
            &[10.0, 12.5]
        );
        assert_eq!(cfg.friction_units, Some(FrictionUnits::Current));
        assert_eq!(cfg.ignored_keys, ["controller_rate"]);
    }

    #[test]
    fn echo_omits_unknown_keys_and_round_trips() {
        let cfg = SolverConfig::from_json(FULL, None).unwrap();
        let echo = cfg.echo();
        assert!(echo.get("controller_rate").is_none());
        let again = SolverConfig::from_json(&echo.to_string(), None).unwrap();
        assert_eq!(again.friction, cfg.friction);
        assert_eq!(again.drive_gains, cfg.drive_gains);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            r#"[1, 2]"#,
            r#"{"plugin_name": "generic", "root": "a", "tip": "b", "gravity": [0, 0, -9.81]}"#,
            r#"{"plugin_name": "generic", "robot_description_path": "x", "root": "a", "tip": "b", "gravity": [0, 0]}"#,
            r#"{"plugin_name": "generic", "robot_description_path": "x", "root": "a", "tip": "b", "gravity": [0, 0, 1], "drive_gains": [0]}"#,
        ];
        for text in bad {
            assert!(
                matches!(
                    SolverConfig::from_json(text, None),
                    Err(SolverError::Config(_))
                ),
                "{text}"
            );
        }
    }
}
