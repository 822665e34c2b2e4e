use std::collections::BTreeMap;
use std::sync::Arc;

use super::{
    CurrentLevelSolver, FrictionSolver, GenericSolver, InverseDynamicsSolver, SolverConfig,
    SolverError, SolverSetup,
};
use crate::chain::{extract_chain, parse_urdf};

pub const GENERIC_PLUGIN: &str = "generic";
pub const CURRENT_LEVEL_PLUGIN: &str = "ur10-current";
pub const FRICTION_PLUGIN: &str = "franka-friction";

/// Builds a solver from a prepared setup.
pub type SolverFactory =
    Arc<dyn Fn(SolverSetup) -> Result<Box<dyn InverseDynamicsSolver>, SolverError> + Send + Sync>;

/// Name-keyed table of solver factories.
#[derive(Clone)]
pub struct SolverRegistry {
    factories: BTreeMap<String, SolverFactory>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl std::fmt::Debug for SolverRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverRegistry")
            .field("plugins", &self.names())
            .finish()
    }
}

impl SolverRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Registry holding the `generic`, `ur10-current` and `franka-friction`
    /// plugins.
    pub fn with_builtins() -> Self {
        let mut registry = Self::empty();
        registry.register(GENERIC_PLUGIN, |setup| {
            Ok(Box::new(GenericSolver::new(setup)))
        });
        registry.register(CURRENT_LEVEL_PLUGIN, |setup| {
            Ok(Box::new(CurrentLevelSolver::new(setup)?))
        });
        registry.register(FRICTION_PLUGIN, |setup| {
            Ok(Box::new(FrictionSolver::new(setup)?))
        });
        registry
    }

    /// Adds a factory under `name`, replacing any previous one.
    ///
    /// # Panics
    ///
    /// If `name` is empty.
    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(SolverSetup) -> Result<Box<dyn InverseDynamicsSolver>, SolverError>
            + Send
            + Sync
            + 'static,
    {
        assert!(!name.is_empty(), "solver plugin name must not be empty");
        if self
            .factories
            .insert(name.to_string(), Arc::new(factory))
            .is_some()
        {
            log::warn!("replacing solver plugin '{name}'");
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.factories.keys().cloned().collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    /// Loads the robot description, extracts the configured chain and hands
    /// it to the named plugin.
    pub fn create(
        &self,
        config: &SolverConfig,
    ) -> Result<Box<dyn InverseDynamicsSolver>, SolverError> {
        let factory =
            self.factories
                .get(&config.plugin_name)
                .ok_or_else(|| SolverError::UnknownPlugin {
                    name: config.plugin_name.clone(),
                    registered: self.names(),
                })?;
        if config.gravity.iter().any(|g| !g.is_finite()) {
            return Err(SolverError::Config("gravity must be finite".into()));
        }
        let urdf = config.load_description()?;
        let model = parse_urdf(&urdf)?;
        let chain = extract_chain(&model, &config.root, &config.tip)?;
        let dof = chain.dof();
        if let Some(friction) = &config.friction {
            if friction.len() != dof {
                return Err(SolverError::Config(format!(
                    "friction has {} entries for a chain with {dof} joints",
                    friction.len()
                )));
            }
        }
        if let Some(gains) = &config.drive_gains {
            if gains.len() != dof {
                return Err(SolverError::Config(format!(
                    "drive_gains has {} entries for a chain with {dof} joints",
                    gains.len()
                )));
            }
        }
        factory(SolverSetup {
            plugin_name: config.plugin_name.clone(),
            chain,
            gravity: config.gravity,
            friction: config.friction.clone(),
            drive_gains: config.drive_gains.clone(),
            friction_units: config.friction_units.unwrap_or_default(),
        })
    }
}
