//! User-defined families from a TOML file, and the registry that merges them
//! with the built-ins.
//!
//! ```toml
//! [[family]]
//! name = "c18-c14"
//! basis_labels = ["h2", "S14", "T"]
//! g12 = 4
//! g22 = 10
//! g13 = 6
//! g33 = 18
//!
//! [family.fiber]
//! kind = "del-pezzo-6"
//! coefficients = [4, 0, -1]
//! ```
//!
//! `g11` may be given but must equal 3. A family whose name matches a built-in
//! replaces it.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::family::{builtin_family, FamilySpec, FiberKind, FiberSpec, BUILTIN_FAMILIES};
use crate::linalg::IntVector;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiberConfig {
    kind: FiberKind,
    coefficients: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyConfig {
    name: String,
    basis_labels: [String; 3],
    g11: Option<i64>,
    g12: i64,
    g22: i64,
    g13: i64,
    g33: i64,
    fiber: Option<FiberConfig>,
    odd_cycle: Option<Vec<i64>>,
}

impl FamilyConfig {
    pub fn into_spec(self) -> Result<FamilySpec> {
        if let Some(g11) = self.g11 {
            if g11 != 3 {
                return Err(Error::Config(format!("family `{}`: g11 must be 3, got {g11}", self.name)));
            }
        }
        let fiber = self.fiber.map(|fc| FiberSpec {
            coefficients: IntVector::from_i64s(&fc.coefficients),
            kind: fc.kind,
        });
        FamilySpec::new(
            &self.name,
            self.basis_labels,
            [self.g12.into(), self.g22.into(), self.g13.into(), self.g33.into()],
            fiber,
            self.odd_cycle.map(|v| IntVector::from_i64s(&v)),
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    family: Vec<FamilyConfig>,
}

pub fn parse_config(text: &str) -> Result<Vec<FamilySpec>> {
    let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    file.family.into_iter().map(FamilyConfig::into_spec).collect()
}

/// Built-in families plus any loaded from config, in registration order.
#[derive(Clone, Debug)]
pub struct Registry {
    families: Vec<FamilySpec>,
}

impl Registry {
    pub fn builtin() -> Self {
        let families = BUILTIN_FAMILIES
            .iter()
            .map(|n| builtin_family(n).expect("built-in family"))
            .collect();
        Registry { families }
    }

    pub fn with_config_str(text: &str) -> Result<Self> {
        let mut reg = Registry::builtin();
        for spec in parse_config(text)? {
            reg.insert(spec);
        }
        Ok(reg)
    }

    pub fn with_config_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Registry::with_config_str(&text)
    }

    /// Adds a family, replacing any existing one with the same name.
    pub fn insert(&mut self, spec: FamilySpec) {
        match self.families.iter_mut().find(|f| f.name == spec.name) {
            Some(slot) => *slot = spec,
            None => self.families.push(spec),
        }
    }

    pub fn get(&self, name: &str) -> Result<&FamilySpec> {
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::UnknownFamily(name.to_string()))
    }

    pub fn families(&self) -> &[FamilySpec] {
        &self.families
    }
}

impl Default for Registry {
    fn default() -> Self {
        Registry::builtin()
    }
}
