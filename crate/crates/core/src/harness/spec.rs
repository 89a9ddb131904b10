//! Experiment descriptions and the objects derived from them.

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::config::{read_jsonl, Particle, Window};
use crate::gibbs::{sample_gibbs_chain, GibbsParams, McmcSettings};
use crate::potential::{
    evaluate_constants, gamma_for, make_model, smooth_decompose, DerivedConstants, PotentialDescriptor, PotentialModel,
    SmoothDecomposition,
};
use crate::transform::TransformParams;

/// Where the boundary configuration `Y′` comes from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundarySource {
    /// No particles outside the window.
    #[default]
    Empty,
    /// The particles outside `Λₙ` of one chain run on `Λ_{n+pad}`.
    Sampled,
    /// The boundary particles of the first configuration in a JSONL file.
    File { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformSettings {
    pub c: f64,
    pub delta: f64,
    #[serde(default)]
    pub strict: bool,
    /// Upper bound on the mollifier width used for smooth potentials.
    #[serde(default = "default_width")]
    pub mollifier_width: f64,
}

fn default_width() -> f64 {
    1e-3
}

fn default_one() -> f64 {
    1.0
}

fn default_chains() -> u64 {
    4
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// Directory for CSV, JSONL and replay files; nothing is written when unset.
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub model: PotentialDescriptor,
    #[serde(default = "default_one")]
    pub beta: f64,
    pub z: f64,
    pub xi: f64,
    pub n: f64,
    #[serde(default)]
    pub pad: f64,
    #[serde(default)]
    pub boundary: BoundarySource,
    #[serde(default)]
    pub mcmc: McmcSettings,
    #[serde(default = "default_chains")]
    pub chains: u64,
    pub transform: TransformSettings,
    pub samples: usize,
    #[serde(default)]
    pub output: OutputPaths,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn from_toml_str(text: &str) -> Result<Self, HarnessError> {
        let spec: ExperimentSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("specs serialize")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.samples == 0 {
            return Err(HarnessError::Spec("samples must be at least 1".into()));
        }
        if self.chains == 0 {
            return Err(HarnessError::Spec("chains must be at least 1".into()));
        }
        if !(self.pad >= 0.0) {
            return Err(HarnessError::Spec(format!("pad must be nonnegative, got {}", self.pad)));
        }
        if let BoundarySource::File { path } = &self.boundary {
            if !path.exists() {
                return Err(HarnessError::Spec(format!("boundary file {} does not exist", path.display())));
            }
        }
        self.mcmc.validate()?;
        Ok(())
    }

    /// Mode label printed in every report.
    pub fn mode(&self) -> &'static str {
        if self.transform.strict {
            "strict"
        } else {
            "relaxed"
        }
    }
}

/// Model, decomposition, constants and samplers built from a spec.
#[derive(Clone, Debug)]
pub struct Setup {
    pub spec: ExperimentSpec,
    pub model: PotentialModel,
    pub decomp: SmoothDecomposition,
    pub constants: DerivedConstants,
    pub gibbs: GibbsParams,
    pub transform: TransformParams,
}

impl Setup {
    pub fn new(spec: &ExperimentSpec) -> Result<Self, HarnessError> {
        spec.validate()?;
        let model = make_model(spec.model)?;
        let decomp = smooth_decompose(&model, gamma_for(spec.xi, spec.beta), spec.transform.mollifier_width)?;
        let constants = evaluate_constants(&decomp, spec.xi, spec.beta, spec.z)?;
        let window = Window::new(spec.n)?;
        let boundary = boundary_particles(spec, &model, &decomp, &constants)?;
        let gibbs = GibbsParams::new(model, decomp.clone(), constants, window, boundary)?;
        let transform = TransformParams::new(spec.n, spec.transform.c, spec.transform.delta, &decomp, spec.transform.strict)?;
        Ok(Setup {
            spec: spec.clone(),
            model,
            decomp,
            constants,
            gibbs,
            transform,
        })
    }

    /// The same setup on a window of a different size, keeping the boundary source.
    pub fn with_n(&self, n: f64) -> Result<Self, HarnessError> {
        Setup::new(&ExperimentSpec { n, ..self.spec.clone() })
    }
}

/// Chain stream reserved for the boundary draw.
const BOUNDARY_STREAM: u64 = u64::MAX;

fn boundary_particles(
    spec: &ExperimentSpec,
    model: &PotentialModel,
    decomp: &SmoothDecomposition,
    constants: &DerivedConstants,
) -> Result<Vec<Particle>, HarnessError> {
    let window = Window::new(spec.n)?;
    match &spec.boundary {
        BoundarySource::Empty => Ok(Vec::new()),
        BoundarySource::Sampled => {
            if spec.pad == 0.0 {
                return Ok(Vec::new());
            }
            let outer = GibbsParams::new(*model, decomp.clone(), *constants, Window::new(spec.n + spec.pad)?, Vec::new())?;
            let settings = McmcSettings {
                steps: spec.mcmc.burn_in.max(1),
                burn_in: spec.mcmc.burn_in.max(1) - 1,
                thin: 1,
                ..spec.mcmc
            };
            let last = sample_gibbs_chain(&outer, &settings, BOUNDARY_STREAM)?
                .pop()
                .expect("one state after burn-in");
            Ok(last.interior.into_iter().filter(|p| !window.contains(p.x)).collect())
        }
        BoundarySource::File { path } => {
            let configs = read_jsonl(BufReader::new(File::open(path)?))?;
            let first = configs
                .into_iter()
                .next()
                .ok_or_else(|| HarnessError::Spec(format!("{} holds no configuration", path.display())))?;
            Ok(first.all().filter(|p| !window.contains(p.x)).copied().collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"
name = "demo"
model = { kind = "hard-core", r0 = 0.5 }
z = 0.5
xi = 0.5
n = 8.0
pad = 1.0
boundary = { kind = "sampled" }
samples = 3
seed = 11
transform = { c = 0.05, delta = 0.1 }
mcmc = { steps = 2000, burn_in = 1000, thin = 100, seed = 11 }
"#;

    #[test]
    fn spec_round_trips_through_toml() {
        let spec = ExperimentSpec::from_toml_str(TEXT).unwrap();
        assert_eq!(spec.beta, 1.0);
        assert_eq!(spec.chains, 4);
        assert_eq!(spec.transform.mollifier_width, 1e-3);
        let again = ExperimentSpec::from_toml_str(&spec.to_toml()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn unknown_keys_and_zero_samples_are_rejected() {
        assert!(ExperimentSpec::from_toml_str(&format!("{TEXT}\nbogus = 1")).is_err());
        assert!(ExperimentSpec::from_toml_str(&TEXT.replace("samples = 3", "samples = 0")).is_err());
        let missing = TEXT.replace(r#"{ kind = "sampled" }"#, r#"{ kind = "file", path = "/nonexistent.jsonl" }"#);
        assert!(ExperimentSpec::from_toml_str(&missing).is_err());
    }

    #[test]
    fn sampled_boundary_lies_in_the_pad() {
        let spec = ExperimentSpec::from_toml_str(TEXT).unwrap();
        let setup = Setup::new(&spec).unwrap();
        assert!(!setup.gibbs.boundary.is_empty());
        for p in &setup.gibbs.boundary {
            assert!(p.sup_norm() > 8.0 && p.sup_norm() <= 9.0);
        }
    }
}
