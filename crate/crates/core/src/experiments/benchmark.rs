//! Built-in benchmarks that render their own data in memory: the fidelity
//! sweep on the source distribution and the shifted-domain adaptation and
//! trimap study.

use crate::error::Result;
use crate::probe::{train, LabeledImage};

use super::config::{Fidelity, GenerationConfig};
use super::report::ExperimentReport;
use super::runs::{run_adaptation_experiment, run_fidelity_sweep, run_trimap_experiment, SweepOutcome};
use super::setup::{render_sets, seed_range};

/// Offset between the seeds of a benchmark's training and test scenes.
pub const TEST_SEED_OFFSET: u64 = 1_000;

/// Fidelity sweep: `train_scenes` scenes rendered at every fidelity of
/// `fidelities`, tested on `test_scenes` other scenes at `test_fidelity`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepBenchmark {
    pub config: GenerationConfig,
    pub fidelities: Vec<Fidelity>,
    pub train_scenes: u32,
    pub test_scenes: u32,
    pub test_fidelity: Fidelity,
}

impl Default for SweepBenchmark {
    fn default() -> Self {
        Self {
            config: GenerationConfig::default(),
            fidelities: Fidelity::standard_set(),
            train_scenes: 3,
            test_scenes: 16,
            test_fidelity: Fidelity::PathTraced(10),
        }
    }
}

impl SweepBenchmark {
    pub fn train_seeds(&self) -> Vec<u64> {
        seed_range(self.config.dataset.base_seed, self.train_scenes)
    }

    pub fn test_seeds(&self) -> Vec<u64> {
        seed_range(self.config.dataset.base_seed + TEST_SEED_OFFSET, self.test_scenes)
    }

    pub fn run(&self) -> Result<SweepOutcome> {
        let sets = render_sets(&self.config, &self.train_seeds(), &self.fidelities)?;
        let train_sets: Vec<(String, Vec<LabeledImage>)> =
            self.fidelities.iter().map(|f| f.to_string()).zip(sets).collect();
        let test = render_sets(&self.config, &self.test_seeds(), &[self.test_fidelity])?.remove(0);
        let mut outcome = run_fidelity_sweep(&train_sets, &test)?;
        outcome.report.seeds = [self.train_seeds(), self.test_seeds()].concat();
        Ok(outcome)
    }
}

/// Source-to-target study: a probe trained on `source` is adapted to the
/// `target` distribution and both are compared near label edges.
#[derive(Clone, Debug, PartialEq)]
pub struct AdaptationBenchmark {
    pub source: GenerationConfig,
    pub target: GenerationConfig,
    pub fidelity: Fidelity,
    pub sim_scenes: u32,
    pub target_train_scenes: u32,
    pub target_test_scenes: u32,
    pub target_fraction: f64,
    pub lambdas: Vec<f64>,
    pub trimap_widths: Vec<u32>,
}

impl Default for AdaptationBenchmark {
    fn default() -> Self {
        Self {
            source: GenerationConfig::default(),
            target: GenerationConfig::shifted_target(),
            fidelity: Fidelity::PathTraced(40),
            sim_scenes: 8,
            target_train_scenes: 8,
            target_test_scenes: 24,
            target_fraction: 0.25,
            lambdas: vec![0.0, 0.1, 0.25, 0.5, 0.75, 1.0],
            trimap_widths: vec![1, 2, 5, 10, 20],
        }
    }
}

/// Reports of the adaptation benchmark.
pub struct AdaptationOutcome {
    pub adaptation: ExperimentReport,
    /// Columns `sim` and `target-only`, one row per trimap width plus `global`.
    pub trimap: ExperimentReport,
}

impl AdaptationBenchmark {
    pub fn sim_seeds(&self) -> Vec<u64> {
        seed_range(self.source.dataset.base_seed, self.sim_scenes)
    }

    pub fn target_train_seeds(&self) -> Vec<u64> {
        seed_range(self.target.dataset.base_seed, self.target_train_scenes)
    }

    pub fn target_test_seeds(&self) -> Vec<u64> {
        seed_range(self.target.dataset.base_seed + TEST_SEED_OFFSET, self.target_test_scenes)
    }

    pub fn run(&self) -> Result<AdaptationOutcome> {
        let render = |cfg: &GenerationConfig, seeds: &[u64]| -> Result<Vec<LabeledImage>> {
            Ok(render_sets(cfg, seeds, &[self.fidelity])?.remove(0))
        };
        let sim = render(&self.source, &self.sim_seeds())?;
        let target_train = render(&self.target, &self.target_train_seeds())?;
        let test = render(&self.target, &self.target_test_seeds())?;
        let seeds = [self.sim_seeds(), self.target_train_seeds(), self.target_test_seeds()].concat();

        let mut adaptation =
            run_adaptation_experiment(&sim, &target_train, self.target_fraction, &self.lambdas, &test)?;
        adaptation.seeds.clone_from(&seeds);
        let sim_model = train::<f64>(&sim)?;
        let target_model = train::<f64>(&target_train)?;
        let mut trimap = run_trimap_experiment(
            &[("sim".into(), &sim_model), ("target-only".into(), &target_model)],
            &test,
            &self.trimap_widths,
        )?;
        trimap.seeds = seeds;
        Ok(AdaptationOutcome { adaptation, trimap })
    }
}
