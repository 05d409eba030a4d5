//! Dataset generation and the experiment recipes: fidelity sweep, trimap
//! curves and domain adaptation.

mod benchmark;
mod config;
mod dataset;
mod report;
mod runs;
mod setup;

pub use benchmark::{AdaptationBenchmark, AdaptationOutcome, SweepBenchmark, TEST_SEED_OFFSET};
pub use config::{
    parse_fidelity_list, CameraSection, DatasetSection, Fidelity, GenerationConfig, LightingSection, MediumSection,
    StyleSection,
};
pub use setup::{place_camera, render_sets, seed_range, to_labeled, FrameSetup};
pub use dataset::{
    dataset_id, generate_dataset, regenerate_dataset, sha256_hex, DatasetManifest, FrameEntry, FrameFiles,
    MANIFEST_FILE, MANIFEST_FORMAT,
};
pub use report::{ExperimentReport, ReportRow};
pub use runs::{
    evaluate, finetune_row, mean_iou, run_adaptation_experiment, run_fidelity_sweep, run_trimap_experiment,
    set_histogram, ProbeModel, SweepOutcome, FINETUNE_SELECTED, GLOBAL_ROW, SIM_FULL, SIM_SMALL, TARGET_ONLY,
};
