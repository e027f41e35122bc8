from .settings import (
    ConfigError, LatencySettings, NeuronSettings, ExperimentConfig, load_config, parse_config, apply_overrides
)
from .presets import PRESETS, preset_names, get_preset
from .pipeline import (
    SampleEncoder, FoldData, EncodedCache, ENCODED_TRAIN_FILE, ENCODED_TEST_FILE, kernel_params, noise_params,
    load_datasets, load_encoded_cache, prepare_folds, layer_sizes, resolve_out_dir
)
from .evaluation import EvalResult, Presentation, present, evaluate, confusion_matrix, early_stop_tracker
from .training import (
    RunCancelled, ProgressReporter, EvalPoint, ResumePoint, RunMetrics, build_network, train_fold
)
from .results import (
    mean_sem, write_metrics, write_summary, checkpoint_path, write_checkpoint, read_resume_point
)
from .experiment import ExperimentResult, run_experiment
from .sweep import parse_grid, grid_points, summarize_point, sweep
from .tasks import JobReporter, execute_job, experiment_background_task
