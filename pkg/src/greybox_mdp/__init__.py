"""Structured transition-model estimation and planning for finite MDPs."""

from .mdp import (FiniteMdp, PolicyVector, QTable, ValidationReport,
                  from_dense, horizon_scale, load_mdp, mdp_from_text,
                  mdp_to_text, pair_index, save_mdp, sup_norm_diff,
                  validate_mdp)
from .planning import (PlannerConfig, PlanningError, bellman_backup,
                       greedy_policy, policy_evaluation, policy_iteration,
                       value_iteration)
from .structure import (EstimatorState, InfoSets, LatentOutcome,
                        StructuralModelSpec, StrictUpdater, TransitionRecord,
                        decode_entrywise, entrywise_spec, estimates,
                        estimator_from_text, estimator_to_text,
                        informative_sets, load_estimator, min_info_count,
                        reconstruct, record_transition, save_estimator,
                        update_entrywise_batch, update_from_annotations)
from .queueing import (QueueConfig, QueueModel, build_queue, decode_queue,
                       decode_queue_state, encode_queue_state,
                       queue_informative_pairs, queue_reward,
                       queue_transition_row, sample_queue_step)
from .gridworld import (ACTIONS, ACTION_NAMES, CLASSIC_WIND, GridConfig,
                        GridworldModel, build_gridworld, grid_transition_row,
                        param_layout, sample_grid_step)
from .bounds import (BoundInputs, LipschitzEstimate, RegimeReport,
                     bound_report, estimate_lipschitz,
                     lookahead_deviation_terms, mean_param_error_bound,
                     plug_in_sigma, q_error_bound, regime_report,
                     samples_for_accuracy, worst_case_sigma)
from .sampling import (CollectionPlan, QLearningResult, SampleBatch,
                       TrueRowSampler, apply_batch, flatten_latents,
                       generative_collect, generative_stream, q_learning,
                       rollout_collect)
from .harness import (CSV_HEADER, BoundsSettings, ConfigError,
                      ExperimentConfig, MetricsRow, build_model,
                      default_checkpoints, load_config, read_rows,
                      resolve_output, run_experiment, write_rows)
from .cli import main as cli_main

__version__ = "0.1.0"
