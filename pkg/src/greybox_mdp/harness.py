"""Experiment orchestration.

Runs a grid of (method, seed) cells against one environment, streams samples
to each method's estimator, and at every checkpoint plans inside the
reconstructed model and logs the sup-norm gap to the true optimal Q table
plus the minimum information count.  Results land in a CSV with the fixed
header `method,seed,k,n_k,q_error,wall_time_s`.

Fairness contract: within a seed, every model-based method consumes the
bitwise-identical (pair, next state) stream.  The stream is drawn from the
true MDP rows, never from a method's own outcome table; oracle extraction
then annotates it by drawing latent outcomes conditioned on the observed
next states, which has the same law as direct latent sampling.
"""

from __future__ import annotations

import configparser
import csv
import os
import subprocess
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .gridworld import GridConfig, build_gridworld
from .mdp import sup_norm_diff
from .planning import PlannerConfig, policy_iteration
from .queueing import QueueConfig, build_queue
from .sampling import (CollectionPlan, TrueRowSampler, q_learning,
                       rollout_collect)
from .structure import (EstimatorState, StrictUpdater, entrywise_spec,
                        estimates, informative_sets, min_info_count,
                        update_entrywise_batch, update_from_annotations)

CSV_HEADER = ("method", "seed", "k", "n_k", "q_error", "wall_time_s")

STRUCTURAL_METHODS = ("structural", "structural:more-info",
                      "structural:least-info")
KNOWN_METHODS = STRUCTURAL_METHODS + ("entrywise", "qlearning")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoundsSettings:
    delta: float = 0.1
    info_count: int = 10_000
    lipschitz_pairs: int = 2000
    target_eps: float | None = None
    plug_in: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    environment: str
    queue: QueueConfig
    grid: GridConfig
    methods: tuple[str, ...] = ("structural",)
    extraction: str = "strict"
    plan: CollectionPlan = CollectionPlan("generative", 100_000)
    checkpoints: tuple[int, ...] = ()
    seeds: tuple[int, ...] = tuple(range(10))
    planner: PlannerConfig = PlannerConfig()
    output: str = "results.csv"
    epsilon: float = 0.1
    lr_exponent: float = 0.8
    qlearning_steps: int | None = None
    debug_true_params: bool = False
    bounds: BoundsSettings = BoundsSettings()


@dataclass(frozen=True)
class MetricsRow:
    method: str
    seed: int
    k: int
    n_k: int
    q_error: float
    wall_time_s: float


def default_checkpoints(budget: int, points: int = 20) -> tuple[int, ...]:
    """Log-spaced sample counts from min(1000, budget) up to the budget."""
    lo = min(1000, budget)
    grid = np.geomspace(lo, budget, points)
    return tuple(sorted(set(int(round(x)) for x in grid)))


# ---------------------------------------------------------------------------
# Config file parsing (flat INI sections).
# ---------------------------------------------------------------------------

_SECTION_KEYS = {
    "experiment": {"environment", "methods", "extraction", "mode", "budget",
                   "horizon", "checkpoints", "seeds", "output",
                   "debug_true_params"},
    "queue": {"buffer", "servers", "injection_rate", "exit_probabilities",
              "gamma"},
    "gridworld": {"width", "height", "wind_strengths", "wind_probs",
                  "slip_prob", "start", "goal", "gamma", "tying"},
    "planner": {"residual_tolerance", "max_iterations"},
    "qlearning": {"epsilon", "lr_exponent", "steps"},
    "bounds": {"delta", "info_count", "lipschitz_pairs", "target_eps",
               "plug_in"},
}


def _parse(key: str, raw: str, conv, what: str):
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigError(f"key '{key}' must be {what}, got {raw!r}") from exc


def _int_list(raw: str) -> tuple[int, ...]:
    items = [x.strip() for x in raw.split(",") if x.strip()]
    return tuple(int(x) for x in items)


def _float_list(raw: str) -> tuple[float, ...]:
    items = [x.strip() for x in raw.split(",") if x.strip()]
    return tuple(float(x) for x in items)


def _str_list(raw: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in raw.split(",") if x.strip())


def _bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(low)


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate an experiment config file.

    Raises ConfigError with the offending key named in the message.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable config: {exc}") from exc

    for section in cp.sections():
        if section not in _SECTION_KEYS:
            raise ConfigError(f"unknown section [{section}]")
        for key in cp[section]:
            if key not in _SECTION_KEYS[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")

    exp = cp["experiment"] if cp.has_section("experiment") else {}
    environment = exp.get("environment", "").strip()
    if environment not in ("queue", "gridworld"):
        raise ConfigError(
            f"key 'environment' must be 'queue' or 'gridworld', got {environment!r}")

    methods = _str_list(exp.get("methods", "structural"))
    if not methods:
        raise ConfigError("key 'methods' must not be empty")
    for m in methods:
        if m not in KNOWN_METHODS:
            raise ConfigError(f"key 'methods' contains unknown method {m!r}")
        if m.startswith("structural:") and environment != "gridworld":
            raise ConfigError(
                f"key 'methods': tying variant {m!r} needs the gridworld")

    extraction = exp.get("extraction", "strict").strip()
    if extraction not in ("strict", "oracle"):
        raise ConfigError(
            f"key 'extraction' must be 'strict' or 'oracle', got {extraction!r}")

    mode = exp.get("mode", "generative").strip()
    if "budget" not in exp:
        raise ConfigError("key 'budget' is required in [experiment]")
    budget = _parse("budget", exp["budget"], int, "an integer")
    horizon = _parse("horizon", exp["horizon"], int, "an integer") \
        if "horizon" in exp else None
    try:
        plan = CollectionPlan(mode, budget, horizon)
    except ValueError as exc:
        raise ConfigError(f"key 'mode'/'budget'/'horizon' invalid: {exc}") from exc
    if budget < 1:
        raise ConfigError("key 'budget' must be at least 1")

    if "checkpoints" in exp:
        checkpoints = _parse("checkpoints", exp["checkpoints"], _int_list,
                             "a comma-separated integer list")
        if not checkpoints:
            raise ConfigError("key 'checkpoints' must not be empty")
        if list(checkpoints) != sorted(set(checkpoints)):
            raise ConfigError("key 'checkpoints' must be strictly increasing")
        if checkpoints[0] < 1 or checkpoints[-1] > budget:
            raise ConfigError("key 'checkpoints' must lie in [1, budget]")
    else:
        checkpoints = default_checkpoints(budget)

    seeds = _parse("seeds", exp["seeds"], _int_list,
                   "a comma-separated integer list") \
        if "seeds" in exp else tuple(range(10))
    if not seeds:
        raise ConfigError("key 'seeds' must not be empty")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("key 'seeds' must not repeat")

    output = exp.get("output", "results.csv").strip()
    debug_true = _parse("debug_true_params", exp["debug_true_params"], _bool,
                        "a boolean") if "debug_true_params" in exp else False

    queue_cfg = _queue_config(cp)
    grid_cfg = _grid_config(cp)

    pl = cp["planner"] if cp.has_section("planner") else {}
    planner = PlannerConfig(
        residual_tolerance=_parse("residual_tolerance",
                                  pl.get("residual_tolerance", "1e-10"),
                                  float, "a float"),
        max_iterations=_parse("max_iterations",
                              pl.get("max_iterations", "100000"),
                              int, "an integer"))

    ql = cp["qlearning"] if cp.has_section("qlearning") else {}
    epsilon = _parse("epsilon", ql.get("epsilon", "0.1"), float, "a float")
    lr_exponent = _parse("lr_exponent", ql.get("lr_exponent", "0.8"),
                         float, "a float")
    ql_steps = _parse("steps", ql["steps"], int, "an integer") \
        if "steps" in ql else None

    bd = cp["bounds"] if cp.has_section("bounds") else {}
    bounds = BoundsSettings(
        delta=_parse("delta", bd.get("delta", "0.1"), float, "a float"),
        info_count=_parse("info_count", bd.get("info_count", "10000"),
                          int, "an integer"),
        lipschitz_pairs=_parse("lipschitz_pairs",
                               bd.get("lipschitz_pairs", "2000"),
                               int, "an integer"),
        target_eps=_parse("target_eps", bd["target_eps"], float, "a float")
        if "target_eps" in bd else None,
        plug_in=_parse("plug_in", bd.get("plug_in", "true"), _bool,
                       "a boolean"))

    return ExperimentConfig(
        environment=environment, queue=queue_cfg, grid=grid_cfg,
        methods=methods, extraction=extraction, plan=plan,
        checkpoints=checkpoints, seeds=seeds, planner=planner,
        output=output, epsilon=epsilon, lr_exponent=lr_exponent,
        qlearning_steps=ql_steps, debug_true_params=debug_true,
        bounds=bounds)


def _queue_config(cp: configparser.ConfigParser) -> QueueConfig:
    sec = cp["queue"] if cp.has_section("queue") else {}
    kwargs = {}
    if "buffer" in sec:
        kwargs["buffer"] = _parse("buffer", sec["buffer"], int, "an integer")
    if "servers" in sec:
        kwargs["servers"] = _parse("servers", sec["servers"], int, "an integer")
    if "injection_rate" in sec:
        kwargs["injection_rate"] = _parse("injection_rate",
                                          sec["injection_rate"],
                                          float, "a float")
    if "exit_probabilities" in sec:
        kwargs["exit_probabilities"] = _parse(
            "exit_probabilities", sec["exit_probabilities"], _float_list,
            "a comma-separated float list")
    if "gamma" in sec:
        kwargs["gamma"] = _parse("gamma", sec["gamma"], float, "a float")
    try:
        return QueueConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"section [queue] invalid: {exc}") from exc


def _grid_config(cp: configparser.ConfigParser) -> GridConfig:
    sec = cp["gridworld"] if cp.has_section("gridworld") else {}
    kwargs = {}
    for key in ("width", "height"):
        if key in sec:
            kwargs[key] = _parse(key, sec[key], int, "an integer")
    if "wind_strengths" in sec:
        kwargs["wind_strengths"] = _parse("wind_strengths",
                                          sec["wind_strengths"], _int_list,
                                          "a comma-separated integer list")
    if "wind_probs" in sec:
        kwargs["wind_probs"] = _parse("wind_probs", sec["wind_probs"],
                                      _float_list,
                                      "a comma-separated float list")
    if "slip_prob" in sec:
        kwargs["slip_prob"] = _parse("slip_prob", sec["slip_prob"], float,
                                     "a float")
    for key in ("start", "goal"):
        if key in sec:
            pair = _parse(key, sec[key], _int_list,
                          "a comma-separated integer pair")
            if len(pair) != 2:
                raise ConfigError(f"key '{key}' must be two integers")
            kwargs[key] = (pair[0], pair[1])
    if "gamma" in sec:
        kwargs["gamma"] = _parse("gamma", sec["gamma"], float, "a float")
    if "tying" in sec:
        kwargs["tying"] = sec["tying"].strip()
    try:
        return GridConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"section [gridworld] invalid: {exc}") from exc


# ---------------------------------------------------------------------------
# Experiment execution.
# ---------------------------------------------------------------------------

def build_model(cfg: ExperimentConfig, tying: str | None = None):
    if cfg.environment == "queue":
        return build_queue(cfg.queue)
    grid = cfg.grid if tying is None else replace(cfg.grid, tying=tying)
    return build_gridworld(grid)


def _arm_spec(cfg: ExperimentConfig, base_model, method: str):
    if method == "qlearning":
        return None
    if method == "entrywise":
        return entrywise_spec(base_model.mdp,
                              base_model.spec.terminal_states)
    if method == "structural":
        return base_model.spec
    tying = method.split(":", 1)[1]
    return build_model(cfg, tying=tying).spec


def _warn_uninformable_params(cfg: ExperimentConfig) -> None:
    """Flag parameters no strict-mode sample can ever update."""
    base = build_model(cfg)
    for method in cfg.methods:
        if method not in STRUCTURAL_METHODS:
            continue
        spec = _arm_spec(cfg, base, method)
        info = informative_sets(spec, "strict")
        dead = [spec.param_names[i]
                for i in np.flatnonzero(spec.active)
                if len(info.members[i]) == 0]
        if dead:
            print(f"warning: {method}: no transition identifies "
                  f"{', '.join(dead)} under strict extraction; the "
                  f"estimate stays at the prior and n_k stays 0",
                  file=sys.stderr)


def _run_cell(cfg: ExperimentConfig, method: str, seed: int) -> list[MetricsRow]:
    base = build_model(cfg)
    q_star = policy_iteration(base.mdp, cfg.planner)[1]
    start = time.perf_counter()
    rows: list[MetricsRow] = []

    if method == "qlearning":
        steps = cfg.qlearning_steps or cfg.plan.budget
        pairs = base.spec.sampleable_pairs()

        def on_checkpoint(step, q, visits):
            rows.append(MetricsRow(
                method, seed, step, int(visits[pairs].min()),
                sup_norm_diff(q, q_star),
                time.perf_counter() - start))

        q_learning(base.mdp, steps, np.random.default_rng([seed, 29]),
                   epsilon=cfg.epsilon, lr_exponent=cfg.lr_exponent,
                   start_state=base.start_state,
                   terminal_states=base.spec.terminal_states,
                   checkpoints=tuple(c for c in cfg.checkpoints if c <= steps),
                   on_checkpoint=on_checkpoint)
        return rows

    spec = _arm_spec(cfg, base, method)
    if cfg.debug_true_params and spec.true_params is not None:
        ideal = policy_iteration(spec.reconstruct(spec.true_params),
                                 cfg.planner)[1]
        print(f"# {method}/seed {seed}: true-parameter reconstruction "
              f"q error {sup_norm_diff(ideal, q_star):.3g}", file=sys.stderr)

    est = EstimatorState.fresh(spec.num_params)
    structural = method in STRUCTURAL_METHODS
    updater = StrictUpdater(spec) if structural and cfg.extraction == "strict" \
        else None
    # Keyed on the method's global index, not its config position, so one
    # arm's rows never depend on which other arms run beside it.
    arm_rng = np.random.default_rng([seed, KNOWN_METHODS.index(method), 41])
    data_rng = np.random.default_rng([seed, 17])

    def consume(z_chunk: np.ndarray, next_chunk: np.ndarray) -> None:
        if spec.is_entrywise:
            update_entrywise_batch(est, spec, z_chunk, next_chunk)
        elif updater is not None:
            updater.apply(est, z_chunk, next_chunk)
        else:
            ids = spec.conditional_outcomes(z_chunk, next_chunk, arm_rng)
            par, bit = spec.annotations_for(ids)
            update_from_annotations(est, spec.num_params, par, bit,
                                    len(z_chunk))

    if cfg.plan.mode == "rollout":
        if cfg.plan.horizon is not None:
            base.rollout_horizon = cfg.plan.horizon
        walk = rollout_collect(base, cfg.checkpoints[-1], data_rng,
                               collect_latents=False)
        z_all, next_all = walk.pairs, walk.next_states
        sampler = None
        sample_pairs = None
    else:
        sampler = TrueRowSampler(base.mdp)
        sample_pairs = base.spec.sampleable_pairs()
        z_all = next_all = None

    done = 0
    chunk_size = 1_000_000
    for ck in cfg.checkpoints:
        while done < ck:
            take = min(chunk_size, ck - done)
            if sampler is None:
                z = z_all[done:done + take]
                nxt = next_all[done:done + take]
            else:
                idx = (done + np.arange(take)) % len(sample_pairs)
                z = sample_pairs[idx]
                nxt = sampler.sample(z, data_rng)
            consume(z, nxt)
            done += take
        learned = spec.reconstruct(estimates(est, spec))
        q_k = policy_iteration(learned, cfg.planner)[1]
        rows.append(MetricsRow(
            method, seed, ck, min_info_count(est, spec.active),
            sup_norm_diff(q_k, q_star), time.perf_counter() - start))
    return rows


def _run_cell_star(args) -> list[MetricsRow]:
    return _run_cell(*args)


def resolve_output(path: str) -> str:
    """Apply the output-directory override to a relative path."""
    override = os.environ.get("GREYBOX_MDP_OUT", "")
    if override and not os.path.isabs(path):
        return os.path.join(override, path)
    return path


def write_rows(rows: list[MetricsRow], path: str) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in rows:
            writer.writerow([r.method, r.seed, r.k, r.n_k,
                             repr(r.q_error), f"{r.wall_time_s:.6f}"])


def read_rows(path: str) -> list[MetricsRow]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in CSV_HEADER if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"CSV {path} lacks column(s) {', '.join(missing)}")
        return [MetricsRow(r["method"], int(r["seed"]), int(r["k"]),
                           int(r["n_k"]), float(r["q_error"]),
                           float(r["wall_time_s"]))
                for r in reader]


def run_experiment(cfg: ExperimentConfig, jobs: int = 1,
                   write: bool = True) -> list[MetricsRow]:
    """Run every (method, seed) cell and return rows in deterministic order.

    Cells are independent; jobs > 1 distributes them over processes.  Rows
    are ordered by (method as configured, seed, checkpoint) regardless of
    execution order.
    """
    if cfg.extraction == "strict":
        _warn_uninformable_params(cfg)
    cells = [(cfg, method, seed) for method in cfg.methods
             for seed in cfg.seeds]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_cell_star, cells))
    else:
        parts = [_run_cell_star(c) for c in cells]
    rows = [row for part in parts for row in part]
    if write:
        write_rows(rows, resolve_output(cfg.output))
    return rows


def shell_out_plots(csv_path: str) -> int:
    """Invoke the plotting front end on a harness CSV, if installed."""
    command = os.environ.get("GREYBOX_MDP_PLOT_CMD", "")
    if not command:
        root = os.path.dirname(os.path.dirname(os.path.dirname(
            os.path.abspath(__file__))))
        script = os.path.join(root, "frontend", "dist", "cli.js")
        command = f"node {script}"
    argv = command.split() + ["render", csv_path]
    try:
        return subprocess.run(argv, check=False).returncode
    except FileNotFoundError:
        print(f"plot command not found: {argv[0]}", file=sys.stderr)
        return 1
