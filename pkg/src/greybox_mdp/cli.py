"""Command-line entry point.

Subcommands:
    run <config>        execute an experiment config, write the metrics CSV
    bounds <config>     print the sample-complexity bound report
    env dump <config>   serialize the true MDP of the configured environment
    selftest            run a quick invariant suite against both environments

Exit codes: 0 success, 1 config or runtime error (message names the key),
2 usage error (unknown subcommand or bad flags).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from .bounds import (BoundInputs, bound_report, estimate_lipschitz,
                     plug_in_sigma, worst_case_sigma)
from .gridworld import build_gridworld
from .harness import (ConfigError, ExperimentConfig, build_model, load_config,
                      resolve_output, run_experiment, shell_out_plots,
                      write_rows)
from .mdp import save_mdp, sup_norm_diff
from .planning import policy_iteration, value_iteration
from .queueing import build_queue
from .sampling import generative_collect
from .structure import (EstimatorState, StrictUpdater, estimates,
                        min_info_count)


def _parse_seed_list(raw: str) -> tuple[int, ...]:
    try:
        seeds = tuple(int(x) for x in raw.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"key 'seeds' override must be integers, got {raw!r}")
    if not seeds:
        raise ConfigError("key 'seeds' override must not be empty")
    return seeds


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seeds=_parse_seed_list(args.seed))
    if args.out is not None:
        cfg = replace(cfg, output=args.out)
    run_experiment(cfg, jobs=args.jobs)
    out_path = resolve_output(cfg.output)
    print(f"wrote {out_path}", flush=True)
    if args.plot:
        return shell_out_plots(out_path)
    return 0


def _cmd_bounds(args) -> int:
    cfg = load_config(args.config)
    model = build_model(cfg)
    spec = model.spec
    rng = np.random.default_rng(0)
    lip = estimate_lipschitz(spec, num_pairs=cfg.bounds.lipschitz_pairs,
                             rng=rng)
    active = spec.active
    if cfg.bounds.plug_in and spec.true_params is not None:
        sigma = plug_in_sigma(spec.true_params[active])
    else:
        sigma = worst_case_sigma(int(active.sum()))
    inputs = BoundInputs(gamma=spec.gamma, num_pairs=spec.num_pairs,
                         delta=cfg.bounds.delta, lipschitz=lip.value,
                         sigma_mu=sigma, info_count=cfg.bounds.info_count)
    print(f"environment: {cfg.environment}")
    print(bound_report(inputs, int(active.sum()),
                       target_eps=cfg.bounds.target_eps))
    return 0


def _cmd_env_dump(args) -> int:
    cfg = load_config(args.config)
    model = build_model(cfg)
    out = args.out or f"{cfg.environment}_mdp.txt"
    path = resolve_output(out)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    save_mdp(model.mdp, path)
    print(f"wrote {path} ({model.mdp.num_states} states, "
          f"{model.mdp.num_actions} actions)")
    return 0


def _check(label: str, ok: bool) -> bool:
    print(f"{'ok' if ok else 'FAIL'} {label}")
    return ok


def _cmd_selftest(_args) -> int:
    rng = np.random.default_rng(1234)
    passed = True

    queue = build_queue()
    rebuilt = queue.spec.reconstruct(queue.spec.true_params)
    sums = rebuilt.transitions.sum(axis=1).A1
    passed &= _check("queue rows sum to one",
                     bool(np.allclose(sums, 1.0, atol=1e-12)))
    diff = np.abs(rebuilt.transitions.toarray()
                  - queue.mdp.transitions.toarray()).max()
    passed &= _check("queue reconstruction matches direct rows", diff < 1e-12)

    grid = build_gridworld()
    vi = value_iteration(grid.mdp)
    pi = policy_iteration(grid.mdp)[1]
    passed &= _check("gridworld VI and PI agree",
                     sup_norm_diff(vi, pi) < 1e-8)

    est = EstimatorState.fresh(queue.spec.num_params)
    updater = StrictUpdater(queue.spec)
    batch = generative_collect(queue, 20 * queue.spec.num_pairs, rng)
    updater.apply(est, batch.pairs, batch.next_states)
    mu = estimates(est, queue.spec)
    passed &= _check("queue strict estimates within 0.2 of truth",
                     float(np.max(np.abs(mu - queue.spec.true_params))) < 0.2)
    passed &= _check("queue information counts positive",
                     min_info_count(est, queue.spec.active) > 0)

    learned = queue.spec.reconstruct(mu)
    gap = sup_norm_diff(policy_iteration(learned)[1],
                        policy_iteration(queue.mdp)[1])
    passed &= _check("queue planned Q gap finite and small",
                     gap < 5.0)
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="greybox-mdp",
        description="Estimate structured MDP transition models, plan on "
                    "them, and report PAC sample-complexity bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment config")
    p_run.add_argument("config")
    p_run.add_argument("--seed", help="comma-separated seed override")
    p_run.add_argument("--out", help="output CSV path override")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="parallel worker processes")
    p_run.add_argument("--plot", action="store_true",
                       help="invoke the plotting front end on the CSV")
    p_run.set_defaults(func=_cmd_run)

    p_bounds = sub.add_parser("bounds", help="print the error-bound report")
    p_bounds.add_argument("config")
    p_bounds.set_defaults(func=_cmd_bounds)

    p_env = sub.add_parser("env", help="environment utilities")
    env_sub = p_env.add_subparsers(dest="env_command", required=True)
    p_dump = env_sub.add_parser("dump", help="serialize the true MDP")
    p_dump.add_argument("config")
    p_dump.add_argument("--out", help="output path")
    p_dump.set_defaults(func=_cmd_env_dump)

    p_self = sub.add_parser("selftest", help="run the invariant suite")
    p_self.set_defaults(func=_cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
