"""Windy gridworld with slippery moves and per-column gusts.

The agent walks a width x height grid.  Per step, in order:

  1. With the slip probability the commanded move is replaced by a
     uniformly random one of the four directions; otherwise the command
     executes as chosen.
  2. The move applies with border clipping.
  3. A gust fires with the wind probability of the column the step STARTED
     in, pushing the agent up by that column's wind strength, clipped at
     the top border.  Columns of strength zero never produce a gust.

Reaching the goal ends the episode: the goal state is absorbing with
reward 0, every other state costs 1 per step.

Unknown structural parameters are the per-column wind probabilities plus
the slip probability.  Two tying modes are supported: "more-info" shares
one wind parameter per distinct nonzero strength value, "least-info" gives
every column its own (so columns of strength zero carry a parameter that no
transition can inform).  "entrywise" drops structure altogether and
estimates each transition row directly.

States are indexed column-major: state = x * height + y.  Actions are
0 up, 1 down, 2 left, 3 right.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .mdp import FiniteMdp
from .structure import (LatentOutcome, StructuralModelSpec, TransitionRecord,
                        entrywise_spec)

ACTIONS: tuple[tuple[int, int], ...] = ((0, 1), (0, -1), (-1, 0), (1, 0))
ACTION_NAMES = ("up", "down", "left", "right")
CLASSIC_WIND = (0, 0, 0, 1, 1, 1, 2, 2, 1, 0)


@dataclass(frozen=True)
class GridConfig:
    width: int = 10
    height: int = 7
    wind_strengths: tuple[int, ...] = CLASSIC_WIND
    wind_probs: tuple[float, ...] = (0.5,) * 10
    slip_prob: float = 0.4
    start: tuple[int, int] = (0, 3)
    goal: tuple[int, int] = (7, 3)
    gamma: float = 0.9
    tying: str = "more-info"

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must be at least 1 x 1")
        if len(self.wind_strengths) != self.width:
            raise ValueError("one wind strength per column required")
        if len(self.wind_probs) != self.width:
            raise ValueError("one wind probability per column required")
        if any(s < 0 for s in self.wind_strengths):
            raise ValueError("wind strengths must be nonnegative")
        if any(not 0.0 <= b <= 1.0 for b in self.wind_probs):
            raise ValueError("wind probabilities must lie in [0, 1]")
        if not 0.0 <= self.slip_prob <= 1.0:
            raise ValueError("slip probability must lie in [0, 1]")
        for name, (x, y) in (("start", self.start), ("goal", self.goal)):
            if not (0 <= x < self.width and 0 <= y < self.height):
                raise ValueError(f"{name} cell {x, y} is outside the grid")
        if self.start == self.goal:
            raise ValueError("start and goal must differ")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie strictly inside (0, 1)")
        if self.tying not in ("more-info", "least-info", "entrywise"):
            raise ValueError(f"unknown tying mode {self.tying!r}")

    @property
    def num_states(self) -> int:
        return self.width * self.height

    @property
    def num_actions(self) -> int:
        return len(ACTIONS)

    def cell_index(self, x: int, y: int) -> int:
        return x * self.height + y

    def index_cell(self, state: int) -> tuple[int, int]:
        return divmod(state, self.height)


def _clip_move(cfg: GridConfig, x: int, y: int, dx: int, dy: int) -> tuple[int, int]:
    return (min(max(x + dx, 0), cfg.width - 1),
            min(max(y + dy, 0), cfg.height - 1))


def _gust(cfg: GridConfig, x: int, y: int, origin_col: int) -> tuple[int, int]:
    return x, min(y + cfg.wind_strengths[origin_col], cfg.height - 1)


def param_layout(cfg: GridConfig):
    """Parameter indexing for the configured tying mode.

    Returns (names, column_param, alpha_index, true_params, active) where
    column_param[x] is the wind parameter of column x or None when the mode
    assigns it none.
    """
    if cfg.tying == "more-info":
        strengths = sorted({s for s in cfg.wind_strengths if s > 0})
        names = [f"wind_strength_{s}" for s in strengths]
        by_strength = {s: i for i, s in enumerate(strengths)}
        column_param: list[int | None] = [
            by_strength[s] if s > 0 else None for s in cfg.wind_strengths
        ]
        true: list[float] = []
        for s in strengths:
            tied = {cfg.wind_probs[x] for x in range(cfg.width)
                    if cfg.wind_strengths[x] == s}
            if len(tied) > 1:
                raise ValueError(
                    f"tying mode shares one parameter across strength-{s} "
                    f"columns but their wind probabilities differ: {sorted(tied)}"
                )
            true.append(tied.pop())
        alpha = len(names)
        names.append("slip")
        true.append(cfg.slip_prob)
        active = np.ones(len(names), dtype=bool)
        return names, column_param, alpha, np.array(true), active
    if cfg.tying == "least-info":
        names = [f"wind_col_{x}" for x in range(cfg.width)]
        column_param = list(range(cfg.width))
        alpha = cfg.width
        names.append("slip")
        true = np.array([*cfg.wind_probs, cfg.slip_prob])
        active = np.array([s > 0 for s in cfg.wind_strengths] + [True])
        return names, column_param, alpha, true, active
    raise ValueError("entrywise mode has no structural parameter layout")


def grid_transition_row(cfg: GridConfig, state: int, action: int) -> dict[int, float]:
    """Next-state distribution of one pair, by direct mixing of move and gust."""
    if not 0 <= state < cfg.num_states:
        raise ValueError(f"state {state} out of range")
    if not 0 <= action < cfg.num_actions:
        raise ValueError(f"action {action} out of range")
    x, y = cfg.index_cell(state)
    if (x, y) == cfg.goal:
        return {state: 1.0}
    alpha = cfg.slip_prob
    move_probs: dict[int, float] = {}
    for d, (dx, dy) in enumerate(ACTIONS):
        p = alpha / 4.0 + (1.0 - alpha if d == action else 0.0)
        if p == 0.0:
            continue
        land = cfg.cell_index(*_clip_move(cfg, x, y, dx, dy))
        move_probs[land] = move_probs.get(land, 0.0) + p
    row: dict[int, float] = {}
    strength = cfg.wind_strengths[x]
    beta = cfg.wind_probs[x]
    for land, p in move_probs.items():
        if strength > 0:
            lx, ly = cfg.index_cell(land)
            pushed = cfg.cell_index(*_gust(cfg, lx, ly, x))
            if beta > 0.0:
                row[pushed] = row.get(pushed, 0.0) + p * beta
            if beta < 1.0:
                row[land] = row.get(land, 0.0) + p * (1.0 - beta)
        else:
            row[land] = row.get(land, 0.0) + p
    return row


def sample_grid_step(cfg: GridConfig, state: int, action: int,
                     rng: np.random.Generator) -> TransitionRecord:
    """Simulate one step, recording the slip bit and (where a parameter
    exists and the column has strength) the gust bit.

    Draw order is fixed: slip uniform, then the slipped direction uniform
    (only on a slip), then the gust uniform (only in a column of positive
    strength).  Stepping from the goal raises: the episode is over and the
    caller is expected to reset.
    """
    x, y = cfg.index_cell(state)
    if (x, y) == cfg.goal:
        raise ValueError("the goal is absorbing; reset instead of stepping")
    if cfg.tying == "entrywise":
        column_param: list[int | None] = [None] * cfg.width
        alpha_idx = None
    else:
        _, column_param, alpha_idx, _, _ = param_layout(cfg)
    slip = int(rng.random() < cfg.slip_prob)
    direction = action
    if slip:
        direction = min(int(rng.random() * 4.0), 3)
    latent: list[tuple[int, int]] = []
    if alpha_idx is not None:
        latent.append((alpha_idx, slip))
    land = _clip_move(cfg, x, y, *ACTIONS[direction])
    if cfg.wind_strengths[x] > 0:
        gust = int(rng.random() < cfg.wind_probs[x])
        if column_param[x] is not None:
            latent.append((column_param[x], gust))
        if gust:
            land = _gust(cfg, land[0], land[1], x)
    nxt = cfg.cell_index(*land)
    return TransitionRecord(state, action, nxt, tuple(latent))


def _grid_outcomes(cfg: GridConfig, column_param: list[int | None],
                   alpha_idx: int) -> list[list[LatentOutcome]]:
    goal_state = cfg.cell_index(*cfg.goal)
    outcomes: list[list[LatentOutcome]] = []
    for state in range(cfg.num_states):
        x, y = cfg.index_cell(state)
        for action in range(cfg.num_actions):
            if state == goal_state:
                outcomes.append([LatentOutcome(1.0, (), (), state)])
                continue
            # movement branches: commanded move, then the four slips
            moves: list[tuple[float, tuple[int, ...], tuple[int, ...], int]] = []
            land = cfg.cell_index(*_clip_move(cfg, x, y, *ACTIONS[action]))
            moves.append((1.0, (), (alpha_idx,), land))
            for dx, dy in ACTIONS:
                land = cfg.cell_index(*_clip_move(cfg, x, y, dx, dy))
                moves.append((0.25, (alpha_idx,), (), land))
            merged: dict[tuple, float] = {}
            wind_param = column_param[x] if cfg.wind_strengths[x] > 0 else None
            for const, pos, neg, land in moves:
                if wind_param is None:
                    branches = [(pos, neg, land)]
                else:
                    lx, ly = cfg.index_cell(land)
                    pushed = cfg.cell_index(*_gust(cfg, lx, ly, x))
                    branches = [
                        (pos + (wind_param,), neg, pushed),
                        (pos, neg + (wind_param,), land),
                    ]
                for bpos, bneg, nxt in branches:
                    key = (bpos, bneg, nxt)
                    merged[key] = merged.get(key, 0.0) + const
            outcomes.append([LatentOutcome(c, *key) for key, c in merged.items()])
    return outcomes


@dataclass
class GridworldModel:
    """Bundle of the true MDP, the structural model and rollout metadata."""

    config: GridConfig
    mdp: FiniteMdp
    spec: StructuralModelSpec
    start_state: int | None
    terminal_states: frozenset[int]
    rollout_horizon: int | None = None      # rollouts reset on reaching the goal

    def sample_step(self, state: int, action: int,
                    rng: np.random.Generator) -> TransitionRecord:
        return sample_grid_step(self.config, state, action, rng)


def build_gridworld(config: GridConfig | None = None) -> GridworldModel:
    """Construct the true MDP (direct row mixing) and the structural model
    for the configured tying mode."""
    cfg = config or GridConfig()
    n, m = cfg.num_states, cfg.num_actions
    goal_state = cfg.cell_index(*cfg.goal)
    rewards = np.full((n, m), -1.0)
    rewards[goal_state, :] = 0.0
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for state in range(n):
        for action in range(m):
            row = grid_transition_row(cfg, state, action)
            for nxt in sorted(row):
                indices.append(nxt)
                data.append(row[nxt])
            indptr.append(len(indices))
    trans = sp.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int32), np.array(indptr)),
        shape=(n * m, n),
    )
    mdp = FiniteMdp(n, m, trans, rewards, cfg.gamma, -1.0, 0.0)
    terminal = frozenset({goal_state})
    if cfg.tying == "entrywise":
        spec = entrywise_spec(mdp, terminal)
    else:
        names, column_param, alpha_idx, true, active = param_layout(cfg)
        spec = StructuralModelSpec(
            num_states=n, num_actions=m, num_params=len(names),
            param_names=names,
            outcomes=_grid_outcomes(cfg, column_param, alpha_idx),
            rewards=rewards, gamma=cfg.gamma, r_min=-1.0, r_max=0.0,
            defaults=np.full(len(names), 0.5), active=active,
            true_params=np.asarray(true, dtype=np.float64),
            terminal_states=terminal,
        )
    return GridworldModel(config=cfg, mdp=mdp, spec=spec,
                          start_state=cfg.cell_index(*cfg.start),
                          terminal_states=terminal)
