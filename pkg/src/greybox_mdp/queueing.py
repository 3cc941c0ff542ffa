"""Admission-and-routing control of a multi-server queue with geometric events.

A controller sees a buffer holding l jobs (capacity B) and G heterogeneous
servers, each either idle or busy.  Per step, in order:

  1. The action requests a subset of servers.  Idle requested servers are
     assigned queued jobs lowest-index-first, as many as the buffer holds.
  2. Every server busy after assignment finishes its job independently with
     its own exit probability (a job assigned this step may finish this
     step).
  3. A new job arrives with the injection rate probability unless the
     pre-step buffer was full; an arriving job cannot be assigned until the
     next step.

The per-step cost is the number of jobs present before the step, queued or
in service, so rewards are their negation.  The unknown structural
parameters are the injection rate (index 0) and the G exit probabilities
(index i for server i).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .mdp import FiniteMdp
from .structure import LatentOutcome, StructuralModelSpec, TransitionRecord


@dataclass(frozen=True)
class QueueConfig:
    buffer: int = 8
    servers: int = 3
    injection_rate: float = 0.85
    exit_probabilities: tuple[float, ...] = (0.9, 0.01, 0.04)
    gamma: float = 0.9

    def __post_init__(self):
        if self.buffer < 1:
            raise ValueError("buffer must hold at least one job")
        if self.servers < 1:
            raise ValueError("need at least one server")
        if len(self.exit_probabilities) != self.servers:
            raise ValueError("one exit probability per server required")
        probs = (self.injection_rate, *self.exit_probabilities)
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError("rates must lie in [0, 1]")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie strictly inside (0, 1)")

    @property
    def num_states(self) -> int:
        return (self.buffer + 1) * (1 << self.servers)

    @property
    def num_actions(self) -> int:
        return 1 << self.servers

    @property
    def num_params(self) -> int:
        return self.servers + 1

    def true_params(self) -> np.ndarray:
        return np.array([self.injection_rate, *self.exit_probabilities])


def encode_queue_state(queue_len: int, busy_bits: int, servers: int) -> int:
    return queue_len * (1 << servers) + busy_bits


def decode_queue_state(state: int, servers: int) -> tuple[int, int]:
    """Returns (queue length, busy bitmask with server i at bit i - 1)."""
    return divmod(state, 1 << servers)[0], state & ((1 << servers) - 1)


def _assignment(queue_len: int, busy_bits: int, action_bits: int,
                servers: int) -> tuple[int, int]:
    """Deterministic assignment step: (jobs assigned, busy mask afterwards)."""
    free_requested = [i for i in range(servers)
                      if (action_bits >> i) & 1 and not (busy_bits >> i) & 1]
    n_assign = min(len(free_requested), queue_len)
    post = busy_bits
    for i in free_requested[:n_assign]:
        post |= 1 << i
    return n_assign, post


def queue_reward(config: QueueConfig, state: int) -> float:
    l, bits = decode_queue_state(state, config.servers)
    return -float(l + bin(bits).count("1"))


def queue_transition_row(config: QueueConfig, state: int, action: int,
                         params: np.ndarray | None = None) -> dict[int, float]:
    """Next-state distribution of one pair, by direct event enumeration.

    params overrides the configured (injection rate, exit probabilities)
    vector; entries must lie in [0, 1].
    """
    mu = config.true_params() if params is None else np.asarray(params, dtype=float)
    if mu.shape != (config.num_params,):
        raise ValueError(f"expected {config.num_params} parameters")
    if np.any(mu < 0.0) or np.any(mu > 1.0):
        raise ValueError("parameters outside [0, 1]")
    g = config.servers
    l, busy = decode_queue_state(state, g)
    if state >= config.num_states or l > config.buffer:
        raise ValueError(f"state {state} out of range")
    if not 0 <= action < config.num_actions:
        raise ValueError(f"action {action} out of range")
    n_assign, post = _assignment(l, busy, action, g)
    busy_list = [i for i in range(g) if (post >> i) & 1]
    arrivals = [(1, mu[0]), (0, 1.0 - mu[0])] if l < config.buffer else [(0, 1.0)]
    row: dict[int, float] = {}
    for dep_combo in itertools.product((0, 1), repeat=len(busy_list)):
        p_dep = 1.0
        bits = post
        for i, dep in zip(busy_list, dep_combo):
            p_dep *= mu[1 + i] if dep else 1.0 - mu[1 + i]
            if dep:
                bits &= ~(1 << i)
        for arr, p_arr in arrivals:
            p = p_dep * p_arr
            nxt = encode_queue_state(l - n_assign + arr, bits, g)
            row[nxt] = row.get(nxt, 0.0) + p
    return row


def sample_queue_step(config: QueueConfig, state: int, action: int,
                      rng: np.random.Generator) -> TransitionRecord:
    """Simulate one step, recording the latent bits in draw order.

    Draw order is fixed: one uniform for the arrival (only when the buffer
    has room), then one per busy-after-assignment server by increasing
    index.
    """
    g = config.servers
    l, busy = decode_queue_state(state, g)
    n_assign, post = _assignment(l, busy, action, g)
    latent: list[tuple[int, int]] = []
    arrival = 0
    if l < config.buffer:
        arrival = int(rng.random() < config.injection_rate)
        latent.append((0, arrival))
    bits = post
    for i in range(g):
        if (post >> i) & 1:
            dep = int(rng.random() < config.exit_probabilities[i])
            latent.append((1 + i, dep))
            if dep:
                bits &= ~(1 << i)
    nxt = encode_queue_state(l - n_assign + arrival, bits, g)
    return TransitionRecord(state, action, nxt, tuple(latent))


def decode_queue(config: QueueConfig, state: int, action: int,
                 next_state: int) -> tuple[tuple[int, int], ...]:
    """Invert the step semantics: recover every latent bit from (s, a, s').

    The queue is fully decodable: assignment is deterministic given (s, a),
    each busy-after-assignment server's departure shows in its next busy
    bit, and the arrival shows in the next queue length.
    """
    g = config.servers
    l, busy = decode_queue_state(state, g)
    n_assign, post = _assignment(l, busy, action, g)
    l2, bits2 = decode_queue_state(next_state, g)
    latent: list[tuple[int, int]] = []
    if l < config.buffer:
        arrival = l2 - (l - n_assign)
        if arrival not in (0, 1):
            raise ValueError(
                f"next queue length {l2} unreachable from ({state}, {action})"
            )
        latent.append((0, arrival))
    elif l2 != l - n_assign:
        raise ValueError(f"next queue length {l2} unreachable from full buffer")
    if bits2 & ~post:
        raise ValueError("a server turned busy without being assigned")
    for i in range(g):
        if (post >> i) & 1:
            latent.append((1 + i, 0 if (bits2 >> i) & 1 else 1))
    return tuple(latent)


def queue_informative_pairs(config: QueueConfig) -> list[np.ndarray]:
    """Closed-form informative sets: the injection rate is revealed whenever
    the buffer has room, server i whenever it is busy after assignment."""
    g = config.servers
    members: list[list[int]] = [[] for _ in range(config.num_params)]
    for state in range(config.num_states):
        l, busy = decode_queue_state(state, g)
        for action in range(config.num_actions):
            z = state * config.num_actions + action
            if l < config.buffer:
                members[0].append(z)
            _, post = _assignment(l, busy, action, g)
            for i in range(g):
                if (post >> i) & 1:
                    members[1 + i].append(z)
    return [np.array(m, dtype=np.int64) for m in members]


def _queue_outcomes(config: QueueConfig) -> list[list[LatentOutcome]]:
    g = config.servers
    outcomes: list[list[LatentOutcome]] = []
    for state in range(config.num_states):
        l, busy = decode_queue_state(state, g)
        for action in range(config.num_actions):
            n_assign, post = _assignment(l, busy, action, g)
            busy_list = [i for i in range(g) if (post >> i) & 1]
            outs: list[LatentOutcome] = []
            arr_branches = ([(1, (0,), ()), (0, (), (0,))]
                            if l < config.buffer else [(0, (), ())])
            for dep_combo in itertools.product((0, 1), repeat=len(busy_list)):
                pos = [1 + i for i, d in zip(busy_list, dep_combo) if d]
                neg = [1 + i for i, d in zip(busy_list, dep_combo) if not d]
                bits = post
                for i, d in zip(busy_list, dep_combo):
                    if d:
                        bits &= ~(1 << i)
                for arr, apos, aneg in arr_branches:
                    nxt = encode_queue_state(l - n_assign + arr, bits, g)
                    outs.append(LatentOutcome(
                        1.0,
                        tuple(apos) + tuple(pos),
                        tuple(aneg) + tuple(neg),
                        nxt,
                    ))
            outcomes.append(outs)
    return outcomes


@dataclass
class QueueModel:
    """Bundle of the true MDP, the structural model and rollout metadata."""

    config: QueueConfig
    mdp: FiniteMdp
    spec: StructuralModelSpec
    start_state: int | None = None          # rollouts reset to a random state
    terminal_states: frozenset[int] = frozenset()
    rollout_horizon: int = 200

    def sample_step(self, state: int, action: int,
                    rng: np.random.Generator) -> TransitionRecord:
        return sample_queue_step(self.config, state, action, rng)

    def decode(self, state: int, action: int,
               next_state: int) -> tuple[tuple[int, int], ...]:
        return decode_queue(self.config, state, action, next_state)


def build_queue(config: QueueConfig | None = None) -> QueueModel:
    """Construct the true MDP (via direct row enumeration) and the
    structural model spec (via the latent outcome table)."""
    cfg = config or QueueConfig()
    n, m = cfg.num_states, cfg.num_actions
    rewards = np.empty((n, m))
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for state in range(n):
        r = queue_reward(cfg, state)
        for action in range(m):
            rewards[state, action] = r
            row = queue_transition_row(cfg, state, action)
            for nxt in sorted(row):
                indices.append(nxt)
                data.append(row[nxt])
            indptr.append(len(indices))
    trans = sp.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int32), np.array(indptr)),
        shape=(n * m, n),
    )
    r_min = -float(cfg.buffer + cfg.servers)
    mdp = FiniteMdp(n, m, trans, rewards, cfg.gamma, r_min, 0.0)
    names = ["injection_rate"] + [f"exit_prob_{i + 1}" for i in range(cfg.servers)]
    spec = StructuralModelSpec(
        num_states=n, num_actions=m, num_params=cfg.num_params,
        param_names=names, outcomes=_queue_outcomes(cfg),
        rewards=rewards, gamma=cfg.gamma, r_min=r_min, r_max=0.0,
        defaults=np.full(cfg.num_params, 0.5),
        active=np.ones(cfg.num_params, dtype=bool),
        true_params=cfg.true_params(),
    )
    return QueueModel(config=cfg, mdp=mdp, spec=spec)
