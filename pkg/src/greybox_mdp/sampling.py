"""Sample collection strategies and the model-free Q-learning baseline.

Two collection modes feed the estimators.  Generative mode queries every
sampleable state-action pair in round-robin order, so any prefix of the
stream is maximally balanced (per-pair counts differ by at most one) and a
single stream serves every checkpoint of an experiment.  Rollout mode walks
the environment under a behavior policy, resetting at terminal states or on
a fixed period, and is the realistic-exploration comparison point.

Q-learning here is the standard tabular update with epsilon-greedy behavior
and a polynomial per-pair learning-rate schedule.  It samples transitions
from the true model rows, tracks per-pair visit counts, and can report a
sup-norm error trace against a reference Q table at chosen step counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .mdp import FiniteMdp, sup_norm_diff
from .structure import (EstimatorState, StrictUpdater, StructuralModelSpec,
                        update_entrywise_batch, update_from_annotations)


@dataclass(frozen=True)
class CollectionPlan:
    mode: str                    # "generative" or "rollout"
    budget: int
    horizon: int | None = None   # rollout reset period; None = terminal-only

    def __post_init__(self) -> None:
        if self.mode not in ("generative", "rollout"):
            raise ValueError(f"unknown collection mode {self.mode!r}")
        if self.budget < 0:
            raise ValueError("budget must be nonnegative")
        if self.horizon is not None and self.horizon < 1:
            raise ValueError("horizon must be positive when set")


@dataclass
class SampleBatch:
    """A block of observed transitions, with whatever latent detail the
    collection path could attach.

    Generative collection records the sampled outcome ids, from which exact
    latent annotations are recovered in bulk.  Rollouts carry the simulator's
    per-record annotation tuples instead.
    """

    pairs: np.ndarray
    next_states: np.ndarray
    outcome_ids: np.ndarray | None = None
    latents: list[tuple[tuple[int, int], ...]] | None = None

    def __len__(self) -> int:
        return len(self.pairs)


def generative_stream(model, budget: int, rng: np.random.Generator,
                      chunk: int = 1_000_000):
    """Yield SampleBatches of at most `chunk` records, round-robin over pairs.

    The concatenation of all yielded batches visits the model's sampleable
    pairs cyclically, so after any prefix of length j the per-pair visit
    counts are floor(j / P) or floor(j / P) + 1.
    """
    pairs = np.sort(model.spec.sampleable_pairs())
    num = len(pairs)
    done = 0
    while done < budget:
        take = min(chunk, budget - done)
        idx = (done + np.arange(take)) % num
        z = pairs[idx]
        nxt, out_ids = model.spec.sample_pairs_batch(z, rng)
        yield SampleBatch(z, nxt, outcome_ids=out_ids)
        done += take


class TrueRowSampler:
    """Draws next states from the true transition rows of an MDP.

    The draw consults only the MDP itself, never a structural model's
    outcome table, so different model specs fed from one sampler see the
    bitwise-identical transition stream.
    """

    def __init__(self, mdp: FiniteMdp):
        trans = mdp.transitions
        self._cum = np.cumsum(trans.data)
        self._indptr = trans.indptr
        self._cols = trans.indices

    def sample(self, z_arr: np.ndarray,
               rng: np.random.Generator) -> np.ndarray:
        lo = self._indptr[z_arr]
        hi = self._indptr[z_arr + 1]
        if np.any(lo == hi):
            raise ValueError("cannot sample from an all-zero transition row")
        base = np.where(lo > 0, self._cum[lo - 1], 0.0)
        span = self._cum[hi - 1] - base
        targets = base + rng.random(len(z_arr)) * span
        idx = np.searchsorted(self._cum, targets, side="right")
        idx = np.clip(idx, lo, hi - 1)
        return self._cols[idx].astype(np.int64)


def generative_collect(model, budget: int,
                       rng: np.random.Generator) -> SampleBatch:
    """Materialize a full generative stream as one batch."""
    parts = list(generative_stream(model, budget, rng))
    if not parts:
        empty = np.empty(0, dtype=np.int64)
        return SampleBatch(empty, empty.copy(), outcome_ids=empty.copy())
    return SampleBatch(
        np.concatenate([p.pairs for p in parts]),
        np.concatenate([p.next_states for p in parts]),
        outcome_ids=np.concatenate([p.outcome_ids for p in parts]))


def rollout_collect(model, budget: int, rng: np.random.Generator,
                    policy: np.ndarray | None = None,
                    collect_latents: bool = True) -> SampleBatch:
    """Walk the environment for `budget` steps under a behavior policy.

    The policy is uniform random unless an explicit per-state action array is
    given.  Terminal states reset the walk to the model's start state; when
    the model declares a rollout horizon the walk additionally resets on that
    period, to a uniformly random state if no start state is set.  Latent
    annotation storage can be switched off for long walks whose consumers
    only need the (pair, next state) stream.
    """
    num_states = model.mdp.num_states
    num_actions = model.mdp.num_actions
    terminal = model.spec.terminal_states
    horizon = getattr(model, "rollout_horizon", None)

    def reset() -> int:
        if model.start_state is not None:
            return model.start_state
        return int(rng.integers(num_states))

    z_out = np.empty(budget, dtype=np.int64)
    next_out = np.empty(budget, dtype=np.int64)
    latents: list[tuple[tuple[int, int], ...]] = []
    s = reset()
    since_reset = 0
    for t in range(budget):
        if s in terminal:
            s = reset()
            since_reset = 0
        a = int(rng.integers(num_actions)) if policy is None else int(policy[s])
        rec = model.sample_step(s, a, rng)
        z_out[t] = s * num_actions + a
        next_out[t] = rec.next_state
        if collect_latents:
            latents.append(rec.latent)
        s = rec.next_state
        since_reset += 1
        if horizon is not None and since_reset >= horizon:
            s = reset()
            since_reset = 0
    return SampleBatch(z_out, next_out,
                       latents=latents if collect_latents else None)


def flatten_latents(latents: list[tuple[tuple[int, int], ...]]):
    """Split per-record annotation tuples into flat parameter and bit arrays."""
    par = np.array([i for rec in latents for i, _ in rec], dtype=np.int64)
    bit = np.array([b for rec in latents for _, b in rec], dtype=np.int64)
    return par, bit


def apply_batch(est: EstimatorState, spec: StructuralModelSpec,
                batch: SampleBatch, mode: str = "strict",
                updater: StrictUpdater | None = None) -> None:
    """Fold one SampleBatch into an estimator under an extraction mode.

    The entry-wise baseline ignores the mode (its decode needs only the
    observed cell).  Oracle mode trusts whatever latent detail the batch
    carries; strict mode re-derives bits from (pair, next state) alone.
    Passing a prebuilt StrictUpdater avoids recomputing its tables per call.
    """
    if spec.is_entrywise:
        update_entrywise_batch(est, spec, batch.pairs, batch.next_states)
    elif mode == "oracle":
        if batch.outcome_ids is not None:
            par, bit = spec.annotations_for(batch.outcome_ids)
        elif batch.latents is not None:
            par, bit = flatten_latents(batch.latents)
        else:
            raise ValueError("batch carries no latent detail for oracle mode")
        update_from_annotations(est, spec.num_params, par, bit, len(batch))
    elif mode == "strict":
        (updater or StrictUpdater(spec)).apply(est, batch.pairs,
                                               batch.next_states)
    else:
        raise ValueError(f"unknown extraction mode {mode!r}")


# ---------------------------------------------------------------------------
# Tabular Q-learning.
# ---------------------------------------------------------------------------

@dataclass
class QLearningResult:
    q: np.ndarray
    visit_counts: np.ndarray          # per state-action pair
    trace_steps: list[int] = field(default_factory=list)
    trace_errors: list[float] = field(default_factory=list)


def q_learning(mdp: FiniteMdp, steps: int, rng: np.random.Generator,
               epsilon: float = 0.1, lr_exponent: float = 0.8,
               start_state: int | None = None,
               terminal_states: frozenset[int] = frozenset(),
               reference_q: np.ndarray | None = None,
               checkpoints: tuple[int, ...] = (),
               observer=None, on_checkpoint=None,
               chunk: int = 65536) -> QLearningResult:
    """Run epsilon-greedy tabular Q-learning against the true model.

    The learning rate for a pair on its v-th visit is v ** -lr_exponent.
    Terminal states reset the walk to start_state.  When an observer is
    given it receives every (pair, next_state) chunk in stream order, so a
    second estimator can consume the identical experience.  on_checkpoint,
    when given, is called as on_checkpoint(step, q, visit_counts) at every
    checkpoint with the live (not copied) arrays.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    n, m = mdp.num_states, mdp.num_actions
    row_cdf = np.cumsum(mdp.transitions.toarray(), axis=1)
    rewards = np.asarray(mdp.rewards, dtype=np.float64)
    q = np.zeros((n, m))
    visits = np.zeros(n * m, dtype=np.int64)
    marks = sorted(set(checkpoints))
    result = QLearningResult(q, visits)

    def reset() -> int:
        if start_state is not None:
            return start_state
        return int(rng.integers(n))

    s = reset()
    draws = rng.random(2 * chunk)
    pos = 0
    obs_z: list[int] = []
    obs_next: list[int] = []
    for t in range(steps):
        if pos + 2 > len(draws):
            draws = rng.random(2 * chunk)
            pos = 0
        if s in terminal_states:
            s = reset()
        u_act, u_next = draws[pos], draws[pos + 1]
        pos += 2
        if u_act < epsilon:
            a = min(int(u_act / epsilon * m), m - 1)
        else:
            a = int(np.argmax(q[s]))
        z = s * m + a
        nxt = int(np.searchsorted(row_cdf[z], u_next, side="right"))
        if nxt >= n:
            nxt = n - 1
        visits[z] += 1
        lr = visits[z] ** -lr_exponent
        q[s, a] += lr * (rewards[s, a] + mdp.gamma * q[nxt].max() - q[s, a])
        if observer is not None:
            obs_z.append(z)
            obs_next.append(nxt)
            if len(obs_z) >= chunk:
                observer(np.array(obs_z, dtype=np.int64),
                         np.array(obs_next, dtype=np.int64))
                obs_z.clear()
                obs_next.clear()
        s = nxt
        if marks and t + 1 == marks[0]:
            marks.pop(0)
            result.trace_steps.append(t + 1)
            if reference_q is not None:
                result.trace_errors.append(sup_norm_diff(q, reference_q))
            if on_checkpoint is not None:
                # flush pending observations first so consumers of the
                # observed stream are in sync with the visit counts
                if observer is not None and obs_z:
                    observer(np.array(obs_z, dtype=np.int64),
                             np.array(obs_next, dtype=np.int64))
                    obs_z.clear()
                    obs_next.clear()
                on_checkpoint(t + 1, q, visits)
    if observer is not None and obs_z:
        observer(np.array(obs_z, dtype=np.int64),
                 np.array(obs_next, dtype=np.int64))
    return result
