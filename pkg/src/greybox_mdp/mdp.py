"""Finite discounted MDP containers and metrics.

States and actions are integer-indexed.  Transition rows are stored in one
scipy CSR matrix of shape (num_states * num_actions, num_states), with the
pair (s, a) mapped to row s * num_actions + a.  Rewards depend on (s, a)
only and live in a declared interval [r_min, r_max], which also yields the
range that any Q table can occupy under discounting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

# Type aliases: a Q table is a float array of shape (num_states, num_actions),
# a policy is an int array of shape (num_states,).
QTable = np.ndarray
PolicyVector = np.ndarray


def pair_index(state: int, action: int, num_actions: int) -> int:
    """Row index of the state-action pair in the transition matrix."""
    return state * num_actions + action


def horizon_scale(gamma: float) -> float:
    """Effective horizon 1 / (1 - gamma)."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie strictly inside (0, 1), got {gamma}")
    return 1.0 / (1.0 - gamma)


@dataclass
class FiniteMdp:
    """A finite discounted MDP with sparse transition rows.

    The constructor performs shape checks only; semantic checks (row sums,
    probability signs, reward range) are deferred to :func:`validate_mdp`
    so that malformed models can be built on purpose and reported on.
    """

    num_states: int
    num_actions: int
    transitions: sp.csr_matrix
    rewards: np.ndarray
    gamma: float
    r_min: float
    r_max: float

    def __post_init__(self):
        n, m = self.num_states, self.num_actions
        self.transitions = sp.csr_matrix(self.transitions)
        self.rewards = np.asarray(self.rewards, dtype=np.float64)
        if self.transitions.shape != (n * m, n):
            raise ValueError(
                f"transition matrix shape {self.transitions.shape} does not "
                f"match ({n * m}, {n})"
            )
        if self.rewards.shape != (n, m):
            raise ValueError(
                f"reward array shape {self.rewards.shape} does not match ({n}, {m})"
            )
        self.rewards.flags.writeable = False

    @property
    def num_pairs(self) -> int:
        return self.num_states * self.num_actions

    def transition_row(self, state: int, action: int) -> np.ndarray:
        """Dense transition distribution over next states for one pair."""
        z = pair_index(state, action, self.num_actions)
        return np.asarray(self.transitions.getrow(z).todense()).ravel()

    def value_bounds(self) -> tuple[float, float]:
        """Interval guaranteed to contain every entry of Q* and of any Q^pi."""
        beta = horizon_scale(self.gamma)
        return self.r_min * beta, self.r_max * beta


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate_mdp(mdp: FiniteMdp, tol: float = 1e-9) -> ValidationReport:
    """Check stochasticity, sign, reward range and discount constraints.

    Returns a report listing every violation with the offending pair named,
    rather than raising, so callers can surface all problems at once.
    """
    bad: list[str] = []
    if not 0.0 < mdp.gamma < 1.0:
        bad.append(f"gamma={mdp.gamma} outside (0, 1)")
    if not np.all(np.isfinite(mdp.rewards)):
        bad.append("rewards contain non-finite values")
    else:
        lo, hi = mdp.rewards.min(), mdp.rewards.max()
        if lo < mdp.r_min - tol or hi > mdp.r_max + tol:
            bad.append(
                f"rewards span [{lo}, {hi}] outside declared "
                f"[{mdp.r_min}, {mdp.r_max}]"
            )
    t = mdp.transitions
    if t.nnz and t.data.min() < -tol:
        worst = int(np.argmin(t.data))
        row = int(np.searchsorted(t.indptr, worst, side="right") - 1)
        s, a = divmod(row, mdp.num_actions)
        bad.append(f"negative probability {t.data[worst]} at (s={s}, a={a})")
    sums = np.asarray(t.sum(axis=1)).ravel()
    off = np.flatnonzero(np.abs(sums - 1.0) > tol)
    for row in off[:20]:
        s, a = divmod(int(row), mdp.num_actions)
        bad.append(f"row (s={s}, a={a}) sums to {sums[row]:.12g}")
    if len(off) > 20:
        bad.append(f"... and {len(off) - 20} more rows with bad sums")
    return ValidationReport(ok=not bad, violations=bad)


def sup_norm_diff(q1: QTable, q2: QTable) -> float:
    """Largest absolute entry-wise difference between two Q tables."""
    q1 = np.asarray(q1, dtype=np.float64)
    q2 = np.asarray(q2, dtype=np.float64)
    if q1.shape != q2.shape:
        raise ValueError(f"shape mismatch {q1.shape} vs {q2.shape}")
    if q1.size == 0:
        return 0.0
    return float(np.max(np.abs(q1 - q2)))


def from_dense(p: np.ndarray, rewards: np.ndarray, gamma: float,
               r_min: float | None = None, r_max: float | None = None) -> FiniteMdp:
    """Build an MDP from a dense (S, A, S) transition tensor."""
    p = np.asarray(p, dtype=np.float64)
    n, m, n2 = p.shape
    if n2 != n:
        raise ValueError(f"transition tensor shape {p.shape} is not (S, A, S)")
    rewards = np.asarray(rewards, dtype=np.float64)
    if r_min is None:
        r_min = float(rewards.min())
    if r_max is None:
        r_max = float(rewards.max())
    trans = sp.csr_matrix(p.reshape(n * m, n))
    trans.eliminate_zeros()
    return FiniteMdp(n, m, trans, rewards, gamma, r_min, r_max)


# ---------------------------------------------------------------------------
# Plain-text serialization.
#
# Line 1:  num_states num_actions gamma r_min r_max
# Then one line per pair in row order s * num_actions + a:
#   reward next_state prob next_state prob ...
# Floats are written with repr so a round trip is exact.
# ---------------------------------------------------------------------------

def mdp_to_text(mdp: FiniteMdp) -> str:
    lines = [
        f"{mdp.num_states} {mdp.num_actions} {float(mdp.gamma)!r} "
        f"{float(mdp.r_min)!r} {float(mdp.r_max)!r}"
    ]
    t = mdp.transitions
    r = mdp.rewards.ravel()
    for z in range(mdp.num_pairs):
        lo, hi = t.indptr[z], t.indptr[z + 1]
        parts = [repr(float(r[z]))]
        for j, p in zip(t.indices[lo:hi], t.data[lo:hi]):
            parts.append(str(int(j)))
            parts.append(repr(float(p)))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def mdp_from_text(text: str) -> FiniteMdp:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 5:
        raise ValueError("malformed header: expected 5 fields")
    n, m = int(head[0]), int(head[1])
    gamma, r_min, r_max = float(head[2]), float(head[3]), float(head[4])
    if len(lines) != 1 + n * m:
        raise ValueError(f"expected {n * m} pair lines, found {len(lines) - 1}")
    rewards = np.zeros(n * m)
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for z, line in enumerate(lines[1:]):
        fields = line.split()
        rewards[z] = float(fields[0])
        rest = fields[1:]
        if len(rest) % 2:
            raise ValueError(f"pair line {z} has a dangling field")
        for i in range(0, len(rest), 2):
            indices.append(int(rest[i]))
            data.append(float(rest[i + 1]))
        indptr.append(len(indices))
    trans = sp.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int32), np.array(indptr)),
        shape=(n * m, n),
    )
    return FiniteMdp(n, m, trans, rewards.reshape(n, m), gamma, r_min, r_max)


def save_mdp(mdp: FiniteMdp, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(mdp_to_text(mdp))


def load_mdp(path: str) -> FiniteMdp:
    with open(path) as fh:
        return mdp_from_text(fh.read())
