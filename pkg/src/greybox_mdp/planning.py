"""Exact planners for finite discounted MDPs.

Both planners work on the Q table.  Value iteration stops once the sup-norm
distance between successive tables is at or below the configured tolerance,
which bounds the true error by tolerance * gamma / (1 - gamma).  Policy
iteration evaluates each policy exactly with a dense linear solve, so its
output is accurate to solver precision and is the preferred route to
ground-truth tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mdp import FiniteMdp, PolicyVector, QTable


@dataclass
class PlannerConfig:
    residual_tolerance: float = 1e-10
    max_iterations: int = 100_000


class PlanningError(RuntimeError):
    pass


def bellman_backup(mdp: FiniteMdp, q: QTable) -> QTable:
    """One optimality backup: R + gamma * P max_a Q."""
    v = q.max(axis=1)
    nxt = mdp.rewards + mdp.gamma * (mdp.transitions @ v).reshape(q.shape)
    return nxt


def greedy_policy(q: QTable) -> PolicyVector:
    """Action of largest Q value per state; ties go to the lowest index."""
    return np.argmax(q, axis=1).astype(np.int64)


def value_iteration(mdp: FiniteMdp, config: PlannerConfig | None = None) -> QTable:
    """Iterate optimality backups until the residual falls to tolerance.

    Raises PlanningError (reporting the final residual) if max_iterations
    backups do not reach the tolerance.
    """
    cfg = config or PlannerConfig()
    q = np.zeros((mdp.num_states, mdp.num_actions))
    residual = np.inf
    for _ in range(cfg.max_iterations):
        nxt = bellman_backup(mdp, q)
        residual = float(np.max(np.abs(nxt - q)))
        q = nxt
        if residual <= cfg.residual_tolerance:
            return q
    raise PlanningError(
        f"value iteration did not reach tolerance {cfg.residual_tolerance} "
        f"within {cfg.max_iterations} iterations (final residual {residual})"
    )


def policy_evaluation(mdp: FiniteMdp, policy: PolicyVector) -> QTable:
    """Exact Q^pi via the dense linear system (I - gamma P^pi) V = R^pi."""
    n, m = mdp.num_states, mdp.num_actions
    rows = np.arange(n) * m + policy
    p_pi = np.asarray(mdp.transitions[rows].todense())
    r_pi = mdp.rewards[np.arange(n), policy]
    v = np.linalg.solve(np.eye(n) - mdp.gamma * p_pi, r_pi)
    return mdp.rewards + mdp.gamma * (mdp.transitions @ v).reshape(n, m)


def policy_iteration(mdp: FiniteMdp,
                     config: PlannerConfig | None = None) -> tuple[PolicyVector, QTable]:
    """Alternate exact evaluation and greedy improvement to a fixed point.

    Returns the optimal policy and its Q table.  Each sweep is asserted to
    be a monotone improvement up to solver round-off.
    """
    cfg = config or PlannerConfig()
    policy = greedy_policy(mdp.rewards)
    q = policy_evaluation(mdp, policy)
    for _ in range(cfg.max_iterations):
        improved = greedy_policy(q)
        if np.array_equal(improved, policy):
            return policy, q
        next_q = policy_evaluation(mdp, improved)
        # exact evaluation makes each sweep monotone up to round-off
        v_old = q[np.arange(mdp.num_states), policy]
        v_new = next_q[np.arange(mdp.num_states), improved]
        if np.min(v_new - v_old) < -1e-9:
            raise PlanningError(
                f"policy sweep regressed by {np.min(v_new - v_old)}"
            )
        policy, q = improved, next_q
    raise PlanningError(
        f"policy iteration did not stabilize within {cfg.max_iterations} sweeps"
    )
