"""Finite-sample error bounds for model-based planning with a structured estimator.

The central quantity is the information count n: the smallest number of
informative observations any single structural parameter has received.  All
bounds decay in n.  Three layers build on each other: the expected L2 error
of the parameter estimate, a high-probability bound on how far the learned
model's one-step lookahead of the optimal value can drift, and finally a
high-probability sup-norm bound on the gap between the true optimal Q table
and the one planned inside the learned model.  The last bound inverts
numerically to a sample-size requirement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .structure import StructuralModelSpec


@dataclass(frozen=True)
class BoundInputs:
    """Problem constants shared by the bound formulas.

    num_pairs is the number of state-action pairs, delta the allowed failure
    probability, lipschitz a uniform constant relating parameter movement to
    relative row movement, sigma_mu the summed per-parameter standard
    deviations, and info_count the minimum informative-observation count.
    """

    gamma: float
    num_pairs: int
    delta: float
    lipschitz: float
    sigma_mu: float
    info_count: int

    def __post_init__(self) -> None:
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.num_pairs < 1:
            raise ValueError("num_pairs must be positive")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.lipschitz < 0.0 or self.sigma_mu < 0.0:
            raise ValueError("lipschitz and sigma_mu must be nonnegative")
        if self.info_count < 1:
            raise ValueError("info_count must be positive")

    @property
    def beta(self) -> float:
        return 1.0 / (1.0 - self.gamma)


def worst_case_sigma(num_params: int) -> float:
    """Summed standard deviations when nothing is known about the parameters.

    A Bernoulli parameter's standard deviation is at most 1/2, attained at
    p = 1/2, so the sum over parameters is bounded by num_params / 2.
    """
    if num_params < 0:
        raise ValueError("num_params must be nonnegative")
    return 0.5 * num_params


def plug_in_sigma(probs: np.ndarray) -> float:
    """Summed standard deviations evaluated at known (or estimated) values."""
    p = np.asarray(probs, dtype=np.float64)
    if np.any((p < 0.0) | (p > 1.0)):
        raise ValueError("probabilities must lie in [0, 1]")
    return float(np.sum(np.sqrt(p * (1.0 - p))))


def mean_param_error_bound(sigma_mu: float, info_count: int) -> float:
    """Upper bound on the expected L2 error of the parameter estimate."""
    if info_count <= 0:
        raise ValueError("info_count must be positive")
    if sigma_mu < 0.0:
        raise ValueError("sigma_mu must be nonnegative")
    return sigma_mu / math.sqrt(info_count)


def lookahead_deviation_terms(inputs: BoundInputs) -> tuple[float, float]:
    """Constants (coefficient, offset) bounding the learned model's lookahead drift.

    With probability 1 - delta, the gap between the true and learned-model
    one-step lookahead of the optimal value is within
    coefficient * sqrt(per-pair value variance) + offset, entrywise.
    """
    g, n, d = inputs.gamma, inputs.num_pairs, inputs.delta
    nk, beta = inputs.info_count, inputs.beta
    coefficient = math.sqrt(2.0 / nk * math.log(2.0 * n / d))
    offset = (
        g * beta * inputs.lipschitz * inputs.sigma_mu / math.sqrt(nk)
        + (5.0 * (g * beta) ** (4.0 / 3.0) / nk * math.log(6.0 * n / d)) ** 0.75
        + 3.0 * beta ** 2 / nk * math.log(12.0 * n / d)
    )
    return coefficient, offset


def q_error_bound(inputs: BoundInputs) -> float:
    """High-probability sup-norm gap between true and model-based optimal Q.

    Holds with probability at least 1 - delta.  The first term vanishes for
    models whose rows do not move with the parameters (lipschitz = 0) or
    whose parameters are deterministic (sigma_mu = 0).
    """
    g, n, d = inputs.gamma, inputs.num_pairs, inputs.delta
    nk, beta = inputs.info_count, inputs.beta
    return (
        g * beta ** 2 * inputs.lipschitz * inputs.sigma_mu / math.sqrt(nk)
        + math.sqrt(4.0 * beta ** 3 / nk * math.log(4.0 * n / d))
        + (5.0 * (g * beta ** 2) ** (4.0 / 3.0) / nk * math.log(12.0 * n / d)) ** 0.75
        + 3.0 * beta ** 3 / nk * math.log(24.0 * n / d)
    )


_MAX_SAMPLES = 2 ** 62


def samples_for_accuracy(target_eps: float, *, gamma: float, num_pairs: int,
                         delta: float, lipschitz: float,
                         sigma_mu: float) -> int:
    """Smallest information count whose q_error_bound meets target_eps.

    The bound is strictly decreasing in the information count, so a doubling
    search brackets the answer and integer bisection pins it down exactly.
    """
    if target_eps <= 0.0:
        raise ValueError("target accuracy must be positive")

    def eps_at(nk: int) -> float:
        return q_error_bound(BoundInputs(gamma, num_pairs, delta,
                                         lipschitz, sigma_mu, nk))

    hi = 1
    while eps_at(hi) > target_eps:
        hi *= 2
        if hi > _MAX_SAMPLES:
            raise ValueError(
                f"accuracy {target_eps} not reachable within {_MAX_SAMPLES} samples")
    lo = max(1, hi // 2)
    while lo < hi:
        mid = (lo + hi) // 2
        if eps_at(mid) <= target_eps:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class RegimeReport:
    """How the parameter count compares to the scale of the pair count.

    The informational sample-size scales drop all absolute constants: with
    few parameters (at most sqrt(log num_pairs)) the requirement grows like
    beta^4 L^2 / eps^2 times log(num_pairs / delta); with up to log num_pairs
    parameters the log factor squares.
    """

    num_params: int
    sqrt_log_pairs: float
    log_pairs: float
    tier: str
    scale_few_params: float
    scale_many_params: float


def regime_report(num_params: int, target_eps: float,
                  inputs: BoundInputs) -> RegimeReport:
    log_pairs = math.log(inputs.num_pairs)
    sqrt_log = math.sqrt(log_pairs)
    if num_params <= sqrt_log:
        tier = "few-params"
    elif num_params <= log_pairs:
        tier = "log-params"
    else:
        tier = "many-params"
    base = inputs.beta ** 4 * inputs.lipschitz ** 2 / target_eps ** 2
    log_term = math.log(inputs.num_pairs / inputs.delta)
    return RegimeReport(num_params, sqrt_log, log_pairs, tier,
                        base * log_term, base * log_term ** 2)


@dataclass(frozen=True)
class LipschitzEstimate:
    value: float
    pairs_sampled: int


def estimate_lipschitz(spec: StructuralModelSpec, num_pairs: int = 10_000,
                       rng: np.random.Generator | None = None) -> LipschitzEstimate:
    """Numerical lower estimate of the uniform row-sensitivity constant.

    Samples random parameter pairs in the unit box and maximizes, over pairs
    and over support cells with positive true probability, the ratio of the
    cell's movement to the true cell probability times the parameter
    distance.  Monotone in num_pairs; never exceeds the true constant.
    """
    if num_pairs < 1:
        raise ValueError("num_pairs must be at least 1")
    if spec.true_params is None:
        raise ValueError("estimation needs true_params on the model spec")
    rng = rng or np.random.default_rng()
    true_cells = spec.reconstruct_data(spec.true_params)
    positive = true_cells > 0.0
    denom = true_cells[positive]
    best = 0.0
    m = spec.num_params
    for _ in range(num_pairs):
        mu_a = rng.random(m)
        mu_b = rng.random(m)
        dist = float(np.linalg.norm(mu_a - mu_b))
        if dist == 0.0:
            continue
        moved = np.abs(spec.reconstruct_data(mu_a) - spec.reconstruct_data(mu_b))
        ratio = float(np.max(moved[positive] / denom)) / dist
        best = max(best, ratio)
    return LipschitzEstimate(best, num_pairs)


def bound_report(inputs: BoundInputs, num_params: int,
                 target_eps: float | None = None) -> str:
    """Plain-text report of every bound at the given inputs."""
    coeff, offset = lookahead_deviation_terms(inputs)
    eps = q_error_bound(inputs)
    lines = [
        f"pairs={inputs.num_pairs} gamma={inputs.gamma} delta={inputs.delta}",
        f"lipschitz={inputs.lipschitz:.6g} sigma_mu={inputs.sigma_mu:.6g} "
        f"info_count={inputs.info_count}",
        f"mean parameter error bound: "
        f"{mean_param_error_bound(inputs.sigma_mu, inputs.info_count):.6g}",
        f"lookahead deviation: coefficient={coeff:.6g} offset={offset:.6g}",
        f"q error bound (prob {1 - inputs.delta:g}): {eps:.6g}",
    ]
    report = regime_report(num_params, target_eps if target_eps is not None
                           else eps, inputs)
    lines.append(
        f"parameter regime: {report.tier} "
        f"(params={num_params}, sqrt(log pairs)={report.sqrt_log_pairs:.3g}, "
        f"log pairs={report.log_pairs:.3g})")
    if target_eps is not None:
        need = samples_for_accuracy(
            target_eps, gamma=inputs.gamma, num_pairs=inputs.num_pairs,
            delta=inputs.delta, lipschitz=inputs.lipschitz,
            sigma_mu=inputs.sigma_mu)
        lines.append(f"info count for accuracy {target_eps:g}: {need}")
        lines.append(f"info scale at few params: {report.scale_few_params:.6g}")
        lines.append(f"info scale at many params: "
                     f"{report.scale_many_params:.6g}")
    return "\n".join(lines)
