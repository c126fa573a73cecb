"""Signature-matrix fitness criteria behind one maximize-me interface.

Five criteria: estimated sum capacity, simulated BER, and three
constellation measures (minimum distance, Q-distance, exponential
distance).  Criteria that are natively minimized enter the fitness as
their negation, so the optimizer always maximizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .ber import q_function, simulate_ber
from .capacity import estimate_capacity
from .model import Constellation, SignatureMatrix, build_constellation

KINDS = ("capacity", "ber", "md", "qd", "ed")
STOCHASTIC_KINDS = ("capacity", "ber")


@dataclass(frozen=True)
class CriterionSpec:
    """Which fitness to optimize plus its evaluation parameters.

    Stochastic kinds (capacity, ber) are scored on `eval_budget` draws
    with a seed fixed per optimizer generation, so all individuals within
    one generation see the same randomness.
    """

    kind: str
    sigma: float | None = None
    eval_budget: int = 20_000
    seed_policy: str = "generation"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.kind != "md":
            if self.sigma is None or not self.sigma > 0:
                raise ValueError(f"criterion {self.kind!r} needs sigma > 0")
        if self.kind in STOCHASTIC_KINDS and self.eval_budget < 100:
            raise ValueError("eval_budget must be at least 100 for stochastic kinds")
        if self.seed_policy != "generation":
            raise ValueError("only the per-generation seed policy is supported")


def q_approx(x) -> float | np.ndarray:
    """Gaussian-shaped curve fit to the tail function: 0.7*exp(-((x+1)/1.6)**2)."""
    x = np.asarray(x, dtype=float)
    out = 0.7 * np.exp(-(((x + 1.0) / 1.6) ** 2))
    return float(out) if out.ndim == 0 else out


def min_distance(cons: Constellation) -> float:
    """Smallest pairwise distance between constellation points (0 if duplicated)."""
    if cons.size < 2:
        raise ValueError("need at least two constellation points")
    return float(pdist(cons.points).min())


def q_distance(cons: Constellation, sigma: float) -> float:
    """Sum over ordered point pairs of Q(distance / (2 sigma)); minimize."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = pdist(cons.points)
    return float(2.0 * np.sum(q_function(d / (2.0 * sigma))))


def exp_distance(cons: Constellation, sigma: float) -> float:
    """Q-distance with the tail replaced by its exponential fit; minimize.

    Sum over ordered pairs of exp(-((d/(2 sigma) + 1) / 1.6)**2).  The
    fit's constant prefactor multiplies every term equally and is dropped.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = pdist(cons.points)
    return float(2.0 * np.sum(np.exp(-(((d / (2.0 * sigma) + 1.0) / 1.6) ** 2))))


def fitness(spec: CriterionSpec, A: SignatureMatrix, seed: int = 0) -> float:
    """Score A under spec; larger is always better."""
    if spec.kind == "capacity":
        return estimate_capacity(A, spec.sigma, spec.eval_budget, seed).sum_bits
    if spec.kind == "ber":
        return -simulate_ber(A, spec.sigma, spec.eval_budget, seed).ber
    cons = build_constellation(A)
    if spec.kind == "md":
        return min_distance(cons)
    if spec.kind == "qd":
        return -q_distance(cons, spec.sigma)
    return -exp_distance(cons, spec.sigma)
