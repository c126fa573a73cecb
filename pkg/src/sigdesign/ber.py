"""Maximum-likelihood decoding, BER simulation, and the pairwise union bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import erfc

from . import _rng
from .model import MAX_USERS, Constellation, SignatureMatrix, build_constellation

_DECODE_SLAB = 512


@dataclass(frozen=True)
class BerEstimate:
    """Monte-Carlo bit-error-rate estimate.

    Bit errors are the primary measure; block (vector) errors are kept as
    a secondary field because the union bound natively bounds them.
    """

    ber: float
    bit_errors: int
    bits_simulated: int
    std_error: float
    sigma: float
    block_error_rate: float
    block_errors: int
    blocks: int
    block_std_error: float


def q_function(x) -> float | np.ndarray:
    """Exact Gaussian tail probability Q(x) via the complementary error function."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def _nearest_index(points: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Index of the nearest constellation point per row of ys.

    Ties go to the lowest index: argmin takes the first minimum within a
    slab and the cross-slab update is strict.
    """
    best_d = np.full(ys.shape[0], np.inf)
    best_i = np.zeros(ys.shape[0], dtype=np.int64)
    rows = np.arange(ys.shape[0])
    for start in range(0, points.shape[0], _DECODE_SLAB):
        zs = points[start : start + _DECODE_SLAB]
        d2 = ((ys[:, None, :] - zs[None, :, :]) ** 2).sum(axis=2)
        j = np.argmin(d2, axis=1)
        d = d2[rows, j]
        upd = d < best_d
        best_d[upd] = d[upd]
        best_i[upd] = start + j[upd]
    return best_i


def ml_decode(cons: Constellation, y) -> np.ndarray:
    """Input vector whose noiseless point is nearest to y (lowest index on ties)."""
    y = np.asarray(y, dtype=float)
    if y.shape != (cons.m,):
        raise ValueError(f"y must have shape ({cons.m},)")
    return cons.inputs[_nearest_index(cons.points, y[None, :])[0]]


def simulate_ber(
    A: SignatureMatrix,
    sigma: float,
    blocks: int,
    seed: int = 0,
    max_users: int = MAX_USERS,
) -> BerEstimate:
    """ML-decode `blocks` random transmissions and count bit errors.

    Deterministic per seed and worker count; draws come from the same
    per-block substreams as the capacity estimator, so matched seeds share
    inputs and (sigma-scaled) noise.
    """
    if blocks < 1:
        raise ValueError("need at least one block")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    cons = build_constellation(A, max_users=max_users)
    at = A.entries.T
    n_blocks = -(-blocks // _rng.BLOCK)

    def one_block(b):
        signs, unit = _rng.draw_block(seed, b, A.n, A.m)
        ys = signs @ at + sigma * unit
        decoded = cons.inputs[_nearest_index(cons.points, ys)]
        return decoded != signs

    wrong = np.concatenate(_rng.map_blocks(one_block, n_blocks))[:blocks]
    bit_errors = int(wrong.sum())
    block_errors = int(wrong.any(axis=1).sum())
    bits = blocks * A.n
    ber = bit_errors / bits
    bler = block_errors / blocks
    return BerEstimate(
        ber=ber,
        bit_errors=bit_errors,
        bits_simulated=bits,
        std_error=math.sqrt(ber * (1.0 - ber) / bits),
        sigma=float(sigma),
        block_error_rate=bler,
        block_errors=block_errors,
        blocks=blocks,
        block_std_error=math.sqrt(bler * (1.0 - bler) / blocks),
    )


def union_bound(cons: Constellation, sigma: float) -> float:
    """Pairwise upper bound on the ML block-error probability.

    2**-n * sum over ordered pairs i != j of Q(||Z_i - Z_j|| / (2 sigma)),
    with the exact tail function.  Not clamped: the bound may exceed 1.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    d = pdist(cons.points)
    return float(2.0 ** (-cons.n) * 2.0 * np.sum(q_function(d / (2.0 * sigma))))
