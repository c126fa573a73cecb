import math

import numpy as np
import numpy.testing as npt
import pytest

from sigdesign import (
    SignatureMatrix,
    build_constellation,
    ml_decode,
    q_function,
    random_normalized,
    simulate_ber,
    union_bound,
)

Q_AT_1 = 0.15865525393145707  # Gaussian tail at 1, from the tail quadrature

SCALAR_ONE = SignatureMatrix([[1.0]])


class TestQFunction:
    def test_half_at_zero(self):
        assert q_function(0.0) == 0.5

    def test_reference_value(self):
        assert q_function(1.0) == pytest.approx(Q_AT_1, rel=1e-12)

    def test_tail_quadrature_crosscheck(self):
        # independent oracle: integrate the standard normal density on [1, 9]
        from scipy.integrate import quad

        val, _ = quad(lambda t: math.exp(-t * t / 2) / math.sqrt(2 * math.pi), 1.0, 9.0)
        assert q_function(1.0) == pytest.approx(val, rel=1e-10)


class TestMlDecode:
    def test_exact_point_decodes_to_its_input(self):
        cons = build_constellation(random_normalized(2, 3, seed=4))
        assert len(np.unique(cons.points.round(12), axis=0)) == cons.size
        for i in (0, 3, 7):
            npt.assert_array_equal(ml_decode(cons, cons.points[i]), cons.inputs[i])

    def test_orthonormal_sign_decision(self):
        cons = build_constellation(SignatureMatrix(np.eye(2)))
        npt.assert_array_equal(ml_decode(cons, [0.9, -1.2]), [1.0, -1.0])

    def test_tie_breaks_to_lowest_index(self):
        # y=(1,0) is exactly equidistant from points 0=(1,1) and 2=(1,-1)
        cons = build_constellation(SignatureMatrix(np.eye(2)))
        npt.assert_array_equal(ml_decode(cons, [1.0, 0.0]), cons.inputs[0])

    def test_all_points_tie(self):
        cons = build_constellation(SignatureMatrix(np.eye(2)))
        npt.assert_array_equal(ml_decode(cons, [0.0, 0.0]), cons.inputs[0])

    def test_dimension_check(self):
        cons = build_constellation(SCALAR_ONE)
        with pytest.raises(ValueError):
            ml_decode(cons, [1.0, 0.0])


class TestSimulateBer:
    def test_noiseless_separable(self):
        A = random_normalized(2, 3, seed=4)  # distinct points, checked above
        est = simulate_ber(A, 1e-6, blocks=10_000, seed=1)
        assert est.bit_errors == 0
        assert est.ber == 0.0

    def test_scalar_bpsk_matches_tail(self):
        est = simulate_ber(SCALAR_ONE, 1.0, blocks=100_000, seed=2)
        assert abs(est.ber - Q_AT_1) < 3 * est.std_error

    def test_pure_noise_limit(self):
        est = simulate_ber(SCALAR_ONE, 1e6, blocks=50_000, seed=3)
        assert abs(est.ber - 0.5) < 3 * est.std_error

    def test_fields_consistent(self):
        est = simulate_ber(random_normalized(2, 3, seed=5), 0.5, blocks=4_000, seed=4)
        assert est.ber == est.bit_errors / est.bits_simulated
        assert est.bits_simulated == 3 * est.blocks
        assert est.block_error_rate == est.block_errors / est.blocks
        assert est.bit_errors >= est.block_errors  # an errored block has >= 1 bad bit
        assert 0.0 <= est.ber <= 1.0

    def test_deterministic_per_seed(self):
        A = random_normalized(2, 3, seed=6)
        assert simulate_ber(A, 0.5, 5_000, seed=7) == simulate_ber(A, 0.5, 5_000, seed=7)

    def test_user_permutation_invariance(self):
        A = random_normalized(2, 3, seed=8)
        B = SignatureMatrix(A.entries[:, [1, 2, 0]])
        ea = simulate_ber(A, 0.5, blocks=20_000, seed=9)
        eb = simulate_ber(B, 0.5, blocks=20_000, seed=9)
        assert abs(ea.ber - eb.ber) <= 3 * math.hypot(ea.std_error, eb.std_error)

    def test_monotone_in_sigma(self):
        A = random_normalized(2, 3, seed=10)
        grid = [0.25, 0.5, 1.0, 2.0]
        ests = [simulate_ber(A, s, blocks=20_000, seed=11) for s in grid]
        for lo, hi in zip(ests, ests[1:]):
            slack = 3 * math.hypot(lo.std_error, hi.std_error)
            assert hi.ber >= lo.ber - slack

    def test_blocks_validated(self):
        with pytest.raises(ValueError):
            simulate_ber(SCALAR_ONE, 1.0, blocks=0, seed=0)


class TestUnionBound:
    def test_scalar_case_equals_tail(self):
        cons = build_constellation(SCALAR_ONE)
        for sigma in (0.5, 1.0, 2.0):
            assert union_bound(cons, sigma) == pytest.approx(
                q_function(1.0 / sigma), rel=1e-12
            )

    def test_vanishes_at_small_noise(self):
        cons = build_constellation(random_normalized(2, 3, seed=4))
        assert union_bound(cons, 0.01) < 1e-10

    def test_duplicate_points_floor(self):
        # one-chip, two-user matrices always duplicate a point
        cons = build_constellation(SignatureMatrix([[1.0, 1.0]]))
        assert union_bound(cons, 0.5) >= 2.0 ** (-2)

    def test_may_exceed_one(self):
        cons = build_constellation(random_normalized(2, 4, seed=1))
        assert union_bound(cons, 5.0) > 1.0  # bound is not clamped

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("sigma", [0.25, 0.5])
    def test_bounds_simulated_block_errors(self, seed, sigma):
        A = random_normalized(2, 3, seed=40 + seed)
        est = simulate_ber(A, sigma, blocks=10_000, seed=seed)
        bound = union_bound(build_constellation(A), sigma)
        assert est.block_error_rate <= bound + 3 * est.block_std_error
