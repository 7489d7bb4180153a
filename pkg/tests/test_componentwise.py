import math

import numpy as np
import pytest

from mzchain.chain import (
    ChainConfig,
    ModePair,
    ObjectModel,
    absorbed_fraction,
    propagate_iterative,
    step_matrix,
)
from mzchain.componentwise import elementary_step, propagate_componentwise


class TestElementaryStep:
    def test_lossless_step_matches_matrix_and_absorbs_nothing(self):
        obj = ObjectModel(1.0)
        out, absorbed = elementary_step(math.pi / 2.0, obj, ModePair(1.0, 0.0))
        want = step_matrix(math.pi / 2.0, obj) @ np.array([1.0, 0.0])
        np.testing.assert_allclose([out.alpha, out.beta], want, atol=1e-12)
        assert absorbed == pytest.approx(0.0, abs=1e-12)

    def test_full_swap_into_opaque_object_absorbs_everything(self):
        out, absorbed = elementary_step(math.pi, ObjectModel(0.0), ModePair(1.0, 0.0))
        assert abs(out.alpha) < 1e-12
        assert abs(out.beta) < 1e-12
        assert absorbed == pytest.approx(1.0, abs=1e-12)

    def test_general_input_matches_matrix(self):
        obj = ObjectModel(0.9)
        modes = ModePair(0.6, 0.8j)
        out, _ = elementary_step(math.pi / 10.0, obj, modes)
        want = step_matrix(math.pi / 10.0, obj) @ np.array([0.6, 0.8j])
        np.testing.assert_allclose([out.alpha, out.beta], want, atol=1e-12)

    def test_composite_matches_step_matrix(self):
        # pins the wiring of splitters, phase arm, and absorber: the column
        # pair produced from basis inputs must reproduce the step matrix
        rng = np.random.default_rng(7)
        for _ in range(100):
            phi = rng.uniform(0.0, 2.0 * math.pi)
            obj = ObjectModel(rng.uniform(0.0, 1.0), rng.uniform(-math.pi, math.pi))
            col0, _ = elementary_step(phi, obj, ModePair(1.0, 0.0))
            col1, _ = elementary_step(phi, obj, ModePair(0.0, 1.0))
            got = np.array([[col0.alpha, col1.alpha], [col0.beta, col1.beta]])
            np.testing.assert_allclose(got, step_matrix(phi, obj), atol=1e-12)

    def test_absorbed_intensity_definition(self):
        # absorbed = (1 - eta) * |beta right after the interferometer|^2,
        # where the interferometer alone is the eta=1 step matrix
        rng = np.random.default_rng(8)
        for _ in range(50):
            phi = rng.uniform(0.0, 2.0 * math.pi)
            eta = rng.uniform(0.0, 1.0)
            modes = ModePair(
                complex(rng.normal(), rng.normal()), complex(rng.normal(), rng.normal())
            )
            mz_only = step_matrix(phi, ObjectModel(1.0)) @ np.array([modes.alpha, modes.beta])
            _, absorbed = elementary_step(phi, ObjectModel(eta, 0.4), modes)
            assert absorbed == pytest.approx((1.0 - eta) * abs(mz_only[1]) ** 2, abs=1e-12)


class TestPropagateComponentwise:
    def test_transparent_chain_conserves_energy(self):
        ledger = propagate_componentwise(ChainConfig.pi_over_n(10), ObjectModel(1.0))
        assert ledger.total_absorbed <= 1e-12
        assert abs(ledger.final.beta) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_absorbing_chain_loses_energy_every_run(self):
        ledger = propagate_componentwise(ChainConfig.pi_over_n(10), ObjectModel(0.9))
        steps = np.array(ledger.absorbed_per_step)
        assert steps.shape == (10,)
        assert np.all(steps >= 0.0)
        assert steps.max() > 0.0

    def test_conservation_identity(self):
        cfg = ChainConfig.pi_over_n(25)
        ledger = propagate_componentwise(cfg, ObjectModel(0.4))
        lhs = 1.0 - ledger.final.total_intensity
        assert lhs == pytest.approx(ledger.total_absorbed, abs=1e-12)
        assert ledger.total_absorbed == pytest.approx(sum(ledger.absorbed_per_step), abs=1e-12)

    def test_random_sweep_conservation_and_core_agreement(self):
        rng = np.random.default_rng(9)
        for _ in range(200):
            phi = rng.uniform(1e-3, 2.0 * math.pi - 1e-3)
            n = int(rng.integers(1, 101))
            amp = complex(rng.normal(), rng.normal())
            if abs(amp) < 1e-3:
                amp = 1.0
            cfg = ChainConfig(phi, n, amp)
            obj = ObjectModel(rng.uniform(0.0, 1.0), rng.uniform(-math.pi, math.pi))
            ledger = propagate_componentwise(cfg, obj)
            i0 = abs(amp) ** 2
            # input intensity splits into what exits and what was absorbed
            assert i0 - ledger.final.total_intensity == pytest.approx(
                ledger.total_absorbed, abs=1e-12 * max(1.0, i0)
            )
            # and the normalized total matches the effective absorption
            assert ledger.total_absorbed / i0 == pytest.approx(
                absorbed_fraction(cfg, obj), abs=1e-12
            )
            want = propagate_iterative(cfg, obj)
            assert abs(ledger.final.alpha - want.alpha) <= 1e-12 * max(1.0, abs(amp))
            assert abs(ledger.final.beta - want.beta) <= 1e-12 * max(1.0, abs(amp))
