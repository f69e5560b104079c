"""Block rules, sequences, spectra, fields, wavefunctions, and residuals."""

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import quad

from heun_spectra import (
    BlockSpec,
    ModelConfig,
    ParameterError,
    SelectionError,
    block_sequences,
    magnetic_field,
    make_block,
    permissible_blocks,
    radial_norm,
    radial_profile,
    scalar_potential,
    schrodinger_residual,
    solve_block,
    spectrum,
    t_of_rho,
    total_flux,
    vector_potential,
    wavefunction,
)
from heun_spectra.models import Example
from heun_spectra import models


class TestConfigValidation:
    def test_case_b_needs_positive_k(self):
        with pytest.raises(ParameterError):
            ModelConfig(Example(1), "b", 0, 1.0)

    def test_model2_first_needs_negative_k(self):
        with pytest.raises(ParameterError):
            ModelConfig(Example(2), "first", 1, 1.0)
        with pytest.raises(ParameterError):
            ModelConfig(Example(2), "first", 0, 1.0)

    def test_model2_second_needs_natural_k(self):
        with pytest.raises(ParameterError):
            ModelConfig(Example(2), "second", -2, 1.0)

    def test_unknown_variant(self):
        with pytest.raises(ParameterError):
            ModelConfig(Example(1), "first", 1, 1.0)

    def test_messages_name_the_constraint(self):
        with pytest.raises(ParameterError, match="k"):
            ModelConfig(Example(2), "first", 3, 0.0)


class TestBlockEnumeration:
    def test_case_a_ladder(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.0)
        blocks = permissible_blocks(cfg, n_max=2)
        assert [(b.n, b.l, b.sigma) for b in blocks] == [
            (0, 0, 1), (1, 1, 1), (2, 2, 1)]

    def test_case_a_large_k_starts_at_k_minus_1(self):
        cfg = ModelConfig(Example(1), "a", 3, 0.0)
        blocks = permissible_blocks(cfg, n_max=4)
        assert [(b.n, b.l) for b in blocks] == [(2, 0), (3, 1), (4, 2)]

    def test_case_b_parity_rule(self):
        cfg = ModelConfig(Example(1), "b", 4, 0.0)
        blocks = permissible_blocks(cfg, n_max=3)
        assert [(b.n, b.l, b.sigma) for b in blocks] == [(1, 1, -1), (3, 0, -1)]

    def test_model2_first_fixed_n_capped_l_ladder(self):
        cfg = ModelConfig(Example(2), "first", -2, 0.0)
        blocks = permissible_blocks(cfg, n_max=2)
        assert [(b.n, b.l, b.sigma) for b in blocks] == [
            (1, 2, 1), (1, 3, 1), (1, 4, 1)]

    def test_model2_second_descending_n(self):
        cfg = ModelConfig(Example(2), "second", 2, 0.0)
        blocks = permissible_blocks(cfg, n_max=10)
        assert [(b.n, b.l, b.sigma) for b in blocks] == [(1, -2, -1), (0, -1, -1)]

    def test_model1_k_zero_is_empty_with_diagnostic(self):
        cfg = ModelConfig(Example(1), "a", 0, 1.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            assert permissible_blocks(cfg, n_max=5) == []
        assert len(caught) == 1

    def test_make_block_checks_permissibility(self):
        cfg = ModelConfig(Example(1), "a", 2, 0.0)
        block = make_block(cfg, 3)
        assert (block.n, block.l, block.sigma) == (3, 2, 1)
        with pytest.raises(SelectionError):
            make_block(cfg, 0)  # n < k-1 not permissible
        with pytest.raises(SelectionError):
            make_block(cfg, 3, l=5)

    def test_angular_momentum_sign(self):
        assert BlockSpec(n=1, l=1, sigma=-1).angular_momentum == -1
        assert BlockSpec(n=1, l=-2, sigma=-1).angular_momentum == -2


class TestBlockSequences:
    def test_case_a_diagonal_is_s_minus_eps_ladder(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.6)
        seqs = block_sequences(cfg, BlockSpec(n=0, l=0, sigma=+1))
        assert seqs.a[0].coeffs == (-0.6, 1.0)

    def test_model2_second_anchor_diagonal(self):
        eps = 15.0
        cfg = ModelConfig(Example(2), "second", 1, eps)
        seqs = block_sequences(cfg, BlockSpec(n=0, l=-1, sigma=-1))
        # a_0 = s^2 - 2 s + (3 - eps)/4
        assert seqs.a[0].coeffs == pytest.approx(
            ((3.0 - eps) / 4.0, -2.0, 1.0), abs=1e-14)

    def test_impermissible_block_rejected(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.0)
        with pytest.raises(ParameterError, match="not permissible"):
            block_sequences(cfg, BlockSpec(n=1, l=3, sigma=+1))


class TestSpectrum:
    def test_anchor_single_root_lambda_equals_eps(self):
        rng = np.random.default_rng(101)
        cfg0 = ModelConfig(Example(1), "a", 1, 0.0)
        block = BlockSpec(n=0, l=0, sigma=+1)
        for _ in range(5):
            eps = float(rng.uniform(-5, 5))
            roots = spectrum(ModelConfig(Example(1), "a", 1, eps), block)
            assert len(roots) == 1
            assert roots[0].physical
            assert math.isclose(roots[0].value, eps, rel_tol=1e-12, abs_tol=1e-12)
            assert roots[0].energy == roots[0].value

    def test_anchor_pair(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.0)
        roots = spectrum(cfg, BlockSpec(n=1, l=1, sigma=+1))
        assert [r.value for r in roots] == pytest.approx([-4.0, 4.0], abs=1e-10)
        assert all(r.physical for r in roots)

    def test_model2_first_anchor(self):
        cfg = ModelConfig(Example(2), "first", -1, 15.0)
        roots = spectrum(cfg, BlockSpec(n=0, l=1, sigma=+1))
        assert len(roots) == 2
        physical = [r for r in roots if r.physical]
        assert len(physical) == 1
        assert math.isclose(physical[0].value, -1.0, abs_tol=1e-10)
        assert math.isclose(physical[0].energy, -1.0, abs_tol=1e-10)
        other = [r for r in roots if not r.physical][0]
        assert math.isclose(other.value, 3.0, abs_tol=1e-10)
        # the energy map applies to every real root; only the sign filter
        # marks chi = 3 as unphysical
        assert math.isclose(other.energy, -9.0, abs_tol=1e-10)

    def test_model2_second_anchor(self):
        cfg = ModelConfig(Example(2), "second", 1, 15.0)
        roots = spectrum(cfg, BlockSpec(n=0, l=-1, sigma=-1))
        physical = [r for r in roots if r.physical]
        assert len(physical) == 1
        assert math.isclose(physical[0].value, -1.0, abs_tol=1e-10)

    def test_counts_before_filtering(self):
        res1 = solve_block(
            ModelConfig(Example(1), "a", 2, 1.1), BlockSpec(4, 3, +1))
        assert len(res1.roots) == 5
        assert res1.filtered_count == 0
        res2 = solve_block(
            ModelConfig(Example(2), "second", 3, 9.0), BlockSpec(2, -3, -1))
        assert len(res2.roots) == 6

    def test_roots_sorted_ascending_by_energy(self):
        res = solve_block(
            ModelConfig(Example(2), "second", 3, 30.0), BlockSpec(2, -3, -1))
        energies = [r.energy for r in res.roots]
        assert None not in energies
        assert energies == sorted(energies)
        phys = [r.energy for r in res.roots if r.physical]
        assert phys and all(e < 0 for e in phys)

    def test_eigenvector_attached_to_physical_roots(self):
        res = solve_block(
            ModelConfig(Example(1), "a", 1, 0.7), BlockSpec(2, 2, +1))
        for r in res.roots:
            assert r.eigenvector is not None
            assert r.eigenvector.coeffs[0] == 1.0
            assert r.residual < 1e-10

    def test_high_degree_block_starts_escalated(self):
        res = solve_block(
            ModelConfig(Example(1), "a", 1, 0.5), BlockSpec(21, 21, +1))
        assert res.precision_bits == 128
        assert len(res.roots) == 22


class TestFieldsAndPotentials:
    def test_vector_potential_model1(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.0)
        assert vector_potential(cfg, 0.0) == 0.0
        cfg = ModelConfig(Example(1), "a", 1, 2.0)
        assert vector_potential(cfg, 1.0) == pytest.approx(2.5, abs=1e-15)

    def test_vector_potential_model2(self):
        cfg = ModelConfig(Example(2), "first", -1, 0.0)
        assert vector_potential(cfg, 1.0) == pytest.approx(1 / math.sqrt(2))
        with pytest.raises(ValueError):
            vector_potential(cfg, 0.0)

    def test_scalar_potential(self):
        cfg = ModelConfig(Example(1), "a", 1, 1.0)
        assert scalar_potential(cfg, 0.0) == 0.0
        assert scalar_potential(cfg, 1.0) == pytest.approx(-5.0, abs=1e-14)
        cfg2 = ModelConfig(Example(2), "first", -1, 3.0)
        assert scalar_potential(cfg2, 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_magnetic_field(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.0)
        assert magnetic_field(cfg, 0.0) == 0.0
        cfg2 = ModelConfig(Example(2), "first", -3, 0.0)
        assert magnetic_field(cfg2, 0.0) == pytest.approx(-3.0)

    def test_field_is_curl_of_potential(self):
        rng = np.random.default_rng(37)
        for cfg in (
            ModelConfig(Example(1), "a", 2, 1.7),
            ModelConfig(Example(2), "second", 2, 0.3),
        ):
            rho = rng.uniform(0.05, 5.0, size=50)
            h = 1e-6
            lhs = magnetic_field(cfg, rho)
            rhs = (
                (rho + h) * vector_potential(cfg, rho + h)
                - (rho - h) * vector_potential(cfg, rho - h)
            ) / (2 * h * rho)
            assert np.allclose(lhs, rhs, rtol=1e-8, atol=1e-8)

    def test_flux(self):
        cfg = ModelConfig(Example(2), "second", 2, 0.0)
        assert total_flux(cfg) == pytest.approx(4 * math.pi, rel=1e-15)
        assert total_flux(cfg, numeric=True) == pytest.approx(
            4 * math.pi, abs=1e-6)
        cfg1 = ModelConfig(Example(1), "a", 1, 1.0)
        assert math.isinf(total_flux(cfg1))

    def test_t_of_rho(self):
        assert t_of_rho(0.0) == 1.0
        assert t_of_rho(math.sqrt(3.0)) == pytest.approx(1.5, abs=1e-15)
        grid = np.linspace(0, 10, 200)
        assert np.all(np.diff(t_of_rho(grid)) > 0)


class TestWavefunctions:
    def test_positive_l_vanishes_at_origin(self):
        cfg = ModelConfig(Example(1), "a", 1, 0.3)
        block = make_block(cfg, 1)
        root = spectrum(cfg, block)[0]
        assert wavefunction(cfg, block, root, 0.0) == 0.0

    def test_ground_profile_is_pure_envelope(self):
        eps = 1.2
        cfg = ModelConfig(Example(1), "a", 1, eps)
        block = make_block(cfg, 0)
        root = spectrum(cfg, block)[0]
        rho = np.linspace(0.0, 3.0, 40)
        vals = wavefunction(cfg, block, root, rho)
        expect = np.exp(-rho ** 4 / 8 - eps * rho ** 2 / 4)
        assert np.allclose(vals, expect, rtol=1e-13, atol=1e-13)

    def test_model2_boundary_value(self):
        cfg = ModelConfig(Example(2), "first", -1, 15.0)
        block = BlockSpec(n=0, l=1, sigma=+1)
        root = [r for r in spectrum(cfg, block) if r.physical][0]
        val = wavefunction(cfg, block, root, 0.0)
        assert val == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_angular_phase(self):
        cfg = ModelConfig(Example(1), "b", 4, 0.5)
        block = make_block(cfg, 1)
        root = spectrum(cfg, block)[0]
        v0 = wavefunction(cfg, block, root, 1.5, phi=0.0)
        v1 = wavefunction(cfg, block, root, 1.5, phi=0.25)
        # sigma = -1, |l| = 1: phase e^{-i phi}
        assert v1 == pytest.approx(v0 * np.exp(-0.25j), rel=1e-12)

    def test_unphysical_root_rejected(self):
        cfg = ModelConfig(Example(2), "first", -1, 15.0)
        block = BlockSpec(n=0, l=1, sigma=+1)
        bad = [r for r in spectrum(cfg, block) if not r.physical][0]
        with pytest.raises(SelectionError):
            wavefunction(cfg, block, bad, 1.0)

    def test_norm_and_tail(self):
        cfg = ModelConfig(Example(1), "a", 2, 0.9)
        block = make_block(cfg, 2)
        root = spectrum(cfg, block)[0]
        total, tail = radial_norm(cfg, block, root)
        assert math.isfinite(total) and total > 0
        assert tail < 1e-12

    def test_normalized_profile_integrates_to_one(self):
        cfg = ModelConfig(Example(2), "second", 2, 30.0)
        block = make_block(cfg, 1)
        root = [r for r in spectrum(cfg, block) if r.physical][0]
        grid = np.linspace(0.0, 30.0, 50)
        prof = radial_profile(cfg, block, root, grid, normalize=True)
        scale = 1.0 / math.sqrt(prof.norm)
        value, _ = quad(
            lambda r: abs(
                wavefunction(cfg, block, root, np.array([r]))[0] * scale
            ) ** 2 * r,
            0.0, 40.0, limit=300)
        assert value == pytest.approx(1.0, abs=1e-8)


class TestSchrodingerResidual:
    def test_anchor_state_residual(self):
        cfg = ModelConfig(Example(1), "a", 1, 1.0)
        block = make_block(cfg, 0)
        root = spectrum(cfg, block)[0]
        grid = np.arange(0.1, 3.0 + 1e-12, 1e-3)
        assert schrodinger_residual(cfg, block, root, grid) < 1e-6

    def test_fourth_order_scaling(self):
        # h large enough that truncation dominates the 1/h^2 roundoff noise
        cfg = ModelConfig(Example(1), "a", 1, 1.0)
        block = make_block(cfg, 0)
        root = spectrum(cfg, block)[0]
        r_coarse = schrodinger_residual(
            cfg, block, root, np.arange(0.2, 3.0, 2e-2))
        r_fine = schrodinger_residual(
            cfg, block, root, np.arange(0.2, 3.0, 1e-2))
        assert 8.0 < r_coarse / r_fine < 40.0

    def test_detector_sees_wrong_energy(self):
        cfg = ModelConfig(Example(1), "a", 1, 1.0)
        block = make_block(cfg, 0)
        root = spectrum(cfg, block)[0]
        shifted = type(root)(
            value=root.value + 0.1,
            energy=root.energy + 0.1,
            physical=True,
            residual=root.residual,
            eigenvector=root.eigenvector,
            borderline=False,
        )
        grid = np.arange(0.1, 3.0, 1e-3)
        assert schrodinger_residual(cfg, block, shifted, grid) >= 0.05

    def test_grid_too_close_to_the_axis(self):
        cfg = ModelConfig(Example(1), "a", 1, 1.0)
        block = make_block(cfg, 0)
        root = spectrum(cfg, block)[0]
        with pytest.raises(ValueError):
            schrodinger_residual(cfg, block, root, np.arange(0.001, 1.0, 1e-3))


class TestResidualsAcrossFamilies:
    def test_all_four_families(self):
        cases = [
            (ModelConfig(Example(1), "a", 1, 0.8), None),
            (ModelConfig(Example(1), "b", 5, 0.4), None),
            (ModelConfig(Example(2), "first", -2, 20.0), None),
            (ModelConfig(Example(2), "second", 2, 20.0), None),
        ]
        for cfg, _ in cases:
            block = permissible_blocks(cfg, n_max=1)[0]
            phys = [r for r in spectrum(cfg, block) if r.physical]
            assert phys, f"no physical state in {cfg}"
            grid = np.arange(0.1, 4.0, 1e-3)
            res = schrodinger_residual(cfg, block, phys[0], grid)
            assert res < 1e-5
