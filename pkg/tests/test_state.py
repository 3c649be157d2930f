"""State construction, seeding, antisymmetric storage, smooth synthesis."""
import numpy as np
import pytest

from dwym import LatticeSpec, ModelParams, new_state, seed_plane_wave
from dwym.linalg import is_hermitian
from dwym.state import (random_state, smooth_state_coeffs, triangle_pairs)


def test_new_state_is_zero_and_valid():
    spec = LatticeSpec((8, 8), (0.25, 0.25))
    s = new_state(spec, ModelParams(n=1))
    s.validate()
    assert not s.phi.any() and not s.pi.any() and not s.a.any() and not s.p_tri.any()


def test_p_storage_slot_count():
    spec = LatticeSpec((4, 4, 4, 4), (0.5, 0.5, 0.5, 0.5))
    s = new_state(spec, ModelParams(n=3))
    assert s.p_tri.shape == (4, 4, 4, 4, 6, 3, 3)
    assert len(triangle_pairs(4)) == 6


def test_invalid_extent_rejected():
    with pytest.raises(ValueError):
        LatticeSpec((2, 8), (0.25, 0.25))


def test_p_antisymmetry_is_structural(rng):
    spec = LatticeSpec((4, 4, 4), (0.2, 0.2, 0.2))
    s = random_state(spec, ModelParams(n=2), rng)
    for al in range(3):
        for be in range(3):
            assert np.array_equal(s.p(be, al), -s.p(al, be))
    full = s.p_full()
    assert np.array_equal(full, -np.swapaxes(full, 3, 4))


def test_set_p_lower_triangle(rng):
    spec = LatticeSpec((4, 4), (0.2, 0.2))
    s = new_state(spec, ModelParams(n=2))
    val = rng.normal(size=(4, 4, 2, 2)) + 0j
    s.set_p(1, 0, val)
    assert np.array_equal(s.p(1, 0), val)
    assert np.array_equal(s.p(0, 1), -val)


def test_seed_constant_mode_sets_rest_frequency():
    spec = LatticeSpec((8, 8), (0.25, 0.25))
    params = ModelParams(n=1, m=2.0)
    s = seed_plane_wave(new_state(spec, params), params, (0, 0), 1.0)
    assert np.allclose(s.phi[..., 0], 1.0)
    assert np.allclose(s.pi[..., 0, 0], 2.0j)
    assert not s.pi[..., 1, 0].any()


def test_seed_zero_amplitude_is_noop():
    spec = LatticeSpec((8, 8), (0.25, 0.25))
    params = ModelParams(n=1, m=1.0)
    s = seed_plane_wave(new_state(spec, params), params, (1, 1), 0.0)
    assert not s.phi.any() and not s.pi.any()


def test_seed_single_mode_discrete_transform_oracle():
    spec = LatticeSpec((16, 16), (0.25, 0.25))
    params = ModelParams(n=1, m=1.0)
    s = seed_plane_wave(new_state(spec, params), params, (1, 0), 0.7)
    spectrum = np.fft.fft2(s.phi[..., 0]) / 16**2
    # exp(+i kappa.x) with mode (1, 0) lands in bin (1, 0) of the forward DFT
    assert abs(spectrum[1, 0] - 0.7) < 1e-12
    spectrum[1, 0] = 0.0
    assert np.max(np.abs(spectrum)) < 1e-12


def test_seed_mode_out_of_nyquist_range():
    spec = LatticeSpec((8, 8), (0.25, 0.25))
    params = ModelParams(n=1)
    with pytest.raises(ValueError):
        seed_plane_wave(new_state(spec, params), params, (5, 0), 1.0)


def test_seed_gauge_is_hermitian(rng):
    spec = LatticeSpec((8, 8), (0.25, 0.25))
    params = ModelParams(n=2)
    gen = np.array([[1.0, 2.0 - 1j], [2.0 + 1j, -1.0]])
    s = seed_plane_wave(new_state(spec, params), params, (1, 2), 0.4,
                        which="gauge", direction=1, generator=gen)
    s.validate()
    assert is_hermitian(s.a)
    assert not s.a[..., 0, :, :].any()


def test_validate_rejects_non_hermitian_potential(rng):
    spec = LatticeSpec((4, 4), (0.25, 0.25))
    s = random_state(spec, ModelParams(n=2), rng)
    s.a[0, 0, 0, 0, 1] += 1.0  # break Hermiticity
    with pytest.raises(ValueError):
        s.validate()


def test_smooth_state_refines_to_same_function(rng):
    coeffs = smooth_state_coeffs(rng, dim=2, n=2, amplitude=0.5, max_mode=2)
    params = ModelParams(n=2, q=0.5, m=1.0)
    coarse = coeffs.realize(LatticeSpec((8, 8), (0.5, 0.5)), params)
    fine = coeffs.realize(LatticeSpec((16, 16), (0.25, 0.25)), params)
    assert np.max(np.abs(fine.phi[::2, ::2] - coarse.phi)) < 1e-12
    assert np.max(np.abs(fine.a[::2, ::2] - coarse.a)) < 1e-12
    coarse.validate()
    fine.validate()


def test_max_abs_diff(rng):
    spec = LatticeSpec((4, 4), (0.25, 0.25))
    s1 = random_state(spec, ModelParams(n=2), rng)
    s2 = s1.copy()
    assert s1.max_abs_diff(s2) == 0.0
    s2.phi[0, 0, 0] += 1e-3
    assert abs(s1.max_abs_diff(s2) - 1e-3) < 1e-15
