"""Transform engine: unitarity, route agreement, embeddings."""

import numpy as np
import pytest

from ftsample.errors import DomainTooSmallError, InvalidSizeError
from ftsample.transform import (
    MultiSuperposition,
    Superposition,
    dft,
    dft_at,
    dft_chirpz,
    dft_direct,
    embed,
    multidim_dft,
    multidim_dft_at,
)


def test_delta_transforms_to_uniform_phases():
    # single spike at 0 spreads flat with zero phase
    out = dft(Superposition.delta(4, 0), 4, "forward")
    np.testing.assert_allclose(out.amplitudes, np.full(4, 0.5), atol=1e-12)


def test_delta_at_one_is_a_phase_ramp():
    # hand DFT of e_1 over Z_4 with the +2*pi*i kernel: (1/2)[1, i, -1, -i]
    out = dft(Superposition.delta(4, 1), 4, "forward")
    np.testing.assert_allclose(out.amplitudes, 0.5 * np.array([1, 1j, -1, -1j]), atol=1e-12)


def test_uniform_transforms_to_delta():
    out = dft(Superposition.uniform(7), 7, "forward")
    np.testing.assert_allclose(out.amplitudes, Superposition.delta(7, 0).amplitudes, atol=1e-12)


def test_two_point_hadamard():
    out = dft(Superposition.delta(2, 0), 2, "forward")
    np.testing.assert_allclose(out.amplitudes, np.full(2, 1 / np.sqrt(2)), atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 16, 17, 64, 101, 251, 1009, 4096])
def test_unitarity_and_inversion(n):
    rng = np.random.default_rng(n)
    state = Superposition.random(n, rng)
    image = dft(state, n, "forward")
    assert abs(np.linalg.norm(image.amplitudes) - 1.0) < 1e-9
    back = dft(image, n, "inverse")
    np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-9)


@pytest.mark.parametrize("n", [2, 6, 17, 97, 251, 1009])
def test_routes_agree(n):
    rng = np.random.default_rng(1000 + n)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    direct = dft_direct(v, n, "forward")
    chirp = dft_chirpz(v, n, "forward")
    np.testing.assert_allclose(chirp, direct, atol=1e-9)


def test_forward_kernel_orientation_against_numpy():
    # forward uses exp(+2*pi*i*ic/N)/sqrt(N), which is numpy's ifft rescaled
    rng = np.random.default_rng(0)
    v = rng.standard_normal(12) + 1j * rng.standard_normal(12)
    np.testing.assert_allclose(dft_direct(v, 12, "forward"), np.fft.ifft(v) * np.sqrt(12), atol=1e-12)
    np.testing.assert_allclose(dft_direct(v, 12, "inverse"), np.fft.fft(v) / np.sqrt(12), atol=1e-12)


def test_selected_coefficients_match_full_transform():
    rng = np.random.default_rng(5)
    v = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    full = dft_direct(v, 9, "forward")
    idx = np.array([0, 3, 8])
    np.testing.assert_allclose(dft_at(v, 9, idx, "forward"), full[idx], atol=1e-12)


def test_selected_coefficients_of_padded_state_at_huge_domain():
    """Sparse input lets single coefficients be read far beyond dense reach."""
    q = 10**12 + 39
    v = np.zeros(8, dtype=np.complex128)
    v[3] = 1.0
    out = dft_at(v, q, np.array([q - 1, 0, 12345]), "forward")
    expected = np.exp(2j * np.pi * 3 * np.array([q - 1, 0, 12345]) / q) / np.sqrt(q)
    np.testing.assert_allclose(out, expected, rtol=1e-9)


def test_embed_pads_with_zeros_and_keeps_norm():
    state = Superposition.random(5, np.random.default_rng(2))
    big = embed(state, 12)
    assert big.length == 12
    np.testing.assert_allclose(big.amplitudes[:5], state.amplitudes)
    np.testing.assert_allclose(big.amplitudes[5:], 0.0)


def test_embed_rejects_smaller_target():
    state = Superposition.uniform(5)
    with pytest.raises(DomainTooSmallError):
        embed(state, 4)


def test_embed_identity_at_same_size():
    state = Superposition.random(6, np.random.default_rng(8))
    np.testing.assert_allclose(embed(state, 6).amplitudes, state.amplitudes)


@pytest.mark.parametrize("size", [0, -1])
def test_invalid_sizes_rejected(size):
    with pytest.raises(InvalidSizeError):
        Superposition.uniform(size)


def test_unknown_direction_rejected():
    with pytest.raises(ValueError):
        dft(Superposition.uniform(4), 4, "sideways")


def test_norm_validation():
    with pytest.raises(ValueError):
        Superposition(np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        Superposition.normalized(np.zeros(3))


def test_amplitudes_are_frozen():
    state = Superposition.uniform(4)
    with pytest.raises(ValueError):
        state.amplitudes[0] = 0.0


def test_multidim_matches_axiswise_1d():
    rng = np.random.default_rng(11)
    arr = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    arr /= np.linalg.norm(arr)
    state = MultiSuperposition(arr)
    out = multidim_dft(state, (3, 4), "forward").amplitudes
    step = np.stack([dft_direct(arr[:, c], 3, "forward") for c in range(4)], axis=1)
    expected = np.stack([dft_direct(step[r], 4, "forward") for r in range(3)], axis=0)
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_multidim_inversion():
    rng = np.random.default_rng(13)
    arr = rng.standard_normal((2, 3, 2)) + 1j * rng.standard_normal((2, 3, 2))
    arr /= np.linalg.norm(arr)
    state = MultiSuperposition(arr)
    image = multidim_dft(state, (2, 3, 2), "forward")
    back = multidim_dft(image, (2, 3, 2), "inverse")
    np.testing.assert_allclose(back.amplitudes, arr, atol=1e-9)


def test_multidim_selected_coefficients():
    rng = np.random.default_rng(17)
    arr = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    arr /= np.linalg.norm(arr)
    state = MultiSuperposition(arr)
    # pad each axis 3 -> 7 and spot-check against the dense padded transform
    padded = np.zeros((7, 7), dtype=np.complex128)
    padded[:3, :3] = arr
    dense = multidim_dft(MultiSuperposition(padded), (7, 7), "forward").amplitudes
    picks = [(0, 0), (2, 6), (5, 1)]
    got = multidim_dft_at(state, (7, 7), picks, "forward")
    np.testing.assert_allclose(got, [dense[i] for i in picks], atol=1e-12)


def test_large_power_of_two_roundtrip():
    n = 2**14
    rng = np.random.default_rng(99)
    state = Superposition.random(n, rng)
    back = dft(dft(state, n, "forward"), n, "inverse")
    np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-9)
