import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qec713.densmat import GATES, DensityMatrix, apply_cnot, to_density, zero_state
from qec713.noise import PauliProbs, apply_noisy_1q, apply_noisy_cnot, pauli_channel

from .conftest import random_density

PAULI = [GATES["I"], GATES["X"], GATES["Y"], GATES["Z"]]


def weights(p: PauliProbs):
    return [p.p0, p.px, p.py, p.pz]


def test_probs_validation():
    with pytest.raises(ValueError):
        PauliProbs(-0.1, 0, 0)
    with pytest.raises(ValueError):
        PauliProbs(0.5, 0.4, 0.2)
    assert PauliProbs(0.1, 0.2, 0.3).p0 == pytest.approx(0.4)
    assert PauliProbs.uniform(1e-3).as_tuple() == (1e-3, 1e-3, 1e-3)


def test_bit_flip_example():
    p = 0.07
    out = apply_noisy_1q(zero_state(1), GATES["I"], 1, PauliProbs(p, 0, 0))
    assert np.allclose(out.data, np.diag([1 - p, p]))


def test_noiseless_limit(rng):
    rho = DensityMatrix(random_density(rng, 1))
    out = apply_noisy_1q(rho, GATES["S"], 1, PauliProbs())
    u = GATES["S"]
    assert np.allclose(out.data, u @ rho.data @ u.conj().T)
    assert np.allclose(apply_noisy_cnot(zero_state(2), 1, 2, PauliProbs()).data, zero_state(2).data)


def test_hadamard_four_term_sum():
    probs = PauliProbs(0.01, 0.02, 0.03)
    rho = zero_state(1)
    h = GATES["H"]
    expected = sum(w * s @ h @ rho.data @ h.conj().T @ s.conj().T for w, s in zip(weights(probs), PAULI))
    assert np.allclose(apply_noisy_1q(rho, h, 1, probs).data, expected, atol=1e-15)


def test_cnot_on_00_bit_flip_weights():
    p = 0.05
    out = apply_noisy_cnot(zero_state(2), 1, 2, PauliProbs(p, 0, 0))
    assert np.allclose(np.diag(out.data).real, [(1 - p) ** 2, p * (1 - p), (1 - p) * p, p * p])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), probs=st.tuples(*[st.floats(0, 0.3)] * 3))
def test_cnot_sixteen_term_sum(seed, probs):
    probs = PauliProbs(*probs)
    rho = DensityMatrix(random_density(np.random.default_rng(seed), 2))
    base = apply_cnot(rho, 1, 2).data
    expected = np.zeros_like(base)
    w = weights(probs)
    for (a, sa), (b, sb) in itertools.product(enumerate(PAULI), repeat=2):
        op = np.kron(sa, sb)
        expected += w[a] * w[b] * op @ base @ op.conj().T
    assert np.allclose(apply_noisy_cnot(rho, 1, 2, probs).data, expected, atol=1e-13)


@settings(max_examples=25, deadline=None)
@given(probs=st.tuples(*[st.floats(0, 0.33)] * 3))
def test_weights_sum_to_one(probs):
    w = weights(PauliProbs(*probs))
    assert abs(sum(w) - 1) < 1e-15
    assert abs(sum(a * b for a in w for b in w) - 1) < 1e-15


def test_maximally_mixed_fixed_point():
    probs = PauliProbs(0.1, 0.05, 0.2)
    mixed = DensityMatrix(np.eye(4) / 4)
    assert np.allclose(apply_noisy_cnot(mixed, 2, 1, probs).data, np.eye(4) / 4)
    assert np.allclose(apply_noisy_1q(DensityMatrix(np.eye(2) / 2), GATES["H"], 1, probs).data, np.eye(2) / 2)


def test_phase_flip_closed_form():
    p = 0.2
    plus = to_density(np.array([1, 1]) / np.sqrt(2))
    out = pauli_channel(plus, 1, PauliProbs(0, 0, p))
    assert np.allclose(out.data, [[0.5, 0.5 * (1 - 2 * p)], [0.5 * (1 - 2 * p), 0.5]])
    assert out.trace() == pytest.approx(1)
