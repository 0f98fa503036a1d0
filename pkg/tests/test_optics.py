import numpy as np
import pytest

from qudisc.errors import ContractError, DomainError
from qudisc.jordan import build_gh_bases
from qudisc.optics import (
    ClickStats,
    Interferometer,
    TwoModeLayer,
    analytic_discriminator_probabilities,
    beamsplitter,
    discriminator_network,
    discriminator_port_state,
    output_distribution,
    prepare_state_network,
    reck_decompose,
    simulate_clicks,
    simulate_discriminator,
    two_mode_unitary,
)
from qudisc.povm import Priors, omega1_from_x, omega2_constraint, subspace_povm


def random_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_two_mode_unitary_special_values():
    np.testing.assert_allclose(
        two_mode_unitary(np.pi / 2, 0, 0), np.array([[1, 0], [0, -1]]), atol=1e-12
    )
    np.testing.assert_allclose(
        two_mode_unitary(0, 0, 0), np.array([[0, 1], [1, 0]]), atol=1e-12
    )


def test_two_mode_unitary_is_unitary():
    rng = np.random.Generator(np.random.Philox(key=3))
    for _ in range(20):
        omega, phi, theta = rng.uniform(0, 2 * np.pi, size=3)
        block = two_mode_unitary(omega, phi, theta)
        np.testing.assert_allclose(block.conj().T @ block, np.eye(2), atol=1e-12)


def test_beamsplitter_properties():
    balanced = beamsplitter(np.pi / 4)
    np.testing.assert_allclose(np.abs(balanced), np.full((2, 2), 1 / np.sqrt(2)), atol=1e-12)
    np.testing.assert_allclose(beamsplitter(np.pi / 2), np.diag([1.0, -1.0]), atol=1e-12)
    for omega in (0.1, 0.7, 1.3):
        np.testing.assert_allclose(
            beamsplitter(omega), two_mode_unitary(omega, 0, 0).real, atol=1e-12
        )
        assert abs(np.linalg.det(beamsplitter(omega)) + 1.0) < 1e-12


def test_layer_validation():
    with pytest.raises(DomainError):
        TwoModeLayer(1, 1, omega=0.3)
    with pytest.raises(DomainError):
        Interferometer(num_modes=2, layers=(TwoModeLayer(0, 5, omega=0.1),))


def test_discriminator_columns_and_unitarity():
    for omega1 in np.linspace(0.0, np.pi / 2, 7):
        u3, net = discriminator_network(omega1)
        np.testing.assert_allclose(u3.conj().T @ u3, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(u3, net.unitary(), atol=1e-12)
        omega2 = omega2_constraint(omega1)
        s1, c1 = np.sin(omega1), np.cos(omega1)
        s2, c2 = np.sin(omega2), np.cos(omega2)
        np.testing.assert_allclose(u3[:, 0], [-s1, c1 * c2, -c1 * s2], atol=1e-12)
        np.testing.assert_allclose(u3[:, 1], [0.0, s2, c2], atol=1e-12)


def test_discriminator_h_never_hits_d1():
    for omega1 in np.linspace(0.0, np.pi / 2, 9):
        _, net = discriminator_network(omega1)
        probs = output_distribution(net, discriminator_port_state("h"))
        assert probs[0] < 1e-24


def test_discriminator_failure_probs_at_x2():
    omega1 = omega1_from_x(2.0)
    _, net = discriminator_network(omega1)
    probs_g = output_distribution(net, discriminator_port_state("g"))
    probs_h = output_distribution(net, discriminator_port_state("h"))
    assert abs(probs_g[2] - 0.5) < 1e-12
    assert abs(probs_h[2] - 0.5) < 1e-12
    # The D2 port stays dark for a g input: unambiguity at the device level.
    assert probs_g[1] < 1e-24


def test_discriminator_matches_povm_born_rule():
    pairs = build_gh_bases(2)
    g, h = pairs.g[0], pairs.h[0]
    for omega1 in np.linspace(0.0, np.pi / 2, 20):
        _, net = discriminator_network(omega1)
        povm = subspace_povm(g, h, omega1)
        for which, state in (("g", g), ("h", h)):
            probs = output_distribution(net, discriminator_port_state(which))
            expected = [
                np.vdot(state, op @ state).real for op in povm.elements()
            ]
            np.testing.assert_allclose(probs, expected, atol=1e-12)


def test_reck_identity_is_empty():
    net = reck_decompose(np.eye(4))
    assert len(net.layers) == 0
    assert all(p == 0.0 for p in net.phases)
    np.testing.assert_allclose(net.unitary(), np.eye(4), atol=1e-15)


def test_reck_single_block_roundtrip():
    block = two_mode_unitary(0.6, 0.0, 0.0)
    net = reck_decompose(block)
    assert len(net.layers) == 1
    layer = net.layers[0]
    assert abs(layer.omega - 0.6) < 1e-12
    np.testing.assert_allclose(net.unitary(), block, atol=1e-12)


def test_reck_random_4x4_seed42():
    rng = np.random.Generator(np.random.Philox(key=42))
    target = random_unitary(4, rng)
    net = reck_decompose(target)
    assert np.abs(net.unitary() - target).max() < 1e-10


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 6, 7, 8])
def test_reck_roundtrip_and_layer_bound(dim):
    rng = np.random.Generator(np.random.Philox(key=100 + dim))
    target = random_unitary(dim, rng)
    net = reck_decompose(target)
    assert len(net.layers) <= dim * (dim - 1) // 2
    assert np.abs(net.unitary() - target).max() < 1e-10


def test_reck_rejects_non_unitary():
    with pytest.raises(ContractError):
        reck_decompose(np.ones((3, 3)))
    with pytest.raises(ContractError):
        reck_decompose(np.ones((2, 3)))


def test_serialization_roundtrip():
    rng = np.random.Generator(np.random.Philox(key=5))
    target = random_unitary(5, rng)
    net = reck_decompose(target)
    text = net.to_text()
    parsed = Interferometer.from_text(text)
    np.testing.assert_allclose(parsed.unitary(), net.unitary(), atol=1e-12)
    assert parsed.to_text() == text
    with pytest.raises(DomainError):
        Interferometer.from_text("BS 1 2 0.1 0 0\n")  # no MODES header


def test_prepare_basis_vector_is_identity_network():
    net = prepare_state_network(np.array([1.0, 0.0, 0.0]), 3)
    assert len(net.layers) == 0
    np.testing.assert_allclose(net.unitary(), np.eye(3), atol=1e-15)


def test_prepare_balanced_pair_single_layer():
    amps = np.array([1.0, 1.0]) / np.sqrt(2)
    net = prepare_state_network(amps, 2)
    assert len(net.layers) == 1
    assert abs(net.layers[0].omega - np.pi / 4) < 1e-12
    np.testing.assert_allclose(net.unitary()[:, 0], amps, atol=1e-10)


def test_prepare_haar_vector_seed7():
    rng = np.random.Generator(np.random.Philox(key=7))
    z = rng.normal(size=5) + 1j * rng.normal(size=5)
    amps = z / np.linalg.norm(z)
    net = prepare_state_network(amps, 5)
    column = net.unitary()[:, 0]
    assert np.abs(column - amps).max() < 1e-10
    unitary = net.unitary()
    np.testing.assert_allclose(unitary.conj().T @ unitary, np.eye(5), atol=1e-10)


def test_prepare_handles_interior_zeros_and_phases():
    amps = np.array([0.6, 0.0, 0.8j, 0.0])
    net = prepare_state_network(amps, 4)
    assert np.abs(net.unitary()[:, 0] - amps).max() < 1e-10
    single = prepare_state_network(np.array([np.exp(0.3j)]), 1)
    assert np.abs(single.unitary()[0, 0] - np.exp(0.3j)) < 1e-12


def test_prepare_rejects_unnormalized():
    with pytest.raises(ContractError):
        prepare_state_network(np.array([1.0, 1.0]), 2)


def test_simulate_clicks_identity_network():
    net = Interferometer(num_modes=3)
    state = np.array([0, 1, 0], dtype=complex)
    stats = simulate_clicks(net, state, shots=50, seed=0)
    assert stats.counts == {"m1": 0, "m2": 50, "m3": 0}


def test_simulate_clicks_balanced_splitter():
    net = Interferometer(num_modes=2, layers=(TwoModeLayer(0, 1, omega=np.pi / 4),))
    state = np.array([1, 0], dtype=complex)
    shots = 100_000
    stats = simulate_clicks(net, state, shots=shots, seed=11)
    sigma = np.sqrt(0.25 / shots)
    assert abs(stats.counts["m1"] / shots - 0.5) < 5 * sigma
    assert stats.counts["m1"] + stats.counts["m2"] == shots


def test_simulate_clicks_discriminator_d1_rate():
    omega1 = omega1_from_x(2.0)
    _, net = discriminator_network(omega1)
    shots = 100_000
    stats = simulate_clicks(
        net, discriminator_port_state("g"), shots=shots, seed=2, labels=("D1", "D2", "F")
    )
    sigma = np.sqrt(0.25 / shots)
    assert abs(stats.counts["D1"] / shots - 0.5) < 5 * sigma
    assert stats.counts["D2"] == 0


def test_simulate_clicks_deterministic_and_validated():
    net = Interferometer(num_modes=2, layers=(TwoModeLayer(0, 1, omega=0.3),))
    state = np.array([1, 0], dtype=complex)
    first = simulate_clicks(net, state, shots=500, seed=9)
    second = simulate_clicks(net, state, shots=500, seed=9)
    assert first == second
    assert simulate_clicks(net, state, shots=500, seed=10) != first
    with pytest.raises(ContractError):
        simulate_clicks(net, np.array([1, 0, 0], dtype=complex), 10, 0)
    with pytest.raises(DomainError):
        simulate_clicks(net, state, shots=0, seed=0)
    with pytest.raises(ContractError):
        ClickStats(shots=3, seed=0, counts={"a": 1})


def test_simulate_discriminator_statistics():
    priors = Priors.from_eta1(0.5)
    omega1 = omega1_from_x(2.0)
    shots = 20_000
    run = simulate_discriminator(omega1, priors, shots=shots, seed=4)
    analytic = analytic_discriminator_probabilities(omega1, priors)
    assert run.counts["D1"] + run.counts["D2"] + run.counts["F"] == shots
    assert run.input_counts["g"] + run.input_counts["h"] == shots
    sigma = np.sqrt(analytic["success"] * (1 - analytic["success"]) / shots)
    assert abs(run.empirical_success - analytic["success"]) < 5 * sigma
    again = simulate_discriminator(omega1, priors, shots=shots, seed=4)
    assert again == run
