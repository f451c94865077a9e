"""Smoke tests for the quenchlab python bindings."""

import math

import numpy as np
import pytest

import quenchlab as ql


def test_dimension():
    assert ql.dimension(6, 6) == 462
    assert ql.dimension(2, 2) == 3
    assert ql.dimension_capped(6, 6, 1) == 1
    with pytest.raises(RuntimeError):
        ql.dimension(1000, 1000)


def test_basis_round_trip():
    basis = ql.SectorBasis(4, 4)
    assert len(basis) == ql.dimension(4, 4)
    for index in range(basis.dim):
        assert basis.rank(basis.state(index)) == index
    assert basis.state(0) == [4, 0, 0, 0]


def test_hamiltonian_elements():
    basis = ql.SectorBasis(2, 2)
    h = ql.build_hamiltonian(ql.HubbardParams(2, 2, tunneling=1.0, interaction=0.0), basis)
    dense = h.to_dense()
    assert dense[0, 1] == pytest.approx(-math.sqrt(2.0))
    decomp = ql.eigh(h)
    assert decomp.eigenvalues[0] == pytest.approx(-2.0)
    assert decomp.eigenvalues[2] == pytest.approx(2.0)


def test_bell_state_entropy():
    basis = ql.SectorBasis(2, 2)
    amplitudes = np.zeros(3, dtype=complex)
    amplitudes[basis.rank([2, 0])] = 1.0 / math.sqrt(2.0)
    amplitudes[basis.rank([0, 2])] = 1.0 / math.sqrt(2.0)
    rho = ql.reduce(amplitudes, ql.PartitionMap(basis, [0]))
    assert ql.purity(rho) == pytest.approx(0.5)
    assert ql.renyi2(rho) == pytest.approx(math.log(2.0))
    assert ql.mutual_information(amplitudes, basis, [0], [1]) == pytest.approx(
        2.0 * math.log(2.0)
    )


def test_quench_and_temperature_match():
    basis = ql.SectorBasis(6, 6)
    h = ql.build_hamiltonian(ql.HubbardParams(6, 6, 1.0, 1.0 / 0.64), basis)
    decomp = ql.eigh(h)
    temperature = ql.match_canonical_temperature(decomp, 0.0)
    assert temperature == pytest.approx(3.8, abs=0.4)

    mott = ql.fock_state(basis, [1, 1, 1, 1, 1, 1])
    psi = ql.evolve(decomp, mott, 6.0)
    assert psi.norm == pytest.approx(1.0)
    stats = ql.partition_average(psi.amplitudes, basis, 1)
    thermal = ql.thermal_renyi(ql.canonical(decomp, temperature), decomp, basis, 1)
    assert abs(stats.mean - thermal.mean) < 0.25


def test_parity_equals_purity():
    basis = ql.SectorBasis(3, 3)
    h = ql.build_hamiltonian(ql.HubbardParams(3, 3, 1.0, 1.0 / 0.64), basis)
    decomp = ql.eigh(h)
    psi = ql.evolve(decomp, ql.fock_state(basis, [1, 1, 1]), 4.0)

    two = ql.embed_product(psi, basis)
    ql.apply_beamsplitter(two)
    for subsystem in ([0], [0, 1], [1, 2]):
        target = ql.purity(ql.reduce(psi.amplitudes, ql.PartitionMap(basis, subsystem)))
        assert ql.exact_parity(two, subsystem) == pytest.approx(target, abs=1e-8)

    shots = ql.sample_shots(two, 4000, seed=7)
    estimate = ql.purity_estimator(shots, [0], copy_sites=3)
    assert abs(estimate.value - ql.exact_parity(two, [0])) < 4.0 * estimate.std_error + 1e-12

    entropy = ql.entropy_from_shots(shots, [0], copy_sites=3, n_bootstrap=200, seed=3)
    assert entropy.value == pytest.approx(-math.log(max(estimate.value, 1e-6)))


def test_piecewise_fit_and_time_conversion():
    times = [0.1 * k for k in range(25)]
    values = [0.2 + 1.5 * min(t, 0.9) for t in times]
    fit = ql.piecewise_linear_fit(times, values)
    assert fit.slope == pytest.approx(1.5, rel=1e-5)
    assert fit.break_time == pytest.approx(0.9, abs=1e-3)

    assert ql.convert_time(10.0, 66.0) == pytest.approx(4.147, abs=1e-3)
    assert ql.saturated_window_times()[0] == pytest.approx(4.147)
