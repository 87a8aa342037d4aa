import numpy as np
import pytest

from cfomimo import (ParameterError, PilotStructure, custom_pilot, expand_block,
                     generate_periodic_pilot, generate_td_pilot,
                     pilot_from_config, pilot_to_config)


def test_periodic_example_m2_lt3():
    pilot = generate_periodic_pilot(3, 2, rho=1.0)
    expected = np.array([
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
    ], dtype=complex)
    np.testing.assert_array_equal(pilot.entries, expected)
    assert pilot.structure is PilotStructure.PERIODIC
    assert pilot.n == 6 and pilot.l_t == 3


def test_periodic_single_antenna_is_all_ones():
    pilot = generate_periodic_pilot(1, 4, rho=1.0)
    np.testing.assert_array_equal(pilot.entries, np.ones((4, 1)))


def test_periodic_scrambled_and_scaled():
    # sqrt(2) * diag(1,-1,1,-1) * [I; I]: scrambling flips rows 1 and 3
    pilot = generate_periodic_pilot(2, 2, rho=2.0, scrambling=[1, -1, 1, -1])
    s2 = np.sqrt(2.0)
    expected = np.array([
        [s2, 0],
        [0, -s2],
        [s2, 0],
        [0, -s2],
    ], dtype=complex)
    np.testing.assert_allclose(pilot.entries, expected, atol=1e-15)
    gram = pilot.entries.conj().T @ pilot.entries
    np.testing.assert_allclose(gram, 4.0 * np.eye(2), atol=1e-12)


def test_td_example_m2_lt3():
    pilot = generate_td_pilot(3, 2, rho=1.0)
    expected = np.array([
        [1, 0, 0],
        [1, 0, 0],
        [0, 1, 0],
        [0, 1, 0],
        [0, 0, 1],
        [0, 0, 1],
    ], dtype=complex)
    np.testing.assert_array_equal(pilot.entries, expected)


def test_td_single_antenna_matches_periodic():
    td = generate_td_pilot(1, 5, rho=1.0)
    per = generate_periodic_pilot(1, 5, rho=1.0)
    np.testing.assert_array_equal(td.entries, per.entries)


def test_td_gram_and_column_counts():
    pilot = generate_td_pilot(2, 3, rho=1.0)
    gram = pilot.entries.conj().T @ pilot.entries
    np.testing.assert_allclose(gram, 3.0 * np.eye(2), atol=1e-12)
    assert np.all(np.count_nonzero(pilot.entries, axis=0) == 3)


@pytest.mark.parametrize("maker", [generate_periodic_pilot, generate_td_pilot])
def test_skeleton_one_per_row_m_per_column(maker):
    pilot = maker(3, 4, rho=1.0)
    mask = np.abs(pilot.entries) > 0
    assert np.all(mask.sum(axis=1) == 1)
    assert np.all(mask.sum(axis=0) == 4)


def test_orthogonality_property_sweep(rng):
    for l_t in range(1, 5):
        for m in range(1, 9):
            n = l_t * m
            scrambling = np.exp(2j * np.pi * rng.random(n))
            rho = float(rng.uniform(0.3, 3.0))
            target = (n * rho / l_t) * np.eye(l_t)
            for pilot in (generate_periodic_pilot(l_t, m, rho, scrambling),
                          generate_td_pilot(l_t, m, rho, scrambling)):
                gram = pilot.entries.conj().T @ pilot.entries
                assert np.max(np.abs(gram - target)) < 1e-12 * max(1.0, n * rho)
                assert pilot.is_orthogonal()


def test_scrambling_leaves_gram_unchanged(rng):
    scrambling = np.exp(2j * np.pi * rng.random(8))
    plain = generate_periodic_pilot(2, 4, rho=1.3)
    scrambled = generate_periodic_pilot(2, 4, rho=1.3, scrambling=scrambling)
    gp = plain.entries.conj().T @ plain.entries
    gs = scrambled.entries.conj().T @ scrambled.entries
    np.testing.assert_allclose(gs, gp, atol=1e-12)


def test_random_unitary_core(rng):
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    core, _ = np.linalg.qr(raw)
    pilot = generate_periodic_pilot(3, 2, rho=1.0, unitary_core=core)
    gram = pilot.entries.conj().T @ pilot.entries
    np.testing.assert_allclose(gram, 2.0 * np.eye(3), atol=1e-12)


def test_average_power_invariant(rng):
    pilot = generate_td_pilot(2, 5, rho=2.5)
    power = np.trace(pilot.entries.conj().T @ pilot.entries).real / pilot.n
    assert abs(power - 2.5) < 1e-12


def test_expand_block_scalar_case():
    pilot = custom_pilot(np.array([[2.0 + 1j], [3.0 - 1j]]))
    sbreve = expand_block(pilot, 1)
    np.testing.assert_array_equal(sbreve, np.diag([2.0 + 1j, 3.0 - 1j]))


def test_expand_block_two_antennas_layout():
    entries = np.array([[11.0, 12.0], [21.0, 22.0]])
    sbreve = expand_block(custom_pilot(entries), 1)
    expected = np.array([
        [11.0, 12.0, 0.0, 0.0],
        [0.0, 0.0, 21.0, 22.0],
    ])
    np.testing.assert_array_equal(sbreve, expected)


def test_expand_block_gram_is_block_diagonal_copies(rng):
    entries = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    pilot = custom_pilot(entries)
    l_r = 3
    sbreve = expand_block(pilot, l_r)
    gram = sbreve.conj().T @ sbreve
    d = pilot.n * pilot.l_t
    block = gram[:d, :d].copy()
    for r in range(l_r):
        sl = slice(r * d, (r + 1) * d)
        np.testing.assert_allclose(gram[sl, sl], block, atol=1e-12)
        gram[sl, sl] = 0.0
    assert np.max(np.abs(gram)) == 0.0


def test_expand_block_matches_vectorization(rng):
    # y0 = Sb h must equal the per-sample sum over transmit antennas
    entries = rng.standard_normal((6, 2)) + 1j * rng.standard_normal((6, 2))
    pilot = custom_pilot(entries)
    l_r = 2
    h = rng.standard_normal(2 * 6 * 2) + 1j * rng.standard_normal(2 * 6 * 2)
    direct = expand_block(pilot, l_r) @ h
    h3 = h.reshape(l_r, 6, 2)
    manual = np.einsum("kt,rkt->rk", entries, h3).ravel()
    np.testing.assert_allclose(direct, manual, atol=1e-12)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        generate_periodic_pilot(2, 2, rho=-1.0)
    with pytest.raises(ParameterError):
        generate_periodic_pilot(2, 2, scrambling=[1.0, 1.0])  # wrong length
    with pytest.raises(ParameterError):
        generate_periodic_pilot(2, 2, scrambling=[1.0, 2.0, 1.0, 1.0])
    with pytest.raises(ParameterError):
        generate_periodic_pilot(2, 2, unitary_core=np.array([[1.0, 0.0], [1.0, 1.0]]))
    with pytest.raises(ParameterError):
        generate_td_pilot(0, 3)


def test_entries_are_read_only():
    pilot = generate_td_pilot(2, 2)
    with pytest.raises(ValueError):
        pilot.entries[0, 0] = 5.0


def test_custom_pilot_reports_orthogonality():
    skewed = custom_pilot(np.array([[1.0, 0.5], [0.0, 1.0]]))
    assert skewed.structure is PilotStructure.CUSTOM
    assert not skewed.is_orthogonal()
    assert skewed.orthogonality_defect() > 0.1


def test_with_power_rescales():
    pilot = generate_td_pilot(2, 3, rho=1.0)
    boosted = pilot.with_power(4.0)
    np.testing.assert_allclose(boosted.entries, 2.0 * pilot.entries)
    assert boosted.rho == 4.0


def test_config_round_trip(rng):
    scrambling = np.exp(2j * np.pi * rng.random(6))
    raw = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    core, _ = np.linalg.qr(raw)
    for pilot in (generate_periodic_pilot(3, 2, 1.5, scrambling, core),
                  generate_td_pilot(3, 2, 0.7, scrambling),
                  generate_periodic_pilot(2, 4),
                  custom_pilot(rng.standard_normal((4, 2)) + 0j)):
        rebuilt = pilot_from_config(pilot_to_config(pilot))
        np.testing.assert_allclose(rebuilt.entries, pilot.entries, atol=1e-15)
        assert rebuilt.structure == pilot.structure
