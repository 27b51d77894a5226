import numpy as np
import pytest

from conftest import gapped_quadratic, kitaev_bloch_energies

from ffstab import (
    DecayProfile,
    GaplessError,
    Lattice,
    MajoranaQuadratic,
    abs_matrix,
    build_atomic,
    build_kitaev_chain,
    build_pip2d,
    build_random_local,
    check_envelope,
    dirac_to_majorana,
    fit_decay,
    fit_decay_points,
    quadratic_to_fock,
    sign_matrix,
    single_particle_gap,
    spectrum,
    verify_abs_decay_chain,
)
from ffstab.quadratic import SUPEREXP_RATE, site_pair_norms

TWO_LEVEL = np.array([[0.0, 0.25j], [-0.25j, 0.0]])
LAT1 = Lattice(dims=1, size=1, modes_per_site=2)


def two_level(scale=1.0):
    return MajoranaQuadratic(matrix=scale * TWO_LEVEL, lattice=LAT1)


def test_coupling_validation():
    good = two_level()
    assert good.n_modes == 2
    with pytest.raises(ValueError):
        MajoranaQuadratic(matrix=np.array([[0.0, 0.25], [0.25, 0.0]]), lattice=LAT1)
    with pytest.raises(ValueError):
        MajoranaQuadratic(matrix=np.eye(2), lattice=LAT1)
    with pytest.raises(ValueError):
        MajoranaQuadratic(matrix=TWO_LEVEL, lattice=Lattice(dims=1, size=2, modes_per_site=2))


def test_gap_two_level():
    assert single_particle_gap(two_level()) == pytest.approx(1.0, abs=1e-12)
    assert single_particle_gap(two_level(2.0)) == pytest.approx(2.0, abs=1e-12)


def test_gap_scaling_half():
    a = 1j * 0.5 * np.array([[0.0, 1.0], [-1.0, 0.0]])
    h = MajoranaQuadratic(matrix=a, lattice=LAT1)
    assert single_particle_gap(h) == pytest.approx(2.0, abs=1e-12)


def test_gapless_rejected():
    zero = MajoranaQuadratic(matrix=np.zeros((2, 2), dtype=complex), lattice=LAT1)
    with pytest.raises(GaplessError):
        single_particle_gap(zero)
    with pytest.raises(GaplessError):
        sign_matrix(zero)


def test_sign_matrix_two_level():
    s = sign_matrix(two_level())
    np.testing.assert_allclose(s, np.array([[0, 1j], [-1j, 0]]), atol=1e-14)


def test_sign_matrix_involution_and_fixed_point():
    for seed in range(5):
        h = gapped_quadratic(10, seed)
        s = sign_matrix(h)
        np.testing.assert_allclose(s @ s, np.eye(10), atol=1e-12)
        # sigma of a +-1-spectrum coupling is itself
        hs = MajoranaQuadratic(matrix=s, lattice=h.lattice)
        np.testing.assert_allclose(sign_matrix(hs), s, atol=1e-12)


def test_abs_matrix_properties():
    np.testing.assert_allclose(abs_matrix(two_level()), 0.25 * np.eye(2), atol=1e-14)
    for seed in range(5):
        h = gapped_quadratic(8, seed)
        aa = abs_matrix(h)
        np.testing.assert_allclose(aa.imag, 0, atol=1e-12)
        np.testing.assert_allclose(aa, aa.T, atol=1e-12)
        got = np.sort(np.linalg.eigvalsh(aa))
        want = np.sort(np.abs(np.linalg.eigvalsh(h.matrix)))
        np.testing.assert_allclose(got, want, atol=1e-12)
        s = sign_matrix(h)
        np.testing.assert_allclose(s @ h.matrix, aa, atol=1e-12)
        np.testing.assert_allclose(h.matrix @ s, aa, atol=1e-12)


def test_site_pair_norms_blocks():
    lat = Lattice(dims=1, size=2, modes_per_site=2)
    b = np.zeros((4, 4))
    # modes (0, 2) sit on site 0 and (1, 3) on site 1; put a known
    # block between the two sites
    b[0, 1] = 3.0
    b[2, 3] = 4.0
    norms = site_pair_norms(b, lat)
    assert norms.shape == (2, 2)
    assert norms[0, 1] == pytest.approx(4.0)


def test_fit_decay_exact_exponential():
    n = 20
    lat = Lattice(dims=1, size=n, boundary="open")
    idx = np.arange(n)
    b = 1j * np.sign(idx[None, :] - idx[:, None]) * np.exp(-np.abs(idx[None, :] - idx[:, None]))
    prof = fit_decay(b, lat)
    assert prof.rate == pytest.approx(1.0, rel=0.05)
    assert check_envelope(b, lat, prof)


def test_fit_decay_degenerate_counts():
    zero = fit_decay_points([0.0, 1.0, 2.0], [0.0, 0.0, 0.0])
    assert zero.amplitude == 0.0

    one = fit_decay_points([1.0], [0.3])
    assert one.superexponential
    assert one.amplitude == pytest.approx(0.3 * np.exp(one.rate))
    assert one.bound(1.0) == pytest.approx(0.3)

    two = fit_decay_points([0.0, 1.0], [1.0, np.exp(-2.0)])
    assert two.rate == pytest.approx(2.0, abs=1e-12)
    assert two.residual == 0.0


def test_fit_decay_strictly_local_sentinel():
    lat = Lattice(dims=1, size=6, boundary="open")
    b = 1j * np.diag(np.full(6, 0.5))
    b = (b - b.T) / 2  # keep it antisymmetric in form; diagonal survives abs
    prof = fit_decay(np.diag(np.full(6, 0.5)), lat)
    assert prof.rate >= SUPEREXP_RATE
    assert check_envelope(np.diag(np.full(6, 0.5)), lat, prof)


def test_profile_json_roundtrip():
    prof = DecayProfile(amplitude=1.5, rate=0.7, residual=0.01)
    again = DecayProfile.from_json(prof.to_json())
    assert again == prof
    assert '"K"' in prof.to_json() and '"nu"' in prof.to_json()


def test_kitaev_matches_bloch_dispersion():
    h = build_kitaev_chain(8, t=1.0, delta_pair=1.0, mu_chem=2.5, boundary="periodic")
    bloch = kitaev_bloch_energies(8, 1.0, 1.0, 2.5)
    got = np.sort(4 * np.abs(np.linalg.eigvalsh(h.matrix)))
    want = np.sort(np.concatenate([bloch, bloch]))
    np.testing.assert_allclose(got, want, atol=1e-10)
    assert single_particle_gap(h) == pytest.approx(bloch.min(), abs=1e-10)


def test_kitaev_gapless_cases():
    with pytest.raises(GaplessError):
        single_particle_gap(build_kitaev_chain(8, mu_chem=2.0, boundary="periodic"))
    # topological open chain carries near-zero edge modes
    with pytest.raises(GaplessError):
        single_particle_gap(build_kitaev_chain(12, mu_chem=0.0, boundary="open"))


def test_dirac_builder_number_operator():
    lat = Lattice(dims=1, size=1, modes_per_site=2)
    h = dirac_to_majorana(np.array([[1.0]]), np.zeros((1, 1)), lat)
    evals = spectrum(quadratic_to_fock(h))
    # c^dag c minus its trace part
    np.testing.assert_allclose(evals, [-0.5, 0.5], atol=1e-12)


def test_pip2d_gapped():
    h = build_pip2d(4, mu_chem=5.0, boundary="periodic")
    assert h.lattice.dims == 2
    assert single_particle_gap(h) > 0.5


def test_atomic_strictly_local():
    h = build_atomic(5, mu_chem=1.0)
    prof = fit_decay(h.matrix, h.lattice)
    assert prof.superexponential
    assert single_particle_gap(h) == pytest.approx(1.0, abs=1e-12)


def test_random_local_envelope_and_determinism():
    lat = Lattice(dims=1, size=8, boundary="periodic", modes_per_site=2)
    h1 = build_random_local(lat, amplitude=1.0, rate=0.8, seed=7)
    h2 = build_random_local(lat, amplitude=1.0, rate=0.8, seed=7)
    assert np.array_equal(h1.matrix, h2.matrix)
    target = DecayProfile(amplitude=1.0, rate=0.8, residual=0.0)
    assert check_envelope(h1.matrix, lat, target, slack=1e-12)


def test_abs_decay_chain_small():
    h = build_kitaev_chain(20, mu_chem=2.5, boundary="periodic")
    rep = verify_abs_decay_chain(h)
    assert rep["ok"]
    assert rep["sigma_profile"].rate > 0
