import numpy as np
import pytest

from ffstab import (
    BumpFilter,
    Cube,
    DegeneracyAmbiguous,
    FockOperator,
    GapTooSmall,
    IdentityViolation,
    Lattice,
    PerturbationSpec,
    decompose_empty_band,
    empty_band_to_fock,
    generate_perturbation,
    ground_data,
    per_site_split,
    rewrite_decomposition,
    spectral_filter,
)
from ffstab.locality import LocalDecomposition


def test_bump_profile_values():
    f = BumpFilter(half_width=0.5)
    assert f.profile(0.0) == pytest.approx(1.0)
    assert f.profile(0.5) == 0.0
    assert f.profile(-0.5) == 0.0
    assert f.profile(3.0) == 0.0
    want = np.exp(1.0 - 1.0 / (1.0 - 0.25))
    assert f.profile(0.25) == pytest.approx(want, rel=1e-14)
    assert f.profile(-0.25) == pytest.approx(f.profile(0.25))
    arr = f.profile(np.array([0.0, 0.25, 0.5, 1.0]))
    np.testing.assert_allclose(arr, [1.0, want, 0.0, 0.0], rtol=1e-14)


def test_bump_validation():
    with pytest.raises(ValueError):
        BumpFilter(half_width=0.0)
    with pytest.raises(ValueError):
        BumpFilter(half_width=-1.0)


def test_ground_data_two_level():
    h = FockOperator(np.diag([0.0, 1.0]), 2)
    gd = ground_data(h)
    np.testing.assert_allclose(gd.projector.matrix, np.diag([1.0, 0.0]), atol=1e-14)
    assert gd.degeneracy == 1
    assert gd.gap == pytest.approx(1.0)
    assert gd.e_min == pytest.approx(0.0)


def test_ground_data_wider_sector():
    h = FockOperator(np.diag([0.0, 1.0, 2.0, 3.0]), 4)
    gd = ground_data(h, g=2)
    np.testing.assert_allclose(gd.projector.matrix, np.diag([1.0, 1.0, 0.0, 0.0]), atol=1e-14)
    assert gd.gap == pytest.approx(1.0)
    assert gd.e_max == pytest.approx(1.0)


def test_ground_data_ambiguous_split():
    h = FockOperator(np.diag([0.0, 0.0, 1.0, 1.0]), 4)
    with pytest.raises(DegeneracyAmbiguous):
        ground_data(h, g=1)
    gd = ground_data(h, g=2)
    assert gd.degeneracy == 2


def test_ground_data_validation():
    h = FockOperator(np.array([[0.0, 1.0], [0.0, 0.0]]), 2)
    with pytest.raises(ValueError):
        ground_data(h)
    good = FockOperator(np.diag([0.0, 1.0]), 2)
    with pytest.raises(ValueError):
        ground_data(good, g=0)
    with pytest.raises(ValueError):
        ground_data(good, g=2)


def test_ground_data_empty_band():
    op = empty_band_to_fock(np.eye(3), 6)
    gd = ground_data(op)
    assert gd.gap == pytest.approx(1.0, abs=1e-12)
    assert gd.e_min == pytest.approx(0.0, abs=1e-12)
    # rank-one projector onto the all-empty state
    assert np.linalg.matrix_rank(gd.projector.matrix, tol=1e-8) == 1


def test_filter_kills_cross_gap_flip():
    h = FockOperator(np.diag([0.0, 1.0]), 2)
    flip = FockOperator(np.array([[0.0, 1.0], [1.0, 0.0]]), 2)
    out = spectral_filter(h, flip, BumpFilter(0.5))
    assert out.norm() < 1e-14


def test_filter_fixes_commuting_operator():
    rng = np.random.default_rng(2)
    hmat = rng.normal(size=(8, 8))
    hmat = (hmat + hmat.T) / 2
    h = FockOperator(hmat, 6)
    op = FockOperator(hmat @ hmat + 2 * hmat, 6)
    out = spectral_filter(h, op, BumpFilter(0.5))
    np.testing.assert_allclose(out.matrix, op.matrix, atol=1e-10)
    # and the reference filters to itself
    again = spectral_filter(h, h, BumpFilter(0.5))
    np.testing.assert_allclose(again.matrix, h.matrix, atol=1e-12)


def _gapped_hamiltonian(rng, dim, n_modes, gap=1.0):
    evals = np.concatenate([[0.0], gap + np.sort(rng.uniform(0, 3, size=dim - 1))])
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return FockOperator((q * evals) @ q.conj().T, n_modes)


def test_filter_block_diagonal_when_gapped():
    rng = np.random.default_rng(7)
    for _ in range(5):
        h = _gapped_hamiltonian(rng, 16, 8, gap=1.0)
        gd = ground_data(h)
        o = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        o = (o + o.conj().T) / 2
        o /= np.linalg.norm(o, 2)
        filt = spectral_filter(h, FockOperator(o, 8), BumpFilter(0.5))
        p = gd.projector.matrix
        off = (np.eye(16) - p) @ filt.matrix @ p
        assert np.linalg.norm(off, 2) < 1e-10
        # the ground-to-ground element is untouched
        np.testing.assert_allclose(p @ filt.matrix @ p, p @ o @ p, atol=1e-10)


def test_per_site_split_totals():
    lat = Lattice(dims=1, size=4, boundary="open", modes_per_site=2)
    dec = LocalDecomposition(lattice=lat)
    rng = np.random.default_rng(4)

    def even_op():
        from conftest import random_even_hermitian

        return FockOperator(random_even_hermitian(rng, lat.n_modes), lat.n_modes)

    dec.add_term(Cube(corner=(0,), size=1), even_op())
    dec.add_term(Cube(corner=(0,), size=3), even_op())
    dec.add_term(Cube(corner=(2,), size=2), even_op())
    split = per_site_split(dec)
    assert set(split) == {0, 1, 2}  # size-3 cube at 0 centers on site 1
    total = sum(op.matrix for op in split.values())
    np.testing.assert_allclose(total, dec.total().matrix, atol=1e-14)


def _two_site_setup():
    lat = Lattice(dims=1, size=2, boundary="open", modes_per_site=2)
    band = np.array([[1.5, 0.2], [0.2, 1.5]])
    h0 = decompose_empty_band(band, lat)
    return lat, per_site_split(h0)


def test_rewrite_zero_perturbation():
    lat, h0_split = _two_site_setup()
    v = LocalDecomposition(lattice=lat)
    report = rewrite_decomposition(h0_split, v, 0.0, BumpFilter(0.5))
    assert report.residual_m_sum < 1e-12
    assert report.residual_filtered_sum < 1e-12
    assert all(n < 1e-12 for n in report.x_norms.values())


def test_rewrite_weak_conserving_hopping():
    lat, h0_split = _two_site_setup()
    spec = PerturbationSpec(
        strength=1.0, decay_rate=1.0, kind="quadratic", seed=3, r_max=2, conserving=True
    )
    v = generate_perturbation(spec, lat)
    s = 0.02
    report = rewrite_decomposition(h0_split, v, s, BumpFilter(0.5))
    assert report.commutator_x < 1e-10
    assert report.residual_filtered_sum < 1e-10
    max_x = max(report.x_norms.values())
    assert 0.0 < max_x <= 10 * s
    summary = report.summary()
    assert summary["max_x_norm"] == pytest.approx(max_x)
    assert set(summary["x_norms"]) == {"0", "1"}


def test_rewrite_gap_too_small():
    lat, h0_split = _two_site_setup()
    v = LocalDecomposition(lattice=lat)
    with pytest.raises(GapTooSmall):
        rewrite_decomposition(h0_split, v, 0.0, BumpFilter(1.0))


def test_rewrite_generic_perturbation_breaks_projector():
    lat, h0_split = _two_site_setup()
    # mixed terms include cross-site pairing, which moves the ground
    # state away from the unperturbed one at first order
    spec = PerturbationSpec(strength=1.0, decay_rate=1.0, kind="mixed", seed=6, r_max=2)
    v = generate_perturbation(spec, lat)
    s = 0.05
    with pytest.raises(IdentityViolation):
        rewrite_decomposition(h0_split, v, s, BumpFilter(0.5))
    report = rewrite_decomposition(h0_split, v, s, BumpFilter(0.5), strict=False)
    # the sums still close; only the defect commutator fails
    assert report.residual_filtered_sum < 1e-10
    assert report.residual_m_sum < 1e-10
    assert report.commutator_filtered < 1e-10
    assert report.commutator_x > 1e-6


def test_rewrite_requires_terms():
    lat = Lattice(dims=1, size=2, boundary="open", modes_per_site=2)
    with pytest.raises(ValueError):
        rewrite_decomposition({}, LocalDecomposition(lattice=lat), 0.0, BumpFilter(0.5))
