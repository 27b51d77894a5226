"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own Fock-layer code
paths: the free-fermion spectrum is built by enumerating sign
assignments over single-particle eigenvalues, and the Kitaev
dispersion comes from the analytic Bloch formula.
"""

import numpy as np
import pytest
import scipy.linalg as sla

from ffstab import Lattice, MajoranaQuadratic


def make_gapped_coupling(n_modes, seed, floor=0.05, norm=0.25):
    """Random purely imaginary antisymmetric Hermitian coupling with
    all eigenvalue magnitudes pushed away from zero.

    Works on the real antisymmetric part in its Schur form, where the
    spectrum sits in 2x2 rotation blocks, so clipping block magnitudes
    clips eigenvalue magnitudes exactly.
    """
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((n_modes, n_modes))
    r = (r - r.T) / 2
    t, q = sla.schur(r, output="real")
    for i in range(0, n_modes - 1, 2):
        b = t[i, i + 1]
        sign = 1.0 if b >= 0 else -1.0
        t[i, i + 1] = sign * max(abs(b), floor)
        t[i + 1, i] = -t[i, i + 1]
    r = q @ t @ q.T
    r = (r - r.T) / 2
    top = np.max(np.abs(np.linalg.eigvalsh(1j * r)))
    return 1j * r * (norm / top)


def gapped_quadratic(n_modes, seed, **kwargs):
    """Random gapped MajoranaQuadratic on a 1D two-mode-per-site chain."""
    a = make_gapped_coupling(n_modes, seed, **kwargs)
    lat = Lattice(dims=1, size=n_modes // 2, boundary="open", modes_per_site=2)
    return MajoranaQuadratic(matrix=a, lattice=lat)


def signsum_spectrum(a):
    """Independent many-body spectrum oracle for ``sum gamma A gamma``.

    Each positive eigenvalue pair of A contributes an independent
    two-level splitting of size 4*eig, so the spectrum is every signed
    sum of the doubled positive eigenvalues.
    """
    evals = np.linalg.eigvalsh(np.asarray(a))
    pos = evals[evals > 0]
    m = pos.size
    signs = ((np.arange(1 << m)[:, None] >> np.arange(m)) & 1) * 2 - 1
    return np.sort(signs @ (2 * pos))


def kitaev_bloch_energies(length, t=1.0, delta_pair=1.0, mu_chem=2.5):
    """Positive Bloch band of the periodic chain, one value per momentum."""
    k = 2 * np.pi * np.arange(length) / length
    return np.sqrt((2 * t * np.cos(k) + mu_chem) ** 2 + 4 * delta_pair**2 * np.sin(k) ** 2)


def random_even_hermitian(rng, n_modes):
    """Random Hermitian operator supported on even monomials only,
    built by zeroing matrix elements between opposite-parity basis
    states (occupation parity equals the bit parity of the JW index)."""
    dim = 1 << (n_modes // 2)
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    raw = (raw + raw.conj().T) / 2
    idx = np.arange(dim)
    bits = np.zeros(dim, dtype=int)
    v = idx.copy()
    while v.any():
        bits ^= v & 1
        v >>= 1
    mask = np.equal.outer(bits, bits)
    return raw * mask


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one line per acceptance criterion into the final report."""
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
