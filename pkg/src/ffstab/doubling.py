"""Doubling a quadratic Hamiltonian and flattening its spectrum.

Joining a system with its negated copy gives ``diag(A, -A)``, whose
single particle spectrum is symmetric by construction.  A real
orthogonal rotation built from the sign matrix ``sigma = sign(A)``
maps the doubled coupling onto the flat form

    [[0, i|A|], [-i|A|, 0]]

which is exactly an empty band of Dirac fermions with band matrix
``4|A|``, shifted by the constant ``2 tr|A|``.  The rotation is
``exp(pi/4 M)`` with ``M = [[0, i sigma], [i sigma, 0]]`` and
``M^2 = -I``, so the exponential has the closed form
``(I + M) / sqrt(2)``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import IdentityViolation
from .fock import GaussianUnitary, empty_band_to_fock, lift_orthogonal, quadratic_to_fock
from .quadratic import MajoranaQuadratic, abs_matrix, sign_matrix

FLATTEN_TOL = 1e-12


def double(h: MajoranaQuadratic) -> MajoranaQuadratic:
    """Join ``h`` with its negated copy on the doubled lattice.

    The doubled lattice stacks the copies sub-index first, so the
    coupling matrix is literally ``blockdiag(A, -A)``.
    """
    n = h.n_modes
    b = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    b[:n, :n] = h.matrix
    b[n:, n:] = -h.matrix
    return MajoranaQuadratic(lattice=h.lattice.doubled(), matrix=b)


def _real_block(m: np.ndarray) -> np.ndarray:
    if np.max(np.abs(m.imag)) > 1e-12 * max(1.0, float(np.max(np.abs(m)))):
        raise IdentityViolation("sign matrix block is not purely imaginary")
    return m.real


def mixing_generator(h: MajoranaQuadratic) -> np.ndarray:
    """Real antisymmetric generator of the copy-mixing rotation."""
    s = _real_block(1j * sign_matrix(h))
    n = h.n_modes
    m = np.zeros((2 * n, 2 * n))
    m[:n, n:] = s
    m[n:, :n] = s
    return m


def mixing_orthogonal(h: MajoranaQuadratic) -> np.ndarray:
    """Closed form ``exp(pi/4 M)`` of the copy-mixing rotation."""
    m = mixing_generator(h)
    return (np.eye(m.shape[0]) + m) / np.sqrt(2.0)


def flattened_matrix(h: MajoranaQuadratic) -> np.ndarray:
    """Closed form ``[[0, i|A|], [-i|A|, 0]]`` of the rotated coupling."""
    a_abs = abs_matrix(h)
    n = h.n_modes
    out = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    out[:n, n:] = 1j * a_abs
    out[n:, :n] = -1j * a_abs
    return out


def empty_band(h: MajoranaQuadratic) -> tuple:
    """Band matrix ``4|A|`` and energy shift ``2 tr|A|`` of the
    flattened doubled system."""
    a_abs = abs_matrix(h)
    return 4 * a_abs, float(2 * np.trace(a_abs).real)


@dataclass
class FlattenResult:
    """Everything produced by flattening a doubled Hamiltonian."""

    doubled: MajoranaQuadratic
    flattened: MajoranaQuadratic
    orthogonal: np.ndarray
    generator: np.ndarray
    band_matrix: np.ndarray
    constant: float


def flatten_conjugate(h: MajoranaQuadratic, tol: float = FLATTEN_TOL) -> FlattenResult:
    """Rotate the doubled coupling into flat form and verify the
    closed-form identity.

    Raises
    ------
    IdentityViolation
        If the numerically conjugated coupling deviates from the
        closed form by more than ``tol`` (scaled by the coupling
        norm).  That would indicate a bug, not a tolerance issue.
    """
    doubled = double(h)
    o = mixing_orthogonal(h)
    m = mixing_generator(h)
    actual = o.T @ doubled.matrix @ o
    expected = flattened_matrix(h)
    scale = max(1.0, float(np.linalg.norm(h.matrix, 2)))
    err = float(np.max(np.abs(actual - expected)))
    if err > tol * scale:
        raise IdentityViolation(
            f"flattening identity violated: max deviation {err:.3e} (tol {tol * scale:.3e})"
        )
    band, constant = empty_band(h)
    flattened = MajoranaQuadratic(lattice=doubled.lattice, matrix=actual)
    return FlattenResult(
        doubled=doubled,
        flattened=flattened,
        orthogonal=o,
        generator=(np.pi / 4) * m,
        band_matrix=band,
        constant=constant,
    )


def doubled_gaussian_unitary(h: MajoranaQuadratic) -> GaussianUnitary:
    """Fock unitary implementing the copy-mixing rotation.

    Uses the closed-form generator ``(pi/4) M`` directly instead of
    recovering a log numerically.
    """
    res = flatten_conjugate(h)
    return lift_orthogonal(res.orthogonal, generator=res.generator)


def verify_doubled_to_empty(h: MajoranaQuadratic, tol: float = 1e-8) -> dict:
    """Check ``U^dag H_doubled U = H_empty - constant`` densely.

    Returns a report with the worst entry deviation; ``ok`` is true
    when it is below ``tol``.
    """
    res = flatten_conjugate(h)
    u = lift_orthogonal(res.orthogonal, generator=res.generator)
    h_doub = quadratic_to_fock(res.doubled)
    h_empty = empty_band_to_fock(res.band_matrix, res.doubled.n_modes)
    rotated = u.conjugate(h_doub)
    target = h_empty.matrix - res.constant * np.eye(h_empty.dim)
    residual = float(np.max(np.abs(rotated.matrix - target)))
    return {
        "residual": residual,
        "ok": residual < tol,
        "constant": res.constant,
        "fock_dim": h_empty.dim,
    }
