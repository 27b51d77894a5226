"""Dense Fock-space representation of Majorana operators.

Majorana modes are mapped to signed permutation matrices on the
``2**(n_modes/2)`` dimensional Fock space through a Jordan-Wigner
encoding (see :mod:`ffstab._clifford`).  This module builds dense
Hamiltonians from quadratic coupling matrices and lifts single
particle orthogonal rotations to Gaussian unitaries acting on the
full space.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from ._clifford import (
    FOCK_DIM_CAP,
    action_to_dense,
    add_action,
    compose,
    majorana_action,
    parity_signs,
)
from .errors import DimensionOverflow, IdentityViolation
from .quadratic import MajoranaQuadratic

ORTHO_TOL = 1e-10


def fock_dimension(n_modes: int, cap: int = FOCK_DIM_CAP) -> int:
    """Fock dimension ``2**(n_modes/2)``, guarded by a hard cap.

    Raises
    ------
    DimensionOverflow
        If the dense matrices would exceed ``cap`` rows.
    """
    if n_modes % 2 != 0 or n_modes <= 0:
        raise ValueError("n_modes must be a positive even integer")
    dim = 1 << (n_modes // 2)
    if dim > cap:
        raise DimensionOverflow(
            f"{n_modes} modes need Fock dimension {dim}, above the cap {cap}"
        )
    return dim


@dataclass
class FockOperator:
    """Dense operator on Fock space, tagged with its mode count."""

    matrix: np.ndarray
    n_modes: int

    def __post_init__(self):
        dim = fock_dimension(self.n_modes)
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match Fock dimension {dim}"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def copy(self) -> "FockOperator":
        return FockOperator(self.matrix.copy(), self.n_modes)

    def dagger(self) -> "FockOperator":
        return FockOperator(self.matrix.conj().T, self.n_modes)

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T))) <= tol

    def norm(self) -> float:
        """Operator (spectral) norm."""
        if self.is_hermitian(tol=1e-12 * max(1.0, float(np.max(np.abs(self.matrix))))):
            evals = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
            return float(np.max(np.abs(evals))) if evals.size else 0.0
        return float(np.linalg.norm(self.matrix, ord=2))

    def parity(self, tol: float = 1e-12) -> str:
        """Classify as ``"even"``, ``"odd"``, ``"mixed"`` or ``"zero"``
        under the total fermion parity grading."""
        signs = parity_signs(self.n_modes)
        even_mask = np.equal.outer(signs, signs)
        scale = float(np.max(np.abs(self.matrix)))
        if scale <= tol:
            return "zero"
        odd_weight = float(np.max(np.abs(np.where(even_mask, 0.0, self.matrix))))
        even_weight = float(np.max(np.abs(np.where(even_mask, self.matrix, 0.0))))
        cut = tol * scale
        if odd_weight <= cut:
            return "even"
        if even_weight <= cut:
            return "odd"
        return "mixed"

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.matrix + other.matrix, self.n_modes)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.matrix - other.matrix, self.n_modes)

    def __neg__(self) -> "FockOperator":
        return FockOperator(-self.matrix, self.n_modes)

    def __mul__(self, scalar) -> "FockOperator":
        return FockOperator(self.matrix * complex(scalar), self.n_modes)

    __rmul__ = __mul__

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.matrix @ other.matrix, self.n_modes)

    def _check_compatible(self, other: "FockOperator"):
        if not isinstance(other, FockOperator):
            raise TypeError("expected a FockOperator")
        if other.n_modes != self.n_modes:
            raise ValueError("operators act on different mode sets")


def identity_op(n_modes: int) -> FockOperator:
    dim = fock_dimension(n_modes)
    return FockOperator(np.eye(dim, dtype=np.complex128), n_modes)


def majorana_op(mode: int, n_modes: int) -> FockOperator:
    """Dense matrix of a single Majorana mode."""
    fock_dimension(n_modes)
    return FockOperator(action_to_dense(majorana_action(mode, n_modes)), n_modes)


def gamma_bilinear(coeff: np.ndarray, n_modes: int) -> FockOperator:
    """Dense ``sum_{pq} coeff_pq gamma_p gamma_q`` for an arbitrary
    coefficient matrix (no symmetry assumed)."""
    coeff = np.asarray(coeff, dtype=np.complex128)
    if coeff.shape != (n_modes, n_modes):
        raise ValueError("coefficient matrix does not match the mode count")
    dim = fock_dimension(n_modes)
    out = np.zeros((dim, dim), dtype=np.complex128)
    actions = [majorana_action(p, n_modes) for p in range(n_modes)]
    for p in range(n_modes):
        row = coeff[p]
        nz = np.nonzero(row)[0]
        if nz.size == 0:
            continue
        for q in nz:
            add_action(out, compose(actions[p], actions[q]), row[q])
    return FockOperator(out, n_modes)


def quadratic_to_fock(h: MajoranaQuadratic) -> FockOperator:
    """Dense Fock Hamiltonian of ``sum gamma A gamma``."""
    return gamma_bilinear(h.matrix, h.n_modes)


def dirac_annihilator(mode_a: int, mode_b: int, n_modes: int) -> FockOperator:
    """Annihilator ``(gamma_a + i gamma_b) / 2`` of the Dirac fermion
    built from the given Majorana pair."""
    ga = majorana_op(mode_a, n_modes)
    gb = majorana_op(mode_b, n_modes)
    return FockOperator((ga.matrix + 1j * gb.matrix) / 2, n_modes)


def empty_band_to_fock(t_matrix: np.ndarray, n_modes: int) -> FockOperator:
    """Dense ``sum_{mn} T_mn psi_m^dag psi_n`` where ``psi_m`` pairs
    Majorana modes ``m`` and ``n_modes/2 + m``.

    ``T`` must be Hermitian.  When ``T`` is also positive
    semidefinite the spectrum is nonnegative with the all-empty state
    at zero energy and the gap equals the smallest eigenvalue of ``T``.
    """
    t = np.asarray(t_matrix, dtype=np.complex128)
    half = n_modes // 2
    if t.shape != (half, half):
        raise ValueError("band matrix must be half the mode count on each side")
    if np.max(np.abs(t - t.conj().T)) > 1e-12:
        raise ValueError("band matrix must be Hermitian")
    # expand psi_m^dag psi_n into gamma bilinears; the constant from
    # normal ordering rides along in the diagonal blocks
    coeff = np.zeros((n_modes, n_modes), dtype=np.complex128)
    coeff[:half, :half] = t / 4
    coeff[:half, half:] = 1j * t / 4
    coeff[half:, :half] = -1j * t / 4
    coeff[half:, half:] = t / 4
    return gamma_bilinear(coeff, n_modes)


def spectrum(op: FockOperator) -> np.ndarray:
    """Sorted eigenvalues of a Hermitian Fock operator."""
    if not op.is_hermitian(tol=1e-10 * max(1.0, float(np.max(np.abs(op.matrix))))):
        raise ValueError("spectrum is defined for Hermitian operators only")
    return np.linalg.eigvalsh((op.matrix + op.matrix.conj().T) / 2)


def many_body_gap(op: FockOperator) -> float:
    """Difference between the two lowest Fock eigenvalues."""
    evals = spectrum(op)
    return float(evals[1] - evals[0])


def orthogonal_generator(o: np.ndarray, tol: float = ORTHO_TOL) -> np.ndarray:
    """Real antisymmetric ``G`` with ``expm(G) = O``.

    Uses the real Schur form, which for an orthogonal matrix is a
    direct sum of plane rotations and ``+-1`` eigenvalues.  Pairs of
    ``-1`` eigenvalues become half-turn rotation planes; an odd count
    means ``det O = -1`` and no generator exists.
    """
    o = np.asarray(o, dtype=float)
    n = o.shape[0]
    if o.shape != (n, n):
        raise ValueError("expected a square matrix")
    if np.max(np.abs(o @ o.T - np.eye(n))) > tol:
        raise ValueError("matrix is not orthogonal within tolerance")
    r, z = sla.schur(o, output="real")
    gs = np.zeros((n, n))
    minus_ones = []
    i = 0
    while i < n:
        if i + 1 < n and abs(r[i + 1, i]) > tol:
            theta = np.arctan2(r[i, i + 1], r[i, i])
            gs[i, i + 1] = theta
            gs[i + 1, i] = -theta
            i += 2
        else:
            if r[i, i] < 0:
                minus_ones.append(i)
            i += 1
    if len(minus_ones) % 2:
        raise ValueError("matrix has determinant -1 and no real log exists")
    for a, b in zip(minus_ones[::2], minus_ones[1::2]):
        gs[a, b] = np.pi
        gs[b, a] = -np.pi
    g = z @ gs @ z.T
    g = (g - g.T) / 2
    check = float(np.max(np.abs(sla.expm(g) - o)))
    if check > 1e-8:
        raise IdentityViolation(f"generator reconstruction missed by {check:.3e}")
    return g


@dataclass
class GaussianUnitary:
    """Fock unitary implementing a single particle rotation.

    ``matrix`` satisfies ``U^dag gamma_p U = sum_k O_pk gamma_k`` with
    ``O = expm(generator)``.
    """

    matrix: np.ndarray
    orthogonal: np.ndarray
    generator: np.ndarray
    n_modes: int
    _gammas: list = field(default=None, repr=False)

    def conjugate(self, op: FockOperator) -> FockOperator:
        """Heisenberg rotation ``U^dag op U``."""
        if op.n_modes != self.n_modes:
            raise ValueError("operator acts on a different mode set")
        return FockOperator(self.matrix.conj().T @ op.matrix @ self.matrix, self.n_modes)

    def conjugate_inverse(self, op: FockOperator) -> FockOperator:
        """Inverse rotation ``U op U^dag``."""
        if op.n_modes != self.n_modes:
            raise ValueError("operator acts on a different mode set")
        return FockOperator(self.matrix @ op.matrix @ self.matrix.conj().T, self.n_modes)


def lift_orthogonal(o: np.ndarray, generator: np.ndarray = None) -> GaussianUnitary:
    """Lift a special orthogonal mode rotation to Fock space.

    Builds ``U = expm((1/4) sum G_pq gamma_p gamma_q)`` where ``G`` is
    the real log of ``O`` (or the supplied generator).  The quadratic
    generator is anti-Hermitian, so the exponential is taken through a
    Hermitian eigendecomposition rather than a generic ``expm``.
    """
    o = np.asarray(o, dtype=float)
    n_modes = o.shape[0]
    fock_dimension(n_modes)
    if generator is None:
        g = orthogonal_generator(o)
    else:
        g = np.asarray(generator, dtype=float)
        if np.max(np.abs(g + g.T)) > 1e-12:
            raise ValueError("generator must be real antisymmetric")
        mismatch = float(np.max(np.abs(sla.expm(g) - o)))
        if mismatch > 1e-10:
            raise ValueError(f"generator does not exponentiate to the rotation ({mismatch:.3e})")
    k = gamma_bilinear(g / 4, n_modes).matrix
    herm = 1j * k
    herm = (herm + herm.conj().T) / 2
    evals, vecs = np.linalg.eigh(herm)
    u = (vecs * np.exp(-1j * evals)) @ vecs.conj().T
    return GaussianUnitary(matrix=u, orthogonal=o, generator=g, n_modes=n_modes)


def conjugation_residual(u: GaussianUnitary) -> float:
    """Worst-case deviation of ``U^dag gamma_p U`` from the rotated
    mode ``sum_k O_pk gamma_k`` over all modes."""
    n = u.n_modes
    dense = [majorana_op(p, n).matrix for p in range(n)]
    worst = 0.0
    udag = u.matrix.conj().T
    for p in range(n):
        lhs = udag @ dense[p] @ u.matrix
        rhs = np.zeros_like(lhs)
        for k in np.nonzero(np.abs(u.orthogonal[p]) > 1e-15)[0]:
            rhs += u.orthogonal[p, k] * dense[k]
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
