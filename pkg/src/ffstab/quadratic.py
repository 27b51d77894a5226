"""Quadratic Majorana Hamiltonians and their single-particle analysis.

A quadratic Majorana Hamiltonian is ``H = sum_{jk} gamma_j A_{jk}
gamma_k`` with ``A`` Hermitian and antisymmetric (hence purely
imaginary).  Everything observable at the single-particle level --
spectral gap, matrix sign function, matrix absolute value, spatial
decay of couplings -- lives here and needs only dense linear algebra
on the ``n_modes x n_modes`` coupling matrix.

Decay certification: a matrix ``B`` indexed by modes satisfies a
``(K, nu)`` envelope when the per-site-pair coupling norm is bounded
by ``K * exp(-nu * dist)``.  For one mode per site this is entrywise
``|B_jk|``; with several modes per site the operator norm of the
inter-site submatrix is used, which is what downstream norm bounds
consume.  Fits are least squares in log space over the per-distance
maxima, with the amplitude inflated afterwards so the envelope holds
pointwise at every usable distance.  Data below ``FIT_FLOOR`` is
treated as numerically zero; certificates are therefore statements
"down to the floor".
"""

from dataclasses import dataclass
import json

import numpy as np

from .errors import GaplessError
from .lattice import Lattice, distance_matrix

ZERO_EIG_TOL = 1e-10
MATRIX_TOL = 1e-12
FIT_FLOOR = 1e-14
# Sentinel rate for data with off-diagonal mass entirely below the floor:
# one lattice step of decay at this rate crosses the whole measurable range.
SUPEREXP_RATE = float(np.log(1.0 / FIT_FLOOR))


@dataclass(frozen=True)
class MajoranaQuadratic:
    """Coupling matrix of a quadratic Majorana Hamiltonian on a lattice.

    Parameters
    ----------
    lattice : Lattice
        Geometry; ``lattice.n_modes`` must equal the matrix dimension.
    matrix : ndarray
        Hermitian antisymmetric (purely imaginary) coupling matrix ``A``.
    """

    lattice: Lattice
    matrix: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=np.complex128)
        object.__setattr__(self, "matrix", a)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"coupling matrix must be square, got shape {a.shape}")
        n = a.shape[0]
        if n % 2 != 0:
            raise ValueError(f"mode count must be even, got {n}")
        if n != self.lattice.n_modes:
            raise ValueError(
                f"matrix dimension {n} does not match lattice mode count {self.lattice.n_modes}"
            )
        if np.max(np.abs(a - a.conj().T)) > MATRIX_TOL:
            raise ValueError("coupling matrix is not Hermitian")
        if np.max(np.abs(a + a.T)) > MATRIX_TOL:
            raise ValueError("coupling matrix is not antisymmetric")

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]


@dataclass
class DecayProfile:
    """Certified exponential envelope ``amplitude * exp(-rate * d)``.

    ``residual`` is the rms misfit of the log-space least squares on
    the per-distance maxima (0 when fewer than three points were fit).
    A ``rate >= SUPEREXP_RATE`` marks strictly local data whose
    off-support norms all sat below the fit floor.
    """

    amplitude: float
    rate: float
    residual: float

    @property
    def superexponential(self) -> bool:
        return self.rate >= SUPEREXP_RATE

    def bound(self, d) -> np.ndarray:
        """Envelope value at distance(s) ``d``."""
        d = np.asarray(d, dtype=float)
        out = self.amplitude * np.exp(-self.rate * d)
        return out if out.ndim else float(out)

    def to_json(self) -> str:
        return json.dumps({"K": self.amplitude, "nu": self.rate, "residual": self.residual})

    @staticmethod
    def from_json(s: str) -> "DecayProfile":
        d = json.loads(s)
        return DecayProfile(amplitude=d["K"], rate=d["nu"], residual=d["residual"])


def single_particle_gap(h: MajoranaQuadratic) -> float:
    """Many-body spectral gap ``4 * min |eig(A)|`` of the quadratic
    Hamiltonian.

    Each positive eigenvalue pair of ``A`` contributes an independent
    two-level system of splitting ``4 * lambda``, so the gap between
    the ground state and the first excited state is four times the
    smallest eigenvalue magnitude.

    Raises
    ------
    GaplessError
        If any eigenvalue magnitude is below ``ZERO_EIG_TOL``.
    """
    eigs = np.linalg.eigvalsh(h.matrix)
    smallest = float(np.min(np.abs(eigs)))
    if smallest < ZERO_EIG_TOL:
        raise GaplessError(
            f"smallest eigenvalue magnitude {smallest:.3e} below tolerance {ZERO_EIG_TOL:.0e}"
        )
    return 4.0 * smallest


def sign_matrix(h: MajoranaQuadratic) -> np.ndarray:
    """Matrix sign function of the coupling matrix.

    Computed from the full Hermitian eigendecomposition; the result is
    again Hermitian, antisymmetric and squares to the identity.
    """
    eigs, vecs = np.linalg.eigh(h.matrix)
    if np.min(np.abs(eigs)) < ZERO_EIG_TOL:
        raise GaplessError("sign function undefined: eigenvalue at zero")
    return (vecs * np.sign(eigs)) @ vecs.conj().T


def abs_matrix(h: MajoranaQuadratic) -> np.ndarray:
    """Matrix absolute value ``|A| = sign(A) A`` (real symmetric PSD)."""
    eigs, vecs = np.linalg.eigh(h.matrix)
    if np.min(np.abs(eigs)) < ZERO_EIG_TOL:
        raise GaplessError("absolute value ill-conditioned: eigenvalue at zero")
    return (vecs * np.abs(eigs)) @ vecs.conj().T


def site_pair_norms(b: np.ndarray, lat: Lattice) -> np.ndarray:
    """Matrix of coupling norms between every pair of sites.

    Entry ``(p, q)`` is ``|b_pq|`` for one mode per site, and the
    operator 2-norm of the ``modes_per_site x modes_per_site``
    submatrix linking sites ``p`` and ``q`` otherwise.
    """
    b = np.asarray(b)
    n_sites = lat.n_sites
    m = lat.modes_per_site
    if b.shape != (lat.n_modes, lat.n_modes):
        raise ValueError(f"matrix shape {b.shape} does not match lattice modes {lat.n_modes}")
    if m == 1:
        return np.abs(b)
    # reshape to (sub, site, sub, site) and collect per-site-pair blocks
    blocks = b.reshape(m, n_sites, m, n_sites).transpose(1, 3, 0, 2)
    return np.linalg.norm(blocks, ord=2, axis=(2, 3))


def per_distance_maxima(b: np.ndarray, lat: Lattice):
    """Distances and max coupling norm at each distance, as two arrays."""
    norms = site_pair_norms(b, lat)
    dm = distance_matrix(lat)
    ds = np.unique(dm)
    ms = np.array([norms[dm == d].max() for d in ds])
    return ds.astype(float), ms


def fit_decay_points(ds, ms) -> DecayProfile:
    """Fit an exponential envelope to (distance, max-norm) data.

    Least squares on ``log m = log K - rate * d`` over points above the
    floor; the amplitude is then inflated so the envelope holds with
    equality at the worst usable point.  Degenerate data still yields a
    certified envelope: two usable points get the exact two-point fit
    (rate clamped to be nonnegative), one gets a superexponential
    sentinel rate, and none gets the zero profile.  Nearest-neighbor
    couplings are the everyday two-point case.
    """
    ds = np.asarray(ds, dtype=float)
    ms = np.asarray(ms, dtype=float)
    usable = ms > FIT_FLOOR
    n_use = int(usable.sum())
    if n_use == 0:
        return DecayProfile(amplitude=0.0, rate=SUPEREXP_RATE, residual=0.0)
    if n_use == 1:
        rate = SUPEREXP_RATE
        amp = float(np.max(ms[usable] * np.exp(rate * ds[usable])))
        return DecayProfile(amplitude=amp, rate=rate, residual=0.0)
    x = ds[usable]
    y = np.log(ms[usable])
    if n_use == 2:
        rate = max(0.0, float((y[0] - y[1]) / (x[1] - x[0])))
        residual = 0.0
    else:
        slope, intercept = np.polyfit(x, y, 1)
        rate = -float(slope)
        fitted = intercept + slope * x
        residual = float(np.sqrt(np.mean((y - fitted) ** 2)))
    amp = float(np.max(ms[usable] * np.exp(rate * x)))
    return DecayProfile(amplitude=amp, rate=rate, residual=residual)


def fit_decay(b: np.ndarray, lat: Lattice) -> DecayProfile:
    """Certify an exponential decay envelope for a mode matrix.

    The returned profile satisfies ``site_pair_norm(p, q) <=
    bound(dist(p, q))`` for every site pair whose norm is above
    ``FIT_FLOOR``.
    """
    ds, ms = per_distance_maxima(b, lat)
    return fit_decay_points(ds, ms)


def check_envelope(b: np.ndarray, lat: Lattice, profile: DecayProfile, slack: float = 0.0) -> bool:
    """True when every site-pair norm sits under the envelope.

    Values below the fit floor are always accepted (they are
    indistinguishable from zero at certification precision).
    """
    norms = site_pair_norms(b, lat)
    dm = distance_matrix(lat)
    limit = np.maximum(profile.bound(dm.astype(float)), FIT_FLOOR)
    return bool(np.all(norms <= limit + slack))


def verify_abs_decay_chain(h: MajoranaQuadratic, slack: float = 1e-12) -> dict:
    """Check the composition bound on the decay of ``|A|``.

    With certified envelopes ``M e^{-tau d}`` for ``sign(A)`` and
    ``K e^{-nu d}`` for ``A``, the triangle inequality applied to
    ``|A| = sign(A) A`` gives, for every site pair (j, k),

        norm(|A|_{jk}) <= sum_l M e^{-tau d(j,l)} K e^{-nu d(l,k)}.

    Returns the worst margin (rhs - lhs, most negative first) along
    with the two fitted profiles.  ``slack`` absorbs eigensolver
    rounding in entries that are mathematically far below it.
    """
    lat = h.lattice
    sigma = sign_matrix(h)
    absa = abs_matrix(h)
    p_sigma = fit_decay(sigma, lat)
    p_a = fit_decay(h.matrix, lat)
    dm = distance_matrix(lat).astype(float)
    lhs = site_pair_norms(absa, lat)
    rhs = p_sigma.bound(dm) @ p_a.bound(dm)
    margin = rhs - lhs
    return {
        "ok": bool(np.all(margin >= -slack)),
        "min_margin": float(margin.min()),
        "sigma_profile": p_sigma,
        "a_profile": p_a,
    }


# ---------------------------------------------------------------------------
# Model builders
#
# All builders return a MajoranaQuadratic whose quadratic form
# ``sum gamma A gamma`` reproduces the textbook Hamiltonian with the
# chemical potential written in the particle-hole symmetric form
# ``-mu * (n_j - 1/2)``; with that convention no additive constant is
# dropped.  Site ``j`` carries the Majorana pair
# ``gamma_{j,0} = c_j + c_j^dag`` (flat mode ``j``) and
# ``gamma_{j,1} = i (c_j^dag - c_j)`` (flat mode ``n_sites + j``).


def dirac_to_majorana(hopping: np.ndarray, pairing: np.ndarray, lat: Lattice) -> MajoranaQuadratic:
    """Convert a quadratic Hamiltonian in Dirac form to Majorana form.

    Parameters
    ----------
    hopping : ndarray
        Hermitian matrix ``T`` of ``sum_jk T_jk c_j^dag c_k``.
    pairing : ndarray
        Antisymmetric matrix ``P`` of ``(1/2) sum_jk (P_jk c_j^dag
        c_k^dag + h.c.)``.
    lat : Lattice
        Must carry two Majorana modes per Dirac mode.

    Returns
    -------
    MajoranaQuadratic
        Coupling matrix ``A`` such that ``sum gamma A gamma`` equals
        the input Hamiltonian minus its constant part ``tr(T) / 2``.
    """
    t = np.asarray(hopping, dtype=np.complex128)
    p = np.asarray(pairing, dtype=np.complex128)
    n = t.shape[0]
    if t.shape != (n, n) or p.shape != (n, n):
        raise ValueError("hopping and pairing must be square matrices of equal size")
    if np.max(np.abs(t - t.conj().T)) > MATRIX_TOL:
        raise ValueError("hopping matrix must be Hermitian")
    if np.max(np.abs(p + p.T)) > MATRIX_TOL:
        raise ValueError("pairing matrix must be antisymmetric")
    if lat.n_modes != 2 * n:
        raise ValueError("lattice must carry two Majorana modes per Dirac mode")

    # Coefficient matrix over Majorana modes (mode (j, alpha) at flat
    # index alpha * n + j), from expanding each Dirac bilinear.
    c = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    b0, b1 = slice(0, n), slice(n, 2 * n)
    # T_jk c_j^dag c_k = (T_jk/4)(g_j0 - i g_j1)(g_k0 + i g_k1)
    c[b0, b0] += t / 4
    c[b0, b1] += 1j * t / 4
    c[b1, b0] += -1j * t / 4
    c[b1, b1] += t / 4
    # (P_jk/2) c_j^dag c_k^dag = (P_jk/8)(g_j0 - i g_j1)(g_k0 - i g_k1)
    c[b0, b0] += p / 8
    c[b0, b1] += -1j * p / 8
    c[b1, b0] += -1j * p / 8
    c[b1, b1] += -p / 8
    # (conj(P)_jk/2) c_k c_j: row index k, column index j
    q = p.conj().T
    c[b0, b0] += q / 8
    c[b0, b1] += 1j * q / 8
    c[b1, b0] += 1j * q / 8
    c[b1, b1] += -q / 8
    # gamma_m gamma_n picks out the antisymmetric part; the symmetric
    # part is the dropped constant tr(c) = tr(T)/2.
    a = (c - c.T) / 2
    return MajoranaQuadratic(lattice=lat, matrix=a)


def build_kitaev_chain(
    length: int,
    t: float = 1.0,
    delta_pair: float = 1.0,
    mu_chem: float = 2.5,
    boundary: str = "periodic",
) -> MajoranaQuadratic:
    """p-wave superconducting chain on ``length`` sites.

    The Hamiltonian is ``-t sum_j (c_j^dag c_{j+1} + h.c.) +
    delta_pair sum_j (c_j c_{j+1} + h.c.) - mu_chem sum_j (n_j - 1/2)``.
    With ``t = delta_pair`` the dispersion is
    ``E(k) = sqrt((2 t cos k + mu_chem)^2 + 4 delta_pair^2 sin^2 k)``,
    gapped away from ``|mu_chem| = 2|t|``.
    """
    if length < 2:
        raise ValueError("chain needs at least 2 sites")
    lat = Lattice(dims=1, size=length, boundary=boundary, modes_per_site=2)
    n = length
    hop = np.zeros((n, n), dtype=np.complex128)
    pair = np.zeros((n, n), dtype=np.complex128)
    hop -= mu_chem * np.eye(n)
    bonds = [(j, j + 1) for j in range(n - 1)]
    if boundary == "periodic":
        bonds.append((n - 1, 0))
    for j, k in bonds:
        hop[j, k] -= t
        hop[k, j] -= t
        # delta (c_j c_k + c_k^dag c_j^dag) means P_{kj} = +delta
        pair[k, j] += delta_pair
        pair[j, k] -= delta_pair
    return dirac_to_majorana(hop, pair, lat)


def build_pip2d(
    length: int,
    t: float = 1.0,
    delta_pair: float = 1.0,
    mu_chem: float = 5.0,
    boundary: str = "periodic",
) -> MajoranaQuadratic:
    """Spinless chiral superconductor on an ``length x length`` square
    lattice: pairing amplitude ``delta_pair`` on x bonds and
    ``i delta_pair`` on y bonds, gapped for ``|mu_chem| > 4|t|``."""
    if length < 2:
        raise ValueError("square lattice needs at least 2 sites per side")
    lat = Lattice(dims=2, size=length, boundary=boundary, modes_per_site=2)
    n = lat.n_sites
    hop = np.zeros((n, n), dtype=np.complex128)
    pair = np.zeros((n, n), dtype=np.complex128)
    hop -= mu_chem * np.eye(n)
    for site in lat.sites():
        j = lat.site_index(site)
        for axis, amp in ((0, delta_pair), (1, 1j * delta_pair)):
            nbr = list(site)
            nbr[axis] += 1
            if nbr[axis] >= length:
                if boundary == "open":
                    continue
                nbr[axis] %= length
            k = lat.site_index(tuple(nbr))
            hop[j, k] -= t
            hop[k, j] -= t
            pair[k, j] += amp
            pair[j, k] -= amp
    return dirac_to_majorana(hop, pair, lat)


def build_atomic(
    length: int,
    dims: int = 1,
    mu_chem: float = 1.0,
    boundary: str = "open",
) -> MajoranaQuadratic:
    """Decoupled-site insulator: ``-mu_chem sum_j (n_j - 1/2)`` only.

    The coupling matrix is strictly on-site, which makes it the
    reference case for superexponential decay certificates.
    """
    lat = Lattice(dims=dims, size=length, boundary=boundary, modes_per_site=2)
    n = lat.n_sites
    hop = -mu_chem * np.eye(n, dtype=np.complex128)
    pair = np.zeros((n, n), dtype=np.complex128)
    return dirac_to_majorana(hop, pair, lat)


def build_random_local(lat: Lattice, amplitude: float, rate: float, seed: int) -> MajoranaQuadratic:
    """Random Hermitian antisymmetric couplings under an exponential
    envelope.

    Upper-triangle entries are drawn i.i.d. purely imaginary with
    magnitude uniform in ``[0, amplitude * exp(-rate * dist) / m]``
    (``m`` = modes per site, so the per-site-pair submatrix norm also
    respects the envelope) and a random sign, then antisymmetrized.
    The output always passes :func:`check_envelope` against the
    ``(amplitude, rate)`` envelope.  No gap is guaranteed; callers
    that need one must check.
    """
    if amplitude <= 0 or rate <= 0:
        raise ValueError("amplitude and rate must be positive")
    rng = np.random.default_rng(seed)
    n = lat.n_modes
    dm = distance_matrix(lat).astype(float)
    scale = amplitude / lat.modes_per_site
    b = np.zeros((n, n), dtype=np.complex128)
    for m1 in range(n):
        for m2 in range(m1 + 1, n):
            d = dm[lat.mode_site(m1), lat.mode_site(m2)]
            env = scale * np.exp(-rate * d)
            mag = rng.uniform(0.0, env)
            sign = 1.0 if rng.random() < 0.5 else -1.0
            b[m1, m2] = 1j * sign * mag
            b[m2, m1] = -b[m1, m2]
    return MajoranaQuadratic(lattice=lat, matrix=b)
