"""Cube-indexed operator decompositions and shell localization.

A perturbation is stored as a sum of Hermitian even-parity terms, one
per cube, with norms decaying exponentially in the cube size.  The
projection map

    project_out:  W  ->  prod over removed Majoranas of (W + g W g)/2

kills every even monomial touching the removed modes, so rotating a
local term by a Gaussian unitary and re-projecting onto growing
neighborhoods splits it into shells:

    shell l term = localize(U^dag W U, ball(C, l)) - localize(..., l-1)

The shells sum to the rotated operator exactly (the last neighborhood
is the whole lattice), and their norms are controlled by the decay of
the rotation's orthogonal matrix.
"""

from dataclasses import dataclass, field
import itertools

import numpy as np

from ._clifford import add_action, compose, conjugate_by_majorana, majorana_action
from .errors import ParityError
from .fock import FockOperator, GaussianUnitary, dirac_annihilator, fock_dimension, gamma_bilinear
from .lattice import (
    Cube,
    Lattice,
    ball,
    cube_sites,
    cubes_of_size,
    dilated_cube,
    distance_matrix,
    enclosing_cube,
)
from .quadratic import DecayProfile, fit_decay_points

SUPPORT_TOL = 1e-12
PERTURBATION_KINDS = ("quadratic", "quartic", "mixed")
MAX_QUARTIC_MONOMIALS = 60
MAX_CONSERVING_MONOMIALS = 30


@dataclass(frozen=True)
class PerturbationSpec:
    """Recipe for a random cube-local perturbation ensemble.

    ``strength`` and ``decay_rate`` fix the envelope: the largest term
    norm at cube size ``r`` equals ``strength * exp(-decay_rate * r)``
    exactly.  ``kind`` selects quadratic terms, quartic terms, or a
    mix.  With ``conserving`` set, terms are built from on-site Dirac
    pairs (mode ``q`` with mode ``q + n_modes/2``) in normal order, so
    they annihilate the corresponding vacuum and conserve the total
    occupation; this is the ensemble under which the filtered rewrite
    commutes with the perturbed ground projector.
    """

    strength: float
    decay_rate: float
    kind: str = "quartic"
    seed: int = 0
    r_max: int = 3
    conserving: bool = False

    def __post_init__(self):
        if self.strength < 0:
            raise ValueError("strength must be nonnegative")
        if self.decay_rate <= 0:
            raise ValueError("decay_rate must be positive")
        if self.kind not in PERTURBATION_KINDS:
            raise ValueError(f"kind must be one of {PERTURBATION_KINDS}")
        if self.r_max < 1:
            raise ValueError("r_max must be at least 1")


@dataclass
class LocalDecomposition:
    """Map from cubes to Hermitian even-parity Fock operators."""

    lattice: Lattice
    terms: dict = field(default_factory=dict)

    @property
    def n_modes(self) -> int:
        return self.lattice.n_modes

    def __len__(self) -> int:
        return len(self.terms)

    def add_term(self, cube: Cube, op: FockOperator) -> None:
        if cube in self.terms:
            self.terms[cube] = self.terms[cube] + op
        else:
            self.terms[cube] = op

    def total(self) -> FockOperator:
        dim = fock_dimension(self.n_modes)
        out = np.zeros((dim, dim), dtype=np.complex128)
        for cube in sorted(self.terms, key=lambda c: (c.size, c.corner)):
            out += self.terms[cube].matrix
        return FockOperator(out, self.n_modes)

    def term_norms(self) -> dict:
        return {cube: op.norm() for cube, op in self.terms.items()}

    def size_maxima(self):
        """Cube sizes present and the max term norm at each size."""
        by_size = {}
        for cube, op in self.terms.items():
            by_size[cube.size] = max(by_size.get(cube.size, 0.0), op.norm())
        sizes = np.array(sorted(by_size), dtype=float)
        norms = np.array([by_size[int(s)] for s in sizes])
        return sizes, norms

    def scaled(self, factor: float) -> "LocalDecomposition":
        return LocalDecomposition(
            lattice=self.lattice,
            terms={c: op * factor for c, op in self.terms.items()},
        )


def certify_strength(dec: LocalDecomposition) -> DecayProfile:
    """Fit an exponential envelope to the per-size maxima of a
    decomposition's term norms, as a function of cube size."""
    sizes, norms = dec.size_maxima()
    return fit_decay_points(sizes, norms)


def _require_even(op: FockOperator, where: str) -> None:
    p = op.parity()
    if p in ("odd", "mixed"):
        raise ParityError(f"{where} requires an even-parity operator, got {p}")


def _removal_order(site_indices, lat: Lattice):
    """Flat mode indices of the given sites: sites ascending, then
    sub-modes ascending.  The projection result does not depend on the
    order; fixing one makes runs bit-for-bit reproducible."""
    for j in sorted(site_indices):
        for a in range(lat.modes_per_site):
            yield a * lat.n_sites + j


def project_out(w: FockOperator, sites, lat: Lattice) -> FockOperator:
    """Average ``w`` over conjugation by every Majorana on ``sites``.

    The result commutes with each of those Majoranas, has norm at most
    ``norm(w)``, and the map is idempotent.  Odd or mixed parity input
    is rejected: the support guarantee only holds for even operators.
    """
    _require_even(w, "project_out")
    mat = w.matrix
    for mode in _removal_order(sites, lat):
        action = majorana_action(mode, lat.n_modes)
        mat = (mat + conjugate_by_majorana(mat, action)) / 2
    return FockOperator(mat, w.n_modes)


def localize(w: FockOperator, keep_sites, lat: Lattice) -> FockOperator:
    """Project out every site not in ``keep_sites``."""
    keep = set(keep_sites)
    removed = [j for j in range(lat.n_sites) if j not in keep]
    if not removed:
        _require_even(w, "localize")
        return w
    return project_out(w, removed, lat)


def validate_support(dec: LocalDecomposition, tol: float = SUPPORT_TOL) -> float:
    """Worst deviation of any term from being supported on its cube.

    A term supported on its cube is fixed by localizing onto the
    cube's sites; the return value is the max entry of the difference,
    over all terms.
    """
    worst = 0.0
    for cube, op in dec.terms.items():
        fixed = localize(op, cube_sites(cube, dec.lattice), dec.lattice)
        worst = max(worst, float(np.max(np.abs(fixed.matrix - op.matrix))))
        if worst > tol:
            break
    return worst


def localize_telescope(
    w_c: FockOperator,
    c: Cube,
    u: GaussianUnitary,
    lat: Lattice,
    l_max: int = None,
) -> list:
    """Split ``U^dag W_C U`` into shells of growing support.

    Element ``l`` of the returned list is supported within distance
    ``l`` of the cube, and the elements sum to ``U^dag W_C U`` exactly
    once ``l_max`` reaches the lattice diameter (the default).
    """
    _require_even(w_c, "localize_telescope")
    if l_max is None:
        l_max = lat.diameter
    rotated = u.conjugate(w_c)
    shells = []
    prev = None
    for l in range(l_max + 1):
        w_l = localize(rotated, ball(c, l, lat), lat)
        shells.append(w_l if prev is None else w_l - prev)
        prev = w_l
    return shells


def shell_norm_bound(
    w_norm: float,
    c: Cube,
    l: int,
    profile: DecayProfile,
    lat: Lattice,
) -> float:
    """Upper bound on the norm of shell ``l`` of a telescope.

    Projecting out the sites farther than ``l`` from the cube moves
    the rotated operator by at most ``norm(W) * sum over removed modes
    of the length of the rotated mode's overlap with the cube``; the
    overlap column norms are bounded by the certified envelope of the
    rotation matrix.  Shell ``l`` compares two such projections, whose
    removed-site sets are both contained in the complement of
    ``ball(C, l-1)``, giving twice that site sum.  Shell 0 is a plain
    contraction, bounded by ``norm(W)`` itself.
    """
    if l == 0:
        return w_norm
    dm = distance_matrix(lat)
    members = np.array(cube_sites(c, lat))
    dist_to_cube = dm[:, members].min(axis=1)
    outside = np.where(dist_to_cube >= l)[0]
    if outside.size == 0:
        return 0.0
    env = profile.bound(dm[np.ix_(outside, members)].astype(float))
    per_site = np.sqrt((env ** 2).sum(axis=1))
    return float(2.0 * w_norm * lat.modes_per_site * per_site.sum())


def conjugate_decomposition(
    dec: LocalDecomposition,
    u: GaussianUnitary,
    l_max: int = None,
) -> LocalDecomposition:
    """Rotate every term of a decomposition and re-localize the shells.

    Shell ``l`` of the term on cube ``C`` is assigned to the cube
    dilated by ``l`` (the smallest standard cube containing the
    distance-``l`` neighborhood).  The total operator equals
    ``U^dag (total) U``.
    """
    lat = dec.lattice
    out = LocalDecomposition(lattice=lat)
    for cube in sorted(dec.terms, key=lambda c: (c.size, c.corner)):
        shells = localize_telescope(dec.terms[cube], cube, u, lat, l_max=l_max)
        for l, shell in enumerate(shells):
            out.add_term(dilated_cube(cube, l, lat), shell)
    return out


def _cube_mode_indices(cube: Cube, lat: Lattice) -> list:
    modes = []
    for j in cube_sites(cube, lat):
        modes.extend(a * lat.n_sites + j for a in range(lat.modes_per_site))
    return sorted(modes)


def _random_quadratic(rng, modes, n_modes) -> np.ndarray:
    m = len(modes)
    b = rng.standard_normal((m, m))
    b = (b - b.T) / 2
    coeff = np.zeros((n_modes, n_modes), dtype=np.complex128)
    coeff[np.ix_(modes, modes)] = 1j * b
    return gamma_bilinear(coeff, n_modes).matrix


def _random_quartic(rng, modes, n_modes) -> np.ndarray:
    combos = list(itertools.combinations(modes, 4))
    if len(combos) > MAX_QUARTIC_MONOMIALS:
        picks = rng.choice(len(combos), size=MAX_QUARTIC_MONOMIALS, replace=False)
        combos = [combos[i] for i in sorted(picks)]
    dim = fock_dimension(n_modes)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for quad in combos:
        action = majorana_action(quad[0], n_modes)
        for mode in quad[1:]:
            action = compose(action, majorana_action(mode, n_modes))
        add_action(out, action, rng.standard_normal())
    return out


def _dirac_indices(cube: Cube, lat: Lattice) -> list:
    if lat.modes_per_site % 2:
        raise ValueError("occupation-conserving terms need an even number of modes per site")
    half_subs = lat.modes_per_site // 2
    out = []
    for j in cube_sites(cube, lat):
        out.extend(a * lat.n_sites + j for a in range(half_subs))
    return sorted(out)


def _conserving_term(rng, cube, lat, kind, psi_cache) -> np.ndarray:
    n_modes = lat.n_modes
    half = n_modes // 2

    def psi(q):
        if q not in psi_cache:
            psi_cache[q] = dirac_annihilator(q, half + q, n_modes).matrix
        return psi_cache[q]

    dq = _dirac_indices(cube, lat)
    dim = fock_dimension(n_modes)
    out = np.zeros((dim, dim), dtype=np.complex128)
    if kind in ("quadratic", "mixed"):
        m = len(dq)
        h = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        h = (h + h.conj().T) / 2
        for ia, qa in enumerate(dq):
            for ib, qb in enumerate(dq):
                out += h[ia, ib] * (psi(qa).conj().T @ psi(qb))
    if kind in ("quartic", "mixed"):
        pairs = list(itertools.combinations(dq, 2))
        combos = list(itertools.product(range(len(pairs)), repeat=2))
        if len(combos) > MAX_CONSERVING_MONOMIALS:
            picks = rng.choice(len(combos), size=MAX_CONSERVING_MONOMIALS, replace=False)
            combos = [combos[i] for i in sorted(picks)]
        for ip, iq in combos:
            (a, b), (c, d) = pairs[ip], pairs[iq]
            v = complex(rng.standard_normal(), rng.standard_normal())
            mono = psi(a).conj().T @ psi(b).conj().T @ psi(c) @ psi(d)
            out += v * mono + np.conj(v) * mono.conj().T
    return out


def generate_perturbation(spec: PerturbationSpec, lat: Lattice) -> LocalDecomposition:
    """Draw a random decomposition meeting the requested envelope.

    Every cube of each size up to ``r_max`` receives one Hermitian
    even-parity term; the size class is then rescaled so its largest
    norm equals ``strength * exp(-decay_rate * size)``.  Quartic terms
    fall back to quadratic couplings on cubes with fewer than four
    modes.  Zero strength gives an empty decomposition.
    """
    out = LocalDecomposition(lattice=lat)
    if spec.strength == 0.0:
        return out
    rng = np.random.default_rng(spec.seed)
    n_modes = lat.n_modes
    fock_dimension(n_modes)
    psi_cache = {}
    for r in range(1, min(spec.r_max, lat.size) + 1):
        target = spec.strength * np.exp(-spec.decay_rate * r)
        class_terms = []
        for cube in cubes_of_size(r, lat):
            if spec.conserving:
                mat = _conserving_term(rng, cube, lat, spec.kind, psi_cache)
            else:
                modes = _cube_mode_indices(cube, lat)
                kind = spec.kind
                if kind in ("quartic", "mixed") and len(modes) < 4:
                    kind = "quadratic"
                mat = np.zeros((fock_dimension(n_modes),) * 2, dtype=np.complex128)
                if kind in ("quadratic", "mixed"):
                    mat += _random_quadratic(rng, modes, n_modes)
                if kind in ("quartic", "mixed"):
                    mat += _random_quartic(rng, modes, n_modes)
            class_terms.append((cube, FockOperator(mat, n_modes)))
        top = max(op.norm() for _, op in class_terms)
        if top == 0.0:
            continue
        factor = target / top
        for cube, op in class_terms:
            out.add_term(cube, op * factor)
    return out


def decompose_empty_band(t_matrix: np.ndarray, lat: Lattice) -> LocalDecomposition:
    """Split ``sum T_mn psi_m^dag psi_n`` into cube-supported terms.

    Each (m, n) pair contributes its Hermitian combination to the
    smallest cube containing both sites, so the decomposition's total
    reproduces :func:`ffstab.fock.empty_band_to_fock` up to summation
    order.
    """
    t = np.asarray(t_matrix)
    n_modes = lat.n_modes
    half = n_modes // 2
    if t.shape != (half, half):
        raise ValueError("band matrix must cover half the lattice modes")
    fock_dimension(n_modes)
    psi_cache = {}

    def psi(q):
        if q not in psi_cache:
            psi_cache[q] = dirac_annihilator(q, half + q, n_modes).matrix
        return psi_cache[q]

    out = LocalDecomposition(lattice=lat)
    n_sites = lat.n_sites
    for m in range(half):
        for n in range(m, half):
            if abs(t[m, n]) == 0.0 and abs(t[n, m]) == 0.0:
                continue
            term = t[m, n] * (psi(m).conj().T @ psi(n))
            if n != m:
                term = term + t[n, m] * (psi(n).conj().T @ psi(m))
            p = lat.site_coords(m % n_sites)
            q = lat.site_coords(n % n_sites)
            out.add_term(enclosing_cube(p, q, lat), FockOperator(term, n_modes))
    return out
