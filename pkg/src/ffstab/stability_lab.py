"""Empirical gap-stability experiments by exact diagonalization.

A sweep perturbs a free-fermion Hamiltonian (or its doubled or
spectrally flattened image) with random cube-local terms of strength
``J`` and records the many-body gap per ``(J, seed)`` point.  The
fitted slope certifies an observed window in which the gap obeys
``gap >= delta - c1 * J``.  Results serialize to CSV with a fixed
column order so repeated runs are comparable byte for byte.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

import numpy as np

from .doubling import double, empty_band
from .errors import FitError
from .fock import empty_band_to_fock, fock_dimension, quadratic_to_fock, spectrum
from .locality import PerturbationSpec, generate_perturbation
from .quadratic import MajoranaQuadratic, abs_matrix, fit_decay, sign_matrix, single_particle_gap

CSV_HEADER = "model,seed,J,kind,gap,delta,flag"
DEGENERACY_FLAG_TOL = 1e-10
SWEEP_TARGETS = ("single", "doubled", "empty")


@dataclass(frozen=True)
class SweepRow:
    """One diagonalization result at a given strength and seed."""

    model: str
    seed: int
    J: float
    kind: str
    gap: float
    delta: float
    flag: int

    def csv_line(self) -> str:
        return (
            f"{self.model},{self.seed},{self.J!r},{self.kind},"
            f"{self.gap!r},{self.delta!r},{self.flag}"
        )


@dataclass
class SweepResult:
    rows: list
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(row.csv_line() for row in self.rows)
        return "\n".join(lines) + "\n"

    def save_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_csv())

    def min_gap_by_strength(self) -> dict:
        out = {}
        for row in self.rows:
            out[row.J] = min(out.get(row.J, np.inf), row.gap)
        return out

    def summary(self) -> dict:
        """Settings and aggregates, without the run timestamp so the
        written summary is deterministic for identical inputs."""
        out = {k: v for k, v in self.metadata.items() if k != "created"}
        out["n_rows"] = len(self.rows)
        out["n_flagged"] = sum(row.flag for row in self.rows)
        return out


def _as_seed_list(seeds):
    if isinstance(seeds, int):
        return list(range(seeds))
    return [int(s) for s in seeds]


def _sweep_base(h: MajoranaQuadratic, target: str):
    """Base many-body Hamiltonian and the lattice carrying the
    perturbation, for each sweep target."""
    if target == "single":
        return quadratic_to_fock(h).matrix, h.lattice
    if target == "doubled":
        hd = double(h)
        return quadratic_to_fock(hd).matrix, hd.lattice
    if target == "empty":
        lat = h.lattice.doubled()
        band, _ = empty_band(h)
        return empty_band_to_fock(band, lat.n_modes).matrix, lat
    raise ValueError(f"target must be one of {SWEEP_TARGETS}")


def gap_sweep(
    h: MajoranaQuadratic,
    spec: PerturbationSpec,
    j_grid,
    seeds,
    target: str = "doubled",
    jobs: int = 1,
    model_id: str = "model",
) -> SweepResult:
    """Diagonalize ``base + J * V_seed`` over a strength grid.

    The perturbation for each seed is drawn once at unit strength and
    scaled by ``J``, so every grid point for a given seed perturbs with
    the same operator.  Rows are sorted by ``(J, seed)`` and each
    point's arithmetic is independent of ``jobs``, making the CSV
    output identical across worker counts.
    """
    delta = single_particle_gap(h)
    base, lat = _sweep_base(h, target)
    fock_dimension(lat.n_modes)
    j_values = [float(j) for j in j_grid]
    seed_list = _as_seed_list(seeds)

    unit = {}
    for seed in seed_list:
        vspec = replace(spec, strength=1.0, seed=seed)
        unit[seed] = generate_perturbation(vspec, lat).total().matrix

    def point(args):
        j, seed = args
        evals = np.linalg.eigvalsh(base + j * unit[seed])
        gap = float(evals[1] - evals[0])
        return SweepRow(
            model=model_id,
            seed=seed,
            J=j,
            kind=spec.kind,
            gap=gap,
            delta=delta,
            flag=int(gap < DEGENERACY_FLAG_TOL),
        )

    grid = [(j, seed) for j in j_values for seed in seed_list]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(point, grid))
    else:
        rows = [point(p) for p in grid]
    rows.sort(key=lambda r: (r.J, r.seed))

    metadata = {
        "model": model_id,
        "target": target,
        "created": datetime.now(timezone.utc).isoformat(),
        "delta": delta,
        "kind": spec.kind,
        "decay_rate": spec.decay_rate,
        "r_max": spec.r_max,
        "conserving": spec.conserving,
        "lattice": lat.descriptor(),
        "j_grid": j_values,
        "seeds": seed_list,
    }
    return SweepResult(rows=rows, metadata=metadata)


def fit_c1(result: SweepResult):
    """Smallest slope bounding the observed gap loss, and the largest
    strength keeping every seed's gap above half the reference gap.

    Returns ``(c1, j0_observed)`` where ``gap >= delta - c1 * J`` holds
    for every row, and ``j0_observed`` is the largest grid strength at
    which every seed's gap stays above ``delta / 2`` (0.0 when none
    does).  Needs at least three distinct strengths.
    """
    if not result.rows:
        raise FitError("cannot fit an empty sweep")
    j_values = sorted({row.J for row in result.rows})
    if len(j_values) < 3:
        raise FitError(f"need at least 3 distinct strengths, got {len(j_values)}")
    delta = result.rows[0].delta
    c1 = 0.0
    for row in result.rows:
        if row.J > 0:
            c1 = max(c1, (delta - row.gap) / row.J)
    min_gap = result.min_gap_by_strength()
    passing = [j for j in j_values if min_gap[j] > delta / 2]
    j0 = max(passing) if passing else 0.0
    return c1, j0


def sumset_check(h1: MajoranaQuadratic, h2: MajoranaQuadratic) -> float:
    """Residual between the joint spectrum of two independent systems
    and the sorted pairwise sums of their separate spectra."""
    fock_dimension(h1.n_modes + h2.n_modes)
    f1 = quadratic_to_fock(h1)
    f2 = quadratic_to_fock(h2)
    eye1 = np.eye(f1.dim)
    eye2 = np.eye(f2.dim)
    joint = np.kron(f1.matrix, eye2) + np.kron(eye1, f2.matrix)
    joint_spec = np.linalg.eigvalsh((joint + joint.conj().T) / 2)
    summed = np.sort(np.add.outer(spectrum(f1), spectrum(f2)).ravel())
    return float(np.max(np.abs(joint_spec - summed)))


def decay_vs_gap_study(family, params) -> list:
    """Tabulate decay rates of the sign matrix and the flattened band
    matrix against the single-particle gap, across a model family.

    ``family`` maps a parameter to a Hamiltonian; each output row is a
    dict with the parameter, the gap, and the two fitted rates.
    """
    rows = []
    for p in params:
        h = family(p)
        profile_sigma = fit_decay(sign_matrix(h), h.lattice)
        profile_band = fit_decay(4.0 * abs_matrix(h), h.lattice)
        rows.append(
            {
                "param": float(p),
                "delta": single_particle_gap(h),
                "nu_sigma": profile_sigma.rate,
                "nu_band": profile_band.rate,
            }
        )
    return rows


def plot_sweep(result: SweepResult, path, c1: float = None) -> None:
    """Scatter the sweep's gaps against strength and overlay the
    reference gap and, when given, the fitted linear envelope."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [row.J for row in result.rows]
    ys = [row.gap for row in result.rows]
    delta = result.rows[0].delta if result.rows else 0.0
    ax.scatter(xs, ys, s=12, alpha=0.7, label="observed gap")
    ax.axhline(delta, color="gray", lw=0.8, label="unperturbed gap")
    if c1 is not None and xs:
        grid = np.linspace(0, max(xs), 200)
        ax.plot(grid, np.maximum(delta - c1 * grid, 0.0), "r--", lw=1, label="linear envelope")
    ax.set_xlabel("perturbation strength J")
    ax.set_ylabel("many-body gap")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
