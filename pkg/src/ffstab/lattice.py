"""Finite hypercubic lattices, Manhattan distance, and cube families.

Geometry conventions used throughout the package:

* Sites are points of a ``D``-dimensional grid of linear size ``L``.
  A site is represented by its coordinate tuple; sites are enumerated
  in row-major order (last coordinate fastest).
* Each site carries ``modes_per_site`` Majorana modes.  Mode ``a`` of
  site ``j`` has flat index ``a * n_sites + j``, i.e. the sub-index is
  the slow one.  Doubling a system therefore appends a full second
  copy of the mode block after the first, which keeps two-by-two block
  matrices over the copies literal.
* Distances are Manhattan (L1) distances between sites, wrapped per
  axis for periodic boundary conditions.
* A "cube" of size ``r`` is an axis-aligned box of ``r`` sites per
  axis identified by its lowest corner.  Corners range over all
  lattice sites; for open boundaries a cube sticking out of the
  lattice is clipped to the sites that exist, for periodic boundaries
  it wraps.
"""

from dataclasses import dataclass, replace
from functools import lru_cache
import itertools

import numpy as np

BOUNDARIES = ("open", "periodic")

Site = tuple  # coordinate tuple of length ``dims``


@dataclass(frozen=True)
class Lattice:
    """A finite hypercubic lattice with a fixed number of Majorana
    modes per site.

    Parameters
    ----------
    dims : int
        Spatial dimension ``D``.
    size : int
        Linear size ``L``; the lattice has ``L**D`` sites.
    boundary : str
        Either ``"open"`` or ``"periodic"``.
    modes_per_site : int
        Number of Majorana modes on each site.
    """

    dims: int
    size: int
    boundary: str = "open"
    modes_per_site: int = 1

    def __post_init__(self):
        if self.dims < 1:
            raise ValueError(f"dims must be positive, got {self.dims}")
        if self.size < 1:
            raise ValueError(f"size must be positive, got {self.size}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.modes_per_site < 1:
            raise ValueError(f"modes_per_site must be positive, got {self.modes_per_site}")

    # -- counting ----------------------------------------------------------

    @property
    def n_sites(self) -> int:
        return self.size ** self.dims

    @property
    def n_modes(self) -> int:
        return self.modes_per_site * self.n_sites

    @property
    def diameter(self) -> int:
        """Largest Manhattan distance between any two sites."""
        if self.boundary == "periodic":
            return self.dims * (self.size // 2)
        return self.dims * (self.size - 1)

    # -- sites -------------------------------------------------------------

    def sites(self) -> list:
        """All site coordinate tuples in flat-index order."""
        return list(itertools.product(range(self.size), repeat=self.dims))

    def site_index(self, site: Site) -> int:
        """Flat index of a coordinate tuple (row-major)."""
        if len(site) != self.dims:
            raise ValueError(f"expected {self.dims} coordinates, got {site}")
        idx = 0
        for c in site:
            if not 0 <= c < self.size:
                raise ValueError(f"coordinate {site} out of range for L={self.size}")
            idx = idx * self.size + c
        return idx

    def site_coords(self, index: int) -> Site:
        if not 0 <= index < self.n_sites:
            raise ValueError(f"site index {index} out of range")
        coords = []
        for _ in range(self.dims):
            coords.append(index % self.size)
            index //= self.size
        return tuple(reversed(coords))

    # -- modes -------------------------------------------------------------

    def mode_index(self, site: Site, sub: int) -> int:
        """Flat Majorana-mode index of sub-mode ``sub`` on ``site``."""
        if not 0 <= sub < self.modes_per_site:
            raise ValueError(f"sub-mode {sub} out of range")
        return sub * self.n_sites + self.site_index(site)

    def mode_site(self, mode: int) -> int:
        """Flat site index carrying flat mode index ``mode``."""
        if not 0 <= mode < self.n_modes:
            raise ValueError(f"mode {mode} out of range")
        return mode % self.n_sites

    def site_modes(self, site_index: int) -> list:
        """All flat mode indices living on the given flat site index."""
        return [a * self.n_sites + site_index for a in range(self.modes_per_site)]

    # -- misc ---------------------------------------------------------------

    def doubled(self) -> "Lattice":
        """Same sites, twice the modes (copy index becomes the slowest)."""
        return replace(self, modes_per_site=2 * self.modes_per_site)

    def descriptor(self) -> dict:
        return {
            "dims": self.dims,
            "size": self.size,
            "boundary": self.boundary,
            "modes_per_site": self.modes_per_site,
        }

    @staticmethod
    def from_descriptor(d: dict) -> "Lattice":
        return Lattice(
            dims=int(d["dims"]),
            size=int(d["size"]),
            boundary=str(d["boundary"]),
            modes_per_site=int(d["modes_per_site"]),
        )


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube identified by its lowest corner and edge size."""

    corner: tuple
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"cube size must be >= 1, got {self.size}")


def manhattan_dist(a: Site, b: Site, lat: Lattice) -> int:
    """Manhattan distance between two sites, wrapped if periodic."""
    if len(a) != lat.dims or len(b) != lat.dims:
        raise ValueError("site arity does not match lattice dimension")
    total = 0
    for x, y in zip(a, b):
        if not (0 <= x < lat.size and 0 <= y < lat.size):
            raise ValueError(f"site out of range: {a}, {b}")
        d = abs(x - y)
        if lat.boundary == "periodic":
            d = min(d, lat.size - d)
        total += d
    return total


@lru_cache(maxsize=32)
def distance_matrix(lat: Lattice) -> np.ndarray:
    """``n_sites x n_sites`` integer matrix of site Manhattan distances."""
    coords = np.array(lat.sites())  # (n_sites, dims)
    diff = np.abs(coords[:, None, :] - coords[None, :, :])
    if lat.boundary == "periodic":
        diff = np.minimum(diff, lat.size - diff)
    return diff.sum(axis=2)


def cube_sites(cube: Cube, lat: Lattice) -> tuple:
    """Flat indices of the sites in a cube (clipped or wrapped).

    Open boundary: coordinates beyond the edge are dropped.  Periodic:
    they wrap, and a cube of size >= L covers the full axis once.
    """
    axes = []
    for c in cube.corner:
        if not 0 <= c < lat.size:
            raise ValueError(f"cube corner {cube.corner} out of range")
        if lat.boundary == "open":
            axes.append(range(c, min(c + cube.size, lat.size)))
        else:
            span = min(cube.size, lat.size)
            axes.append([(c + i) % lat.size for i in range(span)])
    return tuple(sorted(lat.site_index(s) for s in itertools.product(*axes)))


def cubes_of_size(r: int, lat: Lattice) -> list:
    """The family of all cubes of size ``r``, corners over every site."""
    if r < 1:
        raise ValueError(f"cube size must be >= 1, got {r}")
    return [Cube(corner=s, size=r) for s in lat.sites()]


def site_cube_dist(site: Site, cube: Cube, lat: Lattice) -> int:
    """Manhattan distance from a site to the nearest site of a cube."""
    members = cube_sites(cube, lat)
    return min(manhattan_dist(site, lat.site_coords(m), lat) for m in members)


def ball(cube: Cube, l: int, lat: Lattice) -> tuple:
    """Flat indices of sites within Manhattan distance ``l`` of a cube."""
    if l < 0:
        raise ValueError("ball radius must be >= 0")
    if l == 0:
        return cube_sites(cube, lat)
    dm = distance_matrix(lat)
    members = np.array(cube_sites(cube, lat))
    near = np.where(dm[members].min(axis=0) <= l)[0]
    return tuple(int(i) for i in near)


def dilated_cube(cube: Cube, l: int, lat: Lattice) -> Cube:
    """Smallest cube (of the standard family) containing ``ball(cube, l)``.

    Expanding the corner by ``l`` per axis and the size by ``2l`` always
    encloses the Manhattan ball; sizes are capped at ``L``.
    """
    if l == 0:
        return cube
    new_size = min(cube.size + 2 * l, lat.size)
    if new_size >= lat.size:
        new_size = lat.size
        corner = cube.corner if lat.boundary == "periodic" else tuple(0 for _ in cube.corner)
        return Cube(corner=corner, size=new_size)
    if lat.boundary == "periodic":
        corner = tuple((c - l) % lat.size for c in cube.corner)
    else:
        corner = tuple(max(0, c - l) for c in cube.corner)
    return Cube(corner=corner, size=new_size)


def enclosing_cube(p: Site, q: Site, lat: Lattice) -> Cube:
    """Smallest cube of the standard family containing both sites.

    Among minimal-size candidates the one with the smallest corner (in
    flat-index order) is returned, which keeps callers deterministic.
    """
    if lat.boundary == "open":
        lo = tuple(min(a, b) for a, b in zip(p, q))
        size = max(abs(a - b) for a, b in zip(p, q)) + 1
        return Cube(corner=lo, size=size)
    # periodic: per axis, the shorter arc may wrap
    spans = []
    starts = []
    for a, b in zip(p, q):
        lo, hi = min(a, b), max(a, b)
        direct = hi - lo
        wrapped = lat.size - direct
        if direct <= wrapped:
            spans.append(direct + 1)
            starts.append(lo)
        else:
            spans.append(wrapped + 1)
            starts.append(hi)
    size = max(spans)
    return Cube(corner=tuple(starts), size=min(size, lat.size))


def cube_center(cube: Cube, lat: Lattice) -> int:
    """Flat index of the center site of a cube.

    Odd extents have a unique center.  For even extents the candidate
    with the lowest coordinates (hence lowest flat index) is chosen, so
    the assignment is deterministic.  Open-boundary clipping is taken
    into account by centering on the surviving extent.
    """
    center = []
    for c in cube.corner:
        if lat.boundary == "open":
            extent = min(c + cube.size, lat.size) - c
            center.append(c + (extent - 1) // 2)
        else:
            extent = min(cube.size, lat.size)
            center.append((c + (extent - 1) // 2) % lat.size)
    return lat.site_index(tuple(center))
