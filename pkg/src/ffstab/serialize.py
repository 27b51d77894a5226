"""File formats for matrices, spectra, decay profiles, decompositions.

Matrices are stored as raw row-major little-endian complex128 bytes
with a JSON sidecar (same path plus ``.json``) holding the lattice
descriptor, so a file is self-describing.  Spectra are plain CSV with
one eigenvalue per row, ascending.  Decompositions get a directory
with a manifest plus one binary per term.
"""

import json
import os

import numpy as np

from .fock import FockOperator, fock_dimension
from .lattice import Cube, Lattice
from .locality import LocalDecomposition
from .quadratic import DecayProfile, MajoranaQuadratic

MATRIX_DTYPE = "<c16"


def _sidecar(path) -> str:
    return str(path) + ".json"


def save_matrix(matrix: np.ndarray, lat: Lattice, path) -> None:
    arr = np.ascontiguousarray(np.asarray(matrix, dtype=np.complex128))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("expected a square matrix")
    with open(path, "wb") as fh:
        fh.write(arr.astype(MATRIX_DTYPE).tobytes(order="C"))
    with open(_sidecar(path), "w") as fh:
        json.dump(lat.descriptor(), fh, indent=2)
        fh.write("\n")


def load_matrix(path):
    with open(_sidecar(path)) as fh:
        lat = Lattice.from_descriptor(json.load(fh))
    n = lat.n_modes
    raw = np.fromfile(path, dtype=MATRIX_DTYPE)
    if raw.size != n * n:
        raise ValueError(
            f"file holds {raw.size} entries, expected {n * n} for the descriptor's lattice"
        )
    return raw.astype(np.complex128).reshape(n, n), lat


def save_model(h: MajoranaQuadratic, path) -> None:
    save_matrix(h.matrix, h.lattice, path)


def load_model(path) -> MajoranaQuadratic:
    matrix, lat = load_matrix(path)
    if matrix.shape[0] != lat.n_modes:
        raise ValueError("matrix size does not match the lattice descriptor")
    return MajoranaQuadratic(matrix=matrix, lattice=lat)


def save_spectrum(evals, path) -> None:
    """One eigenvalue per row, ascending."""
    vals = np.sort(np.asarray(evals, dtype=float))
    with open(path, "w") as fh:
        for v in vals:
            fh.write(f"{float(v)!r}\n")


def load_spectrum(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([float(line) for line in fh if line.strip()])


def save_profile(profile: DecayProfile, path) -> None:
    with open(path, "w") as fh:
        fh.write(profile.to_json() + "\n")


def load_profile(path) -> DecayProfile:
    with open(path) as fh:
        return DecayProfile.from_json(fh.read())


def save_decomposition(dec: LocalDecomposition, dirpath) -> None:
    os.makedirs(dirpath, exist_ok=True)
    entries = []
    cubes = sorted(dec.terms, key=lambda c: (c.size, c.corner))
    for i, cube in enumerate(cubes):
        op = dec.terms[cube]
        name = f"term_{i:04d}.bin"
        arr = np.ascontiguousarray(op.matrix.astype(MATRIX_DTYPE))
        with open(os.path.join(dirpath, name), "wb") as fh:
            fh.write(arr.tobytes(order="C"))
        entries.append(
            {
                "corner": list(cube.corner),
                "size": cube.size,
                "norm": op.norm(),
                "file": name,
            }
        )
    manifest = {"lattice": dec.lattice.descriptor(), "terms": entries}
    with open(os.path.join(dirpath, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def load_decomposition(dirpath) -> LocalDecomposition:
    with open(os.path.join(dirpath, "manifest.json")) as fh:
        manifest = json.load(fh)
    lat = Lattice.from_descriptor(manifest["lattice"])
    dec = LocalDecomposition(lattice=lat)
    expected = fock_dimension(lat.n_modes)
    for entry in manifest["terms"]:
        raw = np.fromfile(os.path.join(dirpath, entry["file"]), dtype=MATRIX_DTYPE)
        if raw.size != expected * expected:
            raise ValueError(f"term file {entry['file']} has unexpected size")
        cube = Cube(corner=tuple(entry["corner"]), size=int(entry["size"]))
        dec.add_term(cube, FockOperator(raw.astype(np.complex128).reshape(expected, expected), lat.n_modes))
    return dec
