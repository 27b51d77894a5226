"""Jordan-Wigner Majorana operators as signed basis permutations.

Every Majorana operator (and every product of them) maps each
computational basis state to a single basis state times a phase from
{+-1, +-i}.  Storing the permutation and the phase vector keeps
construction of quadratic/quartic Hamiltonians and the conjugation
W -> gamma W gamma at O(dim) / O(dim^2) instead of dense matrix
products.

Conventions: ``n_modes`` Majorana modes live on ``n_modes // 2``
qubits.  Qubit ``q`` owns modes ``2q`` (X-type) and ``2q + 1``
(Y-type), with a Z string on all qubits before it.  Qubit 0 is the
most significant bit of the basis index, matching the usual Kronecker
product ordering.
"""

import numpy as np

FOCK_DIM_CAP = 1 << 12  # largest dense Fock dimension we are willing to build


def fock_dim(n_modes: int) -> int:
    if n_modes % 2 != 0:
        raise ValueError(f"need an even number of Majorana modes, got {n_modes}")
    return 1 << (n_modes // 2)


def _bit_counts(dim: int, mask: int) -> np.ndarray:
    """popcount(b & mask) for every basis index b < dim."""
    idx = np.arange(dim)
    counts = np.zeros(dim, dtype=np.int64)
    m = mask
    while m:
        bit = m & (-m)
        counts += (idx & bit) != 0
        m ^= bit
    return counts


def majorana_action(mode: int, n_modes: int):
    """Return ``(perm, amp)`` describing gamma_mode |b> = amp[b] |perm[b]>."""
    dim = fock_dim(n_modes)
    nq = n_modes // 2
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode {mode} out of range for {n_modes} modes")
    q = mode // 2
    flip = 1 << (nq - 1 - q)
    # Z string on qubits 0..q-1 (the high bits)
    zmask = ((1 << q) - 1) << (nq - q) if q else 0
    idx = np.arange(dim)
    perm = idx ^ flip
    amp = np.where(_bit_counts(dim, zmask) % 2, -1.0, 1.0).astype(np.complex128)
    if mode % 2:  # Y-type: |0> -> i|1>, |1> -> -i|0>
        bit = (idx & flip) != 0
        amp *= np.where(bit, -1j, 1j)
    return perm, amp


def compose(action_left, action_right):
    """Action of (left . right) as operators: left(right(|b>))."""
    p1, a1 = action_left
    p2, a2 = action_right
    return p1[p2], a2 * a1[p2]


def identity_action(dim: int):
    return np.arange(dim), np.ones(dim, dtype=np.complex128)


def action_to_dense(action) -> np.ndarray:
    perm, amp = action
    dim = perm.size
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[perm, np.arange(dim)] = amp
    return m


def add_action(h: np.ndarray, action, coeff: complex) -> None:
    """In-place h += coeff * dense(action)."""
    perm, amp = action
    h[perm, np.arange(perm.size)] += coeff * amp


def conjugate_by_majorana(w: np.ndarray, action) -> np.ndarray:
    """gamma W gamma for a single (involutive, Hermitian) Majorana."""
    perm, amp = action
    # (gWg)[i, j] = amp[perm[i]] * W[perm[i], perm[j]] * amp[j]
    return (amp[perm])[:, None] * w[np.ix_(perm, perm)] * amp[None, :]


def parity_signs(n_modes: int) -> np.ndarray:
    """Diagonal of the total fermion parity operator (a full Z string)."""
    dim = fock_dim(n_modes)
    return np.where(_bit_counts(dim, dim - 1) % 2, -1.0, 1.0)
