"""Build the bundled lattice models and inspect their spectra.

Every model is a purely imaginary antisymmetric coupling matrix A on a
lattice of Majorana modes, with Hamiltonian sum_jk gamma_j A_jk
gamma_k.  The single-particle gap is 4 min|eig A|, and for small
systems we confirm it against the dense many-body spectrum.
"""

import numpy as np

from ffstab import (
    GaplessError,
    Lattice,
    build_atomic,
    build_kitaev_chain,
    build_pip2d,
    build_random_local,
    decay_vs_gap_study,
    many_body_gap,
    quadratic_to_fock,
    single_particle_gap,
)


def main():
    print("== pairing chain ==")
    h = build_kitaev_chain(8, t=1.0, delta_pair=1.0, mu_chem=2.5, boundary="periodic")
    delta = single_particle_gap(h)
    print(f"L=8 periodic, mu=2.5: single-particle gap {delta:.6f}")

    k = 2 * np.pi * np.arange(8) / 8
    bloch = np.sqrt((2 * np.cos(k) + 2.5) ** 2 + 4 * np.sin(k) ** 2)
    print(f"analytic dispersion minimum       {bloch.min():.6f}")

    fock_gap = many_body_gap(quadratic_to_fock(h))
    print(f"dense Fock gap (2^8 x 2^8)        {fock_gap:.6f}")

    print("\n== critical point is rejected ==")
    try:
        single_particle_gap(build_kitaev_chain(8, mu_chem=2.0, boundary="periodic"))
    except GaplessError as exc:
        print(f"mu=2.0: {exc}")

    print("\n== other models ==")
    h2 = build_pip2d(4, mu_chem=5.0, boundary="periodic")
    print(f"2d pairing model, 4x4: gap {single_particle_gap(h2):.6f}")
    h3 = build_atomic(5, mu_chem=1.0)
    print(f"atomic insulator, L=5: gap {single_particle_gap(h3):.6f}")
    lat = Lattice(dims=1, size=10, boundary="periodic", modes_per_site=2)
    h4 = build_random_local(lat, amplitude=1.0, rate=1.0, seed=3)
    try:
        print(f"random local model, L=10: gap {single_particle_gap(h4):.6f}")
    except GaplessError:
        print("random local model, L=10: gapless draw")

    print("\n== decay rate of sign(A) grows with the gap ==")
    rows = decay_vs_gap_study(
        lambda mu: build_kitaev_chain(40, mu_chem=mu, boundary="periodic"),
        [2.2, 2.5, 3.0, 4.0],
    )
    print(f"{'mu':>5} {'gap':>8} {'nu_sigma':>9} {'nu_band':>8}")
    for row in rows:
        print(f"{row['param']:>5.1f} {row['delta']:>8.3f} {row['nu_sigma']:>9.3f} {row['nu_band']:>8.3f}")


if __name__ == "__main__":
    main()
