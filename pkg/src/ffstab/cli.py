"""Command-line front end.

Exit codes: 0 success, 2 usage error (argparse), 3 gapless model where
a gap is required, 4 Fock dimension overflow, 5 spectral gap too small
for the requested filter width, 1 any other package error.
"""

import argparse
import json
import os
import sys

from .doubling import double, empty_band, flatten_conjugate
from .errors import DimensionOverflow, FfstabError, GaplessError, GapTooSmall
from .filter import BumpFilter, per_site_split, rewrite_decomposition
from .fock import quadratic_to_fock, spectrum
from .lattice import Lattice
from .locality import PerturbationSpec, decompose_empty_band, generate_perturbation
from .quadratic import (
    abs_matrix,
    build_atomic,
    build_kitaev_chain,
    build_pip2d,
    build_random_local,
    fit_decay,
    sign_matrix,
    single_particle_gap,
)
from .serialize import save_model, save_profile, save_spectrum, load_model
from .stability_lab import fit_c1, gap_sweep, plot_sweep

MODEL_CHOICES = ("kitaev", "pip2d", "atomic", "random")
MODEL_DEFAULTS = {
    "kitaev": {"mu": 2.5, "bc": "periodic"},
    "pip2d": {"mu": 5.0, "bc": "periodic"},
    "atomic": {"mu": 1.0, "bc": "open"},
    "random": {"mu": 0.0, "bc": "open"},
}


def _build_from_args(name, length, t, delta, mu, bc, dims, modes_per_site, amplitude, rate, seed):
    defaults = MODEL_DEFAULTS[name]
    if mu is None:
        mu = defaults["mu"]
    if bc is None:
        bc = defaults["bc"]
    if name == "kitaev":
        return build_kitaev_chain(length, t=t, delta_pair=delta, mu_chem=mu, boundary=bc)
    if name == "pip2d":
        return build_pip2d(length, t=t, delta_pair=delta, mu_chem=mu, boundary=bc)
    if name == "atomic":
        return build_atomic(length, dims=dims, mu_chem=mu, boundary=bc)
    lat = Lattice(dims=dims, size=length, boundary=bc, modes_per_site=modes_per_site)
    return build_random_local(lat, amplitude=amplitude, rate=rate, seed=seed)


def cmd_model_build(args) -> int:
    h = _build_from_args(
        args.model,
        args.L,
        args.t,
        args.delta,
        args.mu,
        args.bc,
        args.dims,
        args.modes_per_site,
        args.amplitude,
        args.rate,
        args.seed,
    )
    save_model(h, args.out)
    gap = single_particle_gap(h)
    print(f"gap {gap!r}")
    return 0


def cmd_flatten(args) -> int:
    h = load_model(args.model)
    res = flatten_conjugate(h)
    if args.out:
        save_model(res.flattened, args.out)
    print(json.dumps({"constant": res.constant, "n_modes": 2 * h.n_modes}))
    return 0


def cmd_double(args) -> int:
    hd = double(load_model(args.model))
    save_model(hd, args.out)
    print(f"n_modes {hd.n_modes}")
    return 0


def cmd_gap(args) -> int:
    gap = single_particle_gap(load_model(args.model))
    print(f"gap {gap!r}")
    return 0


def cmd_fock_spectrum(args) -> int:
    h = load_model(args.model)
    evals = spectrum(quadratic_to_fock(h))
    save_spectrum(evals, args.out)
    print(f"wrote {evals.size} eigenvalues to {args.out}")
    return 0


def cmd_decay_fit(args) -> int:
    h = load_model(args.model)
    if args.of == "A":
        b = h.matrix
    elif args.of == "sigma":
        b = sign_matrix(h)
    else:
        b = abs_matrix(h)
    profile = fit_decay(b, h.lattice)
    if args.out:
        save_profile(profile, args.out)
    print(profile.to_json())
    return 0


def _model_from_config(cfg) -> object:
    cfg = dict(cfg)
    name = cfg.pop("name")
    if name not in MODEL_CHOICES:
        raise ValueError(f"unknown model {name!r}")
    return _build_from_args(
        name,
        cfg.pop("L"),
        cfg.pop("t", 1.0),
        cfg.pop("delta", 1.0),
        cfg.pop("mu", None),
        cfg.pop("bc", None),
        cfg.pop("dims", 1),
        cfg.pop("modes_per_site", 1),
        cfg.pop("amplitude", 1.0),
        cfg.pop("rate", 1.0),
        cfg.pop("seed", 0),
    )


def cmd_sweep(args) -> int:
    with open(args.config) as fh:
        cfg = json.load(fh)
    h = _model_from_config(cfg["model"])
    pcfg = cfg.get("perturbation", {})
    spec = PerturbationSpec(
        strength=1.0,
        decay_rate=pcfg.get("decay_rate", 1.0),
        kind=pcfg.get("kind", "quartic"),
        seed=0,
        r_max=pcfg.get("r_max", 3),
        conserving=pcfg.get("conserving", False),
    )
    result = gap_sweep(
        h,
        spec,
        cfg["j_grid"],
        cfg.get("seeds", 10),
        target=cfg.get("target", "doubled"),
        jobs=args.jobs,
        model_id=cfg.get("model_id", cfg["model"]["name"]),
    )
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "sweep.csv")
    result.save_csv(csv_path)
    summary = result.summary()
    c1, j0 = fit_c1(result)
    summary["c1"] = c1
    summary["j0_observed"] = j0
    with open(os.path.join(args.out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    if args.plot:
        plot_sweep(result, os.path.join(args.out, "sweep.svg"), c1=c1)
    print(f"wrote {len(result.rows)} rows to {csv_path}")
    return 0


def cmd_filter_demo(args) -> int:
    h = load_model(args.model)
    lat2 = h.lattice.doubled()
    band, constant = empty_band(h)
    h0_split = per_site_split(decompose_empty_band(band, lat2))
    spec = PerturbationSpec(
        strength=1.0,
        decay_rate=args.rate,
        kind="quartic",
        seed=args.seed,
        r_max=args.r_max,
        conserving=True,
    )
    v = generate_perturbation(spec, lat2)
    report = rewrite_decomposition(h0_split, v, s=args.J, f=BumpFilter(args.halfwidth))
    out = report.summary()
    out["band_constant"] = constant
    print(json.dumps(out, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ffstab",
        description="Numerical laboratory for gapped free-fermion Hamiltonians.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_model = sub.add_parser("model", help="model construction")
    model_sub = p_model.add_subparsers(dest="model_command", required=True)
    p_build = model_sub.add_parser("build", help="build a named model and save it")
    p_build.add_argument("--model", required=True, choices=MODEL_CHOICES)
    p_build.add_argument("--L", required=True, type=int, help="linear lattice size")
    p_build.add_argument("--t", type=float, default=1.0, help="hopping amplitude")
    p_build.add_argument("--delta", type=float, default=1.0, help="pairing amplitude")
    p_build.add_argument("--mu", type=float, default=None, help="chemical potential")
    p_build.add_argument("--bc", choices=("open", "periodic"), default=None)
    p_build.add_argument("--dims", type=int, default=1)
    p_build.add_argument("--modes-per-site", dest="modes_per_site", type=int, default=1)
    p_build.add_argument("--amplitude", type=float, default=1.0, help="random-model envelope amplitude")
    p_build.add_argument("--rate", type=float, default=1.0, help="random-model envelope decay rate")
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_model_build)

    p_flat = sub.add_parser("flatten", help="report the flattening constant, optionally save the flattened matrix")
    p_flat.add_argument("model")
    p_flat.add_argument("--out", default=None)
    p_flat.set_defaults(func=cmd_flatten)

    p_double = sub.add_parser("double", help="save the doubled model")
    p_double.add_argument("model")
    p_double.add_argument("--out", required=True)
    p_double.set_defaults(func=cmd_double)

    p_gap = sub.add_parser("gap", help="print the single-particle gap")
    p_gap.add_argument("model")
    p_gap.set_defaults(func=cmd_gap)

    p_spec = sub.add_parser("fock-spectrum", help="write the many-body spectrum as CSV")
    p_spec.add_argument("model")
    p_spec.add_argument("--out", required=True)
    p_spec.set_defaults(func=cmd_fock_spectrum)

    p_fit = sub.add_parser("decay-fit", help="fit an exponential envelope to a matrix's couplings")
    p_fit.add_argument("model")
    p_fit.add_argument("--of", choices=("A", "sigma", "absA"), default="A")
    p_fit.add_argument("--out", default=None)
    p_fit.set_defaults(func=cmd_decay_fit)

    p_sweep = sub.add_parser("sweep", help="run a perturbation sweep from a JSON config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="output directory")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--plot", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    p_demo = sub.add_parser("filter-demo", help="rewrite a perturbed flattened model with spectral filters")
    p_demo.add_argument("--model", required=True)
    p_demo.add_argument("--J", type=float, default=0.02)
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--halfwidth", type=float, default=0.5)
    p_demo.add_argument("--rate", type=float, default=1.0)
    p_demo.add_argument("--r-max", dest="r_max", type=int, default=2)
    p_demo.set_defaults(func=cmd_filter_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GaplessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DimensionOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except GapTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except FfstabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
