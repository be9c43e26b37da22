"""Command-line entry point: ``sca <command> ...``.

Exit codes:
  0  success
  2  parse error (bad arguments, unreadable or malformed input)
  3  parameter error (a documented precondition is violated)
  4  numeric error (eigensolver residual, ill-conditioned extension)
  5  disconnected graph reported while ``--strict`` is set

Every successful run writes a JSON manifest (schema ``sca/1``) next to its
primary output, listing the configuration, seed, versions, invariant checks,
warnings and every file written.
"""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

import numpy as np

from . import bandwidth as bw
from .coarsegrain import WORDS_PRESET, coarse_chain, kmeans_diffusion, spectral_fidelity
from .diffusion import (diffusion_distance_direct, diffusion_distance_spectral, embed)
from .eigen import biorthogonality_check, decompose
from .errors import (DisconnectedGraphError, NumericalError, ParameterError, ParseError)
from .geodesic import SpiralConfig, spiral_consistency_experiment, spiral_sensitivity_experiment
from .io import RunRecorder
from .kernelgraph import build_kernel
from .markov import build_markov, invariant_report
from .nodal import nodal_map
from .nystrom import extend_embedding
from .oracle import (THREE_GAUSSIANS, TWO_GAUSSIANS, GaussianMixtureDensity, ReferenceSemigroup,
                     EmpiricalSemigroup, default_dictionary, eigenvector_error_curve,
                     estimate_loss, evolve_density, quadrature_operator,
                     reference_eigenfunctions)
from .pointcloud import (GeneratorSpec, generate, load_generator_spec, read_points_csv,
                         write_points_csv)

EXIT_OK, EXIT_PARSE, EXIT_PARAMETER, EXIT_NUMERIC, EXIT_DISCONNECTED = 0, 2, 3, 4, 5


def _floats(text):
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    return [int(v) for v in _floats(text)]


def _manifest_path(args, primary):
    if args.manifest:
        return Path(args.manifest)
    primary = Path(primary)
    if primary.suffix:
        return primary.with_suffix(".manifest.json")
    return primary / "manifest.json"


def _config(args):
    return {k: v for k, v in vars(args).items() if k != "func"}


def _load_cloud(args):
    return read_points_csv(args.input, labels=args.labels)


def _bandwidth(args, cloud, rec):
    """Resolve the single bandwidth source: explicit value or selection rule."""
    if args.epsilon is not None:
        return args.epsilon
    rule = args.rule
    if rule == "mst":
        eps = bw.mst_rule(cloud).epsilon
    elif rule == "neighborhood":
        eps = bw.neighborhood_rule(cloud, args.grid, args.k)
    else:
        fn = bw.bootstrap_snr if rule == "snr" else bw.bootstrap_snr_nodal
        eps = fn(cloud, args.ell, args.grid, args.B, _threshold(args, cloud), args.seed).selected
    if eps is None:
        raise ParameterError(f"rule {rule!r} selected no bandwidth on the grid")
    rec.warn(f"bandwidth {eps:g} chosen by rule {rule}")
    return eps


def _threshold(args, cloud):
    if args.C is not None:
        return bw.theoretical_threshold(cloud.n, cloud.d, args.C)
    return args.threshold


def _fit(cloud, eps, q, rec):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = build_markov(build_kernel(cloud, eps))
        dec = decompose(model, q)
    for w in caught:
        rec.warn(str(w.message))
    off, diag = biorthogonality_check(dec)
    rec.checks.update(invariant_report(model))
    rec.checks.update({"eigen_residual_max": float(dec.residuals.max()),
                       "biorthogonality_offdiag": off,
                       "normalization_dev": diag,
                       "epsilon": eps})
    return model, dec


def cmd_generate(args):
    spec = load_generator_spec(args.spec) if args.spec else GeneratorSpec(
        args.kind, dict(args.param or []), args.seed)
    cloud = generate(spec, args.n)
    args.seed = spec.seed
    rec = RunRecorder("generate", {**_config(args), "spec": spec.to_dict()},
                      _manifest_path(args, args.out))
    write_points_csv(args.out, cloud)
    rec.outputs.append(str(args.out))
    rec.finish()


def cmd_embed(args):
    cloud = _load_cloud(args)
    rec = RunRecorder("embed", _config(args), _manifest_path(args, args.out))
    eps = _bandwidth(args, cloud, rec)
    if args.q > cloud.n - 1:
        raise ParameterError(f"q={args.q} exceeds n - 1 = {cloud.n - 1}")
    _, dec = _fit(cloud, eps, args.q, rec)
    emb = embed(dec, args.m, args.q)
    rows = emb.coords if cloud.labels is None else np.column_stack([emb.coords, cloud.labels])
    rec.csv(args.out, rows)
    if args.eigen_out:
        rec.csv(args.eigen_out, np.column_stack([dec.eigenvalues, dec.psi.T]))
    rec.finish()


def cmd_extend(args):
    cloud = _load_cloud(args)
    query = read_points_csv(args.query, labels=args.query_labels)
    rec = RunRecorder("extend", _config(args), _manifest_path(args, args.out))
    eps = _bandwidth(args, cloud, rec)
    _, dec = _fit(cloud, eps, args.q, rec)
    rec.csv(args.out, extend_embedding(cloud, dec, args.m, args.q, query))
    rec.finish()


def cmd_distance(args):
    cloud = _load_cloud(args)
    rec = RunRecorder("distance", _config(args), _manifest_path(args, args.out))
    eps = _bandwidth(args, cloud, rec)
    pairs = np.array(args.pairs, dtype=int).reshape(-1, 2)
    if np.any(pairs < 0) or np.any(pairs >= cloud.n):
        raise ParameterError("pair index out of range")
    q = cloud.n - 1 if args.q is None else args.q
    model, dec = _fit(cloud, eps, q, rec)
    rows = []
    for i, j in pairs:
        spec = diffusion_distance_spectral(dec, args.m, i, j)
        direct = diffusion_distance_direct(model, args.m, i, j) if args.direct else float("nan")
        rows.append([i, j, spec, direct])
    rec.csv(args.out, rows)
    rec.finish()


def cmd_select(args):
    cloud = _load_cloud(args)
    rec = RunRecorder("select-bandwidth", _config(args), _manifest_path(args, args.out))
    summary = {"rule": args.rule, "seed": args.seed, "threshold": None, "B": None}
    if args.rule == "mst":
        res = bw.mst_rule(cloud)
        summary.update(epsilon=res.epsilon, longest_edge=res.longest_edge)
    elif args.rule == "neighborhood":
        summary.update(epsilon=bw.neighborhood_rule(cloud, args.grid, args.k),
                       threshold=args.k)
    else:
        fn = bw.bootstrap_snr if args.rule == "snr" else bw.bootstrap_snr_nodal
        curve = fn(cloud, args.ell, args.grid, args.B, _threshold(args, cloud), args.seed)
        summary.update(curve.summary())
        for eps, count, note in curve.flags:
            rec.warn(f"eps={eps:g}: {count} flagged replicates ({note})")
        if args.curve_out:
            rec.csv(args.curve_out, [[e, s, int(any(f[0] == e for f in curve.flags))]
                                     for e, s in zip(curve.epsilons, curve.snr)])
    if summary.get("epsilon") is None:
        rec.warn("no grid bandwidth met the rule")
    rec.json(args.out, summary)
    rec.finish()


def cmd_nodal(args):
    cloud = _load_cloud(args)
    rec = RunRecorder("nodal", _config(args), _manifest_path(args, args.out))
    eps = _bandwidth(args, cloud, rec)
    _, dec = _fit(cloud, eps, args.ell, rec)
    signs = nodal_map(dec, args.ell).signs
    rec.csv(args.out, [list(p) + [int(s)] for p, s in zip(cloud.points, signs)])
    rec.finish()


def cmd_spiral(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tau = args.tau if args.tau is not None else (0.15 if args.mode == "sensitivity" else 0.1)
    config = SpiralConfig(beta=args.beta, tau=tau, n=args.n, ns=tuple(args.ns), reps=args.reps,
                          baseline_reps=args.baseline_reps, m=args.m, seed=args.seed)
    rec = RunRecorder("spiral-experiment", {**_config(args), "resolved": config.to_dict()},
                      _manifest_path(args, out))
    if args.mode == "sensitivity":
        res = spiral_sensitivity_experiment(config)
        rows = [[0, r["seed"], r["geodesic"], r["diffusion"], int(r["connected"])]
                for r in res.baseline]
        rows += [[1, r["seed"], r["geodesic"], r["diffusion"], int(r["connected"])]
                 for r in res.noisy]
    else:
        res = spiral_consistency_experiment(config)
        rows = [[n, r["seed"], r["geodesic"], int(r["connected"])]
                for n, runs in res.realizations.items() for r in runs]
    for w in res.warnings:
        rec.warn(w)
    rec.csv(out / "realizations.csv", rows)
    rec.json(out / "summary.json", res.summary())
    failed = args.strict and bool(res.warnings)
    rec.finish("disconnected" if failed else "ok")
    if failed:
        raise DisconnectedGraphError("; ".join(res.warnings))


def cmd_coarse(args):
    for key, value in (WORDS_PRESET.items() if args.preset == "words" else ()):
        attr = "clusters" if key == "k" else key
        if attr in ("m", "q", "clusters") and getattr(args, attr) is None:
            setattr(args, attr, value)
        if key == "epsilon" and args.epsilon is None and args.rule is None:
            args.epsilon = value
    args.m = 1 if args.m is None else args.m
    args.q = 2 if args.q is None else args.q
    args.clusters = 2 if args.clusters is None else args.clusters
    cloud = _load_cloud(args)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec = RunRecorder("coarse-grain", _config(args), _manifest_path(args, out))
    eps = _bandwidth(args, cloud, rec)
    model, dec = _fit(cloud, eps, args.q, rec)
    quant = kmeans_diffusion(embed(dec, args.m, args.q), args.clusters, args.seed, args.restarts)
    chain = coarse_chain(model, quant, args.m)
    rep = np.zeros(cloud.n, dtype=int)
    rep[quant.representatives] = 1
    rec.csv(out / "quantization.csv",
            [[i, int(c), int(r)] for i, (c, r) in enumerate(zip(quant.assignment, rep))])
    rec.csv(out / "coarse_chain.csv", chain.transition)
    j = min(args.q, args.clusters - 1)
    fidelity = spectral_fidelity(model, chain, j).tolist() if j >= 1 else []
    rec.json(out / "summary.json", {"distortion": quant.distortion, "k": quant.k,
                                    "masses": chain.masses, "spectral_fidelity": fidelity,
                                    "epsilon": eps, "m": args.m, "q": args.q})
    rec.checks["coarse_row_sum_dev"] = float(np.max(np.abs(chain.transition.sum(1) - 1)))
    rec.checks["coarse_mass_dev"] = float(abs(chain.masses.sum() - 1))
    rec.finish()


def _density(args):
    if args.means:
        k = len(args.means)
        return GaussianMixtureDensity(args.means, args.sds or [1.0] * k,
                                      args.weights or [1.0 / k] * k)
    return {"two-gaussians": TWO_GAUSSIANS, "three-gaussians": THREE_GAUSSIANS}[args.density]


def cmd_oracle(args):
    density = _density(args)
    rec = RunRecorder("oracle", _config(args), _manifest_path(args, args.out))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        model = quadrature_operator(density, args.epsilon, args.G)
    for w in caught:
        rec.warn(str(w.message))
    if args.action == "eigenfunctions":
        dec = reference_eigenfunctions(model, args.q)
        rec.checks["eigen_residual_max"] = float(dec.residuals.max())
        rec.csv(args.out, np.column_stack([model.grid, model.weights, dec.psi]))
    elif args.action == "evolve":
        # first row holds the grid (leading nan), then one density row per t
        rows = [[float("nan")] + list(model.grid)]
        rows += [[t] + list(evolve_density(model, t, args.x0)) for t in args.t]
        rec.csv(args.out, rows)
    else:
        dec = reference_eigenfunctions(model, max(args.q, 20))
        ref = ReferenceSemigroup(model, dec)
        dictionary = default_dictionary(model, dec)
        rows = []
        for eps in args.epsilons:
            losses = []
            for seed in args.seeds:
                cloud = generate(density.generator(seed), args.n)
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", RuntimeWarning)
                    emp_dec = decompose(build_markov(build_kernel(cloud, eps)), args.q)
                est = EmpiricalSemigroup(model, cloud, emp_dec, args.q)
                losses.append(estimate_loss(ref, est, args.t[0], dictionary,
                                            dec.stationary).value)
            rows.append([eps, float(np.mean(losses)), float(np.std(losses))])
        rec.csv(args.out, rows)
    rec.finish()


def cmd_convergence(args):
    density = _density(args)
    rec = RunRecorder("convergence-study", _config(args), _manifest_path(args, args.out))
    errors = eigenvector_error_curve(density, args.epsilons, args.n, args.seeds, args.ell,
                                     args.eps_ref, args.G)
    rec.csv(args.out, [[e, float(errors[:, i].mean()), float(errors[:, i].std())]
                       for i, e in enumerate(args.epsilons)])
    rec.finish()


def _add_input(p):
    p.add_argument("--input", required=True, help="training points CSV")
    p.add_argument("--labels", action="store_true", help="last CSV column is a label")


def _add_bandwidth(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--epsilon", type=float, help="explicit bandwidth")
    g.add_argument("--rule", choices=["snr", "snr-nodal", "neighborhood", "mst"])
    _add_rule_params(p)


def _add_rule_params(p):
    p.add_argument("--grid", type=_floats,
                   default=[0.005, 0.0075, 0.01, 0.015, 0.02, 0.03, 0.05, 0.075, 0.1,
                            0.2, 0.3, 0.5, 1.0])
    p.add_argument("--k", type=float, default=100, help="neighborhood target median")
    p.add_argument("--B", type=int, default=50, help="bootstrap replicates")
    p.add_argument("--threshold", type=float, default=5.0, help="SNR threshold K_n")
    p.add_argument("--C", type=float, default=None,
                   help="use K_n = C n^(2/(d+8)) instead of --threshold")
    p.add_argument("--ell", type=int, default=1, help="eigenvector index")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sca", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--manifest", help="manifest path (default: next to output)")
    parser.add_argument("--strict", action="store_true",
                        help="treat disconnected-graph warnings as errors (exit 5)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="sample a synthetic point cloud")
    p.add_argument("--spec", help="JSON generator spec {kind, parameters, seed}")
    p.add_argument("--kind", default="gaussian_mixture")
    p.add_argument("--param", action="append", type=_keyvalue, metavar="KEY=VALUE")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("embed", help="fit and export diffusion coordinates")
    _add_input(p)
    _add_bandwidth(p)
    p.add_argument("--m", type=float, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--eigen-out", help="eigenvalue/eigenvector CSV")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extend", help="Nystrom-extend the embedding to query points")
    _add_input(p)
    _add_bandwidth(p)
    p.add_argument("--query", required=True)
    p.add_argument("--query-labels", action="store_true", help="last query column is a label")
    p.add_argument("--m", type=float, default=1)
    p.add_argument("--q", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("distance", help="diffusion distances for index pairs")
    _add_input(p)
    _add_bandwidth(p)
    p.add_argument("--pairs", type=_ints, required=True, help="i1,j1;i2,j2;...")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--q", type=int, default=None, help="spectral order (default n-1)")
    p.add_argument("--direct", action="store_true", help="also evaluate the direct formula")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("select-bandwidth", help="apply a bandwidth selection rule")
    _add_input(p)
    p.add_argument("--rule", choices=["snr", "snr-nodal", "neighborhood", "mst"],
                   required=True)
    _add_rule_params(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="selection summary JSON")
    p.add_argument("--curve-out", help="SNR curve CSV (epsilon, snr, flag)")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("nodal", help="sign pattern of an eigenvector")
    _add_input(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--rule", choices=["snr", "snr-nodal", "neighborhood", "mst"])
    p.add_argument("--grid", type=_floats, default=[0.02, 0.03, 0.05, 0.1, 0.3, 1.0])
    p.add_argument("--k", type=float, default=100)
    p.add_argument("--B", type=int, default=50)
    p.add_argument("--threshold", type=float, default=5.0)
    p.add_argument("--C", type=float, default=None)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_nodal)

    p = sub.add_parser("spiral-experiment", help="geodesic vs diffusion on a noisy spiral")
    p.add_argument("--mode", choices=["sensitivity", "consistency"], required=True)
    p.add_argument("--beta", type=float, default=0.09)
    p.add_argument("--tau", type=float, default=None, help="default 0.15 / 0.1 by mode")
    p.add_argument("--n", type=int, default=800)
    p.add_argument("--ns", type=_ints, default=[600, 2000, 4000])
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--baseline-reps", type=int, default=100)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_spiral)

    p = sub.add_parser("coarse-grain", help="k-means in diffusion space + coarse chain")
    _add_input(p)
    _add_bandwidth(p, required=False)
    p.add_argument("--preset", choices=["words"], help="document-word example settings")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--clusters", type=int, default=None, help="number of k-means clusters")
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_coarse)

    for name, func, helptext in (
            ("oracle", cmd_oracle, "quadrature reference computations"),
            ("convergence-study", cmd_convergence, "eigenvector error versus bandwidth")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--density", choices=["two-gaussians", "three-gaussians"],
                       default="two-gaussians")
        p.add_argument("--means", type=_floats)
        p.add_argument("--sds", type=_floats)
        p.add_argument("--weights", type=_floats)
        p.add_argument("--G", type=int, default=1024 if name == "oracle" else 4096)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True)
        if name == "oracle":
            p.add_argument("--action", choices=["eigenfunctions", "evolve", "loss"],
                           default="eigenfunctions")
            p.add_argument("--epsilon", type=float, default=1e-3)
            p.add_argument("--q", type=int, default=4)
            p.add_argument("--t", type=_floats, default=[1.0])
            p.add_argument("--x0", type=int, default=0)
            p.add_argument("--epsilons", type=_floats, default=[0.02, 0.05, 0.1, 0.3, 1.0])
            p.add_argument("--n", type=int, default=1000)
            p.add_argument("--seeds", type=_ints, default=[0, 1, 2])
        else:
            p.add_argument("--epsilons", type=_floats,
                           default=[0.02, 0.03, 0.05, 0.1, 0.3, 1.0])
            p.add_argument("--n", type=int, default=1000)
            p.add_argument("--seeds", type=_ints, default=list(range(10)))
            p.add_argument("--ell", type=int, default=1)
            p.add_argument("--eps-ref", type=float, default=1e-3)
        p.set_defaults(func=func)
    return parser


def _keyvalue(text):
    import json
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    key, value = text.split("=", 1)
    try:
        return key, json.loads(value)
    except ValueError:
        return key, value


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    try:
        args.func(args)
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"sca: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ParameterError as exc:
        print(f"sca: parameter error: {exc}", file=sys.stderr)
        return EXIT_PARAMETER
    except NumericalError as exc:
        print(f"sca: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DisconnectedGraphError as exc:
        print(f"sca: disconnected graph: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
