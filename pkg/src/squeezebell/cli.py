"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 oracle/property failure,
3 optimizer non-convergence in ``maximize``.
"""
import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path

from ._accel import backend
from .bell import OptimizerConfig, bell_function, max_bell
from .phase_space import coeffs_at, wigner_value
from .quadrature import QuadratureSpec
from .sweeps import SCOPES, RGrid, SweepSpec, find_tau_c, plot_script, rows_to_csv, run_oracles, run_sweep

EXIT_OK, EXIT_INPUT, EXIT_ORACLE, EXIT_NOCONV = 0, 1, 2, 3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _floats(text):
    try:
        return tuple(float(x) for x in str(text).split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _complex(text):
    """``re,im`` or a Python complex literal such as ``0.3-0.1j``."""
    try:
        if "," in text:
            re_, im = text.split(",")
            return complex(float(re_), float(im))
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad phase-space point {text!r}") from exc


def read_config(path) -> dict:
    """``key = value`` per line, ``#`` comments, lists comma-separated."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _optimizer(args, conf=None) -> OptimizerConfig:
    conf = conf or {}
    pick = lambda name, cast, default: cast(getattr(args, name, None) if getattr(args, name, None) is not None else conf.get(name, default))  # noqa: E731
    return OptimizerConfig(
        restarts=pick("restarts", int, 16),
        rng_seed=pick("seed", int, 0),
        search_radius=pick("search_radius", float, 3.0),
        step_tolerance=float(conf.get("step_tolerance", 1e-10)),
        value_tolerance=float(conf.get("value_tolerance", 1e-10)),
        max_iterations=int(conf.get("max_iterations", 10_000)),
    )


def _clean(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _emit(obj):
    print(json.dumps(_clean(obj), indent=2, default=str))


def cmd_eval(args):
    c = coeffs_at(args.s, args.nbar, args.r)
    _emit({
        "s": args.s, "nbar": args.nbar, "r": args.r,
        "alpha": [args.alpha.real, args.alpha.imag], "beta": [args.beta.real, args.beta.imag],
        "wigner": wigner_value(c, args.alpha, args.beta),
        "bell": bell_function(c, args.alpha, args.beta),
        "coeffs": asdict(c),
    })
    return EXIT_OK


def cmd_maximize(args):
    cfg = _optimizer(args)
    res = max_bell(coeffs_at(args.s, args.nbar, args.r), cfg)
    _emit({"s": args.s, "nbar": args.nbar, "r": args.r, "backend": backend(), **asdict(res)})
    return EXIT_OK if res.converged else EXIT_NOCONV


def cmd_sweep(args):
    conf = read_config(args.config) if args.config else {}
    s_values = args.s if args.s is not None else _floats(conf.get("s", ""))
    nbar_values = args.nbar if args.nbar is not None else _floats(conf.get("nbar", "0"))
    grid_text = args.r_grid or conf.get("r_grid", "0:1:101")
    out = args.out or conf.get("out")
    plot = args.plot_script or conf.get("plot_script")
    gamma_tau = args.gamma_tau or conf.get("gamma_tau", "false").lower() in {"1", "true", "yes"}
    if not s_values:
        raise InputError("no s values given (use --s or 's = ...' in the config)")

    spec = SweepSpec(
        s_values=s_values,
        nbar_values=nbar_values,
        r_grid=RGrid.parse(grid_text),
        optimizer=_optimizer(args, conf),
        emit_plot_script=bool(plot),
    )
    rows = run_sweep(spec, workers=args.workers)
    text = rows_to_csv(rows, gamma_tau=gamma_tau)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    if plot:
        Path(plot).write_text(plot_script(out or "sweep.csv"))
    bad = sum(not r.converged for r in rows)
    if bad:
        print(f"warning: {bad} of {len(rows)} points did not converge", file=sys.stderr)
    return EXIT_OK


def cmd_tau_c(args):
    res = find_tau_c(args.s, args.nbar, tol=args.tol, cfg=_optimizer(args))
    _emit({**asdict(res), "gamma_tau": res.gamma_tau})
    return EXIT_OK if res.crossed else EXIT_ORACLE


def cmd_oracle(args):
    rep = run_oracles(
        args.scope,
        s_values=args.s,
        r_values=args.r,
        cutoff=args.cutoff,
        quad=QuadratureSpec(args.quad_nodes),
    )
    _emit({"passed": rep.passed, "checks": [asdict(c) for c in rep.checks]})
    for c in rep.failures():
        print(f"FAIL {c.name} worst={c.worst:.3e} tol={c.tolerance:g} {c.params}", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_ORACLE


def build_parser():
    p = _Parser(prog="squeezebell", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def state_flags(sp):
        sp.add_argument("--s", type=float, required=True, help="squeezing magnitude")
        sp.add_argument("--nbar", type=float, default=0.0, help="mean thermal photons per bath")
        sp.add_argument("--r", type=float, default=0.0, help="decayed fraction sqrt(1-exp(-gamma tau))")

    def opt_flags(sp):
        sp.add_argument("--restarts", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--search-radius", dest="search_radius", type=float)

    sp = sub.add_parser("eval", help="B and W at one setting")
    state_flags(sp)
    sp.add_argument("--alpha", type=_complex, default=0j)
    sp.add_argument("--beta", type=_complex, default=0j)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("maximize", help="|B|_max at one (s, nbar, r)")
    state_flags(sp)
    opt_flags(sp)
    sp.set_defaults(func=cmd_maximize)

    sp = sub.add_parser("sweep", help="|B|_max over an (s, nbar, r) lattice, as CSV")
    sp.add_argument("--config", help="key = value file; flags override it")
    sp.add_argument("--s", type=_floats)
    sp.add_argument("--nbar", type=_floats)
    sp.add_argument("--r-grid", dest="r_grid", help="start:stop:count")
    sp.add_argument("--out")
    sp.add_argument("--plot-script", dest="plot_script", help="write a matplotlib script for the CSV here")
    sp.add_argument("--gamma-tau", dest="gamma_tau", action="store_true", help="append a gamma*tau column")
    sp.add_argument("--workers", type=int, default=1)
    opt_flags(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("tau-c", help="first r where |B|_max falls to 2")
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--nbar", type=float, default=0.0)
    sp.add_argument("--tol", type=float, default=1e-6)
    opt_flags(sp)
    sp.set_defaults(func=cmd_tau_c)

    sp = sub.add_parser("oracle", help="run the independent numerical checks")
    sp.add_argument("--scope", choices=SCOPES, default="all")
    sp.add_argument("--s", type=_floats, help="restrict squeezing values")
    sp.add_argument("--r", type=_floats, help="restrict r values (convolution)")
    sp.add_argument("--cutoff", type=int, help="Fock cutoff (default: tail-bound selection)")
    sp.add_argument("--quad-nodes", dest="quad_nodes", type=int, default=32)
    sp.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, NotImplementedError) as exc:
        print(f"squeezebell: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
