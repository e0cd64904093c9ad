"""Command line interface.

Exit status: 0 on success, 1 when a sweep finds a violation or a probe finds
a counterexample, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import lab, roofs
from .errors import DomainError
from .formats import FormatError, read_channel, read_state
from .serialize import SCHEMA_VERSION, dumps, write_atomic
from .spectra import LogBase
from .tolerances import TOLERANCES

SEED_ENV = "E2ENTROPY_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def _envelope(command: str, options: dict, report: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "options": options,
            "tolerances": dict(TOLERANCES), "report": report}


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    lines += [",".join(f"{v:.12g}" for v in row) for row in rows]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be >= 2 (c_N needs N >= 2)")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rep = lab.verify_theorem(args.dim, args.trials, args.measure, args.seed, args.log_base)
    opts = {"dim": args.dim, "trials": args.trials, "measure": args.measure,
            "seed": args.seed, "log_base": args.log_base}
    _emit(dumps(_envelope("verify", opts, rep.to_dict())), args.out)
    return 0 if rep.violations == 0 else 1


def cmd_figures(args) -> int:
    if args.resolution < 2:
        raise UsageError("--resolution must be >= 2")
    if args.figure == "fig1":
        text = _csv(["x", "entropy", "bound"], lab.fig1_data(args.resolution, args.log_base))
    else:
        text = _csv(["x", "y", "diff"], lab.fig2_data(args.resolution, args.log_base))
    _emit(text, args.out)
    return 0


def cmd_conjecture(args) -> int:
    if args.dim < 2:
        raise UsageError("--dim must be >= 2")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    opts = {"dim": args.dim, "trials": args.trials, "seed": args.seed,
            "log_base": args.log_base}
    if args.probe == "concavity":
        level = args.level or "spectrum"
        rep = lab.probe_concavity(args.dim, args.trials, level, args.seed, args.log_base)
        opts["level"] = level
    else:
        if args.level not in (None, "spectrum"):
            raise UsageError("ek-monotone is a spectrum-level probe; --level must be 'spectrum'")
        rep = lab.probe_ek_monotone(args.dim, args.trials, args.seed, args.log_base)
        opts["level"] = "spectrum"
    _emit(dumps(_envelope(f"conjecture {args.probe}", opts, rep.to_dict())), args.out)
    return 0 if rep.counterexample_count == 0 else 1


def _need(path, flag, what):
    if path is None:
        raise UsageError(f"{what} needs {flag}")
    return path


def cmd_bounds(args) -> int:
    cfg = roofs.RoofConfig(ensemble_size=args.ensemble_size, restarts=args.restarts,
                           seed=args.seed)
    base = args.log_base
    opts = {"restarts": args.restarts, "ensemble_size": args.ensemble_size,
            "seed": args.seed, "n_override": args.n_override, "log_base": base}
    if args.bound == "min-output-entropy":
        phi = read_channel(_need(args.channel, "--channel", args.bound))
        report = roofs.min_output_entropy_bound(phi, cfg, base, args.n_override).to_dict()
    elif args.bound == "ef":
        rho, shape = read_state(_need(args.state, "--state", args.bound))
        if shape is None:
            raise UsageError("ef needs a state file with a 'shape' field")
        ef = roofs.minimize_roof(rho, shape, "ef", cfg, base)
        conc = roofs.minimize_roof(rho, shape, "concurrence", cfg, base)
        n = args.n_override if args.n_override is not None else max(conc.n_used, 2)
        report = {"ef": ef.to_dict(), "concurrence": conc.to_dict(), "n_used": int(n),
                  "ef_bound_from_concurrence":
                      roofs.ef_bound_from_concurrence(conc.bound_value, n, base)}
    else:
        phi = read_channel(_need(args.channel, "--channel", args.bound))
        rho, _ = read_state(_need(args.state, "--state", args.bound))
        report = roofs.holevo_lower_bound(phi, rho, cfg, base, args.n_override).to_dict()
    _emit(dumps(_envelope(f"bounds {args.bound}", opts, report)), args.out)
    return 0


# ---------------------------------------------------------------------------

def _log_base(text):
    try:
        return LogBase.coerce(text).value
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="e2entropy",
        description="Entropy bounds from the second elementary symmetric polynomial.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--log-base", type=_log_base, default="e", help="e, 2 or 10")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        if seed:
            p.add_argument("--seed", type=int, default=_default_seed(),
                           help=f"master seed (default: ${SEED_ENV} or 0)")

    p = sub.add_parser("verify", help="random sweep of the entropy inequality")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--measure", choices=["simplex", "matrix"], default="simplex")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", help="figure data as CSV")
    p.add_argument("figure", choices=["fig1", "fig2"])
    p.add_argument("--resolution", type=int, default=100)
    common(p, seed=False)
    p.set_defaults(func=cmd_figures)

    p = sub.add_parser("conjecture", help="concavity and e_k-monotonicity probes")
    p.add_argument("probe", choices=["concavity", "ek-monotone"])
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--level", choices=["spectrum", "matrix"], default=None)
    common(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("bounds", help="channel and entanglement bounds")
    p.add_argument("bound", choices=["min-output-entropy", "ef", "holevo"])
    p.add_argument("--channel", help="channel JSON file")
    p.add_argument("--state", help="state JSON file")
    p.add_argument("--restarts", type=int, default=4)
    p.add_argument("--ensemble-size", type=int, default=None)
    p.add_argument("--n-override", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, DomainError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
