"""Command line front end.

Subcommands map onto the experiment registry:

* ledger          exact exponent bookkeeping; nonzero exit on any mismatch
* geometry-audit  normals, angle distortion, Gram identities
* caps            cap lattice, rings, coloring, four-of-six selection
* tubes           volumes, overlaps, multiplicity
* shell           anisotropic box, polynomial bands
* phase           sextuple classifications
* probe           sampled-field L6 ratios (lam <= 64)
* ladder NAME     one experiment across a frequency ladder, rate fit

Flags can also be supplied through --config pointing at a flat JSON object
with keys lambda / seed / samples / format / out; explicit flags win.  Exit
status is 0 when no verdict failed, 1 on failures, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import lab, ledger
from .tubes import ConfigError

GROUPS: dict[str, tuple[str, ...]] = {
    "geometry-audit": ("geometry-residual", "bilipschitz", "gram-identity",
                       "broad3-identity", "mixed-minor"),
    "caps": ("cap-lattice", "annulus-partition", "greedy-coloring",
             "select-four"),
    "tubes": ("tube-volume", "nested-ball", "boundary-layer", "pair-overlap",
              "multiplicity", "l2-sum"),
    "shell": ("anisotropic-roundtrip", "hyperplane-shell", "shell-ensemble"),
    "phase": ("phase-coverage", "paired-identities"),
    "probe": ("probe-single-cap", "probe-curve"),
}

CONFIG_KEYS = ("lambda", "seed", "samples", "format", "out")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lambda", dest="lam", default=None,
                   help="comma-separated frequency scales, e.g. 64,256")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out", default=None, help="write the output to a file")
    p.add_argument("--format", dest="fmt", default=None,
                   choices=["text", "json", "csv"])
    p.add_argument("--config", default=None,
                   help="JSON file of flat flag defaults; flags win")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decolab",
        description="desk-scale numerical audit of a six-wave decoupling "
                    "balance on the paraboloid",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("ledger", help="exact exponent bookkeeping")
    _add_common(p)
    for name in GROUPS:
        p = sub.add_parser(name, help=f"run the {name} experiment group")
        _add_common(p)
    p = sub.add_parser("ladder", help="rate fit across a frequency ladder")
    p.add_argument("experiment", help="registered experiment name")
    _add_common(p)
    return parser


def _load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config must be a flat JSON object")
    for key in cfg:
        if key not in CONFIG_KEYS:
            raise ValueError(f"unknown config key {key!r}")
    return cfg


def _parse_lams(raw) -> list[float] | None:
    if raw is None:
        return None
    if isinstance(raw, (int, float)):
        return [float(raw)]
    if isinstance(raw, list):
        return [float(v) for v in raw]
    vals = [v for v in str(raw).split(",") if v.strip()]
    if not vals:
        return None
    return [float(v) for v in vals]


def _pick(flag_value, cfg: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in cfg:
        return cfg[key]
    return default


def _render(reports: list[lab.ExperimentReport], fmt: str) -> str:
    if fmt == "json":
        doc = {"reports": [r.to_dict() for r in reports]}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        blocks = []
        for r in reports:
            if r.results.get("rows"):
                lam = "" if r.lam is None else f" lam={r.lam:g}"
                blocks.append(f"# {r.experiment}{lam}\n" + r.csv())
        if not blocks:
            return "# no tabular results in this selection\n"
        return "".join(blocks)
    return "\n".join(r.text() for r in reports)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else {}
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"decolab: bad config: {exc}", file=sys.stderr)
        return 2

    seed = int(_pick(args.seed, cfg, "seed", lab.DEFAULT_SEED))
    samples = _pick(args.samples, cfg, "samples", None)
    samples = None if samples is None else int(samples)
    fmt = str(_pick(args.fmt, cfg, "format", "text"))
    out = _pick(args.out, cfg, "out", None)
    try:
        lams = _parse_lams(_pick(args.lam, cfg, "lambda", None))
    except ValueError as exc:
        print(f"decolab: bad --lambda: {exc}", file=sys.stderr)
        return 2

    if args.command == "ledger":
        text, ok = ledger.render(fmt)
        _emit(text, out)
        return 0 if ok else 1

    try:
        if args.command == "ladder":
            report = lab.run_ladder(args.experiment, lams=lams, seed=seed,
                                    samples=samples)
            reports = [report]
        else:
            reports = []
            for name in GROUPS[args.command]:
                exp = lab.REGISTRY[name]
                if not exp.needs_lam:
                    reports.append(lab.run_experiment(name, None, seed,
                                                      samples))
                    continue
                for lam in (lams or [exp.default_lam]):
                    reports.append(lab.run_experiment(name, lam, seed,
                                                      samples))
    except lab.UnknownExperimentError as exc:
        print(f"decolab: unknown experiment {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"decolab: {exc}", file=sys.stderr)
        return 2

    _emit(_render(reports, fmt), out)
    return 1 if any(r.has_fail for r in reports) else 0


if __name__ == "__main__":
    sys.exit(main())
