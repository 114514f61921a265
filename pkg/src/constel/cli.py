"""Command-line surface.

Exit codes: 0 pass, 1 verification failure, 2 input or usage error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .budget import Budget, DEFAULT_BUDGET
from .builder import (
    base_odd_cycle,
    extract_template,
    find_rotation,
    induction_step_tangency,
    induction_step_theta,
    tangency_constraints,
    theta_template,
    verify_constellation,
)
from .errors import (
    BudgetExceeded,
    ConstelError,
    ProviderFailed,
    VerificationFailed,
)
from .gallai import Template, default_family, verify_certificate
from .geometry import CosAngle
from .providers import PROVIDERS, make_import_provider
from .render import render_constellation
from . import serialize

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class Workspace:
    """Where a command writes, which seed it runs under, which budgets apply."""

    seed: int
    budget: Budget
    out: str | None = None

    def resolve_out(self, default: str) -> Path:
        path = Path(self.out) if self.out else Path(default)
        parent = path.parent
        if str(parent) and not parent.is_dir():
            raise FileNotFoundError(f"output directory {parent} does not exist")
        return path

    @classmethod
    def from_args(cls, args) -> "Workspace":
        budget = (
            DEFAULT_BUDGET
            if args.budget == 1.0
            else DEFAULT_BUDGET.scaled(args.budget)
        )
        return cls(seed=args.seed, budget=budget, out=args.out)


def _common(sub):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--budget", type=float, default=1.0, help="budget scale factor")
    sub.add_argument("--out", help="output file path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="constel",
        description="Build and verify circle families with certified girth "
        "and chromatic-number bounds (exact rational arithmetic).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    b = subs.add_parser("build-base", help="rational odd-cycle base constellation")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--theta", help="cos²θ for an angle-graph base (e.g. 0)")
    _common(b)

    g = subs.add_parser("gallai", help="produce a verified point-set certificate")
    g.add_argument("--mode", choices=["hj-lift", "ap-1d", "sparsify", "import"],
                   required=True)
    g.add_argument("--m", type=int, default=3, help="template size for the default 1-D template")
    g.add_argument("--k", type=int, default=1)
    g.add_argument("--g", type=int, default=2)
    g.add_argument("--base", help="constellation file; template = its (x,y,r) triples")
    g.add_argument("--theta", help="with --base: cos²θ, template = the base's line heights")
    g.add_argument("--template-file", help="JSON file with a points list")
    g.add_argument("--in", dest="infile", help="certificate file (import mode)")
    _common(g)

    s = subs.add_parser("build-step", help="run one induction step")
    s.add_argument("--base", required=True)
    s.add_argument("--cert", help="certificate file to import")
    s.add_argument("--provider", choices=sorted(PROVIDERS), help="build the certificate in-process")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--theta", help="cos²θ; present = angle step, absent = tangency step")
    _common(s)

    v = subs.add_parser("verify", help="re-verify a constellation file")
    v.add_argument("file")
    v.add_argument("--g", type=int)
    v.add_argument("--k", type=int)
    v.add_argument("--theta", help="cos²θ override")
    _common(v)

    r = subs.add_parser("render", help="render a constellation to SVG")
    r.add_argument("file")
    r.add_argument("--highlight", default="", help="comma list: tangencies,matchings")
    r.add_argument("--size", type=int, default=800)
    _common(r)

    return parser


def _angle_from(text):
    if text is None:
        return None
    return CosAngle(Fraction(text))


def _load_template(args):
    if args.base:
        base = serialize.constellation_from_dict(serialize.load(args.base))
        angle = _angle_from(getattr(args, "theta", None))
        if angle is not None:
            rotation = find_rotation(base, angle)
            template, _ = theta_template(base, angle, rotation)
            return template, default_family()
        return extract_template(base), tangency_constraints()
    if args.template_file:
        data = serialize.load(args.template_file)
        pts = tuple(serialize.dec_point(p) for p in data["points"])
        return Template(pts), default_family()
    pts = tuple((Fraction(i),) for i in range(args.m))
    return Template(pts), default_family()


def _cmd_build_base(args, ws: Workspace) -> int:
    if args.n < 3 or args.n % 2 == 0:
        print("error: --n must be an odd integer >= 3", file=sys.stderr)
        return EXIT_INPUT
    angle = _angle_from(args.theta)
    constellation = base_odd_cycle(args.n, angle, ws.budget)
    report = verify_constellation(constellation, args.n, 3, angle, ws.budget)
    payload = serialize.constellation_to_dict(
        constellation, seed=ws.seed, report=report.to_dict()
    )
    out = ws.resolve_out(f"base-{args.n}.json")
    serialize.save(out, payload)
    print(f"wrote {out}: n={constellation.n} girth={report.girth} ok={report.ok}")
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_gallai(args, ws: Workspace) -> int:
    if args.mode == "import":
        if not args.infile:
            print("error: import mode needs --in FILE", file=sys.stderr)
            return EXIT_INPUT
        cert = serialize.certificate_from_dict(serialize.load(args.infile))
    else:
        template, constraints = _load_template(args)
        provider = PROVIDERS[args.mode]
        cert = provider(template, constraints, args.g, args.k, seed=ws.seed,
                        budget=ws.budget)
    report = verify_certificate(cert, budget=ws.budget)
    payload = serialize.certificate_to_dict(cert, seed=ws.seed,
                                            report=report.to_dict())
    out = ws.resolve_out("certificate.json")
    serialize.save(out, payload)
    print(
        f"wrote {out}: |X|={len(cert.X)} copies={len(cert.copies)} "
        f"k={cert.k} ok={report.ok}"
    )
    return EXIT_OK if report.ok else EXIT_VERIFY


def _chromatic_text(report) -> str:
    chrom = report.chromatic
    if chrom.get("exact"):
        return str(chrom["value"])
    return f">={chrom['certified_lower']}"


def _cmd_build_step(args, ws: Workspace) -> int:
    base = serialize.constellation_from_dict(serialize.load(args.base))
    if args.cert:
        cert = serialize.certificate_from_dict(serialize.load(args.cert))
        provider = make_import_provider(cert)
    elif args.provider:
        provider = PROVIDERS[args.provider]
    else:
        print("error: pass --cert FILE or --provider MODE", file=sys.stderr)
        return EXIT_INPUT
    angle = _angle_from(args.theta)
    if angle is None:
        out_const = induction_step_tangency(base, args.g, args.k, provider,
                                            seed=ws.seed, budget=ws.budget)
    else:
        out_const = induction_step_theta(base, angle, args.g, args.k, provider,
                                         seed=ws.seed, budget=ws.budget)
    report = verify_constellation(out_const, args.g, args.k + 1, angle, ws.budget)
    payload = serialize.constellation_to_dict(out_const, seed=ws.seed,
                                              report=report.to_dict())
    out = ws.resolve_out("step.json")
    serialize.save(out, payload)
    print(
        f"wrote {out}: n={out_const.n} girth={report.girth} "
        f"chromatic={_chromatic_text(report)} ok={report.ok}"
    )
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_verify(args, ws: Workspace) -> int:
    data = serialize.load(args.file)
    constellation = serialize.constellation_from_dict(data)
    embedded = data.get("report")
    g = args.g if args.g is not None else (embedded or {}).get("g")
    k = args.k if args.k is not None else (embedded or {}).get("k")
    if g is None or k is None:
        print("error: no embedded report; pass --g and --k", file=sys.stderr)
        return EXIT_INPUT
    if args.theta is not None:
        angle = _angle_from(args.theta)
    elif embedded is not None:
        angle = CosAngle(Fraction(embedded["cos2"]))
    else:
        angle = None
    report = verify_constellation(constellation, g, k, angle, ws.budget)
    match = None
    if embedded is not None and args.g is None and args.k is None and args.theta is None:
        match = report.to_dict() == embedded
    print(
        f"{args.file}: girth={report.girth} chromatic={_chromatic_text(report)} "
        f"ok={report.ok}" + ("" if match is None else f" matches_embedded={match}")
    )
    if not report.ok:
        for label in ("duplicates", "concentric", "internal"):
            pairs = getattr(report, label)
            if pairs:
                print(f"  {label}: {[list(p) for p in pairs]}")
        if report.triple_points:
            point, ids = report.triple_points[0]
            print(f"  triple tangency at ({point[0]},{point[1]}): circles {list(ids)}")
    if args.out:
        serialize.save(ws.resolve_out("report.json"), report.to_dict())
    if match is False:
        return EXIT_VERIFY
    return EXIT_OK if report.ok else EXIT_VERIFY


def _cmd_render(args, ws: Workspace) -> int:
    constellation = serialize.constellation_from_dict(serialize.load(args.file))
    out = ws.resolve_out("constellation.svg")
    highlight = tuple(h for h in args.highlight.split(",") if h)
    render_constellation(constellation, out, size=args.size, highlight=highlight)
    print(f"wrote {out}")
    return EXIT_OK


_COMMANDS = {
    "build-base": _cmd_build_base,
    "gallai": _cmd_gallai,
    "build-step": _cmd_build_step,
    "verify": _cmd_verify,
    "render": _cmd_render,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ws = Workspace.from_args(args)
        return _COMMANDS[args.command](args, ws)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ProviderFailed as exc:
        print(f"provider failed: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, ValueError, KeyError, ConstelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
