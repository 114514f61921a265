"""Lossless JSON persistence: rationals travel as "num/den" strings.

Floats never appear in any persisted file, so parsing a file and writing it
back is byte-identical and re-verification is exact.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .builder import Constellation, Provenance, constraint_registry
from .gallai import (
    GallaiCertificate,
    HomotheticCopy,
    LiftInfo,
    Template,
)
from .geometry import Circle, HomotheticMap

FORMAT_VERSION = "0.1.0"


def enc_q(value) -> str:
    return str(Fraction(value))


def dec_q(text) -> Fraction:
    return Fraction(text)


def enc_point(p) -> list:
    return [enc_q(c) for c in p]


def dec_point(items) -> tuple:
    return tuple(dec_q(c) for c in items)


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _meta_to_json(meta: dict):
    def conv(v):
        if isinstance(v, Fraction):
            return enc_q(v)
        if isinstance(v, float):
            raise TypeError(f"refusing float {v!r} in metadata; use exact values")
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        if isinstance(v, dict):
            return {k: conv(x) for k, x in v.items()}
        return v

    return conv(meta)


def constellation_to_dict(c: Constellation, seed=None, report=None) -> dict:
    out = {
        "format": "constellation",
        "version": FORMAT_VERSION,
        "seed": seed,
        "circles": [
            {
                "id": i,
                "cx": enc_q(ci.cx),
                "cy": enc_q(ci.cy),
                "r": enc_q(ci.r),
                "provenance": tag.label(),
            }
            for i, (ci, tag) in enumerate(zip(c.circles, c.provenance))
        ],
        "meta": _meta_to_json(c.meta),
    }
    if report is not None:
        out["report"] = report
    return out


def constellation_from_dict(data: dict) -> Constellation:
    if data.get("format") != "constellation":
        raise ValueError("not a constellation file")
    rows = sorted(data["circles"], key=lambda row: row["id"])
    circles = tuple(Circle(dec_q(r["cx"]), dec_q(r["cy"]), dec_q(r["r"])) for r in rows)
    provenance = tuple(Provenance.parse(r["provenance"]) for r in rows)
    return Constellation(circles, provenance, data.get("meta", {}))


def certificate_to_dict(cert: GallaiCertificate, seed=None, report=None) -> dict:
    out = {
        "format": "gallai-certificate",
        "version": FORMAT_VERSION,
        "seed": seed,
        "template": {
            "d": cert.template.d,
            "points": [enc_point(p) for p in cert.template.points],
        },
        "X": [enc_point(p) for p in cert.X],
        "copies": [
            {
                "map": {"pstar": enc_point(c.map.shift), "lambda": enc_q(c.map.scale)},
                "points": [enc_point(p) for p in c.points],
            }
            for c in cert.copies
        ],
        "k": cert.k,
        "g": cert.g,
        "constraints": [c.name for c in cert.constraints],
        "lift": None
        if cert.lift is None
        else {
            "gamma": [enc_q(v) for v in cert.lift.gamma],
            "H": [list(x) for x in cert.lift.H],
            "m": cert.lift.m,
            "n": cert.lift.n,
        },
    }
    if report is not None:
        out["report"] = report
    return out


def certificate_from_dict(data: dict) -> GallaiCertificate:
    if data.get("format") != "gallai-certificate":
        raise ValueError("not a certificate file")
    registry = constraint_registry()
    names = data["constraints"]
    unknown = [n for n in names if n not in registry]
    if unknown:
        raise ValueError(f"unknown constraint names: {unknown}")
    template = Template(tuple(dec_point(p) for p in data["template"]["points"]))
    copies = tuple(
        HomotheticCopy(
            HomotheticMap(
                dec_point(c["map"]["pstar"]), dec_q(c["map"]["lambda"])
            ),
            tuple(dec_point(p) for p in c["points"]),
        )
        for c in data["copies"]
    )
    lift = None
    if data.get("lift"):
        lift = LiftInfo(
            gamma=tuple(dec_q(v) for v in data["lift"]["gamma"]),
            H=tuple(tuple(x) for x in data["lift"]["H"]),
            m=data["lift"]["m"],
            n=data["lift"]["n"],
        )
    return GallaiCertificate(
        template=template,
        X=tuple(dec_point(p) for p in data["X"]),
        copies=copies,
        k=data["k"],
        g=data["g"],
        constraints=tuple(registry[n] for n in names),
        lift=lift,
    )


def graph_to_dict(graph) -> dict:
    return {
        "format": "graph",
        "version": FORMAT_VERSION,
        "vertices": list(range(graph.n)),
        "edges": [list(e) for e in graph.edges],
        "labels": list(graph.labels) if graph.labels else None,
    }


def save(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(payload))


def load(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
