"""Command-line front end.

Every subcommand prints one JSON document on stdout.  Exit status is 0 on
success, 1 when the input violates a mathematical precondition and 2 for
malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TextIO

import numpy as np

from . import catalog, io
from .errors import (
    BadParameter,
    InputError,
    JacobiViolation,
    MathematicalViolation,
    NilprojError,
    NotNilpotent,
)
from .grassmann import Flag, JumpSet, beta_basis, jump_indices, jump_indices_dual
from .lie_core import (
    LieAlgebra,
    bch_multiply,
    bch_term,
    center,
    derived_algebra,
    is_jordan_holder_basis,
    is_subalgebra,
)
from .linalg import Subspace, oblique_projection_direct
from .nlproj import beta_continuity_probe, bipartite_factorize, nonlinear_factorization, smoothness_probe
from .probes import uniform_grid
from .scalars import DEFAULT_TOL, EXACT, FLOAT, parse_vector_text


@dataclass
class RunConfig:
    backend: str = EXACT
    tol: float = DEFAULT_TOL
    out: TextIO = sys.stdout

    def __post_init__(self):
        if not self.tol > 0:
            raise BadParameter("--tol must be positive")


def parse_point(text: str, dim: int, backend: str) -> np.ndarray:
    """``"1,-1/2,0"`` or ``@path`` (file holding the same syntax or a JSON list)."""
    if text.startswith("@"):
        try:
            raw = Path(text[1:]).read_text().strip()
        except OSError as exc:
            raise BadParameter(f"cannot read {text[1:]}: {exc}") from exc
        if raw.startswith("["):
            try:
                items = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise BadParameter(f"{text[1:]}: invalid JSON") from exc
            raw = ",".join(str(v) for v in items)
        text = raw
    if backend == FLOAT:
        try:
            vals = [float(Fraction(p.strip())) if "/" in p else float(p) for p in text.split(",")]
        except ValueError as exc:
            raise BadParameter(f"malformed vector {text!r}") from exc
        v = np.array(vals, dtype=float)
    else:
        v = np.array(parse_vector_text(text), dtype=object)
    if v.shape != (dim,):
        raise BadParameter(f"point has {v.size} coordinates, algebra has dimension {dim}")
    return v


def _vec(v) -> list:
    return io.vector_to_json(v)


def _flag(args, alg: LieAlgebra, cfg: RunConfig) -> Flag:
    if getattr(args, "flag", None):
        flag = io.flag_from_json(args.flag, cfg.backend)
        if flag.dim != alg.dim:
            raise BadParameter("flag dimension does not match the algebra")
        return flag
    return Flag.standard(alg.dim, cfg.backend)


def _subspace(path, alg: LieAlgebra, cfg: RunConfig) -> Subspace:
    w = io.subspace_from_json(path, cfg.backend)
    if w.ambient_dim != alg.dim:
        raise BadParameter(f"subspace lives in R^{w.ambient_dim}, algebra has dimension {alg.dim}")
    return w


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args, cfg: RunConfig) -> dict:
    try:
        alg = io.algebra_from_json(args.algebra)
    except JacobiViolation as exc:
        raise _Violation({"valid": False, "error": "JacobiViolation", "witness": list(exc.triple),
                          "message": str(exc)}) from exc
    except NotNilpotent as exc:
        raise _Violation({"valid": False, "error": "NotNilpotent", "witness": exc.witness,
                          "message": str(exc)}) from exc
    return {
        "valid": True,
        "dim": alg.dim,
        "nilpotency_class": alg.nilpotency_class,
        "center_dim": center(alg).dim,
        "derived_dim": derived_algebra(alg).dim,
        "jordan_holder_flag": is_jordan_holder_basis(alg, Flag.standard(alg.dim).basis),
    }


def cmd_bch(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    x = parse_point(args.x, alg.dim, cfg.backend)
    y = parse_point(args.y, alg.dim, cfg.backend)
    terms = [_vec(bch_term(alg, n, x, y)) for n in range(1, max(1, alg.dim - 1) + 1)]
    return {"product": _vec(bch_multiply(alg, x, y)), "terms": terms}


def cmd_jump(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    w = _subspace(args.subspace, alg, cfg)
    flag = _flag(args, alg, cfg)
    e = jump_indices(flag, w)
    return {
        "jump": e.as_list(),
        "schubert_symbol": e.complement().as_list(),
        "codim": w.codim,
        "dual_characterization_agrees": jump_indices_dual(flag, w) == e,
        "is_subalgebra": is_subalgebra(alg, w, cfg.tol),
    }


def cmd_beta(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    w = _subspace(args.subspace, alg, cfg)
    flag = _flag(args, alg, cfg)
    if args.e is not None:
        items = [s for s in args.e.split(",") if s.strip()]
        try:
            e = JumpSet.of(alg.dim, [int(s) for s in items])
        except ValueError as exc:
            raise BadParameter(f"malformed jump set {args.e!r}") from exc
    else:
        e = jump_indices(flag, w)
    beta = beta_basis(flag, e, w, allow_extended=args.allow_extended)
    return {
        "e": e.as_list(),
        "vectors": [_vec(beta.vectors[:, k]) for k in range(alg.dim)],
        "jordan_holder": is_jordan_holder_basis(alg, beta.vectors, cfg.tol),
    }


def cmd_project(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    h = _subspace(args.subalgebra, alg, cfg)
    flag = _flag(args, alg, cfg)
    x = parse_point(args.point, alg.dim, cfg.backend)
    if args.mode == "linear":
        e = jump_indices(flag, h)
        proj = oblique_projection_direct(flag.span_of(e), h)
        p = proj @ x
        return {"mode": "linear", "jump": e.as_list(), "projection": _vec(p),
                "h_part": _vec(x - p), "membership": h.contains(x - p, cfg.tol)}
    res = nonlinear_factorization(alg, h, x, flag, cfg.tol)
    return {"mode": "nonlinear", "jump": res.e.as_list(), "projection": _vec(res.pi),
            "h_part": _vec(res.h_part), "residual": _vec(res.residual), "membership": True}


def cmd_factorize(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    h = _subspace(args.subalgebra, alg, cfg)
    flag = _flag(args, alg, cfg)
    x = parse_point(args.point, alg.dim, cfg.backend)
    e = jump_indices(flag, h)
    beta = beta_basis(flag, e, h)
    fact = bipartite_factorize(alg, beta, e, x)
    product = bch_multiply(alg, fact.e_part, fact.h_part)
    return {"jump": e.as_list(), "t": _vec(fact.t), "e_part": _vec(fact.e_part),
            "h_part": _vec(fact.h_part), "product": _vec(product)}


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise BadParameter("--grid expects start:stop:points")
    try:
        return uniform_grid(float(parts[0]), float(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise BadParameter(f"malformed grid {text!r}") from exc


def cmd_probe(args, cfg: RunConfig) -> dict:
    alg = io.algebra_from_json(args.algebra)
    flag = _flag(args, alg, RunConfig(EXACT, cfg.tol))
    if not args.beta and args.point is None:
        raise BadParameter("--point is required unless --beta is given")
    entry = catalog.CatalogEntry(alg.name or "algebra", alg, flag, center(alg), derived_algebra(alg))
    if args.family == "hz":
        family = catalog.HzFamily(entry)
    else:
        h = _subspace(args.family[1:], alg, RunConfig(EXACT, cfg.tol)) if args.family.startswith(
            "@") else None
        if h is None:
            raise BadParameter("--family must be 'hz' or @subalgebra.json (constant family)")
        family = catalog.constant_family(h)
    grid = _parse_grid(args.grid)
    if args.beta:
        report = beta_continuity_probe(family, grid, flag, refinements=args.refinements,
                                       min_order=args.min_order)
    else:
        x = parse_point(args.point, alg.dim, FLOAT)
        report = smoothness_probe(alg, family, x, grid, flag, refinements=args.refinements,
                                  min_order=args.min_order, tol=cfg.tol)
    doc = report.as_dict()
    if doc["observed_order"] is not None and math.isinf(doc["observed_order"]):
        doc["observed_order"] = "inf"
    return doc


def cmd_catalog(args, cfg: RunConfig) -> dict:
    entry = catalog.get(args.name, args.dim)
    return io.algebra_to_json(entry.algebra)


class _Violation(MathematicalViolation):
    def __init__(self, doc):
        self.doc = doc
        super().__init__(doc.get("message", "violation"))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilproj", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--float", dest="use_float", action="store_true",
                        help="float backend instead of exact rationals")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float tolerance")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="validate an algebra file")
    s.add_argument("algebra")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bch", parents=[common], help="BCH product x.y")
    s.add_argument("algebra")
    s.add_argument("x")
    s.add_argument("y")
    s.set_defaults(func=cmd_bch)

    s = sub.add_parser("jump", parents=[common], help="jump indices of a subspace")
    s.add_argument("algebra")
    s.add_argument("subspace")
    s.add_argument("--flag")
    s.set_defaults(func=cmd_jump)

    s = sub.add_parser("beta", parents=[common], help="adapted basis of a subspace")
    s.add_argument("algebra")
    s.add_argument("subspace")
    s.add_argument("--flag")
    s.add_argument("--e", help="jump set, e.g. 2,3 (default: computed)")
    s.add_argument("--allow-extended", action="store_true")
    s.set_defaults(func=cmd_beta)

    for name, func, helptext in (("project", cmd_project, "oblique projection of a point"),
                                 ("factorize", cmd_factorize, "BCH factorization x = e_part.h_part")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("algebra")
        s.add_argument("subalgebra")
        s.add_argument("point")
        s.add_argument("--flag")
        if name == "project":
            mode = s.add_mutually_exclusive_group()
            mode.add_argument("--linear", dest="mode", action="store_const", const="linear")
            mode.add_argument("--nonlinear", dest="mode", action="store_const", const="nonlinear")
            s.set_defaults(mode="nonlinear")
        s.set_defaults(func=func)

    s = sub.add_parser("probe", parents=[common], help="smoothness probe along a family")
    s.add_argument("algebra")
    s.add_argument("--family", default="hz", help="'hz' or @subalgebra.json")
    s.add_argument("--point", help="point to project; not needed with --beta")
    s.add_argument("--beta", action="store_true", help="probe the adapted basis instead of the projection")
    s.add_argument("--grid", required=True, help="start:stop:points (use --grid=-a:b:n for a negative start)")
    s.add_argument("--flag")
    s.add_argument("--refinements", type=int, default=2)
    s.add_argument("--min-order", type=float, default=1.7)
    s.set_defaults(func=cmd_probe)

    s = sub.add_parser("catalog", parents=[common], help="export a built-in algebra")
    s.add_argument("name", choices=catalog.CATALOG_NAMES)
    s.add_argument("--dim", type=int)
    s.set_defaults(func=cmd_catalog)
    return p


def main(argv=None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        cfg = RunConfig(FLOAT if args.use_float else EXACT, args.tol, out)
        doc = args.func(args, cfg)
    except _Violation as exc:
        json.dump(exc.doc, out)
        out.write("\n")
        print(f"nilproj: {exc}", file=err)
        return 1
    except MathematicalViolation as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, out)
        out.write("\n")
        print(f"nilproj: {type(exc).__name__}: {exc}", file=err)
        return 1
    except (InputError, NilprojError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, out)
        out.write("\n")
        print(f"nilproj: {type(exc).__name__}: {exc}", file=err)
        return 2
    json.dump(doc, out)
    out.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
