"""Command-line front end.

Documents are JSON objects.  Every scalar is an exact rational written as a
string ("3", "-1/8") or a JSON integer; floats are rejected.  Entities:

    constraints  [{"lam": "0", "dir": ["1", "0", "0"]}, ...]
    polytopes    [{"vertices": [["0", "0", "0"], ...]}, ...]
    points       [["1", "0"], ...]
    halfspaces   [["1", "0", "-1"], ...]      each row a means a . x <= 0
    hints        [["0", "1", "1", "0"], ...]  candidate escape directions

Exit status: 0 success, 2 malformed input, 3 violated precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import classify, generators, oracle, pinning, polytopes
from .linespace import Constraint, make_constraint, orthogonalize_family

SCHEMA = "linepin/1"

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3


class InputError(ValueError):
    pass


# ---------------------------------------------------------------- scalars

def rat_to_json(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def rat_from_json(value, where: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError(f"{where}: expected an exact rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(f"{where}: cannot read {value!r} as a rational")


def vec_to_json(v) -> list:
    return [rat_to_json(x) for x in v]


def vec_from_json(value, where: str, length: Optional[int] = None) -> tuple:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list")
    if length is not None and len(value) != length:
        raise InputError(f"{where}: expected {length} entries, got {len(value)}")
    return tuple(rat_from_json(x, f"{where}[{i}]") for i, x in enumerate(value))


# ---------------------------------------------------------------- entities

def constraint_to_json(g: Constraint) -> dict:
    return {"lam": rat_to_json(g.lam), "dir": vec_to_json(g.dir)}


def constraint_from_json(value, where: str) -> Constraint:
    if not isinstance(value, dict) or "lam" not in value or "dir" not in value:
        raise InputError(f"{where}: expected an object with 'lam' and 'dir'")
    lam = rat_from_json(value["lam"], f"{where}.lam")
    d = vec_from_json(value["dir"], f"{where}.dir", 3)
    if d[0] == 0 and d[1] == 0:
        raise InputError(f"{where}.dir: the direction must not be vertical")
    return make_constraint(lam, d)


def polytope_to_json(p: polytopes.ConvexPolytope) -> dict:
    return {"vertices": [vec_to_json(v) for v in p.vertices]}


def polytope_from_json(value, where: str) -> polytopes.ConvexPolytope:
    if not isinstance(value, dict) or not isinstance(value.get("vertices"), list):
        raise InputError(f"{where}: expected an object with a 'vertices' list")
    verts = [vec_from_json(v, f"{where}.vertices[{i}]", 3) for i, v in enumerate(value["vertices"])]
    if not verts:
        raise InputError(f"{where}.vertices: empty")
    return polytopes.ConvexPolytope(verts)


def _rows(doc, key, length=None):
    value = doc.get(key)
    if not isinstance(value, list):
        raise InputError(f"{key}: expected a list")
    rows = [vec_from_json(v, f"{key}[{i}]", length) for i, v in enumerate(value)]
    if rows and length is None:
        n = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != n:
                raise InputError(f"{key}[{i}]: expected {n} entries, got {len(r)}")
    return rows


def load_document(text: str) -> dict:
    """Parse a document into Python objects; raises InputError with a location."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise InputError("document: expected a JSON object")
    schema = raw.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InputError(f"schema: unsupported version {schema!r}")
    doc = {"schema": SCHEMA}
    if "constraints" in raw:
        if not isinstance(raw["constraints"], list):
            raise InputError("constraints: expected a list")
        doc["constraints"] = [constraint_from_json(v, f"constraints[{i}]")
                              for i, v in enumerate(raw["constraints"])]
    if "polytopes" in raw:
        if not isinstance(raw["polytopes"], list):
            raise InputError("polytopes: expected a list")
        doc["polytopes"] = [polytope_from_json(v, f"polytopes[{i}]")
                            for i, v in enumerate(raw["polytopes"])]
    if "points" in raw:
        doc["points"] = _rows(raw, "points")
    if "halfspaces" in raw:
        doc["halfspaces"] = _rows(raw, "halfspaces")
    if "hints" in raw:
        doc["hints"] = _rows(raw, "hints", 4)
    for key, value in raw.items():
        if key not in doc and key not in ("schema",):
            doc[key] = value
    return doc


def dump_document(doc: dict) -> str:
    out = {"schema": SCHEMA}
    for key, value in doc.items():
        if key == "schema":
            continue
        if key == "constraints":
            out[key] = [constraint_to_json(g) for g in value]
        elif key == "polytopes":
            out[key] = [polytope_to_json(p) for p in value]
        elif key in ("points", "halfspaces", "hints"):
            out[key] = [vec_to_json(v) for v in value]
        else:
            out[key] = value
    return json.dumps(out, separators=(",", ":"))


def read_off(text: str) -> polytopes.ConvexPolytope:
    """Vertex list of an OFF file; decimals are converted exactly, faces ignored."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    tokens = [t for ln in lines for t in ln.split()]
    if not tokens:
        raise InputError("off: empty file")
    pos = 1 if tokens[0].upper() == "OFF" else 0
    try:
        nv = int(tokens[pos])
    except (IndexError, ValueError) as exc:
        raise InputError("off: missing vertex count") from exc
    start = pos + 3
    coords = tokens[start:start + 3 * nv]
    if len(coords) != 3 * nv:
        raise InputError(f"off: expected {nv} vertices")
    verts = []
    for i in range(nv):
        verts.append(tuple(rat_from_json(coords[3 * i + k], f"off vertex {i}") for k in range(3)))
    return polytopes.ConvexPolytope(verts)


# ---------------------------------------------------------------- reports

def verdict_to_json(v: pinning.PinningVerdict) -> dict:
    if v.pinned:
        return {"verdict": "pinned", "case": v.case.kind, "dimE": v.dim_e,
                "E": [vec_to_json(b) for b in v.e_basis]}
    return {"verdict": "not_pinned", "certificate": certificate_to_json(v.certificate)}


def certificate_to_json(cert) -> dict:
    if isinstance(cert, pinning.DirectWitness):
        return {"kind": "direct", "u": vec_to_json(cert.u)}
    if isinstance(cert, pinning.SegmentWitness):
        return {"kind": "segment", "p": vec_to_json(cert.p), "q": vec_to_json(cert.q)}
    return {"kind": "none"}


def _plot_data(doc, verdict=None) -> dict:
    segments = [{"kind": "reference", "points": [["0", "0", "-1"], ["0", "0", "2"]]}]
    for g in doc.get("constraints", []):
        a = (0, 0, g.lam)
        segments.append({"kind": "constraint",
                         "points": [vec_to_json(tuple(x - d for x, d in zip(a, g.dir))),
                                    vec_to_json(tuple(x + d for x, d in zip(a, g.dir)))]})
    if verdict is not None and isinstance(verdict.certificate, pinning.DirectWitness):
        u = verdict.certificate.u
        segments.append({"kind": "witness",
                         "points": [vec_to_json((u[0], u[1], 0)), vec_to_json((u[2], u[3], 1))]})
    return {"segments": segments}


# ---------------------------------------------------------------- commands

def _family(doc):
    if doc.get("polytopes"):
        return "polytopes", doc["polytopes"]
    if doc.get("constraints"):
        return "constraints", doc["constraints"]
    raise InputError("document: needs a non-empty 'constraints' or 'polytopes' list")


def cmd_check(doc, args) -> dict:
    kind, fam = _family(doc)
    hints = doc.get("hints", [])
    if kind == "polytopes":
        v = polytopes.decide_polytope_pinning(fam, hints)
    else:
        v = pinning.decide_pinning(fam, hints)
    out = verdict_to_json(v)
    if args.emit_plot_data:
        out["plot"] = _plot_data(doc, v)
    return out


def cmd_minimize(doc, args) -> dict:
    kind, fam = _family(doc)
    if kind == "polytopes":
        idx = polytopes.minimize_polytope_indices(fam)
        return {"indices": idx, "polytopes": [polytope_to_json(fam[i]) for i in idx]}
    idx = pinning.minimize_indices(fam)
    return {"indices": idx, "constraints": [constraint_to_json(fam[i]) for i in idx]}


def cmd_classify(doc, args) -> dict:
    _, fam = _family(doc)
    if "constraints" not in doc:
        raise InputError("classify: needs 'constraints'")
    out: dict = {"label": None}
    if all(g.dz == 0 for g in fam):
        from .linespace import eta
        try:
            case, cover = classify.decompose_surrounding([eta(g) for g in fam])
            out["decomposition"] = str(case)
            out["cover"] = cover
            out["blocks"] = [getattr(classify.block_classify([fam[i] for i in s]), "value", None)
                             for s in cover]
        except classify.NotMinimallySurrounding:
            out["decomposition"] = None
        try:
            out["label"] = classify.classify_ortho_pinning(fam).value
        except classify.NotAMinimalOrthoPinning as exc:
            out["reason"] = str(exc)
    else:
        out["reason"] = "not every constraint is orthogonal to the reference line"
    out["four_pinning"] = classify.detect_4pinning(fam)
    return out


def cmd_orthogonalize(doc, args) -> dict:
    if "constraints" not in doc:
        raise InputError("orthogonalize: needs 'constraints'")
    return {"constraints": [constraint_to_json(g) for g in orthogonalize_family(doc["constraints"])]}


def cmd_generate(args) -> dict:
    name = args.name
    if name == "infinite":
        n = int(args.arg) if args.arg is not None else 3
        fam = generators.gen_infinite(n)
        return {"name": f"infinite_{n}", "expected": "pinned",
                "polytopes": [polytope_to_json(p) for p in fam],
                "hints": [vec_to_json(h) for h in generators.infinite_escape_directions(n)]}
    if name == "char_ortho":
        if args.arg is None:
            raise InputError("generate char_ortho: needs a label")
        fam = generators.gen_char_ortho(args.arg)
    elif name in generators.FIXTURES:
        fam = generators.FIXTURES[name]()
    else:
        raise InputError(f"generate: unknown family {name!r}")
    out = {"name": fam.name, "expected": fam.expected}
    if fam.label:
        out["label"] = fam.label
    out["constraints"] = [constraint_to_json(g) for g in fam.constraints]
    if fam.hints:
        out["hints"] = [vec_to_json(h) for h in fam.hints]
    return out


def cmd_oracle(doc, args) -> dict:
    kind, fam = _family(doc)
    system = polytopes.reduce_polytopes(fam).system if kind == "polytopes" else fam
    radii = tuple(rat_from_json(r, "--radius") for r in args.radius) if args.radius else None
    kw = {}
    if radii:
        kw["radii"] = radii
    if args.grid is not None:
        kw["grid"] = args.grid
    if args.random is not None:
        kw["random"] = args.random
    kw["seed"] = args.seed
    try:
        budget = oracle.SampleBudget(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    rep = oracle.sample_escape(system, budget)
    return {"refuted": rep.refuted is not None,
            "u": vec_to_json(rep.refuted) if rep.refuted is not None else None,
            "samples": rep.samples_tested}


def cmd_reduce_polytopes(doc, args) -> dict:
    if "polytopes" not in doc:
        raise InputError("reduce-polytopes: needs 'polytopes'")
    fam = doc["polytopes"]
    rep = polytopes.reduce_polytopes(fam)
    entries = []
    for i, p in enumerate(fam):
        entry = {"index": i, "tangency": rep.kinds[i]}
        if rep.kinds[i] in ("edge", "vertex"):
            entry["constraints"] = [constraint_to_json(g) for g in polytopes.constraints_of_polytope(p)]
        elif rep.kinds[i] == "coplanar_facet":
            grp = rep.system.groups[rep.members.index(i)]
            entry["pieces"] = [[vec_to_json(a) for a in piece] for piece in grp]
        entries.append(entry)
    return {"members": list(rep.members), "dropped": list(rep.dropped), "report": entries}


def cmd_reduction(doc, args) -> dict:
    if args.command == "steinitz":
        if "points" not in doc:
            raise InputError("steinitz: needs 'points'")
        return {"indices": pinning.steinitz_reduce(doc["points"])}
    if "halfspaces" not in doc:
        raise InputError(f"{args.command}: needs 'halfspaces'")
    if args.command == "helly-flat":
        return {"indices": pinning.helly_flat_reduce(doc["halfspaces"])}
    return {"indices": pinning.positive_cone_reduce(doc["halfspaces"], args.dim)}


COMMANDS = {
    "check": cmd_check,
    "minimize": cmd_minimize,
    "classify": cmd_classify,
    "orthogonalize": cmd_orthogonalize,
    "oracle": cmd_oracle,
    "reduce-polytopes": cmd_reduce_polytopes,
    "steinitz": cmd_reduction,
    "helly-flat": cmd_reduction,
    "positive-cone": cmd_reduction,
}

PRECONDITION_ERRORS = (
    pinning.EmptyFamily, pinning.NotAPinning, pinning.NotSurrounding, pinning.NotAFlat,
    pinning.PreconditionViolated, pinning.BoundViolation,
    classify.WrongArity, classify.NotOrthogonal, classify.NotContainingOrigin,
    polytopes.NotTangent, polytopes.CoplanarFacetExcluded, polytopes.DegeneratePolytope,
    generators.UnsupportedLabel, generators.GenericityFailure,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linepin", description="Decide whether lines or polytopes pin a line.")
    parser.add_argument("command", choices=sorted(COMMANDS) + ["generate"])
    parser.add_argument("name", nargs="?", help="family name for generate")
    parser.add_argument("arg", nargs="?", help="size or label for generate")
    parser.add_argument("--input", "-i", help="read the document from a file instead of stdin")
    parser.add_argument("--off", action="append", default=[], help="add a polytope from an OFF file")
    parser.add_argument("--radius", action="append", help="oracle radius (repeatable)")
    parser.add_argument("--grid", type=int)
    parser.add_argument("--random", type=int)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dim", type=int, help="distinguished coordinate for positive-cone")
    parser.add_argument("--emit-plot-data", action="store_true")
    return parser


def run(argv, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("error: --seed must be an unsigned 64-bit integer", file=stderr)
        return EXIT_INPUT
    try:
        if args.command == "generate":
            if not args.name:
                raise InputError("generate: needs a family name")
            result = cmd_generate(args)
        else:
            if args.input:
                with open(args.input) as fh:
                    text = fh.read()
            elif args.off:
                text = "{}"
            else:
                text = stdin.read()
            doc = load_document(text)
            for path in args.off:
                with open(path) as fh:
                    doc.setdefault("polytopes", []).append(read_off(fh.read()))
            result = COMMANDS[args.command](doc, args)
    except InputError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except PRECONDITION_ERRORS as exc:
        print(f"precondition: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_PRECONDITION
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    out = {"schema": SCHEMA}
    out.update(result)
    stdout.write(json.dumps(out, separators=(",", ":")) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
