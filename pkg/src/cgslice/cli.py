"""Command-line front end.

Every subcommand reads one JSON document (``--input FILE`` or stdin) and
prints a report, human-readable by default or JSON with ``--json``.
Rationals are written as "num/den" strings.  Exit codes: 0 success,
2 malformed input, 3 violated precondition, 4 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

import jsonschema

from . import __version__
from .casson_gordon import CableSpec, CGValue, CharVector, SurgeryPresentation, cg_surgery
from .errors import PreconditionError, ResourceBoundError
from .forms import SeifertMatrix, alexander_polynomial, tristram_levine
from .homology import (
    DEFAULT_MAX_GROUP_ORDER,
    linking_form_from_presentation,
    meridian_character,
    min_generators,
    prime_factors,
    self_annihilating_characters,
)
from .obstruction import (
    GenusQuery,
    mt_lower_bound_at,
    paper_family_run,
    presentation_cg_source,
    table_cg_source,
    theorem_main_check,
)

SCHEMA_VERSION = 1

_int_matrix = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}},
}
_rational = {"type": ["integer", "string"], "pattern": r"^-?\d+(/\d+)?$"}

INPUT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "seifert": {
            "type": "object",
            "required": ["matrix"],
            "additionalProperties": False,
            "properties": {
                "matrix": _int_matrix,
                "mu": {"type": "integer", "minimum": 1},
                "genus": {"type": "integer", "minimum": 0},
            },
        },
        "surgery": {
            "type": "object",
            "required": ["linking_matrix"],
            "additionalProperties": False,
            "properties": {
                "linking_matrix": _int_matrix,
                "cables": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["p", "copies", "twist"],
                        "additionalProperties": False,
                        "properties": {
                            "p": {"type": "integer"},
                            "copies": {"type": "integer", "minimum": 1},
                            "twist": {"type": "integer"},
                        },
                    },
                },
                "lprime_seifert": {
                    "type": "object",
                    "required": ["matrix", "mu"],
                    "additionalProperties": False,
                    "properties": {
                        "matrix": _int_matrix,
                        "mu": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
        "character": {
            "type": "object",
            "required": ["p", "q"],
            "additionalProperties": False,
            "properties": {
                "p": {"type": "array", "items": {"type": "integer"}},
                "q": {"type": "integer", "minimum": 1},
                "r": {"type": "integer"},
            },
        },
        "family": {
            "type": "object",
            "required": ["h"],
            "additionalProperties": False,
            "properties": {
                "h": {"type": "integer", "minimum": 1},
                "sigma_K": {"type": "integer"},
                "knot_seifert": _int_matrix,
            },
            "oneOf": [
                {"required": ["sigma_K"], "not": {"required": ["knot_seifert"]}},
                {"required": ["knot_seifert"], "not": {"required": ["sigma_K"]}},
            ],
        },
        "query": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "genus": {"type": "integer", "minimum": 0},
                "lambda_list": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "integer"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
                "prime": {"type": "integer", "minimum": 2},
            },
        },
        "cg_table": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["character", "sigma", "eta"],
                "additionalProperties": False,
                "properties": {
                    "character": {"type": "array", "items": {"type": "integer"}},
                    "sigma": _rational,
                    "eta": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "version", "schema", "input_sha256", "results"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": ["tl", "alexander", "mt", "linking-form", "characters", "cg", "obstruct", "family"]},
        "version": {"type": "string"},
        "schema": {"const": SCHEMA_VERSION},
        "input_sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "results": {"type": "object"},
    },
}


class SchemaError(ValueError):
    pass


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _path(err: jsonschema.ValidationError) -> str:
    return "/".join(str(k) for k in err.absolute_path) or "<root>"


def validate(doc) -> None:
    validator = jsonschema.Draft202012Validator(INPUT_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise SchemaError(f"invalid input at {_path(e)}: {e.message}")


def _matrix(rows, key: str):
    if any(len(r) != len(rows) for r in rows):
        raise SchemaError(f"{key}: matrix must be square with rows of equal length")
    return tuple(tuple(r) for r in rows)


def _need(doc, key: str, command: str):
    if key not in doc:
        raise SchemaError(f"{command} needs the {key!r} key")
    return doc[key]


def _seifert(doc, command) -> SeifertMatrix:
    s = _need(doc, "seifert", command)
    m = _matrix(s["matrix"], "seifert/matrix")
    try:
        return SeifertMatrix(m, s.get("mu", 1), s.get("genus"))
    except ValueError as e:
        raise PreconditionError(f"seifert: {e}") from None


def _surgery(doc, command) -> SurgeryPresentation:
    s = _need(doc, "surgery", command)
    lam = _matrix(s["linking_matrix"], "surgery/linking_matrix")
    cables = tuple(CableSpec(c["p"], c["copies"], c["twist"]) for c in s.get("cables", ()))
    lprime = "unknot"
    if "lprime_seifert" in s:
        ls = s["lprime_seifert"]
        lprime = SeifertMatrix(_matrix(ls["matrix"], "surgery/lprime_seifert/matrix"), ls["mu"])
    return SurgeryPresentation(lam, cables, lprime)


def _lambdas(doc, default):
    lams = doc.get("query", {}).get("lambda_list")
    return [tuple(x) for x in lams] if lams else default


# ---------------------------------------------------------------------------
# commands; each returns (results dict, text lines)

def cmd_tl(doc, args):
    V = _seifert(doc, "tl")
    rows, lines = [], []
    for r, q in _lambdas(doc, [(1, 2)]):
        sn = tristram_levine(V, r, q)
        rows.append({"r": r, "q": q, "signature": sn.signature, "nullity": sn.nullity})
        lines.append(f"lambda = exp(2 pi i {r}/{q}): sigma = {sn.signature}, nullity = {sn.nullity}")
    delta = alexander_polynomial(V)
    lines.append(f"Delta(t) = {delta}")
    lines.append(f"Delta(-1) = {delta(-1)}")
    return {
        "table": rows,
        "alexander": list(delta.coeffs),
        "alexander_str": str(delta),
        "alexander_at_minus1": delta(-1),
    }, lines


def cmd_alexander(doc, args):
    V = _seifert(doc, "alexander")
    delta = alexander_polynomial(V)
    return {
        "alexander": list(delta.coeffs),
        "alexander_str": str(delta),
        "alexander_at_minus1": delta(-1),
    }, [f"Delta(t) = {delta}", f"Delta(-1) = {delta(-1)}"]


def cmd_mt(doc, args):
    V = _seifert(doc, "mt")
    query = _need(doc, "query", "mt")
    if "lambda_list" not in query:
        raise SchemaError("mt needs query/lambda_list")
    rows, lines, best = [], [], 0
    for r, q in _lambdas(doc, []):
        sig, null, bound = mt_lower_bound_at(V, r, q)
        best = max(best, bound)
        rows.append({"r": r, "q": q, "signature": sig, "nullity": null, "bound": bound})
        lines.append(f"lambda = exp(2 pi i {r}/{q}): sigma = {sig}, nullity = {null}, g >= {bound}")
    lines.append(f"Murasugi-Tristram bound: g >= {best}")
    return {"table": rows, "bound": best}, lines


def _form_results(f):
    G = f.group
    gram = [[frac(f(u, v)) for v in _basis(G)] for u in _basis(G)]
    return {
        "group": list(G.orders),
        "invariant_factors": list(G.invariant_factors()),
        "group_str": str(G),
        "order": G.order,
        "min_generators": min_generators(G),
        "gram": gram,
    }


def _basis(G):
    n = len(G.orders)
    return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]


def cmd_linking_form(doc, args):
    s = _need(doc, "surgery", "linking-form")
    f = linking_form_from_presentation(_matrix(s["linking_matrix"], "surgery/linking_matrix"))
    res = _form_results(f)
    lines = [f"H_1 = {res['group_str'] or '0'}", "gram (Q/Z):"]
    lines += ["  [" + ", ".join(row) + "]" for row in res["gram"]]
    return res, lines


def cmd_characters(doc, args):
    s = _need(doc, "surgery", "characters")
    f = linking_form_from_presentation(_matrix(s["linking_matrix"], "surgery/linking_matrix"))
    if f.group.order > args.max_group_order:
        raise ResourceBoundError(
            f"group of order {f.group.order} exceeds --max-group-order {args.max_group_order}"
        )
    prime = doc.get("query", {}).get("prime")
    primes = [prime] if prime else prime_factors(f.group.order)
    out, lines = [], [f"H_1 = {f.group or '0'}"]
    for p in primes:
        chars = self_annihilating_characters(f, p)
        lines.append(f"order {p} self-annihilating characters: {len(chars)}")
        for chi in chars:
            mp, mq = meridian_character(f, chi)
            out.append({"prime": p, "coords": list(chi.coords), "meridian_p": list(mp), "q": mq})
            if args.verbose:
                lines.append(f"  {chi.coords}  meridians p = {mp} mod {mq}")
    return {"group": list(f.group.orders), "characters": out}, lines


def cmd_cg(doc, args):
    pres = _surgery(doc, "cg")
    c = _need(doc, "character", "cg")
    chi = CharVector(tuple(c["p"]), c["q"])
    r = c.get("r", 1)
    val = cg_surgery(pres, chi, r)
    return {"sigma": frac(val.sigma), "eta": val.eta, "r": r}, [
        f"sigma = {frac(val.sigma)}",
        f"eta = {val.eta}",
    ]


def _report_lines(rep, verbose):
    lines = [
        f"verdict at genus {rep.genus}: {rep.verdict}",
        f"rank bound 2g + mu - 1 = {rep.rank_bound}, minimal generators = {rep.min_generators}",
    ]
    lines += [f"note: {n}" for n in rep.notes]
    if verbose:
        for e in rep.ledger:
            mark = "holds" if e.holds else "fails"
            lines.append(
                f"  chi = {e.character}: sigma = {frac(e.sigma)}, eta = {e.eta}, "
                f"{frac(e.lhs)} <= {e.rhs} {mark}"
            )
    return lines


def cmd_obstruct(doc, args):
    V = _seifert(doc, "obstruct")
    s = _need(doc, "surgery", "obstruct")
    lam = _matrix(s["linking_matrix"], "surgery/linking_matrix")
    f = linking_form_from_presentation(lam)
    query = _need(doc, "query", "obstruct")
    if "genus" not in query:
        raise SchemaError("obstruct needs query/genus")
    if "cg_table" in doc:
        table = {
            tuple(e["character"]): CGValue(Fraction(e["sigma"]), e["eta"]) for e in doc["cg_table"]
        }
        source = table_cg_source(table)
    else:
        source = presentation_cg_source(_surgery(doc, "obstruct"), f)
    q = GenusQuery(
        genus=query["genus"],
        mu=V.mu,
        sigma_minus1=tristram_levine(V, 1, 2).signature,
        form=f,
        cg_source=source,
        seifert=V,
    )
    rep = theorem_main_check(q, max_group_order=args.max_group_order, verbose=args.verbose)
    res = rep.to_dict()
    if not args.verbose:
        res.pop("ledger")
    return res, _report_lines(rep, args.verbose)


def cmd_family(doc, args):
    fam = _need(doc, "family", "family")
    sk = fam.get("sigma_K")
    if sk is None:
        sk = SeifertMatrix(_matrix(fam["knot_seifert"], "family/knot_seifert"))
    rep = paper_family_run(fam["h"], sk, max_group_order=args.max_group_order, verbose=args.verbose)
    res = rep.to_dict()
    if not args.verbose:
        res["obstruction"].pop("ledger")
    lines = [
        f"h = {rep.h}, sigma_K(exp(2 pi i/3)) = {rep.sigma_k}",
        f"Murasugi-Tristram bound: g >= {rep.mt_bound}",
    ]
    lines += _report_lines(rep.check, args.verbose)
    if rep.slice_genus is not None:
        lines.append(f"slice genus = {rep.slice_genus}")
    else:
        lines.append(f"slice genus: between {rep.mt_bound} and {rep.h}")
    return res, lines


COMMANDS = {
    "tl": cmd_tl,
    "alexander": cmd_alexander,
    "mt": cmd_mt,
    "linking-form": cmd_linking_form,
    "characters": cmd_characters,
    "cg": cmd_cg,
    "obstruct": cmd_obstruct,
    "family": cmd_family,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cgslice", description="Exact slice-genus obstructions for links."
    )
    parser.add_argument("--version", action="version", version=f"cgslice {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", metavar="FILE", help="JSON input (default: stdin)")
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--verbose", "-v", action="store_true", help="include the full ledger")
    common.add_argument(
        "--max-group-order",
        type=int,
        default=DEFAULT_MAX_GROUP_ORDER,
        metavar="N",
        help=f"largest group searched exhaustively (default {DEFAULT_MAX_GROUP_ORDER})",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _read(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def render(command, text, results, as_json, lines) -> str:
    if as_json:
        report = {
            "command": command,
            "version": __version__,
            "schema": SCHEMA_VERSION,
            "input_sha256": hashlib.sha256(text.encode()).hexdigest(),
            "results": results,
        }
        return json.dumps(report, sort_keys=True, indent=2)
    return "\n".join(lines)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = _read(args.input)
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"input is not valid JSON: {e}") from None
        validate(doc)
        results, lines = COMMANDS[args.command](doc, args)
    except SchemaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ResourceBoundError as e:
        print(f"error: resource bound exceeded: {e}", file=sys.stderr)
        return 4
    except (PreconditionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(render(args.command, text, results, args.json, lines))
    return 0


if __name__ == "__main__":
    sys.exit(main())
