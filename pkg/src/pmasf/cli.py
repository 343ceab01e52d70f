"""Command-line front end.

Every subcommand builds a JSON document from its flags (or reads one with
``--input``), validates it against ``schemas/<name>.input.json`` and prints
the result as JSON or TSV.  Exit status 0 on success, 2 on invalid input,
3 on mathematical errors; errors are printed as {"error", "message"}.

    >>> main(["adm", "--datum", "GL2", "--lambda", "1,0"])
    [
      {
        "element": "t^[0,1]*s1",
        "length": 0
      },
      {
        "element": "t^[0,1]",
        "length": 1
      },
      {
        "element": "t^[1,0]",
        "length": 1
      }
    ]
    0
"""

import argparse
import doctest
import json
import random
import sys
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence

import jsonschema

from . import affine_weyl, invariants, laurent, loop_group, oracle, root_data, vinberg
from .affine_weyl import (
    admissible_set,
    aw_length,
    bruhat_leq,
    elements_up_to_length,
    omega_element,
    translation,
)
from .errors import InputError, MathError, NotDominant, PmasfError
from .invariants import (
    FiberQuery,
    InvariantBundle,
    SplitElement,
    dim_fiber,
    discriminant_valuation,
    extended_discriminant_valuation,
    mv_dimension,
    nonempty,
    parabolic_dimension,
)
from .laurent import field_from_name, parse_series, working_precision
from .loop_group import LoopMatrix, iwahori_cell, monomial_matrix, smith_cartan, type_a_datum
from .oracle import bruhat_subword_oracle, fiber_census
from .root_data import PRESETS, build_root_datum, dominant_conjugate, is_dominant
from .vinberg import VinbergSL2Point, VinbergSL3Point, sl2_monoid_membership, sl3_embed, sl3_vinberg_check

__all__ = ["main", "run", "build_parser", "EXIT_OK", "EXIT_INPUT", "EXIT_MATH"]

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_MATH = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of printing usage and exiting."""

    def error(self, message):
        raise InputError(message)


# -- parsing helpers -----------------------------------------------------------

def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError("expected comma separated integers, got %r" % text) from None


def _series_list(text: str) -> List[str]:
    return [x.strip().strip('"') for x in text.split(",")]


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("bad JSON: %s" % exc) from None


def _load_input(text: str):
    if text.lstrip().startswith(("{", "[")):
        return _json_arg(text)
    try:
        with open(text) as fh:
            return _json_arg(fh.read())
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (text, exc)) from None


@lru_cache(maxsize=None)
def _schema(name: str, kind: str) -> dict:
    path = resources.files("pmasf") / "schemas" / ("%s.%s.json" % (name, kind))
    return json.loads(path.read_text())


def _validate(name: str, doc) -> None:
    try:
        jsonschema.validate(doc, _schema(name, "input"))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError("%s input invalid at %s: %s" % (name, where, exc.message)) from None


def _datum(value):
    if isinstance(value, dict):
        return build_root_datum(value, name=value.get("name"))
    return build_root_datum(value)


def _field(doc):
    return field_from_name(doc.get("field", "QQ"))


def _gamma(doc, d):
    g = doc["gamma"]
    if "units" in g:
        f = _field(doc)
        return SplitElement(d, g["mu"], [parse_series(u, f) for u in g["units"]]), None
    nu = tuple(Fraction(x) for x in g["nu"])
    return None, InvariantBundle(nu, tuple(g["kappa"]), g["d"], g.get("c", 0))


def _matrix(doc):
    rows = doc["matrix"]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InputError("matrix must be square")
    d = _datum(doc["datum"]) if "datum" in doc else type_a_datum(n)
    if d.weight_lattice_rank != n:
        raise InputError("%s needs %dx%d matrices" % (d.name, d.weight_lattice_rank, d.weight_lattice_rank))
    return LoopMatrix.from_strings(d, rows, _field(doc))


def _rat(x):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


# -- subcommands ---------------------------------------------------------------

def cmd_datum(doc):
    return _datum(doc["datum"]).to_json()


def cmd_adm(doc):
    d = _datum(doc["datum"])
    return [{"element": str(x), "length": aw_length(x)} for x in admissible_set(d, doc["lambda"])]


def _fiber(doc, strict: bool):
    d = _datum(doc["datum"])
    gamma, bundle = _gamma(doc, d)
    q = FiberQuery(d, doc["lambda"], gamma=gamma, bundle=bundle,
                   variant=doc.get("variant", "closed"), level=doc.get("level", "spherical"))
    ok = nonempty(q)
    out = {"nonempty": ok, "dimension": None, "d": q.d(), "d_plus": None, "c": q.c(),
           "newton": [_rat(x) for x in q.newton()], "kottwitz": list(q.kappa())}
    if ok or strict:
        out["dimension"] = dim_fiber(q)
        out["d_plus"] = extended_discriminant_valuation(q)
    return out


def cmd_nonempty(doc):
    return _fiber(doc, strict=False)


def cmd_dim(doc):
    return _fiber(doc, strict=True)


def cmd_mv_dim(doc):
    d = _datum(doc["datum"])
    word = tuple(i - 1 for i in doc.get("w", []))
    if any(i >= d.rank for i in word):
        raise InputError("%s has %d simple reflections" % (d.name, d.rank))
    w = d.weyl_element(word)
    lam = d.check_coweight(doc["lambda"])
    if not is_dominant(d, lam):
        raise NotDominant("%r is not dominant" % (lam,))
    wl = d.min_coset_rep(w, d.stabilizer_simple(lam))
    return {"mv_dimension": _rat(mv_dimension(d, lam, doc["mu"], w)),
            "w_lambda_length": wl.length(), "parabolic_dimension": parabolic_dimension(d, lam)}


def cmd_disc(doc):
    d = _datum(doc["datum"])
    gamma, _ = _gamma(doc, d)
    vals = gamma.root_valuations()
    out = {"d": discriminant_valuation(gamma),
           "root_valuations": {",".join(str(x) for x in a): v for a, v in sorted(vals.items())}}
    if "lambda" in doc:
        out["d_plus"] = d.pair(d.two_rho, d.check_coweight(doc["lambda"])) + out["d"]
    return out


def cmd_cell(doc):
    g = _matrix(doc)
    x = iwahori_cell(g, method=doc.get("method", "lattice"))
    return {"cell": str(x), "length": aw_length(x), "cartan": list(smith_cartan(g))}


def cmd_smith(doc):
    return {"cartan": list(smith_cartan(_matrix(doc)))}


def cmd_vinberg_check(doc):
    f = _field(doc)
    gl3 = type_a_datum(3)
    mats = []
    for key in ("A1", "A2"):
        rows = doc[key]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise InputError("%s must be 3x3" % key)
        mats.append(LoopMatrix(gl3, [[parse_series(x, f) for x in r] for r in rows], check=False))
    p = VinbergSL3Point(parse_series(doc["x"], f), parse_series(doc["y"], f), *mats)
    return {"valid": sl3_vinberg_check(p)}


def cmd_vinberg_member(doc):
    p = VinbergSL2Point.from_strings(doc["matrix"], _field(doc))
    m = sl2_monoid_membership(p, doc["n"])
    return {"label": m.label, "integral": m.integral, "det_valuation": m.det_valuation,
            "reduction_nonzero": m.reduction_nonzero, "reduction_upper": m.reduction_upper,
            "in_closure": m.in_closure, "in_open_locus": m.in_open_locus,
            "in_iwahori_closure": m.in_iwahori_closure, "in_iwahori_open": m.in_iwahori_open}


def cmd_census(doc):
    d = _datum(doc["datum"])
    gamma, _ = _gamma(doc, d)
    print("census: %s lambda=%s level=%s variant=%s" % (
        d.name, doc["lambda"], doc.get("level", "iwahori"), doc.get("variant", "closed")), file=sys.stderr)
    rep = fiber_census(gamma, doc["lambda"], level=doc.get("level", "iwahori"),
                       variant=doc.get("variant", "closed"), q=doc.get("q", 3),
                       jet_level=doc.get("jet_level", 4), slack=doc.get("slack", 2))
    return rep.to_json()


def cmd_selftest(doc):
    checks = [{"name": name, "ok": bool(fn())} for name, fn in _selftests()]
    return {"ok": all(c["ok"] for c in checks), "checks": checks}


# -- selftest suite --------------------------------------------------------------

def _check_doctests():
    mods = (root_data, laurent, affine_weyl, invariants, loop_group, vinberg, oracle)
    return all(doctest.testmod(m, verbose=False, report=False).failed == 0 for m in mods)


def _check_adm_gl2():
    d = build_root_datum("GL2")
    return {str(x) for x in admissible_set(d, (1, 0))} == {"t^[1,0]", "t^[0,1]", "t^[0,1]*s1"}


def _check_length_law():
    for name in ("GL2", "GL3", "SL3", "Sp4", "PGL2"):
        d = build_root_datum(name)
        for lam in _dominant_box(d, 0, 2):
            if aw_length(translation(d, lam)) != d.pair(d.two_rho, lam):
                return False
    return True


def _check_bruhat_oracle():
    for name in ("GL2", "SL2"):
        d = build_root_datum(name)
        omegas = sorted({omega_element(d, mu) for mu in _box(d, -1, 1)}, key=lambda x: x.sort_key())
        elems = elements_up_to_length(d, 4, omegas)
        for x in elems:
            for y in elems:
                if bruhat_leq(x, y) != bruhat_subword_oracle(x, y):
                    return False
    return True


def _check_max_parabolic():
    for name in PRESETS:
        d = build_root_datum(name)
        for lam in _dominant_box(d, 0, 2):
            stab = d.stabilizer_simple(lam)
            best = max(d.min_coset_rep(w, stab).length() for w in d.weyl_elements())
            if best != parabolic_dimension(d, lam):
                return False
    return True


def _check_cells():
    for name in ("GL2", "SL2", "GL3"):
        d = build_root_datum(name)
        omegas = sorted({omega_element(d, mu) for mu in _box(d, -1, 1)}, key=lambda x: x.sort_key())
        for x in elements_up_to_length(d, 2, omegas):
            g = monomial_matrix(x)
            if iwahori_cell(g) != x or iwahori_cell(g, method="pivot") != x:
                return False
            if smith_cartan(g) != dominant_conjugate(d, x.translation)[0]:
                return False
    return True


def _check_disc_invariance():
    rng = random.Random(7)
    for name in ("GL2", "GL3", "Sp4"):
        d = build_root_datum(name)
        for _ in range(5):
            mu = tuple(rng.randint(-2, 2) for _ in range(d.weight_lattice_rank))
            units = [laurent.exact((rng.randint(1, 9), rng.randint(0, 3))) for _ in mu]
            try:
                g = SplitElement(d, mu, units)
            except MathError:
                continue
            v = discriminant_valuation(g)
            if any(discriminant_valuation(g.conjugate(w)) != v for w in d.weyl_elements()):
                return False
    return True


def _check_sl3_embed():
    sl3 = type_a_datum(3, True)
    g = LoopMatrix.from_strings(sl3, [["1", "t", "0"], ["0", "1", "2"], ["0", "0", "1"]])
    p = sl3_embed(parse_series("1 + t"), parse_series("2"), g)
    return sl3_vinberg_check(p)


def _selftests():
    return [
        ("doctests", _check_doctests),
        ("adm_gl2", _check_adm_gl2),
        ("length_law", _check_length_law),
        ("bruhat_vs_subwords", _check_bruhat_oracle),
        ("max_parabolic_length", _check_max_parabolic),
        ("iwahori_cells_two_routes", _check_cells),
        ("disc_weyl_invariance", _check_disc_invariance),
        ("sl3_embed_relations", _check_sl3_embed),
    ]


def _box(d, lo, hi):
    from itertools import product
    out = []
    for mu in product(range(lo, hi + 1), repeat=d.weight_lattice_rank):
        try:
            out.append(d.check_coweight(mu))
        except InputError:
            continue
    return out


def _dominant_box(d, lo, hi):
    return [mu for mu in _box(d, lo, hi) if is_dominant(d, mu)]


# -- argument parsing -------------------------------------------------------------

COMMANDS: Dict[str, Callable] = {
    "datum": cmd_datum,
    "adm": cmd_adm,
    "nonempty": cmd_nonempty,
    "dim": cmd_dim,
    "mv-dim": cmd_mv_dim,
    "disc": cmd_disc,
    "cell": cmd_cell,
    "smith": cmd_smith,
    "vinberg-check": cmd_vinberg_check,
    "vinberg-member": cmd_vinberg_member,
    "census": cmd_census,
    "selftest": cmd_selftest,
}


def _common(p):
    p.add_argument("--format", choices=("json", "tsv"), default="json")
    p.add_argument("--prec", type=int, default=laurent.DEFAULT_PRECISION)
    p.add_argument("--input", help="JSON document or path to one; replaces the other flags")


def _fiber_flags(p, bundle=True, lam=True):
    p.add_argument("--datum")
    if lam:
        p.add_argument("--lambda", dest="lam")
    p.add_argument("--gamma-mu")
    p.add_argument("--gamma-units")
    p.add_argument("--field")
    if bundle:
        p.add_argument("--gamma-nu")
        p.add_argument("--kappa")
        p.add_argument("--d", type=int)
        p.add_argument("--c", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pmasf", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("datum", help="print a root datum")
    _common(p)
    p.add_argument("--datum")

    p = sub.add_parser("adm", help="admissible set with lengths")
    _common(p)
    p.add_argument("--datum")
    p.add_argument("--lambda", dest="lam")

    for name in ("nonempty", "dim"):
        p = sub.add_parser(name, help="fiber invariants")
        _common(p)
        _fiber_flags(p)
        p.add_argument("--level", choices=invariants.LEVELS)
        p.add_argument("--variant", choices=invariants.VARIANTS)

    p = sub.add_parser("mv-dim", help="dimension of a generalized MV cycle")
    _common(p)
    p.add_argument("--datum")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--mu")
    p.add_argument("--w", help="word in the simple reflections, e.g. 1,2")

    p = sub.add_parser("disc", help="discriminant valuation of a split element")
    _common(p)
    _fiber_flags(p, bundle=False)

    for name in ("cell", "smith"):
        p = sub.add_parser(name, help="relative position of a loop matrix")
        _common(p)
        p.add_argument("--datum")
        p.add_argument("--matrix", help="JSON array of rows of Laurent strings")
        p.add_argument("--field")
        if name == "cell":
            p.add_argument("--method", choices=("lattice", "pivot"))

    p = sub.add_parser("vinberg", help="Vinberg monoid membership")
    vsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = vsub.add_parser("check", help="SL3 Vinberg relations")
    _common(c)
    for key in ("x", "y"):
        c.add_argument("--" + key)
    for key in ("A1", "A2"):
        c.add_argument("--" + key, help="JSON 3x3 matrix")
    c.add_argument("--field")
    m = vsub.add_parser("member", help="SL2 monoid membership")
    _common(m)
    m.add_argument("--matrix", help="JSON 2x2 matrix")
    m.add_argument("--n", type=int)
    m.add_argument("--field")

    p = sub.add_parser("census", help="finite field census of a fiber")
    _common(p)
    _fiber_flags(p, bundle=False)
    p.add_argument("--level", choices=invariants.LEVELS)
    p.add_argument("--variant", choices=invariants.VARIANTS)
    p.add_argument("--q", type=int)
    p.add_argument("--jet-level", type=int)
    p.add_argument("--slack", type=int)

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    _common(p)
    return parser


def _doc_from_flags(ns) -> dict:
    doc = {}
    flags = vars(ns)

    def put(key, value, conv=lambda v: v):
        if value is not None:
            doc[key] = conv(value)

    put("datum", flags.get("datum"))
    put("lambda", flags.get("lam"), _ints)
    put("field", flags.get("field"))
    put("level", flags.get("level"))
    put("variant", flags.get("variant"))
    if flags.get("gamma_mu") is not None or flags.get("gamma_units") is not None:
        doc["gamma"] = {"mu": _ints(flags.get("gamma_mu") or ""),
                        "units": _series_list(flags.get("gamma_units") or "")}
    elif flags.get("gamma_nu") is not None:
        doc["gamma"] = {"nu": [_rat(x) for x in flags["gamma_nu"].split(",")],
                        "kappa": _ints(flags.get("kappa") or ""), "d": flags.get("d")}
        if flags.get("c") is not None:
            doc["gamma"]["c"] = flags["c"]
        if doc["gamma"]["d"] is None:
            raise InputError("--gamma-nu needs --d")
    put("mu", flags.get("mu"), _ints)
    put("w", flags.get("w"), _ints)
    put("matrix", flags.get("matrix"), _json_arg)
    put("method", flags.get("method"))
    put("n", flags.get("n"))
    put("x", flags.get("x"))
    put("y", flags.get("y"))
    put("A1", flags.get("A1"), _json_arg)
    put("A2", flags.get("A2"), _json_arg)
    put("q", flags.get("q"))
    put("jet_level", flags.get("jet_level"))
    put("slack", flags.get("slack"))
    return doc


# -- output -----------------------------------------------------------------------

def _cell_text(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def to_tsv(result) -> str:
    if isinstance(result, list):
        if not result:
            return ""
        keys = list(result[0])
        lines = ["\t".join(keys)]
        lines += ["\t".join(_cell_text(r[k]) for k in keys) for r in result]
        return "\n".join(lines)
    return "\n".join("%s\t%s" % (k, _cell_text(v)) for k, v in result.items())


def _emit(result, fmt: str, out) -> None:
    if fmt == "tsv":
        text = to_tsv(result)
    else:
        text = json.dumps(result, indent=2)
    print(text, file=out)


def run(argv: Sequence[str], out=None) -> int:
    """Run one invocation, printing to ``out`` (default stdout); returns the exit status."""
    out = out if out is not None else sys.stdout
    fmt = "json"
    try:
        ns = build_parser().parse_args(list(argv))
        fmt = ns.format
        name = ns.command if ns.command != "vinberg" else "vinberg-" + ns.action
        doc = _load_input(ns.input) if ns.input else _doc_from_flags(ns)
        _validate(name, doc)
        with working_precision(ns.prec):
            result = COMMANDS[name](doc)
    except InputError as exc:
        return _fail(exc, fmt, out, EXIT_INPUT)
    except MathError as exc:
        return _fail(exc, fmt, out, EXIT_MATH)
    _emit(result, fmt, out)
    if name == "selftest" and not result["ok"]:
        return EXIT_FAIL
    return EXIT_OK


def _fail(exc: PmasfError, fmt: str, out, status: int) -> int:
    _emit({"error": type(exc).__name__, "message": str(exc)}, fmt, out)
    return status


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
