"""Command line front end. Every command prints one JSON report on stdout.

Exit codes: 0 success, 1 a verification assertion failed, 2 input error,
3 budget exceeded, 4 precondition not met.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import exactlin as xl
from . import suites
from .constructions import COUNTER_B, PIC_2B_GRAM, PIC_B_GRAM, match_twist, match_twist_integral
from .errors import BudgetExceeded, InputError, NotAnIsometry, PreconditionError, SearchExhausted
from .hodge import (BField, Period, brauer_class, brauer_kernel, enumerate_brauer,
                    kahler_candidate, order_disc_report, surface_from_period,
                    surface_from_transcendental)
from .lattice import IntLattice
from .mukai import (K3, K3_RANK, MINUS_E8, MUKAI, U, generator_i, generator_j, identity_isometry,
                    isometry_from_matrix, minus_id, random_word)
from .orientation import oriented_frame, orientation_verdict

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET, EXIT_PRECONDITION = 0, 1, 2, 3, 4

BUILTIN_LATTICES = {
    "U": lambda: U,
    "minus-e8": lambda: MINUS_E8,
    "k3": lambda: K3,
    "mukai": lambda: MUKAI,
    "counter-pic-b": lambda: IntLattice(PIC_B_GRAM),
    "counter-pic-2b": lambda: IntLattice(PIC_2B_GRAM),
}

BUILTIN_ISOMETRIES = {
    "identity": identity_isometry,
    "i": generator_i,
    "j": generator_j,
    "minus-id": minus_id,
}


# ---------------------------------------------------------------------------
# JSON helpers
# ---------------------------------------------------------------------------

def jsonable(obj):
    """Rationals become ``"p/q"`` strings; tuples become lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "as_dict"):
        return jsonable(obj.as_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad rational {x!r}") from exc
    raise InputError(f"expected an integer or a 'p/q' string, got {x!r}")


def load_json(arg: str):
    """Parse ``arg`` as a file path if one exists, else as inline JSON."""
    text = arg
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg}") from exc


def parse_int_matrix(data, what="matrix"):
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise InputError(f"{what} must be a non-empty array of arrays")
    n = len(data[0])
    if any(len(r) != n for r in data):
        raise InputError(f"{what} rows have different lengths")
    if not all(isinstance(x, int) and not isinstance(x, bool) for r in data for x in r):
        raise InputError(f"{what} entries must be integers")
    return xl.freeze(data)


def parse_vector(data, length=K3_RANK, what="vector"):
    if not isinstance(data, list) or len(data) != length:
        raise InputError(f"{what} must be an array of {length} rationals")
    return tuple(parse_rational(x) for x in data)


def load_isometry(arg: str):
    if arg in BUILTIN_ISOMETRIES:
        return BUILTIN_ISOMETRIES[arg]()
    m = parse_int_matrix(load_json(arg), "isometry")
    domain = "mukai" if len(m) == MUKAI.rank else "k3"
    return isometry_from_matrix(m, domain)


def load_surface_spec(arg: str):
    """Surface file: ``{"x1": [...], "x2": [...], "B": [...], "omega": [...]}``.
    ``B`` and ``omega`` are optional."""
    data = load_json(arg)
    if not isinstance(data, dict) or "x1" not in data or "x2" not in data:
        raise InputError("surface spec needs keys x1 and x2")
    period = Period(parse_vector(data["x1"], what="x1"), parse_vector(data["x2"], what="x2"))
    s = surface_from_period(period)
    b = BField(parse_vector(data["B"], what="B")) if "B" in data else BField.zero()
    omega = parse_vector(data["omega"], what="omega") if "omega" in data else kahler_candidate(s)
    return oriented_frame(s, b, omega)


def emit(command: str, inputs: dict, results, assertions: dict, t0: float) -> int:
    report = {
        "command": command,
        "inputs": inputs,
        "results": results,
        "assertions": assertions,
        "timing": round(time.perf_counter() - t0, 3),
    }
    print(json.dumps(jsonable(report), sort_keys=True, indent=2))
    return EXIT_OK if all(a.get("pass", True) for a in assertions.values()) else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_lattice_invariants(args, t0):
    if args.builtin:
        lat = BUILTIN_LATTICES[args.builtin]()
        inputs = {"builtin": args.builtin}
    else:
        lat = IntLattice(parse_int_matrix(load_json(args.gram), "gram"))
        inputs = {"gram": lat.gram}
    return emit("lattice-invariants", inputs, lat.invariants.as_dict(), {}, t0)


VERIFY_SUBJECTS = {
    "example-counter": lambda a: suites.counter_suite(a.z_max),
    "fm-partners": lambda a: suites.partner_suite(a.n),
    "gap": lambda a: suites.gap_suite(a.trials, a.seed),
    "bridge": lambda a: suites.bridge_suite(a.count, a.seed),
    "order-disc": lambda a: suites.order_disc_suite(a.count, a.seed),
    "orientation-suite": lambda a: suites.orientation_suite(a.count, a.seed),
    "match-suite": lambda a: suites.match_suite(a.count, a.seed),
    "isometry-algebra": lambda a: suites.isometry_algebra(seed=a.seed),
    "goldens": lambda a: suites.lattice_goldens(),
    "euler": lambda a: suites.euler_oracle(),
    "represent-crosscheck": lambda a: suites.crosscheck_grid(),
}

_DEFAULT_COUNTS = {"bridge": 200, "order-disc": 50, "orientation-suite": 100, "match-suite": 200}


def cmd_verify(args, t0):
    if args.count is None:
        args.count = _DEFAULT_COUNTS.get(args.subject, 100)
    if args.subject == "fm-partners":
        if args.n < 1:
            raise InputError("--n must be at least 1")
        if args.n > 10:
            raise BudgetExceeded(f"N = {args.n} exceeds the budget N <= 10", args.n)
    out = VERIFY_SUBJECTS[args.subject](args)
    passed = out.pop("passed")
    out.pop("seconds", None)
    inputs = {"subject": args.subject, "seed": args.seed, "count": args.count,
              "trials": args.trials, "n": args.n}
    return emit("verify", inputs, out, {args.subject: {"pass": passed}}, t0)


def _match_dict(m):
    return {"x1": m.x.x1, "x2": m.x.x2, "y1": m.y.x1, "y2": m.y.x2, "B": m.B,
            "B1": m.B1, "B2": m.B2}


def cmd_match_twist(args, t0):
    if args.isometry:
        g = load_isometry(args.isometry)
        inputs = {"isometry": args.isometry}
    else:
        if args.seed is None:
            raise InputError("--random-word needs an explicit --seed")
        g = random_word(args.seed, args.random_word)
        inputs = {"random_word": args.random_word, "seed": args.seed}
    if g.domain != "mukai":
        raise InputError("match-twist needs a 24x24 isometry of the Mukai lattice")
    inputs["word"] = list(g.word)
    inputs["integral"] = args.integral
    if args.integral:
        try:
            m = match_twist_integral(g, args.bound)
        except SearchExhausted as exc:
            return emit("match-twist", inputs, {"status": str(exc)}, {}, t0)
    else:
        m = match_twist(g)
    assertions = {f"certificate_x{k + 1}": {"pass": ok} for k, ok in enumerate(m.certificate)}
    return emit("match-twist", inputs, _match_dict(m), assertions, t0)


def cmd_brauer_enumerate(args, t0):
    lat = IntLattice(parse_int_matrix(load_json(args.gram), "gram"))
    rep = enumerate_brauer(lat, args.k, args.surjective, args.budget)
    inputs = {"gram": lat.gram, "k": args.k, "surjective": args.surjective}
    return emit("brauer enumerate", inputs, rep.as_dict(), {}, t0)


def cmd_brauer_order(args, t0):
    b = COUNTER_B if args.b == "counter" else parse_vector(load_json(args.b), what="B")
    if args.t_basis:
        s = surface_from_transcendental(parse_int_matrix(load_json(args.t_basis), "T basis"))
    else:
        s = surface_from_transcendental(xl.identity(K3_RANK))
    alpha = brauer_class(s, b)
    rep = order_disc_report(s, b)
    results = {"order": alpha.order, "values": alpha.values,
               "kernel_index": rep.kernel_index, "disc_T": rep.disc,
               "disc_kernel": rep.kernel_disc,
               "displayed_variant_holds": rep.displayed_variant_holds}
    assertions = {"index_formula": {"pass": rep.index_formula_holds}}
    if s.T.rank <= 4:
        results["kernel_basis"] = brauer_kernel(s, b).basis
    return emit("brauer order", {"B": b, "t_rank": s.T.rank}, results, assertions, t0)


def cmd_orientation(args, t0):
    g = load_isometry(args.isometry)
    if g.domain != "mukai":
        raise InputError("orientation needs an isometry of the Mukai lattice")
    src, dst = load_surface_spec(args.src), load_surface_spec(args.dst)
    try:
        verdict = orientation_verdict(g, src, dst, criterion=args.criterion)
    except PreconditionError as exc:
        raise PreconditionError(f"criterion inapplicable: {exc}") from exc
    results = {"preserving": verdict.direct}
    assertions = {}
    if args.criterion:
        results["criterion"] = verdict.criterion
        results["criterion_data"] = verdict.data
        assertions["criterion_agrees"] = {"pass": verdict.agree}
    inputs = {"isometry": args.isometry, "word": list(g.word), "criterion": args.criterion}
    return emit("orientation", inputs, results, assertions, t0)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="k3twist", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    li = sub.add_parser("lattice-invariants", help="rank, signature, discriminant data")
    src = li.add_mutually_exclusive_group(required=True)
    src.add_argument("--gram", help="JSON file or inline JSON integer matrix")
    src.add_argument("--builtin", choices=sorted(BUILTIN_LATTICES))
    li.set_defaults(func=cmd_lattice_invariants)

    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("subject", choices=sorted(VERIFY_SUBJECTS))
    v.add_argument("--n", type=int, default=5, help="number of primes (fm-partners)")
    v.add_argument("--trials", type=int, default=500, help="periods per pair (gap)")
    v.add_argument("--seed", type=int, default=7)
    v.add_argument("--count", type=int, default=None, help="instances for random suites")
    v.add_argument("--z-max", type=int, default=10 ** 4, help="sweep range (example-counter)")
    v.set_defaults(func=cmd_verify)

    mt = sub.add_parser("match-twist", help="match an isometry with a twisted period")
    g = mt.add_mutually_exclusive_group(required=True)
    g.add_argument("--isometry", help="JSON matrix (file or inline) or a builtin name")
    g.add_argument("--random-word", type=int, metavar="LEN")
    mt.add_argument("--seed", type=int)
    mt.add_argument("--integral", action="store_true")
    mt.add_argument("--bound", type=int, default=6)
    mt.set_defaults(func=cmd_match_twist)

    br = sub.add_parser("brauer", help="Brauer classes of a transcendental lattice")
    bsub = br.add_subparsers(dest="action", required=True)
    en = bsub.add_parser("enumerate")
    en.add_argument("--gram", required=True)
    en.add_argument("--k", type=int, required=True)
    en.add_argument("--surjective", action="store_true")
    en.add_argument("--budget", type=int, default=10 ** 6)
    en.set_defaults(func=cmd_brauer_enumerate)
    od = bsub.add_parser("order")
    od.add_argument("--b", required=True, help="22 rationals as JSON, or 'counter'")
    od.add_argument("--t-basis", help="rows of T in K3 coordinates (default: whole lattice)")
    od.set_defaults(func=cmd_brauer_order)

    ori = sub.add_parser("orientation", help="orientation test for an isometry")
    ori.add_argument("--isometry", required=True)
    ori.add_argument("--src", required=True, help="surface JSON with x1, x2 and optional B, omega")
    ori.add_argument("--dst", required=True)
    ori.add_argument("--criterion", action="store_true")
    ori.set_defaults(func=cmd_orientation)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        return args.func(args, t0)
    except NotAnIsometry as exc:
        print(f"error: not an isometry: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc} (required {exc.required})", file=sys.stderr)
        return EXIT_BUDGET
    except PreconditionError as exc:
        print(f"error: precondition: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
