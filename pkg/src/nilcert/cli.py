"""``nilcert`` command line.

JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 verification mismatch (the counterexample report is still printed),
2 usage or input-format error.

Randomized subcommands take ``--seed``; the default is ``DEFAULT_SEED``
(``selftest`` defaults to 7).  Same seed and inputs give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import format_poly
from .certificate import Certificate, check, make_certificate, verify_certificate
from .group_ring import FnTable, degree_of_function, dimension_subgroup
from .groups import CORPUS, GroupAxiomError, gamma, group_from_json, load_corpus
from .nilpotent import build_basis, coords, format_word, magnus_rho, mult_coords, parse_word
from .selftest import run_selftest
from .similarity import FiniteModel, invariant_order, similarity_report
from .weighted import format_weighted

DEFAULT_SEED = 0
SELFTEST_SEED = 7


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def load_group_arg(spec: str):
    """A group file path, or a bundled corpus name such as ``S3``."""
    if not Path(spec).exists():
        names = {c.lower(): c for c in CORPUS}
        if spec.lower() in names:
            return load_corpus(names[spec.lower()])
    data = _read_json(spec)
    try:
        return group_from_json(data)
    except GroupAxiomError as exc:
        raise InputError(f"{spec}: {exc}") from None
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{spec}: not a valid group description ({exc})") from None


def split_list(text: str) -> list[str]:
    """Split on commas that are not inside parentheses, so labels like ``(0,1,2)`` survive."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    last = "".join(cur).strip()
    if last or out:
        out.append(last)
    return [t for t in out if t != ""]


def resolve_element(G, token: str) -> int:
    # bare digits are indices; anything else is a label
    token = token.strip()
    if token.isdigit():
        k = int(token)
        if k >= G.order:
            raise InputError(f"element index {k} out of range 0..{G.order - 1}")
        return k
    if token in G.labels:
        return G.labels.index(token)
    raise InputError(f"unknown element {token!r}")


def parse_elements(G, text: str) -> list[int]:
    return [resolve_element(G, t) for t in split_list(text)]


def parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in split_list(text)]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def _pretty(obj, indent=0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return lines
    if isinstance(obj, list):
        lines = []
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                sub = _pretty(v, indent + 1)
                lines.append(f"{pad}- {sub[0].strip()}")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_inline(v)}")
        return lines
    return [pad + _inline(obj)]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    return str(v)


def emit(obj, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "pretty":
        out.write("\n".join(_pretty(obj)) + "\n")
    else:
        out.write(json.dumps(obj, sort_keys=True) + "\n")


def diag(msg: str):
    print(msg, file=sys.stderr)


# -- subcommands ---------------------------------------------------------------


def cmd_basis(args):
    basis = build_basis(args.n, args.r)
    if args.dump_algebra:
        for j, (e, u) in enumerate(zip(basis.entries, basis.rho), 1):
            diag(f"rho(b{j}) = {format_poly(u)}")
    out = basis.to_json()
    out["basis_stamp"] = basis.stamp()
    return out, 0


def cmd_collect(args):
    basis = build_basis(args.n, args.r)
    try:
        word = parse_word(args.word)
    except ValueError as exc:
        raise InputError(f"--word: {exc}") from None
    if any(abs(a) > args.n for a in word):
        raise InputError(f"--word uses a generator beyond Z{args.n}")
    if args.dump_algebra:
        diag(f"rho = {format_poly(magnus_rho(word, basis.ctx))}")
    return {"word": format_word(word), "coords": list(coords(word, basis)), "basis_stamp": basis.stamp()}, 0


def cmd_mult(args):
    basis = build_basis(args.n, args.r)
    x, y = parse_ints(args.x, "--x"), parse_ints(args.y, "--y")
    for name, v in (("--x", x), ("--y", y)):
        if len(v) != basis.q:
            raise InputError(f"{name}: expected {basis.q} coordinates, got {len(v)}")
    return {"coords": list(mult_coords(x, y, basis)), "basis_stamp": basis.stamp()}, 0


def cmd_cert(args):
    G = load_group_arg(args.group)
    gs = parse_elements(G, args.elements)
    cert = make_certificate(G, gs, args.r, seed=args.seed)
    out = cert.to_json()
    for j, (p, d) in enumerate(zip(cert.polys, cert.moduli), 1):
        diag(f"P{j}(x) = {format_weighted(p)}   in {d}Z")
    if args.out:
        Path(args.out).write_text(json.dumps(out, sort_keys=True, indent=2) + "\n")
    return out, 0


def _load_cert(path):
    data = _read_json(path)
    try:
        return Certificate.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a valid certificate ({exc})") from None


def cmd_check(args):
    cert = _load_cert(args.cert)
    x = parse_ints(args.x, "--x")
    if len(x) != cert.n:
        raise InputError(f"--x: certificate expects {cert.n} exponents, got {len(x)}")
    return {"member": check(cert, x)}, 0


def cmd_verify(args):
    cert = _load_cert(args.cert)
    G = load_group_arg(args.group)
    gs = parse_elements(G, args.elements)
    if len(gs) != cert.n:
        raise InputError(f"--elements: certificate expects {cert.n} elements, got {len(gs)}")
    report = verify_certificate(G, gs, cert.r, cert, trials=args.trials, seed=args.seed, box=args.box)
    if not report.ok:
        diag(f"{len(report.mismatches)} mismatches in {args.trials} trials")
    return report.to_json(), 0 if report.ok else 1


def _load_fn(path, G):
    data = _read_json(path)
    try:
        f = FnTable.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a valid function table ({exc})") from None
    if len(f.values) != G.order:
        raise InputError(f"{path}: {len(f.values)} values for a group of order {G.order}")
    return f


def cmd_degree(args):
    G = load_group_arg(args.group)
    f = _load_fn(args.fn, G)
    return {"degree": degree_of_function(G, f, args.rmax), "r_max": args.rmax}, 0


def cmd_dimsub(args):
    G = load_group_arg(args.group)
    D = dimension_subgroup(G, args.r)
    gam = gamma(G, args.r + 1)
    return {"r": args.r, "order": D.order, "elements": [G.labels[g] for g in D],
            "indices": list(D), "gamma_order": gam.order, "equals_gamma": D == gam}, 0


def cmd_similarity(args):
    G = load_group_arg(args.group)
    model = FiniteModel(G)
    if args.pair:
        a, b = (resolve_element(G, t) for t in args.pair)
        out = similarity_report(model, args.r, (a, b))
        out["pair"] = [G.labels[a], G.labels[b]]
    else:
        out = similarity_report(model, args.r)
        out["classes"] = [[G.labels[g] for g in c] for c in out["classes"]]
    return out, 0


def cmd_order(args):
    G = load_group_arg(args.group)
    f = _load_fn(args.fn, G)
    return invariant_order(f, FiniteModel(G), args.rmax), 0


def cmd_selftest(args):
    report = run_selftest(args.seed)
    timings = report.pop("_timings")
    for e in report["checks"]:
        diag(f"{'PASS' if e['ok'] else 'FAIL'} {e['name']} ({timings[e['name']]:.2f}s)")
    return report, 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilcert", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def nr(sp):
        sp.add_argument("--n", type=int, required=True, help="number of generators")
        sp.add_argument("--r", type=int, required=True, help="nilpotency class / truncation degree")

    s = sub.add_parser("basis", help="Mal'cev basis of the free nilpotent group")
    nr(s)
    s.add_argument("--dump-algebra", action="store_true")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("collect", help="coordinates of a word like 'Z1 Z2^-1'")
    nr(s)
    s.add_argument("--word", required=True)
    s.add_argument("--dump-algebra", action="store_true")
    s.set_defaults(func=cmd_collect)

    s = sub.add_parser("mult", help="multiply two coordinate vectors")
    nr(s)
    s.add_argument("--x", required=True)
    s.add_argument("--y", required=True)
    s.set_defaults(func=cmd_mult)

    s = sub.add_parser("cert", help="build a membership certificate")
    s.add_argument("--group", required=True, help="group JSON file or corpus name")
    s.add_argument("--elements", required=True, help="comma-separated indices or labels")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_cert)

    s = sub.add_parser("check", help="evaluate a certificate at an exponent vector")
    s.add_argument("--cert", required=True)
    s.add_argument("--x", required=True, help="comma-separated integers; use --x=-1,2 for negatives")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("verify", help="compare a certificate with brute force")
    s.add_argument("--cert", required=True)
    s.add_argument("--group", required=True)
    s.add_argument("--elements", required=True)
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.add_argument("--box", type=int, default=20)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("degree", help="degree of a function on the group")
    s.add_argument("--group", required=True)
    s.add_argument("--fn", required=True)
    s.add_argument("--rmax", type=int, default=4)
    s.set_defaults(func=cmd_degree)

    s = sub.add_parser("dimsub", help="dimension subgroup D_(r+1)")
    s.add_argument("--group", required=True)
    s.add_argument("--r", type=int, required=True)
    s.set_defaults(func=cmd_dimsub)

    s = sub.add_parser("similarity", help="r-similarity classes or a pair test")
    s.add_argument("--group", required=True)
    s.add_argument("--r", type=int, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--classes", action="store_true")
    g.add_argument("--pair", nargs=2, metavar=("A", "B"))
    s.set_defaults(func=cmd_similarity)

    s = sub.add_parser("order", help="order of an invariant given as a function table")
    s.add_argument("--group", required=True)
    s.add_argument("--fn", required=True)
    s.add_argument("--rmax", type=int, default=4)
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("selftest", help="run the invariant suite")
    s.add_argument("--seed", type=int, default=SELFTEST_SEED)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name in ("r", "n", "rmax", "trials"):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            diag(f"error: --{name} must be >= 0")
            return 2
    try:
        out, code = args.func(args)
    except InputError as exc:
        diag(f"error: {exc}")
        return 2
    emit(out, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
