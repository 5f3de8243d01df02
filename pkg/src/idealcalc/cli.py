"""Command-line driver.

Exit status: 0 the verdict holds (or the computation succeeded), 1 it fails
with a counterexample, 2 undecidable or not expressible, 3 usage or parse
error.  ``--format json`` prints one deterministic JSON object.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import is_dataclass
from fractions import Fraction

from . import ideals as I
from . import operators as O
from . import seqspace as S
from .corpus import ideal_corpus, seq_corpus, set_corpus
from .domains import NAT, format_point, parse_domain
from .dsl import (parse_ideal, parse_map, parse_op, parse_ord, parse_seq, parse_set, print_expr)
from .errors import (DomainMismatch, IdealCalcError, MembershipRequired, NoMetadata, NotClosed,
                     ParseError, Undecidable, ValidationError)
from .eventual import EPSet
from .ordinals import Ordinal
from .sets import from_ep, to_text

EXIT_HOLDS, EXIT_FAILS, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3


# -- serialization -----------------------------------------------------------

def to_json(x):
    """Plain JSON data for library values.

    Counts and indices stay integers; rationals print as exact "p/q" strings
    (limits and norms are always rationals, so "1" means the rational 1).
    """
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, float):
        return "-inf" if x == float("-inf") else str(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): to_json(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        if isinstance(x, tuple) and len(x) == 2 and all(isinstance(v, (int, Fraction, tuple))
                                                        for v in x):
            return format_point(x)
        return [to_json(v) for v in x]
    if isinstance(x, EPSet):
        return to_text(from_ep(x))
    if isinstance(x, S.VecSimpleSeq):
        return [{"value": [to_json(v) for v in c], "set": to_text(r)} for c, r in x.terms]
    if isinstance(x, O.BlockFamily):
        return {"columns": to_text(x.columns()), "norm": to_json(x.norm()),
                "block": [{"coeff": to_json(c), "trace": _cell_text(cell)}
                          for c, cell in x.cells]}
    if isinstance(x, O.Report):
        out = {"verdict": x.verdict, "trials": x.trials, "seed": x.seed,
               "laws": to_json(x.laws)}
        if x.counterexample is not None:
            out["counterexample"] = to_json(x.counterexample)
        if x.info:
            out["info"] = to_json(x.info)
        return out
    if isinstance(x, Ordinal):
        return str(x)
    if is_dataclass(x) or hasattr(x, "source"):
        return print_expr(x)
    return str(x)


def _cell_text(cell):
    parts = [] if cell.trace is None else ["trace " + to_text(cell.trace)]
    parts += ["graph(%dn+%d)" % g for g in cell.graphs]
    if cell.full:
        parts.append("full block")
    if cell.diag:
        parts.append("base point")
    return "; ".join(parts) or "empty"


def _render_text(report):
    lines = []
    for k in sorted(report):
        v = report[k]
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        lines.append("%s: %s" % (k, v))
    return "\n".join(lines)


# -- verbs -------------------------------------------------------------------

def _domain(args):
    return parse_domain(args.domain) if args.domain else None


def _ideal(text, args):
    return parse_ideal(text, _domain(args))


def _verdict(v, report):
    report["verdict"] = "holds" if v.holds else "fails"
    if v.witness is not None:
        report["witness"] = to_json(v.witness)
    return (EXIT_HOLDS if v.holds else EXIT_FAILS), report


def cmd_member(args):
    i = _ideal(args.ideal, args)
    a = parse_set(args.set, i.domain)
    return _verdict(I.member(i, a), {"ideal": print_expr(i), "set": to_text(a)})


def cmd_in_c0(args):
    i = _ideal(args.ideal, args)
    x = parse_seq(args.seq, i.domain)
    return _verdict(S.in_c0I(i, x), {"ideal": print_expr(i), "seq": print_expr(x)})


def cmd_limsup(args):
    i = _ideal(args.ideal, args)
    x = parse_seq(args.seq, i.domain)
    return EXIT_HOLDS, {"ideal": print_expr(i), "seq": print_expr(x),
                        "limsup": to_json(S.ideal_limsup(i, x))}


def cmd_qnorm(args):
    i = _ideal(args.ideal, args)
    x = parse_seq(args.seq, i.domain)
    return EXIT_HOLDS, {"ideal": print_expr(i), "seq": print_expr(x),
                        "qnorm": to_json(S.quotient_norm(i, x))}


def cmd_norm(args):
    x = parse_seq(args.seq, _domain(args))
    return EXIT_HOLDS, {"seq": print_expr(x), "norm": to_json(S.sup_norm(x))}


def cmd_equiv(args):
    i = _ideal(args.left, args)
    j = parse_ideal(args.right, i.domain)
    r = I.equivalent(i, j)
    report = {"left": print_expr(i), "right": print_expr(j), "verdict": r.kind}
    if r.witness is not None:
        report["witness"] = to_json(r.witness)
    code = {I.EQUAL: EXIT_HOLDS, I.DISTINGUISHED: EXIT_FAILS, I.UNKNOWN: EXIT_UNDECIDED}[r.kind]
    return code, report


def cmd_perp(args):
    i = _ideal(args.ideal, args)
    return EXIT_HOLDS, {"ideal": print_expr(i),
                        "perp": print_expr(I.perp_normalize(I.Perp(i)))}


def cmd_catalog(args):
    alpha = parse_ord(args.ordinal)
    p, q = I.catalog(alpha)
    return EXIT_HOLDS, {"ordinal": str(alpha), "domain": str(p.domain),
                        "P": print_expr(p), "Q": print_expr(q),
                        "duality": I.perp_normalize(I.Perp(I.CatalogP(alpha))) == I.CatalogQ(alpha)}


def cmd_classify(args):
    i = _ideal(args.ideal, args)
    report = {"ideal": print_expr(i)}
    try:
        meta = I.metadata(i)
    except NoMetadata:
        meta = None
    decided = {}
    for name, fn in (("frechet", I.is_frechet), ("tall", I.is_tall)):
        try:
            decided[name] = fn(i).holds
        except (Undecidable, NotClosed):
            decided[name] = None
    if meta is None:
        report.update({k: v for k, v in decided.items()})
        report["metadata"] = None
        code = EXIT_UNDECIDED if None in decided.values() else EXIT_HOLDS
        return code, report
    for k, v in meta.items():
        report[k] = v["value"]
    report["metadata"] = to_json(meta)
    report["decided"] = decided
    return EXIT_HOLDS, report


def cmd_decompose(args):
    i = _ideal(args.left, args)
    j = parse_ideal(args.right, i.domain)
    x = parse_seq(args.seq, i.domain)
    y, z = S.decompose_join(i, j, x)
    return EXIT_HOLDS, {"seq": print_expr(x), "y": print_expr(y), "z": print_expr(z),
                        "recombines": S.seq_equal(S.combine(S.ADD, y, z), x)}


def cmd_verify_op(args):
    op = parse_op(args.op, _domain(args))
    i = parse_ideal(args.left, op.input_domain)
    j = parse_ideal(args.right, op.output_domain)
    r = O.check_isometry_lattice(op, i, j, trials=args.trials, seed=args.seed)
    rep = to_json(r)
    rep["op"] = print_expr(op)
    return (EXIT_HOLDS if r.passed else EXIT_FAILS), rep


def cmd_check_katetov(args):
    h = parse_map(args.map)
    i = parse_ideal(args.left, h.target)
    j = parse_ideal(args.right, h.source)
    r = O.check_katetov(h, i, j, seed=args.seed)
    rep = to_json(r)
    rep["map"] = print_expr(h)
    if r.counterexample is not None:
        rep["witness"] = to_text(r.counterexample["set"])
    return (EXIT_HOLDS if r.passed else EXIT_FAILS), rep


def cmd_iso_directsum(args):
    x = parse_seq(args.seq, _domain(args))
    fams = O.directsum_iso(x)
    back = O.directsum_inverse(x.domain, fams)
    return EXIT_HOLDS, {"seq": print_expr(x), "blocks": to_json(fams),
                        "norm": to_json(S.sup_norm(x)),
                        "block_norm_sup": to_json(O.block_norm_sup(fams)),
                        "round_trip": S.seq_equal(back, x)}


def cmd_iso_omegaperp(args):
    i = _ideal(args.ideal, args)
    x = parse_seq(args.seq, i.domain)
    res = O.omegaperp_iso(x, i)
    return EXIT_HOLDS, {"seq": print_expr(x), "blocks": to_json(list(res.families)),
                        "N": res.bound, "certified": res.certified}


def cmd_fubini_map(args):
    outer = parse_ideal(args.outer, NAT)
    x = parse_seq(args.seq, _domain(args))
    inner = parse_ideal(args.inner, x.domain.inner if hasattr(x.domain, "inner") else None)
    res = O.fubini_quotient(x, outer, inner)
    return EXIT_HOLDS, {"seq": print_expr(x), "q": print_expr(res.quotient),
                        "kernel": res.kernel, "q_in_c0": res.in_outer}


def cmd_tensor_norm(args):
    if len(args.pairs) % 2 or not args.pairs:
        raise ValidationError("tensor-norm takes SEQ VECTOR pairs")
    dom = _domain(args)
    u = []
    for k in range(0, len(args.pairs), 2):
        x = parse_seq(args.pairs[k], dom)
        dom = x.domain
        try:
            vec = tuple(Fraction(v) for v in args.pairs[k + 1].split(","))
        except ValueError as e:
            raise ParseError("bad vector %r: %s" % (args.pairs[k + 1], e)) from None
        u.append((x, vec))
    norm = O.tensor_injective_norm(u)
    emb = O.tensor_embed(u)
    return EXIT_HOLDS, {"norm": to_json(norm), "embedded_sup_norm": to_json(S.sup_norm(emb)),
                        "embedded": to_json(emb)}


def cmd_corpus(args):
    dom = _domain(args) or NAT
    if args.kind == "set":
        items = [to_text(a) for a in set_corpus(dom)]
    elif args.kind == "ideal":
        items = [print_expr(i) for i in ideal_corpus(dom)]
    else:
        items = [print_expr(x) for x in seq_corpus(dom, seed=args.seed)]
    if args.limit is not None:
        items = items[:args.limit]
    return EXIT_HOLDS, {"domain": str(dom), "kind": args.kind, "items": items}


# -- argument parsing --------------------------------------------------------

class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _seed(text):
    return int(text, 0)


def _add_options(p, defaults):
    def opt(flag, **kw):
        p.add_argument(flag, default=defaults[flag] if defaults else argparse.SUPPRESS, **kw)
    opt("--seed", type=_seed, help="64-bit seed (IDEALCALC_SEED overrides the default)")
    opt("--trials", type=int)
    opt("--prefix", type=int, help="brute-force prefix length")
    opt("--format", choices=("text", "json"))
    opt("--domain", help="nat, rat, nat*nat, sigma[w], ...")


def build_parser():
    env = os.environ.get("IDEALCALC_SEED")
    defaults = {"--seed": _seed(env) if env else O.DEFAULT_SEED, "--trials": 500,
                "--prefix": 1000, "--format": "text", "--domain": None}
    p = _Parser(prog="idealcalc", description="Exact calculator for ideals on countable sets "
                                               "and their c0 sequence spaces.")
    _add_options(p, defaults)
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, *params, **extra):
        sp = sub.add_parser(name)
        _add_options(sp, None)
        for prm in params:
            sp.add_argument(prm)
        for k, kw in extra.items():
            sp.add_argument(k, **kw)
        sp.set_defaults(fn=fn)
        return sp

    verb("member", cmd_member, "ideal", "set")
    verb("in-c0", cmd_in_c0, "ideal", "seq")
    verb("limsup", cmd_limsup, "ideal", "seq")
    verb("qnorm", cmd_qnorm, "ideal", "seq")
    verb("norm", cmd_norm, "seq")
    verb("equiv", cmd_equiv, "left", "right")
    verb("perp", cmd_perp, "ideal")
    verb("catalog", cmd_catalog, "ordinal")
    verb("classify", cmd_classify, "ideal")
    verb("decompose", cmd_decompose, "left", "right", "seq")
    verb("verify-op", cmd_verify_op, "op", "left", "right")
    verb("check-katetov", cmd_check_katetov, "map", "left", "right")
    verb("iso-directsum", cmd_iso_directsum, "seq")
    verb("iso-omegaperp", cmd_iso_omegaperp, "ideal", "seq")
    verb("fubini-map", cmd_fubini_map, "outer", "inner", "seq")
    verb("tensor-norm", cmd_tensor_norm, pairs={"nargs": "+"})
    verb("corpus", cmd_corpus, "kind", limit={"nargs": "?", "type": int, "default": None})
    return p


def run(argv):
    """Run a command; returns (exit code, report dict, format)."""
    parser = build_parser()
    fmt = "json" if "--format=json" in argv or any(
        a == "--format" and b == "json" for a, b in zip(argv, argv[1:])) else "text"
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        return EXIT_USAGE, {"error": "usage", "message": str(e)}, fmt
    if args.verb == "corpus" and args.kind not in ("set", "ideal", "seq"):
        return EXIT_USAGE, {"error": "usage", "message": "corpus kind is set, ideal or seq"}, fmt
    try:
        code, report = args.fn(args)
    except (ParseError, DomainMismatch, ValidationError) as e:
        code, report = EXIT_USAGE, {"error": type(e).__name__, "message": str(e)}
    except (Undecidable, NotClosed, NoMetadata) as e:
        code, report = EXIT_UNDECIDED, {"verdict": "undecided", "error": type(e).__name__,
                                        "message": str(e)}
    except MembershipRequired as e:
        code, report = EXIT_FAILS, {"verdict": "fails", "error": type(e).__name__,
                                    "message": str(e)}
    except IdealCalcError as e:
        code, report = EXIT_USAGE, {"error": type(e).__name__, "message": str(e)}
    report.setdefault("verb", args.verb)
    return code, report, args.format


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    code, report, fmt = run(argv)
    if fmt == "json":
        out = json.dumps(report, sort_keys=True)
    else:
        out = _render_text(report)
    stream = sys.stderr if "error" in report and code == EXIT_USAGE else sys.stdout
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
