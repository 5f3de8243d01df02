"""Textual syntax for sets, ideals, simple sequences, index maps and operators.

Parsing runs in two passes.  The first pass is a recursive-descent parser
producing an untyped tree; the second assigns domains top down, starting
from the caller's domain (or the one inferred from the tree) and checking
every constructor against it.  Printing uses the canonical text forms of the
value modules, so ``parse(print(x), domain=x.domain)`` rebuilds ``x``.

Grammar (whitespace is ignored)::

    set   := "fin{" points "}" | "cofin{" nats "}" | "ap(" nat "," nat ")"
           | "cols(" set "," set ")" | "patch{" nat ":" set ("," ...)* "}"
           | "graph(" affine "," set ")" | "full(" set ")" | "diag(" set ")"
           | "rfin{" rats "}" | ("asc" | "desc") "(" rat "," rat ["," nat "," nat] ")"
           | "osum[" "(" rat "," rat ")" ":" set ("," ...)* "]" | "U[" set ("," set)* "]"
    ideal := "FIN" | "POW" | "WO" | "WOREV" | ("P" | "Q" | "BLOCKSUM") "[" ord "]"
           | "JOIN(" ideal "," ideal ")" | "SUM(" ideal ")" | "DSUM(" ideal ("," ideal)* ")"
           | "FUBINI(" ideal "," ideal ")" | "PERP(" ideal ")" | "RESTRICT(" ideal "," set ")"
    seq   := "seq[" [term ("+" term)*] "]"      term := rat "*chi(" set ")"
    map   := "id" ["[" dom "]"] | "perm(" nat ">" nat ("," ...)* ")" | "encode" | "decode"
           | "embed(" nat ")" ["[" dom "]"] | "negate" | "compose(" map ("," map)* ")"
    op    := map | "signed(" map "," set ")" | "extend(" set ")"
    ord   := CNF terms "w^k*c" joined by "+", highest exponent first
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import ideals as I
from . import maps as M
from .domains import NAT, RAT, Nat, Prod, Rat, Sigma, block_domain, catalog_domain, in_domain, \
    is_blocked, parse_domain
from .errors import DomainMismatch, IdealCalcError, ParseError
from .operators import IndexOp, RestrictionOp
from .ordinals import parse_ordinal
from .seqspace import SimpleSeq, seq_text
from .sets import (AP, AscSeq, BlockDiag, BlockFull, CoFin, Cols, DescSeq, FinPoints, FinRat,
                   FinSet, Graph, OrdSum, Patch, Union, normalize, to_text)

__all__ = ["parse", "parse_set", "parse_ideal", "parse_seq", "parse_map", "parse_op",
           "parse_ord", "print_expr", "op_text"]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>\d+)|(?P<sym>[{}()\[\],:+*/\-^>]))")

IDEAL_WORDS = {"FIN", "POW", "WO", "WOREV", "P", "Q", "BLOCKSUM", "JOIN", "SUM", "DSUM",
               "FUBINI", "PERP", "RESTRICT"}
SET_WORDS = {"fin", "cofin", "ap", "cols", "patch", "graph", "full", "diag", "rfin", "asc",
             "desc", "osum", "U"}
MAP_WORDS = {"id", "perm", "encode", "decode", "embed", "negate", "compose"}
OP_WORDS = MAP_WORDS | {"signed", "extend"}


@dataclass(frozen=True)
class Token:
    kind: str        # "name" | "int" | "sym" | "end"
    text: str
    line: int
    column: int


def tokenize(text):
    out = []
    pos, line, line_start = 0, 1, 0
    while True:
        m = _TOKEN.match(text, pos)
        skipped = text[pos:m.start(m.lastgroup)] if m and m.lastgroup else text[pos:]
        for k, ch in enumerate(skipped):
            if ch == "\n":
                line, line_start = line + 1, pos + k + 1
        if not m or not m.lastgroup:
            rest = text[pos:]
            if rest.strip():
                offset = pos + len(rest) - len(rest.lstrip())
                raise ParseError("unexpected character %r" % text[offset], line,
                                 offset - line_start + 1)
            out.append(Token("end", "", line, len(text) - line_start + 1))
            return out
        start = m.start(m.lastgroup)
        out.append(Token(m.lastgroup, m.group(m.lastgroup), line, start - line_start + 1))
        pos = m.end()


# -- untyped trees -----------------------------------------------------------

@dataclass(frozen=True)
class Node:
    tag: str
    args: tuple
    tok: Token


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def cur(self):
        return self.toks[self.i]

    def error(self, message, expected=(), tok=None):
        tok = tok or self.cur
        raise ParseError(message, tok.line, tok.column, sorted(expected))

    def at(self, text):
        return self.cur.kind != "end" and self.cur.text == text

    def take(self, text=None, kind=None):
        tok = self.cur
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind) \
                or tok.kind == "end" and text is not None:
            want = [repr(text)] if text is not None else [kind]
            found = "end of input" if tok.kind == "end" else repr(tok.text)
            self.error("unexpected %s" % found, want)
        self.i += 1
        return tok

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def finish(self):
        if self.cur.kind != "end":
            self.error("unexpected %r after the expression" % self.cur.text, ["end of input"])

    def comma_list(self, item, close):
        out = []
        if self.accept(close):
            return out
        while True:
            out.append(item())
            if self.accept(close):
                return out
            if not self.at(","):
                self.error("unexpected %r" % self.cur.text, [repr(","), repr(close)])
            self.take(",")

    # numbers
    def nat(self):
        return int(self.take(kind="int").text)

    def rational(self):
        neg = self.accept("-")
        num = self.nat()
        q = Fraction(num)
        if self.accept("/"):
            tok = self.cur
            den = self.nat()
            if den == 0:
                self.error("zero denominator", tok=tok)
            q = Fraction(num, den)
        return -q if neg else q

    def point(self):
        if self.accept("("):
            first = self.point()
            self.take(",")
            second = self.point()
            self.take(")")
            return (first, second)
        return self.rational()

    def bracket_text(self):
        """Raw text up to the matching ']' (after '[' has been taken)."""
        depth, start = 1, self.cur
        parts = []
        while True:
            tok = self.cur
            if tok.kind == "end":
                self.error("unterminated '['", ["']'"])
            self.i += 1
            if tok.text == "[":
                depth += 1
            elif tok.text == "]":
                depth -= 1
                if depth == 0:
                    return "".join(parts), start
            parts.append(tok.text)

    def ordinal(self):
        text, tok = self.bracket_text()
        try:
            return parse_ordinal(text)
        except IdealCalcError as e:
            raise ParseError("bad ordinal %r: %s" % (text, e), tok.line, tok.column,
                             ["w^k*c terms"]) from None

    def domain(self):
        text, tok = self.bracket_text()
        try:
            return parse_domain(text)
        except IdealCalcError as e:
            raise ParseError("bad domain %r: %s" % (text, e), tok.line, tok.column,
                             ["nat", "rat", "nat*D", "sigma[ord]"]) from None

    def affine(self):
        """``a n + b`` written as n, 2n, 2n+1, n+3 or a constant."""
        a, b = 0, 0
        if self.cur.kind == "int":
            k = self.nat()
            if self.accept("n"):
                a = k
            else:
                return 0, k
        else:
            self.take("n")
            a = 1
        if self.accept("+"):
            b = self.nat()
        return a, b

    # sets
    def set_expr(self):
        tok = self.cur
        if tok.kind != "name" or tok.text not in SET_WORDS:
            self.error("expected a set", [repr(w) for w in SET_WORDS])
        self.i += 1
        w = tok.text
        if w in ("fin", "cofin", "rfin"):
            self.take("{")
            item = self.nat if w == "cofin" else (self.rational if w == "rfin" else self.point)
            return Node(w, tuple(self.comma_list(item, "}")), tok)
        if w == "ap":
            self.take("(")
            a = self.nat()
            self.take(",")
            b = self.nat()
            self.take(")")
            return Node(w, (a, b), tok)
        if w == "cols":
            self.take("(")
            s = self.set_expr()
            self.take(",")
            t = self.set_expr()
            self.take(")")
            return Node(w, (s, t), tok)
        if w == "patch":
            self.take("{")

            def entry():
                n = self.nat()
                self.take(":")
                return n, self.set_expr()
            return Node(w, tuple(self.comma_list(entry, "}")), tok)
        if w == "graph":
            self.take("(")
            g = self.affine()
            self.take(",")
            s = self.set_expr()
            self.take(")")
            return Node(w, (g, s), tok)
        if w in ("full", "diag"):
            self.take("(")
            s = self.set_expr()
            self.take(")")
            return Node(w, (s,), tok)
        if w in ("asc", "desc"):
            self.take("(")
            vals = [self.rational()]
            self.take(",")
            vals.append(self.rational())
            if self.accept(","):
                vals.append(self.nat())
                self.take(",")
                vals.append(self.nat())
            self.take(")")
            return Node(w, tuple(vals), tok)
        if w == "osum":
            self.take("[")

            def part():
                self.take("(")
                lo = self.rational()
                self.take(",")
                hi = self.rational()
                self.take(")")
                self.take(":")
                return lo, hi, self.set_expr()
            return Node(w, tuple(self.comma_list(part, "]")), tok)
        self.take("[")
        return Node("U", tuple(self.comma_list(self.set_expr, "]")), tok)

    # ideals
    def ideal_expr(self):
        tok = self.cur
        if tok.kind != "name" or tok.text not in IDEAL_WORDS:
            self.error("expected an ideal", [repr(w) for w in IDEAL_WORDS])
        self.i += 1
        w = tok.text
        if w in ("FIN", "POW", "WO", "WOREV"):
            return Node(w, (), tok)
        if w in ("P", "Q", "BLOCKSUM"):
            self.take("[")
            return Node(w, (self.ordinal(),), tok)
        self.take("(")
        if w in ("SUM", "PERP"):
            args = (self.ideal_expr(),)
        elif w in ("JOIN", "FUBINI"):
            a = self.ideal_expr()
            self.take(",")
            args = (a, self.ideal_expr())
        elif w == "RESTRICT":
            a = self.ideal_expr()
            self.take(",")
            args = (a, self.set_expr())
        else:  # DSUM
            args = [self.ideal_expr()]
            while self.accept(","):
                args.append(self.ideal_expr())
            args = tuple(args)
        self.take(")")
        return Node(w, args, tok)

    # sequences
    def seq_expr(self):
        tok = self.take("seq")
        self.take("[")
        terms = []
        if not self.accept("]"):
            while True:
                c = self.rational()
                self.take("*")
                self.take("chi")
                self.take("(")
                terms.append((c, self.set_expr()))
                self.take(")")
                if self.accept("]"):
                    break
                if not self.at("+"):
                    self.error("unexpected %r" % self.cur.text, ["'+'", "']'"])
                self.take("+")
        return Node("seq", tuple(terms), tok)

    # maps and operators
    def map_expr(self):
        tok = self.cur
        if tok.kind != "name" or tok.text not in MAP_WORDS:
            self.error("expected an index map", [repr(w) for w in MAP_WORDS])
        self.i += 1
        w = tok.text
        if w in ("encode", "decode", "negate"):
            return Node(w, (), tok)
        if w == "id":
            dom = self.domain() if self.accept("[") else NAT
            return Node(w, (dom,), tok)
        if w == "embed":
            self.take("(")
            n = self.nat()
            self.take(")")
            dom = self.domain() if self.accept("[") else NAT
            return Node(w, (n, dom), tok)
        self.take("(")
        if w == "perm":
            def swap():
                i = self.nat()
                self.take(">")
                return i, self.nat()
            return Node(w, tuple(self.comma_list(swap, ")")), tok)
        maps = [self.map_expr()]
        while self.accept(","):
            maps.append(self.map_expr())
        self.take(")")
        return Node(w, tuple(maps), tok)

    def op_expr(self):
        tok = self.cur
        if self.accept("signed"):
            self.take("(")
            h = self.map_expr()
            self.take(",")
            s = self.set_expr()
            self.take(")")
            return Node("signed", (h, s), tok)
        if self.accept("extend"):
            self.take("(")
            s = self.set_expr()
            self.take(")")
            return Node("extend", (s,), tok)
        return self.map_expr()


# -- domain assignment -------------------------------------------------------

def _fail(node, message):
    raise ParseError(message, node.tok.line, node.tok.column)


def _point_domain(p):
    if isinstance(p, tuple):
        return Prod(_point_domain(p[1]))
    if p.denominator == 1 and p >= 0:
        return NAT
    return RAT


def infer_set(node):
    """Domain suggested by the shape of an untyped set, or None."""
    w = node.tag
    if w == "fin":
        return _point_domain(node.args[0]) if node.args else None
    if w in ("cofin", "ap"):
        return NAT
    if w in ("rfin", "asc", "desc", "osum"):
        return RAT
    if w == "cols":
        return Prod(infer_set(node.args[1]) or NAT)
    if w == "patch":
        inner = next((d for d in (infer_set(t) for _, t in node.args) if d), NAT)
        return Prod(inner)
    if w == "graph":
        return Prod(NAT)
    if w in ("full", "diag"):
        return None
    return next((d for d in map(infer_set, node.args) if d), None)


def _nat_point(node, p):
    if isinstance(p, tuple) or p.denominator != 1 or p < 0:
        _fail(node, "%s is not a natural number" % (p,))
    return int(p)


def _typed_point(node, p, domain):
    if isinstance(domain, Nat):
        return _nat_point(node, p)
    if isinstance(domain, Rat):
        if isinstance(p, tuple):
            _fail(node, "a pair is not a rational")
        return p
    if not isinstance(p, tuple):
        _fail(node, "points of %s are pairs" % domain)
    n = _nat_point(node, p[0])
    return (n, _typed_point(node, p[1], block_domain(domain, n)))


def build_set(node, domain):
    w, a = node.tag, node.args

    def need(ok, what):
        if not ok:
            _fail(node, "%s does not denote a set over %s (expects %s)" % (w, domain, what))
    try:
        if w == "fin":
            if isinstance(domain, Rat):
                return FinRat(tuple(sorted({_typed_point(node, p, domain) for p in a})))
            pts = tuple(sorted({_typed_point(node, p, domain) for p in a},
                               key=lambda p: repr(p) if isinstance(p, tuple) else (p,)))
            if isinstance(domain, Nat):
                return FinSet(pts)
            from .sets import points_set
            return points_set(domain, pts)
        if w == "cofin":
            need(isinstance(domain, Nat), "nat")
            return CoFin(tuple(sorted(set(a))))
        if w == "ap":
            need(isinstance(domain, Nat), "nat")
            if a[1] < 1:
                _fail(node, "ap needs a positive stride")
            return AP(a[0], a[1])
        if w == "cols":
            need(isinstance(domain, Prod), "nat*D")
            return Cols(build_set(a[0], NAT), build_set(a[1], domain.inner))
        if w == "patch":
            need(is_blocked(domain), "a blocked domain")
            return Patch(domain, tuple((n, build_set(t, block_domain(domain, n))) for n, t in a))
        if w == "graph":
            need(domain == Prod(NAT), "nat*nat")
            (ga, gb), s = a
            return Graph(ga, gb, build_set(s, NAT))
        if w in ("full", "diag"):
            need(isinstance(domain, Sigma), "sigma[ord]")
            cls = BlockFull if w == "full" else BlockDiag
            return cls(domain, build_set(a[0], NAT))
        if w == "rfin":
            need(isinstance(domain, Rat), "rat")
            return FinRat(tuple(sorted(set(a))))
        if w in ("asc", "desc"):
            need(isinstance(domain, Rat), "rat")
            if a[1] <= 0:
                _fail(node, "sequence scale must be positive")
            if len(a) == 4 and (a[2] < 1 or a[3] < 1):
                _fail(node, "sequence denominators need positive coefficients")
            return (AscSeq if w == "asc" else DescSeq)(*a)
        if w == "osum":
            need(isinstance(domain, Rat), "rat")
            return OrdSum(tuple((lo, hi, build_set(s, RAT)) for lo, hi, s in a))
        if not a:
            _fail(node, "U[] needs at least one part")
        return Union(domain, tuple(build_set(p, domain) for p in a))
    except (ValueError, DomainMismatch) as e:
        _fail(node, str(e))


def infer_ideal(node):
    w, a = node.tag, node.args
    if w in ("FIN", "POW"):
        return None
    if w in ("WO", "WOREV"):
        return RAT
    if w in ("P", "Q"):
        return catalog_domain(a[0])
    if w == "BLOCKSUM":
        return Sigma(a[0]) if a[0].is_limit else None
    if w == "JOIN":
        return infer_ideal(a[0]) or infer_ideal(a[1])
    if w in ("SUM", "DSUM"):
        return Prod(next((d for d in map(infer_ideal, a) if d), NAT))
    if w == "FUBINI":
        return Prod(infer_ideal(a[1]) or NAT)
    if w == "PERP":
        return infer_ideal(a[0])
    return infer_ideal(a[0]) or infer_set(a[1])


def build_ideal(node, domain):
    w, a = node.tag, node.args

    def need(ok, what):
        if not ok:
            _fail(node, "%s does not denote an ideal over %s (expects %s)" % (w, domain, what))
    try:
        if w == "FIN":
            return I.Fin(domain)
        if w == "POW":
            return I.Pow(domain)
        if w in ("WO", "WOREV"):
            need(isinstance(domain, Rat), "rat")
            return I.WO() if w == "WO" else I.WORev()
        if w in ("P", "Q"):
            need(catalog_domain(a[0]) == domain, str(catalog_domain(a[0])))
            return I.CatalogP(a[0]) if w == "P" else I.CatalogQ(a[0])
        if w == "BLOCKSUM":
            need(a[0].is_limit and Sigma(a[0]) == domain, "sigma[%s] with a limit index" % a[0])
            return I.LimitSum(a[0])
        if w == "JOIN":
            return I.Join(build_ideal(a[0], domain), build_ideal(a[1], domain))
        if w == "SUM":
            need(isinstance(domain, Prod), "nat*D")
            return I.OmegaSum(build_ideal(a[0], domain.inner))
        if w == "DSUM":
            need(isinstance(domain, Prod), "nat*D")
            blocks = [build_ideal(x, domain.inner) for x in a]
            return I.DirectSumList(tuple(blocks[:-1]), blocks[-1])
        if w == "FUBINI":
            need(isinstance(domain, Prod), "nat*D")
            return I.Fubini(build_ideal(a[0], NAT), build_ideal(a[1], domain.inner))
        if w == "PERP":
            return I.Perp(build_ideal(a[0], domain))
        return I.Restrict(build_ideal(a[0], domain), build_set(a[1], domain))
    except (ValueError, DomainMismatch) as e:
        _fail(node, str(e))


def build_map(node):
    w, a = node.tag, node.args
    try:
        if w == "id":
            return M.Identity(a[0])
        if w == "perm":
            return M.FinPerm(tuple(a))
        if w == "encode":
            return M.PairEncode()
        if w == "decode":
            return M.PairDecode()
        if w == "embed":
            return M.BlockEmbed(a[0], a[1])
        if w == "negate":
            return M.NegateRat()
        return M.Compose(tuple(build_map(m) for m in a))
    except (ValueError, DomainMismatch) as e:
        _fail(node, str(e))


# -- entry points ------------------------------------------------------------

def _run(text, method):
    p = _Parser(text)
    node = getattr(p, method)()
    p.finish()
    return node


def parse_set(text, domain=None):
    node = _run(text, "set_expr")
    domain = domain or infer_set(node)
    if domain is None:
        _fail(node, "cannot tell the domain of this set; pass one explicitly")
    return normalize(build_set(node, domain))


def parse_ideal(text, domain=None):
    node = _run(text, "ideal_expr")
    return build_ideal(node, domain or infer_ideal(node) or NAT)


def parse_seq(text, domain=None):
    node = _run(text, "seq_expr")
    if domain is None:
        domain = next((d for d in (infer_set(s) for _, s in node.args) if d), NAT)
    terms = tuple((c, build_set(s, domain)) for c, s in node.args)
    return SimpleSeq(domain, terms)


def parse_map(text):
    return build_map(_run(text, "map_expr"))


def parse_op(text, domain=None):
    node = _run(text, "op_expr")
    if node.tag == "signed":
        h = build_map(node.args[0])
        return IndexOp(h, normalize(build_set(node.args[1], h.source)))
    if node.tag == "extend":
        s = node.args[0]
        d = domain or infer_set(s)
        if d is None:
            _fail(s, "cannot tell the domain of this set; pass one explicitly")
        return RestrictionOp(normalize(build_set(s, d)))
    return IndexOp(build_map(node))


def parse_ord(text):
    return parse_ordinal(text)


def parse(text, domain=None):
    """Parse any expression, dispatching on its leading word."""
    toks = tokenize(text)
    head = toks[0]
    if head.kind == "name" and head.text in IDEAL_WORDS:
        return parse_ideal(text, domain)
    if head.kind == "name" and head.text == "seq":
        return parse_seq(text, domain)
    if head.kind == "name" and head.text in SET_WORDS:
        return parse_set(text, domain)
    if head.kind == "name" and head.text in OP_WORDS:
        op = parse_op(text, domain)
        if isinstance(op, IndexOp) and op.negative is None:
            return op.map
        return op
    if head.kind == "int" or head.text == "w":
        return parse_ordinal(text)
    raise ParseError("unknown expression start %r" % head.text, head.line, head.column,
                     ["a set", "an ideal", "seq[", "a map", "an ordinal"])


def op_text(op):
    if isinstance(op, RestrictionOp):
        return "extend(%s)" % to_text(op.base)
    if op.negative is None:
        return M.map_text(op.map)
    return "signed(%s,%s)" % (M.map_text(op.map), to_text(op.negative))


def print_expr(x):
    from .ordinals import Ordinal
    if isinstance(x, SimpleSeq):
        return seq_text(x)
    if isinstance(x, (IndexOp, RestrictionOp)):
        return op_text(x)
    if isinstance(x, Ordinal):
        return str(x)
    if hasattr(x, "source") and hasattr(x, "target"):
        return M.map_text(x)
    try:
        return I.ideal_text(x)
    except TypeError:
        return to_text(x)
