"""Ordinals below omega^omega in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents and positive coefficients, so that
``w^2*3+w+1`` is ``((2, 3), (1, 1), (0, 1))`` and zero is ``()``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

from .errors import OrdinalOutOfRange, ParseError
from ._hashing import memo_hash


@total_ordering
@memo_hash
@dataclass(frozen=True)
class Ordinal:
    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((int(e), int(c)) for e, c in self.terms)
        prev = None
        for e, c in terms:
            if e < 0 or c < 1:
                raise OrdinalOutOfRange("bad CNF term w^%d*%d" % (e, c))
            if prev is not None and e >= prev:
                raise OrdinalOutOfRange("exponents must strictly decrease")
            prev = e
        object.__setattr__(self, "terms", terms)

    @classmethod
    def of(cls, n):
        return cls(((0, n),)) if n else cls(())

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_successor(self):
        return bool(self.terms) and self.terms[-1][0] == 0

    @property
    def is_limit(self):
        return bool(self.terms) and self.terms[-1][0] > 0

    def succ(self):
        if self.is_successor:
            e, c = self.terms[-1]
            return Ordinal(self.terms[:-1] + ((0, c + 1),))
        return Ordinal(self.terms + ((0, 1),))

    def pred(self):
        if not self.is_successor:
            raise OrdinalOutOfRange("%s has no predecessor" % self)
        e, c = self.terms[-1]
        head = self.terms[:-1]
        return Ordinal(head + ((0, c - 1),) if c > 1 else head)

    def fundamental(self, n):
        """The n-th term of the frozen fundamental sequence of a limit.

        For ``alpha = beta + w^(k+1)`` the sequence is ``beta + w^k*(n+1)``.
        """
        if not self.is_limit:
            raise OrdinalOutOfRange("%s is not a limit ordinal" % self)
        e, c = self.terms[-1]
        head = self.terms[:-1] + (((e, c - 1),) if c > 1 else ())
        return Ordinal(head + ((e - 1, n + 1),))

    def _key(self):
        return self.terms

    def __lt__(self, other):
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return e1 < e2
            if c1 != c2:
                return c1 < c2
        return len(self.terms) < len(other.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms:
            if e == 0:
                out.append(str(c))
                continue
            base = "w" if e == 1 else "w^%d" % e
            out.append(base if c == 1 else "%s*%d" % (base, c))
        return "+".join(out)

    def __repr__(self):
        return "Ordinal(%s)" % self


_TERM = re.compile(r"^(?:w(?:\^(\d+))?(?:\*(\d+))?|(\d+))$")


def parse_ordinal(text):
    """Parse ``w^k*c`` terms joined by ``+``, highest exponent first."""
    text = text.replace(" ", "")
    if not text:
        raise ParseError("empty ordinal literal", expected=("w", "digit"))
    terms = []
    for piece in text.split("+"):
        m = _TERM.match(piece)
        if not m:
            raise ParseError("malformed ordinal term %r" % piece, expected=("w^k*c",))
        if m.group(3) is not None:
            e, c = 0, int(m.group(3))
        else:
            e = int(m.group(1)) if m.group(1) else 1
            c = int(m.group(2)) if m.group(2) else 1
        if c == 0 or (e == 0 and c == 0):
            if text == "0":
                return Ordinal(())
            raise ParseError("zero coefficient in %r" % piece)
        terms.append((e, c))
    if terms == [(0, 0)]:
        return Ordinal(())
    for (e1, _), (e2, _) in zip(terms, terms[1:]):
        if e2 >= e1:
            raise ParseError("ordinal terms not in Cantor normal form order: %r" % text)
    return Ordinal(tuple(terms))
