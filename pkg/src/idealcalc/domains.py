"""Countable index domains and their fixed enumerations.

``Nat`` is the naturals, ``Prod(D)`` is Nat x D partitioned into the columns
{n} x D, ``Rat`` is the rationals and ``Sigma(alpha)`` is the disjoint sum of
blocks whose n-th block is the domain of the hierarchy ideal at the n-th
term of the fundamental sequence of the limit ordinal ``alpha``.

Points are ints on Nat, ``Fraction`` on Rat and ``(n, inner)`` tuples on
Prod and Sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import DomainMismatch
from .ordinals import Ordinal
from ._hashing import memo_hash


@memo_hash
@dataclass(frozen=True)
class Nat:
    def __str__(self):
        return "nat"


@memo_hash
@dataclass(frozen=True)
class Rat:
    def __str__(self):
        return "rat"


@memo_hash
@dataclass(frozen=True)
class Prod:
    inner: object

    def __str__(self):
        return "nat*%s" % _wrap(self.inner)


@memo_hash
@dataclass(frozen=True)
class Sigma:
    alpha: Ordinal

    def block(self, n):
        return catalog_domain(self.alpha.fundamental(n))

    def __str__(self):
        return "sigma[%s]" % self.alpha


def _wrap(d):
    return "(%s)" % d if isinstance(d, Prod) else str(d)


NAT = Nat()
RAT = Rat()


def is_blocked(domain):
    """True for domains partitioned into numbered blocks."""
    return isinstance(domain, (Prod, Sigma))


def block_domain(domain, n):
    if isinstance(domain, Prod):
        return domain.inner
    if isinstance(domain, Sigma):
        return domain.block(n)
    raise DomainMismatch("%s has no blocks" % domain)


@lru_cache(maxsize=None)
def catalog_domain(alpha):
    """Domain carrying the hierarchy ideals of index ``alpha``."""
    if alpha.is_zero:
        return NAT
    if alpha.is_successor:
        return Prod(catalog_domain(alpha.pred()))
    return Sigma(alpha)


def depth(domain):
    if isinstance(domain, Prod):
        return 1 + depth(domain.inner)
    return 1


# -- pairing and enumeration -------------------------------------------------

def pair(n, m):
    """Cantor pairing (n+m)(n+m+1)/2 + m."""
    s = n + m
    return s * (s + 1) // 2 + m


def unpair(k):
    s = (isqrt(8 * k + 1) - 1) // 2
    m = k - s * (s + 1) // 2
    return s - m, m


def _fusc(n):
    a, b = 1, 0
    while n:
        if n & 1:
            b += a
        else:
            a += b
        n >>= 1
    return b


def calkin_wilf(j):
    """The j-th positive rational (j >= 1) in Calkin-Wilf order."""
    return Fraction(_fusc(j), _fusc(j + 1))


def point_at(domain, i):
    """The i-th point of the fixed enumeration of ``domain``."""
    if isinstance(domain, Nat):
        return i
    if isinstance(domain, Rat):
        if i == 0:
            return Fraction(0)
        j = (i + 1) // 2
        q = calkin_wilf(j)
        return q if i % 2 else -q
    n, k = unpair(i)
    return (n, point_at(block_domain(domain, n), k))


def base_point(domain):
    """The canonical first point, used for the diagonal sets of Sigma."""
    return point_at(domain, 0)


def in_domain(domain, p):
    if isinstance(domain, Nat):
        return isinstance(p, int) and not isinstance(p, bool) and p >= 0
    if isinstance(domain, Rat):
        return isinstance(p, (int, Fraction)) and not isinstance(p, bool)
    if not (isinstance(p, tuple) and len(p) == 2 and in_domain(NAT, p[0])):
        return False
    return in_domain(block_domain(domain, p[0]), p[1])


def format_point(p):
    if isinstance(p, tuple):
        return "(%s,%s)" % (format_point(p[0]), format_point(p[1]))
    if isinstance(p, Fraction):
        return str(p)
    return str(p)


def parse_domain(text):
    """Parse ``nat``, ``rat``, ``nat*nat``, ``nat*(nat*nat)`` or ``sigma[w]``."""
    from .ordinals import parse_ordinal
    t = text.replace(" ", "")
    if t.startswith("(") and t.endswith(")"):
        return parse_domain(t[1:-1])
    if t == "nat":
        return NAT
    if t == "rat":
        return RAT
    if t.startswith("sigma[") and t.endswith("]"):
        alpha = parse_ordinal(t[6:-1])
        if not alpha.is_limit:
            raise DomainMismatch("sigma domains need a limit ordinal")
        return Sigma(alpha)
    if t.startswith("nat*"):
        return Prod(parse_domain(t[4:]))
    raise DomainMismatch("unknown domain %r" % text)
