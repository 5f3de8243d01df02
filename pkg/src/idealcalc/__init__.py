"""Exact symbolic calculator for ideals on countable sets and the c0 sequence
spaces they define.

The package is organised in layers: ``sets`` (symbolic subsets of countable
domains), ``ideals`` (ideal expressions and decision procedures),
``seqspace`` (exact simple sequences), ``operators`` (index operators and
verification harnesses) and ``dsl``/``cli`` (text syntax and driver).
"""

from .domains import NAT, RAT, Nat, Prod, Rat, Sigma, parse_domain
from .dsl import parse, parse_ideal, parse_map, parse_op, parse_seq, parse_set, print_expr
from .errors import (DomainMismatch, IdealCalcError, MembershipRequired, NoMetadata, NotClosed,
                     NonpositiveEpsilon, OrdinalOutOfRange, ParseError, RefinementNotClosed,
                     Undecidable, ValidationError, WitnessUnavailable)
from .ideals import (CatalogP, CatalogQ, Fin, Fubini, Join, OmegaSum, DirectSumList, Perp, Pow,
                     Restrict, WO, WORev, catalog, equivalent, is_frechet, is_tall, member,
                     metadata, perp_normalize)
from .ordinals import Ordinal, parse_ordinal
from .seqspace import (SimpleSeq, char_fn, combine, decompose_join, ideal_limsup, in_c0I,
                       level_set, quotient_norm, sup_norm)
from .sets import (contains, difference, enumerate_prefix, intersect, is_finite, is_subset,
                   to_text, union)

__version__ = "0.1.0"
