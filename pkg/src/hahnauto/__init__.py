"""Automatic generalized power series in characteristic p and root decisions in Hahn fields."""

from .arithmetic import add, equals, evaluate_polynomial, frobenius, is_zero, multiply, neg, power, scalar_mul, sub
from .automata import Dfao, Nfa, count_paths_mod, determinize, minimize, prune_unreachable, reverse, to_dot
from .decide import (
    NO,
    UNDECIDED,
    YES,
    FieldSpec,
    RootDecision,
    decide_gamma_m,
    decide_ppf,
    decide_with_value_set,
    enumerate_well_ordered_dfaos,
    reduce_value_group,
)
from .encoding import (
    AutomaticSeries,
    check_well_formed,
    check_well_ordered,
    expansion_of,
    expansion_value,
    from_finite_series,
    support_prefix,
    zero_series,
)
from .fields import GF, FqElement, FqField
from .newton import count_roots_oracle, envelope, ore_additive_multiple, ramification_bound
from .parse import format_dfao, parse_dfao, parse_field, parse_polynomial
from .poly import Poly, t_poly

__version__ = "0.1.0"
