"""Finite Euclidean graphs, the orthogonal scheme on square-type lines,
and simplex congruence censuses over finite fields."""

from .ffield import Field, make_field, field_of_order, arith, quadratic_character, sqrt_in_field

__version__ = '0.1.0'
