"""Exact realizations of the group generated by the Lyness map and SL(2,Z).

Five computational models of one group: piecewise-linear automorphisms of
the integer plane (plcore), birational maps of the projective plane
(birational), Thompson-style circle and tree-pair elements (thompson), the
linear representation on curve classes (picard), and the q-commuting torus
specialization (quantum).  The words module ties them together with a small
relation-checking language, and cli exposes the whole thing on the command
line.
"""

__version__ = "0.1.0"

from .plcore import (
    wedge,
    primitive,
    Fan,
    PLAut,
    generator_pl,
    identity_pl,
    compose_pl,
    inverse_pl,
    order_pl,
)

__all__ = [
    "wedge",
    "primitive",
    "Fan",
    "PLAut",
    "generator_pl",
    "identity_pl",
    "compose_pl",
    "inverse_pl",
    "order_pl",
    "__version__",
]
