"""Relative number of subuniverses of finite qn-lattices.

Typical use::

    from qnsigma import parse_document, run_document
    results = run_document(parse_document(open("LmQ4.txt").read()))
"""
from .counter import SigmaValue, count_subuniverses, enumerate_subuniverses, sigma
from .poset import Poset, build_poset
from .qn import JmConstraint, Kind, QnLattice, close, validate_constraints
from .textio import parse_document, render_output, run_document

__all__ = [
    "JmConstraint", "Kind", "Poset", "QnLattice", "SigmaValue", "build_poset", "close",
    "count_subuniverses", "enumerate_subuniverses", "parse_document", "render_output",
    "run_document", "sigma", "validate_constraints",
]
