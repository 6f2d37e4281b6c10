"""Formula language, evaluation and axiom-schema checks."""

from .axioms import SchemaReport, check_ndi_axioms, check_pi_axioms, instance_pool
from .evaluate import Evaluator
from .formula import (FALSE, TRUE, And, At, Atom, Box, Const, Diamond, Formula, Future,
                      Implies, Not, Or, Past, is_future_free)
from .parser import parse

__all__ = [
    "Formula", "Const", "Atom", "Not", "And", "Or", "Implies", "Past", "Future", "Box",
    "Diamond", "At", "TRUE", "FALSE", "is_future_free", "parse", "Evaluator",
    "SchemaReport", "check_ndi_axioms", "check_pi_axioms", "instance_pool",
]
