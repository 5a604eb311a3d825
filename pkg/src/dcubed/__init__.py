"""Exact calculus for graded differential algebras with ternary differential.

The package builds, over a free noncommutative algebra with a configurable
bimodule structure map, the tensor algebra of first- and second-order
differentials, the grade-one operator with d^3 x^i = 0, the compatibility
ideal that makes the quotient a genuine q-differential algebra, and
machine checks for their defining identities.
"""

from .scalar import Scalar, ZERO, ONE, Q, q_power, q_integer
from .freealg import AlgebraElement
from .bimodule import BimoduleMap, preset_map, PRESETS
from .tensoralg import TensorElement, tensor_mul
from .calculus import Calculus
from .differential import d, d_power
from .ideal import Ideal, Verdict
from .parsing import ParseError, parse_expression, parse_algebra, format_tensor
from .verify import run_suite

__all__ = [
    "Scalar", "ZERO", "ONE", "Q", "q_power", "q_integer",
    "AlgebraElement", "BimoduleMap", "preset_map", "PRESETS",
    "TensorElement", "tensor_mul", "Calculus", "d", "d_power",
    "Ideal", "Verdict", "ParseError", "parse_expression", "parse_algebra",
    "format_tensor", "run_suite",
]
