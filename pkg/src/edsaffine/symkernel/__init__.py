"""Exact symbolic kernel: expressions, parsing, calculus and zero testing."""
from edsaffine.symkernel.calculus import differentiate, gradient, substitute
from edsaffine.symkernel.expr import (
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Var,
    atan,
    cos,
    exp,
    log,
    normalize,
    sin,
    sqrt,
    symbols,
    sympify,
    tan,
)
from edsaffine.symkernel.numeric import (
    DomainError,
    evaluate,
    evaluate_float,
    is_zero,
    numerically_zero,
    parameter_values,
    sample_points,
    seeded,
    zero_test,
)
from edsaffine.symkernel.parser import ParseError, parse, parse_ode
from edsaffine.symkernel.printer import to_string
from edsaffine.symkernel.rational import RationalFunction, Ring, cancel, ring_of, to_rational

__all__ = [
    "Add", "Const", "DomainError", "Expr", "Func", "Mul", "ONE", "ParseError", "Pow",
    "RationalFunction", "Ring", "Var", "ZERO", "atan", "cancel", "cos", "differentiate",
    "evaluate", "evaluate_float", "exp", "gradient", "is_zero", "log", "normalize",
    "numerically_zero", "parameter_values", "parse", "parse_ode", "ring_of", "sample_points",
    "seeded", "sin", "sqrt", "substitute", "symbols", "sympify", "tan", "to_rational",
    "to_string", "zero_test",
]
