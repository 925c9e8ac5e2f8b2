"""Pair correlation functions f and their logarithmic derivative calculus.

Every pair function exposes log f, the log-derivative w = f'/f and the
smooth part of the curvature ratio v = f''/f, which are the only three
quantities the Hamiltonian evaluators need.  Kinked functions (those whose
w jumps at the origin, like exp(g|x|)) additionally carry the coefficient
of the delta spike in f''/f, and evaluation inside a guard band around a
kink or zero of f raises instead of returning garbage.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

import numpy as np

from . import expr
from .expr import Node, differentiate, evaluate, parse, pretty, uses_ops

__all__ = [
    "EPS_GUARD",
    "PairFunction",
    "PowerPair",
    "ExponentialPair",
    "GaussianPair",
    "SinhPair",
    "CustomPair",
    "make_pair",
    "pair_from_expression",
    "log_derivative",
    "curvature_ratio",
    "GuardBandError",
    "BUILTIN_PAIR_KINDS",
]

# evaluation closer than this to a kink or zero of f is refused
EPS_GUARD = 1e-8


class GuardBandError(ValueError):
    """Evaluation requested within the guard band of a singular point."""


def _bounds(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


class PairFunction:
    """Interface shared by the built-in kinds and custom expressions.

    Subclasses provide log_f, w, v on float arrays (signed separations in
    one dimension, radial distances otherwise) plus three flags:

    * ``kinked``: w jumps at the origin, so one-dimensional sampling must
      stay inside a fixed ordering sector and f''/f carries a delta spike;
    * ``guarded``: evaluation needs the origin guard band (kink, zero or
      pole of f at coincidence);
    * ``delta_coefficient``: c in f''/f = v_smooth + c delta(x), or None
      when it cannot be derived symbolically.
    """

    kind: str = "?"
    kinked: bool = False
    guarded: bool = True
    delta_coefficient: float | None = 0.0

    def log_f(self, x):
        raise NotImplementedError

    def w(self, x):
        raise NotImplementedError

    def v(self, x):
        raise NotImplementedError

    def params(self) -> dict[str, float]:
        return {}

    def describe(self) -> dict:
        d: dict = {"kind": self.kind, **self.params()}
        return d

    def _guard(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.guarded and np.any(np.abs(x) < EPS_GUARD):
            raise GuardBandError(
                f"{self.kind} pair function evaluated within {EPS_GUARD:g} of the origin")
        return x


@dataclass(frozen=True)
class PowerPair(PairFunction):
    """f(x) = |x|^g: w = g/x, v = g(g-1)/x^2, no delta part."""

    g: float
    kind = "power"
    kinked = False
    guarded = True
    delta_coefficient = 0.0

    def __post_init__(self):
        _bounds(self.g != 0, "power pair needs g != 0")

    def log_f(self, x):
        return self.g * np.log(np.abs(self._guard(x)))

    def w(self, x):
        return self.g / self._guard(x)

    def v(self, x):
        return self.g * (self.g - 1.0) / self._guard(x) ** 2

    def params(self):
        return {"g": self.g}


@dataclass(frozen=True)
class ExponentialPair(PairFunction):
    """f(x) = exp(g|x|): w = g sgn(x), v_smooth = g^2, delta coefficient 2g."""

    g: float
    kind = "exponential"
    kinked = True
    guarded = True

    def __post_init__(self):
        _bounds(self.g != 0, "exponential pair needs g != 0")

    @property
    def delta_coefficient(self) -> float:
        return 2.0 * self.g

    def log_f(self, x):
        return self.g * np.abs(self._guard(x))

    def w(self, x):
        return self.g * np.sign(self._guard(x))

    def v(self, x):
        x = self._guard(x)
        return np.full_like(x, self.g**2)

    def params(self):
        return {"g": self.g}


@dataclass(frozen=True)
class GaussianPair(PairFunction):
    """f(x) = exp(g x^2): w = 2 g x, v = 2 g + 4 g^2 x^2; smooth everywhere."""

    g: float
    kind = "gaussian"
    kinked = False
    guarded = False
    delta_coefficient = 0.0

    def __post_init__(self):
        _bounds(self.g != 0, "gaussian pair needs g != 0")

    def log_f(self, x):
        return self.g * np.asarray(x, dtype=float) ** 2

    def w(self, x):
        return 2.0 * self.g * np.asarray(x, dtype=float)

    def v(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.g + 4.0 * self.g**2 * x**2

    def params(self):
        return {"g": self.g}


@dataclass(frozen=True)
class SinhPair(PairFunction):
    """f(x) = |sinh(x/l)|^g: w = (g/l) coth(x/l), v = (g/l^2)(g + (g-1)/sinh^2)."""

    g: float
    ell: float = 1.0
    kind = "sinh"
    kinked = False
    guarded = True
    delta_coefficient = 0.0

    def __post_init__(self):
        _bounds(self.g != 0, "sinh pair needs g != 0")
        _bounds(self.ell > 0, "sinh pair needs ell > 0")

    def log_f(self, x):
        return self.g * np.log(np.abs(np.sinh(self._guard(x) / self.ell)))

    def w(self, x):
        return (self.g / self.ell) / np.tanh(self._guard(x) / self.ell)

    def v(self, x):
        s = np.sinh(self._guard(x) / self.ell)
        return (self.g / self.ell**2) * (self.g + (self.g - 1.0) / s**2)

    def params(self):
        return {"g": self.g, "ell": self.ell}


class CustomPair(PairFunction):
    """Pair function given as an expression tree in x.

    w and v come from symbolic differentiation on the smooth branch, so a
    tree containing abs or sgn is treated as kinked and its delta
    coefficient is reported as unknown (None).  log f uses log|f|, which is
    the correct magnitude for a possibly sign-changing f.
    """

    kind = "custom"

    def __init__(self, tree: Node, params: Mapping[str, float] | None = None,
                 source: str | None = None):
        self.tree = tree
        self._params = dict(params or {})
        self.source = source if source is not None else pretty(tree)
        unbound = expr.param_names(tree) - set(self._params)
        if unbound:
            raise expr.EvalError(
                f"custom pair function has unbound parameters: {', '.join(sorted(unbound))}")
        self.kinked = uses_ops(tree, ("abs", "sgn"))
        self.guarded = True  # conservative: customs may vanish or blow up at 0
        self.delta_coefficient = None if self.kinked else 0.0

    @cached_property
    def _d1(self) -> Node:
        return differentiate(self.tree)

    @cached_property
    def _d2(self) -> Node:
        return differentiate(self._d1)

    def _f(self, x):
        return evaluate(self.tree, x, self._params, check=False)

    def log_f(self, x):
        f = np.asarray(self._f(self._guard(x)), dtype=float)
        if np.any(f == 0.0) or not np.all(np.isfinite(f)):
            raise GuardBandError(
                f"custom pair function {self.source!r} vanishes or diverges at a requested separation")
        return np.log(np.abs(f))

    def w(self, x):
        x = self._guard(x)
        f = np.asarray(self._f(x), dtype=float)
        d1 = np.asarray(evaluate(self._d1, x, self._params, check=False), dtype=float)
        out = d1 / f
        if not np.all(np.isfinite(out)):
            raise GuardBandError(
                f"log-derivative of custom pair function {self.source!r} is singular at a requested separation")
        return out

    def v(self, x):
        x = self._guard(x)
        f = np.asarray(self._f(x), dtype=float)
        d2 = np.asarray(evaluate(self._d2, x, self._params, check=False), dtype=float)
        out = d2 / f
        if not np.all(np.isfinite(out)):
            raise GuardBandError(
                f"curvature ratio of custom pair function {self.source!r} is singular at a requested separation")
        return out

    def params(self):
        return dict(self._params)

    def describe(self) -> dict:
        return {"kind": self.kind, "expr": self.source, **self.params()}

    def __repr__(self):
        return f"CustomPair({self.source!r}, params={self._params})"


BUILTIN_PAIR_KINDS = ("power", "exponential", "gaussian", "sinh")


def make_pair(kind: str, **params) -> PairFunction:
    """Build a built-in pair function by name; see BUILTIN_PAIR_KINDS."""
    key = kind.lower()
    try:
        cls = {
            "power": PowerPair,
            "exponential": ExponentialPair,
            "gaussian": GaussianPair,
            "sinh": SinhPair,
        }[key]
    except KeyError:
        raise ValueError(
            f"unknown pair kind {kind!r}; choose from {', '.join(BUILTIN_PAIR_KINDS)}") from None
    return cls(**params)


def pair_from_expression(source: str, params: Mapping[str, float] | None = None) -> CustomPair:
    """Parse an expression in x into a custom pair function."""
    return CustomPair(parse(source), params, source=source)


def log_derivative(pair: PairFunction, x):
    """w(x) = f'(x)/f(x)."""
    return pair.w(x)


def curvature_ratio(pair: PairFunction, x):
    """Smooth part of f''(x)/f(x) (delta spikes reported separately)."""
    return pair.v(x)
