"""Parent Hamiltonians of graph-structured pair-product wavefunctions.

For a connectivity graph with bond weights p_ij, a pair function f and an
optional one-body confinement factor, the wavefunction

    Psi0 = prod_i gtilde(|r_i|) * prod_{i<j} f(r_ij)^p_ij

is annihilated by H = T + V with V := -(T Psi0)/Psi0.  This module builds
that V in its structured form: a smooth two-body part (curvature ratios v
plus a weighted w^2 correction), a three-body wedge sum over two-edge paths
of the graph, the one-body confinement potential, the mixed pair-confinement
cross term, and contact (delta) terms for kinked pair functions.  All terms
carry the prefactor hbar^2/m; kinetic energy is -(hbar^2/2m) sum_i Lap_i.

In one dimension the pair argument is the signed separation x_i - x_j taken
with i < j (an antisymmetric orientation matrix handles the reversed order,
which for even f coincides with evaluating at x_j - x_i); in D > 1 it is
the radial distance with unit separation vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import expr
from .graphs import Graph, complete
from .pairfunc import PairFunction

__all__ = [
    "ModelSpec",
    "Configuration",
    "HarmonicConfinement",
    "CustomConfinement",
    "PotentialBreakdown",
    "ClosedFormConstants",
    "potential_breakdown",
    "log_psi",
    "potential_2body",
    "potential_3body",
    "potential_confinement",
    "weighted_potentials",
    "three_body_terms",
    "kinetic_log_action",
    "grad_log_psi",
    "closed_form_constants",
    "sorted_sector_sign_sum",
]


# ---------------------------------------------------------------------------
# confinement

@dataclass(frozen=True)
class HarmonicConfinement:
    """gtilde(r) = exp(-m omega r^2 / (2 hbar)); u = g'/g = -(m omega/hbar) r."""

    omega: float
    kind = "harmonic"

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("harmonic confinement needs omega > 0")

    def log_g(self, r, hbar: float, mass: float):
        return -0.5 * (mass * self.omega / hbar) * np.asarray(r, dtype=float) ** 2

    def u(self, r, hbar: float, mass: float):
        return -(mass * self.omega / hbar) * np.asarray(r, dtype=float)

    def u_over_r(self, r, hbar: float, mass: float):
        # finite at the origin, unlike the generic u(r)/r
        return np.full_like(np.asarray(r, dtype=float), -(mass * self.omega / hbar))

    def gpp_over_g(self, r, hbar: float, mass: float):
        c = mass * self.omega / hbar
        return -c + (c * np.asarray(r, dtype=float)) ** 2

    def describe(self) -> dict:
        return {"kind": "harmonic", "omega": self.omega}


class CustomConfinement:
    """One-body factor given as an expression tree in x = |r|."""

    kind = "custom"

    def __init__(self, tree: expr.Node, params: Mapping[str, float] | None = None,
                 source: str | None = None):
        self.tree = tree
        self._params = dict(params or {})
        self.source = source if source is not None else expr.pretty(tree)
        unbound = expr.param_names(tree) - set(self._params)
        if unbound:
            raise expr.EvalError(
                f"confinement has unbound parameters: {', '.join(sorted(unbound))}")
        self._d1 = expr.differentiate(tree)
        self._d2 = expr.differentiate(self._d1)

    @classmethod
    def from_expression(cls, source: str, params: Mapping[str, float] | None = None):
        return cls(expr.parse(source), params, source=source)

    def _val(self, tree, r):
        return np.asarray(expr.evaluate(tree, r, self._params, check=False), dtype=float)

    def log_g(self, r, hbar: float, mass: float):
        g = self._val(self.tree, r)
        if np.any(g <= 0.0) or not np.all(np.isfinite(g)):
            raise expr.SingularEvaluationError(
                f"confinement factor {self.source!r} must be finite and positive")
        return np.log(g)

    def u(self, r, hbar: float, mass: float):
        return self._val(self._d1, r) / self._val(self.tree, r)

    def u_over_r(self, r, hbar: float, mass: float):
        return self.u(r, hbar, mass) / np.asarray(r, dtype=float)

    def gpp_over_g(self, r, hbar: float, mass: float):
        return self._val(self._d2, r) / self._val(self.tree, r)

    def describe(self) -> dict:
        return {"kind": "custom", "expr": self.source, **self._params}

    def __repr__(self):
        return f"CustomConfinement({self.source!r}, params={self._params})"


# ---------------------------------------------------------------------------
# model and configuration

@dataclass(frozen=True)
class ModelSpec:
    """A parent-Hamiltonian model: graph, pair function, dimension, units.

    Attributes:
        graph: connectivity with bond weights (simple 0/1 or real powers).
        pair: the pair correlation function f.
        dim: spatial dimension D >= 1 (signed separations when D = 1).
        hbar, mass: units; every potential term scales as hbar^2/m.
        confinement: optional one-body factor (harmonic or expression).
    """

    graph: Graph
    pair: PairFunction
    dim: int = 1
    hbar: float = 1.0
    mass: float = 1.0
    confinement: HarmonicConfinement | CustomConfinement | None = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be >= 1")
        if self.hbar <= 0:
            raise ValueError("hbar must be positive")
        if self.mass <= 0:
            raise ValueError("mass must be positive")

    @property
    def n_particles(self) -> int:
        return self.graph.n

    @property
    def kappa(self) -> float:
        """hbar^2/m, the overall potential scale."""
        return self.hbar**2 / self.mass


@dataclass(frozen=True)
class Configuration:
    """Particle coordinates, shape (N, D)."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        if c.ndim != 2:
            raise ValueError(f"coordinates must be (N, D), got shape {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_1d(cls, xs) -> "Configuration":
        return cls(np.asarray(xs, dtype=float).reshape(-1, 1))

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[1]


def _coords(model: ModelSpec, cfg) -> np.ndarray:
    c = cfg.coords if isinstance(cfg, Configuration) else np.asarray(cfg, dtype=float)
    if c.ndim == 1:
        c = c[:, None]
    if c.shape != (model.n_particles, model.dim):
        raise ValueError(
            f"configuration shape {c.shape} does not match model (N={model.n_particles}, D={model.dim})")
    return c


# ---------------------------------------------------------------------------
# pair geometry shared by the evaluators

class _PairFields:
    """Per-edge pair data at a configuration (one- or D-dimensional)."""

    def __init__(self, model: ModelSpec, coords: np.ndarray):
        g = model.graph
        n = g.n
        self.iu, self.ju = np.nonzero(np.triu(g.weights, k=1))
        self.p = g.weights[self.iu, self.ju]
        self.one_d = coords.shape[1] == 1
        if self.one_d:
            x = coords[:, 0]
            self.arg = x[self.iu] - x[self.ju]  # signed, i < j
        else:
            diff = coords[self.iu] - coords[self.ju]
            self.arg = np.linalg.norm(diff, axis=1)
            with np.errstate(invalid="ignore", divide="ignore"):
                self.unit = diff / self.arg[:, None]
        pair = model.pair
        self.w_edge = np.asarray(pair.w(self.arg), dtype=float)
        self.v_edge = np.asarray(pair.v(self.arg), dtype=float)
        self.n = n

    def oriented_w(self) -> np.ndarray:
        """Antisymmetric matrix W with W[i, j] = d(log f_ij)/dx_i (1D only)."""
        wt = np.zeros((self.n, self.n))
        wt[self.iu, self.ju] = self.w_edge
        wt[self.ju, self.iu] = -self.w_edge
        return wt

    def sym_edge_matrix(self, values: np.ndarray) -> np.ndarray:
        m = np.zeros((self.n, self.n))
        m[self.iu, self.ju] = values
        m[self.ju, self.iu] = values
        return m

    def unit_tensor(self, dim: int) -> np.ndarray:
        """Antisymmetric (N, N, D) tensor of unit vectors from j toward i."""
        u = np.zeros((self.n, self.n, dim))
        u[self.iu, self.ju] = self.unit
        u[self.ju, self.iu] = -self.unit
        return u


def _pair_fields(model: ModelSpec, coords: np.ndarray) -> _PairFields:
    return _PairFields(model, coords)


def _radial(coords: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Radii and unit position vectors (zero vector for a particle at the origin)."""
    r = np.linalg.norm(coords, axis=1)
    safe = np.where(r > 0, r, 1.0)
    rhat = np.where(r[:, None] > 0, coords / safe[:, None], 0.0)
    return r, rhat


# ---------------------------------------------------------------------------
# evaluators

def log_psi(model: ModelSpec, cfg) -> float:
    """log |Psi0| = sum_edges p_ij log f(arg_ij) + sum_i log gtilde(|r_i|)."""
    coords = _coords(model, cfg)
    f = _pair_fields(model, coords)
    total = float(np.dot(f.p, np.asarray(model.pair.log_f(f.arg), dtype=float)))
    if model.confinement is not None:
        r = np.linalg.norm(coords, axis=1)
        total += float(np.sum(model.confinement.log_g(r, model.hbar, model.mass)))
    return total


def potential_2body(model: ModelSpec, cfg) -> float:
    """Smooth two-body part: kappa * sum_edges [p v + p(p-1) w^2 + p(D-1) w/r].

    The (D-1) w/r piece is the radial-gradient contribution in D > 1; delta
    spikes of kinked pair functions are reported separately in the breakdown.
    """
    coords = _coords(model, cfg)
    f = _pair_fields(model, coords)
    per_edge = f.p * f.v_edge + f.p * (f.p - 1.0) * f.w_edge**2
    if not f.one_d:
        per_edge = per_edge + f.p * (model.dim - 1.0) * f.w_edge / f.arg
    return model.kappa * float(np.sum(per_edge))


def three_body_terms(model: ModelSpec, cfg) -> tuple[list[tuple[int, int, int]], np.ndarray]:
    """Wedge list [(center, j, k), ...] and the per-wedge potential terms.

    Each term is kappa * p_cj p_ck w_cj w_ck (times the angle cosine between
    the two separation vectors when D > 1); their sum is potential_3body.
    """
    coords = _coords(model, cfg)
    f = _pair_fields(model, coords)
    g = model.graph
    wedges = list(g.enumerate_wedges())
    if not wedges:
        return wedges, np.zeros(0)
    c_idx = np.array([w[0] for w in wedges])
    j_idx = np.array([w[1] for w in wedges])
    k_idx = np.array([w[2] for w in wedges])
    p = g.weights
    if f.one_d:
        wt = f.oriented_w()
        terms = p[c_idx, j_idx] * p[c_idx, k_idx] * wt[c_idx, j_idx] * wt[c_idx, k_idx]
    else:
        wmat = f.sym_edge_matrix(f.w_edge)
        units = f.unit_tensor(model.dim)
        cosang = np.einsum("ad,ad->a", units[c_idx, j_idx], units[c_idx, k_idx])
        terms = (p[c_idx, j_idx] * p[c_idx, k_idx]
                 * wmat[c_idx, j_idx] * wmat[c_idx, k_idx] * cosang)
    return wedges, model.kappa * terms


def potential_3body(model: ModelSpec, cfg) -> float:
    """Three-body wedge sum: kappa * sum_{(c; j<k)} p_cj p_ck w_cj w_ck cos."""
    _, terms = three_body_terms(model, cfg)
    return float(np.sum(terms))


def weighted_potentials(model: ModelSpec, cfg) -> tuple[float, float]:
    """(two-body, three-body) for real-valued bond weights.

    Coincides with the plain evaluators; exposed separately because the
    weighted two-body part carries the extra p(p-1) w^2 term that vanishes
    on simple graphs.
    """
    return potential_2body(model, cfg), potential_3body(model, cfg)


def potential_confinement(model: ModelSpec, cfg) -> tuple[float, float]:
    """(one-body potential, pair-confinement cross term).

    one-body: (hbar^2/2m) sum_i [g''/g(r_i) + (D-1) u(r_i)/r_i]
    cross:    kappa * sum_edges p_ij w_ij rhat_ij . (u_i rhat_i - u_j rhat_j)
    """
    conf = model.confinement
    if conf is None:
        return 0.0, 0.0
    coords = _coords(model, cfg)
    hbar, mass = model.hbar, model.mass
    r = np.linalg.norm(coords, axis=1)
    v1_terms = conf.gpp_over_g(r, hbar, mass)
    if model.dim > 1:
        v1_terms = v1_terms + (model.dim - 1.0) * conf.u_over_r(r, hbar, mass)
    v1 = 0.5 * model.kappa * float(np.sum(v1_terms))

    f = _pair_fields(model, coords)
    u = np.asarray(conf.u(r, hbar, mass), dtype=float)
    _, rhat = _radial(coords)
    uvec = u[:, None] * rhat  # grad_i log gtilde
    if f.one_d:
        # the signed w already carries the separation orientation
        cross = f.p * f.w_edge * (uvec[f.iu, 0] - uvec[f.ju, 0])
    else:
        cross = f.p * f.w_edge * np.einsum("ad,ad->a", f.unit, uvec[f.iu] - uvec[f.ju])
    v2ll = model.kappa * float(np.sum(cross))
    return v1, v2ll


def grad_log_psi(model: ModelSpec, cfg) -> np.ndarray:
    """Analytic gradient of log Psi0, shape (N, D): the factorization field."""
    coords = _coords(model, cfg)
    f = _pair_fields(model, coords)
    n, d = coords.shape
    grad = np.zeros((n, d))
    if f.one_d:
        wt = f.oriented_w()
        grad[:, 0] = (model.graph.weights * wt).sum(axis=1)
    else:
        units = f.unit_tensor(d)
        wmat = f.sym_edge_matrix(f.w_edge)
        grad = np.einsum("ij,ijd->id", model.graph.weights * wmat, units)
    if model.confinement is not None:
        r, rhat = _radial(coords)
        u = np.asarray(model.confinement.u(r, model.hbar, model.mass), dtype=float)
        grad = grad + u[:, None] * rhat
    return grad


def kinetic_log_action(model: ModelSpec, cfg) -> float:
    """(T Psi0)/Psi0 = -(hbar^2/2m) sum_i [Lap_i log Psi0 + |grad_i log Psi0|^2].

    Uses the smooth branch (w' = v - w^2); for kinked pair functions this is
    the value away from coincidence hyperplanes, where the delta terms live.
    """
    coords = _coords(model, cfg)
    f = _pair_fields(model, coords)
    wprime = f.v_edge - f.w_edge**2
    lap_edge = f.p * wprime
    if not f.one_d:
        lap_edge = lap_edge + f.p * (model.dim - 1.0) * f.w_edge / f.arg
    # each edge contributes the same Laplacian term at both endpoints
    lap_total = 2.0 * float(np.sum(lap_edge))
    if model.confinement is not None:
        r = np.linalg.norm(coords, axis=1)
        u = np.asarray(model.confinement.u(r, model.hbar, model.mass), dtype=float)
        gpp = np.asarray(model.confinement.gpp_over_g(r, model.hbar, model.mass), dtype=float)
        uprime = gpp - u**2
        conf_lap = uprime
        if model.dim > 1:
            conf_lap = conf_lap + (model.dim - 1.0) * np.asarray(
                model.confinement.u_over_r(r, model.hbar, model.mass), dtype=float)
        lap_total += float(np.sum(conf_lap))
    grad = grad_log_psi(model, cfg)
    grad_sq = float(np.sum(grad**2))
    return -0.5 * model.kappa * (lap_total + grad_sq)


# ---------------------------------------------------------------------------
# breakdown and closed-form constants

@dataclass(frozen=True)
class PotentialBreakdown:
    """All potential pieces at one configuration, in units of energy.

    delta_terms lists ((i, j), coefficient) per kinked edge, the coefficient
    multiplying delta(x_ij) in the potential (None when not derivable).
    constant_shift and e0 are the analytic values from closed_form_constants
    when the model is tabulated, else None.
    """

    v2_smooth: float
    v3: float
    v1: float
    v2ll: float
    delta_terms: tuple[tuple[tuple[int, int], float | None], ...]
    constant_shift: float | None
    e0: float | None

    @property
    def total_smooth(self) -> float:
        return self.v2_smooth + self.v3 + self.v1 + self.v2ll


def potential_breakdown(model: ModelSpec, cfg) -> PotentialBreakdown:
    v2 = potential_2body(model, cfg)
    v3 = potential_3body(model, cfg)
    v1, v2ll = potential_confinement(model, cfg)
    deltas: list[tuple[tuple[int, int], float | None]] = []
    if model.pair.kinked:
        c = model.pair.delta_coefficient
        for i, j in model.graph.edges():
            coeff = None if c is None else model.kappa * model.graph.weights[i, j] * c
            deltas.append(((i, j), coeff))
    consts = closed_form_constants(model)
    return PotentialBreakdown(
        v2_smooth=v2, v3=v3, v1=v1, v2ll=v2ll,
        delta_terms=tuple(deltas),
        constant_shift=None if consts is None else consts.constant_shift,
        e0=None if consts is None else consts.e0,
    )


def sorted_sector_sign_sum(graph: Graph) -> int:
    """sum over wedges (c; j < k) of sgn(c - j) sgn(c - k) on vertex indices.

    For a kinked pair function in one dimension this integer times g^2 kappa
    is the three-body value in the sector x_0 < x_1 < ... < x_{N-1}, where
    every sgn(x_a - x_b) equals sgn(a - b).
    """
    total = 0
    for c, j, k in graph.enumerate_wedges():
        total += int(np.sign(c - j)) * int(np.sign(c - k))
    return total


@dataclass(frozen=True)
class ClosedFormConstants:
    """Analytic constant parts of the potential for built-in pair functions.

    v3_constant for the kinked exponential pair is the sorted-sector value;
    constant_shift is the sum of all parts and e0 = -constant_shift is the
    eigenvalue of the Hamiltonian with the constants removed.
    """

    v2_constant: float
    v3_constant: float
    confinement_constant: float
    constant_shift: float
    e0: float


def closed_form_constants(model: ModelSpec) -> ClosedFormConstants | None:
    """Constant parts of V for built-in pairs on simple graphs, else None.

    Per edge the smooth two-body constant is g^2 (exponential), 2 g D
    (gaussian), 0 (power), times kappa.  For the sinh pair the constant
    depends on how the curvature ratio is grouped: on a complete graph the
    interaction kept is 1/sinh^2 and the constant is g^2/ell^2 per edge; on
    every other graph the interaction kept is coth^2 and the constant is
    g/ell^2 per edge.  The three-body constant (one dimension only): g^2
    times the sorted-sector sign sum for the exponential pair; (g/ell)^2
    per triangle for sinh on a complete graph.  Harmonic confinement adds
    -D N hbar omega / 2 and, for the power pair (w(r) r = g), the
    cross-term constant -hbar omega g |E|.
    """
    g = model.graph
    pair = model.pair
    if not g.is_simple:
        return None
    if pair.kind not in ("power", "exponential", "gaussian", "sinh"):
        return None
    conf = model.confinement
    if conf is not None and not isinstance(conf, HarmonicConfinement):
        return None
    kappa = model.kappa
    edges = g.edge_count
    n = g.n
    d = model.dim
    gp = pair.params().get("g", 0.0)
    if pair.kind == "exponential":
        v2c = kappa * gp**2 * edges
        v3c = kappa * gp**2 * sorted_sector_sign_sum(g) if d == 1 else 0.0
    elif pair.kind == "gaussian":
        v2c = kappa * 2.0 * gp * d * edges
        v3c = 0.0
    elif pair.kind == "sinh":
        ell = pair.params()["ell"]
        is_complete = g == complete(n)
        v2c = kappa * (gp**2 if is_complete else gp) / ell**2 * edges
        v3c = kappa * (gp / ell) ** 2 * (n * (n - 1) * (n - 2) // 6) if (d == 1 and is_complete) else 0.0
    else:  # power
        v2c = 0.0
        v3c = 0.0
    conf_c = 0.0
    if conf is not None:
        conf_c = -0.5 * d * n * model.hbar * conf.omega
        if pair.kind == "power":
            conf_c += -model.hbar * conf.omega * gp * edges
    shift = v2c + v3c + conf_c
    return ClosedFormConstants(
        v2_constant=v2c, v3_constant=v3c, confinement_constant=conf_c,
        constant_shift=shift, e0=-shift,
    )
