"""Marshall and maxmin copulas: evaluation, volumes, axioms, composition.

The Marshall copula of generators (phi, psi) is
``uv * min(phi(u)/u, psi(v)/v)`` for uv > 0 and 0 otherwise; it is evaluated
here in the division-free form ``min(v*phi(u), u*psi(v))``, which agrees with
the quotient form everywhere (the min never exceeds either argument) and
needs no special casing on the axes. The maxmin copula of (phi, chi) is
``uw + min(u(1-w), (phi(u)-u)(w-chi(w)))``.

Constructors check that generator kinds match their slots but deliberately do
not enforce the generator validity conditions: axiom checking on a copula
built from a defective generator is exactly how such defects are detected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .distfn import EXACT_TOL, DistFn
from .errors import InvalidParameterError, InvalidRangeError
from .generators import Generator
from .reports import Check

# phi and psi share the jump-at-0 convention, so either fits a max-type slot
_MAX_KINDS = ("phi", "psi")


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle [u1, u2] x [v1, v2] inside the unit square."""

    u1: float
    u2: float
    v1: float
    v2: float

    def __post_init__(self):
        if not (0.0 <= self.u1 <= self.u2 <= 1.0):
            raise InvalidRangeError(f"bad u-interval [{self.u1}, {self.u2}]")
        if not (0.0 <= self.v1 <= self.v2 <= 1.0):
            raise InvalidRangeError(f"bad v-interval [{self.v1}, {self.v2}]")


@dataclass(frozen=True)
class MarshallCopula:
    phi: Generator
    psi: Generator

    def __post_init__(self):
        for name, g in (("phi", self.phi), ("psi", self.psi)):
            if g.kind not in _MAX_KINDS:
                raise InvalidParameterError(
                    f"Marshall {name} slot needs a max-type generator, got {g.kind}"
                )


@dataclass(frozen=True)
class MaxminCopula:
    phi: Generator
    chi: Generator

    def __post_init__(self):
        if self.phi.kind not in _MAX_KINDS:
            raise InvalidParameterError(
                f"maxmin phi slot needs a max-type generator, got {self.phi.kind}"
            )
        if self.chi.kind != "chi":
            raise InvalidParameterError(
                f"maxmin chi slot needs a min-type generator, got {self.chi.kind}"
            )


@dataclass(frozen=True)
class TabulatedCopula:
    """Copula known only through values on a rectilinear grid.

    Evaluation is bilinear within cells; the grid must cover [0, 1] in both
    coordinates.
    """

    us: tuple[float, ...]
    vs: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        us = np.array(self.us, dtype=float)
        vs = np.array(self.vs, dtype=float)
        vals = np.array(self.values, dtype=float)
        for name, axis in (("u", us), ("v", vs)):
            if axis.size < 2 or np.any(np.diff(axis) <= 0.0):
                raise InvalidParameterError(f"{name}-grid must be strictly increasing")
            if axis[0] != 0.0 or axis[-1] != 1.0:
                raise InvalidParameterError(f"{name}-grid must span [0, 1]")
        if vals.shape != (us.size, vs.size):
            raise InvalidParameterError(
                f"value table shape {vals.shape} does not match grid "
                f"({us.size}, {vs.size})"
            )
        object.__setattr__(self, "_us", us)
        object.__setattr__(self, "_vs", vs)
        object.__setattr__(self, "_vals", vals)


CopulaSpec = Union[MarshallCopula, MaxminCopula]


def copula_grid(c, us, vs) -> np.ndarray:
    """Matrix of copula values, rows indexed by us and columns by vs."""
    us = np.asarray(us, dtype=float)
    vs = np.asarray(vs, dtype=float)
    if isinstance(c, MarshallCopula):
        return np.minimum(
            np.outer(c.phi.eval_many(us), vs), np.outer(us, c.psi.eval_many(vs))
        )
    if isinstance(c, MaxminCopula):
        phi = c.phi.eval_many(us)
        chi = c.chi.eval_many(vs)
        return np.outer(us, vs) + np.minimum(
            np.outer(us, 1.0 - vs), np.outer(phi - us, vs - chi)
        )
    if isinstance(c, TabulatedCopula):
        along_u = np.empty((us.size, c._vs.size))
        for j in range(c._vs.size):
            along_u[:, j] = np.interp(us, c._us, c._vals[:, j])
        out = np.empty((us.size, vs.size))
        for i in range(us.size):
            out[i, :] = np.interp(vs, c._vs, along_u[i, :])
        return out
    raise InvalidParameterError(f"not a copula specification: {type(c).__name__}")


def eval_copula(c, u: float, v: float) -> float:
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise InvalidRangeError(f"copula argument ({u}, {v}) outside the unit square")
    return float(copula_grid(c, [u], [v])[0, 0])


def h_volume(c, r: Rect) -> float:
    """Four-corner alternating sum of c over r."""
    g = copula_grid(c, [r.u1, r.u2], [r.v1, r.v2])
    return float(g[1, 1] - g[1, 0] - g[0, 1] + g[0, 0])


def check_copula_axioms(c, n: int = 101, tol: float = EXACT_TOL) -> list[Check]:
    """Boundary conditions on grid samples and 2-increasingness on all cells.

    Nonnegativity of every grid-cell volume is equivalent to nonnegativity of
    every grid rectangle, since rectangle volumes are sums of the cell
    volumes they tile; the reported worst rectangle is the worst single cell.
    """
    if n < 2:
        raise InvalidParameterError("axiom grid needs at least 2 points")
    us = np.linspace(0.0, 1.0, n)
    g = copula_grid(c, us, us)

    edge_dev = np.maximum(np.abs(g[0, :]), np.abs(g[:, 0]))
    i = int(np.argmax(edge_dev))
    grounded = Check(
        "grounded",
        float(edge_dev[i]) <= tol,
        value=float(edge_dev[i]),
        witness=(0.0, float(us[i])),
    )

    margin_dev = np.maximum(np.abs(g[:, -1] - us), np.abs(g[-1, :] - us))
    i = int(np.argmax(margin_dev))
    margins = Check(
        "uniform-margins",
        float(margin_dev[i]) <= tol,
        value=float(margin_dev[i]),
        witness=(float(us[i]), 1.0),
    )

    cells = g[1:, 1:] + g[:-1, :-1] - g[1:, :-1] - g[:-1, 1:]
    i, j = np.unravel_index(int(np.argmin(cells)), cells.shape)
    worst = Rect(float(us[i]), float(us[i + 1]), float(us[j]), float(us[j + 1]))
    rectangle = Check(
        "rectangle-inequality",
        float(cells[i, j]) >= -tol,
        value=float(cells[i, j]),
        witness=worst,
    )
    return [grounded, margins, rectangle]


@dataclass(frozen=True)
class BivariateBound:
    """A copula composed with two marginals: H(x, y) = C(F(x), G(y))."""

    copula: object
    f: DistFn
    g: DistFn

    def at(self, x: float, y: float) -> float:
        return float(copula_grid(self.copula, [self.f.eval(x)], [self.g.eval(y)])[0, 0])

    def at_many(self, xs, ys) -> np.ndarray:
        return copula_grid(self.copula, self.f.eval_many(xs), self.g.eval_many(ys))


def sklar_compose(c, f: DistFn, g: DistFn) -> BivariateBound:
    """H(x, y) = C(F(x), G(y)); 2-increasing and standardized whenever c is a
    copula, since monotone marginal substitution preserves both."""
    return BivariateBound(c, f, g)
