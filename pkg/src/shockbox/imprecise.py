"""Imprecise copulas: bound pairs, axiom checks, and coherence certification.

A pair (lowC, upC) of functions on the unit square is an imprecise copula when
both satisfy the copula boundary conditions and the four mixed rectangle
inequalities hold for every rectangle [u1,u2] x [v1,v2]:

    IC1:  lowC(u2,v2) + upC(u1,v1) - lowC(u2,v1) - lowC(u1,v2) >= 0
    IC2:  upC(u2,v2) + lowC(u1,v1) - lowC(u2,v1) - lowC(u1,v2) >= 0
    IC3:  upC(u2,v2) + upC(u1,v1) - upC(u2,v1) - lowC(u1,v2) >= 0
    IC4:  upC(u2,v2) + upC(u1,v1) - lowC(u2,v1) - upC(u1,v2) >= 0

Pointwise order lowC <= upC is implied but checked separately because it is
the condition users most often violate (swapped bounds).

The same four inequality shapes are necessary conditions for a pair of
standardized bivariate distribution functions to be a coherent bivariate
p-box; ``check_bivariate_pbox_conditions`` applies them on a real-plane grid
extended with the points at infinity.

``coherence_witness`` certifies a two-parameter family of copulas whose
bounds are themselves members: sampled members must stay within the bounds,
which are then attained, so the pair is coherent rather than merely a
containing envelope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .copulas import (
    BivariateBound,
    CopulaSpec,
    MarshallCopula,
    MaxminCopula,
    Rect,
    TabulatedCopula,
    check_copula_axioms,
    copula_grid,
)
from .distfn import ANALYTIC_TOL, EXACT_TOL, INF
from .errors import InvalidParameterError, NotAWitnessError
from .generators import Generator, blend_generators, check_generator
from .reports import Check

CopulaLike = Union[MarshallCopula, MaxminCopula, TabulatedCopula]

_CONDITIONS = ("IC1", "IC2", "IC3", "IC4", "order", "C3")


@dataclass(frozen=True)
class CopulaPair:
    """A candidate imprecise copula: pointwise lower and upper bound.

    Construction performs no validation beyond type plumbing; use
    ``check_imprecise_copula`` to test the defining conditions.
    """

    low: CopulaLike
    up: CopulaLike


@dataclass(frozen=True)
class ViolationWitness:
    """A rectangle on which one defining condition fails, with its value.

    ``value`` is the (negative) amount by which the inequality misses; for
    ``order`` the rectangle degenerates to a point (u1 == u2, v1 == v2).
    """

    rectangle: Rect
    condition: str
    value: float

    def __post_init__(self) -> None:
        if self.condition not in _CONDITIONS:
            raise InvalidParameterError(
                f"unknown condition {self.condition!r}, expected one of {_CONDITIONS}"
            )

    def to_dict(self) -> dict:
        r = self.rectangle
        return {
            "condition": self.condition,
            "value": self.value,
            "rectangle": {"u1": r.u1, "u2": r.u2, "v1": r.v1, "v2": r.v2},
        }


def _ic_scan(low: np.ndarray, up: np.ndarray) -> dict[str, tuple[float, tuple[int, int, int, int]]]:
    """Minimum of each mixed rectangle inequality over all grid rectangles.

    For fixed u1-index i1 every condition splits as p(i2, j2) + q(i2, j1)
    with j1 <= j2, so the inner minimum is a running minimum along j; the
    full scan is O(n^3) instead of O(n^4). Ties resolve to the first worst
    rectangle in scan order (i1, then i2, then j2, then j1 ascending), which
    makes reported witnesses deterministic.

    Returns condition -> (min value, (i1, i2, j1, j2) attaining it).
    """
    n = low.shape[0]
    results: dict[str, tuple[float, tuple[int, int, int, int]]] = {}
    for name in ("IC1", "IC2", "IC3", "IC4"):
        results[name] = (np.inf, (0, 0, 0, 0))
    for i1 in range(n):
        tail_l = low[i1:, :]
        tail_u = up[i1:, :]
        row_l = low[i1][None, :]
        row_u = up[i1][None, :]
        # p holds the terms indexed by (i2, j2), q those indexed by (i2, j1).
        splits = {
            "IC1": (tail_l - row_l, row_u - tail_l),
            "IC2": (tail_u - row_l, row_l - tail_l),
            "IC3": (tail_u - row_l, row_u - tail_u),
            "IC4": (tail_u - row_u, row_u - tail_l),
        }
        for name, (p, q) in splits.items():
            total = p + np.minimum.accumulate(q, axis=1)
            per_row = total.min(axis=1)
            k = int(np.argmin(per_row))
            value = float(per_row[k])
            if value < results[name][0]:
                j2 = int(np.argmin(total[k]))
                j1 = int(np.argmin(q[k, : j2 + 1]))
                results[name] = (value, (i1, i1 + k, j1, j2))
    return results


def _boundary_deviation(grid: np.ndarray, us: np.ndarray, vs: np.ndarray) -> tuple[float, tuple[float, float]]:
    """Worst absolute deviation from the copula boundary conditions.

    Checks C(u,0) = C(0,v) = 0, C(u,1) = u and C(1,v) = v on the grid edges.
    Returns (deviation, (u, v) where it is attained).
    """
    worst = 0.0
    where = (0.0, 0.0)
    edges = (
        (np.abs(grid[:, 0]), us, np.full_like(us, vs[0])),
        (np.abs(grid[0, :]), np.full_like(vs, us[0]), vs),
        (np.abs(grid[:, -1] - us), us, np.full_like(us, vs[-1])),
        (np.abs(grid[-1, :] - vs), np.full_like(vs, us[-1]), vs),
    )
    for devs, eus, evs in edges:
        k = int(np.argmax(devs))
        if float(devs[k]) > worst:
            worst = float(devs[k])
            where = (float(eus[k]), float(evs[k]))
    return worst, where


def check_imprecise_copula(pair: CopulaPair, n: int = 101, tol: float = EXACT_TOL) -> list[Check]:
    """Test the defining conditions of an imprecise copula on an n x n grid.

    Produces one check per condition: boundary conditions for each bound,
    pointwise order, and the four mixed rectangle inequalities. Witnesses
    are ``ViolationWitness`` records (populated also for passing checks, as
    the attaining rectangle of the minimum).
    """
    if n < 2:
        raise InvalidParameterError("grid needs at least two points per axis")
    us = np.linspace(0.0, 1.0, n)
    vs = us
    low = copula_grid(pair.low, us, vs)
    up = copula_grid(pair.up, us, vs)

    checks = []
    for name, grid in (("low-boundary", low), ("up-boundary", up)):
        dev, where = _boundary_deviation(grid, us, vs)
        checks.append(Check(name, dev <= tol, value=dev, witness=where))

    diff = up - low
    i, j = np.unravel_index(int(np.argmin(diff)), diff.shape)
    order_val = float(diff[i, j])
    checks.append(
        Check(
            "order",
            order_val >= -tol,
            value=order_val,
            witness=ViolationWitness(
                Rect(float(us[i]), float(us[i]), float(vs[j]), float(vs[j])),
                "order",
                order_val,
            ),
        )
    )

    for name, (value, (i1, i2, j1, j2)) in _ic_scan(low, up).items():
        rect = Rect(float(us[i1]), float(us[i2]), float(vs[j1]), float(vs[j2]))
        checks.append(
            Check(
                name,
                value >= -tol,
                value=value,
                witness=ViolationWitness(rect, name, value),
            )
        )
    return checks


def search_ic_violation(pair: CopulaPair, n: int = 51, tol: float = EXACT_TOL) -> list[ViolationWitness]:
    """Search an n x n grid for order and mixed-inequality violations.

    Exploratory: returns the worst witness per violated condition (empty
    list when the pair passes everything at this resolution). A finding
    here is grid evidence, not a certificate of failure at all scales;
    callers re-verify at higher resolution before treating it as one.
    """
    witnesses = []
    for check in check_imprecise_copula(pair, n=n, tol=tol):
        if check.passed or not isinstance(check.witness, ViolationWitness):
            continue
        witnesses.append(check.witness)
    return witnesses


def verify_witness(pair: CopulaPair, witness: ViolationWitness, tol: float = EXACT_TOL) -> bool:
    """Recompute a witness's condition value directly on its rectangle."""
    r = witness.rectangle
    us = np.array([r.u1, r.u2])
    vs_ = np.array([r.v1, r.v2])
    if r.u1 == r.u2:
        us = np.array([r.u1])
    if r.v1 == r.v2:
        vs_ = np.array([r.v1])
    low = copula_grid(pair.low, us, vs_)
    up = copula_grid(pair.up, us, vs_)
    l11, l12, l21, l22 = low[0, 0], low[0, -1], low[-1, 0], low[-1, -1]
    u11, u12, u21, u22 = up[0, 0], up[0, -1], up[-1, 0], up[-1, -1]
    value = {
        "IC1": l22 + u11 - l21 - l12,
        "IC2": u22 + l11 - l21 - l12,
        "IC3": u22 + u11 - u21 - l12,
        "IC4": u22 + u11 - l21 - u12,
        "order": u22 - l22,
        "C3": l22 + l11 - l21 - l12,
    }[witness.condition]
    return float(value) < -tol


def _h_grid(bound: BivariateBound, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    us = bound.f.eval_many(xs)
    vs = bound.g.eval_many(ys)
    return copula_grid(bound.copula, us, vs)


def check_bivariate_pbox_conditions(
    low_h: BivariateBound,
    up_h: BivariateBound,
    xs,
    ys,
    tol: float = EXACT_TOL,
) -> list[Check]:
    """Necessary conditions for (low_h, up_h) to be a coherent bivariate p-box.

    Both bounds must be standardized bivariate distribution functions
    (componentwise non-decreasing, 0 whenever an argument is -inf, 1 at
    (+inf, +inf)), low_h <= up_h pointwise, and the four mixed rectangle
    inequalities must hold on rectangles of the real plane. The supplied
    probe grid is extended with the points at infinity so the standardized
    conditions and unbounded rectangles are exercised.
    """
    xs = np.concatenate(([-INF], np.asarray(xs, dtype=float), [INF]))
    ys = np.concatenate(([-INF], np.asarray(ys, dtype=float), [INF]))
    low = np.array([[low_h.at(x, y) for y in ys] for x in xs])
    up = np.array([[up_h.at(x, y) for y in ys] for x in xs])

    checks = []
    for name, grid in (("standardized-low", low), ("standardized-up", up)):
        dev = max(
            float(np.max(np.abs(grid[0, :]))),
            float(np.max(np.abs(grid[:, 0]))),
            abs(float(grid[-1, -1]) - 1.0),
        )
        checks.append(Check(name, dev <= tol, value=dev))
    for name, grid in (("monotone-low", low), ("monotone-up", up)):
        worst = min(
            float(np.min(np.diff(grid, axis=0))),
            float(np.min(np.diff(grid, axis=1))),
        )
        checks.append(Check(name, worst >= -tol, value=worst))

    diff = up - low
    i, j = np.unravel_index(int(np.argmin(diff)), diff.shape)
    checks.append(
        Check(
            "order",
            float(diff[i, j]) >= -tol,
            value=float(diff[i, j]),
            witness=(float(xs[i]), float(ys[j])),
        )
    )

    for name, (value, (i1, i2, j1, j2)) in _ic_scan(low, up).items():
        witness = ((float(xs[i1]), float(xs[i2])), (float(ys[j1]), float(ys[j2])))
        checks.append(Check(name, value >= -tol, value=value, witness=witness))
    return checks


@dataclass(frozen=True)
class CopulaFamily:
    """Two-parameter family of shock-model copulas between generator envelopes.

    Members interpolate the first generator between (low_phi, up_phi) and the
    second between (low_second, up_second). For the max/max model the family
    minimum and maximum sit at the matching corners; for the max/min model the
    second generator acts antitone, so the extremes sit at opposite corners.
    """

    model: str
    low_phi: Generator
    up_phi: Generator
    low_second: Generator
    up_second: Generator

    def __post_init__(self) -> None:
        if self.model not in ("marshall", "maxmin"):
            raise InvalidParameterError(f"unknown model {self.model!r}")
        for g in (self.low_phi, self.up_phi):
            if g.kind not in ("phi", "psi"):
                raise InvalidParameterError("first-slot generators must be max-type")
        second_kind = "chi" if self.model == "maxmin" else self.low_second.kind
        expected = ("chi",) if self.model == "maxmin" else ("phi", "psi")
        for g in (self.low_second, self.up_second):
            if g.kind not in expected or g.kind != second_kind:
                raise InvalidParameterError(
                    f"second-slot generators must share kind {expected}"
                )

    def member(self, t_phi: float, t_second: float) -> CopulaSpec:
        """The copula at interpolation weights (toward the low envelopes)."""
        phi = blend_generators(self.low_phi, self.up_phi, t_phi)
        second = blend_generators(self.low_second, self.up_second, t_second)
        if self.model == "marshall":
            return MarshallCopula(phi, second)
        return MaxminCopula(phi, second)

    @property
    def low_copula(self) -> CopulaSpec:
        if self.model == "marshall":
            return MarshallCopula(self.low_phi, self.low_second)
        return MaxminCopula(self.low_phi, self.up_second)

    @property
    def up_copula(self) -> CopulaSpec:
        if self.model == "marshall":
            return MarshallCopula(self.up_phi, self.up_second)
        return MaxminCopula(self.up_phi, self.low_second)

    @property
    def pair(self) -> CopulaPair:
        return CopulaPair(self.low_copula, self.up_copula)


def coherence_witness(
    family: CopulaFamily,
    n: int = 101,
    tol: float = EXACT_TOL,
    members: int = 5,
    seed: int = 42,
) -> list[Check]:
    """Certify that a family's bound pair is a coherent imprecise copula.

    Coherence demands the bounds be attained, not merely contain the family:
    here both bounds are themselves members (the corner copulas), so it
    suffices that every member lies between them. Sampled interior members
    are validated as genuine copulas first; a member whose blended second
    generator fails its validity conditions is excluded from the family and
    skipped (counted in the note).

    Raises NotAWitnessError when either bound fails the copula axioms: such
    a pair cannot witness coherence at all.
    """
    low_c = family.low_copula
    up_c = family.up_copula
    for side, cop in (("low", low_c), ("up", up_c)):
        failed = [c.name for c in check_copula_axioms(cop, n=n, tol=tol) if not c.passed]
        if failed:
            raise NotAWitnessError(
                f"{side} bound fails copula axioms: {', '.join(failed)}"
            )
    checks = [
        Check("low-bound-axioms", True, note=f"verified on {n}x{n} grid"),
        Check("up-bound-axioms", True, note=f"verified on {n}x{n} grid"),
    ]

    gen_dev = 0.0
    gen_ok = True
    for g in (family.low_phi, family.up_phi, family.low_second, family.up_second):
        for c in check_generator(g, tol=max(tol, ANALYTIC_TOL)):
            gen_ok = gen_ok and c.passed
            if c.value is not None:
                gen_dev = max(gen_dev, abs(float(c.value)) if not c.passed else 0.0)
    checks.append(Check("envelope-generators-valid", gen_ok, value=gen_dev))

    rng = np.random.default_rng(seed)
    us = np.linspace(0.0, 1.0, n)
    low_grid = copula_grid(low_c, us, us)
    up_grid = copula_grid(up_c, us, us)
    member_grids = [low_grid, up_grid]

    worst = 0.0
    where = (0.0, 0.0)
    used = 0
    skipped = 0
    for _ in range(members):
        t_phi, t_second = (float(t) for t in rng.uniform(size=2))
        member = family.member(t_phi, t_second)
        gens = (member.phi, member.psi) if family.model == "marshall" else (member.phi, member.chi)
        if not all(c.passed for g in gens for c in check_generator(g, tol=ANALYTIC_TOL)):
            skipped += 1
            continue
        used += 1
        grid = copula_grid(member, us, us)
        member_grids.append(grid)
        escape = np.maximum(low_grid - grid, grid - up_grid)
        i, j = np.unravel_index(int(np.argmax(escape)), escape.shape)
        if float(escape[i, j]) > worst:
            worst = float(escape[i, j])
            where = (float(us[i]), float(us[j]))
    checks.append(
        Check(
            "members-within-bounds",
            worst <= tol,
            value=worst,
            witness=where,
            note=f"{used} sampled members, {skipped} skipped as invalid blends",
        )
    )

    stack = np.stack(member_grids)
    attain_dev = max(
        float(np.max(np.abs(stack.min(axis=0) - low_grid))),
        float(np.max(np.abs(stack.max(axis=0) - up_grid))),
    )
    checks.append(
        Check(
            "bounds-attained",
            attain_dev <= tol,
            value=attain_dev,
            note="bounds are the corner members, hence pointwise inf and sup",
        )
    )
    return checks
