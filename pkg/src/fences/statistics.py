"""Statistics on the ideal lattice as exact rational vectors.

A StatFn is a vector of Fractions indexed by IdealIndex position.  Bulk
integer tables (numpy int8) back the constructors and the linear-algebra
modules; every public value is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .core import Fence, PEAK, UNSHARED, VALLEY
from .dynamics import IdealIndex, OrbitDecomposition
from .errors import NotAntichain

Q = Fraction


# -- bulk integer tables -------------------------------------------------

def ideal_indicator_table(index: IdealIndex) -> np.ndarray:
    """(#J, n) 0/1 table of p-in-I."""
    n = index.fence.n
    shifts = np.arange(n, dtype=np.uint64)
    return ((index.masks[:, None] >> shifts[None, :]) & np.uint64(1)).astype(np.int8)


def antichain_indicator_table(index: IdealIndex) -> np.ndarray:
    """(#J, n) 0/1 table of p-in-max(I)."""
    fence = index.fence
    upper = np.array(fence.upper_mask[1:], dtype=np.uint64)
    masks = index.masks[:, None]
    inside = (masks >> np.arange(fence.n, dtype=np.uint64)[None, :]) & np.uint64(1)
    blocked = (masks & upper[None, :]) != 0
    return ((inside == 1) & ~blocked).astype(np.int8)


def toggle_in_table(index: IdealIndex) -> np.ndarray:
    """(#J, n) 0/1 table of p-in-min(complement)."""
    fence = index.fence
    lower = np.array(fence.lower_mask[1:], dtype=np.uint64)
    masks = index.masks[:, None]
    inside = (masks >> np.arange(fence.n, dtype=np.uint64)[None, :]) & np.uint64(1)
    supported = (masks & lower[None, :]) == lower[None, :]
    return ((inside == 0) & supported).astype(np.int8)


def toggle_table(index: IdealIndex) -> np.ndarray:
    """(#J, n) table of T_p values in {-1, 0, 1}."""
    return toggle_in_table(index) - antichain_indicator_table(index)


# -- StatFn ---------------------------------------------------------------

class StatFn:
    """Immutable exact statistic: one Fraction per ideal position."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = tuple(Q(v) for v in values)

    @staticmethod
    def zero(length: int) -> "StatFn":
        return StatFn([0] * length)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        return isinstance(other, StatFn) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __add__(self, other):
        return StatFn([a + b for a, b in zip(self.values, other.values, strict=True)])

    def __sub__(self, other):
        return StatFn([a - b for a, b in zip(self.values, other.values, strict=True)])

    def __rmul__(self, scalar):
        c = Q(scalar)
        return StatFn([c * v for v in self.values])

    def __repr__(self):
        return f"StatFn({list(self.values)!r})"

    def orbit_average(self, orbit) -> Fraction:
        return Q(sum(self.values[i] for i in orbit), len(orbit))

    def orbit_averages(self, orbits: OrbitDecomposition) -> list[Fraction]:
        return [self.orbit_average(o) for o in orbits.orbits]

    def is_homomesic(self, orbits: OrbitDecomposition):
        """(holds, common average or None, per-orbit averages)."""
        avgs = self.orbit_averages(orbits)
        same = all(a == avgs[0] for a in avgs)
        return same, (avgs[0] if same else None), avgs


def _column(table, index, p) -> StatFn:
    if p is None:
        return StatFn.zero(len(index))
    index.fence.check_element(p)
    return StatFn(int(v) for v in table[:, p - 1])


def chi_hat(index: IdealIndex, p: int | None) -> StatFn:
    """Ideal indicator of p; the None placeholder is the zero statistic."""
    return _column(ideal_indicator_table(index), index, p)


def chi(index: IdealIndex, p: int | None) -> StatFn:
    """Antichain indicator of p (p in max(I))."""
    return _column(antichain_indicator_table(index), index, p)


def togg(index: IdealIndex, p: int | None) -> StatFn:
    return _column(toggle_table(index), index, p)


def togg_plus(index: IdealIndex, p: int | None) -> StatFn:
    return _column(toggle_in_table(index), index, p)


def togg_minus(index: IdealIndex, p: int | None) -> StatFn:
    return _column(antichain_indicator_table(index), index, p)


def ideal_cardinality(index: IdealIndex) -> StatFn:
    return StatFn(int(v) for v in ideal_indicator_table(index).sum(axis=1))


def antichain_cardinality(index: IdealIndex) -> StatFn:
    return StatFn(int(v) for v in antichain_indicator_table(index).sum(axis=1))


# -- antichains -----------------------------------------------------------

@dataclass(frozen=True)
class Antichain:
    """A nonempty set of pairwise incomparable elements."""

    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def mask(self) -> int:
        out = 0
        for k in self.members:
            out |= 1 << (k - 1)
        return out

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"


def check_antichain(fence: Fence, members) -> Antichain:
    a = Antichain(tuple(members))
    if not a.members:
        raise NotAntichain("the empty antichain is excluded (its toggleability "
                           "statistic would be simultaneously +1 and -1)")
    for x, y in combinations(a.members, 2):
        if fence.comparable(x, y):
            raise NotAntichain(f"{x} and {y} are comparable in {fence}")
    return a


def enumerate_antichains(index: IdealIndex, include_empty: bool = False):
    """All antichains via max(I) over the ideal list, ascending bit order.

    max(.) is a bijection from ideals to antichains, so the count always
    equals #J; the empty antichain (from the empty ideal) is dropped unless
    requested.
    """
    fence = index.fence
    table = antichain_indicator_table(index)
    shifts = 1 << np.arange(fence.n, dtype=np.uint64)
    masks = sorted(int(m) for m in (table.astype(np.uint64) * shifts[None, :]).sum(axis=1))
    out = []
    for m in masks:
        members = tuple(k for k in range(1, fence.n + 1) if (m >> (k - 1)) & 1)
        if members or include_empty:
            out.append(Antichain(members))
    return out


def togg_antichain(index: IdealIndex, antichain) -> StatFn:
    """T_A: +1 when all of A toggles in, -1 when A lies in max(I), else 0."""
    fence = index.fence
    a = antichain if isinstance(antichain, Antichain) else Antichain(tuple(antichain))
    a = check_antichain(fence, a.members)
    tin = toggle_in_table(index)
    tout = antichain_indicator_table(index)
    cols = [p - 1 for p in a.members]
    all_in = tin[:, cols].all(axis=1)
    all_out = tout[:, cols].all(axis=1)
    return StatFn(int(v) for v in all_in.astype(np.int8) - all_out.astype(np.int8))


# -- linear expressions over indicator/toggle families --------------------

@dataclass
class StatExpr:
    """Rational-linear combination of indicator and toggle statistics.

    ``ideal``/``antichain``/``toggle`` map element positions to coefficients;
    ``const`` is the constant term.  Evaluation is exact.
    """

    ideal: dict[int, Fraction] = field(default_factory=dict)
    antichain: dict[int, Fraction] = field(default_factory=dict)
    toggle: dict[int, Fraction] = field(default_factory=dict)
    const: Fraction = Q(0)

    def __post_init__(self):
        self.ideal = {p: Q(c) for p, c in self.ideal.items() if c}
        self.antichain = {p: Q(c) for p, c in self.antichain.items() if c}
        self.toggle = {p: Q(c) for p, c in self.toggle.items() if c}
        self.const = Q(self.const)

    def evaluate(self, index: IdealIndex) -> StatFn:
        out = [self.const] * len(index)
        for table, coeffs in (
            (ideal_indicator_table(index), self.ideal),
            (antichain_indicator_table(index), self.antichain),
            (toggle_table(index), self.toggle),
        ):
            for p, c in coeffs.items():
                col = table[:, p - 1]
                out = [v + c * int(x) for v, x in zip(out, col)]
        return StatFn(out)

    def to_json_dict(self) -> dict:
        return {
            "ideal": {str(p): str(c) for p, c in sorted(self.ideal.items())},
            "antichain": {str(p): str(c) for p, c in sorted(self.antichain.items())},
            "toggle": {str(p): str(c) for p, c in sorted(self.toggle.items())},
            "const": str(self.const),
        }

    @staticmethod
    def from_json_dict(d: dict) -> "StatExpr":
        return StatExpr(
            ideal={int(p): Q(c) for p, c in d.get("ideal", {}).items()},
            antichain={int(p): Q(c) for p, c in d.get("antichain", {}).items()},
            toggle={int(p): Q(c) for p, c in d.get("toggle", {}).items()},
            const=Q(d.get("const", 0)),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _merge(dst: dict, p: int | None, c: Fraction):
    if p is None or c == 0:
        return
    dst[p] = dst.get(p, Q(0)) + c


def ideal_indicator_as_antichain(fence: Fence, p: int | None) -> StatExpr:
    """Rewrite the ideal indicator of p over antichain indicators and toggles.

    Peaks map to their own antichain indicator, unshared elements to the sum
    over their up-set, valleys to 1 - T_p - chi_p.  None (a placeholder for a
    nonexistent element) gives the zero expression.
    """
    expr = StatExpr()
    if p is None:
        return expr
    cls = fence.element_class(p)
    if cls.kind == PEAK:
        _merge(expr.antichain, p, Q(1))
    elif cls.kind == UNSHARED:
        for y in fence.up_set(p):
            _merge(expr.antichain, y, Q(1))
    else:
        expr.const = Q(1)
        _merge(expr.toggle, p, Q(-1))
        _merge(expr.antichain, p, Q(-1))
    return expr


def antichain_indicator_as_ideal(fence: Fence, p: int | None) -> StatExpr:
    """Rewrite the antichain indicator of p over ideal indicators and toggles."""
    expr = StatExpr()
    if p is None:
        return expr
    cls = fence.element_class(p)
    if cls.kind == PEAK:
        _merge(expr.ideal, p, Q(1))
    elif cls.kind == UNSHARED:
        _merge(expr.ideal, p, Q(1))
        ups = fence.upper_covers(p)
        if ups:
            _merge(expr.ideal, ups[0], Q(-1))
    else:
        expr.const = Q(1)
        _merge(expr.toggle, p, Q(-1))
        _merge(expr.ideal, p, Q(-1))
    return expr
