"""Toggleability and homomesy spaces of a fence.

Everything here is exact: certificates are verified componentwise over the
full ideal list, dimensions come from integer/rational rank computations, and
homomesy checks compare orbit averages as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .core import Fence, build_fence
from .dynamics import IdealIndex, enumerate_ideals, orbit_decomposition
from .errors import CertificateMismatch, VerificationError
from .statistics import (
    StatExpr,
    StatFn,
    antichain_indicator_table,
    check_antichain,
    chi,
    enumerate_antichains,
    ideal_cardinality,
    ideal_indicator_table,
    togg_antichain,
    toggle_table,
)

Q = Fraction


@dataclass(frozen=True)
class EquivCertificate:
    """Witness that a statistic equals constant + sum of c_p T_p."""

    constant: Fraction
    toggle_coeffs: dict[int, Fraction]

    def verify(self, index: IdealIndex, stat: StatFn) -> bool:
        T = toggle_table(index)
        for i, target in enumerate(stat.values):
            val = self.constant
            for p, c in self.toggle_coeffs.items():
                val += c * int(T[i, p - 1])
            if val != target:
                return False
        return True

    def to_json_dict(self) -> dict:
        return {
            "const": str(self.constant),
            "toggle": {str(p): str(c) for p, c in sorted(self.toggle_coeffs.items())},
        }


def equiv_const_solve(index: IdealIndex, stat: StatFn) -> EquivCertificate | None:
    """Exact solve of stat = c + sum c_p T_p; None when not in the span.

    The toggle statistics together with the constant are linearly
    independent, so a returned certificate is the unique one.  A growing row
    subset is solved exactly and the candidate verified on every ideal; each
    violated ideal joins the subset, so at most n+2 rounds occur.
    """
    fence = index.fence
    n = fence.n
    T = toggle_table(index)
    nj = len(index)
    chosen = list(range(min(nj, n + 5)))
    chosen_set = set(chosen)
    while True:
        system = [[1] + [int(x) for x in T[i]] for i in chosen]
        rhs = [stat[i] for i in chosen]
        sol = linalg.solve(system, rhs)
        if sol is None:
            return None
        cand = EquivCertificate(sol[0], {p: sol[p] for p in range(1, n + 1) if sol[p]})
        violation = _first_certificate_violation(T, stat, cand)
        if violation is None:
            return cand
        if violation in chosen_set:
            raise AssertionError("violated row already in the solved subsystem")
        chosen.append(violation)
        chosen_set.add(violation)


def _first_certificate_violation(T, stat, cert: EquivCertificate):
    items = list(cert.toggle_coeffs.items())
    for i, target in enumerate(stat.values):
        val = cert.constant
        for p, c in items:
            val += c * int(T[i, p - 1])
        if val != target:
            return i
    return None


@dataclass(frozen=True)
class BasisEntry:
    """One basis statistic with its closed-form certificate."""

    segment: int
    rank: int
    element: int
    expr: StatExpr
    certificate: EquivCertificate


def _segment_toggle_coeffs(fence: Fence, i: int, j: int, scale_low: int, scale_high: int,
                           include_valley: bool) -> dict[int, Fraction]:
    """Toggle coefficients shared by both closed-form certificates.

    Unshared element k of segment i gets -scale_low*k for k <= j and
    +scale_high*(beta-k+1) for k > j; the segment valley optionally joins
    with coefficient -1.
    """
    beta = fence.shape.alpha[i - 1] - 1
    coeffs: dict[int, Fraction] = {}
    for k in range(1, beta + 1):
        u = fence.unshared_element(i, k)
        coeffs[u] = Q(-scale_low * k) if k <= j else Q(scale_high * (beta - k + 1))
    if include_valley:
        v = fence.valley_of_segment(i)
        if v is not None:
            coeffs[v] = Q(-1)
    return {p: c for p, c in coeffs.items() if c}


def antichain_toggle_basis(fence: Fence, index: IdealIndex | None = None,
                           verify: bool = True) -> list[BasisEntry]:
    """Basis of the antichain toggleability space, one entry per unshared x.

    Entry (i, j): alpha_i*chi_x + chi_{s_{i-1}} + chi_{s_i}  with certificate
    constant 1, coefficient -1 on the segment valley, -k on unshared ranks
    k <= j and +(beta-k+1) above.  Raises CertificateMismatch if any entry
    fails componentwise verification.
    """
    if verify and index is None:
        index = enumerate_ideals(fence)
    out = []
    alpha = fence.shape.alpha
    for i in range(1, fence.t + 1):
        for j in range(1, alpha[i - 1]):
            x = fence.unshared_element(i, j)
            expr = StatExpr(antichain={x: Q(alpha[i - 1])})
            for s in (fence.shared_element(i - 1), fence.shared_element(i)):
                if s is not None:
                    expr.antichain[s] = expr.antichain.get(s, Q(0)) + 1
            cert = EquivCertificate(Q(1), _segment_toggle_coeffs(
                fence, i, j, scale_low=1, scale_high=1, include_valley=True))
            entry = BasisEntry(i, j, x, expr, cert)
            if verify and not cert.verify(index, expr.evaluate(index)):
                raise CertificateMismatch(f"antichain basis entry {i},{j} on {fence}")
            out.append(entry)
    return out


def ideal_toggle_basis(fence: Fence, index: IdealIndex | None = None,
                       verify: bool = True) -> list[BasisEntry]:
    """Basis of the ideal toggleability space, one entry per (segment, rank).

    Entry (i, j): alpha_i*chihat_{(i,j)} - j*chihat_p - (alpha_i-j)*chihat_v
    with constant (alpha_i-j) when the segment has no valley and coefficients
    -(alpha_i-j)*k / -j*(beta-k+1) on the segment's unshared toggles.
    """
    if verify and index is None:
        index = enumerate_ideals(fence)
    out = []
    alpha = fence.shape.alpha
    for i in range(1, fence.t + 1):
        a = alpha[i - 1]
        for j in range(1, a):
            x = fence.unshared_element(i, j)
            expr = StatExpr(ideal={x: Q(a)})
            p = fence.peak_of_segment(i)
            v = fence.valley_of_segment(i)
            if p is not None:
                expr.ideal[p] = expr.ideal.get(p, Q(0)) - j
            if v is not None:
                expr.ideal[v] = expr.ideal.get(v, Q(0)) - (a - j)
            const = Q(a - j) if v is None else Q(0)
            cert = EquivCertificate(const, _segment_toggle_coeffs(
                fence, i, j, scale_low=a - j, scale_high=-j, include_valley=False))
            entry = BasisEntry(i, j, x, expr, cert)
            if verify and not cert.verify(index, expr.evaluate(index)):
                raise CertificateMismatch(f"ideal basis entry {i},{j} on {fence}")
            out.append(entry)
    return out


# -- space dimensions ------------------------------------------------------

@dataclass(frozen=True)
class SpaceReport:
    """Exact dimensions of the four statistic spaces of one fence."""

    fence: str
    n: int
    t: int
    num_ideals: int
    num_orbits: int
    dim_IT: int
    dim_AT: int
    dim_IH: int
    dim_AH: int
    basis_A_verified: bool
    basis_I_verified: bool

    @property
    def single_orbit(self) -> bool:
        return self.num_orbits == 1

    @property
    def ih_equals_it(self) -> bool:
        return self.dim_IH == self.dim_IT

    def to_json_dict(self) -> dict:
        d = {k: getattr(self, k) for k in (
            "fence", "n", "t", "num_ideals", "num_orbits",
            "dim_IT", "dim_AT", "dim_IH", "dim_AH",
            "basis_A_verified", "basis_I_verified")}
        d["single_orbit"] = self.single_orbit
        d["ih_equals_it"] = self.ih_equals_it
        return d


def _orbit_difference_rows(table: np.ndarray, orbits) -> np.ndarray:
    """Integer rows whose kernel is the equal-orbit-average coefficient space.

    Row for orbit o against the last orbit L: |L|*sum_o - |o|*sum_L, which
    clears the average denominators without leaving the integers.
    """
    m = len(orbits.orbits)
    n = table.shape[1]
    sums = np.zeros((m, n), dtype=np.int64)
    np.add.at(sums, np.asarray(orbits.orbit_of), table.astype(np.int64))
    sizes = np.array([len(o) for o in orbits.orbits], dtype=np.int64)
    last = m - 1
    rows = sizes[last] * sums[:last] - sizes[:last, None] * sums[last]
    return rows


def space_dims(fence: Fence, index: IdealIndex | None = None,
               verify_bases: bool = True) -> SpaceReport:
    """Dimensions of the toggleability and homomesy spaces, all exact.

    dim_IT/dim_AT are subspace-intersection ranks of the indicator columns
    against span{T_p, 1}; dim_IH/dim_AH subtract the rank of the orbit
    average difference system from n.
    """
    if index is None:
        index = enumerate_ideals(fence)
    n = fence.n
    CH = ideal_indicator_table(index).astype(np.int64)
    CA = antichain_indicator_table(index).astype(np.int64)
    TO = np.hstack([toggle_table(index).astype(np.int64),
                    np.ones((len(index), 1), dtype=np.int64)])

    rank_ch = linalg.int_rank(CH)
    rank_ca = linalg.int_rank(CA)
    rank_to = linalg.int_rank(TO)
    if rank_ch != n or rank_ca != n:
        raise VerificationError(f"indicator families dependent on {fence}")
    dim_it = rank_ch + rank_to - linalg.int_rank(np.hstack([CH, TO]))
    dim_at = rank_ca + rank_to - linalg.int_rank(np.hstack([CA, TO]))

    orbits = orbit_decomposition(index, "rowmotion")
    if len(orbits) == 1:
        dim_ih = dim_ah = n
    else:
        dim_ih = n - linalg.int_rank(_orbit_difference_rows(CH, orbits))
        dim_ah = n - linalg.int_rank(_orbit_difference_rows(CA, orbits))

    if verify_bases:
        antichain_toggle_basis(fence, index, verify=True)
        ideal_toggle_basis(fence, index, verify=True)
    basis_a = basis_i = verify_bases

    return SpaceReport(
        fence=str(fence), n=n, t=fence.t,
        num_ideals=len(index), num_orbits=len(orbits),
        dim_IT=dim_it, dim_AT=dim_at, dim_IH=dim_ih, dim_AH=dim_ah,
        basis_A_verified=basis_a, basis_I_verified=basis_i,
    )


# -- antichain-toggle span -------------------------------------------------

def antichain_toggle_span_rank(index: IdealIndex) -> int:
    """Exact rank of {T_A : A nonempty} as vectors over the ideal list."""
    antichains = enumerate_antichains(index)
    rows = np.array([[int(v) for v in togg_antichain(index, a).values]
                     for a in antichains], dtype=np.int64)
    return linalg.int_rank(rows)


def express_in_antichain_toggle_span(index: IdealIndex, stat: StatFn):
    """Write stat as c + sum b_A T_A over nonempty antichains.

    Returns (c, {Antichain: coeff}) or None.  c must be the common orbit
    average, so non-homomesic statistics are rejected before any solve; the
    returned coefficients are one valid expression (the T_A are dependent,
    so they are not canonical).
    """
    orbits = orbit_decomposition(index, "rowmotion")
    holds, c, _ = stat.is_homomesic(orbits)
    if not holds:
        return None
    antichains = enumerate_antichains(index)
    columns = [togg_antichain(index, a).values for a in antichains]
    system = [[columns[j][i] for j in range(len(antichains))] for i in range(len(index))]
    rhs = [v - c for v in stat.values]
    sol = linalg.solve(system, rhs)
    if sol is None:
        return None
    coeffs = {a: x for a, x in zip(antichains, sol) if x}
    return c, coeffs


# -- closed-form identities ------------------------------------------------

def triple_peak_valley_terms(a: int):
    """Terms expressing chi_peak - chi_valley on the three-segment uniform
    fence F(a,a,a) inside the antichain-toggle span.

    Returns (singles, groups): element -> coeff for single toggles and
    member-tuple -> coeff for genuine antichain toggles.
    """
    singles: dict[int, Fraction] = {}
    groups: dict[tuple[int, ...], Fraction] = {}
    for i in range(1, a + 1):
        singles[i] = Q(-i)
    singles[2 * a] = Q(-(a - 1))
    for i in range(1, a):
        singles[3 * a - i] = Q(-i)
    for i in range(1, a):
        for j in range(0, i + 1):
            groups[(i, 2 * a + j)] = groups.get((i, 2 * a + j), Q(0)) + a
    for j in range(1, a):
        groups[(a, 2 * a + j)] = groups.get((a, 2 * a + j), Q(0)) + a
    for i in range(1, a):
        groups[(i, 2 * a - i, 2 * a + i)] = Q(-a)
    return singles, groups


def verify_triple_peak_valley_identity(a: int) -> bool:
    """Check the explicit antichain-toggle identity on F(a,a,a) (a >= 2)."""
    fence = build_fence((a, a, a))
    index = enumerate_ideals(fence)
    singles, groups = triple_peak_valley_terms(a)
    total = StatFn.zero(len(index))
    for p, c in singles.items():
        total = total + c * togg_antichain(index, check_antichain(fence, (p,)))
    for members, c in groups.items():
        total = total + c * togg_antichain(index, check_antichain(fence, members))
    lhs = chi(index, fence.shared_element(1)) - chi(index, fence.shared_element(2))
    return lhs == total


def uniform_fence_cardinality_certificate(a: int, t: int) -> EquivCertificate:
    """On F(a^t) with t odd: ideal cardinality minus a*(peak sum - valley sum)
    of antichain indicators equals n/2 up to toggles.

    Raises VerificationError when the solved constant is not n/2.
    """
    if t % 2 == 0:
        raise VerificationError("t must be odd")
    fence = build_fence((a,) * t)
    index = enumerate_ideals(fence)
    stat = ideal_cardinality(index)
    for p in fence.peaks():
        stat = stat - Q(a) * chi(index, p)
    for v in fence.valleys():
        stat = stat + Q(a) * chi(index, v)
    cert = equiv_const_solve(index, stat)
    if cert is None:
        raise VerificationError(f"statistic not in toggle span on {fence}")
    if cert.constant != Q(fence.n, 2):
        raise VerificationError(
            f"constant {cert.constant} != n/2 = {Q(fence.n, 2)} on {fence}")
    return cert
