"""Self-dual fences: ideal complement, the prime map, dihedral orbits, and
the conjecture scanners.

Everything assumes the validated order-reversing involution k -> n+1-k from
core.self_dual_involution (palindromic shape, odd segment count); scanners
over uniform fences F(a^t) keep t odd for the same reason.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Fence, Involution, build_fence, self_dual_involution
from .dynamics import (
    Ideal,
    IdealIndex,
    OrbitDecomposition,
    check_ideal,
    enumerate_ideals,
    generated_ideal_mask,
    orbit_decomposition,
)
from .errors import VerificationError
from .spaces import space_dims
from .statistics import StatFn, chi, chi_hat, ideal_cardinality

Q = Fraction


def _kappa_mask(kappa: Involution, mask: int, n: int) -> int:
    out = 0
    for k in range(1, n + 1):
        if (mask >> (k - 1)) & 1:
            out |= 1 << (kappa(k) - 1)
    return out


def ideal_complement(fence: Fence, kappa: Involution, ideal: Ideal) -> Ideal:
    """kappa applied to the set complement; always an ideal for valid kappa."""
    n = fence.n
    comp = ~ideal.mask & ((1 << n) - 1)
    out = _kappa_mask(kappa, comp, n)
    check_ideal(fence, out)
    return Ideal(out, n)


def prime_map(fence: Fence, kappa: Involution, ideal: Ideal) -> Ideal:
    """Ideal generated by kappa(max(I))."""
    n = fence.n
    mx = [p for p in range(1, n + 1)
          if (ideal.mask >> (p - 1)) & 1 and not ideal.mask & fence.upper_mask[p]]
    return Ideal(generated_ideal_mask(fence, [kappa(p) for p in mx]), n)


def dihedral_orbits(index: IdealIndex, kappa: Involution) -> OrbitDecomposition:
    """Orbits of the group generated by rowmotion and the prime map."""
    fence = index.fence
    rho = index.permutation("rowmotion")
    prime = [index.position(prime_map(fence, kappa, ideal)) for ideal in index]
    size = len(index)
    orbit_of = [-1] * size
    orbits = []
    for start in range(size):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbits)
        comp = []
        stack = [start]
        while stack:
            c = stack.pop()
            if orbit_of[c] >= 0:
                continue
            orbit_of[c] = oid
            comp.append(c)
            stack.append(int(rho[c]))
            stack.append(prime[c])
        orbits.append(tuple(sorted(comp)))
    return OrbitDecomposition("dihedral", tuple(orbits), tuple(orbit_of), cyclic=False)


@dataclass(frozen=True)
class SelfDualSuiteReport:
    """Exhaustive checks of the self-dual machinery on one fence."""

    fence: str
    complement_involution: bool      # bar is an ideal-valued involution
    prime_involution: bool
    rho_prime_relation: bool         # rho^{-1}(I') = (rho(I))' for every ideal
    dihedral_union_of_two: bool      # each dihedral orbit is 1 or 2 rho-orbits
    paired_orbits_equal_size: bool
    opposite_diffs_zero_on_dihedral: bool  # chi_l - chi_{kappa(l)} sums to 0
    paired_orbit_sums_cancel: bool

    @property
    def all_hold(self) -> bool:
        return all((self.complement_involution, self.prime_involution,
                    self.rho_prime_relation, self.dihedral_union_of_two,
                    self.paired_orbits_equal_size,
                    self.opposite_diffs_zero_on_dihedral,
                    self.paired_orbit_sums_cancel))


def verify_selfdual_suite(fence: Fence, index: IdealIndex | None = None) -> SelfDualSuiteReport:
    """Run the complement/prime/dihedral identities exhaustively on a fence."""
    kappa = self_dual_involution(fence)
    if kappa is None:
        raise VerificationError(f"{fence} has no validated order-reversing involution")
    if index is None:
        index = enumerate_ideals(fence)
    n = fence.n

    comp_ok = True
    prime_ok = True
    for ideal in index:
        bar = ideal_complement(fence, kappa, ideal)
        if ideal_complement(fence, kappa, bar).mask != ideal.mask:
            comp_ok = False
        pr = prime_map(fence, kappa, ideal)
        if prime_map(fence, kappa, pr).mask != ideal.mask:
            prime_ok = False

    rho = index.permutation("rowmotion")
    rho_inv = [0] * len(index)
    for i, img in enumerate(rho):
        rho_inv[int(img)] = i
    prime = [index.position(prime_map(fence, kappa, ideal)) for ideal in index]
    relation_ok = all(rho_inv[prime[i]] == prime[int(rho[i])] for i in range(len(index)))

    rho_orbits = orbit_decomposition(index, "rowmotion")
    dihedral = dihedral_orbits(index, kappa)
    union_ok = True
    sizes_ok = True
    pairing: list[tuple[tuple[int, ...], ...]] = []
    for comp in dihedral.orbits:
        parts = sorted({rho_orbits.orbit_of[i] for i in comp})
        if len(parts) > 2:
            union_ok = False
        if len(parts) == 2:
            a, b = (rho_orbits.orbits[p] for p in parts)
            if len(a) != len(b):
                sizes_ok = False
            pairing.append((a, b))
        else:
            pairing.append((rho_orbits.orbits[parts[0]],))

    diffs_ok = True
    cancel_ok = True
    for ell in range(1, n + 1):
        stat = chi(index, ell) - chi(index, kappa(ell))
        for comp in dihedral.orbits:
            if sum(stat[i] for i in comp) != 0:
                diffs_ok = False
        for group in pairing:
            total = sum(sum(stat[i] for i in orbit) for orbit in group)
            if total != 0:
                cancel_ok = False

    return SelfDualSuiteReport(
        fence=str(fence),
        complement_involution=comp_ok,
        prime_involution=prime_ok,
        rho_prime_relation=relation_ok,
        dihedral_union_of_two=union_ok,
        paired_orbits_equal_size=sizes_ok,
        opposite_diffs_zero_on_dihedral=diffs_ok,
        paired_orbit_sums_cancel=cancel_ok,
    )


# -- sufficiency equivalences ----------------------------------------------

@dataclass(frozen=True)
class OppositePairReport:
    """Homomesy status of the opposite-pair statistic families on one fence.

    Opposite means k versus n+1-k; shared pairs match s_i with s_{t-i}.
    The implication flags restate the proved sufficiency directions: shared
    differences being 0-mesic forces the whole family, shared sums being
    1-mesic likewise, and the two full families are equivalent.
    """

    fence: str
    shared_diffs_0mesic: bool
    shared_sums_1mesic: bool
    all_diffs_0mesic: bool
    all_sums_1mesic: bool

    @property
    def sufficiency_holds(self) -> bool:
        ok = True
        if self.shared_diffs_0mesic:
            ok &= self.all_diffs_0mesic and self.all_sums_1mesic
        if self.shared_sums_1mesic:
            ok &= self.all_diffs_0mesic and self.all_sums_1mesic
        ok &= self.all_diffs_0mesic == self.all_sums_1mesic
        return ok


def verify_opposite_pair_homomesies(fence: Fence,
                                    index: IdealIndex | None = None) -> OppositePairReport:
    if fence.t % 2 == 0 or not fence.shape.is_palindromic():
        raise VerificationError(f"{fence} is not palindromic with odd t")
    if index is None:
        index = enumerate_ideals(fence)
    n, t = fence.n, fence.t
    orbits = orbit_decomposition(index, "rowmotion")

    def zero_mesic(stat: StatFn) -> bool:
        holds, c, _ = stat.is_homomesic(orbits)
        return holds and c == 0

    def one_mesic(stat: StatFn) -> bool:
        holds, c, _ = stat.is_homomesic(orbits)
        return holds and c == 1

    shared_diffs = all(
        zero_mesic(chi(index, fence.shared_element(i)) - chi(index, fence.shared_element(t - i)))
        for i in range(1, t))
    shared_sums = all(
        one_mesic(chi_hat(index, fence.shared_element(i)) + chi_hat(index, fence.shared_element(t - i)))
        for i in range(1, t))
    all_diffs = all(
        zero_mesic(chi(index, k) - chi(index, n + 1 - k)) for k in range(1, n + 1))
    all_sums = all(
        one_mesic(chi_hat(index, k) + chi_hat(index, n + 1 - k)) for k in range(1, n + 1))

    return OppositePairReport(str(fence), shared_diffs, shared_sums, all_diffs, all_sums)


# -- conjecture scanners -----------------------------------------------------

@dataclass(frozen=True)
class StatVerdict:
    name: str
    target: str
    holds: bool
    witness_orbit: int | None = None
    witness_average: str | None = None


@dataclass(frozen=True)
class ConjectureReport:
    conjecture: str
    fence: str
    holds: bool
    num_orbits: int
    statistics: tuple[StatVerdict, ...] = ()
    payload: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        d = {
            "conjecture": self.conjecture,
            "fence": self.fence,
            "holds": self.holds,
            "orbits": self.num_orbits,
            "statistics": [vars(s) for s in self.statistics],
        }
        d.update(self.payload)
        return d


def _verdict(name: str, stat: StatFn, target: Fraction,
             orbits: OrbitDecomposition) -> StatVerdict:
    avgs = stat.orbit_averages(orbits)
    bad = next((i for i, a in enumerate(avgs) if a != target), None)
    if bad is None:
        return StatVerdict(name, str(target), True)
    return StatVerdict(name, str(target), False, bad, str(avgs[bad]))


def uniform_shapes(max_apt: int, extended: bool = False):
    """F(a^t) shapes with t odd, a >= 2 and a+t <= max_apt (plus the two
    larger extended-mode cases)."""
    shapes = [(a,) * t
              for t in range(3, max_apt, 2)
              for a in range(2, max_apt - t + 1)]
    if extended:
        shapes += [(2,) * 9, (8,) * 3]
    return sorted(set(shapes), key=lambda s: (sum(s), len(s)))


def scan_fence(conjecture: str, alpha) -> ConjectureReport:
    """Exact orbit-average scan of one conjecture on one fence."""
    fence = build_fence(alpha)
    index = enumerate_ideals(fence)
    t, n = fence.t, fence.n

    if conjecture == "c7_2":
        report = space_dims(fence, index, verify_bases=False)
        codim = report.dim_IH - report.dim_IT
        return ConjectureReport(
            "c7_2", str(fence), True, report.num_orbits,
            payload={"codim": codim, "dim_IH": report.dim_IH, "dim_IT": report.dim_IT})

    orbits = orbit_decomposition(index, "rowmotion")
    verdicts = []
    if conjecture == "c5_1":
        verdicts.append(_verdict("ideal-cardinality", ideal_cardinality(index),
                                 Q(n, 2), orbits))
    elif conjecture == "c5_2":
        stat = StatFn.zero(len(index))
        for p in fence.peaks():
            stat = stat + chi(index, p)
        for v in fence.valleys():
            stat = stat - chi(index, v)
        verdicts.append(_verdict("peaks-minus-valleys", stat, Q(0), orbits))
    elif conjecture == "c5_3":
        for i in range(1, t):
            stat = chi(index, fence.shared_element(i)) - chi(index, fence.shared_element(t - i))
            verdicts.append(_verdict(f"shared-diff-{i}", stat, Q(0), orbits))
    else:
        raise ValueError(f"unknown conjecture {conjecture!r}")

    return ConjectureReport(conjecture, str(fence), all(v.holds for v in verdicts),
                            len(orbits), tuple(verdicts))


def scan_conjecture(conjecture: str, max_apt: int | None = None,
                    t: int | None = None, max_n: int | None = None,
                    extended: bool = False) -> list[ConjectureReport]:
    """Scan a conjecture over its range; never stops at the first failure.

    c5_1/c5_2/c5_3 range over uniform fences bounded by max_apt; c7_2 ranges
    over all fences with the given number of segments and n <= max_n.
    """
    conjecture = conjecture.lower()
    if conjecture in ("c5_1", "c5_2", "c5_3"):
        if max_apt is None:
            raise ValueError("c5 scans need max_apt")
        shapes = uniform_shapes(max_apt, extended)
    elif conjecture == "c7_2":
        if t is None or max_n is None:
            raise ValueError("c7_2 scans need t and max_n")
        from .core import iter_shapes
        shapes = [s.alpha for s in iter_shapes(max_n, t=t)]
    else:
        raise ValueError(f"unknown conjecture {conjecture!r}")
    return [scan_fence(conjecture, alpha) for alpha in shapes]


def summarize_codimensions(reports) -> dict:
    """Aggregate a c7_2 scan: which dim_IH - dim_IT values were reached."""
    achieved = sorted({r.payload["codim"] for r in reports})
    return {"achieved_codims": achieved, "num_fences": len(reports)}
