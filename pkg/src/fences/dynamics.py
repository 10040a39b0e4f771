"""Order ideals of a fence: enumeration, toggles, rowmotion, promotion,
recombination and orbit decomposition.

Ideals are bit fields (bit k-1 = element k, n <= 64).  The ideal list is
always sorted by unsigned bit pattern, position 0 being the empty ideal, so
positions are reproducible across runs and backends.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import Fence
from .errors import IndexOutOfRange, NotAnIdeal, TooLarge


@dataclass(frozen=True)
class Ideal:
    """One order ideal as a bitmask over elements 1..n."""

    mask: int
    n: int

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if (self.mask >> (k - 1)) & 1)

    def __contains__(self, k: int) -> bool:
        return 1 <= k <= self.n and bool((self.mask >> (k - 1)) & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __str__(self):
        return "{" + ",".join(map(str, self.members)) + "}"

    @staticmethod
    def from_members(members, n: int) -> "Ideal":
        mask = 0
        for k in members:
            if not 1 <= k <= n:
                raise IndexOutOfRange(f"element {k} outside 1..{n}")
            mask |= 1 << (k - 1)
        return Ideal(mask, n)


_IDEAL_RE = re.compile(r"^\s*\{\s*([0-9]+(?:\s*,\s*[0-9]+)*)?\s*\}\s*$")


def parse_ideal(text: str, fence: Fence) -> Ideal:
    m = _IDEAL_RE.match(text)
    if not m:
        raise NotAnIdeal(f"cannot parse ideal string {text!r}")
    members = [int(x) for x in m.group(1).split(",")] if m.group(1) else []
    ideal = Ideal.from_members(members, fence.n)
    check_ideal(fence, ideal.mask)
    return ideal


def is_ideal_mask(fence: Fence, mask: int) -> bool:
    for lo, hi in fence.covers:
        if (mask >> (hi - 1)) & 1 and not (mask >> (lo - 1)) & 1:
            return False
    return True


def check_ideal(fence: Fence, mask: int) -> int:
    if not is_ideal_mask(fence, mask):
        raise NotAnIdeal(f"{Ideal(mask, fence.n)} is not downward closed in {fence}")
    return mask


class IdealIndex:
    """All ideals of a fence in ascending bit-pattern order."""

    def __init__(self, fence: Fence, masks: np.ndarray):
        self.fence = fence
        self.masks = masks
        self._pos = {int(m): i for i, m in enumerate(masks)}
        self._perms: dict[str, np.ndarray] = {}

    def __len__(self):
        return len(self.masks)

    def ideal_at(self, position: int) -> Ideal:
        return Ideal(int(self.masks[position]), self.fence.n)

    def position(self, ideal) -> int:
        mask = ideal.mask if isinstance(ideal, Ideal) else int(ideal)
        try:
            return self._pos[mask]
        except KeyError:
            raise NotAnIdeal(f"mask {mask:#x} is not an ideal of {self.fence}") from None

    def __iter__(self):
        for i in range(len(self.masks)):
            yield self.ideal_at(i)

    def permutation(self, map_name: str) -> np.ndarray:
        """Position permutation of rowmotion/promotion over the whole index."""
        if map_name not in self._perms:
            fence = self.fence
            if map_name == "rowmotion":
                order0 = [p - 1 for p in fence.rowmotion_order()]
            elif map_name == "promotion":
                order0 = list(range(fence.n))
            else:
                raise ValueError(f"unknown map {map_name!r}")
            lower = np.array(fence.lower_mask[1:], dtype=np.uint64)
            upper = np.array(fence.upper_mask[1:], dtype=np.uint64)
            images = _kernels.toggle_sweep(self.masks, np.array(order0), lower, upper)
            perm = np.searchsorted(self.masks, images)
            if not np.array_equal(self.masks[perm], images):
                raise NotAnIdeal(f"{map_name} image left the ideal lattice of {fence}")
            self._perms[map_name] = perm.astype(np.int64)
        return self._perms[map_name]


def enumerate_ideals(fence: Fence) -> IdealIndex:
    """Complete, duplicate-free ideal list (DP along the zigzag)."""
    if fence.n > 64:
        raise TooLarge(f"n = {fence.n} exceeds the 64-bit ideal representation")
    covset = set(fence.covers)
    ascending = np.array([(k, k + 1) in covset for k in range(1, fence.n)], dtype=bool)
    masks = _kernels.enumerate_ideal_masks(fence.n, ascending)
    return IdealIndex(fence, masks)


def toggle(fence: Fence, ideal: Ideal, p: int) -> Ideal:
    """The involution adding/removing p when the result stays an ideal."""
    fence.check_element(p)
    mask = ideal.mask
    bit = 1 << (p - 1)
    lo = fence.lower_mask[p]
    up = fence.upper_mask[p]
    if not mask & bit and (mask & lo) == lo:
        return Ideal(mask | bit, fence.n)
    if mask & bit and not mask & up:
        return Ideal(mask & ~bit, fence.n)
    return ideal


def rowmotion(fence: Fence, ideal: Ideal) -> Ideal:
    """Toggle sweep from the top of the linear extension downward."""
    out = ideal
    for p in fence.rowmotion_order():
        out = toggle(fence, out, p)
    return out


def rowmotion_via_generator(fence: Fence, ideal: Ideal) -> Ideal:
    """The defining form: ideal generated by the minimal complement elements."""
    n = fence.n
    comp = ~ideal.mask & ((1 << n) - 1)
    mins = [k for k in range(1, n + 1)
            if (comp >> (k - 1)) & 1 and (ideal.mask & fence.lower_mask[k]) == fence.lower_mask[k]]
    return Ideal(generated_ideal_mask(fence, mins), n)


def generated_ideal_mask(fence: Fence, generators) -> int:
    """Downward closure of a set of elements."""
    out = 0
    stack = list(generators)
    while stack:
        k = stack.pop()
        bit = 1 << (k - 1)
        if out & bit:
            continue
        out |= bit
        stack.extend(fence.lower_covers(k))
    return out


def rowmotion_inverse(fence: Fence, ideal: Ideal) -> Ideal:
    out = ideal
    for p in reversed(fence.rowmotion_order()):
        out = toggle(fence, out, p)
    return out


def promotion(fence: Fence, ideal: Ideal) -> Ideal:
    """Left-to-right sweep: toggle at element 1 first, element n last."""
    out = ideal
    for p in range(1, fence.n + 1):
        out = toggle(fence, out, p)
    return out


def column_masks(fence: Fence) -> list[int]:
    cols = [0] * fence.num_columns
    for k in range(1, fence.n + 1):
        cols[fence.columns[k - 1]] |= 1 << (k - 1)
    return cols


def recombination(fence: Fence, ideal: Ideal) -> Ideal:
    """Reassemble an ideal column by column from successive rowmotion images.

    Column j (0-based, in the rotated drawing) is taken from the j-th
    rowmotion iterate.  The result is checked for downward closure; a failure
    would contradict the lattice-projection property and raises NotAnIdeal.
    """
    cols = column_masks(fence)
    out = 0
    cur = ideal
    for colmask in cols:
        out |= cur.mask & colmask
        cur = rowmotion(fence, cur)
    check_ideal(fence, out)
    return Ideal(out, fence.n)


@dataclass(frozen=True)
class OrbitDecomposition:
    """Partition of ideal positions into orbits of a map.

    For a cyclic map each orbit lists positions in application order starting
    from its smallest member; for group actions (``cyclic=False``) orbits are
    sorted position sets.
    """

    map_name: str
    orbits: tuple[tuple[int, ...], ...]
    orbit_of: tuple[int, ...]
    cyclic: bool = True

    def __len__(self):
        return len(self.orbits)

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.orbits)


def orbit_decomposition(fence_or_index, map_name: str = "rowmotion") -> OrbitDecomposition:
    """Cycle partition of rowmotion or promotion acting on the ideal list."""
    index = fence_or_index
    if isinstance(index, Fence):
        index = enumerate_ideals(index)
    perm = index.permutation(map_name)
    return decompose_permutation(perm, map_name)


def decompose_permutation(perm, map_name: str) -> OrbitDecomposition:
    size = len(perm)
    orbit_of = [-1] * size
    orbits = []
    for start in range(size):
        if orbit_of[start] >= 0:
            continue
        oid = len(orbits)
        cycle = []
        cur = start
        while orbit_of[cur] < 0:
            orbit_of[cur] = oid
            cycle.append(cur)
            cur = int(perm[cur])
        orbits.append(tuple(cycle))
    return OrbitDecomposition(map_name, tuple(orbits), tuple(orbit_of))
