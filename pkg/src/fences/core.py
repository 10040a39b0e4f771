"""Fence posets: construction, structure queries, canonical text form.

A fence is a zigzag of alternating maximal chains (segments) described by a
composition ``alpha = (a_1, ..., a_t)`` with ``t >= 2``, ``a_1, a_t >= 2`` and
interior parts ``>= 1``.  Elements are numbered 1..n along the zigzag with
``n = sum(alpha) - 1``; segment 1 ascends.  Bit k-1 of a mask stands for
element k throughout the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import IndexOutOfRange, ShapeInvalid

PEAK = "peak"
VALLEY = "valley"
UNSHARED = "unshared"


@dataclass(frozen=True)
class FenceShape:
    """The composition defining a fence."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        a = tuple(int(x) for x in self.alpha)
        object.__setattr__(self, "alpha", a)
        if len(a) < 2:
            raise ShapeInvalid(f"need at least 2 segments, got {a}")
        if a[0] < 2 or a[-1] < 2:
            raise ShapeInvalid(f"end parts must be >= 2, got {a}")
        if any(x < 1 for x in a):
            raise ShapeInvalid(f"all parts must be >= 1, got {a}")

    @property
    def t(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return sum(self.alpha) - 1

    def is_palindromic(self) -> bool:
        return self.alpha == self.alpha[::-1]

    def __str__(self):
        return "F(" + ",".join(str(a) for a in self.alpha) + ")"


@dataclass(frozen=True)
class ElementClass:
    """Tag for one element: peak, valley, or unshared with (segment, rank).

    For unshared elements the rank is 1-based from the poset-minimal side of
    the segment's unshared chain (so on descending segments rank 1 sits at the
    right end of the drawing).
    """

    kind: str
    segment: int = 0
    rank: int = 0

    def __str__(self):
        if self.kind == UNSHARED:
            return f"unshared({self.segment},{self.rank})"
        return self.kind


@dataclass(frozen=True)
class Involution:
    """An order-reversing involution, stored as perm[k] for k = 1..n."""

    perm: tuple[int, ...]

    def __call__(self, k: int) -> int:
        return self.perm[k - 1]


class Fence:
    """The concrete poset for a shape. Immutable after construction."""

    def __init__(self, shape: FenceShape):
        self.shape = shape
        alpha = shape.alpha
        self.t = shape.t
        self.n = shape.n
        n, t = self.n, self.t

        # bounds[i] = position of s_i (cumulative sums); bounds[0] = 0
        bounds = [0]
        for a in alpha:
            bounds.append(bounds[-1] + a)
        self.segment_bounds = tuple(bounds)

        covers = []
        for k in range(1, n):
            i = self._segment_of_step(k)
            covers.append((k, k + 1) if i % 2 == 1 else (k + 1, k))
        self.covers = tuple(covers)

        self.upper_mask = [0] * (n + 1)
        self.lower_mask = [0] * (n + 1)
        for lo, hi in covers:
            self.upper_mask[lo] |= 1 << (hi - 1)
            self.lower_mask[hi] |= 1 << (lo - 1)

        self.shared = {i: bounds[i] for i in range(1, t)}
        classes: list[ElementClass | None] = [None] * (n + 1)
        for i in range(1, t):
            classes[bounds[i]] = ElementClass(PEAK if i % 2 == 1 else VALLEY)
        for i in range(1, t + 1):
            beta = alpha[i - 1] - 1
            for j in range(1, beta + 1):
                classes[self._unshared_position(i, j)] = ElementClass(UNSHARED, i, j)
        self.classes = tuple(classes[1:])

        cols = [0] * (n + 1)
        covset = set(covers)
        for k in range(1, n):
            cols[k + 1] = cols[k] + (1 if (k, k + 1) in covset else 0)
        self.columns = tuple(cols[1:])
        self.num_columns = max(self.columns) + 1

        h = [0] * (n + 1)
        changed = True
        while changed:
            changed = False
            for lo, hi in covers:
                if h[hi] < h[lo] + 1:
                    h[hi] = h[lo] + 1
                    changed = True
        self.heights = tuple(h[1:])

    def _segment_of_step(self, k: int) -> int:
        b = self.segment_bounds
        for i in range(1, self.t + 1):
            if b[i - 1] <= k < b[i]:
                return i
        raise IndexOutOfRange(f"step {k} outside fence")

    def _unshared_position(self, i: int, j: int) -> int:
        b = self.segment_bounds
        return b[i - 1] + j if i % 2 == 1 else b[i] - j

    # -- structure queries ------------------------------------------------

    def check_element(self, k: int) -> int:
        if not 1 <= k <= self.n:
            raise IndexOutOfRange(f"element {k} outside 1..{self.n}")
        return k

    def element_class(self, k: int) -> ElementClass:
        return self.classes[self.check_element(k) - 1]

    def shared_element(self, i: int) -> int | None:
        """Position of s_i, or None for the out-of-range placeholders s_0, s_t."""
        return self.shared.get(i)

    def unshared_element(self, i: int, j: int) -> int | None:
        """Position of the j-th minimal unshared element of segment i, or None."""
        if not (1 <= i <= self.t and 1 <= j <= self.shape.alpha[i - 1] - 1):
            return None
        return self._unshared_position(i, j)

    def segment_elements(self, i: int) -> tuple[int, ...]:
        b = self.segment_bounds
        lo = max(1, b[i - 1])
        hi = min(self.n, b[i])
        return tuple(range(lo, hi + 1))

    def unshared_of_segment(self, i: int) -> tuple[int, ...]:
        beta = self.shape.alpha[i - 1] - 1
        return tuple(self._unshared_position(i, j) for j in range(1, beta + 1))

    def peak_of_segment(self, i: int) -> int | None:
        if i - 1 >= 1 and (i - 1) % 2 == 1:
            return self.shared[i - 1]
        if i <= self.t - 1 and i % 2 == 1:
            return self.shared[i]
        return None

    def valley_of_segment(self, i: int) -> int | None:
        if i - 1 >= 1 and (i - 1) % 2 == 0:
            return self.shared[i - 1]
        if i <= self.t - 1 and i % 2 == 0:
            return self.shared[i]
        return None

    def peaks(self) -> tuple[int, ...]:
        return tuple(self.shared[i] for i in range(1, self.t) if i % 2 == 1)

    def valleys(self) -> tuple[int, ...]:
        return tuple(self.shared[i] for i in range(1, self.t) if i % 2 == 0)

    def upper_covers(self, k: int) -> tuple[int, ...]:
        m = self.upper_mask[self.check_element(k)]
        return tuple(q for q in range(1, self.n + 1) if (m >> (q - 1)) & 1)

    def lower_covers(self, k: int) -> tuple[int, ...]:
        m = self.lower_mask[self.check_element(k)]
        return tuple(q for q in range(1, self.n + 1) if (m >> (q - 1)) & 1)

    def minimal_elements(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if not self.lower_mask[k])

    def maximal_elements(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if not self.upper_mask[k])

    def comparable(self, x: int, y: int) -> bool:
        """Two elements are comparable iff some segment contains both."""
        self.check_element(x)
        self.check_element(y)
        if x == y:
            return True
        b = self.segment_bounds
        lo, hi = min(x, y), max(x, y)
        for i in range(1, self.t + 1):
            if max(1, b[i - 1]) <= lo and hi <= b[i]:
                return True
        return False

    def leq(self, x: int, y: int) -> bool:
        if not self.comparable(x, y):
            return False
        if x == y:
            return True
        b = self.segment_bounds
        lo, hi = min(x, y), max(x, y)
        i = next(i for i in range(1, self.t + 1) if max(1, b[i - 1]) <= lo and hi <= b[i])
        ascending = i % 2 == 1
        return (x < y) if ascending else (y < x)

    def up_set(self, k: int) -> tuple[int, ...]:
        """All y with k <= y, a chain inside k's segment(s)."""
        return tuple(y for y in range(1, self.n + 1) if self.leq(k, y))

    def rowmotion_order(self) -> tuple[int, ...]:
        """Toggle order for rowmotion: decreasing height, ties by index."""
        return tuple(sorted(range(1, self.n + 1), key=lambda k: (-self.heights[k - 1], k)))

    def __str__(self):
        return str(self.shape)

    def __repr__(self):
        return f"Fence({self.shape.alpha})"


def build_fence(shape) -> Fence:
    """Construct the fence for a shape (tuple/list accepted)."""
    if not isinstance(shape, FenceShape):
        shape = FenceShape(tuple(shape))
    return Fence(shape)


def element_class(fence: Fence, k: int) -> ElementClass:
    return fence.element_class(k)


def self_dual_involution(fence: Fence) -> Involution | None:
    """Index reversal k -> n+1-k when it is a valid order-reversing map.

    Returns None when alpha is not palindromic or when some cover fails to
    reverse (palindromic shapes with an even number of segments fail this).
    """
    if not fence.shape.is_palindromic():
        return None
    n = fence.n
    covset = set(fence.covers)
    for lo, hi in fence.covers:
        if (n + 1 - hi, n + 1 - lo) not in covset:
            return None
    return Involution(tuple(n + 1 - k for k in range(1, n + 1)))


_FENCE_RE = re.compile(r"^\s*F?\(?\s*([0-9]+(?:\s*,\s*[0-9]+)+)\s*\)?\s*$")


def parse_fence(text: str) -> Fence:
    """Parse 'F(3,3,2)' (or bare '3,3,2') into a Fence."""
    m = _FENCE_RE.match(text)
    if not m:
        raise ShapeInvalid(f"cannot parse fence string {text!r}")
    alpha = tuple(int(x) for x in m.group(1).split(","))
    return build_fence(alpha)


def iter_shapes(max_n: int, t: int | None = None, min_n: int = 3,
                palindromic: bool = False):
    """Yield FenceShape values with n in [min_n, max_n], smallest n first.

    Within one n, shapes come in lexicographic order of alpha; ``t`` filters
    the number of segments and ``palindromic`` keeps only mirror-symmetric
    compositions.
    """
    for n in range(min_n, max_n + 1):
        total = n + 1
        ts = [t] if t is not None else list(range(2, total - 1))
        for tt in ts:
            if tt < 2:
                continue
            for alpha in _compositions(total, tt):
                shape = FenceShape(alpha)
                if palindromic and not shape.is_palindromic():
                    continue
                yield shape


def _compositions(total: int, parts: int):
    """Compositions of ``total`` into ``parts`` parts, ends >= 2, middle >= 1."""
    def rec(prefix, rem, left):
        if left == 1:
            if rem >= 2:
                yield tuple(prefix) + (rem,)
            return
        lo = 2 if not prefix else 1
        for v in range(lo, rem - left + 2):
            yield from rec(prefix + [v], rem - v, left - 1)

    if parts >= 2 and total >= 4:
        yield from rec([], total, parts)
