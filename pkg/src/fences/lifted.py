"""Piecewise-linear and birational rowmotion on labelings of the fence plus
boundary elements, with exact rational iteration and float Cesàro estimates.

Exact paths use gmpy2.mpq when importable (an order of magnitude faster on
the large numerators these orbits produce) and fractions.Fraction otherwise;
both are exact rationals and interoperate.  The Cesàro estimator is the only
floating-point surface of the package and runs on mpmath at a configurable
precision.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .core import Fence
from .dynamics import Ideal
from .errors import ExactArithmeticOverflow, NonIntegerExponent, VerificationError
from .statistics import StatExpr

try:
    from gmpy2 import mpq as _mpq
    def rational(num, den=1):
        return _mpq(num, den)
except ImportError:  # pragma: no cover - exercised where gmpy2 is absent
    def rational(num, den=1):
        return Fraction(num, den)

DEFAULT_STEP_CAP = 200
DEFAULT_PL_BOUNDS = (Fraction(0), Fraction(1))
DEFAULT_B_BOUNDS = (Fraction(1), Fraction(2))


def _as_rational(x):
    if isinstance(x, float):
        raise TypeError("exact labelings take rationals, not floats")
    return rational(x.numerator, x.denominator) if isinstance(x, Fraction) else rational(x)


@dataclass(frozen=True)
class PLLabeling:
    """Rational labels on elements 1..n with fixed boundary values."""

    values: tuple
    alpha: object = DEFAULT_PL_BOUNDS[0]
    omega: object = DEFAULT_PL_BOUNDS[1]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(_as_rational(v) for v in self.values))
        object.__setattr__(self, "alpha", _as_rational(self.alpha))
        object.__setattr__(self, "omega", _as_rational(self.omega))

    def value(self, p: int):
        return self.values[p - 1]

    def replace(self, p: int, v) -> "PLLabeling":
        vals = list(self.values)
        vals[p - 1] = v
        return PLLabeling(tuple(vals), self.alpha, self.omega)


@dataclass(frozen=True)
class BLabeling:
    """Strictly positive rational labels with positive boundary values."""

    values: tuple
    alpha: object = DEFAULT_B_BOUNDS[0]
    omega: object = DEFAULT_B_BOUNDS[1]

    def __post_init__(self):
        vals = tuple(_as_rational(v) for v in self.values)
        a, w = _as_rational(self.alpha), _as_rational(self.omega)
        if a <= 0 or w <= 0 or any(v <= 0 for v in vals):
            raise VerificationError("birational labels must be strictly positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "omega", w)

    def value(self, p: int):
        return self.values[p - 1]

    def replace(self, p: int, v) -> "BLabeling":
        vals = list(self.values)
        vals[p - 1] = v
        return BLabeling(tuple(vals), self.alpha, self.omega)


def _neighbors(fence: Fence):
    """(upper, lower) cover lists per element; empty list means boundary."""
    ups = [fence.upper_covers(p) for p in range(1, fence.n + 1)]
    los = [fence.lower_covers(p) for p in range(1, fence.n + 1)]
    return ups, los


def _up_values(values, alpha, omega, ups, p):
    covers = ups[p - 1]
    return [values[q - 1] for q in covers] if covers else [omega]


def _low_values(values, alpha, omega, los, p):
    covers = los[p - 1]
    return [values[q - 1] for q in covers] if covers else [alpha]


def _pl_toggle_values(values, alpha, omega, ups, los, p):
    new = min(_up_values(values, alpha, omega, ups, p)) \
        + max(_low_values(values, alpha, omega, los, p)) - values[p - 1]
    values[p - 1] = new


def _b_toggle_values(values, alpha, omega, ups, los, p):
    num = sum(_low_values(values, alpha, omega, los, p))
    den = values[p - 1] * sum(1 / v for v in _up_values(values, alpha, omega, ups, p))
    values[p - 1] = num / den


def pl_toggle(fence: Fence, labeling: PLLabeling, p: int) -> PLLabeling:
    fence.check_element(p)
    ups, los = _neighbors(fence)
    vals = list(labeling.values)
    _pl_toggle_values(vals, labeling.alpha, labeling.omega, ups, los, p)
    return PLLabeling(tuple(vals), labeling.alpha, labeling.omega)


def b_toggle(fence: Fence, labeling: BLabeling, p: int) -> BLabeling:
    fence.check_element(p)
    ups, los = _neighbors(fence)
    vals = list(labeling.values)
    _b_toggle_values(vals, labeling.alpha, labeling.omega, ups, los, p)
    return BLabeling(tuple(vals), labeling.alpha, labeling.omega)


def _sweep(fence, labeling, toggle_values):
    ups, los = _neighbors(fence)
    vals = list(labeling.values)
    for p in fence.rowmotion_order():
        toggle_values(vals, labeling.alpha, labeling.omega, ups, los, p)
    return vals


def pl_rowmotion(fence: Fence, labeling: PLLabeling) -> PLLabeling:
    """Piecewise-linear toggles along the same top-down order as rowmotion."""
    return PLLabeling(tuple(_sweep(fence, labeling, _pl_toggle_values)),
                      labeling.alpha, labeling.omega)


def b_rowmotion(fence: Fence, labeling: BLabeling) -> BLabeling:
    return BLabeling(tuple(_sweep(fence, labeling, _b_toggle_values)),
                     labeling.alpha, labeling.omega)


def indicator_labeling(fence: Fence, ideal: Ideal) -> PLLabeling:
    """The complement indicator of an ideal with boundaries 0 and 1; the PL
    dynamics of these labelings is combinatorial rowmotion."""
    vals = tuple(0 if k in ideal else 1 for k in range(1, fence.n + 1))
    return PLLabeling(vals, 0, 1)


def labeling_as_ideal(fence: Fence, labeling: PLLabeling) -> Ideal:
    mask = 0
    for k in range(1, fence.n + 1):
        v = labeling.value(k)
        if v == 0:
            mask |= 1 << (k - 1)
        elif v != 1:
            raise VerificationError("labeling is not a 0/1 complement indicator")
    return Ideal(mask, fence.n)


def gamma(fence: Fence, labeling: BLabeling):
    """Sum of label ratios over all covers of the bounded poset; conserved by
    birational rowmotion."""
    vals, a, w = labeling.values, labeling.alpha, labeling.omega
    total = rational(0)
    for lo, hi in fence.covers:
        total += vals[lo - 1] / vals[hi - 1]
    for m in fence.minimal_elements():
        total += a / vals[m - 1]
    for m in fence.maximal_elements():
        total += vals[m - 1] / w
    return total


def togg_lift(fence: Fence, labeling, p: int, realm: str, sign: str = "net"):
    """Lifted toggleability value at one element.

    PL: plus = pi(p) - max(lower), minus = min(upper) - pi(p), net = plus-minus.
    Birational: plus = pi(p)/sum(lower), minus = 1/(pi(p)*sum(1/upper)),
    net = plus/minus.
    """
    fence.check_element(p)
    ups, los = _neighbors(fence)
    vals = list(labeling.values)
    a, w = labeling.alpha, labeling.omega
    if realm == "pl":
        plus = vals[p - 1] - max(_low_values(vals, a, w, los, p))
        minus = min(_up_values(vals, a, w, ups, p)) - vals[p - 1]
        net = plus - minus
    elif realm == "birational":
        plus = vals[p - 1] / sum(_low_values(vals, a, w, los, p))
        minus = 1 / (vals[p - 1] * sum(1 / v for v in _up_values(vals, a, w, ups, p)))
        net = plus / minus
    else:
        raise ValueError(f"realm must be 'pl' or 'birational', got {realm!r}")
    return {"plus": plus, "minus": minus, "net": net}[sign]


def lifted_stat(fence: Fence, expr: StatExpr, realm: str):
    """Evaluator for a lifted indicator/toggle combination.

    The PL lift is the linear combination of omega - pi(p), min(upper) -
    pi(p) and net PL toggles plus const*(omega - alpha); the birational lift
    is the corresponding product, which requires integer coefficients.
    """
    ups, los = _neighbors(fence)
    if realm == "pl":
        def evaluate(labeling):
            vals, a, w = list(labeling.values), labeling.alpha, labeling.omega
            out = expr.const * (w - a)
            for p, cf in expr.ideal.items():
                out += cf * (w - vals[p - 1])
            for p, cf in expr.antichain.items():
                out += cf * (min(_up_values(vals, a, w, ups, p)) - vals[p - 1])
            for p, cf in expr.toggle.items():
                plus = vals[p - 1] - max(_low_values(vals, a, w, los, p))
                minus = min(_up_values(vals, a, w, ups, p)) - vals[p - 1]
                out += cf * (plus - minus)
            return out
        return evaluate
    if realm != "birational":
        raise ValueError(f"realm must be 'pl' or 'birational', got {realm!r}")
    for coeffs in (expr.ideal, expr.antichain, expr.toggle, {0: expr.const}):
        for cf in coeffs.values():
            if Fraction(cf).denominator != 1:
                raise NonIntegerExponent(
                    "birational lifts need integer coefficients; clear denominators first")

    def evaluate_b(labeling):
        vals, a, w = list(labeling.values), labeling.alpha, labeling.omega
        out = (w / a) ** int(expr.const)
        for p, cf in expr.ideal.items():
            out *= (w / vals[p - 1]) ** int(cf)
        for p, cf in expr.antichain.items():
            chi_b = 1 / (vals[p - 1] * sum(1 / v for v in _up_values(vals, a, w, ups, p)))
            out *= chi_b ** int(cf)
        for p, cf in expr.toggle.items():
            plus = vals[p - 1] / sum(_low_values(vals, a, w, los, p))
            minus = 1 / (vals[p - 1] * sum(1 / v for v in _up_values(vals, a, w, ups, p)))
            out *= (plus / minus) ** int(cf)
        return out
    return evaluate_b


# -- exact iteration -------------------------------------------------------

def _bit_size(v) -> int:
    return int(v.numerator).bit_length() + int(v.denominator).bit_length()


def iterate_rowmotion(fence: Fence, labeling, realm: str, steps: int,
                      step_cap: int = DEFAULT_STEP_CAP,
                      max_label_bits: int | None = None) -> list:
    """Exact orbit prefix [labeling, step1, ..., stepN].

    Raises ExactArithmeticOverflow beyond the step cap or, when a bit guard
    is given, as soon as any label outgrows it; there is never a silent
    float fallback.
    """
    if realm not in ("pl", "birational"):
        raise ValueError(f"realm must be 'pl' or 'birational', got {realm!r}")
    if steps > step_cap:
        raise ExactArithmeticOverflow(
            f"{steps} steps exceed the exact-iteration cap {step_cap}")
    advance = pl_rowmotion if realm == "pl" else b_rowmotion
    trace = [labeling]
    for step in range(steps):
        nxt = advance(fence, trace[-1])
        if max_label_bits is not None:
            worst = max(_bit_size(v) for v in nxt.values)
            if worst > max_label_bits:
                raise ExactArithmeticOverflow(
                    f"label size {worst} bits exceeds guard {max_label_bits} "
                    f"at step {step + 1} on {fence}")
        trace.append(nxt)
    return trace


def random_b_labeling(fence: Fence, seed: int, alpha=DEFAULT_B_BOUNDS[0],
                      omega=DEFAULT_B_BOUNDS[1]) -> BLabeling:
    """Seeded random positive labels m/k with 1 <= m, k <= 20."""
    rng = random.Random(seed)
    vals = tuple(Fraction(rng.randint(1, 20), rng.randint(1, 20))
                 for _ in range(fence.n))
    return BLabeling(vals, alpha, omega)


def random_pl_labeling(fence: Fence, seed: int, alpha=DEFAULT_PL_BOUNDS[0],
                       omega=DEFAULT_PL_BOUNDS[1]) -> PLLabeling:
    rng = random.Random(seed)
    vals = tuple(Fraction(rng.randint(1, 20), rng.randint(1, 20))
                 for _ in range(fence.n))
    return PLLabeling(vals, alpha, omega)


def detect_finite_order(fence: Fence, realm: str, labeling, max_iter: int):
    """Smallest N <= max_iter with rowmotion^N fixing the labeling, else None."""
    advance = pl_rowmotion if realm == "pl" else b_rowmotion
    cur = labeling
    for k in range(1, max_iter + 1):
        cur = advance(fence, cur)
        if tuple(cur.values) == tuple(labeling.values):
            return k
    return None


def verify_gamma_invariance(fence: Fence, seed: int, steps: int,
                            step_cap: int = DEFAULT_STEP_CAP,
                            max_label_bits: int | None = None) -> bool:
    """Exact check that gamma is unchanged after every rowmotion step."""
    lab = random_b_labeling(fence, seed)
    target = gamma(fence, lab)
    trace = iterate_rowmotion(fence, lab, "birational", steps,
                              step_cap=step_cap, max_label_bits=max_label_bits)
    return all(gamma(fence, l) == target for l in trace[1:])


@dataclass(frozen=True)
class ExactBSuiteReport:
    fence: str
    seed: int
    adjacency_holds: bool     # T+ before a step equals T- after it, all p
    telescoping_holds: bool   # product of net toggles collapses to the ends
    label_bounds_hold: bool   # labels stay inside the gamma-derived bounds


def verify_b_telescoping(fence: Fence, seed: int, steps: int,
                         step_cap: int = DEFAULT_STEP_CAP,
                         max_label_bits: int | None = None) -> ExactBSuiteReport:
    """Adjacency, telescoping and boundedness along one exact orbit prefix."""
    lab = random_b_labeling(fence, seed)
    trace = iterate_rowmotion(fence, lab, "birational", steps,
                              step_cap=step_cap, max_label_bits=max_label_bits)
    n = fence.n
    adjacency = True
    telescoping = True
    for p in range(1, n + 1):
        prod = rational(1)
        for i in range(steps):
            if togg_lift(fence, trace[i], p, "birational", "plus") != \
               togg_lift(fence, trace[i + 1], p, "birational", "minus"):
                adjacency = False
            prod *= togg_lift(fence, trace[i], p, "birational", "net")
        expected = togg_lift(fence, trace[-2], p, "birational", "plus") \
            / togg_lift(fence, trace[0], p, "birational", "minus")
        if prod != expected:
            telescoping = False

    g = gamma(fence, lab)
    chain = max(len(fence.segment_elements(i)) for i in range(1, fence.t + 1)) + 1
    upper = lab.omega * max(rational(1), g ** chain)
    lower = lab.alpha * min(rational(1), g ** -chain)
    bounds = all(lower <= v <= upper for l in trace for v in l.values)

    return ExactBSuiteReport(str(fence), seed, adjacency, telescoping, bounds)


def verify_pl_telescoping(fence: Fence, seed: int, steps: int) -> bool:
    """Additive mirror of the telescoping identity, checked exactly."""
    lab = random_pl_labeling(fence, seed)
    trace = iterate_rowmotion(fence, lab, "pl", steps)
    for p in range(1, fence.n + 1):
        total = sum(togg_lift(fence, trace[i], p, "pl", "net") for i in range(steps))
        expected = togg_lift(fence, trace[-2], p, "pl", "plus") \
            - togg_lift(fence, trace[0], p, "pl", "minus")
        if total != expected:
            return False
    return True


# -- Cesàro estimates (the only floating-point surface) ---------------------

@dataclass(frozen=True)
class FloatLabeling:
    values: tuple
    alpha: object
    omega: object

    def value(self, p: int):
        return self.values[p - 1]


@dataclass(frozen=True)
class CesaroResult:
    steps: int
    mean: float
    running: tuple[float, ...]
    kind: str  # arithmetic | geometric


def _to_mpf(x) -> mpf:
    return mpf(int(x.numerator)) / mpf(int(x.denominator))


def cesaro_homomesy_estimate(fence: Fence, realm: str, stat, labeling,
                             steps: int, dps: int = 30) -> CesaroResult:
    """Running time average of a lifted statistic along a float orbit.

    Arithmetic mean for the PL realm, geometric (accumulated in log space)
    for the birational realm; mpmath precision is ``dps`` digits.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    old = mp.dps
    mp.dps = dps
    try:
        if realm not in ("pl", "birational"):
            raise ValueError(f"realm must be 'pl' or 'birational', got {realm!r}")
        ups, los = _neighbors(fence)
        vals = [_to_mpf(v) for v in labeling.values]
        a, w = _to_mpf(labeling.alpha), _to_mpf(labeling.omega)
        toggle_values = _pl_toggle_values if realm == "pl" else _b_toggle_values
        order = fence.rowmotion_order()
        running = []
        acc = mpf(0)
        for i in range(steps):
            value = stat(FloatLabeling(tuple(vals), a, w))
            acc += value if realm == "pl" else mp.log(value)
            mean = acc / (i + 1)
            running.append(float(mean if realm == "pl" else mp.exp(mean)))
            for p in order:
                toggle_values(vals, a, w, ups, los, p)
        return CesaroResult(steps, running[-1], tuple(running),
                            "arithmetic" if realm == "pl" else "geometric")
    finally:
        mp.dps = old
