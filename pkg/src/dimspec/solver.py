"""Certified root enclosures for the Moran equation.

The dimension of the attractor determined by a subset F of a family is
the root s of

    sum over a in F of ratio(a)**s  =  1.

The sum is strictly decreasing in s, so bisection works, but we want an
interval that provably brackets the root rather than a float that is
probably close.  The trick is one-sided sums: a truncated partial sum
rounded down can only underestimate, the partial sum plus a closed-form
tail majorant rounded up can only overestimate.  If the pessimistic
lower sum at lo still reaches 1 and the pessimistic upper sum at hi
stays at or below 1, the true root is inside [lo, hi] no matter what
rounding did.

Two arithmetic tiers exist: plain doubles with a generous relative
slack, and mpmath with a working precision chosen from the requested
tolerance.  The double tier escalates automatically when its dead zone
(where neither one-sided test is conclusive) is wider than the
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import (
    ConfigError,
    DivergentSum,
    ToleranceNotReachable,
)
from .families import ContractionFamily
from .words import SubsetSelector

# Relative slack applied to double-precision sums.  Covers the rounding
# of s*log2(ratio), the pow evaluation and fsum, with a wide margin; the
# exponents in play stay below ~700 so per-term relative error is well
# under 1e-14.
SLACK_DOUBLE = 2.0**-43

# Finest tolerance the double tier will attempt before escalating.
TOL_MIN_DOUBLE = 4e-14

# Truncation ceiling for adaptive partial sums of infinite families.
MAX_TERMS = 1 << 20

DEFAULT_TOL = 1e-10


def _as_selector(subset) -> SubsetSelector:
    if isinstance(subset, SubsetSelector):
        return subset
    if subset is None or subset == "full":
        return SubsetSelector.full()
    if isinstance(subset, str):
        return SubsetSelector.from_word(subset)
    return SubsetSelector.explicit(subset)


def _selected_indices(family: ContractionFamily, selector: SubsetSelector):
    """Explicit index tuple, or None when the selector means the whole
    infinite family."""
    if selector.is_full:
        if family.is_infinite:
            return None
        return tuple(range(1, family.size + 1))
    for a in selector.indices:
        family.check_index(a)
    return selector.indices


def _truncation_point(family: ContractionFamily, s: float, tol: float) -> int:
    """Grow the cutoff until the tail majorant is negligible at scale tol."""
    n_cut = 8
    while n_cut < MAX_TERMS:
        if family.tail_majorant(n_cut, s) < tol / 4.0:
            break
        n_cut *= 2
    return n_cut


def moran_sum(family, subset, s, mode="mid", tol=1e-13):
    """One-sided or midpoint evaluation of the Moran sum at s.

    mode 'lower' returns a certified lower bound of the true sum,
    'upper' a certified upper bound (partial sum plus tail majorant),
    'mid' the midpoint of the two without directional slack.  Returns
    math.inf when the defining series diverges (full selector of an
    infinite family with s <= theta).
    """
    if mode not in ("lower", "upper", "mid"):
        raise ConfigError(f"unknown moran_sum mode {mode!r}")
    if s < 0:
        raise ConfigError(f"moran_sum needs s >= 0, got {s}")
    selector = _as_selector(subset)
    indices = _selected_indices(family, selector)

    if indices is not None:
        if not indices:
            return 0.0
        total = math.fsum(family.term_double(a, s) for a in indices)
        tail = 0.0
    else:
        if s <= family.theta:
            return math.inf
        n_cut = _truncation_point(family, s, tol)
        total = math.fsum(family.term_double(a, s) for a in range(1, n_cut + 1))
        tail = family.tail_majorant(n_cut, s)

    if mode == "lower":
        return total * (1.0 - SLACK_DOUBLE)
    if mode == "upper":
        return (total + tail) * (1.0 + SLACK_DOUBLE)
    return total + 0.5 * tail


def _moran_sum_mp(family, indices, s, mode, tol, prec):
    """mpmath analogue of moran_sum for an explicit index tuple or full
    infinite selector (indices None).  s is an mpf; runs at precision
    prec with outward slack 2**-(prec-8)."""
    with mpmath.workprec(prec):
        if indices is not None:
            if not indices:
                return mpmath.mpf(0)
            total = mpmath.fsum(family.term_mp(a, s) for a in indices)
            tail = mpmath.mpf(0)
        else:
            if s <= family.theta:
                return mpmath.inf
            n_cut = 8
            while n_cut < MAX_TERMS:
                if family.tail_majorant_mp(n_cut, s) < tol / 4:
                    break
                n_cut *= 2
            total = mpmath.fsum(family.term_mp(a, s) for a in range(1, n_cut + 1))
            tail = family.tail_majorant_mp(n_cut, s)
        slack = mpmath.mpf(2) ** (-(prec - 8))
        if mode == "lower":
            return total * (1 - slack)
        if mode == "upper":
            return (total + tail) * (1 + slack)
        return total + tail / 2


@dataclass(frozen=True)
class DimensionInterval:
    """Certified enclosure [lo, hi] of a Moran root.

    cert_lo is the certified lower-mode sum at lo (>= 1), cert_hi the
    certified upper-mode sum at hi (<= 1) or None when hi is the
    ambient bound 1 (the attractor lives in the unit interval, so its
    dimension never exceeds 1; that bound needs no arithmetic).  exact
    marks the degenerate empty/singleton cases where the root is 0 by
    inspection.
    """

    lo: float
    hi: float
    width_budget: float
    cert_lo: float | None = None
    cert_hi: float | None = None
    hi_is_ambient: bool = False
    exact: bool = False
    tier: str = "double"
    precision_bits: int = 53

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def as_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "mid": self.mid,
            "width": self.width,
            "width_budget": self.width_budget,
            "tier": self.tier,
            "hi_is_ambient": self.hi_is_ambient,
            "exact": self.exact,
        }


def _bisect_double(family, indices, tol):
    """Certified bisection in the double tier.

    Returns (lo, hi, cert_lo, cert_hi, hi_ambient) or None when the
    dead zone blocks progress before reaching tol.
    """

    def lower(s):
        if indices is None:
            if s <= family.theta:
                return math.inf
            n_cut = _truncation_point(family, s, tol)
            total = math.fsum(family.term_double(a, s) for a in range(1, n_cut + 1))
            return total * (1.0 - SLACK_DOUBLE)
        total = math.fsum(family.term_double(a, s) for a in indices)
        return total * (1.0 - SLACK_DOUBLE)

    def upper(s):
        if indices is None:
            if s <= family.theta:
                return math.inf
            n_cut = _truncation_point(family, s, tol)
            total = math.fsum(family.term_double(a, s) for a in range(1, n_cut + 1))
            return (total + family.tail_majorant(n_cut, s)) * (1.0 + SLACK_DOUBLE)
        total = math.fsum(family.term_double(a, s) for a in indices)
        return total * (1.0 + SLACK_DOUBLE)

    lo, hi = 0.0, 1.0
    cert_lo = lower(lo)  # infinite at s=0 for full selectors, count >= 2 else
    cert_hi = None
    hi_ambient = True

    u1 = upper(1.0)
    if u1 <= 1.0:
        cert_hi = u1
        hi_ambient = False

    for _ in range(200):
        if hi - lo <= tol:
            return lo, hi, cert_lo, cert_hi, hi_ambient
        mid = 0.5 * (lo + hi)
        val = lower(mid)
        if val >= 1.0:
            lo, cert_lo = mid, val
            continue
        val = upper(mid)
        if val <= 1.0:
            hi, cert_hi, hi_ambient = mid, val, False
            continue
        # Dead zone at mid: try to certify flanking points instead.
        step = 0.25 * (hi - lo)
        moved = False
        p = mid - step
        if p > lo:
            val = lower(p)
            if val >= 1.0:
                lo, cert_lo, moved = p, val, True
        q = mid + step
        if q < hi:
            val = upper(q)
            if val <= 1.0:
                hi, cert_hi, hi_ambient, moved = q, val, False, True
        if not moved:
            return None  # dead zone spans the bracket; tier too coarse
    return lo, hi, cert_lo, cert_hi, hi_ambient


def _bisect_mp(family, indices, tol, prec):
    with mpmath.workprec(prec):
        tol_mp = mpmath.mpf(tol)

        def lower(s):
            return _moran_sum_mp(family, indices, s, "lower", tol_mp, prec)

        def upper(s):
            return _moran_sum_mp(family, indices, s, "upper", tol_mp, prec)

        lo, hi = mpmath.mpf(0), mpmath.mpf(1)
        cert_lo = lower(lo)
        cert_hi = None
        hi_ambient = True
        u1 = upper(hi)
        if u1 <= 1:
            cert_hi = u1
            hi_ambient = False

        for _ in range(prec + 60):
            if hi - lo <= tol_mp:
                break
            mid = (lo + hi) / 2
            val = lower(mid)
            if val >= 1:
                lo, cert_lo = mid, val
                continue
            val = upper(mid)
            if val <= 1:
                hi, cert_hi, hi_ambient = mid, val, False
                continue
            step = (hi - lo) / 4
            moved = False
            p = mid - step
            if p > lo and lower(p) >= 1:
                lo, moved = p, True
            q = mid + step
            if q < hi and upper(q) <= 1:
                hi, hi_ambient, moved = q, False, True
            if not moved:
                raise ToleranceNotReachable(
                    f"tol {tol} is below the resolution of {prec}-bit arithmetic"
                )
        else:
            raise ToleranceNotReachable(
                f"bisection did not reach tol {tol} at {prec} bits"
            )

        # Round the enclosure outward when converting to floats.
        lo_f = float(lo)
        if lo_f > lo:
            lo_f = math.nextafter(lo_f, -math.inf)
        hi_f = float(hi)
        if hi_f < hi:
            hi_f = math.nextafter(hi_f, math.inf)
        lo_f = max(lo_f, 0.0)
        hi_f = min(hi_f, 1.0) if hi_ambient else hi_f
        return (
            lo_f,
            hi_f,
            float(cert_lo) if cert_lo is not None else None,
            float(cert_hi) if cert_hi is not None else None,
            hi_ambient,
        )


def solve_dimension(family, subset="full", tol=DEFAULT_TOL, precision_bits=None):
    """Certified enclosure of the Moran root for the selected subsystem.

    The empty subset and singletons yield the exact interval [0, 0]
    (no equation to solve in the first case, root at s = 0 in the
    second).  Otherwise bisection tightens a [0, 1] bracket while
    maintaining the one-sided certificates; precision escalates from
    doubles to mpmath automatically unless precision_bits pins a tier.
    """
    if tol <= 0:
        raise ConfigError(f"tolerance must be positive, got {tol}")
    selector = _as_selector(subset)
    indices = _selected_indices(family, selector)

    if indices is not None and len(indices) <= 1:
        return DimensionInterval(
            lo=0.0, hi=0.0, width_budget=tol, exact=True,
            cert_lo=None, cert_hi=None,
        )

    if precision_bits is not None:
        prec = int(precision_bits)
        if prec < 24:
            raise ConfigError(f"precision_bits too small: {prec}")
        if tol < 2.0 ** (-(prec - 12)):
            raise ToleranceNotReachable(
                f"tol {tol} is below the resolution of {prec}-bit arithmetic"
            )
        lo, hi, cert_lo, cert_hi, amb = _bisect_mp(family, indices, tol, prec)
        return DimensionInterval(
            lo=lo, hi=hi, width_budget=tol, cert_lo=cert_lo, cert_hi=cert_hi,
            hi_is_ambient=amb, tier="mpmath", precision_bits=prec,
        )

    if tol >= TOL_MIN_DOUBLE:
        result = _bisect_double(family, indices, tol)
        if result is not None:
            lo, hi, cert_lo, cert_hi, amb = result
            return DimensionInterval(
                lo=lo, hi=hi, width_budget=tol, cert_lo=cert_lo, cert_hi=cert_hi,
                hi_is_ambient=amb, tier="double", precision_bits=53,
            )

    prec = max(96, int(math.ceil(-math.log2(tol))) + 50)
    lo, hi, cert_lo, cert_hi, amb = _bisect_mp(family, indices, tol, prec)
    return DimensionInterval(
        lo=lo, hi=hi, width_budget=tol, cert_lo=cert_lo, cert_hi=cert_hi,
        hi_is_ambient=amb, tier="mpmath", precision_bits=prec,
    )


def pressure(family, subset, s, tol=1e-15):
    """Natural log of the Moran sum (midpoint evaluation).

    Raises DivergentSum where the series diverges and ConfigError for
    an empty subset, whose pressure would be log 0.
    """
    selector = _as_selector(subset)
    if not selector.is_full and not selector.indices:
        raise ConfigError("pressure of the empty subset is undefined")
    value = moran_sum(family, selector, s, mode="mid", tol=tol)
    if math.isinf(value):
        raise DivergentSum(f"moran sum diverges at s={s}")
    return math.log(value)


def pressure_derivative(family, subset, s):
    """d/ds of the pressure: weighted mean of log ratios.

    Equals (sum of ratio**s * ln ratio) / (sum of ratio**s) over the
    selected symbols.  Plain double evaluation with adaptive truncation
    for infinite selectors; always negative.
    """
    selector = _as_selector(subset)
    indices = _selected_indices(family, selector)
    if indices is not None and not indices:
        raise ConfigError("pressure derivative of the empty subset is undefined")
    ln2 = math.log(2.0)
    if indices is not None:
        num = math.fsum(
            family.term_double(a, s) * family.log2_ratio(a) for a in indices
        ) * ln2
        den = math.fsum(family.term_double(a, s) for a in indices)
        return num / den
    if s <= family.theta:
        raise DivergentSum(f"moran sum diverges at s={s}")
    num_terms = []
    den_terms = []
    a = 1
    quiet = 0
    while a < MAX_TERMS:
        t = family.term_double(a, s)
        w = family.log2_ratio(a)
        num_terms.append(t * w)
        den_terms.append(t)
        if abs(t * w) < 1e-18 * max(1e-300, abs(math.fsum(num_terms))):
            quiet += 1
            if quiet >= 3:
                break
        else:
            quiet = 0
        a += 1
    num = math.fsum(num_terms) * ln2
    den = math.fsum(den_terms)
    if den == 0.0 or math.isinf(den):
        raise DivergentSum(f"moran sum not summable at s={s}")
    return num / den
