"""Exact dyadic point sets built from factorial-exponent weights.

Finite binary words are enumerated length-first, then lexicographically:

    index 1 -> "" (empty), 2 -> "0", 3 -> "1", 4 -> "00", ..., 7 -> "11"

Each word sigma gets the weight g(sigma) = 4**(-n!) where n is its
enumeration index.  A word omega is then mapped to

    f(omega) = sum of g(omega[:i]) over positions i with omega[i] == '1'

(0-based i, so the bit at position i+1 charges the length-i prefix).
These are finite sums of distinct powers 2**(-2*n!), which supports two
exact representations:

* ``ExactDyadic``: an explicit odd-numerator-times-power-of-two value.
  Fine while the enumeration indexes stay small; the exponent 2*n!
  already has 80640 bits at n = 8, so materialisation is gated by an
  index budget.
* a sparse form, just the ascending tuple of exponents: the binary
  expansion has a 1 exactly at those positions, so ordering two values
  is a lexicographic walk and no huge integer is ever built.

The factorial gaps make distinct equal-length words provably separated:
the difference of two f-values is at least two thirds of g at their
longest common prefix.  separation_check certifies that inequality with
exact window arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key

import mpmath

from .errors import CapExceeded, ConfigError, ExponentBudgetError, InsufficientPrecision
from .words import MAX_WORD_LENGTH, longest_common_prefix, validate_word

# Largest enumeration index whose weight may be materialised as an
# ExactDyadic.  2 * 8! = 80640-bit numerators are still cheap; the next
# index already needs ~725k bits and it only gets worse factorially.
DEFAULT_INDEX_BUDGET = 8

# Depth cap for exact clouds (2**depth points, prefix indexes < 2**depth).
DEFAULT_CLOUD_DEPTH_CAP = 8


def word_index(word: str) -> int:
    """Enumeration index of a word: 1 for the empty word, then blocks of
    equal length in lexicographic order starting at 2**len."""
    validate_word(word)
    if word == "":
        return 1
    return (1 << len(word)) + int(word, 2)


def enumerate_word(n: int) -> str:
    """Inverse of word_index."""
    n = int(n)
    if n < 1:
        raise ConfigError(f"enumeration index starts at 1, got {n}")
    if n == 1:
        return ""
    length = n.bit_length() - 1
    if length > MAX_WORD_LENGTH:
        raise CapExceeded(f"index {n} needs a word longer than cap {MAX_WORD_LENGTH}")
    return format(n - (1 << length), f"0{length}b")


def g_exponent(word: str) -> int:
    """Binary exponent of the weight: g(word) = 2**(-g_exponent(word))."""
    return 2 * math.factorial(word_index(word))


@dataclass(frozen=True)
class ExactDyadic:
    """sign * num * 2**(-exp) with num odd (or zero) and exp >= 0."""

    sign: int
    num: int
    exp: int

    @classmethod
    def zero(cls) -> "ExactDyadic":
        return cls(0, 0, 0)

    @classmethod
    def one(cls) -> "ExactDyadic":
        return cls(1, 1, 0)

    @classmethod
    def from_power(cls, exp: int) -> "ExactDyadic":
        """2**(-exp)."""
        return cls(1, 1, int(exp))

    @classmethod
    def _normalise(cls, signed_num: int, exp: int) -> "ExactDyadic":
        if signed_num == 0:
            return cls.zero()
        sign = 1 if signed_num > 0 else -1
        num = abs(signed_num)
        while num % 2 == 0:
            num //= 2
            exp -= 1
        if exp < 0:
            num <<= -exp
            exp = 0
        return cls(sign, num, exp)

    def __add__(self, other: "ExactDyadic") -> "ExactDyadic":
        exp = max(self.exp, other.exp)
        a = self.sign * self.num * (1 << (exp - self.exp))
        b = other.sign * other.num * (1 << (exp - other.exp))
        return self._normalise(a + b, exp)

    def __sub__(self, other: "ExactDyadic") -> "ExactDyadic":
        exp = max(self.exp, other.exp)
        a = self.sign * self.num * (1 << (exp - self.exp))
        b = other.sign * other.num * (1 << (exp - other.exp))
        return self._normalise(a - b, exp)

    def to_fraction(self) -> Fraction:
        return Fraction(self.sign * self.num, 1 << self.exp)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def compare(self, other: "ExactDyadic") -> int:
        d = self - other
        return d.sign

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def as_pair(self) -> tuple[int, int]:
        """(signed numerator, exponent) serialization."""
        return (self.sign * self.num, self.exp)


def _check_budget(word: str, budget: int) -> int:
    n = word_index(word)
    if n > budget:
        raise ExponentBudgetError(
            f"index {n} of word {word!r} exceeds the materialisation budget {budget} "
            f"(weight exponent 2*{n}! too large); use the sparse cloud API instead"
        )
    return n


def g_value(word: str, budget: int = DEFAULT_INDEX_BUDGET) -> ExactDyadic:
    """Weight g(word) = 4**(-word_index(word)!) as an exact dyadic."""
    _check_budget(word, budget)
    return ExactDyadic.from_power(g_exponent(word))


def f_value(word: str, budget: int = DEFAULT_INDEX_BUDGET) -> ExactDyadic:
    """f(word) as an exact dyadic; needs every charged prefix in budget."""
    validate_word(word)
    total = ExactDyadic.zero()
    for i, bit in enumerate(word):
        if bit == "1":
            total = total + g_value(word[:i], budget)
    return total


def f_tail_bound(word: str, budget: int = DEFAULT_INDEX_BUDGET) -> Fraction:
    """Exact bound g(word)/3 on the f-mass of proper extensions.

    Extending word by any suffix adds weights of prefixes strictly
    longer than word; the factorial gaps majorise that mass by the
    geometric series g(word) * (1/4 + 1/16 + ...) = g(word)/3.  The
    first extension step itself may add up to g(word) on top, which is
    the content of the consistency identity
    f(word + '1') - f(word) == 3 * f_tail_bound(word).

    The value is a third of a power of two, hence a Fraction and not an
    ExactDyadic.
    """
    _check_budget(word, budget)
    return Fraction(1, 3 * (1 << g_exponent(word)))


def f_exponents(word: str) -> tuple[int, ...]:
    """Sparse form of f(word): ascending binary exponents of its terms."""
    validate_word(word)
    exps = [g_exponent(word[:i]) for i, bit in enumerate(word) if bit == "1"]
    return tuple(sorted(exps))


def sparse_compare(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Order two sparse sums of distinct powers 2**(-e).

    Walk both ascending exponent tuples; at the first disagreement the
    value owning the smaller exponent is larger (its leading spare bit
    outweighs everything after it).  A proper prefix is smaller.
    """
    for x, y in zip(a, b):
        if x != y:
            return 1 if x < y else -1
    if len(a) == len(b):
        return 0
    return 1 if len(a) > len(b) else -1


def sparse_to_mpf(exponents, digits: int = 30):
    """Approximate a sparse value for display, at >= digits precision."""
    if not exponents:
        return mpmath.mpf(0)
    e0 = exponents[0]
    window = int(digits * 3.33) + 40
    with mpmath.workprec(window + 20):
        acc = mpmath.mpf(0)
        for e in exponents:
            if e - e0 > window:
                break
            acc += mpmath.power(2, -(e - e0))
        return acc * mpmath.power(2, -e0)


@dataclass(frozen=True)
class KPoint:
    """One exact cloud point: the word and the sparse form of f(word)."""

    word: str
    exponents: tuple[int, ...]

    def approx(self, digits: int = 30):
        return sparse_to_mpf(self.exponents, digits)


def k_set_cloud(depth: int, depth_cap: int = DEFAULT_CLOUD_DEPTH_CAP) -> tuple[KPoint, ...]:
    """All 2**depth exact values f(omega), |omega| = depth, sorted.

    Points are exact sparse dyadics; sorting uses the lexicographic
    exponent walk, no floating point involved.
    """
    depth = int(depth)
    if depth < 0:
        raise ConfigError(f"depth must be >= 0, got {depth}")
    if depth > depth_cap:
        raise CapExceeded(f"cloud depth {depth} exceeds cap {depth_cap}")
    points = [
        KPoint(word=format(i, f"0{depth}b") if depth else "", exponents=f_exponents(format(i, f"0{depth}b") if depth else ""))
        for i in range(1 << depth)
    ]
    points.sort(key=cmp_to_key(lambda p, q: sparse_compare(p.exponents, q.exponents)))
    return tuple(points)


@dataclass(frozen=True)
class SeparationCheck:
    """Outcome of the two-thirds separation certificate for a word pair.

    The difference f(larger) - f(smaller) is reported sparsely:
    positive exponents from the larger value, negative ones from the
    smaller.  margin is (3*|difference| / g(prefix)) - 2, certified
    nonnegative when satisfied is True.
    """

    omega: str
    tau: str
    prefix: str
    threshold_exponent: int
    positive_exponents: tuple[int, ...]
    negative_exponents: tuple[int, ...]
    satisfied: bool
    margin: float

    def difference_approx(self, digits: int = 30):
        pos = sparse_to_mpf(self.positive_exponents, digits)
        neg = sparse_to_mpf(self.negative_exponents, digits)
        return pos - neg


def separation_check(omega: str, tau: str) -> SeparationCheck:
    """Certify |f(tau) - f(omega)| >= (2/3) * g(common prefix).

    Words must be distinct and of equal length (so neither is an
    extension of the other and the difference is genuinely two-sided).
    The certificate is exact: the difference, rescaled by g(prefix), is
    evaluated in a window of exponents as a Fraction, and everything
    outside the window is counted against an explicit error budget.
    """
    validate_word(omega)
    validate_word(tau)
    if len(omega) != len(tau):
        raise ConfigError("separation_check compares words of equal length")
    if omega == tau:
        raise ConfigError("separation_check needs two distinct words")
    sigma = longest_common_prefix(omega, tau)
    e_sigma = g_exponent(sigma)

    exp_o = set(f_exponents(omega))
    exp_t = set(f_exponents(tau))
    # The word carrying '1' right after the common prefix owns the
    # dominant weight g(sigma) and therefore the larger f-value.
    if tau[len(sigma)] == "1":
        pos = tuple(sorted(exp_t - exp_o))
        neg = tuple(sorted(exp_o - exp_t))
    else:
        pos = tuple(sorted(exp_o - exp_t))
        neg = tuple(sorted(exp_t - exp_o))

    window = 256
    while True:
        pos_win = [e - e_sigma for e in pos if e - e_sigma <= window]
        neg_win = [e - e_sigma for e in neg if e - e_sigma <= window]
        omitted = (len(pos) - len(pos_win)) + (len(neg) - len(neg_win))
        delta = sum(Fraction(1, 1 << r) for r in pos_win) - sum(
            Fraction(1, 1 << r) for r in neg_win
        )
        # Certify 3*delta_true >= 2 where delta_true = delta +- omitted * 2**-window.
        slack = Fraction(omitted, 1 << window)
        lhs = 3 * delta - 2
        if lhs >= 3 * slack:
            return SeparationCheck(
                omega=omega, tau=tau, prefix=sigma, threshold_exponent=e_sigma,
                positive_exponents=pos, negative_exponents=neg,
                satisfied=True, margin=float(lhs),
            )
        if lhs < -3 * slack:
            return SeparationCheck(
                omega=omega, tau=tau, prefix=sigma, threshold_exponent=e_sigma,
                positive_exponents=pos, negative_exponents=neg,
                satisfied=False, margin=float(lhs),
            )
        window *= 4
        if window > 1 << 16:
            raise InsufficientPrecision(
                f"separation margin for {omega!r}/{tau!r} straddles the window budget"
            )


def nonosc_example() -> tuple[ExactDyadic, ExactDyadic]:
    """The reference two-point set {0, 1}.

    Its covering profile is the constant 2 at every scale below 1, so
    every dimension estimate on it is exactly zero.  Useful as the
    degenerate anchor when exercising profile code paths.
    """
    return (ExactDyadic.zero(), ExactDyadic.one())
