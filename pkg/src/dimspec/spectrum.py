"""Dimension spectra of coded subsystems.

A binary word selects a finite subsystem (position i carries symbol i
when the bit is 1).  Sweeping all words of a fixed length that extend a
small base set produces a cloud of certified dimension intervals: the
visible part of the dimension spectrum at that depth.

Increments shrink roughly like ratio(b)**s when symbol b toggles, so
clouds need rapidly finer tolerances at larger depths; tolerance
selection and the switch to the mpmath tier are automatic unless pinned
by the caller.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from multiprocessing import Pool

from .errors import CapExceeded, ConfigError, InsufficientPrecision
from .families import ContractionFamily
from .solver import DEFAULT_TOL, DimensionInterval, solve_dimension
from .words import longest_common_prefix, subset_of_word

DEPTH_CAP = 16


def code_dimension(family, word, tol=DEFAULT_TOL, precision_bits=None) -> DimensionInterval:
    """Certified dimension of the subsystem selected by a word."""
    return solve_dimension(family, subset_of_word(word), tol=tol, precision_bits=precision_bits)


@dataclass(frozen=True)
class BranchIncrement:
    """Dimension step caused by switching on the next symbol.

    For a word w of length L the two children w+'0' and w+'1' select
    subsystems without and with symbol L+1.  ratio is the increment of
    midpoints normalised by ratio(L+1)**mid1, the natural scale of the
    step; enclosure is the certified interval for the raw increment.
    """

    word: str
    child0: DimensionInterval
    child1: DimensionInterval
    enclosure: tuple[float, float]
    normalizer: float
    ratio: float


def branch_increment(family, word, tol=None) -> BranchIncrement:
    """Measure the dimension increment between the two children of word."""
    b = len(word) + 1
    family.check_index(b)
    if tol is None:
        # Pilot solve fixes the scale of the increment, then both
        # children are enclosed well below it.
        pilot = solve_dimension(family, subset_of_word(word + "1"), tol=1e-9)
        est = family.term_double(b, pilot.mid)
        tol = min(DEFAULT_TOL, est / 32.0)
    d0 = solve_dimension(family, subset_of_word(word + "0"), tol=tol)
    d1 = solve_dimension(family, subset_of_word(word + "1"), tol=tol)
    lo = d1.lo - d0.hi
    hi = d1.hi - d0.lo
    if lo <= 0.0:
        raise InsufficientPrecision(
            f"increment enclosure [{lo}, {hi}] for word {word!r} is not positive; "
            f"tighten tol below {tol}"
        )
    normalizer = family.term_double(b, d1.mid)
    return BranchIncrement(
        word=word,
        child0=d0,
        child1=d1,
        enclosure=(lo, hi),
        normalizer=normalizer,
        ratio=(d1.mid - d0.mid) / normalizer,
    )


@dataclass(frozen=True)
class SpectrumPoint:
    word: str
    interval: DimensionInterval


@dataclass(frozen=True)
class SpectrumCloud:
    """Certified dimension cloud over all words extending a base set."""

    family: dict
    base_symbols: tuple[int, ...]
    depth: int
    tol: float
    points: tuple[SpectrumPoint, ...]
    base_dimension: DimensionInterval
    spacing_constant: float

    def midpoints(self):
        return [p.interval.mid for p in self.points]

    def covering_radius(self) -> float:
        """C * 2**(-s * depth**2) with s the base dimension midpoint."""
        s = self.base_dimension.mid
        return self.spacing_constant * 2.0 ** (-s * self.depth * self.depth)


def _cloud_words(depth: int, base_symbols: tuple[int, ...]) -> list[str]:
    free = [i for i in range(1, depth + 1) if i not in base_symbols]
    words = []
    for mask in range(1 << len(free)):
        bits = ["0"] * depth
        for i in base_symbols:
            bits[i - 1] = "1"
        for j, pos in enumerate(free):
            if (mask >> (len(free) - 1 - j)) & 1:
                bits[pos - 1] = "1"
        words.append("".join(bits))
    words.sort()
    return words


def _auto_tol(family, depth: int, base_symbols) -> float:
    """Pick a tolerance resolving the finest expected gap at this depth.

    The deepest toggled symbol contributes about ratio(depth)**s, with s
    near the dimension of the full selection; an eighth of that keeps
    adjacent cloud points certified apart.
    """
    full_word = "1" * depth
    pilot = solve_dimension(family, subset_of_word(full_word), tol=1e-9)
    gap = family.term_double(depth, pilot.lo)
    tol = gap / 16.0
    return min(DEFAULT_TOL, max(tol, 1e-60))


def _solve_cloud_word(args):
    family, word, tol = args
    interval = solve_dimension(family, subset_of_word(word), tol=tol)
    return word, interval


def _spacing_constant(points, base_mid: float) -> float:
    """Max over adjacent pairs of gap / 2**(-s*(l+1)**2), l = shared
    prefix length.  A fitted measurement, not a guarantee: it
    calibrates the covering radius formula against the realised gaps."""
    best = 0.0
    for p, q in zip(points, points[1:]):
        gap = q.interval.mid - p.interval.mid
        if gap <= 0.0:
            continue
        level = len(longest_common_prefix(p.word, q.word)) + 1
        denom = 2.0 ** (-base_mid * level * level)
        best = max(best, gap / denom)
    return best if best > 0.0 else 1.0


def expand_spectrum(family, depth, base_symbols=(1, 2), tol=None, workers=1) -> SpectrumCloud:
    """Certified dimension intervals for every word extending the base.

    Words have the given length, carry '1' at each base symbol and run
    through all assignments elsewhere (2**(depth - len(base)) points,
    lexicographic generation, sorted by midpoint).  Deterministic for
    any worker count: the work split never changes the arithmetic.
    """
    depth = int(depth)
    base_symbols = tuple(sorted(set(int(b) for b in base_symbols)))
    if not base_symbols or base_symbols[0] < 1:
        raise ConfigError("base symbols must be positive indices")
    if depth < base_symbols[-1]:
        raise ConfigError(f"depth {depth} cannot hold base symbol {base_symbols[-1]}")
    if depth > DEPTH_CAP:
        raise CapExceeded(f"spectrum depth {depth} exceeds cap {DEPTH_CAP}")
    for b in base_symbols:
        family.check_index(b)

    if tol is None:
        tol = _auto_tol(family, depth, base_symbols)
    base_dim = solve_dimension(family, base_symbols, tol=min(1e-10, tol * 16))

    words = _cloud_words(depth, base_symbols)
    jobs = [(family, w, tol) for w in words]
    if workers and workers > 1 and len(jobs) >= 8:
        with Pool(processes=int(workers)) as pool:
            solved = pool.map(_solve_cloud_word, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
    else:
        solved = [_solve_cloud_word(j) for j in jobs]

    pts = [SpectrumPoint(word=w, interval=iv) for w, iv in solved]
    pts.sort(key=lambda p: (p.interval.mid, p.word))
    spacing = _spacing_constant(pts, base_dim.mid)
    return SpectrumCloud(
        family=family.describe(),
        base_symbols=base_symbols,
        depth=depth,
        tol=tol,
        points=tuple(pts),
        base_dimension=base_dim,
        spacing_constant=spacing,
    )
