"""Exact aliasing oracle: J-characteristics, word spectra, GWLP, resolution.

Everything here is computed directly from the +/-1 design matrix with
integer arithmetic; aliasing indices are exact `Fraction`s.  The subset
scan is the ground truth that the closed-form layer is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .z4 import BinaryDesign, BudgetExceeded

__all__ = ["BudgetExceeded", "CELL_READ_BUDGET", "WordSpectrum",
           "DesignSummary", "j_characteristic", "aliasing_index",
           "spectrum_bruteforce", "summarize", "scan_cost",
           "duplicated_column_pairs", "negation_masks", "walsh_hadamard"]

#: refuse scans costing more than this many cell reads unless forced
CELL_READ_BUDGET = 10 ** 10

#: largest factor count handled by the full Walsh-Hadamard transform
_WHT_MAX_FACTORS = 24


def _check_subset(d: BinaryDesign, indices) -> tuple[int, ...]:
    idx = tuple(indices)
    if not idx:
        raise ValueError("column subset is empty")
    seen = set()
    for i in idx:
        if not 1 <= i <= d.factors:
            raise ValueError(f"column index {i} outside 1..{d.factors}")
        if i in seen:
            raise ValueError(f"column index {i} listed twice")
        seen.add(i)
    return idx


def j_characteristic(d: BinaryDesign, indices) -> int:
    """Sum over runs of the product of the selected (1-based) columns."""
    idx = _check_subset(d, indices)
    prod = np.prod(d.cells[:, [i - 1 for i in idx]].astype(np.int64), axis=1)
    return int(prod.sum())


def aliasing_index(d: BinaryDesign, indices) -> Fraction:
    return Fraction(abs(j_characteristic(d, indices)), d.runs)


@dataclass(frozen=True)
class WordSpectrum:
    """Aggregated (length, aliasing index, count) triples, length >= 3."""

    entries: tuple[tuple[int, Fraction, int], ...]

    def __post_init__(self):
        seen = set()
        for length, rho, count in self.entries:
            if length < 3:
                raise ValueError(f"word length {length} below 3")
            if not 0 < rho <= 1:
                raise ValueError(f"aliasing index {rho} outside (0, 1]")
            if count < 1:
                raise ValueError("counts must be positive")
            if (length, rho) in seen:
                raise ValueError(f"duplicate spectrum cell {(length, rho)}")
            seen.add((length, rho))
        ordered = tuple(sorted(self.entries, key=lambda e: (e[0], -e[1])))
        object.__setattr__(self, "entries", ordered)

    def total_words(self) -> int:
        return sum(c for _, _, c in self.entries)

    def is_dyadic(self) -> bool:
        return all(r.numerator == 1 and (r.denominator & (r.denominator - 1)) == 0
                   for _, r, _ in self.entries)


@dataclass(frozen=True)
class DesignSummary:
    gwlp: tuple[Fraction, ...]  # A_3 .. A_factors
    resolution: Fraction | None  # None when no word was found
    max_rho_at_min_length: Fraction | None
    scanned_length: int

    def resolution_text(self) -> str:
        if self.resolution is None:
            return f"> {self.scanned_length}"
        return str(self.resolution)


def summarize(spectrum: WordSpectrum, factors: int,
              scanned_length: int | None = None) -> DesignSummary:
    """GWLP A_3..A_factors plus generalized resolution r + 1 - max rho at r."""
    scanned = factors if scanned_length is None else scanned_length
    gwlp = [Fraction(0)] * (factors - 2)
    for length, rho, count in spectrum.entries:
        if length > factors:
            raise ValueError(f"word length {length} exceeds {factors} factors")
        gwlp[length - 3] += count * rho * rho
    if not spectrum.entries:
        return DesignSummary(tuple(gwlp), None, None, scanned)
    r = spectrum.entries[0][0]
    worst = max(rho for length, rho, _ in spectrum.entries if length == r)
    return DesignSummary(tuple(gwlp), r + 1 - worst, worst, scanned)


def scan_cost(factors: int, runs: int, max_len: int) -> int:
    return sum(comb(factors, k) for k in range(3, max_len + 1)) * runs


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a).astype(np.int64)
    a = a.astype(np.uint64)
    out = np.zeros_like(a)
    while a.any():
        out += a & 1
        a >>= np.uint64(1)
    return out.astype(np.int64)


def negation_masks(d: BinaryDesign) -> np.ndarray:
    """Per-run bitmask of columns holding -1 (bit i = column i+1)."""
    bits = (d.cells < 0).astype(np.int64)
    return bits @ (1 << np.arange(d.factors, dtype=np.int64))


def walsh_hadamard(counts: np.ndarray) -> np.ndarray:
    """In-place-style WHT; entry S of the result is j of column subset S."""
    h = counts.astype(np.int64).copy()
    size = h.shape[-1]
    step = 1
    while step < size:
        shaped = h.reshape(-1, 2 * step)
        lo = shaped[:, :step].copy()
        hi = shaped[:, step:].copy()
        shaped[:, :step] = lo + hi
        shaped[:, step:] = lo - hi
        step *= 2
    return h


def _spectrum_wht(d: BinaryDesign, max_len: int) -> WordSpectrum:
    m = d.factors
    counts = np.bincount(negation_masks(d), minlength=1 << m)
    j = walsh_hadamard(counts)
    sizes = _popcount(np.arange(1 << m, dtype=np.int64))
    keep = (j != 0) & (sizes >= 3) & (sizes <= max_len)
    pairs = np.stack([sizes[keep], np.abs(j[keep])], axis=1)
    cells, n = np.unique(pairs, axis=0, return_counts=True)
    entries = tuple((int(s), Fraction(int(v), d.runs), int(c))
                    for (s, v), c in zip(cells, n))
    return WordSpectrum(entries)


def _spectrum_dfs(d: BinaryDesign, max_len: int) -> WordSpectrum:
    # bit-packed columns: XOR composes products, popcount recovers j
    cols = []
    for i in range(d.factors):
        mask = 0
        for r in np.nonzero(d.cells[:, i] < 0)[0]:
            mask |= 1 << int(r)
        cols.append(mask)
    runs = d.runs
    found: dict[tuple[int, int], int] = {}

    def walk(start: int, depth: int, acc: int) -> None:
        for i in range(start, d.factors):
            cur = acc ^ cols[i]
            size = depth + 1
            if size >= 3:
                j = runs - 2 * bin(cur).count("1")
                if j:
                    key = (size, abs(j))
                    found[key] = found.get(key, 0) + 1
            if size < max_len:
                walk(i + 1, size, cur)

    walk(0, 0, 0)
    entries = tuple((s, Fraction(v, runs), c) for (s, v), c in found.items())
    return WordSpectrum(entries)


def spectrum_bruteforce(d: BinaryDesign, max_len: int,
                        force: bool = False) -> WordSpectrum:
    """Every subset of 3..max_len columns with a nonzero J-characteristic."""
    if max_len > d.factors:
        raise ValueError(f"max_len {max_len} exceeds {d.factors} factors")
    cost = scan_cost(d.factors, d.runs, max_len)
    if cost > CELL_READ_BUDGET and not force:
        raise BudgetExceeded(
            f"subset scan needs about {cost:.2e} cell reads "
            f"(budget {CELL_READ_BUDGET:.0e}); pass force to run anyway")
    if d.factors <= _WHT_MAX_FACTORS:
        return _spectrum_wht(d, max_len)
    return _spectrum_dfs(d, max_len)


def duplicated_column_pairs(d: BinaryDesign) -> list[tuple[int, int, int]]:
    """Fully aliased 1-based column pairs (i, j, sign); not part of any GWLP."""
    out = []
    for i in range(d.factors):
        for j in range(i + 1, d.factors):
            dot = int(d.cells[:, i].astype(np.int64) @ d.cells[:, j])
            if abs(dot) == d.runs:
                out.append((i + 1, j + 1, 1 if dot > 0 else -1))
    return out
