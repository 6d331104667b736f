"""Z4 arithmetic, the Gray map, and construction of two-level designs.

A design is generated by an n x (n+p) matrix G = (V, I_n) over
Z4 = {0,1,2,3}.  The 4^n codewords t @ G (mod 4) are mapped entrywise
through the Gray map to give a 2^(2n) x (2n+2p) matrix over {+1,-1}:
each quaternary symbol becomes a pair of binary columns, with the p
columns of V first and the n identity columns after them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

LEE_WEIGHTS = (0, 1, 2, 1)

# Gray images of 0,1,2,3 in order.
_GRAY = ((1, 1), (1, -1), (-1, -1), (-1, 1))

MAX_N = 12  # 2^(2*12) = 16.7M rows is the largest design worth materializing


class BudgetExceeded(RuntimeError):
    """A requested materialization or scan is over the resource guard."""


def lee_weight(x: int) -> int:
    """Lee weight of a Z4 element: 0,1,2,1 for 0,1,2,3."""
    if x not in (0, 1, 2, 3):
        raise ValueError(f"not a Z4 element: {x!r}")
    return LEE_WEIGHTS[x]


def gray_map(x: int) -> tuple[int, int]:
    """Map one Z4 symbol to its pair of +/-1 levels."""
    if x not in (0, 1, 2, 3):
        raise ValueError(f"not a Z4 element: {x!r}")
    return _GRAY[x]


@dataclass(frozen=True)
class GeneratorSpec:
    """The n x p quaternary matrix V; the identity block I_n is implied."""

    n: int
    p: int
    V: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError(f"n and p must be positive, got n={self.n}, p={self.p}")
        V = tuple(tuple(row) for row in self.V)
        if len(V) != self.n or any(len(row) != self.p for row in V):
            raise ValueError(f"V must be {self.n}x{self.p}")
        for row in V:
            for x in row:
                if x not in (0, 1, 2, 3):
                    raise ValueError(f"V entries must be in 0..3, got {x!r}")
        object.__setattr__(self, "V", V)


@dataclass(frozen=True)
class BinaryDesign:
    runs: int
    factors: int
    cells: np.ndarray  # runs x factors, entries +1/-1, int8

    def column(self, index: int) -> np.ndarray:
        """1-based column access."""
        if not 1 <= index <= self.factors:
            raise ValueError(f"column index {index} outside 1..{self.factors}")
        return self.cells[:, index - 1]


@dataclass(frozen=True)
class FrequencyVector:
    """Counts of each Z4 row pattern of V, indexed by base-4 value."""

    p: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != 4 ** self.p:
            raise ValueError(f"need 4^{self.p} counts, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")

    @property
    def n(self) -> int:
        return sum(self.counts)


def codewords(g: GeneratorSpec) -> np.ndarray:
    """All 4^n codewords t @ (V, I_n) mod 4, ordered by base-4 value of t."""
    if g.n > MAX_N:
        raise BudgetExceeded(
            f"n={g.n} exceeds the materialization cap of {MAX_N}; "
            "use the closed-form path for larger generators")
    # t matrix: row r holds the base-4 digits of r, most significant first
    r = np.arange(4 ** g.n, dtype=np.int64)
    shifts = 2 * np.arange(g.n - 1, -1, -1, dtype=np.int64)
    t = (r[:, None] >> shifts[None, :]) & 3
    V = np.array(g.V, dtype=np.int64)
    left = (t @ V) % 4
    return np.concatenate([left, t], axis=1)


def build_design(g: GeneratorSpec) -> BinaryDesign:
    """Gray image of the full code: 2^(2n) runs, 2(n+p) factors."""
    words = codewords(g)
    runs, m = words.shape
    gray = np.array(_GRAY, dtype=np.int8)  # 4 x 2
    cells = gray[words].reshape(runs, 2 * m)
    return BinaryDesign(runs=runs, factors=2 * m, cells=cells)


def frequency_vector(g: GeneratorSpec) -> FrequencyVector:
    counts = [0] * 4 ** g.p
    for row in g.V:
        idx = 0
        for x in row:
            idx = idx * 4 + x
        counts[idx] += 1
    return FrequencyVector(p=g.p, counts=tuple(counts))


def pattern_of_index(index: int, p: int) -> tuple[int, ...]:
    """Base-4 digits of a frequency-cell index, most significant first."""
    return tuple((index >> (2 * (p - 1 - j))) & 3 for j in range(p))


def generator_for_frequency(f: FrequencyVector) -> GeneratorSpec:
    """A witness V realizing F: the sorted multiset of row patterns."""
    rows = []
    for idx, c in enumerate(f.counts):
        rows.extend([pattern_of_index(idx, f.p)] * c)
    return GeneratorSpec(n=len(rows), p=f.p, V=tuple(rows))


# ---------------------------------------------------------------- file I/O

def load_generator(path: str) -> GeneratorSpec:
    with open(path) as fh:
        data = json.load(fh)
    try:
        return GeneratorSpec(n=data["n"], p=data["p"],
                             V=tuple(tuple(row) for row in data["V"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"generator file {path} needs n, p and an n x p V: {exc}")


def save_generator(g: GeneratorSpec, path: str) -> None:
    with open(path, "w") as fh:
        json.dump({"n": g.n, "p": g.p, "V": [list(r) for r in g.V]}, fh)
        fh.write("\n")


def design_to_text(d: BinaryDesign) -> str:
    lines = [f"runs={d.runs} factors={d.factors}"]
    for row in d.cells:
        lines.append(",".join("+1" if v > 0 else "-1" for v in row))
    return "\n".join(lines) + "\n"


def design_from_text(text: str) -> BinaryDesign:
    lines = text.strip().split("\n")
    header = lines[0].split()
    try:
        runs = int(header[0].split("=")[1])
        factors = int(header[1].split("=")[1])
    except (IndexError, ValueError):
        raise ValueError(f"bad design header: {lines[0]!r}")
    cells = np.array([[int(v) for v in line.split(",")] for line in lines[1:]],
                     dtype=np.int8)
    if cells.shape != (runs, factors):
        raise ValueError(f"design body {cells.shape} does not match header "
                         f"({runs}, {factors})")
    if not np.all(np.abs(cells) == 1):
        raise ValueError("design entries must be +1 or -1")
    return BinaryDesign(runs=runs, factors=factors, cells=cells)
