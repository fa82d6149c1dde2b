"""Point streams over the unit cube: pseudo-random and low-discrepancy.

Every stream hands out D-dimensional points in [0, 1)^D one after another.
Deterministic kinds (Halton, Hua-Wang, orthogonal array, file) are pure
functions of the cursor; the random kind is a seeded PCG64 generator.
Streams buffer ahead internally so that drawing a handful of points per
iteration stays cheap.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

logger = logging.getLogger(__name__)

_CHUNK = 4096


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def first_primes(count: int) -> list[int]:
    out: list[int] = []
    n = 2
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n += 1
    return out


def next_prime(n: int) -> int:
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class PointSet:
    points: np.ndarray  # (N, D)
    provenance: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError("point set must be a non-empty N x D array")
        if np.any(pts < 0.0) or np.any(pts >= 1.0):
            raise ValueError("point set coordinates must lie in [0, 1)")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]


class PointStream:
    """Base class. Subclasses implement ``_generate(start, n)``.

    ``_generate`` is always called with ``start`` equal to the end of the
    previously generated block, which lets the random kind stay sequential.
    """

    kind = "abstract"

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = int(dimension)
        self.cursor = 0
        self._buf = np.empty((0, self.dimension))
        self._buf_start = 0

    def _generate(self, start: int, n: int) -> np.ndarray:
        raise NotImplementedError

    def _restart(self) -> None:
        """Hook for kinds with internal generator state."""

    def reset(self) -> None:
        self.cursor = 0
        self._buf = np.empty((0, self.dimension))
        self._buf_start = 0
        self._restart()

    def next_points(self, n: int) -> np.ndarray:
        """Emit the next ``n`` points as an (n, D) array and advance the cursor."""
        if n < 0:
            raise ValueError("n must be non-negative")
        offset = self.cursor - self._buf_start
        have = self._buf.shape[0] - offset
        if have < n:
            fresh = self._generate(self._buf_start + self._buf.shape[0],
                                   max(n - have, _CHUNK))
            self._buf = np.concatenate([self._buf[offset:], fresh])
            self._buf_start = self.cursor
            offset = 0
        out = self._buf[offset:offset + n]
        self.cursor += n
        return out

    def next_point(self) -> np.ndarray:
        return self.next_points(1)[0]

    def describe(self) -> dict:
        return {"kind": self.kind, "dimension": self.dimension}


class RandomStream(PointStream):
    kind = "random"

    def __init__(self, dimension: int, seed: int):
        self.seed = int(seed)
        super().__init__(dimension)
        self._restart()

    def _restart(self) -> None:
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def _generate(self, start, n):
        return self._rng.random((n, self.dimension))

    def describe(self):
        return {**super().describe(), "seed": self.seed}


def radical_inverse(index: int, base: int, perm: Optional[Sequence[int]] = None) -> float:
    """Scalar (generalized) radical inverse; digits past the leading one are not permuted."""
    value, f = 0.0, 1.0 / base
    while index > 0:
        d = index % base
        value += (perm[d] if perm is not None else d) * f
        index //= base
        f /= base
    return value


def _radical_inverse_batch(indices: np.ndarray, base: int,
                           perm: Optional[np.ndarray]) -> np.ndarray:
    idx = indices.astype(np.int64).copy()
    out = np.zeros(idx.shape[0])
    f = 1.0 / base
    active = idx > 0
    while active.any():
        d = idx % base
        digit = perm[d] if perm is not None else d
        out += np.where(active, digit * f, 0.0)
        idx //= base
        f /= base
        active = idx > 0
    return out


class HaltonStream(PointStream):
    """Halton sequence over the first D primes, optionally digit-permuted.

    The stream starts at index 1 so the first point is (1/2, 1/3, ...).
    A permutation table maps every digit up to and including the most
    significant nonzero one; the implicit zeros beyond it are left alone,
    so index 0 always maps to the origin and values stay below 1.
    """

    kind = "halton"

    def __init__(self, dimension: int, permutations: Optional[Sequence[Sequence[int]]] = None):
        super().__init__(dimension)
        self.bases = first_primes(dimension)
        self.permutations = None
        if permutations is not None:
            if len(permutations) < dimension:
                raise ValueError(f"need {dimension} permutation tables, got {len(permutations)}")
            tables = []
            for base, table in zip(self.bases, permutations):
                table = [int(t) for t in table]
                if len(table) != base:
                    raise ValueError(f"permutation for base {base} has length {len(table)}")
                if sorted(table) != list(range(base)):
                    raise ValueError(f"table for base {base} is not a permutation of 0..{base - 1}")
                tables.append(np.array(table, dtype=np.int64))
            self.permutations = tables

    def _generate(self, start, n):
        indices = np.arange(start + 1, start + n + 1)
        cols = [
            _radical_inverse_batch(indices, b,
                                   None if self.permutations is None else self.permutations[j])
            for j, b in enumerate(self.bases)
        ]
        return np.column_stack(cols)

    def describe(self):
        return {**super().describe(), "permuted": self.permutations is not None}


def hua_wang_generator(dimension: int, p: Optional[int] = None) -> np.ndarray:
    """gamma_j = frac(2 cos(2 pi j / p)), j = 1..D, with prime p >= 2D + 3."""
    if p is None:
        p = next_prime(2 * dimension + 3)
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if p < 2 * dimension + 3:
        raise ValueError(f"p={p} must be at least 2D+3={2 * dimension + 3}")
    j = np.arange(1, dimension + 1)
    g = 2.0 * np.cos(2.0 * np.pi * j / p)
    return g - np.floor(g)


class HuaWangStream(PointStream):
    """Kronecker sequence x_i = frac(i * gamma), i = 1, 2, ..."""

    kind = "huawang"

    def __init__(self, dimension: int, p: Optional[int] = None):
        super().__init__(dimension)
        self.p = next_prime(2 * dimension + 3) if p is None else int(p)
        self.gamma = hua_wang_generator(dimension, self.p)

    def _generate(self, start, n):
        i = np.arange(start + 1, start + n + 1, dtype=float)[:, None]
        x = i * self.gamma
        x -= np.floor(x)
        # guard against 1.0 from rounding of huge i * gamma
        return np.where(x >= 1.0, 0.0, x)

    def describe(self):
        return {**super().describe(), "p": self.p}


def orthogonal_array(q: int, J: int) -> np.ndarray:
    """L_{q^J}(q^m) with m = (q^J - 1)/(q - 1), levels 0..q-1, q prime.

    Basic columns carry the base-q digits of the row index; every other
    column is a GF(q) linear combination ``(t * a_s + a_j) mod q``.
    """
    if not is_prime(q):
        raise ValueError("q must be prime")
    if J < 1:
        raise ValueError("J must be >= 1")
    rows = q ** J
    m = (rows - 1) // (q - 1)
    a = np.zeros((rows, m), dtype=np.int64)
    r = np.arange(rows)
    for k in range(1, J + 1):
        j = (q ** (k - 1) - 1) // (q - 1)
        a[:, j] = (r // q ** (J - k)) % q
    for k in range(2, J + 1):
        j = (q ** (k - 1) - 1) // (q - 1)
        for s in range(j):
            for t in range(1, q):
                a[:, j + s * (q - 1) + t] = (a[:, s] * t + a[:, j]) % q
    return a


def choose_oa_size(n: int, dimension: int) -> tuple[int, int]:
    """Smallest q^J (ties to smaller q) with q^J >= n and (q^J-1)/(q-1) >= D."""
    best = None
    for q in first_primes(max(dimension, 8) + 1):
        J = 1
        while q ** J < n or (q ** J - 1) // (q - 1) < dimension:
            J += 1
        if best is None or q ** J < best[0] ** best[1]:
            best = (q, J)
    return best


def oa_point_set(n: int, dimension: int, q: Optional[int] = None,
                 J: Optional[int] = None) -> PointSet:
    if n < 1 or dimension < 1:
        raise ValueError("n and dimension must be positive")
    if q is None:
        q, J = choose_oa_size(n, dimension)
    elif J is None:
        J = 1
        while q ** J < n or (q ** J - 1) // (q - 1) < dimension:
            J += 1
    a = orthogonal_array(q, J)
    if a.shape[1] < dimension or a.shape[0] < n:
        raise ValueError(f"L_{q ** J} has {a.shape[0]} rows x {a.shape[1]} columns; "
                         f"need {n} x {dimension}")
    pts = (a[:n, :dimension] + 0.5) / q
    return PointSet(pts, provenance=f"OA L{q ** J}({q}^{a.shape[1]})")


class OrthogonalArrayStream(PointStream):
    """Cycles through the rows of an orthogonal array (all q^J of them)."""

    kind = "oa"

    def __init__(self, dimension: int, q: Optional[int] = None, J: Optional[int] = None,
                 n: int = 1):
        super().__init__(dimension)
        if q is None:
            q, J = choose_oa_size(n, dimension)
        elif J is None:
            J = 1
            while q ** J < n or (q ** J - 1) // (q - 1) < dimension:
                J += 1
        self.q, self.J = q, J
        self._table = oa_point_set(q ** J, dimension, q, J).points

    def _generate(self, start, n):
        idx = np.arange(start, start + n) % self._table.shape[0]
        return self._table[idx]

    def describe(self):
        return {**super().describe(), "q": self.q, "J": self.J}


class FileStream(PointStream):
    """Replays a loaded point set; past the end it wraps (default) or raises."""

    kind = "file"

    def __init__(self, point_set: PointSet, wrap: bool = True, path: str = ""):
        super().__init__(point_set.dimension)
        self.points = point_set.points
        self.wrap = wrap
        self.path = path
        self._warned = False

    def _restart(self):
        self._warned = False

    def _generate(self, start, n):
        size = self.points.shape[0]
        # generation runs ahead of consumption; only complain on actual use
        n = min(n, size) if not self.wrap else n
        idx = np.arange(start, start + n)
        if self.wrap:
            return self.points[idx % size]
        return self.points[idx[idx < size]]

    def next_points(self, n):
        size = self.points.shape[0]
        if not self.wrap and self.cursor + n > size:
            raise IndexError(f"point file exhausted: {size} points, requested up to "
                             f"{self.cursor + n}")
        if self.wrap and self.cursor + n > size and not self._warned:
            logger.warning("point set with %d points wraps around (cursor %d)",
                           size, self.cursor + n)
            self._warned = True
        return super().next_points(n)

    def describe(self):
        return {**super().describe(), "path": self.path, "n": int(self.points.shape[0]),
                "wrap": self.wrap}


class PeriodicStream(PointStream):
    """Points ``offset .. offset + period - 1`` of a base stream, repeated forever.

    Emitted point c is base point ``offset + (c mod period)``. The cursor still
    counts every emitted point.
    """

    def __init__(self, base: PointStream, period: int, offset: int = 0):
        if period < 1 or offset < 0:
            raise ValueError("need period >= 1 and offset >= 0")
        super().__init__(base.dimension)
        base.reset()
        self.block = base.next_points(offset + period)[offset:].copy()
        base.reset()
        self.base = base
        self.period = int(period)
        self.offset = int(offset)
        self.kind = f"periodic({base.kind})"

    def _generate(self, start, n):
        return self.block[np.arange(start, start + n) % self.period]

    def describe(self):
        return {"kind": "periodic", "dimension": self.dimension, "period": self.period,
                "offset": self.offset, "base": self.base.describe()}


def load_point_set(path) -> PointSet:
    path = Path(path)
    rows = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: cannot parse {line!r}") from exc
        if rows and len(row) != len(rows[0]):
            raise ValueError(f"{path}:{lineno}: expected {len(rows[0])} coordinates, got {len(row)}")
        if any(not (0.0 <= v < 1.0) for v in row):
            raise ValueError(f"{path}:{lineno}: coordinate outside [0, 1)")
        rows.append(row)
    if not rows:
        raise ValueError(f"{path}: no points")
    return PointSet(np.array(rows), provenance=str(path))


def save_point_set(ps: PointSet, path, header: str = "") -> None:
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in ps.points:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_permutations(path) -> list[list[int]]:
    """Line j holds the digit permutation for the j-th prime base."""
    tables = []
    primes_needed = None
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            table = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-integer entry") from exc
        tables.append(table)
    if not tables:
        raise ValueError(f"{path}: no permutation tables")
    primes_needed = first_primes(len(tables))
    for base, table in zip(primes_needed, tables):
        if len(table) != base or sorted(table) != list(range(base)):
            raise ValueError(f"{path}: table for base {base} is not a permutation of 0..{base - 1}")
    return tables


def centered_l2_discrepancy(ps) -> float:
    """Hickernell's centered L2 discrepancy (the square root of the closed form)."""
    x = ps.points if isinstance(ps, PointSet) else np.asarray(ps, dtype=float)
    n, d = x.shape
    dx = np.abs(x - 0.5)
    term1 = (13.0 / 12.0) ** d
    term2 = np.prod(1.0 + 0.5 * dx - 0.5 * dx ** 2, axis=1).sum() * 2.0 / n
    cross = (1.0 + 0.5 * dx[:, None, :] + 0.5 * dx[None, :, :]
             - 0.5 * np.abs(x[:, None, :] - x[None, :, :]))
    term3 = np.prod(cross, axis=2).sum() / n ** 2
    return math.sqrt(max(term1 - term2 + term3, 0.0))


def star_discrepancy_1d(x) -> float:
    """Exact star discrepancy of a 1-D point set (sort-based formula)."""
    x = np.sort(np.asarray(x, dtype=float).ravel())
    n = x.size
    i = np.arange(1, n + 1)
    return 1.0 / (2 * n) + float(np.max(np.abs(x - (2 * i - 1) / (2 * n))))


def make_stream(kind: str, dimension: int, seed: int = 0, **params) -> PointStream:
    """Build a stream from a kind name plus keyword parameters.

    Recognised kinds: random (seed), halton (perm_file), huawang (p),
    oa (q, J), file (path, wrap).
    """
    kind = kind.lower()
    allowed = {"random": set(), "halton": {"perm_file"}, "ohs": {"perm_file"}, "huawang": {"p"},
               "hws": {"p"}, "oa": {"q", "J", "n"}, "file": {"path", "wrap"},
               "des": {"path", "wrap"}}
    if kind not in allowed:
        raise ValueError(f"unknown stream kind {kind!r}")
    extra = sorted(set(params) - allowed[kind])
    if extra:
        raise ValueError(f"{kind} stream does not take {extra}")
    if kind == "random":
        return RandomStream(dimension, seed)
    if kind in ("halton", "ohs"):
        perm_file = params.get("perm_file")
        perms = load_permutations(perm_file) if perm_file else None
        return HaltonStream(dimension, perms)
    if kind in ("huawang", "hws"):
        return HuaWangStream(dimension, params.get("p"))
    if kind == "oa":
        return OrthogonalArrayStream(dimension, params.get("q"), params.get("J"),
                                     params.get("n", 1))
    if kind in ("file", "des"):
        path = params.get("path")
        if not path:
            raise ValueError("file stream needs a path")
        ps = load_point_set(path)
        if ps.dimension < dimension:
            raise ValueError(f"{path} has dimension {ps.dimension}, need {dimension}")
        if ps.dimension > dimension:
            ps = PointSet(ps.points[:, :dimension], ps.provenance)
        return FileStream(ps, wrap=params.get("wrap", True), path=str(path))
    raise ValueError(f"unknown stream kind {kind!r}")
