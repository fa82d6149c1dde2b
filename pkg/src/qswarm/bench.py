"""Shifted/rotated benchmark objectives with hybrid and composition variants.

Base functions are the textbook formulas, vectorised over the last axis so
they accept a single point (D,) or a batch (N, D). Each base is registered
with the CEC2017 input scaling and offset that make its minimiser sit at the
origin of the transformed variable, so ``f(shift) == bias`` for every simple
objective built here.

The 17 objectives returned by :func:`standard_suite` follow the families of
the reduced CEC2017 set (7 simple, 7 hybrid, 3 composition). Shift vectors,
rotations and hybrid permutations are drawn from seeded generators rather
than the official data files.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

PI2 = 2.0 * np.pi


# ---------------------------------------------------------------- base functions

def zakharov(x):
    """sum x_i^2 + (sum 0.5 i x_i)^2 + (sum 0.5 i x_i)^4, i = 1..D."""
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    s = (0.5 * i * x).sum(-1)
    return (x ** 2).sum(-1) + s ** 2 + s ** 4


def rosenbrock(x):
    """Minimum 0 at (1, ..., 1)."""
    x = np.asarray(x, dtype=float)
    a, b = x[..., :-1], x[..., 1:]
    return (100.0 * (a ** 2 - b) ** 2 + (a - 1.0) ** 2).sum(-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return (x ** 2 - 10.0 * np.cos(PI2 * x) + 10.0).sum(-1)


def noncontinuous_rastrigin(x):
    """Rastrigin on y_i = x_i if |x_i| <= 0.5 else round(2 x_i)/2."""
    x = np.asarray(x, dtype=float)
    y = np.where(np.abs(x) > 0.5, np.floor(2.0 * x + 0.5) / 2.0, x)
    return rastrigin(y)


def expanded_schaffer_f6(x):
    """Sum of Schaffer F6 over consecutive pairs, wrapping (x_D, x_1)."""
    x = np.asarray(x, dtype=float)
    s = x ** 2 + np.roll(x, -1, axis=-1) ** 2
    return (0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2).sum(-1)


def schaffer_f7(x):
    """((1/(D-1)) sum sqrt(s_i) (1 + sin^2(50 s_i^0.2)))^2, s_i = sqrt(x_i^2 + x_{i+1}^2).

    One-dimensional input is treated as the pair (x_1, x_1).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] == 1:
        x = np.concatenate([x, x], axis=-1)
    s = np.sqrt(x[..., :-1] ** 2 + x[..., 1:] ** 2)
    t = np.sqrt(s) * (1.0 + np.sin(50.0 * s ** 0.2) ** 2)
    return (t.sum(-1) / (x.shape[-1] - 1)) ** 2


_LUNACEK_MU0 = 2.5


def lunacek_bi_rastrigin(x):
    """min(sum xh^2, D + s sum (xh + mu0 - mu1)^2) + 10 sum (1 - cos 2 pi xh), xh = 2x."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    s = 1.0 - 1.0 / (2.0 * np.sqrt(d + 20.0) - 8.2)
    mu1 = -np.sqrt((_LUNACEK_MU0 ** 2 - 1.0) / s)
    xh = 2.0 * x
    t1 = (xh ** 2).sum(-1)
    t2 = d + s * ((xh + _LUNACEK_MU0 - mu1) ** 2).sum(-1)
    return np.minimum(t1, t2) + 10.0 * (1.0 - np.cos(PI2 * xh)).sum(-1)


def levy(x):
    """Minimum 0 at (1, ..., 1); w_i = 1 + (x_i - 1)/4."""
    x = np.asarray(x, dtype=float)
    w = 1.0 + (x - 1.0) / 4.0
    head = np.sin(np.pi * w[..., 0]) ** 2
    mid = ((w[..., :-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(np.pi * w[..., :-1] + 1.0) ** 2)).sum(-1)
    tail = (w[..., -1] - 1.0) ** 2 * (1.0 + np.sin(PI2 * w[..., -1]) ** 2)
    return head + mid + tail


def ackley(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    a = np.exp(-0.2 * np.sqrt((x ** 2).sum(-1) / d))
    b = np.exp(np.cos(PI2 * x).sum(-1) / d)
    # grouped so that x = 0 gives exactly 0
    return 20.0 * (1.0 - a) + (np.e - b)


def griewank(x):
    x = np.asarray(x, dtype=float)
    i = np.arange(1, x.shape[-1] + 1)
    return 1.0 + (x ** 2).sum(-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(i)), axis=-1)


_SCHWEFEL_SHIFT = 4.209687462275036e+002
_SCHWEFEL_G0 = _SCHWEFEL_SHIFT * np.sin(np.sqrt(_SCHWEFEL_SHIFT))


def modified_schwefel(x):
    """CEC2017 modified Schwefel, offset so that x = 0 gives exactly 0.

    z = x + 420.9687...; inside [-500, 500] the term is z sin(sqrt|z|);
    outside, the argument is folded back and a quadratic penalty added.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    z = x + _SCHWEFEL_SHIFT
    g = z * np.sin(np.sqrt(np.abs(z)))
    hi = z > 500.0
    lo = z < -500.0
    if hi.any():
        zm = 500.0 - np.fmod(z, 500.0)
        g_hi = zm * np.sin(np.sqrt(np.abs(zm))) - (z - 500.0) ** 2 / 10000.0 / d
        g = np.where(hi, g_hi, g)
    if lo.any():
        zm = -500.0 + np.fmod(np.abs(z), 500.0)
        g_lo = zm * np.sin(np.sqrt(np.abs(zm))) - (z + 500.0) ** 2 / 10000.0 / d
        g = np.where(lo, g_lo, g)
    return (_SCHWEFEL_G0 - g).sum(-1)


def bent_cigar(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0] ** 2 + 1e6 * (x[..., 1:] ** 2).sum(-1)


def hgbat(x):
    """|(sum x^2)^2 - (sum x)^2|^(1/2) + (0.5 sum x^2 + sum x)/D + 0.5; minimum at -1."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    r2 = (x ** 2).sum(-1)
    sx = x.sum(-1)
    return np.sqrt(np.abs(r2 ** 2 - sx ** 2)) + (0.5 * r2 + sx) / d + 0.5


def elliptic(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    if d == 1:
        return x[..., 0] ** 2
    c = 10.0 ** (6.0 * np.arange(d) / (d - 1))
    return (c * x ** 2).sum(-1)


_KATSUURA_POW = 2.0 ** np.arange(1, 33)


def katsuura(x):
    """(10/D^2) prod (1 + i sum_j |2^j x_i - round(2^j x_i)| / 2^j)^(10/D^1.2) - 10/D^2."""
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    t = _KATSUURA_POW * x[..., None]
    inner = (np.abs(t - np.floor(t + 0.5)) / _KATSUURA_POW).sum(-1)
    i = np.arange(1, d + 1)
    prod = np.prod((1.0 + i * inner) ** (10.0 / d ** 1.2), axis=-1)
    c = 10.0 / d ** 2
    return c * prod - c


def griewank_rosenbrock(x):
    """Expanded Griewank-plus-Rosenbrock over consecutive pairs (wrapping); minimum at 1."""
    x = np.asarray(x, dtype=float)
    a, b = x, np.roll(x, -1, axis=-1)
    t = 100.0 * (a ** 2 - b) ** 2 + (a - 1.0) ** 2
    return (t ** 2 / 4000.0 - np.cos(t) + 1.0).sum(-1)


@dataclass(frozen=True)
class Base:
    name: str
    fn: Callable
    scale: float = 1.0   # multiplies the shifted search-space variable
    offset: float = 0.0  # added after scaling/rotation to move the minimiser to 0

    def __call__(self, z):
        if self.offset:
            return self.fn(self.scale * z + self.offset)
        return self.fn(self.scale * z) if self.scale != 1.0 else self.fn(z)


BASES: dict[str, Base] = {b.name: b for b in [
    Base("zakharov", zakharov),
    Base("rosenbrock", rosenbrock, 2.048 / 100.0, 1.0),
    Base("rastrigin", rastrigin, 5.12 / 100.0),
    Base("expanded_schaffer_f6", expanded_schaffer_f6),
    Base("schaffer_f7", schaffer_f7),
    Base("lunacek_bi_rastrigin", lunacek_bi_rastrigin, 10.0 / 100.0),
    Base("noncontinuous_rastrigin", noncontinuous_rastrigin, 5.12 / 100.0),
    Base("levy", levy, 1.0, 1.0),
    Base("ackley", ackley),
    Base("griewank", griewank, 600.0 / 100.0),
    Base("modified_schwefel", modified_schwefel, 1000.0 / 100.0),
    Base("bent_cigar", bent_cigar),
    Base("hgbat", hgbat, 5.0 / 100.0, -1.0),
    Base("elliptic", elliptic),
    Base("katsuura", katsuura, 5.0 / 100.0),
    Base("griewank_rosenbrock", griewank_rosenbrock, 5.0 / 100.0, 1.0),
]}


# ---------------------------------------------------------------- objective specs

@dataclass(frozen=True)
class Hybrid:
    bases: tuple[str, ...]
    proportions: tuple[float, ...]
    permutation: np.ndarray  # dimension order applied to the rotated variable

    def block_sizes(self, dimension: int) -> list[int]:
        sizes = [int(np.ceil(p * dimension)) for p in self.proportions[:-1]]
        sizes.append(dimension - sum(sizes))
        return sizes


@dataclass(frozen=True)
class Composition:
    components: tuple["ObjectiveSpec", ...]
    sigmas: tuple[float, ...]
    lambdas: tuple[float, ...]
    biases: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    """A benchmark objective: f(x) = bias + g(R (x - shift)) for the simple kind."""

    fid: str
    name: str
    shift: np.ndarray
    rotation: np.ndarray
    bias: float = 0.0
    base: Optional[str] = None
    hybrid: Optional[Hybrid] = None
    composition: Optional[Composition] = None
    lower: float = -100.0
    upper: float = 100.0

    @property
    def dimension(self) -> int:
        return self.shift.shape[0]

    @property
    def kind(self) -> str:
        if self.composition is not None:
            return "composition"
        if self.hybrid is not None:
            return "hybrid"
        return "simple"

    @property
    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        d = self.dimension
        return np.full(d, self.lower), np.full(d, self.upper)

    def raw(self, x) -> np.ndarray:
        """Objective value without the bias."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise ValueError(f"{self.fid}: expected dimension {self.dimension}, got {x.shape[-1]}")
        if self.composition is not None:
            return composition_value(self.composition, x)
        z = (x - self.shift) @ self.rotation.T
        if self.hybrid is None:
            return BASES[self.base](z)
        z = z[..., self.hybrid.permutation]
        total = 0.0
        start = 0
        for name, size in zip(self.hybrid.bases, self.hybrid.block_sizes(self.dimension)):
            total = total + BASES[name](z[..., start:start + size])
            start += size
        return total

    def __call__(self, x):
        return self.bias + self.raw(x)

    def transform_digest(self) -> str:
        """Checksum over every shift/rotation array the function uses."""
        h = hashlib.sha256()
        stack = [self]
        while stack:
            spec = stack.pop(0)
            h.update(np.ascontiguousarray(spec.shift, dtype="<f8").tobytes())
            h.update(np.ascontiguousarray(spec.rotation, dtype="<f8").tobytes())
            if spec.composition is not None:
                stack.extend(spec.composition.components)
        return h.hexdigest()

    def describe(self) -> dict:
        out = {"fid": self.fid, "name": self.name, "kind": self.kind, "bias": self.bias,
               "dimension": self.dimension, "bounds": [self.lower, self.upper],
               "transform_sha256": self.transform_digest()}
        if self.base:
            out["base"] = self.base
        if self.hybrid is not None:
            out["bases"] = list(self.hybrid.bases)
            out["proportions"] = list(self.hybrid.proportions)
            out["block_sizes"] = self.hybrid.block_sizes(self.dimension)
            out["permutation"] = self.hybrid.permutation.tolist()
        if self.composition is not None:
            c = self.composition
            out["components"] = [s.base or list(s.hybrid.bases) for s in c.components]
            out["sigmas"] = list(c.sigmas)
            out["lambdas"] = list(c.lambdas)
            out["component_biases"] = list(c.biases)
        return out


def evaluate(spec: ObjectiveSpec, x):
    return spec(x)


def composition_weights(comp: Composition, x) -> np.ndarray:
    """Normalised weights, shape (..., n_components).

    w_i ~ exp(-|x - o_i|^2 / (2 D sigma_i^2)) / |x - o_i|; a point sitting on
    an optimum gets weight 1 there and 0 elsewhere.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    dist2 = np.stack([((x - c.shift) ** 2).sum(-1) for c in comp.components], axis=-1)
    sig = np.asarray(comp.sigmas)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.exp(-dist2 / (2.0 * d * sig ** 2)) / np.sqrt(dist2)
        total = w.sum(-1, keepdims=True)
        safe = np.where(total > 0.0, total, 1.0)
        # every weight underflowed: fall back to equal weights
        w = np.where(total > 0.0, w / safe, 1.0 / w.shape[-1])
    hit = dist2 == 0.0
    any_hit = hit.any(-1, keepdims=True)
    if any_hit.any():
        w = np.where(any_hit, hit / np.maximum(hit.sum(-1, keepdims=True), 1), w)
    return w


def composition_value(comp: Composition, x):
    w = composition_weights(comp, x)
    vals = np.stack([lam * c.raw(x) + b for c, lam, b in
                     zip(comp.components, comp.lambdas, comp.biases)], axis=-1)
    return (w * vals).sum(-1)


# ---------------------------------------------------------------- transforms

def seed_for(*parts) -> int:
    """Stable 64-bit seed from arbitrary labels."""
    h = hashlib.blake2b("/".join(str(p) for p in parts).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


def gram_schmidt(a: np.ndarray) -> np.ndarray:
    """Orthonormalise columns with classical Gram-Schmidt, applied twice."""
    q = np.array(a, dtype=float)
    n = q.shape[1]
    for j in range(n):
        v = q[:, j].copy()
        for _ in range(2):
            v -= q[:, :j] @ (q[:, :j].T @ v)
        q[:, j] = v / np.linalg.norm(v)
    return q


def make_transform(seed: int, dimension: int, lower: float = -100.0,
                   upper: float = 100.0) -> tuple[np.ndarray, np.ndarray]:
    """Seeded shift (middle 80% of the box) and a proper rotation matrix."""
    rng = np.random.Generator(np.random.PCG64(seed))
    span = upper - lower
    shift = lower + 0.1 * span + 0.8 * span * rng.random(dimension)
    rot = gram_schmidt(rng.standard_normal((dimension, dimension)))
    if np.linalg.det(rot) < 0:
        rot[:, 0] = -rot[:, 0]
    return shift, rot


def simple(fid: str, base: str, dimension: int, seed: int, bias: float = 0.0,
           name: str = "") -> ObjectiveSpec:
    shift, rot = make_transform(seed, dimension)
    return ObjectiveSpec(fid, name or base, shift, rot, float(bias), base=base)


def hybrid(fid: str, bases: Sequence[str], proportions: Sequence[float], dimension: int,
           seed: int, bias: float = 0.0, name: str = "") -> ObjectiveSpec:
    if abs(sum(proportions) - 1.0) > 1e-12:
        raise ValueError("hybrid proportions must sum to 1")
    if dimension < len(bases):
        raise ValueError(f"{fid}: dimension {dimension} too small for {len(bases)} blocks")
    shift, rot = make_transform(seed, dimension)
    perm = np.random.Generator(np.random.PCG64(seed_for(seed, "perm"))).permutation(dimension)
    h = Hybrid(tuple(bases), tuple(float(p) for p in proportions), perm)
    if min(h.block_sizes(dimension)) < 1:
        raise ValueError(f"{fid}: dimension {dimension} leaves an empty block")
    return ObjectiveSpec(fid, name or "hybrid", shift, rot, float(bias), hybrid=h)


def composition(fid: str, bases: Sequence[str], sigmas, lambdas, biases, dimension: int,
                seed: int, bias: float = 0.0, name: str = "") -> ObjectiveSpec:
    comps = tuple(simple(f"{fid}.{k}", b, dimension, seed_for(seed, "component", k))
                  for k, b in enumerate(bases))
    comp = Composition(comps, tuple(map(float, sigmas)), tuple(map(float, lambdas)),
                       tuple(map(float, biases)))
    return ObjectiveSpec(fid, name or "composition", comps[0].shift, np.eye(dimension),
                         float(bias), composition=comp)


# Hybrid proportions follow the CEC2017 definitions when the constituent list
# matches; otherwise the blocks are equal.
SUITE_TABLE = [
    ("F1", "simple", "zakharov", 300),
    ("F2", "simple", "rosenbrock", 400),
    ("F3", "simple", "rastrigin", 500),
    ("F4", "simple", "schaffer_f7", 600),
    ("F5", "simple", "lunacek_bi_rastrigin", 700),
    ("F6", "simple", "noncontinuous_rastrigin", 800),
    ("F7", "simple", "levy", 900),
    ("F8", "hybrid", (("zakharov", "rosenbrock", "rastrigin"), (0.2, 0.4, 0.4)), 1100),
    ("F9", "hybrid", (("elliptic", "ackley", "schaffer_f7", "rastrigin"),
                      (0.2, 0.2, 0.2, 0.4)), 1400),
    ("F10", "hybrid", (("bent_cigar", "hgbat", "rastrigin", "rosenbrock"),
                       (0.2, 0.2, 0.3, 0.3)), 1500),
    ("F11", "hybrid", (("expanded_schaffer_f6", "hgbat", "rosenbrock", "modified_schwefel",
                        "rastrigin"), (0.2, 0.2, 0.2, 0.2, 0.2)), 1600),
    ("F12", "hybrid", (("katsuura", "ackley", "griewank_rosenbrock", "modified_schwefel",
                        "rastrigin"), (0.1, 0.2, 0.2, 0.2, 0.3)), 1700),
    ("F13", "hybrid", (("bent_cigar", "griewank_rosenbrock", "rastrigin",
                        "expanded_schaffer_f6"), (0.25, 0.25, 0.25, 0.25)), 1900),
    ("F14", "hybrid", (("katsuura", "ackley", "rastrigin", "schaffer_f7", "modified_schwefel"),
                       (0.2, 0.2, 0.2, 0.2, 0.2)), 2000),
    ("F15", "composition", (("rosenbrock", "elliptic", "rastrigin"), (10, 20, 30),
                            (1.0, 1e-6, 1.0), (0, 100, 200)), 2100),
    ("F16", "composition", (("rastrigin", "griewank", "modified_schwefel"), (10, 20, 30),
                            (1.0, 10.0, 1.0), (0, 100, 200)), 2200),
    ("F17", "composition", (("ackley", "elliptic", "griewank", "rastrigin"), (10, 20, 30, 40),
                            (10.0, 1e-6, 10.0, 1.0), (0, 100, 200, 300)), 2400),
]

SUITE_NAMES = {
    "F1": "Shifted and rotated Zakharov",
    "F2": "Shifted and rotated Rosenbrock",
    "F3": "Shifted and rotated Rastrigin",
    "F4": "Shifted and rotated Schaffer F7 (expanded Schaffer slot)",
    "F5": "Shifted and rotated Lunacek bi-Rastrigin",
    "F6": "Shifted and rotated non-continuous Rastrigin",
    "F7": "Shifted and rotated Levy",
    "F8": "Hybrid: Zakharov, Rosenbrock, Rastrigin",
    "F9": "Hybrid: elliptic, Ackley, Schaffer F7, Rastrigin",
    "F10": "Hybrid: Bent Cigar, HGBat, Rastrigin, Rosenbrock",
    "F11": "Hybrid: expanded Schaffer F6, HGBat, Rosenbrock, modified Schwefel, Rastrigin",
    "F12": "Hybrid: Katsuura, Ackley, Griewank-Rosenbrock, modified Schwefel, Rastrigin",
    "F13": "Hybrid: Bent Cigar, Griewank-Rosenbrock, Rastrigin, expanded Schaffer F6",
    "F14": "Hybrid: Katsuura, Ackley, Rastrigin, Schaffer F7, modified Schwefel",
    "F15": "Composition: Rosenbrock, elliptic, Rastrigin",
    "F16": "Composition: Rastrigin, Griewank, modified Schwefel",
    "F17": "Composition: Ackley, elliptic, Griewank, Rastrigin",
}

SUITE_BIAS = {fid: float(bias) for fid, _, _, bias in SUITE_TABLE}

SIMPLE_IDS = [f"F{i}" for i in range(1, 8)]


def build_function(fid: str, dimension: int, seed: int) -> ObjectiveSpec:
    for row_fid, kind, data, bias in SUITE_TABLE:
        if row_fid != fid:
            continue
        fseed = seed_for(seed, fid, dimension)
        name = SUITE_NAMES[fid]
        if kind == "simple":
            return simple(fid, data, dimension, fseed, bias, name)
        if kind == "hybrid":
            return hybrid(fid, data[0], data[1], dimension, fseed, bias, name)
        return composition(fid, *data, dimension=dimension, seed=fseed, bias=bias, name=name)
    raise KeyError(f"unknown function id {fid!r}")


def standard_suite(dimension: int, seed: int = 0) -> list[ObjectiveSpec]:
    return [build_function(row[0], dimension, seed) for row in SUITE_TABLE]


def suite_manifest(specs: Sequence[ObjectiveSpec]) -> list[dict]:
    return [s.describe() for s in specs]


# ---------------------------------------------------------------- transform files

def load_transform(path) -> tuple[np.ndarray, np.ndarray]:
    """Read '# shift' (one row) and '# rotation' (D rows) blocks."""
    section = None
    shift, rows = None, []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            tag = line[1:].strip().lower()
            if tag in ("shift", "rotation"):
                section = tag
            continue
        vals = [float(t) for t in line.split()]
        if section == "shift":
            if shift is not None:
                raise ValueError(f"{path}: more than one shift row")
            shift = np.array(vals)
        elif section == "rotation":
            rows.append(vals)
        else:
            raise ValueError(f"{path}: data outside a '# shift' or '# rotation' block")
    if shift is None or not rows:
        raise ValueError(f"{path}: needs both a shift row and a rotation block")
    rot = np.array(rows)
    if rot.shape != (shift.size, shift.size):
        raise ValueError(f"{path}: rotation is {rot.shape}, expected {(shift.size, shift.size)}")
    if np.abs(rot.T @ rot - np.eye(shift.size)).max() > 1e-8:
        raise ValueError(f"{path}: rotation matrix is not orthogonal")
    return shift, rot


def save_transform(path, shift, rotation) -> None:
    with open(path, "w") as fh:
        fh.write("# shift\n")
        fh.write(" ".join(repr(float(v)) for v in shift) + "\n")
        fh.write("# rotation\n")
        for row in rotation:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def with_transform(spec: ObjectiveSpec, shift, rotation) -> ObjectiveSpec:
    """Copy of a simple or hybrid spec with injected shift/rotation data."""
    if spec.composition is not None:
        raise ValueError("composition specs carry one transform per component")
    shift = np.asarray(shift, dtype=float)
    rotation = np.asarray(rotation, dtype=float)
    if shift.shape != spec.shift.shape or rotation.shape != spec.rotation.shape:
        raise ValueError("transform dimension does not match the spec")
    return ObjectiveSpec(spec.fid, spec.name, shift, rotation, spec.bias, spec.base,
                         spec.hybrid, None, spec.lower, spec.upper)
