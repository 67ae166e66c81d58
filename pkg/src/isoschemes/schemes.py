"""Weight-function constructors: Hamiltonian-cycle schemes and level-based schemes."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import ConfigurationError, DomainError, ParseError
from .graph import EliminationForest, Graph, ceil_log2, validate_elim_forest
from .numtheory import sample_prime, stream

HC_KINDS = ("general", "treewidth", "separable", "parametric")


@dataclass(frozen=True)
class WeightFunction:
    """Weights indexed by id (1-based) over vertices or edges, with provenance."""

    domain: str
    values: tuple
    kind: str
    params: tuple = ()
    seed: object = None
    primes: tuple = ()
    bound: int = 0
    random_bits: int = 0

    def __post_init__(self):
        if any(w < 0 for w in self.values):
            raise ValueError("weights must be non-negative")
        if self.bound and self.values and max(self.values) > self.bound:
            raise AssertionError(f"{self.kind}: max weight exceeds the declared bound")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        if not 1 <= i <= len(self.values):
            raise DomainError(f"weight undefined for id {i}")
        return self.values[i - 1]

    def weight(self, ids: Iterable[int]) -> int:
        return sum(self[i] for i in ids)

    @property
    def max_weight(self) -> int:
        return max(self.values, default=0)

    def to_tsv(self) -> str:
        head = [
            f"# kind={self.kind}",
            f"# domain={self.domain}",
            "# params=" + ",".join(f"{k}={v}" for k, v in self.params),
            f"# seed={self.seed}",
            "# primes=" + ",".join(str(p) for p in self.primes),
            f"# bound={self.bound}",
            f"# random_bits={self.random_bits}",
        ]
        body = [f"{i}\t{w}" for i, w in enumerate(self.values, 1)]
        return "\n".join(head + body) + "\n"


def parse_weights(text: str) -> WeightFunction:
    meta = {}
    pairs = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = val.strip()
            continue
        tok = line.split()
        if len(tok) != 2:
            raise ParseError("expected '<id>\\t<weight>'", no)
        try:
            pairs.append((int(tok[0]), int(tok[1])))
        except ValueError:
            raise ParseError("non-integer field", no) from None
    pairs.sort()
    if [i for i, _ in pairs] != list(range(1, len(pairs) + 1)):
        raise ParseError("ids must be exactly 1..m")
    params = tuple(tuple(kv.split("=", 1)) for kv in meta.get("params", "").split(",") if "=" in kv)
    primes = tuple(int(p) for p in meta.get("primes", "").split(",") if p)
    return WeightFunction(
        domain=meta.get("domain", "edge"),
        values=tuple(w for _, w in pairs),
        kind=meta.get("kind", "file"),
        params=params,
        seed=meta.get("seed"),
        primes=primes,
        bound=int(meta.get("bound", 0) or 0),
        random_bits=int(meta.get("random_bits", 0) or 0),
    )


@dataclass(frozen=True)
class SchemeParams:
    C: int = 4
    alpha: Fraction | None = None
    M_override: int | None = None
    k: int | None = None
    d: int | None = None
    # "current": layer i-1 is scaled by (range of layer i) * n, which keeps
    # the layers separated; "previous" scales by the range of layer i-1.
    layer_multiplier: str = "current"

    def __post_init__(self):
        if self.C < 1:
            raise ConfigurationError("C must be >= 1")
        if self.alpha is not None:
            object.__setattr__(self, "alpha", Fraction(self.alpha))
            if not 0 < self.alpha < 1:
                raise ConfigurationError("alpha must lie in (0, 1)")
        if self.layer_multiplier not in ("current", "previous"):
            raise ConfigurationError("layer_multiplier is 'current' or 'previous'")

    def items(self) -> tuple:
        out = [("C", self.C)]
        for key in ("alpha", "M_override", "k", "d"):
            val = getattr(self, key)
            if val is not None:
                out.append((key, val))
        if self.layer_multiplier != "current":
            out.append(("layer_multiplier", self.layer_multiplier))
        return tuple(out)


def _ceil_alpha_log(alpha: Fraction, n: int) -> int:
    return math.ceil(alpha * math.log2(n) - 1e-12) if n > 1 else 0


def _pow_alpha_ceil(x: Fraction, alpha: Fraction) -> int:
    return math.ceil(float(x) ** float(alpha) - 1e-12)


@dataclass
class _Layers:
    """Accumulates w <- mult * w + (2^id mod p) one layer at a time, with bounds."""

    ids: list
    n: int
    values: list = field(default_factory=list)
    bound: int = 0
    primes: list = field(default_factory=list)

    def __post_init__(self):
        self.values = [0] * len(self.ids)

    def push(self, mult: int, p: int, p_range: int) -> None:
        self.values = [mult * w + pow(2, i, p) for w, i in zip(self.values, self.ids)]
        self.bound = mult * self.bound + (p_range - 1)
        self.primes.append(p)


def hc_prime_ranges(kind: str, n: int, params: SchemeParams) -> list[int]:
    """Prime ranges in the order the primes are consumed."""
    L = ceil_log2(n)
    C = params.C
    if kind == "general":
        return [2 ** (C * (L + 2 ** i)) for i in range(L + 1)]
    if kind == "treewidth":
        if params.k is None:
            raise ConfigurationError("treewidth scheme needs params.k")
        return [2 ** (C * (params.k + L))] * (3 * L)
    if kind == "separable":
        if params.alpha is None:
            raise ConfigurationError("separable scheme needs params.alpha")
        La = _ceil_alpha_log(params.alpha, n)
        ms = [2 ** (C * (La + 2 ** i)) for i in range(La + C + 1)]
        ns = [2 ** (C * (L + _pow_alpha_ceil(Fraction(n, 2 ** i), params.alpha))) for i in range(L, -1, -1)]
        return ms + ns
    if kind == "parametric":
        if params.M_override is None:
            raise ConfigurationError("parametric scheme needs params.M_override")
        return [params.M_override] * (L + 1)
    raise ConfigurationError(f"unknown scheme kind {kind!r}")


def hc_weights_from_primes(kind: str, G: Graph, params: SchemeParams, primes, seed=None) -> WeightFunction:
    """Edge weights of the chosen kind for an explicit prime tuple."""
    n = max(G.n, 1)
    ranges = hc_prime_ranges(kind, G.n, params)
    primes = list(primes)
    if len(primes) != len(ranges):
        raise ConfigurationError(f"{kind} scheme needs {len(ranges)} primes, got {len(primes)}")
    acc = _Layers(list(range(1, G.m + 1)), n)
    current = params.layer_multiplier == "current"
    if kind == "general":
        for i, (p, R) in enumerate(zip(primes, ranges)):
            scale = (R if current else ranges[i - 1]) * n if i else 0
            acc.push(scale, p, R)
    elif kind == "treewidth":
        for p, R in zip(primes, ranges):
            acc.push(R * n, p, R)
    elif kind == "parametric":
        for i, (p, R) in enumerate(zip(primes, ranges)):
            acc.push(R * n * n if i else 0, p, R)
    else:
        La = _ceil_alpha_log(params.alpha, n)
        k = La + params.C + 1
        for i in range(k):
            scale = (ranges[i] if current else ranges[i - 1]) * n if i else 0
            acc.push(scale, primes[i], ranges[i])
        # second family runs i = L down to 0
        for j in range(k, len(ranges)):
            prev = ranges[j - 1]
            acc.push((ranges[j] if current else prev) * n, primes[j], ranges[j])
    return WeightFunction("edge", tuple(acc.values), kind, params.items(), seed, tuple(primes), acc.bound)


def hc_scheme_sample(kind: str, G: Graph, params: SchemeParams, seed) -> WeightFunction:
    """Sample the prime tuple from ``seed`` and build the edge weights."""
    ranges = hc_prime_ranges(kind, G.n, params)
    primes = [sample_prime(R, stream(seed, "hc", kind, i)).p for i, R in enumerate(ranges)]
    w = hc_weights_from_primes(kind, G, params, primes, seed)
    bits = sum(R.bit_length() for R in ranges)
    return WeightFunction(w.domain, w.values, w.kind, w.params, seed, w.primes, w.bound, bits)


def mis_det_weights(G: Graph, F: EliminationForest) -> WeightFunction:
    """omega(v) = 2^lvl(v)."""
    d = validate_elim_forest(G, F)
    vals = tuple(1 << F.lvl[v] for v in G.vertices)
    return WeightFunction("vertex", vals, "mis-det", (("d", d),), None, (), 1 << max(d - 1, 0))


@dataclass(frozen=True)
class LevelWeights:
    """Weights that depend only on the level of a vertex in an elimination forest."""

    by_level: tuple
    kind: str
    params: tuple
    seed: object
    bound: int
    random_bits: int

    def __call__(self, level: int) -> int:
        return self.by_level[level]

    def apply(self, F: EliminationForest) -> WeightFunction:
        if F.height > len(self.by_level):
            raise ConfigurationError(f"forest height {F.height} exceeds d={len(self.by_level)}")
        vals = tuple(self.by_level[F.lvl[v]] for v in range(1, F.n + 1))
        return WeightFunction("vertex", vals, self.kind, self.params, self.seed, (), self.bound, self.random_bits)


def mis_rand_weights(n: int, d: int, seed) -> LevelWeights:
    """Level weights r_{i // L} * 2^(i % L) with L = ceil(log n) and r uniform in [1, 32 n^5].

    Falls back to 2^i when d < 5L.
    """
    if n < 2 or d < 1:
        raise ConfigurationError("need n >= 2 and d >= 1")
    L = ceil_log2(n)
    if d < 5 * L:
        return LevelWeights(tuple(1 << i for i in range(d)), "mis-det", (("n", n), ("d", d)),
                            seed, 1 << (d - 1), 0)
    top = 32 * n ** 5
    kappa = d // L
    rng = seed if isinstance(seed, random.Random) else stream(seed, "mis-rand", n, d)
    r = [rng.randint(1, top) for _ in range(kappa + 1)]
    by_level = tuple(r[i // L] << (i % L) for i in range(d))
    return LevelWeights(by_level, "mis-rand", (("n", n), ("d", d)), seed,
                        top << (L - 1), (kappa + 1) * ceil_log2(top))


def matching_det_weights(G: Graph, F: EliminationForest) -> WeightFunction:
    """omega(e) = id(e) * n^(2 lvl(e)), lvl(e) the smaller endpoint level."""
    d = validate_elim_forest(G, F)
    n = G.n
    vals = tuple(eid * n ** (2 * min(F.lvl[u], F.lvl[v])) for eid, (u, v) in enumerate(G.edges, 1))
    return WeightFunction("edge", vals, "mm-det", (("d", d),), None, (), G.m * n ** (2 * max(d - 1, 0)))


def matching_rand_weights(G: Graph, F: EliminationForest, seed) -> WeightFunction:
    """omega(e) = id(e) * r_lvl(e) with r_0..r_{d-1} uniform in [1, n^10]."""
    d = validate_elim_forest(G, F)
    n = G.n
    top = n ** 10
    rng = seed if isinstance(seed, random.Random) else stream(seed, "mm-rand", n, d)
    r = [rng.randint(1, top) for _ in range(d)]
    vals = tuple(eid * r[min(F.lvl[u], F.lvl[v])] for eid, (u, v) in enumerate(G.edges, 1))
    return WeightFunction("edge", vals, "mm-rand", (("d", d),), None if isinstance(seed, random.Random) else seed,
                          (), G.m * top, d * ceil_log2(top))
