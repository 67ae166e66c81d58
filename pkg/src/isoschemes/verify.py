"""Isolation predicates, empirical success rates and FKS distinctness checks."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from .errors import DomainError, PreconditionError
from .graph import EliminationForest, Graph, validate_elim_forest
from .schemes import (
    SchemeParams,
    WeightFunction,
    hc_scheme_sample,
    matching_det_weights,
    matching_rand_weights,
    mis_det_weights,
    mis_rand_weights,
)
from .solutions import enumerate_family


def is_isolating(omega, family) -> bool:
    """Exactly one member attains the minimum weight; families of size <= 1 are vacuous."""
    if len(family) <= 1:
        for S in family:
            for i in S:
                _weight_of(omega, i)
        return True
    weights = [sum(_weight_of(omega, i) for i in S) for S in family]
    low = min(weights)
    return weights.count(low) == 1


def _weight_of(omega, i):
    try:
        return omega[i]
    except (KeyError, IndexError):
        raise DomainError(f"weight undefined for id {i}") from None


@dataclass(frozen=True)
class SchemeSpec:
    """What to sample: problem family plus scheme kind and its parameters.

    kinds: hc -> general/treewidth/separable/parametric; mis -> det/rand;
    mm -> det/rand. ``d`` overrides the forest height handed to mis-rand.
    """

    problem: str
    kind: str
    params: SchemeParams = field(default_factory=SchemeParams)

    def label(self) -> str:
        return f"{self.problem}-{self.kind}"


def sample_weights(spec: SchemeSpec, G: Graph, seed, forest: EliminationForest | None = None) -> WeightFunction:
    p, k = spec.problem.lower(), spec.kind
    if p == "hc":
        return hc_scheme_sample(k, G, spec.params, seed)
    if forest is None:
        raise PreconditionError(f"{spec.label()} needs an elimination forest")
    if p == "mis":
        if k == "det":
            return mis_det_weights(G, forest)
        if k == "rand":
            d = validate_elim_forest(G, forest)
            d = max(d, spec.params.d or 0)
            return mis_rand_weights(G.n, d, seed).apply(forest)
    if p == "mm":
        if k == "det":
            return matching_det_weights(G, forest)
        if k == "rand":
            return matching_rand_weights(G, forest, seed)
    raise PreconditionError(f"unknown scheme {spec.label()}")


FAMILY_OF = {"hc": "HC", "mis": "MIS", "mm": "MaxMatching"}


@dataclass(frozen=True)
class TrialReport:
    scheme: str
    instance: str
    trials: int
    successes: int
    seed_start: object
    seed_stop: object
    max_weight: int
    random_bits: int = 0

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 1.0

    def to_line(self) -> str:
        return (f"scheme={self.scheme} instance={self.instance} trials={self.trials} "
                f"successes={self.successes} rate={self.success_rate:.6f} "
                f"seeds={self.seed_start}..{self.seed_stop} max_weight={self.max_weight} "
                f"random_bits={self.random_bits}")

    @classmethod
    def from_line(cls, line: str) -> "TrialReport":
        kv = dict(tok.split("=", 1) for tok in line.split())
        start, stop = kv["seeds"].split("..")
        return cls(kv["scheme"], kv["instance"], int(kv["trials"]), int(kv["successes"]),
                   start, stop, int(kv["max_weight"]), int(kv.get("random_bits", 0)))


def trial_seed(seed, i: int) -> str:
    return f"{seed}:{i}"


def _run_trials(spec, G, forest, family, seed, indices):
    out = []
    for i in indices:
        w = sample_weights(spec, G, trial_seed(seed, i), forest)
        out.append((is_isolating(w, family), w.max_weight, w.random_bits))
    return out


def success_rate(spec: SchemeSpec, G: Graph, trials: int = 200, seed=0,
                 forest: EliminationForest | None = None, family=None,
                 instance: str | None = None, jobs: int = 1) -> TrialReport:
    """Isolation frequency of ``spec`` over ``trials`` derived seeds.

    The family is enumerated once. With jobs > 1 the seeds are split into
    contiguous chunks across processes and gathered back in index order.
    """
    if family is None:
        family = enumerate_family(FAMILY_OF[spec.problem.lower()], G)
    idx = list(range(trials))
    if jobs > 1 and trials > 1:
        chunks = [idx[k * trials // jobs:(k + 1) * trials // jobs] for k in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_trials, *zip(*[(spec, G, forest, family, seed, c) for c in chunks])))
        results = [r for part in parts for r in part]
    else:
        results = _run_trials(spec, G, forest, family, seed, idx)
    return TrialReport(
        scheme=spec.label(),
        instance=instance or f"n{G.n}m{G.m}",
        trials=trials,
        successes=sum(ok for ok, _, _ in results),
        seed_start=trial_seed(seed, 0),
        seed_stop=trial_seed(seed, trials - 1),
        max_weight=max((mw for _, mw, _ in results), default=0),
        random_bits=max((b for _, _, b in results), default=0),
    )


def binomial_lower_bound(successes: int, trials: int, z: float = 2.326) -> float:
    """One-sided 99% Wilson lower bound on the success probability."""
    if trials == 0:
        return 0.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = p + z * z / (2 * trials)
    spread = z * ((p * (1 - p) / trials + z * z / (4 * trials * trials)) ** 0.5)
    return (centre - spread) / denom


def fks_check(S: Iterable[int], p: int) -> bool:
    """All elements of S have distinct residues mod p."""
    S = set(S)
    return len({x % p for x in S}) == len(S)
