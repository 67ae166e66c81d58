"""Adversarial instances: colliding solution pairs and graphs whose only two optima are that pair.

Weight functions here are plain sequences; ``w[i - 1]`` is the weight of
label ``i``. Labels are vertices for MIS and Steiner, edges for
MinMaxMatching and HC.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path

from .errors import NotConstructible, NotFound, PreconditionError
from .graph import EliminationForest, Graph, TreeDecomposition, parse_ef, parse_graph, parse_td
from .solutions import enumerate_family

KINDS = ("MIS", "Steiner", "MinMaxMatching", "HC")
_ALIASES = {"mis": "MIS", "steiner": "Steiner", "minsteiner": "Steiner", "mmm": "MinMaxMatching",
            "minmaxmatching": "MinMaxMatching", "hc": "HC"}
# fraction of the ground set that may differ, and the smallest usable difference
BETA = {"MIS": Fraction(1, 2), "Steiner": Fraction(1, 3), "MinMaxMatching": Fraction(1, 5), "HC": Fraction(1, 4)}
MIN_K = {"MIS": 1, "Steiner": 3, "MinMaxMatching": 2, "HC": 3}
_FAMILY = {"MIS": "MIS", "Steiner": "MinSteiner", "MinMaxMatching": "MinMaxMatching", "HC": "HC"}


def canonical_kind(kind: str) -> str:
    if kind in KINDS:
        return kind
    try:
        return _ALIASES[kind.lower()]
    except KeyError:
        raise PreconditionError(f"unknown lower-bound kind {kind!r}") from None


def common_needed(kind: str, k: int) -> int:
    """Size of A ∩ B the builder needs when |A \\ B| = k."""
    kind = canonical_kind(kind)
    if kind == "MIS":
        return 0
    if kind == "Steiner":
        return max(1, k - 1)
    if kind == "MinMaxMatching":
        return 3 * k - 2
    return 2 * k


def _fits(kind, k, common) -> bool:
    return k >= MIN_K[kind] and common >= common_needed(kind, k)


def find_colliding_pair(weights, beta=Fraction(1, 2), kind: str | None = None, min_diff: int = 1):
    """Two sets A != B with A ∪ B = [n], |A \\ B| = |B \\ A| <= beta*n and equal weight
    under every function in ``weights``.

    Subsets of each size up to floor(beta*n) are bucketed by their weight
    vector; two members of one bucket, with the common part dropped, give
    the differing parts. With ``kind`` set, only pairs that builder can use
    are accepted. Raises NotFound when the search is exhausted.
    """
    weights = [tuple(w) for w in weights]
    if not weights:
        raise PreconditionError("need at least one weight function")
    n = len(weights[0])
    if any(len(w) != n for w in weights):
        raise PreconditionError("weight functions have different lengths")
    if n > 24:
        raise PreconditionError(f"exhaustive search refuses n={n} > 24")
    kind = canonical_kind(kind) if kind else None
    top = int(Fraction(beta) * n)
    for size in range(1, top + 1):
        buckets: dict[tuple, list[frozenset]] = {}
        for combo in combinations(range(1, n + 1), size):
            key = tuple(sum(w[i - 1] for i in combo) for w in weights)
            S = frozenset(combo)
            for other in buckets.get(key, ()):
                P, Q = other - S, S - other
                k = len(P)
                if k < min_diff or (kind and not _fits(kind, k, n - 2 * k)):
                    continue
                full = frozenset(range(1, n + 1))
                return sorted(full - Q), sorted(full - P)
            buckets.setdefault(key, []).append(S)
    raise NotFound(f"no colliding pair with |A\\B| <= {top} among {len(weights)} weight function(s) on [{n}]")


@dataclass
class LBInstance:
    kind: str
    graph: Graph
    A: tuple
    B: tuple
    optima: tuple  # the two intended optima, as sorted label tuples
    labels: dict  # label -> vertex (MIS, Steiner) or edge id (MinMaxMatching, HC)
    forest: EliminationForest | None = None
    pathdec: TreeDecomposition | None = None
    terminals: tuple | None = None
    names: dict = field(default_factory=dict)  # construction role -> label, for inspection

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    def family_labels(self) -> list[tuple]:
        """Brute-force optimum family, translated back to labels."""
        back = {g: lab for lab, g in self.labels.items()}
        fam = enumerate_family(_FAMILY[self.kind], self.graph, terminals=self.terminals,
                               bound=max(self.graph.n, 16))
        return sorted(tuple(sorted(back[g] for g in S)) for S in fam)

    def manifest(self) -> str:
        lines = [f"kind {self.kind}", f"labels {self.n_labels}",
                 "A " + " ".join(map(str, self.A)), "B " + " ".join(map(str, self.B)),
                 "optimum " + " ".join(map(str, self.optima[0])),
                 "optimum " + " ".join(map(str, self.optima[1]))]
        if self.terminals is not None:
            lines.append("terminals " + " ".join(map(str, self.terminals)))
        lines += [f"label {lab} {g}" for lab, g in sorted(self.labels.items())]
        return "\n".join(lines) + "\n"

    def save(self, directory) -> list[Path]:
        d = Path(directory)
        d.mkdir(parents=True, exist_ok=True)
        out = [d / "instance.gr", d / "manifest.txt"]
        out[0].write_text(self.graph.to_gr())
        out[1].write_text(self.manifest())
        if self.forest is not None:
            out.append(d / "instance.ef")
            out[-1].write_text(self.forest.to_ef())
        if self.pathdec is not None:
            out.append(d / "instance.td")
            out[-1].write_text(self.pathdec.to_td())
        return out


def load_lb_instance(directory) -> LBInstance:
    d = Path(directory)
    G = parse_graph((d / "instance.gr").read_text())
    forest = parse_ef((d / "instance.ef").read_text()) if (d / "instance.ef").exists() else None
    pathdec = parse_td((d / "instance.td").read_text()) if (d / "instance.td").exists() else None
    kind, A, B, optima, terminals, labels = None, (), (), [], None, {}
    for line in (d / "manifest.txt").read_text().splitlines():
        head, *rest = line.split()
        nums = tuple(int(x) for x in rest) if head != "kind" else ()
        if head == "kind":
            kind = rest[0]
        elif head == "A":
            A = nums
        elif head == "B":
            B = nums
        elif head == "optimum":
            optima.append(nums)
        elif head == "terminals":
            terminals = nums
        elif head == "label":
            labels[nums[0]] = nums[1]
    return LBInstance(canonical_kind(kind), G, A, B, tuple(optima), labels, forest, pathdec, terminals)


def _split(A, B, kind):
    A, B = set(A), set(B)
    if A == B:
        raise PreconditionError("A and B must differ")
    a, b = sorted(A - B), sorted(B - A)
    if len(a) != len(b):
        raise PreconditionError("|A \\ B| must equal |B \\ A|")
    common = sorted(A & B)
    k = len(a)
    if k < MIN_K[kind]:
        raise PreconditionError(f"{kind} needs |A\\B| >= {MIN_K[kind]}, got {k}")
    if len(common) < common_needed(kind, k):
        raise NotConstructible(f"{kind} with |A\\B| = {k} needs |A∩B| >= {common_needed(kind, k)}, got {len(common)}")
    return a, b, common, k


def _build_mis(A, B):
    a, b, common, k = _split(A, B, "MIS")
    n = len(set(A) | set(B))
    edges = [(a[i], b[i]) for i in range(k)]
    edges += [(a[i], b[0]) for i in range(1, k)] + [(a[0], b[i]) for i in range(1, k)]
    parent = {v: 0 for v in range(1, n + 1)}
    parent[b[0]] = a[0]
    for i in range(1, k):
        parent[a[i]] = b[0]
        parent[b[i]] = a[i]
    names = {f"a{i + 1}": a[i] for i in range(k)} | {f"b{i + 1}": b[i] for i in range(k)}
    return LBInstance("MIS", Graph(n, edges), tuple(sorted(A)), tuple(sorted(B)),
                      (tuple(sorted(A)), tuple(sorted(B))), {v: v for v in range(1, n + 1)},
                      forest=EliminationForest(parent), names=names)


def _build_steiner(A, B):
    a, b, common, k = _split(A, B, "Steiner")
    n = len(set(A) | set(B))
    t = common[:k - 1]
    extra = common[k - 1:]
    edges = [(t[0], x) for x in extra]
    for i in range(k - 1):
        edges += [(t[i], a[i]), (t[i], b[i]), (a[i], a[-1]), (b[i], b[-1])]
    parent = {a[-1]: 0, b[-1]: a[-1]}
    for i in range(k - 1):
        parent[t[i]] = b[-1]
        parent[a[i]] = parent[b[i]] = t[i]
    for x in extra:
        parent[x] = t[0]
    names = {f"a{i + 1}": a[i] for i in range(k)} | {f"b{i + 1}": b[i] for i in range(k)}
    names |= {f"t{i + 1}": t[i] for i in range(k - 1)}
    return LBInstance("Steiner", Graph(n, edges), tuple(sorted(A)), tuple(sorted(B)),
                      (tuple(sorted(A)), tuple(sorted(B))), {v: v for v in range(1, n + 1)},
                      forest=EliminationForest(parent), terminals=tuple(common), names=names)


def _edge_labelled(kind, n_vertices, labelled_edges, A, B, optima, **kw):
    G = Graph(n_vertices, [e for _, e in labelled_edges])
    labels = {lab: G.edge_id(*e) for lab, e in labelled_edges}
    return LBInstance(kind, G, tuple(sorted(A)), tuple(sorted(B)), optima, labels, **kw)


def _build_mmm(A, B):
    a, b, common, k = _split(A, B, "MinMaxMatching")
    kbar, K = common[:3 * k - 2], common[3 * k - 2:]
    d, c, c2 = kbar[:k], kbar[k:2 * k - 1], kbar[2 * k - 1:]
    va = lambda i: i  # noqa: E731  (1-based gadget positions)
    vb = lambda i: k + i  # noqa: E731
    vc = lambda i: 2 * k + i  # noqa: E731
    vd = lambda i: 3 * k + i  # noqa: E731
    le = []
    for i in range(1, k + 1):
        le += [(a[i - 1], (vc(i), va(i))), (b[i - 1], (vc(i), vb(i))), (d[i - 1], (vc(i), vd(i)))]
    for i in range(1, k):
        le += [(c[i - 1], (vb(k), va(i))), (c2[i - 1], (va(k), vb(i)))]
    parent = {va(k): 0, vb(k): va(k)}
    for i in range(1, k + 1):
        parent[vc(i)] = vb(k)
        parent[vd(i)] = vc(i)
        if i < k:
            parent[va(i)] = parent[vb(i)] = vc(i)
    top = 4 * k
    for j, lab in enumerate(K):
        x, y = top + 2 * j + 1, top + 2 * j + 2
        le.append((lab, (x, y)))
        parent[x], parent[y] = 0, x
    optima = (tuple(sorted(a + K)), tuple(sorted(b + K)))
    names = {f"d{i + 1}": d[i] for i in range(k)} | {f"c{i + 1}": c[i] for i in range(k - 1)}
    names |= {f"c'{i + 1}": c2[i] for i in range(k - 1)}
    return _edge_labelled("MinMaxMatching", top + 2 * len(K), le, A, B, optima,
                          forest=EliminationForest(parent), names=names)


def _build_hc(A, B):
    """Ladder with every rung subdivided, so all rungs are forced.

    Vertices u_i = i and v_i = k + i. Odd k closes the rails crosswise
    (Möbius ladder), even k closes each rail on itself (prism); in both
    cases the two alternating perfect matchings of the rails are the only
    ways to finish a Hamiltonian cycle through all rungs.
    """
    a, b, common, k = _split(A, B, "HC")
    u = lambda i: i  # noqa: E731
    v = lambda i: k + i  # noqa: E731
    if k % 2:
        ring = [u(i) for i in range(1, k + 1)] + [v(i) for i in range(1, k + 1)]
        pm1 = [(ring[2 * j], ring[2 * j + 1]) for j in range(k)]
        pm2 = [(ring[2 * j + 1], ring[(2 * j + 2) % (2 * k)]) for j in range(k)]
    else:
        us = [u(i) for i in range(1, k + 1)]
        vs = [v(i) for i in range(1, k + 1)]
        even = lambda cyc: [(cyc[2 * j], cyc[2 * j + 1]) for j in range(k // 2)]  # noqa: E731
        odd = lambda cyc: [(cyc[2 * j + 1], cyc[(2 * j + 2) % k]) for j in range(k // 2)]  # noqa: E731
        pm1 = even(us) + odd(vs)
        pm2 = odd(us) + even(vs)
    le = list(zip(a, pm1)) + list(zip(b, pm2))
    # rung 1 takes all spare common labels, the others exactly two edges
    lengths = [len(common) - 2 * (k - 1)] + [2] * (k - 1)
    nxt = 2 * k + 1
    pos = 0
    inner = []
    for i in range(1, k + 1):
        path = [u(i)] + list(range(nxt, nxt + lengths[i - 1] - 1)) + [v(i)]
        nxt += lengths[i - 1] - 1
        inner.append(path[1:-1])
        for x, y in zip(path, path[1:]):
            le.append((common[pos], (x, y)))
            pos += 1
    bags = []
    s = inner[0]
    if len(s) == 1:
        bags.append({u(1), v(1), s[0]})
    for j in range(len(s) - 1):
        bags.append({u(1), v(1), s[j], s[j + 1]})
    for i in range(2, k + 1):
        bags.append({u(1), v(1), u(i - 1), v(i - 1), u(i)})
        bags.append({u(1), v(1), v(i - 1), u(i), v(i)})
        bags.append({u(1), v(1), u(i), v(i)} | set(inner[i - 1]))
    n_vertices = nxt - 1
    td = TreeDecomposition.path([sorted(bg) for bg in bags], n_vertices)
    names = {"shape": "mobius" if k % 2 else "prism"}
    return _edge_labelled("HC", n_vertices, le, A, B, (tuple(sorted(A)), tuple(sorted(B))),
                          pathdec=td, names=names)


_BUILDERS = {"MIS": _build_mis, "Steiner": _build_steiner, "MinMaxMatching": _build_mmm, "HC": _build_hc}


def build_lb_instance(kind: str, A=None, B=None, *, weights=None) -> LBInstance:
    """Instance whose optimum family is exactly the two intended sets.

    Give either the pair (A, B) over labels 1..n with A ∪ B = [n], or
    ``weights`` to search for a suitable colliding pair first.
    """
    kind = canonical_kind(kind)
    if A is None:
        if weights is None:
            raise PreconditionError("give A and B, or weights")
        A, B = find_colliding_pair(weights, BETA[kind], kind=kind)
    if B is None:
        raise PreconditionError("B is missing")
    union = set(A) | set(B)
    if union != set(range(1, len(union) + 1)):
        raise PreconditionError("A ∪ B must be 1..n")
    return _BUILDERS[kind](A, B)


def diagnose_lb_instance(inst: LBInstance, weights=()) -> list[str]:
    """Everything wrong with the instance; empty when it is a valid witness."""
    problems = []
    fam = inst.family_labels()
    if len(fam) != 2:
        problems.append(f"{len(fam)} optima instead of 2")
    if sorted(fam) != sorted(inst.optima):
        problems.append("optima differ from the intended pair")
    for j, w in enumerate(weights):
        wa, wb = (sum(w[i - 1] for i in S) for S in inst.optima)
        if wa != wb:
            problems.append(f"weight function {j} separates the optima ({wa} vs {wb})")
    try:
        if inst.pathdec is not None:
            width = inst.pathdec.validate(inst.graph)
            if width > 4:
                problems.append(f"path decomposition width {width} > 4")
        elif inst.forest is not None:
            from .graph import validate_elim_forest
            h = validate_elim_forest(inst.graph, inst.forest)
            if h > 4:
                problems.append(f"elimination forest height {h} > 4")
        else:
            problems.append("no decomposition attached")
    except PreconditionError as exc:
        problems.append(f"invalid decomposition: {exc}")
    return problems


def verify_lb_instance(inst: LBInstance, weights=()) -> bool:
    return not diagnose_lb_instance(inst, weights)
