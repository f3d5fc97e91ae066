"""Seeded generators of finite stand-ins for the classical generic structures,
plus a generic class-constrained random-extension builder and an
extension-property defect scanner.

Everything is deterministic in (name, size, seed): generators draw from
``random.Random(f"{name}|{size}|{seed}")``, whose string seeding is stable
across platforms and runs.

A finite chunk can only approximate a homogeneous limit; the defect
scanner reports which one-point extensions over small bases are missing,
which is the proxy the partition experiments work with.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Iterator, Optional

from . import catalog
from .structures import (
    ClassSpec,
    QfType,
    Signature,
    Structure,
    qf_type,
    satisfies_class,
    satisfies_class_at,
)


class NoAdmissibleExtension(RuntimeError):
    """The class admits no one-point extension of the current structure."""


GENERATOR_NAMES = (
    "random-graph", "knfree", "random-tournament", "random-oriented",
    "generic-poset", "generic-ordered-graph", "equivalence-omega",
    "double-equivalence", "local-order", "rb-bichrome", "f-free-3hyper",
    "pure-set",
)


class MissingType:
    """A one-point type over a base that the class admits but the structure
    does not realise: adjoining it as a fresh vertex stays in the class."""

    __slots__ = ("base", "qftype")

    def __init__(self, base, qftype: QfType):
        self.base = tuple(base)
        self.qftype = qftype

    def __eq__(self, other):
        return (isinstance(other, MissingType)
                and self.base == other.base and self.qftype == other.qftype)

    def __hash__(self):
        return hash((self.base, self.qftype))

    def __repr__(self):
        return f"MissingType(base={self.base})"


# ---------------------------------------------------------------------------
# One-point extensions of a structure within a class.
#
# The atom slots for a new vertex are grouped into orbits keyed by
# (relation, support multiset); choices are made orbit by orbit in sorted
# order.  A candidate subset is vetted first against the induced window on
# the orbit's support and then, if it survives, against the whole
# structure.  The window pass is complete for every forbidden structure
# whose tuples all span its vertex set (the validity windows enforcing
# symmetry, irreflexivity and the like), because a new violation of such a
# pattern always sits exactly on the support of one of the tuples being
# added; only the remaining "wide" patterns need the anchored search.
#
# Pruning a candidate prunes all its completions, which is exhaustive for
# classes whose invalid windows stay invalid under later additions; every
# catalog class is of this kind.


def _extension_orbits(sig: Signature, size: int) -> list[tuple[tuple, tuple]]:
    groups: dict[tuple, list] = {}
    for name, arity in sig.relations:
        for t in itertools.product(range(size + 1), repeat=arity):
            if size in t:
                groups.setdefault((name, tuple(sorted(t))), []).append(t)
    return sorted((k, tuple(sorted(ts))) for k, ts in groups.items())


class _ClassChecker:
    """Memoized admissibility checks for one class."""

    def __init__(self, K: ClassSpec):
        from .structures import canonical_form
        self.K = K
        arities = [a for _, a in K.signature.relations]
        self.max_window = max(arities, default=0)
        self.window_bad = {canonical_form(F) for F in K.forbidden
                           if F.size <= self.max_window}
        self.general = [F for F in K.forbidden if not self._spans_itself(F)]
        self._canon = canonical_form
        self.memo: dict = {}

    @staticmethod
    def _spans_itself(F: Structure) -> bool:
        verts = set(range(F.size))
        tuples = [t for n in F.signature.names for t in F.relations[n]]
        return bool(tuples) and all(set(t) == verts for t in tuples)

    def window_ok(self, W: Structure) -> bool:
        key = W._key
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        ok = True
        for r in range(1, W.size + 1):
            for sub in itertools.combinations(range(W.size), r):
                if self._canon(W.induced(sub)) in self.window_bad:
                    ok = False
                    break
            if not ok:
                break
        self.memo[key] = ok
        return ok

    def general_ok_incremental(self, S: Structure, name: str, new_tuples) -> bool:
        """No wide forbidden pattern embeds using one of the new tuples.

        A fresh violation must reflect some pattern tuple onto a newly
        added tuple (an image carrying only old tuples embedded already),
        so the search runs once per way of pinning a pattern tuple onto a
        new one.
        """
        from .structures import _iter_embedding_maps
        for F in (F for F in self.general if F.size <= S.size):
            pins = set()
            for tF in F.relations[name]:
                for t_new in new_tuples:
                    m = {}
                    ok = True
                    for p, q in zip(tF, t_new):
                        if m.get(p, q) != q:
                            ok = False
                            break
                        m[p] = q
                    if ok and len(set(m.values())) == len(m):
                        pins.add(tuple(sorted(m.items())))
            for pin in sorted(pins):
                pinned = dict(pin)
                pools = [[pinned[d]] if d in pinned else None
                         for d in range(F.size)]
                for _ in _iter_embedding_maps(F, S, candidates=pools):
                    return False
        return True


def _orbit_options(cur: Structure, checker: _ClassChecker, orbit_key,
                   orbit_tuples, v: int) -> list[tuple[Structure, tuple]]:
    """Admissible (structure, chosen tuple set) continuations for one orbit."""
    name, support = orbit_key
    window = tuple(sorted(set(support)))
    wset = set(window)
    widx = {x: i for i, x in enumerate(window)}
    sig = cur.signature
    base_window = {n: [tuple(widx[q] for q in t) for t in cur.relations[n]
                       if set(t) <= wset]
                   for n in sig.names}
    options = []
    for r in range(len(orbit_tuples) + 1):
        for chosen in itertools.combinations(orbit_tuples, r):
            wrels = {n: list(ts) for n, ts in base_window.items()}
            wrels[name] = wrels[name] + [tuple(widx[q] for q in t) for t in chosen]
            W = Structure(sig, len(window), wrels)
            if not checker.window_ok(W):
                continue
            if not chosen:
                options.append((cur, chosen))
                continue
            rels = {n: set(ts) for n, ts in cur.relations.items()}
            rels[name].update(chosen)
            trial = Structure(sig, cur.size, rels)
            if not checker.general_ok_incremental(trial, name, chosen):
                continue
            options.append((trial, chosen))
    return options


def admissible_extensions(S: Structure, K: ClassSpec) -> Iterator[Structure]:
    """All extensions of S by a fresh vertex that stay in K, one per
    admissible atomic diagram, in deterministic orbit-lexicographic order."""
    v = S.size
    start = Structure(S.signature, v + 1, S.relations)
    orbits = _extension_orbits(S.signature, v)
    checker = _ClassChecker(K)

    def rec(cur: Structure, idx: int) -> Iterator[Structure]:
        if idx == len(orbits):
            yield cur
            return
        key, tuples = orbits[idx]
        for trial, _ in _orbit_options(cur, checker, key, tuples, v):
            yield from rec(trial, idx + 1)

    if satisfies_class_at(start, K, v):
        yield from rec(start, 0)


def admissible_point_types(base: Structure, K: ClassSpec) -> list[QfType]:
    """All class-admissible one-point types over the whole of `base`
    (parameters 0..|base|-1), in deterministic order."""
    b = base.size
    out = []
    for ext in admissible_extensions(base, K):
        positives = []
        for name in base.signature.names:
            for t in ext.relations[name]:
                if b in t:
                    positives.append((name, tuple(-1 if x == b else x for x in t)))
        out.append(QfType(range(b), positives))
    return out


def extension_defects(S: Structure, K: ClassSpec, base_bound: int) -> list[MissingType]:
    """All (base, type) pairs with |base| <= base_bound where the type is
    class-admissible over the base but realised by no vertex of S.

    Bases are enumerated as ascending vertex tuples (types over reorderings
    are permutations of each other and would only duplicate the report).
    """
    if not satisfies_class(S, K):
        raise ValueError("structure is not in the class")
    defects = []
    for b in range(base_bound + 1):
        for A in itertools.combinations(range(S.size), b):
            base = S.induced(A)
            admissible = admissible_point_types(base, K)
            realised = {qf_type(S, v, A).positives
                        for v in range(S.size) if v not in A}
            for t in sorted(admissible, key=lambda t: sorted(t.positives)):
                if t.positives not in realised:
                    defects.append(MissingType(A, QfType(A, t.positives)))
    return defects


# ---------------------------------------------------------------------------
# Generic class-constrained generator


def gen_generic(K: ClassSpec, size: int, seed: int,
                rng: Optional[random.Random] = None) -> Structure:
    """Grow a structure in K by `size` random one-point extensions.

    Each new vertex's diagram is sampled orbit by orbit, uniformly among
    the class-admissible continuations of that orbit.  Raises
    NoAdmissibleExtension if the class refuses every diagram (it never
    shrinks the request silently).
    """
    if rng is None:
        rng = random.Random(f"generic|{K.name}|{size}|{seed}")
    checker = _ClassChecker(K)
    S = Structure(K.signature, 0)
    for _ in range(size):
        v = S.size
        cur = Structure(S.signature, v + 1, S.relations)
        if not satisfies_class_at(cur, K, v):
            raise NoAdmissibleExtension(f"no admissible vertex {v}")
        for key, tuples in _extension_orbits(S.signature, v):
            options = _orbit_options(cur, checker, key, tuples, v)
            if not options:
                raise NoAdmissibleExtension(f"no admissible choice at orbit {key}")
            cur = options[rng.randrange(len(options))][0]
        S = cur
    return S.with_meta(generator="generic", klass=K.name, size=size, seed=seed)


# ---------------------------------------------------------------------------
# Named generators


def _clique_exists(adj: list[set], inside: set, size: int) -> bool:
    if size <= 0:
        return True
    if len(inside) < size:
        return False
    for u in sorted(inside):
        if _clique_exists(adj, inside & adj[u] & set(range(u + 1, len(adj))), size - 1):
            return True
    return False


def _gen_random_graph(size, rng):
    edges = [(i, j) for i, j in itertools.combinations(range(size), 2)
             if rng.random() < 0.5]
    return catalog.graph(size, edges)


def _gen_knfree(n, size, rng):
    adj = [set() for _ in range(size)]
    for v in range(size):
        order = list(range(v))
        rng.shuffle(order)
        for u in order:
            # an edge uv closes a K_n iff the common neighbourhood
            # already holds a clique on n-2 vertices
            common = adj[u] & adj[v]
            choices = [False]
            if not _clique_exists(adj, common, n - 2):
                choices.append(True)
            if rng.choice(choices):
                adj[u].add(v)
                adj[v].add(u)
    return catalog.graph(size, [(u, v) for u in range(size) for v in adj[u] if u < v])


def _gen_tournament(size, rng):
    arcs = []
    for i, j in itertools.combinations(range(size), 2):
        arcs.append((i, j) if rng.random() < 0.5 else (j, i))
    return Structure(catalog.ARC_SIG, size, {"E": arcs})


def _gen_oriented(size, rng):
    arcs = []
    for i, j in itertools.combinations(range(size), 2):
        pick = rng.randrange(3)
        if pick == 1:
            arcs.append((i, j))
        elif pick == 2:
            arcs.append((j, i))
    return Structure(catalog.ARC_SIG, size, {"E": arcs})


def _gen_poset(size, rng):
    """One-point random extensions of a strict partial order.

    Each existing vertex is placed below, incomparable to, or above the
    new point, uniformly among the labels compatible with the labels
    already assigned; the pairwise compatibility conditions are exactly
    what keeps the extended relation transitive.
    """
    less: set[tuple[int, int]] = set()
    for v in range(size):
        label = {}
        for u in range(v):
            ok = []
            for cand in ("below", "incomp", "above"):
                good = True
                for w, lw in label.items():
                    pair = {cand, lw}
                    if pair == {"below", "above"}:
                        lo, hi = (u, w) if cand == "below" else (w, u)
                        if (lo, hi) not in less:
                            good = False
                    elif pair == {"below", "incomp"}:
                        c = u if cand == "below" else w
                        d = w if cand == "below" else u
                        if (d, c) in less:  # c > d would force d below the point
                            good = False
                    elif pair == {"above", "incomp"}:
                        e = u if cand == "above" else w
                        d = w if cand == "above" else u
                        if (e, d) in less:  # e < d would force d above the point
                            good = False
                    if not good:
                        break
                if good:
                    ok.append(cand)
            label[u] = ok[rng.randrange(len(ok))]
        for u, lu in label.items():
            if lu == "below":
                less.add((u, v))
            elif lu == "above":
                less.add((v, u))
    return Structure(catalog.ORDER_SIG, size, {"<": less})


def _gen_ordered_graph(size, rng):
    rels = {"<": [(i, j) for i in range(size) for j in range(i + 1, size)],
            "E": catalog.sym_tuples((i, j) for i, j in itertools.combinations(range(size), 2)
                                    if rng.random() < 0.5)}
    return Structure(catalog.ORDERED_GRAPH_SIG, size, rels)


def _gen_equivalence(size, rng):
    nclasses = max(1, math.isqrt(size - 1) + 1) if size > 1 else 1
    cls = [i % nclasses for i in range(size)]
    pairs = [(u, v) for u in range(size) for v in range(size)
             if u != v and cls[u] == cls[v]]
    S = Structure(catalog.EQ_SIG, size, {"E": pairs})
    return S.with_meta(classes=cls, nclasses=nclasses)


def _gen_double_equivalence(size, rng):
    side = max(1, round(size ** (1 / 3)))
    triples = list(itertools.product(range(side), repeat=3))
    n = len(triples)
    e0 = [(i, j) for i in range(n) for j in range(n)
          if i != j and triples[i][0] == triples[j][0]]
    e1 = [(i, j) for i in range(n) for j in range(n)
          if i != j and triples[i][1] == triples[j][1]]
    S = Structure(catalog.DOUBLE_EQ_SIG, n, {"E0": e0, "E1": e1})
    return S.with_meta(side=side, triples=[list(t) for t in triples],
                       requested_size=size)


def _gen_local_order(size, rng):
    # Distinct rational fractions of a full turn with an odd denominator,
    # so no two points are antipodal and the arc comparison never ties.
    d = size if size % 2 == 1 else size + 1
    fracs = [Fraction(i, d) for i in range(size)]
    rng.shuffle(fracs)
    half = Fraction(1, 2)
    arcs = []
    for u in range(size):
        for v in range(size):
            if u != v and Fraction(0) < (fracs[v] - fracs[u]) % 1 < half:
                arcs.append((u, v))
    S = Structure(catalog.ARC_SIG, size, {"E": arcs})
    return S.with_meta(angles=[str(f) for f in fracs], denominator=d)


def _gen_rb(size, rng):
    red = [set() for _ in range(size)]
    blue = [set() for _ in range(size)]
    for v in range(size):
        order = list(range(v))
        rng.shuffle(order)
        for u in order:
            choices = ["none"]
            if not (red[u] & red[v]):
                choices.append("R")
            if not (blue[u] & blue[v]):
                choices.append("B")
            pick = choices[rng.randrange(len(choices))]
            if pick == "R":
                red[u].add(v)
                red[v].add(u)
            elif pick == "B":
                blue[u].add(v)
                blue[v].add(u)
    r_edges = [(u, v) for u in range(size) for v in red[u] if u < v]
    b_edges = [(u, v) for u in range(size) for v in blue[u] if u < v]
    return catalog.rb_structure(size, r_edges, b_edges)


def parse_generator_id(name: str) -> tuple[str, Optional[int]]:
    if ":" in name:
        head, arg = name.split(":", 1)
        return head, int(arg)
    if name.endswith(")") and "(" in name:
        head, arg = name[:-1].split("(", 1)
        return head, int(arg)
    return name, None


def gen_named(name: str, size: int, seed: int) -> Structure:
    """Generate a named structure deterministically in (name, size, seed)."""
    if size < 1:
        raise ValueError("size must be >= 1")
    head, arg = parse_generator_id(name)
    rng = random.Random(f"{head}:{arg}|{size}|{seed}")
    if head == "random-graph":
        S = _gen_random_graph(size, rng)
    elif head == "knfree":
        if arg is None or arg < 3:
            raise ValueError("knfree needs a parameter n >= 3, e.g. knfree:3")
        S = _gen_knfree(arg, size, rng)
    elif head == "random-tournament":
        S = _gen_tournament(size, rng)
    elif head == "random-oriented":
        S = _gen_oriented(size, rng)
    elif head == "generic-poset":
        S = _gen_poset(size, rng)
    elif head == "generic-ordered-graph":
        S = _gen_ordered_graph(size, rng)
    elif head == "equivalence-omega":
        S = _gen_equivalence(size, rng)
    elif head == "double-equivalence":
        S = _gen_double_equivalence(size, rng)
    elif head == "local-order":
        S = _gen_local_order(size, rng)
    elif head == "rb-bichrome":
        S = _gen_rb(size, rng)
    elif head == "f-free-3hyper":
        S = gen_generic(catalog.f_free_3hypergraphs(), size, seed,
                        rng=random.Random(f"f-free-3hyper|{size}|{seed}"))
    elif head == "pure-set":
        S = Structure(catalog.PURE_SIG, size)
    else:
        raise ValueError(f"unknown generator {name!r}")
    return S.with_meta(generator=name, size=size, seed=seed)


# ---------------------------------------------------------------------------
# Defining-property checks for generator outputs (used by tests and the CLI)


def _is_strict_poset(S: Structure) -> bool:
    less = S.relations["<"]
    for u, v in less:
        if u == v or (v, u) in less:
            return False
    for (a, b), (c, d) in itertools.product(less, less):
        if b == c and (a, d) not in less:
            return False
    return True


def _is_tournament(S: Structure) -> bool:
    arcs = S.relations["E"]
    for u, v in itertools.combinations(range(S.size), 2):
        if ((u, v) in arcs) == ((v, u) in arcs):
            return False
    return not any(u == v for u, v in arcs)


def _is_equivalence(S: Structure, name: str) -> bool:
    rel = S.relations[name]
    if any(u == v for u, v in rel):
        return False
    # union-find the classes, then demand the relation is exactly
    # "same class, distinct" (gives symmetry and transitivity in one go)
    parent = list(range(S.size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in rel:
        parent[find(u)] = find(v)
    expected = {(u, v) for u in range(S.size) for v in range(S.size)
                if u != v and find(u) == find(v)}
    return rel == frozenset(expected)


def validate_named_output(name: str, S: Structure) -> bool:
    """Check that a generated structure satisfies its defining class."""
    head, arg = parse_generator_id(name)
    if head == "random-graph":
        return satisfies_class(S, catalog.all_graphs())
    if head == "knfree":
        return satisfies_class(S, catalog.kn_free(arg))
    if head in ("random-tournament", "local-order"):
        return _is_tournament(S)
    if head == "random-oriented":
        return satisfies_class(S, catalog.oriented_graphs())
    if head == "generic-poset":
        return _is_strict_poset(S)
    if head == "generic-ordered-graph":
        order_ok = all(((u, v) in S.relations["<"]) == (u < v)
                       for u in range(S.size) for v in range(S.size) if u != v)
        graph_part = Structure(catalog.GRAPH_SIG, S.size, {"E": S.relations["E"]})
        return order_ok and satisfies_class(graph_part, catalog.all_graphs())
    if head == "equivalence-omega":
        return _is_equivalence(S, "E")
    if head == "double-equivalence":
        return _is_equivalence(S, "E0") and _is_equivalence(S, "E1")
    if head == "rb-bichrome":
        return satisfies_class(S, catalog.rb_bichrome())
    if head == "f-free-3hyper":
        return satisfies_class(S, catalog.f_free_3hypergraphs())
    if head == "pure-set":
        return S.signature == catalog.PURE_SIG
    raise ValueError(f"unknown generator {name!r}")
