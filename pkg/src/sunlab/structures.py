"""Finite relational structures and the searches everything else is built on.

A Structure is a finite relational structure over an explicit signature:
vertices are 0..size-1 and each relation holds an explicit set of tuples.
No symmetry closure is implied; a graph stores both orientations of every
edge, a 3-hypergraph stores all six orderings of every hyperedge.

On top of the data model this module provides Gaifman graphs and
irreducibility, backtracking search for induced embeddings and
isomorphisms, free amalgams, membership in classes given by forbidden
irreducible substructures, quantifier-free 1-types over a parameter
sequence, and an exhaustive checker for the disjoint 3-amalgamation
property over the empty base.

All values are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable, Iterator, Optional


class SignatureMismatch(ValueError):
    """Two structures that should share a signature do not."""


class MalformedEmbedding(ValueError):
    """A vertex map that is not an induced embedding."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration was asked to exceed its configured budget."""


class Signature:
    """An ordered sequence of (relation name, arity) pairs.

    Names must be unique and arities >= 1.  The empty signature (pure
    sets) is permitted.
    """

    __slots__ = ("relations", "_arity")

    def __init__(self, relations: Iterable[tuple[str, int]] = ()):
        rels = tuple((str(n), int(a)) for n, a in relations)
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise ValueError("relation names must be unique")
        for n, a in rels:
            if a < 1:
                raise ValueError(f"arity of {n!r} must be >= 1")
        self.relations = rels
        self._arity = dict(rels)

    def arity(self, name: str) -> int:
        return self._arity[name]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.relations == other.relations

    def __hash__(self):
        return hash(self.relations)

    def __repr__(self):
        return f"Signature({list(self.relations)!r})"


class Structure:
    """A finite relational structure: vertices 0..size-1 plus relation tuples.

    `relations` maps each relation name to a set of tuples; absent names
    get the empty set.  `meta` is a free-form dict carried along for
    provenance (generator id, seed, labels, ...) and is excluded from
    equality and hashing.
    """

    __slots__ = ("signature", "size", "relations", "meta",
                 "_key", "_hash", "_by_vertex", "_adj", "_canon",
                 "_src", "_scan")

    def __init__(self, signature: Signature, size: int,
                 relations: Optional[dict] = None, meta: Optional[dict] = None):
        if size < 0:
            raise ValueError("size must be >= 0")
        rels: dict[str, frozenset] = {}
        given = dict(relations or {})
        for name, arity in signature.relations:
            tuples = frozenset(tuple(int(x) for x in t) for t in given.pop(name, ()))
            for t in tuples:
                if len(t) != arity:
                    raise ValueError(f"tuple {t} has wrong length for {name!r}/{arity}")
                if any(x < 0 or x >= size for x in t):
                    raise ValueError(f"tuple {t} of {name!r} out of range 0..{size - 1}")
            rels[name] = tuples
        if given:
            raise ValueError(f"tuples for undeclared relations: {sorted(given)}")
        self.signature = signature
        self.size = size
        self.relations = rels
        self.meta = dict(meta) if meta else {}
        self._key = (signature.relations, size,
                     tuple((n, tuple(sorted(rels[n]))) for n in signature.names))
        self._hash = hash(self._key)
        self._by_vertex = None
        self._adj = None
        self._canon = None
        self._src = None
        self._scan = None

    @property
    def vertices(self) -> range:
        return range(self.size)

    def tuples(self, name: str) -> frozenset:
        return self.relations[name]

    def tuples_by_vertex(self, name: str, v: int) -> tuple:
        """All tuples of `name` containing vertex v (cached)."""
        if self._by_vertex is None:
            by = {n: [[] for _ in range(self.size)] for n in self.signature.names}
            for n in self.signature.names:
                for t in self.relations[n]:
                    for x in set(t):
                        by[n][x].append(t)
            self._by_vertex = {n: tuple(tuple(l) for l in lists)
                               for n, lists in by.items()}
        return self._by_vertex[name][v]

    def induced(self, vertices: Iterable[int]) -> "Structure":
        """Induced substructure; new vertex i is the i-th entry of `vertices`."""
        vs = list(vertices)
        if len(set(vs)) != len(vs):
            raise ValueError("vertex list must not repeat")
        pos = {v: i for i, v in enumerate(vs)}
        keep = set(vs)
        rels = {}
        for name in self.signature.names:
            rels[name] = [tuple(pos[x] for x in t)
                          for t in self.relations[name] if set(t) <= keep]
        return Structure(self.signature, len(vs), rels)

    def with_meta(self, **meta) -> "Structure":
        merged = dict(self.meta)
        merged.update(meta)
        return Structure(self.signature, self.size, self.relations, merged)

    def __eq__(self, other):
        return isinstance(other, Structure) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        counts = {n: len(ts) for n, ts in self.relations.items() if ts}
        return f"Structure(size={self.size}, tuples={counts})"


class Embedding:
    """An injective vertex map carrying one structure into another, induced:
    a tuple holds on the image iff it holds on the source."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: Structure, target: Structure,
                 vertex_map: Iterable[int], validate: bool = True):
        self.source = source
        self.target = target
        self.map = tuple(int(x) for x in vertex_map)
        if validate:
            problem = embedding_defect(source, target, self.map)
            if problem:
                raise MalformedEmbedding(problem)

    def __call__(self, v: int) -> int:
        return self.map[v]

    @property
    def image(self) -> tuple[int, ...]:
        return self.map

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size

    def __eq__(self, other):
        return (isinstance(other, Embedding) and self.map == other.map
                and self.source == other.source and self.target == other.target)

    def __hash__(self):
        return hash((self.map, self.source, self.target))

    def __repr__(self):
        return f"Embedding({self.map})"


def embedding_defect(A: Structure, B: Structure, vmap: tuple[int, ...]) -> Optional[str]:
    """Return a description of why vmap is not an induced embedding, or None."""
    if A.signature != B.signature:
        return "signature mismatch"
    if len(vmap) != A.size:
        return "map length differs from source size"
    if any(x < 0 or x >= B.size for x in vmap):
        return "image vertex out of range"
    if len(set(vmap)) != len(vmap):
        return "map not injective"
    image = set(vmap)
    inv = {x: i for i, x in enumerate(vmap)}
    for name in A.signature.names:
        bt = B.relations[name]
        for t in A.relations[name]:
            if tuple(vmap[x] for x in t) not in bt:
                return f"tuple {t} of {name!r} not preserved"
        at = A.relations[name]
        for t in bt:
            if set(t) <= image and tuple(inv[x] for x in t) not in at:
                return f"tuple {t} of {name!r} not reflected"
    return None


# ---------------------------------------------------------------------------
# Gaifman graphs and irreducibility


def gaifman(S: Structure) -> frozenset:
    """The Gaifman graph as a set of 2-element frozensets of vertices."""
    edges = set()
    for name in S.signature.names:
        for t in S.relations[name]:
            for u, v in itertools.combinations(set(t), 2):
                edges.add(frozenset((u, v)))
    return frozenset(edges)


def gaifman_adjacency(S: Structure) -> list[set[int]]:
    if S._adj is None:
        adj = [set() for _ in range(S.size)]
        for e in gaifman(S):
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        bits = []
        for v in range(S.size):
            m = 0
            for w in adj[v]:
                m |= 1 << w
            bits.append(m)
        S._adj = (adj, bits)
    return S._adj[0]


def _adjacency_bits(S: Structure) -> list[int]:
    gaifman_adjacency(S)
    return S._adj[1]


def is_irreducible(S: Structure) -> bool:
    """True iff the Gaifman graph is a clique (size <= 1 counts)."""
    n = S.size
    return len(gaifman(S)) == n * (n - 1) // 2


# ---------------------------------------------------------------------------
# Induced embedding search

CandidateFilter = Callable[[int, int, list[int]], bool]

_PATTERNS: dict = {}


def _patterns_through(sig: Signature, d: int) -> tuple:
    """Atom patterns over vertices 0..d that mention d, per relation."""
    key = (sig.relations, d)
    hit = _PATTERNS.get(key)
    if hit is None:
        per = []
        for name, arity in sig.relations:
            pats = tuple(p for p in itertools.product(range(d + 1), repeat=arity)
                         if d in p)
            per.append((name, pats))
        hit = tuple(per)
        _PATTERNS[key] = hit
    return hit


def _iter_embedding_maps(A: Structure, B: Structure,
                         candidate_filter: Optional[CandidateFilter] = None,
                         candidates: Optional[list[Iterable[int]]] = None,
                         ) -> Iterator[tuple[int, ...]]:
    """Backtracking search for induced embeddings of A in B.

    Yields image tuples in lexicographic order.  A-vertices are mapped in
    index order; `candidate_filter(depth, v, partial)` may veto target
    vertex v for A-vertex `depth` given the partial image list, and
    `candidates[depth]` may restrict the pool outright (must be sorted for
    the lexicographic guarantee to hold).

    Induced embeddings transport the Gaifman graph exactly in both
    directions, so candidates are pruned by bitmask: the image of an
    A-neighbour forces adjacency, the image of an A-non-neighbour forces
    non-adjacency.  The remaining tuple-level check enumerates atom
    patterns over the partial image (cost independent of the target's
    tuple count) whenever that is cheaper than scanning the target's
    tuples through the candidate.
    """
    if A.signature != B.signature:
        raise SignatureMismatch("embedding search needs matching signatures")
    nA = A.size
    if nA == 0:
        yield ()
        return
    if nA > B.size:
        return

    sig = A.signature
    names = sig.names
    if A._src is None:
        # A-tuples become fully mapped exactly when their max vertex is
        # mapped; atom patterns are shared per (signature, depth).
        complete_at: list[list] = [[] for _ in range(nA)]
        for name in names:
            for t in A.relations[name]:
                complete_at[max(t)].append((name, t))
        pattern_at = [_patterns_through(sig, d) for d in range(nA)]
        npat_at = [sum(len(p) for _, p in per) for per in pattern_at]
        adj_a = gaifman_adjacency(A)
        nbrs_at = []
        non_nbrs_at = []
        for d in range(nA):
            nbrs_at.append([u for u in range(d) if u in adj_a[d]])
            non_nbrs_at.append([u for u in range(d) if u not in adj_a[d]])
        A._src = (complete_at, pattern_at, npat_at, nbrs_at, non_nbrs_at)
    complete_at, pattern_at, npat_at, nbrs_at, non_nbrs_at = A._src

    if B._scan is None:
        B._scan = [sum(len(B.tuples_by_vertex(name, v)) for name in names)
                   for v in range(B.size)]
    scan_b = B._scan

    adj_bits = _adjacency_bits(B)
    full_mask = (1 << B.size) - 1
    pool_masks = None
    if candidates is not None:
        pool_masks = []
        for pool in candidates:
            if pool is None:
                pool_masks.append(None)
                continue
            m = 0
            for v in pool:
                m |= 1 << v
            pool_masks.append(m)

    partial: list[int] = []
    a_rel = A.relations
    b_rel = B.relations

    def consistent(depth: int, v: int) -> bool:
        trial = partial + [v]
        if npat_at[depth] <= scan_b[v]:
            # membership of every atom pattern through the new point must
            # agree between A and the image
            for name, pats in pattern_at[depth]:
                bt = b_rel[name]
                at = a_rel[name]
                for p in pats:
                    if len(p) == 2:
                        mapped = (trial[p[0]], trial[p[1]])
                    elif len(p) == 3:
                        mapped = (trial[p[0]], trial[p[1]], trial[p[2]])
                    else:
                        mapped = tuple(trial[x] for x in p)
                    if (mapped in bt) != (p in at):
                        return False
            return True
        for name, t in complete_at[depth]:
            if tuple(trial[x] for x in t) not in b_rel[name]:
                return False
        img_pos = {x: i for i, x in enumerate(trial)}
        for name in names:
            at = a_rel[name]
            for t in B.tuples_by_vertex(name, v):
                if all(x in img_pos for x in t):
                    if tuple(img_pos[x] for x in t) not in at:
                        return False
        return True

    def rec(depth: int, used_mask: int) -> Iterator[tuple[int, ...]]:
        if depth == nA:
            yield tuple(partial)
            return
        m = full_mask & ~used_mask
        if pool_masks is not None and pool_masks[depth] is not None:
            m &= pool_masks[depth]
        for u in nbrs_at[depth]:
            m &= adj_bits[partial[u]]
        for u in non_nbrs_at[depth]:
            m &= ~adj_bits[partial[u]]
        while m:
            low = m & -m
            m ^= low
            v = low.bit_length() - 1
            if candidate_filter is not None and not candidate_filter(depth, v, partial):
                continue
            if not consistent(depth, v):
                continue
            partial.append(v)
            yield from rec(depth + 1, used_mask | low)
            partial.pop()

    yield from rec(0, 0)


def find_embeddings(A: Structure, B: Structure,
                    limit: Optional[int] = None) -> list[Embedding]:
    """All induced embeddings of A into B, lexicographic on the image
    sequence, truncated at `limit` (None means unlimited)."""
    out = []
    for vmap in _iter_embedding_maps(A, B):
        out.append(Embedding(A, B, vmap, validate=False))
        if limit is not None and len(out) >= limit:
            break
    return out


def embeds(A: Structure, B: Structure) -> bool:
    return bool(find_embeddings(A, B, limit=1))


def _vertex_profile(S: Structure, v: int) -> tuple:
    prof = []
    for name, arity in S.signature.relations:
        pos_counts = [0] * arity
        for t in S.tuples_by_vertex(name, v):
            for i, x in enumerate(t):
                if x == v:
                    pos_counts[i] += 1
        prof.append(tuple(pos_counts))
    return tuple(prof)


def are_isomorphic(A: Structure, B: Structure) -> Optional[Embedding]:
    """A bijective induced embedding A -> B if one exists, else None.

    Deterministic: returns the lexicographically least isomorphism (on the
    image sequence).  Degree-profile refinement prunes the search.
    """
    if A.signature != B.signature:
        raise SignatureMismatch("isomorphism test needs matching signatures")
    if A.size != B.size:
        return None
    for name in A.signature.names:
        if len(A.relations[name]) != len(B.relations[name]):
            return None
    prof_a = [_vertex_profile(A, v) for v in A.vertices]
    prof_b = [_vertex_profile(B, v) for v in B.vertices]
    if sorted(prof_a) != sorted(prof_b):
        return None

    def flt(depth, v, partial):
        return prof_a[depth] == prof_b[v]

    for vmap in _iter_embedding_maps(A, B, candidate_filter=flt):
        return Embedding(A, B, vmap, validate=False)
    return None


def automorphisms(S: Structure) -> list[Embedding]:
    """All automorphisms (useful for small dedup work only)."""
    prof = [_vertex_profile(S, v) for v in S.vertices]

    def flt(depth, v, partial):
        return prof[depth] == prof[v]

    return [Embedding(S, S, m, validate=False)
            for m in _iter_embedding_maps(S, S, candidate_filter=flt)]


_CANON_MAX = 9


def canonical_form(S: Structure) -> tuple:
    """A relabelling-invariant certificate: the minimum, over all vertex
    bijections to 0..n-1, of the sorted relabelled tuple sets.

    Brute force over permutations; guarded at 9 vertices (this package
    never needs canonical forms of larger structures).
    """
    if S._canon is not None:
        return S._canon
    if S.size > _CANON_MAX:
        raise BudgetExceeded(f"canonical_form limited to {_CANON_MAX} vertices")
    names = S.signature.names
    best = None
    for perm in itertools.permutations(range(S.size)):
        cert = tuple(tuple(sorted(tuple(perm[x] for x in t) for t in S.relations[n]))
                     for n in names)
        if best is None or cert < best:
            best = cert
    S._canon = (S.signature.relations, S.size, best)
    return S._canon


# ---------------------------------------------------------------------------
# Free amalgams


def free_amalgam(A: Structure, f0: Embedding, f1: Embedding) -> Structure:
    """The free amalgam of f0 : A -> B0 and f1 : A -> B1.

    The result keeps B0's vertex labels; vertices of B1 outside the image
    of f1 are appended in ascending order.  Relations are exactly the two
    transported relation sets, nothing more.
    """
    if f0.source != A or f1.source != A:
        raise MalformedEmbedding("both embeddings must have source A")
    B0, B1 = f0.target, f1.target
    if B0.signature != A.signature or B1.signature != A.signature:
        raise SignatureMismatch("amalgam needs one common signature")
    inv1 = {f1.map[a]: a for a in range(A.size)}
    to_c = {}
    fresh = B0.size
    for v in range(B1.size):
        if v in inv1:
            to_c[v] = f0.map[inv1[v]]
        else:
            to_c[v] = fresh
            fresh += 1
    rels = {}
    for name in A.signature.names:
        ts = set(B0.relations[name])
        ts.update(tuple(to_c[x] for x in t) for t in B1.relations[name])
        rels[name] = ts
    return Structure(A.signature, fresh, rels)


# ---------------------------------------------------------------------------
# Classes given by forbidden irreducible substructures


class ClassSpec:
    """A hereditary class: all finite structures over `signature` into
    which no member of `forbidden` embeds (induced).

    Every forbidden member must be irreducible; this is what makes the
    class closed under free amalgams, and construction rejects violations.
    """

    __slots__ = ("signature", "forbidden", "name")

    def __init__(self, signature: Signature, forbidden: Iterable[Structure] = (),
                 name: str = ""):
        forb = tuple(forbidden)
        for F in forb:
            if F.signature != signature:
                raise SignatureMismatch("forbidden structure signature mismatch")
            if not is_irreducible(F):
                raise ValueError("forbidden structures must be irreducible")
        self.signature = signature
        self.forbidden = forb
        self.name = name

    def __eq__(self, other):
        return (isinstance(other, ClassSpec)
                and self.signature == other.signature
                and set(self.forbidden) == set(other.forbidden))

    def __hash__(self):
        return hash((self.signature, frozenset(self.forbidden)))

    def __repr__(self):
        label = self.name or f"{len(self.forbidden)} forbidden"
        return f"ClassSpec({label})"


def satisfies_class(S: Structure, K: ClassSpec) -> bool:
    """True iff no forbidden member of K embeds (induced) into S."""
    if S.signature != K.signature:
        raise SignatureMismatch("structure/class signature mismatch")
    return not any(embeds(F, S) for F in K.forbidden)


def satisfies_class_at(S: Structure, K: ClassSpec, v: int) -> bool:
    """Like satisfies_class but only checks embeddings whose image contains
    vertex v.  Sound for incremental use: if S minus its tuples through v
    was in K, this decides membership of S."""
    if S.signature != K.signature:
        raise SignatureMismatch("structure/class signature mismatch")
    for F in K.forbidden:
        for anchor in range(F.size):
            def flt(depth, w, partial, anchor=anchor):
                if depth == anchor:
                    return w == v
                return True
            for _ in _iter_embedding_maps(F, S, candidate_filter=flt):
                return False
    return True


# ---------------------------------------------------------------------------
# Quantifier-free 1-types


def type_patterns(signature: Signature, nparams: int) -> list[tuple[str, tuple[int, ...]]]:
    """All (relation, pattern) atoms of a 1-type with `nparams` parameters.

    Pattern entries are -1 for the new point and j >= 0 for the j-th
    parameter; every pattern mentions the new point at least once.
    Equality atoms are excluded (the new point is distinct from all
    parameters by convention).
    """
    pats = []
    for name, arity in signature.relations:
        for pat in itertools.product(range(-1, nparams), repeat=arity):
            if -1 in pat:
                pats.append((name, pat))
    return pats


class QfType:
    """The quantifier-free type of a new point over an ordered parameter
    sequence: a complete truth assignment to every atom pattern.

    Only the positive atoms are stored; the atom universe is determined by
    the signature and the parameter count.
    """

    __slots__ = ("parameters", "positives")

    def __init__(self, parameters: Iterable[int], positives: Iterable[tuple]):
        self.parameters = tuple(int(x) for x in parameters)
        self.positives = frozenset((str(n), tuple(p)) for n, p in positives)
        for _, pat in self.positives:
            if -1 not in pat:
                raise ValueError("type atom must mention the new point")
            if any(j >= len(self.parameters) for j in pat):
                raise ValueError("type atom references a missing parameter")

    @property
    def nparams(self) -> int:
        return len(self.parameters)

    def transport(self, f: "Embedding | dict | list") -> "QfType":
        """The type with parameters pushed through an embedding or map."""
        if isinstance(f, Embedding):
            mapping = f.map
            new_params = [mapping[a] for a in self.parameters]
        elif isinstance(f, dict):
            new_params = [f[a] for a in self.parameters]
        else:
            new_params = [f[a] for a in self.parameters]
        return QfType(new_params, self.positives)

    def __eq__(self, other):
        return (isinstance(other, QfType)
                and self.parameters == other.parameters
                and self.positives == other.positives)

    def __hash__(self):
        return hash((self.parameters, self.positives))

    def __repr__(self):
        return f"QfType(params={self.parameters}, positives={sorted(self.positives)})"


def qf_type(S: Structure, v: int, params: Iterable[int]) -> QfType:
    """The complete atomic diagram of v over the parameter sequence."""
    A = tuple(params)
    if v in A:
        raise ValueError("the new point must not be a parameter")
    if any(a < 0 or a >= S.size for a in A) or v < 0 or v >= S.size:
        raise ValueError("vertex out of range")
    pos = []
    for name, pat in type_patterns(S.signature, len(A)):
        actual = tuple(v if j == -1 else A[j] for j in pat)
        if actual in S.relations[name]:
            pos.append((name, pat))
    return QfType(A, pos)


def realisation_set(S: Structure, params: Iterable[int], p: QfType) -> list[int]:
    """All v outside the parameters whose type over them equals p."""
    A = tuple(params)
    if len(A) != p.nparams:
        raise ValueError("parameter count differs from the type's")
    want = p.positives
    out = []
    for v in range(S.size):
        if v in A:
            continue
        if qf_type(S, v, A).positives == want:
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# Enumerating class members up to isomorphism (needed by the 3-DAP checker)


def one_point_extensions(S: Structure, K: ClassSpec,
                         budget: int = 1 << 20) -> Iterator[Structure]:
    """All extensions of S by one vertex that stay in K, one per atom set,
    in lexicographic order of the added tuple set."""
    v = S.size
    slots = []
    for name, arity in S.signature.relations:
        for t in itertools.product(range(v + 1), repeat=arity):
            if v in t:
                slots.append((name, t))
    slots.sort()
    if 2 ** len(slots) > budget:
        raise BudgetExceeded(f"{2 ** len(slots)} extension atom sets exceed budget")
    base = {name: set(ts) for name, ts in S.relations.items()}
    for r in range(len(slots) + 1):
        for chosen in itertools.combinations(slots, r):
            rels = {n: set(ts) for n, ts in base.items()}
            for name, t in chosen:
                rels[name].add(t)
            T = Structure(S.signature, v + 1, rels)
            if satisfies_class_at(T, K, v):
                yield T


def enumerate_class_members(K: ClassSpec, max_size: int,
                            budget: int = 1 << 20) -> list[Structure]:
    """All members of K with 1..max_size vertices, up to isomorphism,
    ordered by (size, canonical form)."""
    by_size: list[list[Structure]] = [[Structure(K.signature, 0)]]
    for _ in range(max_size):
        nxt = {}
        for S in by_size[-1]:
            for T in one_point_extensions(S, K, budget):
                nxt.setdefault(canonical_form(T), T)
        by_size.append([nxt[k] for k in sorted(nxt)])
    out = []
    for size_list in by_size[1:]:
        out.extend(size_list)
    return out


# ---------------------------------------------------------------------------
# Disjoint 3-amalgamation over the empty base


class ThreeDapFamily:
    """A 3-disjoint family over the empty base: three structures plus, for
    each pair, an amalgam on their disjoint union (sides glued nowhere)."""

    __slots__ = ("sides", "amalgams")

    def __init__(self, sides: tuple[Structure, Structure, Structure],
                 amalgams: dict):
        self.sides = sides
        self.amalgams = dict(amalgams)  # (i, j) -> Structure on sides[i] + sides[j]

    def __repr__(self):
        return f"ThreeDapFamily(sides={[s.size for s in self.sides]})"


class ThreeDapReport:
    __slots__ = ("passed", "counterexample", "families_checked")

    def __init__(self, passed, counterexample, families_checked):
        self.passed = passed
        self.counterexample = counterexample
        self.families_checked = families_checked

    def __repr__(self):
        verdict = "pass" if self.passed else "counterexample"
        return f"ThreeDapReport({verdict}, families={self.families_checked})"


def _pair_amalgams(A: Structure, B: Structure, K: ClassSpec,
                   budget: int) -> list[Structure]:
    """All completions of the disjoint union A + B by cross tuples that stay
    in K, deduplicated under Aut(A) x Aut(B), in deterministic order."""
    sig = K.signature
    na = A.size
    size = na + B.size
    base = {name: set(A.relations[name]) for name in sig.names}
    for name in sig.names:
        base[name].update(tuple(x + na for x in t) for t in B.relations[name])
    cross = []
    for name, arity in sig.relations:
        for t in itertools.product(range(size), repeat=arity):
            touched_a = any(x < na for x in t)
            touched_b = any(x >= na for x in t)
            if touched_a and touched_b:
                cross.append((name, t))
    cross.sort()
    if 2 ** len(cross) > budget:
        raise BudgetExceeded(f"{2 ** len(cross)} pair amalgams exceed budget")

    auts = []
    for pa in automorphisms(A):
        for pb in automorphisms(B):
            perm = list(pa.map) + [x + na for x in pb.map]
            auts.append(perm)

    seen = set()
    out = []
    for r in range(len(cross) + 1):
        for chosen in itertools.combinations(cross, r):
            orbit_min = min(
                tuple(sorted((name, tuple(perm[x] for x in t)) for name, t in chosen))
                for perm in auts
            )
            if orbit_min in seen:
                continue
            seen.add(orbit_min)
            rels = {n: set(ts) for n, ts in base.items()}
            for name, t in chosen:
                rels[name].add(t)
            C = Structure(sig, size, rels)
            if satisfies_class(C, K):
                out.append(C)
    return out


def _three_dap_amalgam_exists(family: ThreeDapFamily, K: ClassSpec,
                              budget: int) -> bool:
    """Search a 3-disjoint amalgam: complete the union of the three pairwise
    amalgams with tuples spanning all three sides, in all admissible ways."""
    sig = K.signature
    a0, a1, a2 = (s.size for s in family.sides)
    offs = (0, a0, a0 + a1)
    size = a0 + a1 + a2

    def side_of(x):
        return 0 if x < offs[1] else (1 if x < offs[2] else 2)

    rels = {name: set() for name in sig.names}
    for (i, j), amal in family.amalgams.items():
        ni = family.sides[i].size

        def glob(x, i=i, j=j, ni=ni):
            return offs[i] + x if x < ni else offs[j] + (x - ni)

        for name in sig.names:
            rels[name].update(tuple(glob(x) for x in t) for t in amal.relations[name])

    free = []
    for name, arity in sig.relations:
        if arity < 3:
            continue
        for t in itertools.product(range(size), repeat=arity):
            if len({side_of(x) for x in t}) == 3 and t not in rels[name]:
                free.append((name, t))
    free.sort()
    if 2 ** len(free) > budget:
        raise BudgetExceeded(f"{2 ** len(free)} completions exceed budget")
    for r in range(len(free) + 1):
        for chosen in itertools.combinations(free, r):
            cand = {n: set(ts) for n, ts in rels.items()}
            for name, t in chosen:
                cand[name].add(t)
            C = Structure(sig, size, cand)
            if satisfies_class(C, K):
                return True
    return False


def check_3dap_over_empty(K: ClassSpec, size_bound: int,
                          budget: int = 1 << 20) -> ThreeDapReport:
    """Exhaustively test the disjoint 3-amalgamation property over the empty
    base for families with sides of at most `size_bound` vertices.

    Families are enumerated up to isomorphism (sides as canonical class
    members, pair amalgams deduplicated under side automorphisms, fixed
    inclusion embeddings).  Reports the first family admitting no
    amalgam, else pass.
    """
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    reps = enumerate_class_members(K, size_bound, budget)
    checked = 0
    for i0 in range(len(reps)):
        for i1 in range(i0, len(reps)):
            for i2 in range(i1, len(reps)):
                sides = (reps[i0], reps[i1], reps[i2])
                pair_opts = {
                    (0, 1): _pair_amalgams(sides[0], sides[1], K, budget),
                    (0, 2): _pair_amalgams(sides[0], sides[2], K, budget),
                    (1, 2): _pair_amalgams(sides[1], sides[2], K, budget),
                }
                for a01 in pair_opts[(0, 1)]:
                    for a02 in pair_opts[(0, 2)]:
                        for a12 in pair_opts[(1, 2)]:
                            family = ThreeDapFamily(
                                sides, {(0, 1): a01, (0, 2): a02, (1, 2): a12})
                            checked += 1
                            if not _three_dap_amalgam_exists(family, K, budget):
                                return ThreeDapReport(False, family, checked)
    return ThreeDapReport(True, None, checked)
