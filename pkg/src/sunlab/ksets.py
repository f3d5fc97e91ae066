"""Structures on k-sets: presentations, sunflower detection and extraction,
canonical enumeration of presentations, witness verification, and the
encoding of a colouring into a structure on 2-sets.

A presentation assigns a distinct k-set of naturals to every vertex of a
base structure.  Whether a sunflower copy of some target exists depends
only on the intersection pattern of the assigned sets, so enumerating
presentations up to a bijection of the ground set is an exhaustive oracle:
over a ground set of k * |C| naturals every pattern is realised.  The
canonical form introduces ground labels in increasing order of first
appearance (vertices in index order, each set read in increasing order)
and keeps the lexicographically least representative of each orbit.
"""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Iterator, Optional

from .partitionlab import Colouring
from .structures import (
    BudgetExceeded,
    Embedding,
    SignatureMismatch,
    Structure,
    _iter_embedding_maps,
)

DEFAULT_GROUND_BUDGET = 18


class CentreResult:
    """The common pairwise intersection of a family, when one exists.

    Families with fewer than two sets have no pairwise condition to check;
    by convention the centre of a singleton family is the set itself and
    the centre of an empty family is empty, both flagged degenerate.
    """

    __slots__ = ("centre", "degenerate")

    def __init__(self, centre, degenerate):
        self.centre = centre
        self.degenerate = degenerate

    def __repr__(self):
        return f"CentreResult({self.centre!r}, degenerate={self.degenerate})"


def sunflower_centre(sets: Iterable[frozenset]) -> CentreResult:
    """The set c with s & t == c for all distinct members, or None."""
    family = [frozenset(s) for s in sets]
    if len(set(family)) != len(family):
        raise ValueError("family members must be pairwise distinct")
    if len(family) == 0:
        return CentreResult(frozenset(), True)
    if len(family) == 1:
        return CentreResult(family[0], True)
    centre = family[0] & family[1]
    for s, t in itertools.combinations(family, 2):
        if s & t != centre:
            return CentreResult(None, False)
    return CentreResult(centre, False)


class Presentation:
    """An injective assignment of k-sets of naturals to the vertices of a
    base structure."""

    __slots__ = ("base", "k", "sets", "_sorted")

    def __init__(self, base: Structure, k: int, sets: Iterable[Iterable[int]]):
        fam = tuple(frozenset(int(x) for x in s) for s in sets)
        if len(fam) != base.size:
            raise ValueError("one k-set per vertex required")
        if any(len(s) != k for s in fam):
            raise ValueError(f"every set must have exactly {k} elements")
        if len(set(fam)) != len(fam):
            raise ValueError("the k-sets must be pairwise distinct")
        if any(x < 0 for s in fam for x in s):
            raise ValueError("ground elements are naturals")
        self.base = base
        self.k = k
        self.sets = fam
        self._sorted = tuple(tuple(sorted(s)) for s in fam)

    def sorted_set(self, v: int) -> tuple[int, ...]:
        return self._sorted[v]

    def __eq__(self, other):
        return (isinstance(other, Presentation) and self.base == other.base
                and self.k == other.k and self.sets == other.sets)

    def __repr__(self):
        return f"Presentation(k={self.k}, size={self.base.size})"


class SunflowerCert:
    """A verifiable sunflower copy: petal vertices of a presentation, the
    centre, and an embedding of the target onto the petal substructure."""

    __slots__ = ("petals", "centre", "iso", "degenerate")

    def __init__(self, petals: Iterable[int], centre: Iterable[int],
                 iso: Embedding, degenerate: bool = False):
        self.petals = tuple(petals)
        self.centre = frozenset(centre)
        self.iso = iso
        self.degenerate = degenerate

    def __repr__(self):
        return f"SunflowerCert(petals={self.petals}, centre={sorted(self.centre)})"


def find_sunflower_copies(P: Presentation, B: Structure,
                          limit: Optional[int] = None) -> list[SunflowerCert]:
    """Induced copies of B whose assigned k-sets form a sunflower, one
    certificate per petal vertex set, in deterministic search order."""
    if B.signature != P.base.signature:
        raise SignatureMismatch("target signature mismatch")
    sets = P.sets

    def flt(depth, v, partial):
        if depth == 0:
            return True
        if depth == 1:
            return True
        centre = sets[partial[0]] & sets[partial[1]]
        return all(sets[u] & sets[v] == centre for u in partial)

    out = []
    seen = set()
    for vmap in _iter_embedding_maps(B, P.base, candidate_filter=flt):
        if len(vmap) >= 2:
            centre = sets[vmap[0]] & sets[vmap[1]]
            if any(sets[u] & sets[w] != centre
                   for u, w in itertools.combinations(vmap, 2)):
                continue
        else:
            centre = frozenset()
        image = frozenset(vmap)
        if image in seen:
            continue
        seen.add(image)
        iso = Embedding(B, P.base, vmap, validate=False)
        out.append(SunflowerCert(vmap, centre, iso, degenerate=len(vmap) < 2))
        if limit is not None and len(out) >= limit:
            break
    return out


def verify_sunflower_cert(cert: SunflowerCert, B: Structure, P: Presentation) -> bool:
    """Re-check a certificate from scratch: pairwise intersections all equal
    the centre and the recorded map is an induced isomorphism onto the
    petal substructure."""
    petals = cert.petals
    if len(set(petals)) != len(petals):
        return False
    if any(not 0 <= v < P.base.size for v in petals):
        return False
    if len(petals) >= 2:
        for u, w in itertools.combinations(petals, 2):
            if P.sets[u] & P.sets[w] != cert.centre:
                return False
    else:
        if not all(cert.centre <= P.sets[v] for v in petals):
            return False
    if cert.iso.source != B or cert.iso.target != P.base:
        return False
    if tuple(cert.iso.map) != tuple(petals):
        return False
    from .structures import embedding_defect
    return embedding_defect(B, P.base, cert.iso.map) is None


# ---------------------------------------------------------------------------
# Canonical enumeration of presentations


def canonical_sets(sets: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    """The canonical representative of a family of sets under ground
    bijections: relabel by first appearance (vertices in index order, each
    set in increasing order) and take the lexicographic minimum over the
    orderings of simultaneously-new elements."""
    family = [frozenset(s) for s in sets]
    n = len(family)
    best: Optional[tuple] = None

    def rec(i: int, assign: dict, next_label: int, acc: list):
        nonlocal best
        if i == n:
            cand = tuple(acc)
            if best is None or cand < best:
                best = cand
            return
        known = sorted(assign[g] for g in family[i] if g in assign)
        unknown = sorted(g for g in family[i] if g not in assign)
        t = len(unknown)
        relabeled = tuple(known + list(range(next_label, next_label + t)))
        acc.append(relabeled)
        if best is None or tuple(acc) <= best[:i + 1]:
            for perm in itertools.permutations(unknown):
                assign2 = dict(assign)
                for off, g in enumerate(perm):
                    assign2[g] = next_label + off
                rec(i + 1, assign2, next_label + t, acc)
        acc.pop()

    rec(0, {}, 0, [])
    return best


def _normal_form_candidates(prev_sets: list[tuple[int, ...]], k: int,
                            next_label: int) -> list[tuple[int, ...]]:
    """All k-sets a further vertex may take in normal form: old labels plus
    a consecutive run of fresh ones, distinct from the earlier sets."""
    seen = set(map(frozenset, prev_sets))
    out = []
    for t in range(k + 1):
        fresh = tuple(range(next_label, next_label + t))
        for old in itertools.combinations(range(next_label), k - t):
            cand = old + fresh
            if frozenset(cand) not in seen:
                out.append(cand)
    out.sort()
    return out


def enumerate_presentations(C: Structure, k: int,
                            ground_budget: int = DEFAULT_GROUND_BUDGET,
                            ) -> Iterator[Presentation]:
    """All presentations of C on k-sets up to ground bijections, exactly
    once: the stream yields canonical representatives only."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k * C.size > ground_budget:
        raise BudgetExceeded(f"ground set {k * C.size} exceeds budget {ground_budget}")

    sets: list[tuple[int, ...]] = []

    def rec(i: int, next_label: int) -> Iterator[Presentation]:
        if i == C.size:
            if tuple(sets) == canonical_sets(sets):
                yield Presentation(C, k, sets)
            return
        for cand in _normal_form_candidates(sets, k, next_label):
            sets.append(cand)
            yield from rec(i + 1, max(next_label, max(cand) + 1 if cand else 0))
            sets.pop()

    yield from rec(0, 0)


def canonicalise_presentation(P: Presentation) -> Presentation:
    """Relabel the ground set to canonical first-appearance labels (used
    before comparing presentations from external files)."""
    return Presentation(P.base, P.k, canonical_sets(P.sets))


def random_presentation(C: Structure, k: int, rng: random.Random) -> Presentation:
    """A uniformly random assignment of distinct k-subsets of a ground set
    of k * |C| naturals (every intersection pattern is reachable)."""
    ground = max(k * C.size, k)
    chosen: list[frozenset] = []
    seen = set()
    while len(chosen) < C.size:
        s = frozenset(rng.sample(range(ground), k))
        if s not in seen:
            seen.add(s)
            chosen.append(s)
    return Presentation(C, k, chosen)


# ---------------------------------------------------------------------------
# Witness verification


class WitnessVerdict:
    __slots__ = ("passed", "counterexample", "checked")

    def __init__(self, passed, counterexample, checked):
        self.passed = passed
        self.counterexample = counterexample
        self.checked = checked

    def __repr__(self):
        verdict = "pass" if self.passed else "counterexample"
        return f"WitnessVerdict({verdict}, checked={self.checked})"


def _prefix_has_sunflower(C: Structure, k: int, sets: list, B: Structure) -> bool:
    prefix = Presentation(C.induced(range(len(sets))), k, sets)
    return bool(find_sunflower_copies(prefix, B, limit=1))


def verify_witness(C: Structure, B: Structure, k: int,
                   mode: str = "exhaustive", trials: int = 1000,
                   seed: int = 0,
                   ground_budget: int = DEFAULT_GROUND_BUDGET) -> WitnessVerdict:
    """Decide whether every presentation of C on k-sets contains a sunflower
    copy of B.

    Exhaustive mode walks the normal-form generation tree and prunes any
    prefix that already contains a sunflower copy (every completion then
    does too), so it visits exactly the sunflower-free prefixes; a leaf is
    a counterexample presentation.  Random mode samples presentations.
    """
    if B.signature != C.signature:
        raise SignatureMismatch("witness check needs matching signatures")
    if mode == "random":
        rng = random.Random(f"verify-witness|{seed}")
        for i in range(trials):
            P = random_presentation(C, k, rng)
            if not find_sunflower_copies(P, B, limit=1):
                return WitnessVerdict(False, P, i + 1)
        return WitnessVerdict(True, None, trials)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if k * C.size > ground_budget:
        raise BudgetExceeded(f"ground set {k * C.size} exceeds budget {ground_budget}")

    sets: list[tuple[int, ...]] = []
    checked = 0

    def rec(i: int, next_label: int) -> Optional[Presentation]:
        nonlocal checked
        if i == C.size:
            checked += 1
            return Presentation(C, k, sets)
        for cand in _normal_form_candidates(sets, k, next_label):
            sets.append(cand)
            checked += 1
            if not _prefix_has_sunflower(C, k, sets, B):
                found = rec(i + 1, max(next_label, max(cand) + 1 if cand else 0))
                if found is not None:
                    sets.pop()
                    return found
            sets.pop()
        return None

    counterexample = rec(0, 0)
    return WitnessVerdict(counterexample is None, counterexample, checked)


# ---------------------------------------------------------------------------
# Encoding a colouring as a structure on 2-sets


def encode_colouring(M: Structure, chi: Colouring) -> Presentation:
    """Send vertex v to the 2-set {vertex code of v, colour code of chi(v)}.

    Vertex codes are even, colour codes odd, so the two namespaces never
    meet: a subset's sets share exactly a colour code iff it was
    monochromatic, and are pairwise disjoint iff it was heterochromatic.
    """
    if len(chi) != M.size:
        raise ValueError("colouring does not fit the structure")
    sets = [(2 * v, 2 * chi(v) + 1) for v in range(M.size)]
    return Presentation(M, 2, sets)


def decode_vertex(code: int) -> int:
    if code % 2 != 0:
        raise ValueError("not a vertex code")
    return code // 2


def decode_colour(code: int) -> int:
    if code % 2 != 1:
        raise ValueError("not a colour code")
    return (code - 1) // 2
