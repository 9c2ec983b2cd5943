"""Exhaustive classification of matchings on a base prediagram.

Every bijection between positive and negative cylinder components is a
candidate cylinder decomposition.  The classifier applies, in order, the
involution filter (a combinatorial Prym involution with the required
number of fixed cylinders must exist), the connected-surface filter and
the exact metric feasibility filter, then groups the remaining candidates
into isomorphism classes and names one representative per class.

Matchings on a named base are written as tuples: position i holds the
letter of the positive component matched with the negative component i.

Class representatives are normalized against the base's bundled
involution: among the members for which that involution is itself a valid
certificate, the ones with the smallest fixed-cylinder pattern are
preferred, with ties broken by tuple order.  Plain lexicographic choice is
not stable enough: single-star automorphisms of the base produce
lexicographically smaller members of the same class whose fixed cylinders
sit at non-normalized positions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .diagram import (
    Matching,
    Perm,
    Prediagram,
    automorphisms,
    canonical_type,
    disjoint_union,
    matching_equations,
    metric_feasible,
    perm_cycles,
    reversed_type_of,
    star_from_type,
    transport_matching,
)
from .exactalg import positive_solution, qn
from .prym import (
    PrymInvolution,
    fixed_point_count,
    matching_involutions,
    structural_candidates,
    transports_matching,
)
from .surface import is_connected_surface, stratum_signature


@dataclass(frozen=True)
class NamedBase:
    """A base prediagram with display names for its cylinder components."""

    prediagram: Prediagram
    names: tuple[tuple[str, str], ...]  # component id -> display name
    base_involution: Optional[Perm] = None

    @property
    def name_of(self) -> dict[str, str]:
        return dict(self.names)

    @property
    def id_of(self) -> dict[str, str]:
        return {v: k for k, v in self.names}

    def positive_names(self) -> list[str]:
        comps = self.prediagram.cylinder_components()
        return sorted(self.name_of[c.cid] for c in comps if c.positive)

    def negative_names(self) -> list[str]:
        comps = self.prediagram.cylinder_components()
        return sorted(self.name_of[c.cid] for c in comps if not c.positive)

    def matching_from_tuple(self, word: str) -> Matching:
        """Decode positional notation: letter at position i pairs digit i+1."""
        negatives = self.negative_names()
        if len(word) != len(negatives):
            raise ValueError(f"tuple {word!r} has wrong length")
        pairs = []
        for i, letter in enumerate(word):
            pairs.append((self.id_of[letter], self.id_of[negatives[i]]))
        return Matching(tuple(pairs))

    def tuple_of_matching(self, m: Matching) -> str:
        name = self.name_of
        by_digit = {name[q]: name[p] for p, q in m.pairs}
        return "".join(by_digit[d] for d in self.negative_names())


@dataclass(frozen=True)
class SearchSpec:
    base: NamedBase
    required_fixed_cylinders: int = 2
    kind_filter: Optional[str] = None  # "first" | "second"
    require_connected: bool = True
    require_metric: bool = True
    filter_order: tuple[str, ...] = ("involution", "connectivity", "metric")


@dataclass
class Survivor:
    matching_tuple: str
    matching: Matching
    metric: dict
    involution: PrymInvolution
    kind: Optional[str]
    class_members: tuple[str, ...] = ()


@dataclass
class Rejection:
    matching_tuple: str
    reason: str
    duplicate_of: Optional[str] = None


@dataclass
class ClassificationResult:
    survivors: list[Survivor] = field(default_factory=list)
    rejected: list[Rejection] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "survivors": [
                {
                    "matching": s.matching_tuple,
                    "kind": s.kind,
                    "metric": {k: v.to_json() for k, v in s.metric.items()},
                    "involution": s.involution.to_json(),
                    "class_members": list(s.class_members),
                }
                for s in self.survivors
            ],
            "rejected": [
                {
                    "matching": r.matching_tuple,
                    "reason": r.reason,
                    **({"duplicate_of": r.duplicate_of} if r.duplicate_of else {}),
                }
                for r in self.rejected
            ],
            "counts": {
                "survivors": len(self.survivors),
                "rejected": len(self.rejected),
                "total": len(self.survivors) + len(self.rejected),
            },
        }


def classify_kind(base: NamedBase, m: Matching, inv: PrymInvolution) -> str:
    """First kind iff both fixed cylinders join one exchanged singularity pair."""
    fixed = [cyc[0] for cyc in inv.pi if len(cyc) == 1]
    if len(fixed) != 2:
        raise ValueError("kind is defined for exactly two fixed cylinders")
    P = base.prediagram
    stars = perm_cycles(P.sigma)
    star_of = {}
    for i, cyc in enumerate(stars):
        for e in cyc:
            star_of[e] = i
    pairs = []
    for pos_id in fixed:
        neg_id = m.partner(pos_id)
        pairs.append(frozenset((star_of[int(pos_id[1:])], star_of[int(neg_id[1:])])))
    return "first" if pairs[0] == pairs[1] else "second"


def _involution_filter(base: NamedBase, m: Matching, required: int, genus: int):
    """(passes, reason, involutions-with-required-count).

    With a pinned base involution the candidate is measured against that
    involution alone: matchings it does not transport are not
    decompositions of the symmetric surface at all, and matchings it fixes
    too many cylinders on are rejected as carrying extra fixed cylinders.
    Without a pinned involution any combinatorial Prym involution counts.
    """
    P = base.prediagram
    rho = base.base_involution
    if rho is not None:
        if not transports_matching(P, m, rho):
            return False, "no-involution", []
        counts = fixed_point_count(P, m, rho)
        formula_ok = counts[0] + counts[1] + 2 * counts[2] == 10 - 2 * genus
        if formula_ok and counts[2] == required:
            valid = [inv for inv in matching_involutions(P, m, genus)
                     if inv.fixed_cylinders == required]
            return True, "", valid
        if counts[2] > required:
            return False, "extra-fixed-cylinder", []
        return False, "no-involution", []
    valid = [inv for inv in matching_involutions(P, m, genus)
             if inv.fixed_cylinders == required]
    if valid:
        return True, "", valid
    candidates = structural_candidates(P, m)
    if not candidates:
        return False, "no-involution", []
    if any(counts[2] > required for _, counts in candidates):
        return False, "extra-fixed-cylinder", []
    return False, "no-involution", []


def _representative_key(base: NamedBase, word: str, required: int, genus: int):
    """Sort key preferring members certified by the bundled base involution."""
    rho = base.base_involution
    if rho is None:
        return (1, "", word)
    m = base.matching_from_tuple(word)
    if not transports_matching(base.prediagram, m, rho):
        return (1, "", word)
    counts = fixed_point_count(base.prediagram, m, rho)
    if counts[0] + counts[1] + 2 * counts[2] != 10 - 2 * genus or counts[2] != required:
        return (1, "", word)
    name = base.name_of
    comp_of = base.prediagram.component_of
    fixed = []
    for p, q in m.pairs:
        if comp_of(rho[int(p[1:])]) == q:
            fixed.append(name[q] + name[p])
    return (0, "|".join(sorted(fixed)), word)


def enumerate_matchings(spec: SearchSpec) -> ClassificationResult:
    base = spec.base
    P = base.prediagram
    if not P.is_valid():
        raise ValueError("base prediagram is invalid")
    genus = stratum_signature(P).genus
    negatives = base.negative_names()
    letters = base.positive_names()
    if len(letters) != len(negatives):
        raise ValueError("component counts do not admit a matching")

    result = ClassificationResult()
    passers: dict[str, tuple[Matching, list[PrymInvolution]]] = {}

    filters = spec.filter_order
    for perm_letters in itertools.permutations(letters):
        word = "".join(perm_letters)
        m = base.matching_from_tuple(word)
        involutions: list[PrymInvolution] = []
        reason = None
        for step in filters:
            if step == "involution":
                ok, why, involutions = _involution_filter(
                    base, m, spec.required_fixed_cylinders, genus
                )
                if not ok:
                    reason = why
                    break
            elif step == "connectivity":
                if spec.require_connected and not is_connected_surface(P, m):
                    reason = "disconnected"
                    break
            elif step == "metric":
                if spec.require_metric and metric_feasible(P, m) is None:
                    reason = "metric-infeasible"
                    break
            else:
                raise ValueError(f"unknown filter {step}")
        if reason is not None:
            result.rejected.append(Rejection(word, reason))
            continue
        passers[word] = (m, involutions)

    # group the passers into isomorphism classes via the automorphism group;
    # with a pinned involution only automorphisms commuting with it apply,
    # since the classified objects carry the involution
    autos = automorphisms(P)
    rho = base.base_involution
    if rho is not None:
        from .diagram import perm_compose

        autos = [phi for phi in autos
                 if perm_compose(phi, rho) == perm_compose(rho, phi)]
    class_of: dict[str, str] = {}
    for word in sorted(passers):
        if word in class_of:
            continue
        m = passers[word][0]
        orbit = set()
        for phi in autos:
            t = base.tuple_of_matching(transport_matching(P, m, phi))
            if t in passers:
                orbit.add(t)
        rep = min(orbit, key=lambda w: _representative_key(
            base, w, spec.required_fixed_cylinders, genus))
        for t in orbit:
            class_of[t] = rep

    reps_done = set()
    for word in sorted(passers):
        rep = class_of[word]
        if word != rep:
            result.rejected.append(Rejection(word, "isomorphic-duplicate", duplicate_of=rep))
            continue
        if rep in reps_done:
            continue
        reps_done.add(rep)
        m, involutions = passers[rep]
        try:
            inv, metric = _certified_witness(base, m, involutions)
        except ValueError:
            # matching equalities are solvable but no involution admits an
            # invariant metric: the candidate is not a symmetric certificate
            for w in sorted(t for t, r in class_of.items() if r == rep):
                result.rejected.append(Rejection(w, "metric-infeasible"))
            continue
        kind = None
        if inv.fixed_cylinders == 2:
            kind = classify_kind(base, m, inv)
        if spec.kind_filter and kind != spec.kind_filter:
            result.rejected.append(Rejection(rep, f"kind-mismatch:{kind}"))
            continue
        members = tuple(sorted(w for w, r in class_of.items() if r == rep))
        result.survivors.append(Survivor(rep, m, metric, inv, kind, members))

    result.survivors.sort(key=lambda s: s.matching_tuple)
    result.rejected.sort(key=lambda r: r.matching_tuple)
    return result


def _certified_witness(base: NamedBase, m: Matching, involutions):
    """A (involution, metric) pair with the metric invariant under rho."""
    P = base.prediagram
    rows, sc_ids = matching_equations(P, m)
    index = {sid: i for i, sid in enumerate(sc_ids)}
    for inv in involutions:
        extra = []
        for e in P.ends():
            a, b = P.sc_id(e), P.sc_id(inv.rho[e])
            if a != b:
                row = [0] * len(sc_ids)
                row[index[a]] += 1
                row[index[b]] -= 1
                extra.append(row)
        witness = positive_solution(rows + extra, ncols=len(sc_ids))
        if witness is not None:
            metric = {sid: qn(x, 0) for sid, x in zip(sc_ids, witness)}
            return inv, metric
    raise ValueError("no involution admits an invariant metric; candidate is not a certificate")


# -- stable prediagram enumeration ----------------------------------------------


def enumerate_stable_prediagrams(kappa, max_components: int | None = None) -> list[Prediagram]:
    """Stable alternating prediagrams with the given singularity orders,
    able to carry a connected surface, up to isomorphism and reversal.

    Components are generated from canonical type representatives; stable
    prediagrams are classified by their type, and reversal acts on types
    componentwise, so deduplication is a comparison of type multisets.
    """
    orders = sorted(kappa, reverse=True)
    if max_components is not None and len(orders) > max_components:
        raise ValueError("too many components requested")
    total_ends = sum(2 * (k + 1) for k in orders)
    if total_ends > 16:
        raise ValueError(f"total orbit size {total_ends} exceeds the enumeration cap 16")
    per_component_types = []
    for k in orders:
        n = k + 1
        reps = sorted({canonical_type(f) for f in itertools.permutations(range(n))})
        per_component_types.append(reps)

    seen = set()
    out = []
    for combo in itertools.product(*per_component_types):
        multiset = tuple(sorted(combo))
        reversed_multiset = tuple(sorted(reversed_type_of(f) for f in combo))
        key = min(multiset, reversed_multiset)
        if key in seen:
            continue
        seen.add(key)
        P = disjoint_union([star_from_type(f) for f in multiset])
        if not _admits_connected_matching(P):
            continue
        out.append(P)
    return out


def _admits_connected_matching(P: Prediagram) -> bool:
    comps = P.cylinder_components()
    pos = [c.cid for c in comps if c.positive]
    neg = [c.cid for c in comps if not c.positive]
    if len(pos) != len(neg):
        return False
    for assignment in itertools.permutations(neg):
        m = Matching(tuple(zip(pos, assignment)))
        if is_connected_surface(P, m):
            return True
    return False
