"""Combinatorics of separatrix diagrams.

A prediagram is a quadruple (E, sigma, tau, theta) on an even set of edge
ends: ``tau`` is a fixed-point-free involution pairing the two ends of
each saddle connection, ``sigma`` is the rotation of ends around the
singularities (its orbits are the singularities), and ``theta`` picks one
positively oriented end per tau-pair, stored as the subset ``positive``.

Cylinder components are the orbits of sigma_inf = sigma∘tau; a matching
pairs positive with negative components into cylinders, and a metric is a
strictly positive tau-invariant length function whose component sums agree
across every matched pair.  The module implements validation, stability,
connectedness, component types with their canonical representatives,
reversal, isomorphism (with explicit witnesses), automorphism groups,
matchings, metrics and exact metric feasibility.

Edge ends are integers 0..n_ends-1.  Saddle connections are named
``S<least end>``, cylinder components ``C<least end>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .exactalg import QuadraticNumber, positive_solution, qn

Perm = tuple[int, ...]


def perm_from_cycles(n: int, cycles) -> Perm:
    out = list(range(n))
    for cyc in cycles:
        for i, e in enumerate(cyc):
            out[e] = cyc[(i + 1) % len(cyc)]
    return tuple(out)


def perm_cycles(p: Perm) -> list[tuple[int, ...]]:
    """Cycles sorted by least element, each rotated to start at it."""
    seen = [False] * len(p)
    cycles = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        e = p[start]
        while e != start:
            cyc.append(e)
            seen[e] = True
            e = p[e]
        cycles.append(tuple(cyc))
    return cycles


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def perm_compose(p: Perm, q: Perm) -> Perm:
    """p after q: (p∘q)(i) = p[q[i]]."""
    return tuple(p[q[i]] for i in range(len(q)))


@dataclass(frozen=True)
class Prediagram:
    """The quadruple (E, sigma, tau, theta) on ends 0..n_ends-1."""

    n_ends: int
    sigma: Perm
    tau: Perm
    positive: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", tuple(self.sigma))
        object.__setattr__(self, "tau", tuple(self.tau))
        object.__setattr__(self, "positive", frozenset(self.positive))

    # -- structure maps -------------------------------------------------

    def sigma_inf(self) -> Perm:
        return perm_compose(self.sigma, self.tau)

    def ends(self) -> range:
        return range(self.n_ends)

    def saddle_connections(self) -> list[tuple[int, int]]:
        """tau-pairs as (min, max), sorted."""
        return [(min(e, self.tau[e]), max(e, self.tau[e]))
                for e in self.ends() if e < self.tau[e]]

    def sc_id(self, end: int) -> str:
        return f"S{min(end, self.tau[end])}"

    def validate(self) -> list[dict]:
        """All violated invariants, as data; empty means valid."""
        problems: list[dict] = []
        n = self.n_ends
        if n % 2 != 0:
            problems.append({"code": "odd-end-count", "detail": n})
        for name, p in (("sigma", self.sigma), ("tau", self.tau)):
            if len(p) != n or sorted(p) != list(range(n)):
                problems.append({"code": f"{name}-not-permutation", "detail": list(p)})
                return problems
        fixed = [e for e in self.ends() if self.tau[e] == e]
        if fixed:
            problems.append({"code": "tau-fixed-point", "ends": fixed})
        broken = [e for e in self.ends() if self.tau[self.tau[e]] != e]
        if broken:
            problems.append({"code": "tau-not-involution", "ends": broken})
        if not problems:
            bad = [e for e in self.ends()
                   if (e in self.positive) == (self.tau[e] in self.positive)]
            if bad:
                problems.append({"code": "theta-not-section", "ends": sorted(bad)})
        out_of_range = [e for e in self.positive if not 0 <= e < n]
        if out_of_range:
            problems.append({"code": "positive-out-of-range", "ends": sorted(out_of_range)})
        if not problems:
            non_alt = [e for e in self.positive if self.sigma[e] in self.positive]
            non_alt += [e for e in self.ends() if e not in self.positive
                        and self.sigma[e] not in self.positive]
            if non_alt:
                problems.append({"code": "not-alternating", "ends": sorted(non_alt)})
        return problems

    def is_valid(self) -> bool:
        return not self.validate()

    # -- components ------------------------------------------------------

    def cylinder_components(self) -> list["CylinderComponent"]:
        """sigma_inf orbits with their signs, ordered by least end."""
        comps = []
        for cyc in perm_cycles(self.sigma_inf()):
            pos = cyc[0] in self.positive
            mixed = any((e in self.positive) != pos for e in cyc)
            if mixed:
                raise ValueError(f"component {cyc} mixes orientations; diagram not alternating")
            comps.append(CylinderComponent(edges=cyc, positive=pos))
        return comps

    def component_of(self, end: int) -> str:
        p = self.sigma_inf()
        least = end
        e = p[end]
        while e != end:
            least = min(least, e)
            e = p[e]
        return f"C{least}"

    def star_of(self, end: int) -> int:
        """Index of the sigma-orbit (singularity) containing the end."""
        for i, cyc in enumerate(perm_cycles(self.sigma)):
            if end in cyc:
                return i
        raise ValueError(end)

    def connected_components(self) -> list[tuple["Prediagram", tuple[int, ...]]]:
        """Induced sub-prediagrams of the <sigma, tau> orbits.

        Each entry is (sub, ends) where ``ends`` lists the original labels
        in the order they were renumbered 0..k-1.
        """
        seen = [False] * self.n_ends
        out = []
        for start in self.ends():
            if seen[start]:
                continue
            orbit = {start}
            stack = [start]
            while stack:
                e = stack.pop()
                for img in (self.sigma[e], self.tau[e]):
                    if img not in orbit:
                        orbit.add(img)
                        stack.append(img)
            ends = tuple(sorted(orbit))
            for e in ends:
                seen[e] = True
            index = {e: i for i, e in enumerate(ends)}
            sub = Prediagram(
                n_ends=len(ends),
                sigma=tuple(index[self.sigma[e]] for e in ends),
                tau=tuple(index[self.tau[e]] for e in ends),
                positive=frozenset(index[e] for e in ends if e in self.positive),
            )
            out.append((sub, ends))
        return out

    def is_connected(self) -> bool:
        return len(self.connected_components()) == 1

    def is_stable(self) -> bool:
        """True iff every tau-pair stays inside one sigma-orbit."""
        orbit_of = {}
        for i, cyc in enumerate(perm_cycles(self.sigma)):
            for e in cyc:
                orbit_of[e] = i
        return all(orbit_of[e] == orbit_of[self.tau[e]] for e in self.ends())

    def reversal(self) -> "Prediagram":
        """Same E, sigma, tau with the orientation of every pair flipped."""
        return Prediagram(
            n_ends=self.n_ends,
            sigma=self.sigma,
            tau=self.tau,
            positive=frozenset(self.ends()) - self.positive,
        )

    def relabel(self, phi: Perm) -> "Prediagram":
        """Transport the structure along the end bijection phi."""
        inv = perm_inverse(phi)
        return Prediagram(
            n_ends=self.n_ends,
            sigma=tuple(phi[self.sigma[inv[e]]] for e in self.ends()),
            tau=tuple(phi[self.tau[inv[e]]] for e in self.ends()),
            positive=frozenset(phi[e] for e in self.positive),
        )


@dataclass(frozen=True)
class CylinderComponent:
    edges: tuple[int, ...]
    positive: bool

    @property
    def cid(self) -> str:
        return f"C{min(self.edges)}"

    def __len__(self) -> int:
        return len(self.edges)


# -- types of stable components ------------------------------------------------


def _cyclic_conjugates(f: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    n = len(f)
    for l in range(n):
        yield tuple((f[(k - l) % n] + l) % n for k in range(n))


def canonical_type(f: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least conjugate of f under the cyclic group <c_n>."""
    return min(_cyclic_conjugates(tuple(f)))


def component_type(P: Prediagram) -> tuple[tuple[int, ...], ...]:
    """Canonical type of a stable prediagram: one permutation per component.

    On a stable connected component the ends form a single sigma-orbit;
    with x a positive end, even sigma-powers of x enumerate the positive
    ends and the component's permutation f satisfies
    tau(sigma^{2k}(x)) = sigma^{2 f(k) + 1}(x).  The representative is
    canonical under conjugation by the cycle c_n, so it does not depend on
    the choice of x.  The overall type is the sorted tuple of component
    representatives.
    """
    if not P.is_valid():
        raise ValueError("type of an invalid prediagram")
    if not P.is_stable():
        raise ValueError("type is defined for stable prediagrams only")
    types = []
    for sub, _ in P.connected_components():
        cycles = perm_cycles(sub.sigma)
        if len(cycles) != 1:
            raise ValueError("stable connected component must be a single sigma-orbit")
        n2 = sub.n_ends
        n = n2 // 2
        x = min(e for e in sub.ends() if e in sub.positive)
        power = {}
        e = x
        for j in range(n2):
            power[e] = j
            e = sub.sigma[e]
        f = [0] * n
        for k in range(n):
            y = sub.tau[_sigma_power(sub, x, 2 * k)]
            j = power[y]
            if j % 2 != 1:
                raise ValueError("component is not alternating")
            f[k] = (j - 1) // 2
        types.append(canonical_type(tuple(f)))
    return tuple(sorted(types))


def _sigma_power(P: Prediagram, e: int, k: int) -> int:
    for _ in range(k):
        e = P.sigma[e]
    return e


def reversed_type_of(f: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical type of the reversal of a component of type f: (f∘c_n)⁻¹."""
    n = len(f)
    fc = tuple(f[(k + 1) % n] for k in range(n))
    return canonical_type(perm_inverse(fc))


def star_from_type(f: tuple[int, ...]) -> Prediagram:
    """The minimal stable alternating prediagram with component type f.

    Ends 0..2n-1 in sigma-cycle order, even ends positive, and
    tau(2k) = 2 f(k) + 1.
    """
    n = len(f)
    sigma = tuple((e + 1) % (2 * n) for e in range(2 * n))
    tau = [0] * (2 * n)
    for k in range(n):
        tau[2 * k] = 2 * f[k] + 1
        tau[2 * f[k] + 1] = 2 * k
    return Prediagram(2 * n, sigma, tuple(tau), frozenset(range(0, 2 * n, 2)))


def disjoint_union(parts: list[Prediagram]) -> Prediagram:
    n = 0
    sigma: list[int] = []
    tau: list[int] = []
    positive: set[int] = set()
    for p in parts:
        sigma.extend(e + n for e in p.sigma)
        tau.extend(e + n for e in p.tau)
        positive.update(e + n for e in p.positive)
        n += p.n_ends
    return Prediagram(n, tuple(sigma), tuple(tau), frozenset(positive))


# -- isomorphism -----------------------------------------------------------


def _isomorphisms(P1: Prediagram, P2: Prediagram, to_reversal: bool,
                  first_only: bool) -> list[Perm]:
    """End bijections phi with phi∘sigma1 = sigma2∘phi, phi∘tau1 = tau2∘phi
    and phi(E+) equal to E+ of P2 (or its complement when to_reversal)."""
    if P1.n_ends != P2.n_ends:
        return []
    n = P1.n_ends
    target_positive = (frozenset(range(n)) - P2.positive) if to_reversal else P2.positive
    comps1 = P1.connected_components()
    results: list[Perm] = []
    assignment = [-1] * n
    used = [False] * n

    def ok_image(e: int, im: int) -> bool:
        return (e in P1.positive) == (im in target_positive)

    def propagate(seed: int, img: int) -> Optional[list[tuple[int, int]]]:
        """Close the partial map under sigma and tau from one seed pair."""
        pairs = []
        local: dict[int, int] = {}
        stack = [(seed, img)]
        while stack:
            e, im = stack.pop()
            cur = local.get(e, assignment[e] if assignment[e] >= 0 else None)
            if cur is not None:
                if cur != im:
                    return None
                continue
            if used[im] or im in local.values():
                return None
            if not ok_image(e, im):
                return None
            local[e] = im
            pairs.append((e, im))
            stack.append((P1.sigma[e], P2.sigma[im]))
            stack.append((P1.tau[e], P2.tau[im]))
        return pairs

    def backtrack(ci: int) -> bool:
        if ci == len(comps1):
            results.append(tuple(assignment))
            return first_only
        _, ends = comps1[ci]
        seed = ends[0]
        for img in range(n):
            if used[img]:
                continue
            pairs = propagate(seed, img)
            if pairs is None:
                continue
            for e, im in pairs:
                assignment[e] = im
                used[im] = True
            if backtrack(ci + 1):
                return True
            for e, im in pairs:
                assignment[e] = -1
                used[im] = False
        return False

    backtrack(0)
    return results


def are_isomorphic(P1: Prediagram, P2: Prediagram) -> Optional[Perm]:
    """A witness bijection if the prediagrams are isomorphic, else None.

    Stable connected inputs are decided by type equality first; the
    witness is then found by the same search, which is cheap at these
    sizes.
    """
    if P1.is_valid() and P2.is_valid() and P1.is_stable() and P2.is_stable():
        if component_type(P1) != component_type(P2):
            return None
    found = _isomorphisms(P1, P2, to_reversal=False, first_only=True)
    return found[0] if found else None


def automorphisms(P: Prediagram) -> list[Perm]:
    """All prediagram automorphisms (orientation preserving)."""
    return _isomorphisms(P, P, to_reversal=False, first_only=False)


def reversal_isomorphisms(P: Prediagram) -> list[Perm]:
    """All isomorphisms from P onto its reversal."""
    return _isomorphisms(P, P, to_reversal=True, first_only=False)


# -- matchings, metrics, diagrams -------------------------------------------


@dataclass(frozen=True)
class Matching:
    """Bijection from positive to negative cylinder components, by id."""

    pairs: tuple[tuple[str, str], ...]  # (positive id, negative id)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))

    @staticmethod
    def from_dict(d: dict) -> "Matching":
        return Matching(tuple(sorted(d.items())))

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def partner(self, cid: str) -> str:
        for p, q in self.pairs:
            if p == cid:
                return q
            if q == cid:
                return p
        raise KeyError(cid)

    def validate_for(self, P: Prediagram) -> list[dict]:
        comps = {c.cid: c for c in P.cylinder_components()}
        pos = {c.cid for c in comps.values() if c.positive}
        neg = {c.cid for c in comps.values() if not c.positive}
        left = [p for p, _ in self.pairs]
        right = [q for _, q in self.pairs]
        problems = []
        if sorted(left) != sorted(pos) or len(set(left)) != len(left):
            problems.append({"code": "matching-not-total-on-positive"})
        if sorted(right) != sorted(neg) or len(set(right)) != len(right):
            problems.append({"code": "matching-not-bijective-on-negative"})
        return problems


Metric = dict[str, QuadraticNumber]  # saddle connection id -> length


def component_length(P: Prediagram, comp: CylinderComponent, metric: Metric) -> QuadraticNumber:
    """Extension of the metric to a component: sum of lengths along it."""
    total = None
    for e in comp.edges:
        l = metric[P.sc_id(e)]
        total = l if total is None else total + l
    assert total is not None
    return total


@dataclass(frozen=True)
class SeparatrixDiagram:
    """A valid alternating prediagram plus matching and compatible metric."""

    prediagram: Prediagram
    matching: Matching
    metric: tuple[tuple[str, QuadraticNumber], ...]

    def __post_init__(self) -> None:
        if isinstance(self.metric, dict):
            object.__setattr__(self, "metric", tuple(sorted(self.metric.items())))
        else:
            object.__setattr__(self, "metric", tuple(sorted(self.metric)))

    @property
    def lengths(self) -> Metric:
        return dict(self.metric)

    def validate(self) -> list[dict]:
        problems = self.prediagram.validate()
        if problems:
            return problems
        problems.extend(self.matching.validate_for(self.prediagram))
        lengths = self.lengths
        wanted = {f"S{a}" for a, _ in self.prediagram.saddle_connections()}
        if set(lengths) != wanted:
            problems.append({"code": "metric-keys", "detail": sorted(set(lengths) ^ wanted)})
            return problems
        for sid, val in lengths.items():
            if not val.is_positive():
                problems.append({"code": "metric-not-positive", "detail": sid})
        comps = {c.cid: c for c in self.prediagram.cylinder_components()}
        for p, q in self.matching.pairs:
            lp = component_length(self.prediagram, comps[p], lengths)
            lq = component_length(self.prediagram, comps[q], lengths)
            if lp != lq:
                problems.append({"code": "matching-length-mismatch", "detail": [p, q]})
        return problems

    def is_valid(self) -> bool:
        return not self.validate()

    def cylinders(self) -> list[tuple[str, str]]:
        """Matched pairs (positive id, negative id), sorted."""
        return list(self.matching.pairs)

    def circumference(self, pos_id: str) -> QuadraticNumber:
        comps = {c.cid: c for c in self.prediagram.cylinder_components()}
        return component_length(self.prediagram, comps[pos_id], self.lengths)

    @property
    def base(self) -> int:
        return next(iter(self.lengths.values())).d


def transport_matching(P: Prediagram, m: Matching, phi: Perm) -> Matching:
    """Image of a matching along a prediagram automorphism."""
    comp_of = P.component_of
    pairs = []
    for p, q in m.pairs:
        pe = int(p[1:])
        qe = int(q[1:])
        pairs.append((comp_of(phi[pe]), comp_of(phi[qe])))
    return Matching(tuple(pairs))


def matching_isomorphic(P: Prediagram, m1: Matching, m2: Matching) -> Optional[Perm]:
    """Automorphism of P transporting m1 to m2, if any."""
    for phi in automorphisms(P):
        if transport_matching(P, m1, phi) == m2:
            return phi
    return None


def diagram_isomorphic(D1: SeparatrixDiagram, D2: SeparatrixDiagram) -> bool:
    """True iff some prediagram isomorphism transports matching and metric."""
    P1, P2 = D1.prediagram, D2.prediagram
    l1, l2 = D1.lengths, D2.lengths
    for phi in _isomorphisms(P1, P2, to_reversal=False, first_only=False):
        if transport_matching(P1, D1.matching, phi) != D2.matching:
            continue
        if all(l2[P2.sc_id(phi[e])] == l1[P1.sc_id(e)] for e in P1.ends()):
            return True
    return False


def matching_equations(P: Prediagram, m: Matching) -> tuple[list[list[Fraction]], list[str]]:
    """Rows of the length-equality system over the saddle connection ids."""
    sc_ids = [f"S{a}" for a, _ in P.saddle_connections()]
    index = {sid: i for i, sid in enumerate(sc_ids)}
    comps = {c.cid: c for c in P.cylinder_components()}
    rows = []
    for p, q in m.pairs:
        row = [Fraction(0)] * len(sc_ids)
        for e in comps[p].edges:
            row[index[P.sc_id(e)]] += 1
        for e in comps[q].edges:
            row[index[P.sc_id(e)]] -= 1
        rows.append(row)
    return rows, sc_ids


def metric_feasible(P: Prediagram, m: Matching, d: int = 0) -> Optional[Metric]:
    """A strictly positive metric satisfying all matching equalities, or None.

    The system is homogeneous and rational, so feasibility is decided
    exactly; the returned witness is rational, embedded in Q(sqrt(d)).
    """
    rows, sc_ids = matching_equations(P, m)
    witness = positive_solution(rows, ncols=len(sc_ids))
    if witness is None:
        return None
    return {sid: qn(x, d) for sid, x in zip(sc_ids, witness)}


# -- JSON schema -------------------------------------------------------------


def prediagram_to_json(P: Prediagram) -> dict:
    return {
        "n_ends": P.n_ends,
        "sigma": [list(c) for c in perm_cycles(P.sigma)],
        "tau": [list(p) for p in P.saddle_connections()],
        "positive": sorted(P.positive),
    }


def prediagram_from_json(obj: dict) -> Prediagram:
    n = int(obj["n_ends"])
    sigma = perm_from_cycles(n, obj["sigma"])
    tau = perm_from_cycles(n, obj["tau"])
    return Prediagram(n, sigma, tau, frozenset(obj["positive"]))


def diagram_to_json(D: SeparatrixDiagram, d: int | None = None) -> dict:
    obj = prediagram_to_json(D.prediagram)
    obj["matching"] = D.matching.as_dict()
    obj["lengths"] = {sid: val.to_json() for sid, val in D.metric}
    obj["d"] = d if d is not None else D.base
    return obj


def diagram_from_json(obj: dict) -> SeparatrixDiagram:
    P = prediagram_from_json(obj)
    matching = Matching.from_dict(obj["matching"])
    lengths = {sid: QuadraticNumber.from_json(v) for sid, v in obj["lengths"].items()}
    return SeparatrixDiagram(P, matching, tuple(sorted(lengths.items())))
