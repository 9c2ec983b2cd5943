"""Combinatorial Prym involutions.

An involution of a stable diagram is an isomorphism rho onto the reversed
diagram that squares to the identity, transports the matching, preserves
the metric, and whose fixed points satisfy the count

    #Fix(rho0) + #Fix(tau∘rho) + 2 #Fix(rho∘m) = 10 - 2g,

where rho0 is the induced map on singularities, tau∘rho fixes the ends of
saddle connections reversed in place, and rho∘m acts on cylinders.  The
three summands locate the fixed points of the corresponding surface
involution on singularities, saddle connections, and core curves.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import (
    Matching,
    Perm,
    Prediagram,
    SeparatrixDiagram,
    perm_cycles,
    reversal_isomorphisms,
)
from .surface import is_connected_surface, stratum_signature


@dataclass(frozen=True)
class PrymInvolution:
    """An edge-end involution with its induced actions and fixed counts."""

    rho: Perm
    rho0: tuple[tuple[int, ...], ...]  # induced map on singularities, as cycles
    pi: tuple[tuple[str, ...], ...]  # induced map on cylinders (positive ids), as cycles
    fixed_counts: tuple[int, int, int]  # (fix rho0, fix tau∘rho, fix rho∘m)

    @property
    def fixed_cylinders(self) -> int:
        return self.fixed_counts[2]

    def to_json(self) -> dict:
        return {
            "rho": list(self.rho),
            "rho0_cycles": [list(c) for c in self.rho0],
            "cylinder_cycles": [list(c) for c in self.pi],
            "fixed_counts": list(self.fixed_counts),
        }


def _structural_reversal_involutions(P: Prediagram) -> list[Perm]:
    """Isomorphisms P -> reversal(P) squaring to the identity."""
    return [rho for rho in reversal_isomorphisms(P)
            if all(rho[rho[e]] == e for e in P.ends())]


def transports_matching(P: Prediagram, m: Matching, rho: Perm) -> bool:
    """rho maps every matched pair onto a matched pair."""
    comp_of = P.component_of
    pair_set = {frozenset(pq) for pq in m.pairs}
    for p, q in m.pairs:
        image = frozenset((comp_of(rho[int(p[1:])]), comp_of(rho[int(q[1:])])))
        if image not in pair_set:
            return False
    return True


def cylinder_action(P: Prediagram, m: Matching, rho: Perm) -> dict[str, str]:
    """Induced permutation of cylinders, keyed by positive component id."""
    comp_of = P.component_of
    action = {}
    for p, q in m.pairs:
        image_pos = comp_of(rho[int(q[1:])])  # rho maps negative to positive
        action[p] = image_pos
    return action


def fixed_point_count(P: Prediagram, m: Matching, rho: Perm) -> tuple[int, int, int]:
    """(fixed singularities, fixed saddle connections, fixed cylinders)."""
    stars = perm_cycles(P.sigma)
    star_of = {}
    for i, cyc in enumerate(stars):
        for e in cyc:
            star_of[e] = i
    fix0 = sum(1 for cyc in stars if star_of[rho[cyc[0]]] == star_of[cyc[0]])
    fix_sc = sum(1 for e in P.ends() if P.tau[rho[e]] == e) // 2
    action = cylinder_action(P, m, rho)
    fix_cyl = sum(1 for p, img in action.items() if img == p)
    return (fix0, fix_sc, fix_cyl)


def rho0_cycles(P: Prediagram, rho: Perm) -> tuple[tuple[int, ...], ...]:
    stars = perm_cycles(P.sigma)
    star_of = {}
    for i, cyc in enumerate(stars):
        for e in cyc:
            star_of[e] = i
    mapping = tuple(star_of[rho[cyc[0]]] for cyc in stars)
    return tuple(tuple(c) for c in perm_cycles(mapping))


def matching_involutions(P: Prediagram, m: Matching,
                         genus: int | None = None) -> list[PrymInvolution]:
    """All combinatorial Prym involutions of (P, m), metric not yet imposed.

    Deterministic order (by the one-line tuple of rho).  The fixed point
    formula uses the genus computed from the prediagram.
    """
    if genus is None:
        genus = stratum_signature(P).genus
    target = 10 - 2 * genus
    out = []
    for rho in sorted(_structural_reversal_involutions(P)):
        if not transports_matching(P, m, rho):
            continue
        counts = fixed_point_count(P, m, rho)
        if counts[0] + counts[1] + 2 * counts[2] != target:
            continue
        action = cylinder_action(P, m, rho)
        pi_perm_cycles = _cycles_of_mapping(action)
        out.append(PrymInvolution(rho, rho0_cycles(P, rho), pi_perm_cycles, counts))
    return out


def structural_candidates(P: Prediagram, m: Matching) -> list[tuple[Perm, tuple[int, int, int]]]:
    """Matching-transporting involutive reversal isomorphisms with their counts.

    Unlike :func:`matching_involutions` the fixed point formula is not
    imposed; the enumerator uses this to tell apart candidates whose only
    failure is an excess of fixed cylinders.
    """
    out = []
    for rho in sorted(_structural_reversal_involutions(P)):
        if transports_matching(P, m, rho):
            out.append((rho, fixed_point_count(P, m, rho)))
    return out


def _cycles_of_mapping(action: dict[str, str]) -> tuple[tuple[str, ...], ...]:
    keys = sorted(action)
    seen = set()
    cycles = []
    for k in keys:
        if k in seen:
            continue
        cyc = [k]
        seen.add(k)
        nxt = action[k]
        while nxt != k:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = action[nxt]
        cycles.append(tuple(cyc))
    return tuple(cycles)


def metric_compatible(D: SeparatrixDiagram, rho: Perm) -> bool:
    """Lengths are preserved edge by edge: l∘rho = l on saddle connections."""
    P = D.prediagram
    lengths = D.lengths
    return all(lengths[P.sc_id(rho[e])] == lengths[P.sc_id(e)] for e in P.ends())


def find_prym_involutions(D: SeparatrixDiagram) -> list[PrymInvolution]:
    """All combinatorial Prym involutions of a stable connected diagram."""
    P = D.prediagram
    if not P.is_stable():
        raise ValueError("Prym involutions are defined on stable diagrams")
    if not is_connected_surface(P, D.matching):
        raise ValueError("diagram does not build a connected surface")
    found = matching_involutions(P, D.matching)
    return [inv for inv in found if metric_compatible(D, inv.rho)]


def cylinder_permutation(inv: PrymInvolution) -> dict[str, str]:
    """The induced cylinder involution as a mapping on positive ids."""
    mapping = {}
    for cyc in inv.pi:
        for i, c in enumerate(cyc):
            mapping[c] = cyc[(i + 1) % len(cyc)]
    return mapping


def conjugacy_classes(D: SeparatrixDiagram, involutions: list[PrymInvolution]) -> list[int]:
    """Index of the class representative for each involution.

    Two involutions are conjugate when some symmetry of the diagram (an
    automorphism transporting matching and metric) carries one to the
    other.  All involutions are reported individually; this only labels
    the pairs.
    """
    from .diagram import automorphisms, perm_compose, perm_inverse, transport_matching

    P = D.prediagram
    lengths = D.lengths
    symmetries = [
        phi for phi in automorphisms(P)
        if transport_matching(P, D.matching, phi) == D.matching
        and all(lengths[P.sc_id(phi[e])] == lengths[P.sc_id(e)] for e in P.ends())
    ]
    labels = list(range(len(involutions)))
    for i, a in enumerate(involutions):
        for j in range(i):
            b = involutions[j]
            if any(
                perm_compose(perm_compose(phi, a.rho), perm_inverse(phi)) == b.rho
                for phi in symmetries
            ):
                labels[i] = labels[j]
                break
    return labels


def involution_report(D: SeparatrixDiagram, inv: PrymInvolution) -> dict:
    sig = stratum_signature(D.prediagram)
    counts = inv.fixed_counts
    return {
        "rho": list(inv.rho),
        "rho0_cycles": [list(c) for c in inv.rho0],
        "cylinder_cycles": [list(c) for c in inv.pi],
        "fixed_counts": list(counts),
        "genus": sig.genus,
        "formula_check": counts[0] + counts[1] + 2 * counts[2] == 10 - 2 * sig.genus,
    }
