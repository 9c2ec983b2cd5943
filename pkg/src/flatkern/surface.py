"""From diagrams to surfaces: strata, connectivity, homology, periods.

A stable diagram of separatrices rebuilds a horizontally periodic
translation surface: singularities are the sigma-orbits, saddle
connections the tau-pairs, and each matched pair of cylinder components
bounds one flat cylinder.  This module computes the stratum signature and
genus, decides whether a matching produces a connected surface, builds the
CW chain complex of the closed surface (0-cells = singularities, 1-cells =
saddle connections plus one cross curve per cylinder, 2-cells = cylinder
rectangles) and assigns exact period coordinates.

All boundary matrices are exact rational matrices; homology dimensions are
computed by rank over Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagram import (
    Matching,
    Prediagram,
    SeparatrixDiagram,
    perm_cycles,
)
from .exactalg import QuadraticNumber, qn, rank


@dataclass(frozen=True)
class StratumSignature:
    kappa: tuple[int, ...]
    genus: int
    n_saddle_connections: int


def stratum_signature(P: Prediagram) -> StratumSignature:
    """Singularity orders, genus and saddle connection count.

    Each sigma-orbit of size 2(k+1) is a singularity of order k; the genus
    comes from the Euler characteristic of the graph, |kappa| - ns = 2 - 2g.
    """
    if not P.is_valid():
        raise ValueError("stratum of an invalid prediagram")
    orbits = perm_cycles(P.sigma)
    kappa = []
    for cyc in orbits:
        if len(cyc) % 2 != 0:
            raise ValueError(f"odd sigma-orbit size {len(cyc)}; not alternating")
        kappa.append(len(cyc) // 2 - 1)
    ns = P.n_ends // 2
    chi = len(kappa) - ns
    if (2 - chi) % 2 != 0:
        raise ValueError("inconsistent Euler characteristic")
    genus = (2 - chi) // 2
    return StratumSignature(tuple(sorted(kappa, reverse=True)), genus, ns)


def is_connected_surface(P: Prediagram, m: Matching) -> bool:
    """True iff the matched components link all prediagram components.

    Nodes are the connected components of P; every matched pair adds an
    edge between the components containing its two sides.
    """
    comps = P.connected_components()
    node_of = {}
    for i, (_, ends) in enumerate(comps):
        for e in ends:
            node_of[e] = i
    parent = list(range(len(comps)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p, q in m.pairs:
        a, b = find(node_of[int(p[1:])]), find(node_of[int(q[1:])])
        parent[a] = b
    return len({find(i) for i in range(len(comps))}) == 1


@dataclass(frozen=True)
class Surface:
    """A separatrix diagram with flat cylinder data (heights and twists)."""

    diagram: SeparatrixDiagram
    heights: tuple[tuple[str, QuadraticNumber], ...]
    twists: tuple[tuple[str, QuadraticNumber], ...]

    @staticmethod
    def from_diagram(D: SeparatrixDiagram, heights=None, twists=None) -> "Surface":
        d = D.base
        cyl_ids = [p for p, _ in D.cylinders()]
        h = {c: qn(1, d) for c in cyl_ids}
        t = {c: qn(0, d) for c in cyl_ids}
        if heights:
            h.update(heights)
        if twists:
            t.update(twists)
        return Surface(D, tuple(sorted(h.items())), tuple(sorted(t.items())))

    @property
    def height_map(self) -> dict[str, QuadraticNumber]:
        return dict(self.heights)

    @property
    def twist_map(self) -> dict[str, QuadraticNumber]:
        return dict(self.twists)

    def circumferences(self) -> list[QuadraticNumber]:
        """One positive circumference per cylinder, in matching order."""
        return [self.diagram.circumference(p) for p, _ in self.diagram.cylinders()]

    def validate(self) -> list[dict]:
        problems = self.diagram.validate()
        for cid, h in self.heights:
            if not h.is_positive():
                problems.append({"code": "height-not-positive", "detail": cid})
        for c in self.circumferences():
            if not c.is_positive():
                problems.append({"code": "circumference-not-positive"})
        return problems


@dataclass(frozen=True)
class ChainComplexData:
    """Exact CW chain complex of the closed surface.

    1-cells are the saddle connections (in ``sc_ids`` order) followed by
    one cross curve per cylinder (in ``cylinder_ids`` order).  Rows of the
    boundary matrices are indexed by cells of one dimension lower.
    """

    sc_ids: tuple[str, ...]
    cylinder_ids: tuple[str, ...]  # positive component id per cylinder
    n_vertices: int
    boundary1: tuple[tuple[Fraction, ...], ...]  # vertices x 1-cells
    boundary2: tuple[tuple[Fraction, ...], ...]  # 1-cells x cylinders
    core_classes: tuple[tuple[Fraction, ...], ...]  # per cylinder, in 1-cell coords

    @property
    def n_one_cells(self) -> int:
        return len(self.sc_ids) + len(self.cylinder_ids)

    def betti1(self) -> int:
        qb1 = [tuple(qn(x) for x in row) for row in self.boundary1]
        qb2 = [tuple(qn(x) for x in row) for row in self.boundary2]
        rank1 = rank(qb1) if self.boundary1 else 0
        rank2 = rank([tuple(col) for col in zip(*qb2)]) if self.cylinder_ids else 0
        return self.n_one_cells - rank1 - rank2


def chain_complex(D: SeparatrixDiagram) -> ChainComplexData:
    """Boundary matrices and core classes of the cylinder CW structure.

    Every saddle connection is a loop on a stable diagram, so d1 vanishes
    on them; cross curves run from a singularity on the bottom chain of a
    cylinder to one on its top chain.  The boundary of a cylinder 2-cell
    is its bottom chain minus its top chain (the two vertical sides are
    the same cross curve and cancel).
    """
    P = D.prediagram
    if not P.is_stable():
        raise ValueError("chain complex requires a stable diagram")
    if not is_connected_surface(P, D.matching):
        raise ValueError("chain complex requires a connected surface")
    sc_ids = tuple(f"S{a}" for a, _ in P.saddle_connections())
    sc_index = {sid: i for i, sid in enumerate(sc_ids)}
    star_of_end = {}
    stars = perm_cycles(P.sigma)
    for i, cyc in enumerate(stars):
        for e in cyc:
            star_of_end[e] = i
    comps = {c.cid: c for c in P.cylinder_components()}
    cylinders = D.cylinders()
    cylinder_ids = tuple(p for p, _ in cylinders)
    n1 = len(sc_ids) + len(cylinder_ids)

    def chain_of(cid: str) -> list[Fraction]:
        row = [Fraction(0)] * n1
        for e in comps[cid].edges:
            row[sc_index[P.sc_id(e)]] += 1
        return row

    boundary2 = []
    core = []
    b1_cols = []
    for j, (pos_id, neg_id) in enumerate(cylinders):
        bottom = chain_of(pos_id)
        top = chain_of(neg_id)
        boundary2.append(tuple(b - t for b, t in zip(bottom, top)))
        core.append(tuple(bottom))
        # cross curve: bottom anchor -> top anchor
        bot_star = star_of_end[comps[pos_id].edges[0]]
        top_star = star_of_end[comps[neg_id].edges[0]]
        col = [Fraction(0)] * len(stars)
        col[top_star] += 1
        col[bot_star] -= 1
        b1_cols.append(col)
    boundary1 = []
    for v in range(len(stars)):
        row = [Fraction(0)] * n1
        for j in range(len(cylinders)):
            row[len(sc_ids) + j] = b1_cols[j][v]
        boundary1.append(tuple(row))
    # columns of boundary2 are indexed by cylinders; store as 1-cells x cylinders
    b2 = tuple(tuple(boundary2[j][i] for j in range(len(cylinders))) for i in range(n1))
    return ChainComplexData(
        sc_ids=sc_ids,
        cylinder_ids=cylinder_ids,
        n_vertices=len(stars),
        boundary1=tuple(boundary1),
        boundary2=b2,
        core_classes=tuple(core),
    )


def boundary_product_is_zero(cc: ChainComplexData) -> bool:
    """d1∘d2 = 0, checked entrywise."""
    for v in range(cc.n_vertices):
        for j in range(len(cc.cylinder_ids)):
            total = sum(
                cc.boundary1[v][i] * cc.boundary2[i][j] for i in range(cc.n_one_cells)
            )
            if total != 0:
                return False
    return True


def periods(S: Surface) -> dict[str, tuple[QuadraticNumber, QuadraticNumber]]:
    """Exact period of every 1-cell as a (real, imaginary) pair.

    Saddle connections are horizontal of their metric length; the cross
    curve of a cylinder has period (twist, height).
    """
    D = S.diagram
    d = D.base
    out: dict[str, tuple[QuadraticNumber, QuadraticNumber]] = {}
    for sid, length in D.metric:
        out[sid] = (length, qn(0, d))
    h, t = S.height_map, S.twist_map
    for pos_id, _ in D.cylinders():
        out[f"X{pos_id}"] = (t[pos_id], h[pos_id])
    return out


def area(S: Surface) -> QuadraticNumber:
    total = None
    h = S.height_map
    for (pos_id, _), c in zip(S.diagram.cylinders(), S.circumferences()):
        term = c * h[pos_id]
        total = term if total is None else total + term
    assert total is not None
    return total


def surface_to_json(S: Surface) -> dict:
    """Diagram JSON extended with per-cylinder heights and twists."""
    from .diagram import diagram_to_json

    obj = diagram_to_json(S.diagram)
    obj["heights"] = {cid: h.to_json() for cid, h in S.heights}
    obj["twists"] = {cid: t.to_json() for cid, t in S.twists}
    return obj


def surface_from_json(obj: dict) -> Surface:
    from .diagram import diagram_from_json

    D = diagram_from_json(obj)
    heights = {cid: QuadraticNumber.from_json(v) for cid, v in obj.get("heights", {}).items()}
    twists = {cid: QuadraticNumber.from_json(v) for cid, v in obj.get("twists", {}).items()}
    return Surface.from_diagram(D, heights or None, twists or None)


def homology_report(D: SeparatrixDiagram) -> dict:
    cc = chain_complex(D)
    sig = stratum_signature(D.prediagram)
    return {
        "kappa": list(sig.kappa),
        "genus": sig.genus,
        "n_saddle_connections": sig.n_saddle_connections,
        "betti1": cc.betti1(),
        "one_cells": list(cc.sc_ids) + [f"X{c}" for c in cc.cylinder_ids],
        "core_classes": {
            cid: [str(x) for x in core]
            for cid, core in zip(cc.cylinder_ids, cc.core_classes)
        },
        "boundary_product_zero": boundary_product_is_zero(cc),
    }
