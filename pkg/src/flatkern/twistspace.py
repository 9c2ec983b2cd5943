"""Twist-coordinate linear algebra for isoperiodic deformations.

Twisting cylinder i by x_i shifts periods by x_i * c_i along the dual of
its core curve, so a twist vector x is isoperiodic exactly when

    sum_i x_i * c_i * [core curve of cylinder i] = 0   in H1.

The solutions form the full-stratum twist kernel K; intersecting with the
coordinate symmetries of a cylinder involution gives the kernel inside a
Prym locus, and an explicit subspace can be supplied directly.  On top of
the kernels the module computes supports, degrees, minimal deformations,
transversality, the circumference ratio field, shear vectors, the
property-P verdict and the two rank certificates (sum of degrees of
transverse minimal deformations, and the rational-closure dimension
bound).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .diagram import SeparatrixDiagram
from .exactalg import (
    QVector,
    QuadraticNumber,
    kernel_basis,
    qn,
    qspan_dimension,
    rational_closure,
    rational_span_dimension,
    rref,
    scale_to_leading_one,
    solve_in_span,
)
from .surface import Surface, chain_complex


# -- loci ---------------------------------------------------------------------


@dataclass(frozen=True)
class FullStratum:
    kind: str = "full"


@dataclass(frozen=True)
class PrymLocus:
    """Locus cut out by a cylinder involution; twists must be pi-invariant."""

    pi: tuple[tuple[str, str], ...]  # positive component id -> image

    @staticmethod
    def from_mapping(mapping: dict[str, str]) -> "PrymLocus":
        return PrymLocus(tuple(sorted(mapping.items())))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pi)

    kind: str = "prym"


@dataclass(frozen=True)
class ExplicitLocus:
    basis: tuple[QVector, ...]
    kind: str = "explicit"


Locus = FullStratum | PrymLocus | ExplicitLocus


@dataclass(frozen=True)
class TwistModel:
    """Twist-coordinate model of a locus at a periodic surface.

    Bundles the cylinder count, the exact circumferences, the locus and
    the base point periods.  Whether the decomposition stays stable along
    isoperiodic deformations inside the locus is not decidable from one
    diagram; ``fm_stable`` records that hypothesis as asserted by the
    caller.
    """

    surface: "object"
    locus: Locus
    fm_stable: bool = True

    @staticmethod
    def from_surface(surface, locus: Locus, fm_stable: bool = True) -> "TwistModel":
        model = TwistModel(surface, locus, fm_stable)
        model.validate()
        return model

    @property
    def cylinder_count(self) -> int:
        return len(self.surface.diagram.cylinders())

    def circumferences(self) -> list[QuadraticNumber]:
        return self.surface.circumferences()

    def base_point(self) -> dict:
        from .surface import periods

        return periods(self.surface)

    def validate(self) -> None:
        ids = [p for p, _ in self.surface.diagram.cylinders()]
        circ = dict(zip(ids, self.circumferences()))
        for c in circ.values():
            if not c.is_positive():
                raise ValueError("circumferences must be positive")
        if isinstance(self.locus, PrymLocus):
            for cid, img in self.locus.mapping.items():
                if circ[cid] != circ[img]:
                    raise ValueError(
                        f"circumferences are not invariant under the involution: {cid} vs {img}"
                    )

    def kernel(self) -> list[QVector]:
        return twist_kernel(self.surface.diagram, self.locus)

    def property_p(self) -> "PropertyVerdict":
        return has_property_p(self.surface.diagram, self.locus)


@dataclass(frozen=True)
class DeformationVector:
    """A twist vector with its support and degree."""

    entries: QVector

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.entries) if not x.is_zero())

    @property
    def degree(self) -> int:
        return degree(self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [x.to_json() for x in self.entries],
            "support": list(self.support),
            "degree": self.degree,
        }


def degree(u: Sequence[QuadraticNumber]) -> int:
    """dim over Q of the span of the entries, minus one."""
    entries = list(u)
    if all(x.is_zero() for x in entries):
        raise ValueError("degree of the zero vector is undefined")
    return qspan_dimension(entries) - 1


def support(u: Sequence[QuadraticNumber]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(u) if not x.is_zero())


def are_transverse(u: Sequence[QuadraticNumber], v: Sequence[QuadraticNumber]) -> bool:
    return not set(support(u)) & set(support(v))


# -- kernels -------------------------------------------------------------------


def isoperiodic_twist_space(D: SeparatrixDiagram) -> list[QVector]:
    """Canonical echelon basis of the full-stratum twist kernel.

    Solves, over Q(sqrt(d)), for sum_i x_i c_i (bottom chain of i) to lie
    in the column space of the cylinder boundary map.
    """
    cc = chain_complex(D)
    d = D.base
    m = len(cc.cylinder_ids)
    n_sc = len(cc.sc_ids)
    circumferences = [D.circumference(p) for p in cc.cylinder_ids]
    # rows indexed by saddle connections; columns x_0..x_{m-1}, then one
    # column per cylinder face of the boundary map
    rows = []
    for i in range(n_sc):
        row = [circumferences[j] * qn(cc.core_classes[j][i], d) for j in range(m)]
        row += [qn(cc.boundary2[i][j], d) for j in range(m)]
        rows.append(tuple(row))
    kb = kernel_basis(rows)
    projected = [v[:m] for v in kb]
    canon, _ = rref(projected)
    return [tuple(v) for v in canon]


def prym_twist_space(k_full: Sequence[QVector], pi: dict[str, str],
                     cylinder_ids: Sequence[str],
                     circumferences: Sequence[QuadraticNumber]) -> list[QVector]:
    """K_full intersected with the pi-invariant twist vectors.

    Requires the circumferences themselves to be pi-invariant (matched
    cylinders of the locus are isometric).
    """
    index = {cid: i for i, cid in enumerate(cylinder_ids)}
    m = len(cylinder_ids)
    for cid, img in pi.items():
        if circumferences[index[cid]] != circumferences[index[img]]:
            raise ValueError(
                f"circumferences are not invariant under the involution: {cid} vs {img}"
            )
    if not k_full:
        return []
    d = k_full[0][0].d
    zero, one = qn(0, d), qn(1, d)
    # solve for coefficients t with sum t_j k_full[j] pi-invariant
    constraints = []
    for cid, img in sorted(pi.items()):
        i, j = index[cid], index[img]
        if i == j:
            continue
        constraints.append(tuple(v[i] - v[j] for v in k_full))
    if not constraints:
        return [tuple(v) for v in k_full]
    coeff_basis = kernel_basis(constraints)
    vectors = []
    for t in coeff_basis:
        v = [zero] * m
        for j, coeff in enumerate(t):
            if coeff.is_zero():
                continue
            v = [acc + coeff * x for acc, x in zip(v, k_full[j])]
        vectors.append(tuple(v))
    canon, _ = rref(vectors)
    return [tuple(v) for v in canon]


def explicit_twist_space(k_full: Sequence[QVector], basis: Sequence[QVector]) -> list[QVector]:
    """Intersection of K_full with an explicitly given twist subspace."""
    if not k_full or not basis:
        return []
    m = len(k_full[0])
    d = k_full[0][0].d
    # x in both spans: x = K t = B s; solve [Kᵀ | -Bᵀ] (t, s) = 0
    rows = []
    for i in range(m):
        rows.append(tuple(v[i] for v in k_full) + tuple(-w[i] for w in basis))
    sols = kernel_basis(rows)
    vectors = []
    zero = qn(0, d)
    for sol in sols:
        v = [zero] * m
        for j in range(len(k_full)):
            if not sol[j].is_zero():
                v = [acc + sol[j] * x for acc, x in zip(v, k_full[j])]
        if any(not x.is_zero() for x in v):
            vectors.append(tuple(v))
    canon, _ = rref(vectors)
    return [tuple(v) for v in canon]


def twist_kernel(D: SeparatrixDiagram, locus: Locus) -> list[QVector]:
    k_full = isoperiodic_twist_space(D)
    if isinstance(locus, FullStratum):
        return k_full
    if isinstance(locus, PrymLocus):
        cyl_ids = [p for p, _ in D.cylinders()]
        circumferences = [D.circumference(p) for p in cyl_ids]
        return prym_twist_space(k_full, locus.mapping, cyl_ids, circumferences)
    return explicit_twist_space(k_full, locus.basis)


# -- minimality ----------------------------------------------------------------


def _subspace_dim_with_support_in(k_basis: Sequence[QVector], allowed: set[int]) -> int:
    """Dimension of {v in span(K) : v_j = 0 outside allowed}."""
    if not k_basis:
        return 0
    m = len(k_basis[0])
    forbidden = [j for j in range(m) if j not in allowed]
    if not forbidden:
        return len(rref(list(k_basis))[1])
    rows = [tuple(v[j] for v in k_basis) for j in forbidden]
    return len(kernel_basis(rows))


def _vector_with_support_in(k_basis: Sequence[QVector], allowed: set[int]) -> Optional[QVector]:
    if not k_basis:
        return None
    m = len(k_basis[0])
    d = k_basis[0][0].d
    forbidden = [j for j in range(m) if j not in allowed]
    if not forbidden:
        return k_basis[0]
    rows = [tuple(v[j] for v in k_basis) for j in forbidden]
    coeffs = kernel_basis(rows)
    if not coeffs:
        return None
    zero = qn(0, d)
    v = [zero] * m
    for j, c in enumerate(coeffs[0]):
        if not c.is_zero():
            v = [acc + c * x for acc, x in zip(v, k_basis[j])]
    return tuple(v) if any(not x.is_zero() for x in v) else None


def is_minimal(u: Sequence[QuadraticNumber], k_basis: Sequence[QVector]) -> bool:
    """No non-zero kernel vector has support strictly inside support(u).

    A strict subset is contained in support(u) minus one index, so one
    rank test per support index decides minimality.
    """
    u = tuple(u)
    if solve_in_span(list(k_basis), u) is None:
        raise ValueError("vector does not lie in the span of the kernel basis")
    supp = set(support(u))
    if not supp:
        raise ValueError("zero vector has no minimal support")
    for i in sorted(supp):
        if _subspace_dim_with_support_in(k_basis, supp - {i}) > 0:
            return False
    return True


def minimal_deformations(k_basis: Sequence[QVector]) -> list[DeformationVector]:
    """All inclusion-minimal supports of span(K), one canonical vector each.

    A minimal support carries a one-dimensional solution space, so the
    representative (first non-zero coordinate scaled to 1) is canonical.
    Supports are scanned in increasing size over the coordinates that K
    touches; proper subsets of a recorded minimal support are skipped.
    """
    if not k_basis:
        return []
    m = len(k_basis[0])
    touched = sorted({i for v in k_basis for i in support(v)})
    found: list[tuple[int, ...]] = []
    vectors: list[DeformationVector] = []
    for size in range(1, len(touched) + 1):
        for subset in combinations(touched, size):
            sset = set(subset)
            if any(set(f) <= sset for f in found):
                continue
            v = _vector_with_support_in(k_basis, sset)
            if v is None:
                continue
            if set(support(v)) != sset:
                continue  # realized support is smaller; handled at its own size
            found.append(subset)
            vectors.append(DeformationVector(scale_to_leading_one(v)))
    vectors.sort(key=lambda dv: dv.support)
    return vectors


# -- certificates --------------------------------------------------------------


def field_ratio_generators(circumferences: Sequence[QuadraticNumber]):
    """Ratios c_i/c_1 and the dimension over Q of their span.

    Dimension one certifies the arithmetic situation: all circumferences
    are commensurable.
    """
    cs = list(circumferences)
    if not cs or not all(c.is_positive() for c in cs):
        raise ValueError("circumferences must be positive")
    inv = cs[0].inverse()
    ratios = [c * inv for c in cs]
    return ratios, qspan_dimension(ratios)


def shear_vector(S: Surface) -> DeformationVector:
    """The twist direction of the horizontal shear: (h_1/c_1, ..., h_m/c_m)."""
    h = S.height_map
    entries = []
    for (pos_id, _), c in zip(S.diagram.cylinders(), S.circumferences()):
        entries.append(h[pos_id] * c.inverse())
    return DeformationVector(tuple(entries))


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    witness: Optional[DeformationVector]
    max_degree: Optional[int]
    reason: str

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "witness": self.witness.to_json() if self.witness else None,
            "max_degree": self.max_degree,
            "reason": self.reason,
        }


def has_property_p(D: SeparatrixDiagram, locus: Locus) -> PropertyVerdict:
    """Existence of a minimal isoperiodic deformation of degree >= 1.

    Stability of the decomposition within the locus beyond the structural
    stability check is a hypothesis of the caller; the verdict is about
    the twist kernel of the given model.
    """
    k = twist_kernel(D, locus)
    if not k:
        return PropertyVerdict(False, None, None, "absolute locus slice")
    best = None
    best_degree = -1
    for dv in minimal_deformations(k):
        deg = dv.degree
        if deg > best_degree:
            best, best_degree = dv, deg
        if deg >= 1:
            return PropertyVerdict(True, dv, deg, "minimal deformation of positive degree")
    return PropertyVerdict(False, best, best_degree, "all minimal deformations have degree 0")


def rank_lower_bound(deformations: Sequence[DeformationVector],
                     k_basis: Sequence[QVector]) -> int:
    """Sum of degrees of pairwise transverse minimal deformations.

    Transversality and minimality are re-checked; a violation is an error,
    not a weaker bound.
    """
    vs = list(deformations)
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if not are_transverse(vs[i].entries, vs[j].entries):
                raise ValueError(f"deformations {i} and {j} are not transverse")
    for i, v in enumerate(vs):
        if not is_minimal(v.entries, k_basis):
            raise ValueError(f"deformation {i} is not minimal")
    return sum(v.degree for v in vs)


@dataclass(frozen=True)
class DimensionCertificate:
    """Rank bound from the rational closure of the twist kernel.

    The smallest rational subspace containing the kernel sits inside the
    rational twist model of the ambient locus, whose dimension is at most
    rank + dim(kernel); the difference is a lower bound for the rank.
    """

    kernel_dim: int
    rational_closure_dim: int

    @property
    def rank_bound(self) -> int:
        return self.rational_closure_dim - self.kernel_dim

    def to_json(self) -> dict:
        return {
            "kernel_dim": self.kernel_dim,
            "rational_closure_dim": self.rational_closure_dim,
            "rank_bound": self.rank_bound,
            "inequality": "rank + kernel_dim >= rational_closure_dim",
        }


def dimension_certificate(k_basis: Sequence[QVector]) -> DimensionCertificate:
    return DimensionCertificate(
        kernel_dim=len(k_basis),
        rational_closure_dim=rational_span_dimension(list(k_basis)),
    )


def best_transverse_bound(deformations: Sequence[DeformationVector]) -> tuple[int, tuple[int, ...]]:
    """Largest degree sum over a pairwise transverse set of deformations.

    Returns the bound and the chosen indices.  Deformations of degree 0
    contribute nothing and are skipped.
    """
    items = [(i, dv) for i, dv in enumerate(deformations) if dv.degree >= 1]
    best = (0, ())

    def extend(start: int, chosen: list[int], total: int) -> None:
        nonlocal best
        if total > best[0]:
            best = (total, tuple(chosen))
        for k in range(start, len(items)):
            i, dv = items[k]
            if all(are_transverse(dv.entries, deformations[j].entries) for j in chosen):
                chosen.append(i)
                extend(k + 1, chosen, total + dv.degree)
                chosen.pop()

    extend(0, [], 0)
    return best


def vector_in_kernel(u: Sequence[QuadraticNumber], k_basis: Sequence[QVector]) -> bool:
    return solve_in_span(list(k_basis), tuple(u)) is not None


def closure_dimension_of_vector(u: Sequence[QuadraticNumber]) -> int:
    """Dimension of the rational closure of a single vector: degree + 1."""
    return len(rational_closure(list(u)))
