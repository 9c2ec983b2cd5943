"""Exact arithmetic over Q and real quadratic extensions Q(sqrt(d)).

Every length, coefficient and deformation entry in this package is a
:class:`QuadraticNumber`: a value ``a + b*sqrt(d)`` with rational ``a, b``
and a shared squarefree base ``d``.  ``d = 0`` is the degenerate rational
context (``b`` must vanish); values from different contexts never mix.

On top of the scalar type the module provides the small exact linear
algebra kernel used everywhere else: reduced row echelon form, canonical
kernel bases, Q-span dimensions, rational closures and an exact positivity
solver (Gaussian elimination into Fourier-Motzkin) for homogeneous
systems.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence


class ContextMismatchError(ValueError):
    """Raised when values from different quadratic contexts are combined."""


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) * isqrt(n) == n


def _check_base(d: int) -> None:
    if d == 0:
        return
    if d < 0 or _is_square(d):
        raise ValueError(f"base must be 0 or a positive non-square integer, got {d}")


@dataclass(frozen=True)
class QuadraticNumber:
    """An element a + b*sqrt(d) of Q(sqrt(d)), exact and immutable."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        _check_base(self.d)
        if not isinstance(self.a, Fraction):
            object.__setattr__(self, "a", Fraction(self.a))
        if not isinstance(self.b, Fraction):
            object.__setattr__(self, "b", Fraction(self.b))
        if self.d == 0 and self.b != 0:
            raise ValueError("rational context (d = 0) admits no irrational part")

    # -- construction -------------------------------------------------

    @staticmethod
    def rational(value, d: int = 0) -> "QuadraticNumber":
        return QuadraticNumber(Fraction(value), Fraction(0), d)

    @staticmethod
    def sqrt_base(d: int) -> "QuadraticNumber":
        """The element sqrt(d) of Q(sqrt(d))."""
        if d == 0:
            raise ValueError("no irrational generator in the rational context")
        return QuadraticNumber(Fraction(0), Fraction(1), d)

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.d != self.d:
                raise ContextMismatchError(
                    f"cannot combine contexts d={self.d} and d={other.d}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber.rational(other, self.d)
        return NotImplemented  # type: ignore[return-value]

    # -- field operations ----------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticNumber":
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticNumber(
            self.a * o.a + self.b * o.b * self.d,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # (a + b√d)(a - b√d) = a² - b²d, never 0 for d non-square
        norm = self.a * self.a - self.b * self.b * self.d
        return QuadraticNumber(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # -- order and predicates --------------------------------------------

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def sign(self) -> int:
        """Exact sign of a + b*sqrt(d)."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a² against b²d
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def is_positive(self) -> bool:
        return self.sign() > 0

    def __lt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).sign() >= 0

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QuadraticNumber.rational(other, self.d)
        if not isinstance(other, QuadraticNumber):
            return NotImplemented
        return self.d == other.d and self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.d))

    def __repr__(self) -> str:
        if self.b == 0:
            return f"QN({self.a})"
        return f"QN({self.a} + {self.b}*sqrt({self.d}))"

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "d": self.d}

    @staticmethod
    def from_json(obj: dict) -> "QuadraticNumber":
        return QuadraticNumber(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"]))


def qn(value, d: int = 0) -> QuadraticNumber:
    """Shorthand constructor for a rational element of Q(sqrt(d))."""
    if isinstance(value, QuadraticNumber):
        if value.d != d:
            raise ContextMismatchError(f"value has d={value.d}, expected {d}")
        return value
    return QuadraticNumber.rational(value, d)


QVector = tuple[QuadraticNumber, ...]


@dataclass(frozen=True)
class QMatrix:
    """Rectangular matrix over Q(sqrt(d)); entries share one context."""

    entries: tuple[QVector, ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(r) for r in self.entries)
        object.__setattr__(self, "entries", rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("matrix rows must have equal length")
            ds = {e.d for r in rows for e in r}
            if len(ds) > 1:
                raise ContextMismatchError(f"mixed contexts in matrix: {sorted(ds)}")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def _as_rows(M) -> tuple[QVector, ...]:
    if isinstance(M, QMatrix):
        return M.entries
    return tuple(tuple(r) for r in M)


def rref(rows: Sequence[Sequence[QuadraticNumber]]):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    mat = [list(r) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(mat)) if not mat[i][c].is_zero()), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = mat[r][c].inverse()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return [tuple(row) for row in mat[: len(pivots)]], pivots


def rank(M) -> int:
    _, pivots = rref(_as_rows(M))
    return len(pivots)


def kernel_basis(M) -> list[QVector]:
    """Canonical echelon basis of the right kernel {x : M·x = 0}.

    Empty iff M has full column rank.  The basis is the reduced row
    echelon form of the kernel with pivots sorted, so equal kernels give
    identical output.
    """
    rows = _as_rows(M)
    if not rows:
        raise ValueError("kernel of an empty matrix is ambiguous; pass column count via identity trick")
    ncols = len(rows[0])
    d = rows[0][0].d
    red, pivots = rref(rows)
    zero = qn(0, d)
    one = qn(1, d)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][fc]
        basis.append(tuple(v))
    canon, _ = rref(basis)
    return list(canon)


def solve_in_span(basis: Sequence[QVector], target: QVector):
    """Coefficients expressing target in span(basis), or None."""
    if not basis:
        return None if any(not x.is_zero() for x in target) else ()
    n = len(target)
    d = target[0].d
    # solve Bᵀ·t = target by eliminating the augmented system
    aug = [[basis[j][i] for j in range(len(basis))] + [target[i]] for i in range(n)]
    red, pivots = rref(aug)
    k = len(basis)
    if k in pivots:
        return None
    coeffs = [qn(0, d)] * k
    for i, pc in enumerate(pivots):
        coeffs[pc] = red[i][k]
    return tuple(coeffs)


def in_span(basis: Sequence[QVector], target: QVector) -> bool:
    return solve_in_span(basis, target) is not None


def qspan_dimension(values: Iterable[QuadraticNumber]) -> int:
    """Dimension over Q of the Q-linear span of the given field elements.

    Computed as the rank of the rational coordinate matrix [(a_i, b_i)];
    the result is 0, 1 or 2, and 0 exactly when all values vanish.
    """
    vals = list(values)
    if not vals:
        raise ValueError("empty value list")
    ds = {v.d for v in vals}
    if len(ds) > 1:
        raise ContextMismatchError(f"mixed contexts: {sorted(ds)}")
    rows = [(qn(v.a), qn(v.b)) for v in vals]
    return rank(rows)


def rational_closure(u: Sequence[QuadraticNumber]) -> list[tuple[Fraction, ...]]:
    """Basis of the smallest Q-rational subspace containing the vector u.

    Writes each entry of u in a canonical Q-basis of the span of its
    entries and returns one rational coordinate vector per basis element.
    The number of vectors returned is qspan_dimension(u) = degree(u) + 1.
    """
    vals = list(u)
    if not vals or all(v.is_zero() for v in vals):
        raise ValueError("rational closure of the zero vector is undefined")
    coord_rows = [(qn(v.a), qn(v.b)) for v in vals]
    span_basis, _ = rref(coord_rows)
    coords = []
    for row in coord_rows:
        c = solve_in_span(span_basis, row)
        assert c is not None
        coords.append(c)
    return [
        tuple(Fraction(c[idx].a) for c in coords) for idx in range(len(span_basis))
    ]


def rational_span_dimension(vectors: Sequence[QVector]) -> int:
    """Dimension over Q of the smallest rational subspace containing all vectors.

    Stacks the rational and sqrt(d) coordinate parts of every vector and
    returns the rank over Q.
    """
    rows = []
    for v in vectors:
        rows.append(tuple(qn(x.a) for x in v))
        rows.append(tuple(qn(x.b) for x in v))
    if not rows:
        return 0
    return rank(rows)


# -- exact positivity -------------------------------------------------------


def _fraction_rows(Aeq) -> list[list[Fraction]]:
    if isinstance(Aeq, QMatrix):
        Aeq = Aeq.entries
    rows = []
    for r in Aeq:
        row = []
        for x in r:
            if isinstance(x, QuadraticNumber):
                if x.b != 0:
                    raise ValueError("positivity solver expects a rational matrix")
                row.append(Fraction(x.a))
            else:
                row.append(Fraction(x))
        rows.append(row)
    return rows


def positive_solution(Aeq, ncols: int | None = None):
    """A strictly positive rational x with Aeq·x = 0, or None.

    Homogeneity reduces strict positivity to feasibility of the closed
    system {Aeq·x = 0, x >= 1}, decided exactly: the equalities are
    eliminated by rational Gaussian elimination and the bound constraints
    by Fourier-Motzkin on the kernel parameters.
    """
    rows = _fraction_rows(Aeq)
    if ncols is None:
        if not rows:
            raise ValueError("pass ncols for a system with no equations")
        ncols = len(rows[0])
    if ncols == 0:
        return None
    qrows = [tuple(qn(x) for x in r) for r in rows if len(r) == ncols]
    if rows and any(len(r) != ncols for r in rows):
        raise ValueError("ragged equality matrix")
    if qrows:
        kb = kernel_basis(qrows)
    else:
        kb = [tuple(qn(1 if i == j else 0) for j in range(ncols)) for i in range(ncols)]
    k = len(kb)
    if k == 0:
        return None
    # inequalities: for each variable i, sum_j kb[j][i] * t_j >= 1
    ineqs = []
    for i in range(ncols):
        coeffs = [Fraction(kb[j][i].a) for j in range(k)]
        ineqs.append((coeffs, Fraction(1)))
    t = _fourier_motzkin(ineqs, k)
    if t is None:
        return None
    x = []
    for i in range(ncols):
        xi = sum((Fraction(kb[j][i].a) * t[j] for j in range(k)), Fraction(0))
        if xi <= 0:
            return None
        x.append(xi)
    return tuple(x)


def _fourier_motzkin(ineqs, nvars: int):
    """Feasible point of {a·t >= b} or None, found by variable elimination."""
    snapshots = []
    current = [(list(a), b) for a, b in ineqs]
    for v in range(nvars - 1, -1, -1):
        snapshots.append((v, [(list(a), b) for a, b in current]))
        pos = [(a, b) for a, b in current if a[v] > 0]
        neg = [(a, b) for a, b in current if a[v] < 0]
        zero = [(a, b) for a, b in current if a[v] == 0]
        nxt = list(zero)
        for ap, bp in pos:
            for an, bn in neg:
                # eliminate t_v between ap·t >= bp and an·t >= bn
                coeff = [ap[i] / ap[v] - an[i] / an[v] for i in range(nvars)]
                rhs = bp / ap[v] - bn / an[v]
                nxt.append((coeff, rhs))
        current = nxt
    for a, b in current:
        if all(c == 0 for c in a) and b > 0:
            return None
    t = [Fraction(0)] * nvars
    for v, system in reversed(snapshots):
        lo = None
        hi = None
        for a, b in system:
            if a[v] == 0:
                continue
            rest = sum((a[i] * t[i] for i in range(nvars) if i != v), Fraction(0))
            bound = (b - rest) / a[v]
            if a[v] > 0:
                lo = bound if lo is None else max(lo, bound)
            else:
                hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            t[v] = (lo + hi) / 2
        elif lo is not None:
            t[v] = lo
        elif hi is not None:
            t[v] = hi
        else:
            t[v] = Fraction(0)
    return t


def scale_to_leading_one(v: QVector) -> QVector:
    """Normalize so the first non-zero coordinate is 1."""
    for x in v:
        if not x.is_zero():
            inv = x.inverse()
            return tuple(y * inv for y in v)
    return v
