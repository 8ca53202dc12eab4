"""Indecomposable-bundle calculus on an elliptic curve and the
Cohen-Macaulay family enumerator.

A bundle class is determined by (rank, degree, determinant point); the
degree-zero point group is abstract (formal integer combinations of named
generators, with the empty combination as the distinguished base point
``infinity``).  Only equality, the infinity test and negation are ever
needed, so no curve group law is modelled.

Section counts follow the genus-one formulas: h0 of a summand is d for
d > 0, is 1 for degree zero with trivial determinant, and 0 otherwise; h1
comes from Riemann-Roch (h0 - h1 = d).  The reduction of the structure
order is the trivial line bundle; twisting by the dual of the conormal
bundle of the cycle sends (r, d, p) to (r, d - r, p).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class BundleError(Exception):
    pass


class NotFull(BundleError):
    pass


@dataclass(frozen=True, order=True)
class PicPoint:
    """Formal integer combination of named generators; () is infinity."""

    coeffs: tuple[tuple[str, int], ...] = ()

    @staticmethod
    def generator(name: str) -> "PicPoint":
        return PicPoint(((name, 1),))

    @staticmethod
    def of(mapping) -> "PicPoint":
        items = tuple(sorted((k, v) for k, v in dict(mapping).items() if v))
        return PicPoint(items)

    @property
    def is_infinity(self) -> bool:
        return not self.coeffs

    def __neg__(self) -> "PicPoint":
        return PicPoint(tuple((name, -k) for name, k in self.coeffs))

    def __add__(self, other: "PicPoint") -> "PicPoint":
        total = dict(self.coeffs)
        for name, k in other.coeffs:
            total[name] = total.get(name, 0) + k
        return PicPoint.of(total)

    def __str__(self):
        if not self.coeffs:
            return "inf"
        return "+".join(name if k == 1 else f"{k}{name}"
                        for name, k in self.coeffs)


INFINITY = PicPoint()


@dataclass(frozen=True, order=True)
class AtiyahBundle:
    """The indecomposable bundle of given rank, degree and determinant."""

    rank: int
    degree: int
    chern: PicPoint = INFINITY

    def __post_init__(self):
        if self.rank < 1:
            raise BundleError("rank must be positive")

    def __str__(self):
        return f"G({self.rank},{self.degree};{self.chern})"


TRIVIAL = AtiyahBundle(1, 0, INFINITY)


class BundleSum:
    """Finite direct sum, kept as a canonically sorted tuple of summands."""

    __slots__ = ("summands",)

    def __init__(self, summands: Iterable[AtiyahBundle]):
        object.__setattr__(self, "summands", tuple(sorted(summands)))

    def __setattr__(self, name, value):
        raise AttributeError("BundleSum is immutable")

    @staticmethod
    def of(*bundles: AtiyahBundle) -> "BundleSum":
        return BundleSum(bundles)

    def __add__(self, other: "BundleSum") -> "BundleSum":
        return BundleSum(self.summands + other.summands)

    def __eq__(self, other):
        return isinstance(other, BundleSum) and self.summands == other.summands

    def __hash__(self):
        return hash(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    @property
    def is_empty(self) -> bool:
        return not self.summands

    def total_rank(self) -> int:
        return sum(b.rank for b in self.summands)

    def total_degree(self) -> int:
        return sum(b.degree for b in self.summands)

    def __str__(self):
        if not self.summands:
            return "0"
        groups = []
        for bundle, block in itertools.groupby(self.summands):
            count = len(list(block))
            text = str(bundle)
            groups.append(text if count == 1 else f"{count}*{text}")
        return " + ".join(groups)

    def __repr__(self):
        return f"<bundle {self}>"


def h0(f: BundleSum) -> int:
    """Global sections; additive over summands."""
    total = 0
    for b in f:
        if b.degree > 0:
            total += b.degree
        elif b.degree == 0 and b.chern.is_infinity:
            total += 1
    return total


def h1(f: BundleSum) -> int:
    """First cohomology via Riemann-Roch on a genus-one curve: h0 - h1 = d
    summand-wise."""
    total = 0
    for b in f:
        piece = h0(BundleSum.of(b)) - b.degree
        total += piece
    return total


def is_ggg(f: BundleSum) -> bool:
    """Generic global generation holds iff it holds for every summand:
    positive degree, or the trivial line bundle itself."""
    return all(b.degree > 0 or (b.degree == 0 and b.rank == 1
                                and b.chern.is_infinity)
               for b in f)


def twist_I_dual(f: BundleSum) -> BundleSum:
    """Tensor with the dual conormal bundle of the cycle: (r,d;p) -> (r,d-r;p)."""
    return BundleSum(AtiyahBundle(b.rank, b.degree - b.rank, b.chern) for b in f)


def split_trivial(f: BundleSum) -> tuple[BundleSum, int]:
    """Split f as G + m * trivial; returns (G, m)."""
    m = sum(1 for b in f if b == TRIVIAL)
    rest = BundleSum(b for b in f if b != TRIVIAL)
    return rest, m


def is_full(f: BundleSum) -> bool:
    """Fullness criterion: with f = G + m*trivial, G must be generically
    globally generated with vanishing h1, and m >= h0 of the twist of G."""
    if f.is_empty:
        raise BundleError("empty sum is not a module reduction")
    g, m = split_trivial(f)
    if g.is_empty:
        return True
    return is_ggg(g) and h1(g) == 0 and m >= h0(twist_I_dual(g))


def is_indecomposable_cm(f: BundleSum) -> bool:
    """Indecomposability of the corresponding module.

    Requires fullness.  The reduction of an indecomposable module is either
    the trivial line bundle itself (the structure order) or G + m*trivial
    with G a *single* indecomposable and m exactly h0 of its twist: the
    correspondence is additive, so a decomposable G splits the module.
    """
    if not is_full(f):
        raise NotFull(f"{f} is not full")
    g, m = split_trivial(f)
    if g.is_empty:
        return m == 1
    if len(g) != 1:
        return False
    return m == h0(twist_I_dual(g))


def cm_rank(f: BundleSum) -> int:
    """Rank of the module corresponding to a full sum: the total rank."""
    if not is_full(f):
        raise NotFull(f"{f} is not full")
    return f.total_rank()


# ---------------------------------------------------------------------------
# enumeration


PARAM_POINT = "point"
PARAM_Z = "Z"
PARAM_Z_PUNCTURED = "Z-minus-infinity"

FLAG_BOUNDARY = "rank-one-boundary-class-absent-from-printed-list"


@dataclass(frozen=True)
class CMClass:
    """One family (or isolated class) of indecomposable Cohen-Macaulay
    modules of a fixed rank, identified by its reduced bundle."""

    bundle: BundleSum
    cm_rank: int
    parameter_space: str
    provenance: str
    m: int
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.cm_rank != self.bundle.total_rank():
            raise BundleError("cm_rank must equal the total bundle rank")

    def to_json(self) -> dict:
        return {
            "bundle": [[b.rank, b.degree, str(b.chern)] for b in self.bundle],
            "cm_rank": self.cm_rank,
            "parameter_space": self.parameter_space,
            "provenance": self.provenance,
            "m": self.m,
            "flags": list(self.flags),
        }


def enumerate_cm(n: int, generic: Optional[PicPoint] = None) -> list[CMClass]:
    """All families of indecomposable Cohen-Macaulay modules of rank n.

    For n >= 2: n-1 plain families G(n,d;.) with 0 < d < n over the full
    point group, one punctured family G(n,n;.) with nontrivial determinant,
    n-1 padded families G(r,n;.) + (n-r)*trivial with 1 <= r < n, and the
    isolated class G(n-1,n-1;inf) + trivial.  For n = 1: the structure
    order itself plus the punctured degree-one family.  The isolated class
    at n = 2 satisfies the fullness criterion but is absent from the
    printed classification (which requires rank > 1 there); it is emitted
    with an explanatory flag rather than silently kept or dropped.
    """
    if n < 1:
        raise BundleError("rank must be positive")
    point = generic if generic is not None else PicPoint.generator("p")
    classes: list[CMClass] = []
    if n == 1:
        classes.append(CMClass(BundleSum.of(TRIVIAL), 1, PARAM_POINT,
                               "free", m=1))
        classes.append(CMClass(BundleSum.of(AtiyahBundle(1, 1, point)), 1,
                               PARAM_Z_PUNCTURED, "punctured", m=0))
        return classes
    for d in range(1, n):
        classes.append(CMClass(BundleSum.of(AtiyahBundle(n, d, point)), n,
                               PARAM_Z, "plain", m=0))
    classes.append(CMClass(BundleSum.of(AtiyahBundle(n, n, point)), n,
                           PARAM_Z_PUNCTURED, "punctured", m=0))
    for r in range(1, n):
        padded = BundleSum.of(AtiyahBundle(r, n, point),
                              *([TRIVIAL] * (n - r)))
        classes.append(CMClass(padded, n, PARAM_Z, "padded", m=n - r))
    isolated = BundleSum.of(AtiyahBundle(n - 1, n - 1, INFINITY), TRIVIAL)
    flags = (FLAG_BOUNDARY,) if n == 2 else ()
    classes.append(CMClass(isolated, n, PARAM_POINT, "isolated", m=1,
                           flags=flags))
    return classes


def family_counts(classes: Sequence[CMClass]) -> dict:
    return {
        "Z": sum(1 for c in classes if c.parameter_space == PARAM_Z),
        "Z-minus-infinity": sum(1 for c in classes
                                if c.parameter_space == PARAM_Z_PUNCTURED),
        "isolated": sum(1 for c in classes if c.parameter_space == PARAM_POINT),
    }


def instantiate(cls: CMClass, points: Sequence[PicPoint],
                generic: PicPoint) -> set[BundleSum]:
    """Concrete bundles of a family over a finite point set: a Z-family
    ranges over all points, a punctured family skips infinity, an isolated
    class is itself."""
    if cls.parameter_space == PARAM_POINT:
        return {cls.bundle}
    if cls.parameter_space == PARAM_Z:
        pool = points
    else:
        pool = [p for p in points if not p.is_infinity]
    out = set()
    for p in pool:
        out.add(BundleSum(
            AtiyahBundle(b.rank, b.degree, p if b.chern == generic else b.chern)
            for b in cls.bundle))
    return out


def predicted_full_indecomposable(max_total_rank: int, max_degree: int,
                                  points: Sequence[PicPoint],
                                  generic: PicPoint) -> set[BundleSum]:
    """What the closed-form enumeration predicts inside the brute-force
    search bounds."""
    out: set[BundleSum] = set()
    for n in range(1, max_total_rank + 1):
        for cls in enumerate_cm(n, generic=generic):
            for bundle in instantiate(cls, points, generic):
                if all(abs(b.degree) <= max_degree for b in bundle):
                    out.add(bundle)
    return out


def brute_force_full(max_total_rank: int, max_degree: int,
                     points: Optional[Sequence[PicPoint]] = None,
                     ) -> set[BundleSum]:
    """Exhaustive oracle: generate every bundle sum within the bounds
    (Chern classes drawn from infinity and one generic symbol) and filter
    by the fullness and indecomposability predicates directly."""
    if max_total_rank < 1 or max_degree < 1:
        raise BundleError("bounds must be at least 1")
    if points is None:
        points = (INFINITY, PicPoint.generator("q"))
    pool = [AtiyahBundle(r, d, p)
            for r in range(1, max_total_rank + 1)
            for d in range(-max_degree, max_degree + 1)
            for p in points]
    pool.sort()
    found: set[BundleSum] = set()

    def extend(start: int, remaining: int, chosen: list[AtiyahBundle]):
        if chosen:
            candidate = BundleSum(chosen)
            if is_full(candidate) and is_indecomposable_cm(candidate):
                found.add(candidate)
        for i in range(start, len(pool)):
            if pool[i].rank <= remaining:
                chosen.append(pool[i])
                extend(i, remaining - pool[i].rank, chosen)
                chosen.pop()

    extend(0, max_total_rank, [])
    return found


# ---------------------------------------------------------------------------
# table rendering


def enumeration_rows(classes: Sequence[CMClass]) -> list[dict]:
    return [cls.to_json() for cls in classes]


def format_enumeration(n: int, classes: Sequence[CMClass]) -> str:
    lines = [f"rank {n} indecomposable Cohen-Macaulay families"]
    header = f"{'bundle':<34} {'space':<18} {'m':>2}  provenance"
    lines.append(header)
    lines.append("-" * len(header))
    for cls in classes:
        flag = "  [" + ", ".join(cls.flags) + "]" if cls.flags else ""
        lines.append(f"{str(cls.bundle):<34} {cls.parameter_space:<18} "
                     f"{cls.m:>2}  {cls.provenance}{flag}")
    counts = family_counts(classes)
    lines.append(f"Z-families: {counts['Z']}, punctured: "
                 f"{counts['Z-minus-infinity']}, isolated: {counts['isolated']}")
    return "\n".join(lines)
