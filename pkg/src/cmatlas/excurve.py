"""Plane-curve checks for the reduction cycle.

The quotient of a chart order by its reduction ideal is a commutative
algebra k[t][w] / (w^n - c(t)); this module extracts that superelliptic
chart, decides affine smoothness (c squarefree), computes the genus by the
ramified-cover count, checks normal crossings for line arrangements, and
classifies curve types into the tame/wild dichotomy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Union

from .polyring import Polynomial, PolyRing, gcd_univariate
from .structalg import QuotientResult, StructureConstantAlgebra


class CurveError(Exception):
    pass


class NotCommutative(CurveError):
    pass


class NotHyperellipticShape(CurveError):
    pass


class CharNotCoprime(CurveError):
    pass


class UnsupportedShape(CurveError):
    pass


class UnsupportedFactor(CurveError):
    pass


@dataclass(frozen=True)
class PlaneCurveChart:
    """Affine chart  fiber_var^n = c(base_var)  with n in {2, 3}."""

    base_var: str
    fiber_var: str
    n: int
    c: Polynomial

    def __post_init__(self):
        if self.n < 2:
            raise UnsupportedShape("cover degree must be at least 2")
        if self.c.is_zero():
            raise UnsupportedShape("branch polynomial must be nonzero")

    def equation(self) -> str:
        return f"{self.fiber_var}^{self.n} - ({self.c})"


@dataclass(frozen=True)
class CurveDescriptor:
    """Curve type consumed by the tame/wild classifier."""

    kind: Literal["smooth-elliptic", "kodaira-cycle", "other"]
    cycle_length: Optional[int] = None
    tag: Optional[str] = None

    def __post_init__(self):
        if self.kind == "kodaira-cycle" and (self.cycle_length is None
                                             or self.cycle_length < 1):
            raise CurveError("kodaira cycle length must be >= 1")

    @staticmethod
    def parse(text: str) -> "CurveDescriptor":
        if text == "smooth-elliptic":
            return CurveDescriptor("smooth-elliptic")
        if text.startswith("kodaira:"):
            return CurveDescriptor("kodaira-cycle", cycle_length=int(text[8:]))
        if text.startswith("other:"):
            return CurveDescriptor("other", tag=text[6:])
        raise CurveError(f"cannot parse curve descriptor {text!r}")

    def __str__(self):
        if self.kind == "smooth-elliptic":
            return "smooth-elliptic"
        if self.kind == "kodaira-cycle":
            return f"kodaira:{self.cycle_length}"
        return f"other:{self.tag}"


def curve_from_quotient(q: Union[QuotientResult, StructureConstantAlgebra],
                        ) -> PlaneCurveChart:
    """Extract the superelliptic chart from a commutative quotient whose
    basis is 1, w, ..., w^{n-1} up to unit scalars, with w^n central."""
    alg = q.algebra if isinstance(q, QuotientResult) else q
    if not alg.is_commutative():
        raise NotCommutative("quotient algebra is not commutative")
    n = alg.dimension
    if n < 2:
        raise NotHyperellipticShape("quotient has rank < 2")
    if len(alg.ring.variables) != 1:
        raise NotHyperellipticShape(
            f"quotient base ring has variables {alg.ring.variables}; "
            "expected exactly one")
    base_var = alg.ring.variables[0]
    for candidate in alg.basis:
        if candidate == alg.basis[alg.unit_index]:
            continue
        w = alg.gen(candidate)
        power = alg.one()
        seen = {alg.unit_index}
        ok = True
        for _ in range(n - 1):
            power = alg.multiply(power, w)
            support = [(k, c) for k, c in enumerate(power.coords)
                       if not c.is_zero()]
            if len(support) != 1:
                ok = False
                break
            k, coeff = support[0]
            if k in seen or not (coeff.is_scalar() and not coeff.is_zero()):
                ok = False
                break
            seen.add(k)
        if not ok:
            continue
        top = alg.multiply(power, w)
        support = [(k, c) for k, c in enumerate(top.coords) if not c.is_zero()]
        if len(support) != 1 or support[0][0] != alg.unit_index:
            continue
        c = support[0][1]
        if c.is_zero():
            continue
        return PlaneCurveChart(base_var=base_var, fiber_var=candidate,
                               n=n, c=c)
    raise NotHyperellipticShape(
        "no basis element generates the quotient as successive powers")


def check_smooth(curve: PlaneCurveChart) -> bool:
    """Affine smoothness of  w^n = c  (char coprime to n): c squarefree."""
    char = curve.c.ring.ctx.characteristic
    if char and curve.n % char == 0:
        raise CharNotCoprime(
            f"characteristic {char} divides the cover degree {curve.n}")
    derivative = curve.c.derivative(curve.base_var)
    g = gcd_univariate(curve.c, derivative)
    return g.is_scalar() and not g.is_zero()


def genus(curve: PlaneCurveChart) -> int:
    """Genus of the smooth projective model of  w^n = c(t),  n prime.

    Each simple root of c is totally ramified; when n does not divide
    deg(c) the point at infinity is one more totally ramified point, giving
    2g - 2 = -2n + B(n - 1) for B branch points.
    """
    if curve.n not in (2, 3):
        raise UnsupportedShape(f"cover degree {curve.n} is not a supported prime")
    if not check_smooth(curve):
        raise UnsupportedShape("branch polynomial is not squarefree")
    m = curve.c.total_degree()
    branch = m + (1 if m % curve.n else 0)
    doubled = branch * (curve.n - 1) - 2 * curve.n + 2
    return doubled // 2


def _line_data(factor: Polynomial):
    ring = factor.ring
    if len(ring.variables) != 2:
        raise UnsupportedFactor("factors must live in a two-variable chart ring")
    if factor.is_zero() or factor.total_degree() != 1:
        raise UnsupportedFactor(f"factor {factor} is not a line")
    a = factor.coefficient((1, 0))
    b = factor.coefficient((0, 1))
    c = factor.coefficient((0, 0))
    return a, b, c


def check_normal_crossings(factors: Sequence[Polynomial]) -> bool:
    """Normal crossings for a product of affine lines: pairwise distinct,
    transverse intersections, and no point on three lines.  Lines that are
    proportional (a repeated component) fail; parallel distinct lines simply
    do not meet."""
    if not factors:
        return True
    ctx = factors[0].ring.ctx
    data = [_line_data(f) for f in factors]
    for i in range(len(data)):
        for j in range(i + 1, len(data)):
            a1, b1, c1 = data[i]
            a2, b2, c2 = data[j]
            det = a1 * b2 - a2 * b1
            if det.is_zero():
                if (a1 * c2 - a2 * c1).is_zero() and (b1 * c2 - b2 * c1).is_zero():
                    return False  # coincident components
                continue  # parallel, never meet; transversality vacuous
    points = []
    for i in range(len(data)):
        for j in range(i + 1, len(data)):
            a1, b1, c1 = data[i]
            a2, b2, c2 = data[j]
            det = a1 * b2 - a2 * b1
            if det.is_zero():
                continue
            inv = ctx.inverse(det)
            x = (-(c1 * b2) + c2 * b1) * inv
            y = (-(a1 * c2) + a2 * c1) * inv
            points.append((x, y))
    for x, y in points:
        through = 0
        for a, b, c in data:
            if (a * x + b * y + c).is_zero():
                through += 1
        if through >= 3:
            return False
    return True


def classify_tameness(descriptor: CurveDescriptor) -> str:
    """Tame exactly for a smooth elliptic curve or a Kodaira cycle."""
    if descriptor.kind in ("smooth-elliptic", "kodaira-cycle"):
        return "Tame"
    return "Wild"
