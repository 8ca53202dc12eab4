"""Structure-constant algebras over a polynomial ring.

An algebra is a free module over its base ring with a distinguished basis
and a multiplication table giving each product of basis elements as a
coefficient vector.  Tables for the two built-in singularities are derived
from their defining relations by a bounded word-rewriting pass and then
*checked* (identity element, closure, associativity) rather than assumed.

The module also provides the reduced trace / trace-form discriminant used
to witness ramification divisors, quotients by two-sided ideals generated
by basis elements, and a small search for per-component radical generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from . import expr
from .linalg import det_bareiss
from .polyring import (MixedRings, Polynomial, PolyRing, _associates,
                       divide_exact, gcd_univariate)
from .scalars import BadSpecialization, FieldContext, ScalarElement, Specialization


class AlgebraError(Exception):
    pass


class ClosureFailure(AlgebraError):
    pass


class MixedAlgebras(AlgebraError):
    pass


class NotAnIdeal(AlgebraError):
    pass


class CharDividesDegree(AlgebraError):
    pass


class ParseError(AlgebraError):
    pass


class StructureConstantAlgebra:
    """Free module with a multiplication table; immutable after build."""

    def __init__(self, ring: PolyRing, basis: Sequence[str],
                 table: Sequence[Sequence[Sequence[Polynomial]]],
                 unit_index: int = 0):
        self.ring = ring
        self.basis = tuple(basis)
        self.unit_index = unit_index
        n = len(self.basis)
        self.table = tuple(tuple(tuple(table[i][j]) for j in range(n))
                           for i in range(n))
        for i in range(n):
            for j in range(n):
                if len(self.table[i][j]) != n:
                    raise ClosureFailure("table row of wrong length")
        self._index = {name: i for i, name in enumerate(self.basis)}
        # the unit must act as a two-sided identity on the basis
        for i in range(n):
            left = self.table[self.unit_index][i]
            right = self.table[i][self.unit_index]
            expected = tuple(self.ring.one() if k == i else self.ring.zero()
                             for k in range(n))
            if tuple(left) != expected or tuple(right) != expected:
                raise ClosureFailure(
                    f"unit does not act as identity on basis element {self.basis[i]}")

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.ring.zero() for _ in self.basis))

    def one(self) -> "AlgebraElement":
        return self.gen(self.basis[self.unit_index])

    def gen(self, name: str) -> "AlgebraElement":
        i = self._index[name]
        coords = tuple(self.ring.one() if k == i else self.ring.zero()
                       for k in range(self.dimension))
        return AlgebraElement(self, coords)

    def element(self, coords: Sequence[Polynomial]) -> "AlgebraElement":
        coords = tuple(coords)
        if len(coords) != self.dimension:
            raise AlgebraError("coordinate vector of wrong length")
        return AlgebraElement(self, coords)

    def scalar(self, value) -> "AlgebraElement":
        """Embed a base-ring element (or int / scalar) as value * 1."""
        if isinstance(value, int):
            value = self.ring.from_int(value)
        elif isinstance(value, ScalarElement):
            value = self.ring.from_scalar(value)
        coords = tuple(value if k == self.unit_index else self.ring.zero()
                       for k in range(self.dimension))
        return AlgebraElement(self, coords)

    def multiply(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.algebra is not self or b.algebra is not self:
            raise MixedAlgebras("elements of different algebras")
        n = self.dimension
        out = [self.ring.zero()] * n
        for i, ca in enumerate(a.coords):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b.coords):
                if cb.is_zero():
                    continue
                scale = ca * cb
                row = self.table[i][j]
                for k in range(n):
                    if not row[k].is_zero():
                        out[k] = out[k] + scale * row[k]
        return AlgebraElement(self, tuple(out))

    def check_associativity(self) -> bool:
        """(b_i b_j) b_k == b_i (b_j b_k) for all basis triples."""
        n = self.dimension
        gens = [self.gen(name) for name in self.basis]
        products = [[self.multiply(gens[i], gens[j]) for j in range(n)]
                    for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    left = self.multiply(products[i][j], gens[k])
                    right = self.multiply(gens[i], products[j][k])
                    if left.coords != right.coords:
                        return False
        return True

    def is_commutative(self) -> bool:
        n = self.dimension
        for i in range(n):
            for j in range(i + 1, n):
                if self.table[i][j] != self.table[j][i]:
                    return False
        return True

    def map_coefficients(self, func, target_ring: PolyRing) -> "StructureConstantAlgebra":
        n = self.dimension
        table = [[[self.table[i][j][k].map_coefficients(func, target_ring)
                   for k in range(n)] for j in range(n)] for i in range(n)]
        return StructureConstantAlgebra(target_ring, self.basis, table,
                                        self.unit_index)

    def substitute_base(self, bindings: Mapping[str, Polynomial],
                        target_ring: PolyRing) -> "StructureConstantAlgebra":
        n = self.dimension
        table = [[[self.table[i][j][k].substitute(bindings)
                   for k in range(n)] for j in range(n)] for i in range(n)]
        return StructureConstantAlgebra(target_ring, self.basis, table,
                                        self.unit_index)

    def mutate(self, i: int, j: int, k: int, delta: Polynomial) -> "StructureConstantAlgebra":
        """Copy of the algebra with table[i][j][k] += delta (for mutation tests).

        Skips the unit-identity check so that broken tables can be probed."""
        clone = object.__new__(StructureConstantAlgebra)
        clone.ring = self.ring
        clone.basis = self.basis
        clone.unit_index = self.unit_index
        table = [[list(row) for row in rows] for rows in self.table]
        table[i][j][k] = table[i][j][k] + delta
        clone.table = tuple(tuple(tuple(row) for row in rows) for rows in table)
        clone._index = dict(self._index)
        return clone

    def dump(self) -> dict:
        """JSON-friendly description (basis labels + printed table entries)."""
        entries = {}
        for i, a in enumerate(self.basis):
            for j, b in enumerate(self.basis):
                row = {self.basis[k]: str(c)
                       for k, c in enumerate(self.table[i][j])
                       if not c.is_zero()}
                entries[f"{a}*{b}"] = row
        return {
            "ring": {"variables": list(self.ring.variables),
                     "invertible": sorted(self.ring.invertible)},
            "basis": list(self.basis),
            "unit": self.basis[self.unit_index],
            "table": entries,
        }


class AlgebraElement:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra: StructureConstantAlgebra,
                 coords: tuple[Polynomial, ...]):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra is not self.algebra:
                raise MixedAlgebras("elements of different algebras")
            return other
        if isinstance(other, (int, ScalarElement, Polynomial)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlgebraElement(self.algebra,
                              tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.multiply(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.algebra.multiply(other, self)

    def __truediv__(self, other):
        if isinstance(other, int):
            inv = self.algebra.ring.ctx.inverse(self.algebra.ring.ctx.from_int(other))
            return self * self.algebra.scalar(inv)
        if isinstance(other, AlgebraElement):
            value = other.central_value()
            return self * self.algebra.scalar(value.unit_inverse())
        return NotImplemented

    def central_value(self) -> Polynomial:
        """The base-ring coefficient when the element is c * 1."""
        for k, c in enumerate(self.coords):
            if k != self.algebra.unit_index and not c.is_zero():
                raise AlgebraError("element is not central scalar")
        return self.coords[self.algebra.unit_index]

    def __pow__(self, n: int):
        if n < 0:
            raise AlgebraError("negative powers are not defined")
        acc = self.algebra.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra is other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((id(self.algebra), self.coords))

    def __str__(self):
        pieces = []
        for k, (name, c) in enumerate(zip(self.algebra.basis, self.coords)):
            if c.is_zero():
                continue
            text = str(c)
            if k == self.algebra.unit_index:
                pieces.append(text)
            elif text == "1":
                pieces.append(name)
            elif text == "-1":
                pieces.append(f"-{name}")
            elif "+" in text[1:] or "-" in text[1:] or "/" in text:
                pieces.append(f"({text})*{name}")
            else:
                pieces.append(f"{text}*{name}")
        if not pieces:
            return "0"
        out = pieces[0]
        for piece in pieces[1:]:
            out += piece if piece.startswith("-") else "+" + piece
        return out

    def __repr__(self):
        return f"<alg {self}>"


# ---------------------------------------------------------------------------
# word rewriting: tables from two-generator presentations


@dataclass(frozen=True)
class TwoGeneratorPresentation:
    """Relations  x^xp = x_value,  y^yp = y_value  (central base-ring
    values) and a swap rule  y x = sum of coeff * x^a y^b."""

    ring: PolyRing
    x_power: int
    y_power: int
    x_value: Polynomial
    y_value: Polynomial
    swap: tuple[tuple[Polynomial, tuple[int, int]], ...]

    def normal_monomials(self) -> list[tuple[int, int]]:
        return [(a, b) for b in range(self.y_power) for a in range(self.x_power)]


def normalize_word(pres: TwoGeneratorPresentation, word: str) -> dict:
    """Rewrite a word in x, y to a combination of normal monomials x^a y^b.

    Returns a dict (a, b) -> base-ring coefficient.  Terminates because each
    swap moves an x strictly left and power reduction shortens the word.
    """
    result: dict[tuple[int, int], Polynomial] = {}
    stack = [(pres.ring.one(), word)]
    while stack:
        coeff, w = stack.pop()
        pos = w.find("yx")
        if pos >= 0:
            for s_coeff, (sa, sb) in pres.swap:
                nw = w[:pos] + "x" * sa + "y" * sb + w[pos + 2:]
                stack.append((coeff * s_coeff, nw))
            continue
        a = w.count("x")
        b = w.count("y")
        while a >= pres.x_power:
            coeff = coeff * pres.x_value
            a -= pres.x_power
        while b >= pres.y_power:
            coeff = coeff * pres.y_value
            b -= pres.y_power
        key = (a, b)
        result[key] = result.get(key, pres.ring.zero()) + coeff
    return {k: v for k, v in result.items() if not v.is_zero()}


def algebra_from_presentation(pres: TwoGeneratorPresentation,
                              labels: Mapping[tuple[int, int], str],
                              order: Sequence[tuple[int, int]],
                              ) -> StructureConstantAlgebra:
    """Derive the full multiplication table by rewriting all basis products."""
    order = list(order)
    index = {m: i for i, m in enumerate(order)}
    n = len(order)
    zero = pres.ring.zero()
    table = [[None] * n for _ in range(n)]
    for i, (a1, b1) in enumerate(order):
        for j, (a2, b2) in enumerate(order):
            word = "x" * a1 + "y" * b1 + "x" * a2 + "y" * b2
            normal = normalize_word(pres, word)
            row = [zero] * n
            for mono, coeff in normal.items():
                if mono not in index:
                    raise ClosureFailure(
                        f"product leaves the chosen basis at {mono}")
                row[index[mono]] = coeff
            table[i][j] = row
    basis = [labels[m] for m in order]
    return StructureConstantAlgebra(pres.ring, basis, table,
                                    unit_index=index[(0, 0)])


# ---------------------------------------------------------------------------
# the two built-in orders


def build_example_algebra(which: str, ctx: FieldContext) -> StructureConstantAlgebra:
    """Construct the rank-4 (quaternion-type) or rank-9 (cubic-type) order
    over ctx[u, v] from its defining relations and verify table closure.

    ``which`` is ``"ex1"`` or ``"ex2"``.  The context must carry the matching
    algebraic data (a square root of 1 + lam, resp. a primitive cube root of
    unity); in specialized mode the parameter must avoid 0 and 1.
    """
    ring = PolyRing(ctx, ("u", "v"))
    u, v = ring.var("u"), ring.var("v")
    if which == "ex1":
        eps = _require_gen(ctx, "square root of 1+lam",
                           lambda g: g * g == _one_plus_param(ctx))
        lam = _param_poly(ring)
        _guard_parameter(ctx)
        eps_p = ring.from_scalar(eps)
        pres = TwoGeneratorPresentation(
            ring=ring, x_power=2, y_power=2,
            x_value=v,
            y_value=u * (u * u + lam * v * v),
            swap=((ring.from_int(2) * eps_p * u * v, (0, 0)),
                  (-ring.one(), (1, 1))),
        )
        labels = {(0, 0): "1", (1, 0): "x", (0, 1): "y", (1, 1): "z"}
        order = [(0, 0), (1, 0), (0, 1), (1, 1)]
        algebra = algebra_from_presentation(pres, labels, order)
    elif which == "ex2":
        zeta = _require_gen(ctx, "primitive cube root of unity",
                            lambda g: g ** 3 == ctx.one() and g != ctx.one())
        pres = TwoGeneratorPresentation(
            ring=ring, x_power=3, y_power=3,
            x_value=v,
            y_value=u * (u - v),
            swap=((ring.from_scalar(zeta * zeta), (1, 1)),),
        )
        labels = {(a, b): _monomial_label(a, b) for a in range(3) for b in range(3)}
        order = [(a, b) for b in range(3) for a in range(3)]
        algebra = algebra_from_presentation(pres, labels, order)
    else:
        raise ValueError(f"unknown example {which!r}")
    if not algebra.check_associativity():  # pragma: no cover - defensive
        raise ClosureFailure("derived table is not associative")
    return algebra


def _monomial_label(a: int, b: int) -> str:
    if (a, b) == (0, 0):
        return "1"
    xs = "" if a == 0 else ("x" if a == 1 else f"x{a}")
    ys = "" if b == 0 else ("y" if b == 1 else f"y{b}")
    return xs + ys


def _require_gen(ctx: FieldContext, description: str, predicate) -> ScalarElement:
    """A generator (or bound constant, in split prime mode) with the stated
    property."""
    for name, value in ctx._scalar_env().items():
        if predicate(value):
            return value
    raise BadSpecialization(f"field context provides no {description}")


def _one_plus_param(ctx: FieldContext) -> ScalarElement:
    if ctx.param is not None:
        return ctx.one() + ctx.param_element()
    bound = dict(ctx.descriptor.bindings)
    if "lam" in bound:
        return ctx.one() + ctx.from_int(bound["lam"])
    raise BadSpecialization("context carries no parameter lam")


def _param_poly(ring: PolyRing) -> Polynomial:
    ctx = ring.ctx
    if ctx.param is not None:
        return ring.from_scalar(ctx.param_element())
    bound = dict(ctx.descriptor.bindings)
    return ring.from_int(bound["lam"])


def _guard_parameter(ctx: FieldContext):
    """The quaternion-type order requires lam distinct from 0 and 1."""
    if ctx.param is not None:
        return
    value = dict(ctx.descriptor.bindings).get("lam")
    if value is None:
        raise BadSpecialization("context carries no parameter lam")
    if value % ctx.characteristic in (0, 1 % ctx.characteristic):
        raise BadSpecialization(
            f"parameter lam = {value} collides with 0 or 1 modulo "
            f"{ctx.characteristic}")


# ---------------------------------------------------------------------------
# identities, traces, discriminants


def _identity_env(alg: StructureConstantAlgebra) -> dict:
    env = {}
    for name in alg.ring.variables:
        env[name] = alg.scalar(alg.ring.var(name))
    for name, value in alg.ring.ctx._scalar_env().items():
        if name not in env:
            env[name] = alg.scalar(alg.ring.from_scalar(value))
    for name in alg.basis:
        if name not in env and name.isidentifier():
            env[name] = alg.gen(name)
    return env


def algebra_expression(alg: StructureConstantAlgebra, text: str) -> AlgebraElement:
    """Evaluate an expression over basis labels, ring variables and scalar
    generators inside the algebra (order of factors is preserved)."""
    try:
        value = expr.parse_eval(text, _identity_env(alg),
                                lambda n: alg.scalar(n))
    except expr.ExprError as error:
        raise ParseError(str(error)) from error
    if not isinstance(value, AlgebraElement):
        raise ParseError(f"{text!r} did not evaluate to an algebra element")
    return value


def verify_identity(alg: StructureConstantAlgebra, lhs: str, rhs: str) -> bool:
    return (algebra_expression(alg, lhs) - algebra_expression(alg, rhs)).is_zero()


def reduced_trace(a: AlgebraElement) -> Polynomial:
    """Trace of the left regular representation scaled by 1/deg, where deg
    is the square root of the module rank (2 and 3 for the built-ins)."""
    alg = a.algebra
    n = alg.dimension
    deg = round(n ** 0.5)
    if deg * deg != n:
        raise AlgebraError(f"rank {n} is not a perfect square")
    char = alg.ring.ctx.characteristic
    if char and deg % char == 0:
        raise CharDividesDegree(
            f"characteristic {char} divides the algebra degree {deg}")
    total = alg.ring.zero()
    for k in range(n):
        product = alg.multiply(a, alg.gen(alg.basis[k]))
        total = total + product.coords[k]
    scale = alg.ring.ctx.inverse(alg.ring.ctx.from_int(deg))
    return total * alg.ring.from_scalar(scale)


def trace_form_discriminant(alg: StructureConstantAlgebra) -> Polynomial:
    """Determinant of the Gram matrix trd(b_i b_j); its radical support
    witnesses the ramification divisor of the order."""
    n = alg.dimension
    gens = [alg.gen(name) for name in alg.basis]
    gram = [[reduced_trace(alg.multiply(gens[i], gens[j])) for j in range(n)]
            for i in range(n)]
    return det_bareiss(gram, alg.ring)


def matrix_units_algebra(ring: PolyRing, size: int = 2) -> StructureConstantAlgebra:
    """The split algebra of size x size matrix units over the base ring."""
    labels = [f"e{i}{j}" for i in range(size) for j in range(size)]
    n = size * size
    zero, one = ring.zero(), ring.one()

    def idx(i, j):
        return i * size + j

    table = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(size):
        for j in range(size):
            for k in range(size):
                for l in range(size):
                    if j == k:
                        table[idx(i, j)][idx(k, l)][idx(i, l)] = one
    unit_rows = [[one if idx(i, i) == m else zero for m in range(n)]
                 for i in range(size)]
    # matrix units have no single basis unit; adjoin the identity by change
    # of basis: replace e00 with e00 + e11 + ... so the table keeps a unit.
    algebra_basis = ["one" if (i, j) == (0, 0) else f"e{i}{j}"
                     for i in range(size) for j in range(size)]
    transform = [[one if a == b else zero for b in range(n)] for a in range(n)]
    for i in range(1, size):
        transform[0][idx(i, i)] = one
    inverse = [[one if a == b else zero for b in range(n)] for a in range(n)]
    for i in range(1, size):
        inverse[0][idx(i, i)] = -one
    new_table = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            coords = [zero] * n
            for p in range(n):
                if transform[a][p].is_zero():
                    continue
                for q in range(n):
                    if transform[b][q].is_zero():
                        continue
                    scale = transform[a][p] * transform[b][q]
                    for k in range(n):
                        if not table[p][q][k].is_zero():
                            coords[k] = coords[k] + scale * table[p][q][k]
            row = [zero] * n
            for k in range(n):
                if coords[k].is_zero():
                    continue
                for m in range(n):
                    if not inverse[k][m].is_zero():
                        row[m] = row[m] + coords[k] * inverse[k][m]
            new_table[a][b] = row
    return StructureConstantAlgebra(ring, algebra_basis, new_table, unit_index=0)


# ---------------------------------------------------------------------------
# quotients by two-sided ideals generated by basis elements


@dataclass
class QuotientResult:
    algebra: StructureConstantAlgebra
    commutative: bool
    killed: tuple[str, ...]
    killed_variable: Optional[str]


def quotient_by_generators(alg: StructureConstantAlgebra,
                           kill: Iterable[str]) -> QuotientResult:
    """Quotient by the two-sided ideal generated by the named basis elements.

    The ideal is saturated iteratively.  Every product of a killed element
    with a basis element lies in the ideal; its coordinates on killed
    elements are discarded, coordinates whose coefficient is already known
    to lie in the contracted base ideal are discarded, and what remains must
    eventually reduce to nothing.  A remaining single coordinate is direct
    evidence: a unit coefficient kills that basis element outright, other
    coefficients feed a per-element pool whose Bezout combinations may kill
    it, or whose principal reduction (w) records the contracted base ideal.
    Survivor coordinates must all contract to one ideal (w) for a single
    ring variable w (or to zero), and w is removed from the base ring.
    Raises :class:`NotAnIdeal` when this structure fails (e.g. killing the
    unit, or a reduction that breaks associativity)."""
    ring = alg.ring
    ctx = ring.ctx
    n = alg.dimension
    killed = set()
    for name in kill:
        if name not in alg._index:
            raise NotAnIdeal(f"unknown basis element {name!r}")
        killed.add(alg._index[name])
    if alg.unit_index in killed:
        raise NotAnIdeal("killing the unit collapses the algebra")

    pools: dict[int, list[Polynomial]] = {}
    principal: dict[int, str] = {}

    def products_of_killed():
        for k in sorted(killed):
            for b in range(n):
                yield alg.table[k][b]
                yield alg.table[b][k]

    def open_terms(row):
        terms = []
        for m, coeff in enumerate(row):
            if m in killed or coeff.is_zero():
                continue
            w = principal.get(m)
            if w is not None and divide_exact(coeff, ring.var(w)) is not None:
                continue
            terms.append((m, coeff))
        return terms

    changed = True
    while changed:
        changed = False
        for row in products_of_killed():
            terms = open_terms(row)
            if len(terms) != 1:
                continue
            m, coeff = terms[0]
            if coeff.is_scalar():
                killed.add(m)
                pools.pop(m, None)
                principal.pop(m, None)
                changed = True
                break
            pool = pools.setdefault(m, [])
            if any(_associates(coeff, entry) for entry in pool):
                continue
            pool.append(coeff)
            changed = True
            if _univariate_bezout_one(pool):
                killed.add(m)
                pools.pop(m, None)
                principal.pop(m, None)
                break
            w = _principal_variable(pool)
            if w is not None:
                principal[m] = w
        if alg.unit_index in killed:
            raise NotAnIdeal("ideal contains the unit")

    # every ideal product must now reduce to nothing
    for row in products_of_killed():
        if open_terms(row):
            raise NotAnIdeal(
                "ideal products do not reduce to the killed elements and a "
                "principal base ideal")

    survivors = [i for i in range(n) if i not in killed]
    contracted = {principal[m] for m in survivors if m in principal}
    if len(contracted) > 1:
        raise NotAnIdeal(
            f"survivors contract to different base ideals {sorted(contracted)}")
    killed_variable = next(iter(contracted)) if contracted else None
    if killed_variable is not None:
        missing = [alg.basis[m] for m in survivors if principal.get(m) != killed_variable]
        if missing:
            raise NotAnIdeal(
                f"no evidence that the base ideal acts on survivors {missing}")

    new_vars = tuple(v for v in ring.variables if v != killed_variable)
    new_ring = PolyRing(ctx, new_vars,
                        invertible=ring.invertible & set(new_vars))
    bindings = {v: (new_ring.var(v) if v != killed_variable else new_ring.zero())
                for v in ring.variables}

    def reduce_poly(p: Polynomial) -> Polynomial:
        return p.substitute(bindings)

    new_n = len(survivors)
    table = [[None] * new_n for _ in range(new_n)]
    for a, i in enumerate(survivors):
        for b, j in enumerate(survivors):
            row = [None] * new_n
            for c, m in enumerate(survivors):
                row[c] = reduce_poly(alg.table[i][j][m])
            table[a][b] = row
    basis = [alg.basis[i] for i in survivors]
    unit_index = survivors.index(alg.unit_index)
    try:
        quotient = StructureConstantAlgebra(new_ring, basis, table, unit_index)
    except ClosureFailure as error:
        raise NotAnIdeal(f"reduction breaks the unit law: {error}") from error
    if not quotient.check_associativity():
        raise NotAnIdeal("reduction breaks associativity")
    return QuotientResult(
        algebra=quotient,
        commutative=quotient.is_commutative(),
        killed=tuple(alg.basis[i] for i in sorted(killed)),
        killed_variable=killed_variable,
    )


def _univariate_bezout_one(coeffs: Sequence[Polynomial]) -> bool:
    """True when the coefficients are univariate in one common variable and
    generate the unit ideal there (gcd is a nonzero constant)."""
    used = set()
    for c in coeffs:
        used.update(c.variables_used())
    if len(used) > 1:
        return False
    if not used:
        return any(not c.is_zero() for c in coeffs)
    acc = coeffs[0].ring.zero()
    for c in coeffs:
        acc = gcd_univariate(acc, c)
    return acc.is_scalar() and not acc.is_zero()


def _principal_variable(coeffs: Sequence[Polynomial]) -> Optional[str]:
    """Find a ring variable w with ideal(coeffs) == (w): every coefficient
    divisible by w and the cofactors generating 1 in the remaining
    (univariate) variable."""
    ring = coeffs[0].ring
    for name in ring.variables:
        cofactors = []
        ok = True
        for c in coeffs:
            q = divide_exact(c, ring.var(name))
            if q is None:
                ok = False
                break
            cofactors.append(q)
        if not ok:
            continue
        if any(c.is_scalar() and not c.is_zero() for c in cofactors):
            return name
        if _univariate_bezout_one(cofactors):
            return name
    return None


# ---------------------------------------------------------------------------
# ramification witnesses (per-component radical generators)


def ramification_witness(alg: StructureConstantAlgebra, component: Polynomial,
                         monomial_degree: int = 2) -> Optional[AlgebraElement]:
    """Search for w with w^deg == 0 (mod component) but w != 0 (mod
    component), over combinations b_i + s * m * b_j with s running over
    signed scalar generators and m over small base-ring monomials."""
    ring = alg.ring
    ctx = ring.ctx
    n = alg.dimension
    deg = round(n ** 0.5)
    gens = [alg.gen(name) for name in alg.basis]

    def reduced_to_zero(element: AlgebraElement) -> bool:
        return all(divide_exact(c, component) is not None
                   for c in element.coords)

    def witnesses(candidate: AlgebraElement) -> bool:
        if reduced_to_zero(candidate):
            return False
        return reduced_to_zero(candidate ** deg)

    for i in range(n):
        if i == alg.unit_index:
            continue
        if witnesses(gens[i]):
            return gens[i]
    scalars = [ctx.one(), -ctx.one()]
    for value in ctx._scalar_env().values():
        scalars.extend((value, -value))
    monomials = []
    nv = len(ring.variables)
    for total in range(0, monomial_degree + 1):
        for e1 in range(total + 1):
            exps = [0] * nv
            if nv >= 2:
                exps[0], exps[1] = e1, total - e1
            elif nv == 1:
                if e1 != total:
                    continue
                exps[0] = total
            monomials.append(ring.monomial(tuple(exps)))
    for i in range(n):
        if i == alg.unit_index:
            continue
        for j in range(n):
            if j == i:
                continue
            for s in scalars:
                for m in monomials:
                    candidate = gens[i] + alg.scalar(m * ring.from_scalar(s)) * gens[j]
                    if witnesses(candidate):
                        return candidate
    return None


# ---------------------------------------------------------------------------
# specialization of a whole algebra


def specialize_algebra(alg: StructureConstantAlgebra,
                       spec: Specialization) -> StructureConstantAlgebra:
    target_ring = PolyRing(spec.target, alg.ring.variables,
                           invertible=alg.ring.invertible)
    return alg.map_coefficients(spec, target_ring)
