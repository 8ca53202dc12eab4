"""Sparse multivariate polynomial and Laurent-polynomial arithmetic.

Rings are defined over a :class:`~cmatlas.scalars.FieldContext`.  A ring may
declare some variables invertible, in which case elements are Laurent
polynomials with negative exponents allowed exactly in those variables.
Terms are kept in a dict keyed by exponent tuples; the canonical term order
is graded lexicographic, so printed forms (and equality) are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Sequence

from . import expr
from .scalars import FieldContext, ScalarElement


class PolyError(Exception):
    pass


class MixedRings(PolyError):
    pass


class UnboundVariable(PolyError):
    pass


class ZeroDivisor(PolyError):
    pass


class NotInvertible(PolyError):
    pass


class PolyRing:
    """A polynomial (or Laurent) ring ``ctx[variables]``."""

    def __init__(self, ctx: FieldContext, variables: Sequence[str],
                 invertible: Iterable[str] = ()):
        self.ctx = ctx
        self.variables = tuple(variables)
        self.invertible = frozenset(invertible)
        unknown = self.invertible - set(self.variables)
        if unknown:
            raise PolyError(f"invertible variables {sorted(unknown)} not in ring")
        self._index = {name: i for i, name in enumerate(self.variables)}

    def __eq__(self, other):
        return (isinstance(other, PolyRing)
                and self.ctx.descriptor == other.ctx.descriptor
                and self.variables == other.variables
                and self.invertible == other.invertible)

    def __hash__(self):
        return hash((self.ctx.descriptor, self.variables, self.invertible))

    def __repr__(self):
        inv = f", invertible={sorted(self.invertible)}" if self.invertible else ""
        return f"PolyRing({self.ctx.descriptor.base}, {list(self.variables)}{inv})"

    @property
    def is_laurent(self) -> bool:
        return bool(self.invertible)

    def laurent(self, extra_invertible: Iterable[str] = ()) -> "PolyRing":
        return PolyRing(self.ctx, self.variables,
                        self.invertible | frozenset(extra_invertible))

    def polynomial(self, terms: Mapping[tuple, ScalarElement]) -> "Polynomial":
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != len(self.variables):
                raise PolyError("exponent vector length mismatch")
            for e, name in zip(exps, self.variables):
                if e < 0 and name not in self.invertible:
                    raise PolyError(
                        f"negative exponent of non-invertible variable {name!r}")
            if not coeff.is_zero():
                clean[exps] = coeff
        return Polynomial(self, clean)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.from_scalar(self.ctx.one())

    def var(self, name: str) -> "Polynomial":
        if name not in self._index:
            raise UnboundVariable(f"{name!r} is not a ring variable")
        exps = tuple(1 if i == self._index[name] else 0
                     for i in range(len(self.variables)))
        return Polynomial(self, {exps: self.ctx.one()})

    def monomial(self, exps: Sequence[int],
                 coeff: Optional[ScalarElement] = None) -> "Polynomial":
        coeff = self.ctx.one() if coeff is None else coeff
        return self.polynomial({tuple(exps): coeff})

    def from_scalar(self, value: ScalarElement) -> "Polynomial":
        if value.is_zero():
            return self.zero()
        return Polynomial(self, {(0,) * len(self.variables): value})

    def from_int(self, n: int) -> "Polynomial":
        return self.from_scalar(self.ctx.from_int(n))

    def parse(self, text: str) -> "Polynomial":
        env = {name: self.var(name) for name in self.variables}
        for name, value in self.ctx._scalar_env().items():
            if name not in env:
                env[name] = self.from_scalar(value)
        value = expr.parse_eval(text, env, self.from_int)
        if isinstance(value, ScalarElement):  # pragma: no cover - defensive
            value = self.from_scalar(value)
        return value


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to
    nonzero scalars."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- helpers -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if self.ring != other.ring:
                raise MixedRings(
                    f"operands in different rings: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, ScalarElement):
            return self.ring.from_scalar(other)
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(not any(e) for e in self.terms)

    def scalar_value(self) -> ScalarElement:
        if self.is_zero():
            return self.ring.ctx.zero()
        if not self.is_scalar():
            raise PolyError("polynomial is not a scalar")
        return next(iter(self.terms.values()))

    def is_unit(self) -> bool:
        """Unit of the ring: one term, any scalar, exponents supported only
        on invertible variables."""
        if len(self.terms) != 1:
            return False
        exps, = self.terms.keys()
        return all(e == 0 or name in self.ring.invertible
                   for e, name in zip(exps, self.ring.variables))

    def unit_inverse(self) -> "Polynomial":
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit")
        (exps, coeff), = self.terms.items()
        inv = self.ring.ctx.inverse(coeff)
        return Polynomial(self.ring, {tuple(-e for e in exps): inv})

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        if self.is_zero():
            return -1
        i = self.ring._index[name]
        return max(e[i] for e in self.terms)

    def variables_used(self) -> tuple[str, ...]:
        used = [False] * len(self.ring.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(name for name, u in zip(self.ring.variables, used) if u)

    def leading(self):
        """(exponents, coefficient) of the graded-lex leading term."""
        if self.is_zero():
            raise PolyError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def coefficient(self, exps) -> ScalarElement:
        return self.terms.get(tuple(exps), self.ring.ctx.zero())

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, coeff in other.terms.items():
            if exps in out:
                merged = out[exps] + coeff
                if merged.is_zero():
                    del out[exps]
                else:
                    out[exps] = merged
            else:
                out[exps] = coeff
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

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
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                coeff = c1 * c2
                if exps in out:
                    coeff = out[exps] + coeff
                if coeff.is_zero():
                    out.pop(exps, None)
                else:
                    out[exps] = coeff
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.unit_inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        acc = self.ring.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, ScalarElement)):
            other = self._coerce(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, tuple(sorted(self.terms.items(),
                                             key=lambda kv: kv[0]))))

    # -- structural operations -------------------------------------------------

    def map_coefficients(self, func: Callable[[ScalarElement], ScalarElement],
                         target_ring: PolyRing) -> "Polynomial":
        out = {}
        for exps, coeff in self.terms.items():
            image = func(coeff)
            if not image.is_zero():
                out[exps] = image
        return target_ring.polynomial(out)

    def substitute(self, bindings: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Ring homomorphism sending each variable to its binding.

        Every variable of the ring must be bound; bindings must live in one
        common target ring.  Negative source exponents require the binding to
        be a unit of the target.
        """
        missing = [v for v in self.ring.variables if v not in bindings]
        if missing:
            raise UnboundVariable(f"no binding for {missing}")
        targets = list(bindings.values())
        target_ring = targets[0].ring
        for t in targets[1:]:
            if t.ring != target_ring:
                raise MixedRings("bindings live in different rings")
        result = target_ring.zero()
        image_cache: dict[tuple[int, int], Polynomial] = {}

        def image_power(index: int, e: int) -> Polynomial:
            key = (index, e)
            if key not in image_cache:
                base = bindings[self.ring.variables[index]]
                image_cache[key] = base ** e
            return image_cache[key]

        for exps, coeff in self.terms.items():
            term = target_ring.from_scalar(coeff)
            for i, e in enumerate(exps):
                if e:
                    term = term * image_power(i, e)
            result = result + term
        return result

    def derivative(self, name: str) -> "Polynomial":
        i = self.ring._index[name]
        out = {}
        ctx = self.ring.ctx
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e == 0:
                continue
            scaled = coeff * ctx.from_int(e)
            if scaled.is_zero():
                continue
            key = exps[:i] + (e - 1,) + exps[i + 1:]
            out[key] = out[key] + scaled if key in out else scaled
        return self.ring.polynomial(out)

    # -- printing ---------------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        pieces = []
        for exps in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[exps]
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.variables, exps) if e)
            coeff_text = str(coeff)
            wrap = ("+" in coeff_text[1:] or "-" in coeff_text[1:]
                    or "/" in coeff_text)
            if not monomial:
                pieces.append(coeff_text)
            elif coeff_text == "1":
                pieces.append(monomial)
            elif coeff_text == "-1":
                pieces.append(f"-{monomial}")
            else:
                if wrap:
                    coeff_text = f"({coeff_text})"
                pieces.append(f"{coeff_text}*{monomial}")
        text = pieces[0]
        for piece in pieces[1:]:
            text += piece if piece.startswith("-") else "+" + piece
        return text

    def __repr__(self):
        return f"<poly {self}>"


# ---------------------------------------------------------------------------
# module-level operations


def poly_arith(f: Polynomial, g: Polynomial, op: str) -> Polynomial:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: Polynomial, bindings: Mapping[str, Polynomial]) -> Polynomial:
    return f.substitute(bindings)


def divide_exact(f: Polynomial, g: Polynomial) -> Optional[Polynomial]:
    """Return q with f = q*g, or None when g does not divide f exactly.

    Laurent inputs are first scaled by unit monomials so every invertible
    variable has valuation zero; exact divisibility is unchanged by units and
    the core loop then runs over the well-founded non-negative lattice.
    """
    if g.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    if f.ring != g.ring:
        raise MixedRings("operands in different rings")
    ring = f.ring
    if f.is_zero():
        return ring.zero()

    def valuation_shift(p):
        mins = [0] * len(ring.variables)
        for i, name in enumerate(ring.variables):
            if name in ring.invertible:
                mins[i] = min(e[i] for e in p.terms)
        return tuple(mins)

    f_shift = valuation_shift(f)
    g_shift = valuation_shift(g)
    f_hat = Polynomial(ring, {tuple(a - b for a, b in zip(e, f_shift)): c
                              for e, c in f.terms.items()})
    g_hat = Polynomial(ring, {tuple(a - b for a, b in zip(e, g_shift)): c
                              for e, c in g.terms.items()})
    g_lead_exps, g_lead_coeff = g_hat.leading()
    g_lead_inv = ring.ctx.inverse(g_lead_coeff)
    remainder = f_hat
    quotient: dict = {}
    while not remainder.is_zero():
        r_exps, r_coeff = remainder.leading()
        q_exps = tuple(a - b for a, b in zip(r_exps, g_lead_exps))
        if any(e < 0 for e in q_exps):
            return None
        q_coeff = r_coeff * g_lead_inv
        quotient[q_exps] = q_coeff
        remainder = remainder - Polynomial(ring, {q_exps: q_coeff}) * g_hat
    adjust = tuple(a - b for a, b in zip(f_shift, g_shift))
    return ring.polynomial({tuple(a + b for a, b in zip(e, adjust)): c
                            for e, c in quotient.items()})


def radical_match(f: Polynomial, factors: Sequence[Polynomial]):
    """Match f against c * prod(factors[i]^e_i) with e_i >= 1 and c a unit
    scalar.  Returns (multiplicities, cofactor scalar) or None.  Implemented
    by repeated exact trial division; no general factorization."""
    if f.is_zero():
        return None
    for i, factor in enumerate(factors):
        if factor.is_zero() or factor.is_scalar():
            raise PolyError(f"factor {i} is a unit or zero")
        for other in factors[i + 1:]:
            if _associates(factor, other):
                raise PolyError("factors must be pairwise non-associate")
    multiplicities = []
    remainder = f
    for factor in factors:
        count = 0
        while True:
            divided = divide_exact(remainder, factor)
            if divided is None:
                break
            count += 1
            remainder = divided
        if count == 0:
            return None
        multiplicities.append(count)
    if not remainder.is_scalar():
        return None
    return multiplicities, remainder.scalar_value()


def _associates(f: Polynomial, g: Polynomial) -> bool:
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    ef, cf = f.leading()
    eg, cg = g.leading()
    if ef != eg:
        return False
    scale = cf / cg
    return f == g * f.ring.from_scalar(scale)


def gcd_univariate(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic gcd of two univariate polynomials over the scalar field."""
    if f.ring != g.ring:
        raise MixedRings("operands in different rings")
    used = set(f.variables_used()) | set(g.variables_used())
    if len(used) > 1:
        raise PolyError(f"polynomials are not univariate (variables {sorted(used)})")
    ring = f.ring
    if not used:
        if f.is_zero() and g.is_zero():
            return ring.zero()
        return ring.one()
    name = used.pop()
    index = ring._index[name]

    def to_dense(p):
        degree = p.degree_in(name)
        coeffs = [ring.ctx.zero()] * (degree + 1)
        for exps, coeff in p.terms.items():
            coeffs[exps[index]] = coeff
        return coeffs

    a, b = to_dense(f), to_dense(g)

    def strip(c):
        while c and c[-1].is_zero():
            c.pop()
        return c

    a, b = strip(a), strip(b)
    while b:
        inv = ring.ctx.inverse(b[-1])
        r = list(a)
        while len(r) >= len(b):
            factor = r[-1] * inv
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[shift + i] = r[shift + i] - factor * c
            r.pop()
            strip(r)
        a, b = b, r
    if not a:
        return ring.zero()
    lead_inv = ring.ctx.inverse(a[-1])
    out = {}
    for d, coeff in enumerate(a):
        value = coeff * lead_inv
        if not value.is_zero():
            exps = tuple(d if i == index else 0 for i in range(len(ring.variables)))
            out[exps] = value
    return ring.polynomial(out)


def specialize_polynomial(f: Polynomial, spec, target_ring: PolyRing) -> Polynomial:
    """Apply a scalar specialization coefficient-wise."""
    return f.map_coefficients(spec, target_ring)
