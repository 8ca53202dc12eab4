"""Exact arithmetic in small coefficient field towers.

A tower is  base field -> optional transcendental parameter -> algebraic
extensions of degree 2 or 3.  The two towers the toolkit actually needs are
``Q(lam)[eps] / (eps^2 - (1+lam))`` and ``Q[zeta] / (zeta^2 + zeta + 1)``,
plus prime-field specializations of either for randomized identity testing.

Elements are kept in canonical form: a polynomial in the algebraic
generators (exponents strictly below the generator degrees) whose
coefficients are reduced fractions of polynomials in the parameter with
monic denominator.  Equality of canonical forms is therefore plain
structural equality, and all values are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import expr


class FieldError(Exception):
    """Base class for field-tower construction and arithmetic errors."""


class ReducibleMinimalPolynomial(FieldError):
    pass


class BadSpecialization(FieldError):
    pass


class DivisionByZero(FieldError):
    pass


class MixedContexts(FieldError):
    pass


class NoRootExists(FieldError):
    pass


class DenominatorVanishes(FieldError):
    pass


class UnsupportedTower(FieldError):
    pass


# ---------------------------------------------------------------------------
# primality helpers (used when sampling specialization primes)

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_prime(rng, lo: int, hi: int) -> int:
    """Deterministic-under-seed prime sampler on [lo, hi]."""
    while True:
        candidate = rng.randrange(lo, hi + 1) | 1
        if candidate >= lo and is_prime(candidate):
            return candidate


# ---------------------------------------------------------------------------
# base fields: Q (Fraction) and F_p (int in [0, p))


class _QQ:
    char = 0

    @staticmethod
    def from_int(n):
        return Fraction(n)

    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return 1 / a


class _GFp:
    def __init__(self, p):
        self.char = p
        self.zero = 0
        self.one = 1 % p

    def from_int(self, n):
        return n % self.char

    def add(self, a, b):
        return (a + b) % self.char

    def mul(self, a, b):
        return a * b % self.char

    def neg(self, a):
        return -a % self.char

    def inv(self, a):
        if a % self.char == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, self.char - 2, self.char)


# ---------------------------------------------------------------------------
# dense univariate polynomials over a base field, as tuples (index = degree)


def _pnorm(bf, coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == bf.zero:
        coeffs.pop()
    return tuple(coeffs)


def _padd(bf, f, g):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = bf.add(out[i], c)
    return _pnorm(bf, out)


def _pneg(bf, f):
    return tuple(bf.neg(c) for c in f)


def _pmul(bf, f, g):
    if not f or not g:
        return ()
    out = [bf.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = bf.add(out[i + j], bf.mul(a, b))
    return _pnorm(bf, out)


def _pscale(bf, f, c):
    if c == bf.zero:
        return ()
    return _pnorm(bf, [bf.mul(a, c) for a in f])


def _pdivmod(bf, f, g):
    if not g:
        raise DivisionByZero("polynomial division by zero")
    f = list(f)
    q = [bf.zero] * max(0, len(f) - len(g) + 1)
    inv_lead = bf.inv(g[-1])
    while len(f) >= len(g):
        while f and f[-1] == bf.zero:
            f.pop()
        if len(f) < len(g):
            break
        c = bf.mul(f[-1], inv_lead)
        shift = len(f) - len(g)
        q[shift] = c
        for i, a in enumerate(g):
            f[shift + i] = bf.add(f[shift + i], bf.neg(bf.mul(a, c)))
        f.pop()
    return _pnorm(bf, q), _pnorm(bf, f)


def _pmonic(bf, f):
    if not f:
        return ()
    return _pscale(bf, f, bf.inv(f[-1]))


def _pgcd(bf, f, g):
    while g:
        f, g = g, _pdivmod(bf, f, g)[1]
    return _pmonic(bf, f)


def _peval(bf, f, x):
    acc = bf.zero
    for c in reversed(f):
        acc = bf.add(bf.mul(acc, x), c)
    return acc


# ---------------------------------------------------------------------------
# F_p root machinery for specialization


def _fp_powmod(p, base, e, mod):
    """base^e in F_p[T] modulo the monic polynomial mod (tuple rep)."""
    bf = _GFp(p)
    result = (1 % p,)
    base = _pdivmod(bf, base, mod)[1]
    while e:
        if e & 1:
            result = _pdivmod(bf, _pmul(bf, result, base), mod)[1]
        base = _pdivmod(bf, _pmul(bf, base, base), mod)[1]
        e >>= 1
    return result


def fp_has_root(coeffs: Sequence[int], p: int) -> bool:
    return bool(fp_roots(coeffs, p))


def fp_roots(coeffs: Sequence[int], p: int) -> list[int]:
    """All roots in F_p of a nonzero polynomial of any small degree."""
    bf = _GFp(p)
    f = _pnorm(bf, [c % p for c in coeffs])
    if not f:
        raise ValueError("zero polynomial has every root")
    if p <= 64:
        return [x for x in range(p) if _peval(bf, f, x) == 0]
    f = _pmonic(bf, f)
    # split off the product of the distinct linear factors: gcd(T^p - T, f)
    tp = _fp_powmod(p, (0, 1), p, f)
    g = _pgcd(bf, _padd(bf, tp, _pneg(bf, (0, 1))), f)
    roots: list[int] = []

    def split(h):
        if len(h) <= 1:
            return
        if len(h) == 2:  # c0 + c1 T
            roots.append(bf.mul(bf.neg(h[0]), bf.inv(h[1])))
            return
        # deterministic sequence of shifts; (T+a)^((p-1)/2) - 1 splits h
        for a in range(p):
            w = _fp_powmod(p, (a % p, 1), (p - 1) // 2, h)
            w = _padd(bf, w, (bf.neg(bf.one),))
            d = _pgcd(bf, w, h)
            if 0 < len(d) - 1 < len(h) - 1:
                split(d)
                split(_pdivmod(bf, h, d)[0])
                return
        raise NoRootExists("failed to split linear-factor product")

    split(g)
    return sorted(roots)


# ---------------------------------------------------------------------------
# rational functions in the (single) parameter, as (num, den) tuple pairs


def _fr_canon(bf, num, den):
    if not den:
        raise DivisionByZero("zero denominator")
    if not num:
        return ((), (bf.one,))
    g = _pgcd(bf, num, den)
    if len(g) > 1 or (g and g[0] != bf.one):
        num = _pdivmod(bf, num, g)[0]
        den = _pdivmod(bf, den, g)[0]
    lead_inv = bf.inv(den[-1])
    return (_pscale(bf, num, lead_inv), _pscale(bf, den, lead_inv))


def _fr_add(bf, a, b):
    if len(a[1]) == 1 and len(b[1]) == 1 and a[1][0] == bf.one and b[1][0] == bf.one:
        return (_padd(bf, a[0], b[0]), a[1])
    return _fr_canon(bf, _padd(bf, _pmul(bf, a[0], b[1]), _pmul(bf, b[0], a[1])),
                     _pmul(bf, a[1], b[1]))


def _fr_mul(bf, a, b):
    if len(a[1]) == 1 and len(b[1]) == 1 and a[1][0] == bf.one and b[1][0] == bf.one:
        return (_pmul(bf, a[0], b[0]), a[1])
    return _fr_canon(bf, _pmul(bf, a[0], b[0]), _pmul(bf, a[1], b[1]))


def _fr_neg(bf, a):
    return (_pneg(bf, a[0]), a[1])


def _fr_inv(bf, a):
    if not a[0]:
        raise DivisionByZero("inverse of zero")
    return _fr_canon(bf, a[1], a[0])


# ---------------------------------------------------------------------------
# descriptors and contexts


@dataclass(frozen=True)
class FieldDescriptor:
    """Serializable description of a field tower.

    ``base`` is ``"Q"`` or a prime; ``extensions`` holds ``(name, minpoly)``
    pairs where the minimal polynomial is written in the variable ``T`` over
    the tower built so far, e.g. ``("eps", "T^2 - (1 + lam)")``.  In prime
    mode every transcendental must be bound to a residue via ``bindings``.
    """

    base: Union[str, int] = "Q"
    transcendentals: tuple[str, ...] = ()
    extensions: tuple[tuple[str, str], ...] = ()
    bindings: tuple[tuple[str, int], ...] = ()

    def to_json(self) -> dict:
        return {
            "base": self.base,
            "transcendentals": list(self.transcendentals),
            "extensions": [[name, poly] for name, poly in self.extensions],
            "bindings": {name: value for name, value in self.bindings},
        }

    @staticmethod
    def from_json(data: Mapping) -> "FieldDescriptor":
        return FieldDescriptor(
            base=data.get("base", "Q"),
            transcendentals=tuple(data.get("transcendentals", ())),
            extensions=tuple((n, p) for n, p in data.get("extensions", ())),
            bindings=tuple(sorted(dict(data.get("bindings", {})).items())),
        )


class ScalarElement:
    """Canonical element of a :class:`FieldContext`.

    ``terms`` maps exponent tuples over the algebraic generators to reduced
    ``(num, den)`` rational-function pairs; no zero coefficients are stored.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, name, value):
        raise AttributeError("ScalarElement is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self == self.ctx.one()

    def _check(self, other):
        if not isinstance(other, ScalarElement):
            return NotImplemented
        if self.ctx is not other.ctx and self.ctx.descriptor != other.ctx.descriptor:
            raise MixedContexts("elements from different field contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ctx._add(self, other)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ctx._add(self, -other)

    def __neg__(self):
        return self.ctx._neg(self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ctx._mul(self, other)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self.ctx._mul(self, self.ctx.inverse(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.ctx.inverse(self) ** (-n)
        acc = self.ctx.one()
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def __eq__(self, other):
        if not isinstance(other, ScalarElement):
            return NotImplemented
        return self.ctx.descriptor == other.ctx.descriptor and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx.descriptor, tuple(sorted(self.terms.items()))))

    def __str__(self):
        return self.ctx.format_element(self)

    def __repr__(self):
        return f"<scalar {self}>"


class FieldContext:
    """Arithmetic context for one field tower; immutable and shareable."""

    def __init__(self, descriptor: FieldDescriptor):
        self.descriptor = descriptor
        if descriptor.base == "Q":
            self._bf = _QQ()
            self.characteristic = 0
        else:
            p = int(descriptor.base)
            if not is_prime(p):
                raise UnsupportedTower(f"base order {p} is not prime")
            self._bf = _GFp(p)
            self.characteristic = p
        bindings = dict(descriptor.bindings)
        if self.characteristic:
            missing = [t for t in descriptor.transcendentals if t not in bindings]
            if missing:
                raise BadSpecialization(
                    f"prime-field mode requires bindings for {missing}")
            self.param = None
            self._bound = {t: self._bf.from_int(bindings[t])
                           for t in descriptor.transcendentals}
        else:
            if len(descriptor.transcendentals) > 1:
                raise UnsupportedTower(
                    "at most one transcendental parameter is supported")
            self.param = descriptor.transcendentals[0] if descriptor.transcendentals else None
            self._bound = {}
        self.gen_names: tuple[str, ...] = ()
        self._gen_degrees: tuple[int, ...] = ()
        self._gen_minpolys: list[list] = []   # coefficient lists (ScalarElement), monic
        self._reducers: list[dict] = []       # raw term dicts for gen^deg
        for name, poly_text in descriptor.extensions:
            self._extend(name, poly_text)

    # -- construction internals --------------------------------------------

    def _extend(self, name: str, poly_text: str):
        if name in self.gen_names or name == self.param or name in self._bound:
            raise UnsupportedTower(f"duplicate generator name {name!r}")
        coeffs = self._parse_minpoly(poly_text)
        degree = len(coeffs) - 1
        if degree < 2 or degree > 3:
            raise UnsupportedTower(
                f"minimal polynomial degree {degree} out of supported range 2..3")
        if not coeffs[-1].is_one():
            raise UnsupportedTower("minimal polynomial must be monic")
        self._check_irreducible(coeffs, poly_text)
        index = len(self.gen_names)
        self.gen_names = self.gen_names + (name,)
        self._gen_degrees = self._gen_degrees + (degree,)
        # widen existing elements' exponent tuples happens implicitly: old
        # elements belong to the *previous* context object; coefficients of the
        # minimal polynomial get re-keyed here.
        widened = []
        for c in coeffs:
            widened.append({k + (0,): v for k, v in c.terms.items()})
        self._gen_minpolys.append(widened)
        reducer = {}
        for c_terms, power in zip(widened[:-1], range(degree)):
            for k, v in c_terms.items():
                key = k[:index] + (power,)
                val = _fr_neg(self._bf, v)
                if key in reducer:
                    val = _fr_add(self._bf, reducer[key], val)
                if val[0]:
                    reducer[key] = val
                elif key in reducer:
                    del reducer[key]
        self._reducers.append(reducer)

    def _parse_minpoly(self, poly_text: str) -> list[ScalarElement]:
        """Parse a minimal polynomial in T over the tower built so far."""
        marker = object()
        env = dict(self._scalar_env())
        env["T"] = marker

        def eval_node(node):
            kind = node[0]
            if kind == "int":
                return {0: self.from_int(node[1])}
            if kind == "name":
                val = env.get(node[1])
                if val is marker:
                    return {1: self.one()}
                if val is None:
                    raise UnsupportedTower(
                        f"unknown name {node[1]!r} in minimal polynomial")
                return {0: val}
            if kind == "neg":
                return {d: -c for d, c in eval_node(node[1]).items()}
            if kind in ("add", "sub"):
                left, right = eval_node(node[1]), eval_node(node[2])
                out = dict(left)
                for d, c in right.items():
                    c = c if kind == "add" else -c
                    out[d] = out[d] + c if d in out else c
                return {d: c for d, c in out.items() if not c.is_zero()}
            if kind == "mul":
                left, right = eval_node(node[1]), eval_node(node[2])
                out = {}
                for d1, c1 in left.items():
                    for d2, c2 in right.items():
                        d = d1 + d2
                        c = c1 * c2
                        out[d] = out[d] + c if d in out else c
                return {d: c for d, c in out.items() if not c.is_zero()}
            if kind == "div":
                left, right = eval_node(node[1]), eval_node(node[2])
                if set(right) != {0}:
                    raise UnsupportedTower("cannot divide by T")
                inv = self.inverse(right[0])
                return {d: c * inv for d, c in left.items()}
            if kind == "pow":
                base = eval_node(node[1])
                if node[2] < 0:
                    raise UnsupportedTower("negative powers in minimal polynomial")
                out = {0: self.one()}
                for _ in range(node[2]):
                    nxt = {}
                    for d1, c1 in out.items():
                        for d2, c2 in base.items():
                            d = d1 + d2
                            c = c1 * c2
                            nxt[d] = nxt[d] + c if d in nxt else c
                    out = {d: c for d, c in nxt.items() if not c.is_zero()}
                return out
            raise UnsupportedTower(f"bad node {node!r}")

        table = eval_node(expr.parse(poly_text))
        degree = max(table) if table else 0
        return [table.get(d, self.zero()) for d in range(degree + 1)]

    def _check_irreducible(self, coeffs: list[ScalarElement], text: str):
        degree = len(coeffs) - 1
        lowered = []
        for c in coeffs:
            if any(any(e) for e in c.terms):
                raise UnsupportedTower(
                    "minimal polynomial coefficients over earlier algebraic "
                    "generators are not supported")
            lowered.append(c.terms.get((0,) * len(self.gen_names),
                                       ((), (self._bf.one,))))
        if self.characteristic:
            ints = []
            for num, den in lowered:
                value = _peval(self._bf, num, 0)  # constants: den == (1,)
                inv = self._bf.inv(_peval(self._bf, den, 0))
                ints.append(self._bf.mul(value, inv))
            if fp_has_root(ints, self.characteristic):
                raise ReducibleMinimalPolynomial(
                    f"{text!r} has a root modulo {self.characteristic}")
            return
        if self.param is None:
            rationals = [Fraction(num[0] if num else 0) / Fraction(den[0])
                         for num, den in lowered]
            if _has_rational_root(rationals):
                raise ReducibleMinimalPolynomial(f"{text!r} has a rational root")
            return
        # one transcendental: clear denominators, then certify irreducibility
        # by finding one integer specialization with no rational root.  A
        # rational-function root of a monic polynomial with Q[param]
        # coefficients is itself polynomial, so it would survive every
        # specialization; one root-free sample is a proof.
        den_lcm = (self._bf.one,)
        for num, den in lowered:
            g = _pgcd(self._bf, den_lcm, den)
            den_lcm = _pmul(self._bf, _pdivmod(self._bf, den_lcm, g)[0], den)
        cleared = []
        for i, (num, den) in enumerate(lowered):
            extra = _pdivmod(self._bf, den_lcm, den)[0]
            scale = _pmul(self._bf, num, extra)
            power = degree - i
            for _ in range(power):
                scale = _pmul(self._bf, scale, den_lcm)
            cleared.append(scale)
        for sample in range(2, 40):
            values = [_peval(self._bf, c, Fraction(sample)) for c in cleared]
            if values[-1] == 0:
                continue
            if not _has_rational_root(values):
                return
        raise ReducibleMinimalPolynomial(
            f"{text!r} appears reducible (root found at every sampled parameter)")

    # -- element constructors ------------------------------------------------

    def _make(self, terms) -> ScalarElement:
        return ScalarElement(self, terms)

    def zero(self) -> ScalarElement:
        return self._make({})

    def one(self) -> ScalarElement:
        return self.from_int(1)

    def from_int(self, n: int) -> ScalarElement:
        value = self._bf.from_int(n)
        if value == self._bf.zero:
            return self._make({})
        key = (0,) * len(self.gen_names)
        return self._make({key: ((value,), (self._bf.one,))})

    def from_fraction(self, fr: Fraction) -> ScalarElement:
        if self.characteristic:
            num = self._bf.from_int(fr.numerator)
            if num == 0:
                return self._make({})
            den_inv = self._bf.inv(self._bf.from_int(fr.denominator))
            value = self._bf.mul(num, den_inv)
            key = (0,) * len(self.gen_names)
            return self._make({key: ((value,), (self._bf.one,))})
        if fr == 0:
            return self._make({})
        key = (0,) * len(self.gen_names)
        return self._make({key: ((Fraction(fr),), (Fraction(1),))})

    def param_element(self) -> ScalarElement:
        if self.param is None:
            raise UnsupportedTower("context has no transcendental parameter")
        key = (0,) * len(self.gen_names)
        return self._make({key: ((self._bf.zero, self._bf.one), (self._bf.one,))})

    def gen(self, name: str) -> ScalarElement:
        index = self.gen_names.index(name)
        key = tuple(1 if i == index else 0 for i in range(len(self.gen_names)))
        return self._make({key: ((self._bf.one,), (self._bf.one,))})

    def _scalar_env(self) -> dict:
        env = {}
        if self.param is not None:
            env[self.param] = self.param_element()
        for name, value in self._bound.items():
            key = (0,) * len(self.gen_names)
            env[name] = self._make({key: ((value,), (self._bf.one,))} if value else {})
        for name in self.gen_names:
            env[name] = self.gen(name)
        return env

    def scalar(self, text: str) -> ScalarElement:
        """Parse a scalar expression like ``"2*eps"`` or ``"(1+lam)/(1-lam)"``."""
        return expr.parse_eval(text, self._scalar_env(), self.from_int)

    # -- arithmetic ----------------------------------------------------------

    def _add(self, a: ScalarElement, b: ScalarElement) -> ScalarElement:
        out = dict(a.terms)
        bf = self._bf
        for k, v in b.terms.items():
            if k in out:
                merged = _fr_add(bf, out[k], v)
                if merged[0]:
                    out[k] = merged
                else:
                    del out[k]
            else:
                out[k] = v
        return self._make(out)

    def _neg(self, a: ScalarElement) -> ScalarElement:
        bf = self._bf
        return self._make({k: _fr_neg(bf, v) for k, v in a.terms.items()})

    def _mul(self, a: ScalarElement, b: ScalarElement) -> ScalarElement:
        bf = self._bf
        raw: dict = {}
        for k1, v1 in a.terms.items():
            for k2, v2 in b.terms.items():
                key = tuple(x + y for x, y in zip(k1, k2))
                val = _fr_mul(bf, v1, v2)
                if key in raw:
                    val = _fr_add(bf, raw[key], val)
                if val[0]:
                    raw[key] = val
                elif key in raw:
                    del raw[key]
        return self._make(self._reduce(raw))

    def _reduce(self, raw: dict) -> dict:
        """Rewrite exponents below the generator degrees using the minimal
        polynomials (highest generator first, so substitutions only introduce
        lower exponents of the same generator and earlier generators)."""
        bf = self._bf
        degrees = self._gen_degrees
        pending = dict(raw)
        done: dict = {}
        while pending:
            key, val = pending.popitem()
            for i in reversed(range(len(degrees))):
                if key[i] >= degrees[i]:
                    rest = key[:i] + (key[i] - degrees[i],) + key[i + 1:]
                    for rk, rv in self._reducers[i].items():
                        padded = rk + (0,) * (len(rest) - len(rk))
                        new_key = tuple(x + y for x, y in zip(rest, padded))
                        new_val = _fr_mul(bf, val, rv)
                        if new_key in pending:
                            new_val = _fr_add(bf, pending[new_key], new_val)
                        if new_val[0]:
                            pending[new_key] = new_val
                        elif new_key in pending:
                            del pending[new_key]
                    break
            else:
                if key in done:
                    val = _fr_add(bf, done[key], val)
                if val[0]:
                    done[key] = val
                elif key in done:
                    del done[key]
        return done

    def inverse(self, a: ScalarElement) -> ScalarElement:
        if a.is_zero():
            raise DivisionByZero("inverse of zero scalar")
        if not self.gen_names:
            (num, den), = a.terms.values()
            return self._make({(): _fr_inv(self._bf, (num, den))})
        # solve a * x = 1 by linear algebra over the rational-function field
        basis = self._monomial_basis()
        index = {m: i for i, m in enumerate(basis)}
        bf = self._bf
        n = len(basis)
        matrix = [[((), (bf.one,)) for _ in range(n + 1)] for _ in range(n)]
        for j, m in enumerate(basis):
            product = self._mul(a, self._make(
                {m: ((bf.one,), (bf.one,))}))
            for k, v in product.terms.items():
                matrix[index[k]][j] = v
        matrix[index[(0,) * len(self.gen_names)]][n] = ((bf.one,), (bf.one,))
        solution = _solve_fr(bf, matrix, n)
        terms = {m: solution[i] for i, m in enumerate(basis) if solution[i][0]}
        return self._make(terms)

    def _monomial_basis(self):
        basis = [()]
        for degree in self._gen_degrees:
            basis = [m + (e,) for m in basis for e in range(degree)]
        return [tuple(m) for m in basis]

    def random_element(self, rng, size: int = 4) -> ScalarElement:
        """Random element with small integer data; for property tests."""
        terms = {}
        for m in self._monomial_basis():
            if rng.random() >= 0.6:
                continue
            c0 = self._bf.from_int(rng.randint(-size, size))
            if self.param is not None and rng.random() < 0.5:
                c1 = self._bf.from_int(rng.randint(-size, size))
                num = _pnorm(self._bf, (c0, c1))
            else:
                num = _pnorm(self._bf, (c0,))
            if num:
                terms[m] = (num, (self._bf.one,))
        return self._make(terms)

    # -- printing ------------------------------------------------------------

    def _format_base(self, value) -> str:
        if self.characteristic:
            return str(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def _format_upoly(self, coeffs) -> str:
        if not coeffs:
            return "0"
        pieces = []
        for d in range(len(coeffs) - 1, -1, -1):
            c = coeffs[d]
            if c == self._bf.zero:
                continue
            body = self._format_base(c)
            if d == 0:
                pieces.append(body)
            else:
                var = self.param if self.param is not None else "?"
                head = var if d == 1 else f"{var}^{d}"
                if body == "1":
                    pieces.append(head)
                elif body == "-1":
                    pieces.append(f"-{head}")
                elif "/" in body:
                    pieces.append(f"({body})*{head}")
                else:
                    pieces.append(f"{body}*{head}")
        text = pieces[0]
        for piece in pieces[1:]:
            text += piece if piece.startswith("-") else "+" + piece
        return text

    def _format_fraction(self, value) -> str:
        num, den = value
        num_text = self._format_upoly(num)
        if den == (self._bf.one,):
            return num_text
        den_text = self._format_upoly(den)
        if "+" in num_text[1:] or "-" in num_text[1:]:
            num_text = f"({num_text})"
        if "+" in den_text[1:] or "-" in den_text[1:] or "*" in den_text:
            den_text = f"({den_text})"
        return f"{num_text}/{den_text}"

    def format_element(self, a: ScalarElement) -> str:
        if not a.terms:
            return "0"
        pieces = []
        for key in sorted(a.terms, key=lambda k: (sum(k), k), reverse=True):
            coeff = self._format_fraction(a.terms[key])
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.gen_names, key) if e)
            needs_parens = ("+" in coeff[1:] or "-" in coeff[1:] or "/" in coeff)
            if not monomial:
                piece = coeff
            elif coeff == "1":
                piece = monomial
            elif coeff == "-1":
                piece = f"-{monomial}"
            else:
                piece = (f"({coeff})*{monomial}" if needs_parens
                         else f"{coeff}*{monomial}")
            pieces.append(piece)
        text = pieces[0]
        for piece in pieces[1:]:
            text += piece if piece.startswith("-") else "+" + piece
        return text


def _has_rational_root(coeffs: Sequence[Fraction]) -> bool:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return len(coeffs) == 0
    if coeffs[0] == 0:
        return True
    if len(coeffs) == 3:  # quadratic: rational root iff disc is a rational square
        a, b, c = coeffs[2], coeffs[1], coeffs[0]
        disc = b * b - 4 * a * c
        if disc < 0:
            return False
        return (isqrt(disc.numerator) ** 2 == disc.numerator
                and isqrt(disc.denominator) ** 2 == disc.denominator)
    # degree 3 (or stray higher degrees): rational root theorem
    scale = 1
    for c in coeffs:
        scale = scale * c.denominator // _gcd_int(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    content = 0
    for c in ints:
        content = _gcd_int(content, abs(c))
    ints = [c // content for c in ints]
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for candidate in (Fraction(p, q), Fraction(-p, q)):
                if sum(c * candidate ** i for i, c in enumerate(ints)) == 0:
                    return True
    return False


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _solve_fr(bf, matrix, n):
    """Gaussian elimination over the rational-function field; the matrix has
    n rows and n+1 columns (augmented)."""
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if matrix[row][col][0]:
                pivot = row
                break
        if pivot is None:
            raise DivisionByZero("singular multiplication matrix")
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        inv = _fr_inv(bf, matrix[col][col])
        matrix[col] = [_fr_mul(bf, entry, inv) for entry in matrix[col]]
        for row in range(n):
            if row != col and matrix[row][col][0]:
                factor = matrix[row][col]
                matrix[row] = [
                    _fr_add(bf, matrix[row][j],
                            _fr_neg(bf, _fr_mul(bf, factor, matrix[col][j])))
                    for j in range(n + 1)]
    return [matrix[i][n] for i in range(n)]


# ---------------------------------------------------------------------------
# public operations


def make_field(desc: FieldDescriptor) -> FieldContext:
    """Build an arithmetic context; validates the descriptor invariants."""
    return FieldContext(desc)


def arith(a: ScalarElement, b: ScalarElement, op: str) -> ScalarElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class Specialization:
    """Ring homomorphism from a symbolic tower onto a pure prime field.

    ``bindings`` must assign a residue to the transcendental parameter (if
    any) and a root of the specialized minimal polynomial to every algebraic
    generator.
    """

    def __init__(self, source: FieldContext, target: FieldContext,
                 bindings: Mapping[str, int]):
        if target.characteristic == 0 or target.gen_names or target.param:
            raise BadSpecialization("target must be a pure prime field")
        self.source = source
        self.target = target
        p = target.characteristic
        self.prime = p
        if source.param is not None and source.param not in bindings:
            raise BadSpecialization(f"missing binding for {source.param!r}")
        self.param_value = (bindings[source.param] % p
                            if source.param is not None else None)
        self.gen_values = []
        for name, minpoly in zip(source.gen_names, source._gen_minpolys):
            if name not in bindings:
                raise BadSpecialization(f"missing binding for generator {name!r}")
            value = bindings[name] % p
            coeffs = [self._coeff_value(dict(c)) for c in minpoly]
            total = 0
            for coeff in reversed(coeffs):
                total = (total * value + coeff) % p
            if total != 0:
                raise BadSpecialization(
                    f"{value} is not a root of the specialized minimal "
                    f"polynomial of {name!r}")
            self.gen_values.append(value)

    def _coeff_value(self, terms: dict) -> int:
        p = self.prime
        total = 0
        for key, (num, den) in terms.items():
            num_val = self._eval_upoly(num)
            den_val = self._eval_upoly(den)
            if den_val % p == 0:
                raise DenominatorVanishes(
                    "denominator vanishes under the chosen parameter value")
            value = num_val * pow(den_val, p - 2, p) % p
            for e, gen_val in zip(key, self.gen_values):
                value = value * pow(gen_val, e, p) % p
            total = (total + value) % p
        return total

    def _eval_upoly(self, coeffs) -> int:
        p = self.prime
        total = 0
        x = self.param_value if self.param_value is not None else 0
        for c in reversed(coeffs):
            c_int = (c.numerator * pow(c.denominator, p - 2, p)) % p \
                if isinstance(c, Fraction) else c % p
            total = (total * x + c_int) % p
        return total

    def __call__(self, a: ScalarElement) -> ScalarElement:
        if a.ctx.descriptor != self.source.descriptor:
            raise MixedContexts("element does not belong to the source context")
        return self.target.from_int(self._coeff_value(dict(a.terms)))


def specialize(a: ScalarElement, target: FieldContext,
               bindings: Mapping[str, int]) -> ScalarElement:
    return Specialization(a.ctx, target, bindings)(a)


def find_specialization(source: FieldContext, prime: int, rng,
                        forbidden: Iterable[int] = ()) -> Specialization:
    """Sample parameter/root bindings over F_prime; raises
    :class:`NoRootExists` when no consistent choice exists after resampling.
    """
    target = make_field(FieldDescriptor(base=prime))
    forbidden = {f % prime for f in forbidden}
    attempts = 64 if source.param is not None else 1
    last_error: Optional[Exception] = None
    for _ in range(attempts):
        bindings: dict[str, int] = {}
        if source.param is not None:
            value = rng.randrange(prime)
            if value in forbidden:
                continue
            bindings[source.param] = value
        try:
            for name, minpoly in zip(source.gen_names, source._gen_minpolys):
                coeffs = _specialized_minpoly(source, minpoly, bindings, prime)
                roots = fp_roots(coeffs, prime)
                if not roots:
                    raise NoRootExists(
                        f"minimal polynomial of {name!r} has no root mod {prime}")
                bindings[name] = roots[rng.randrange(len(roots))]
            return Specialization(source, target, bindings)
        except (NoRootExists, DenominatorVanishes) as error:
            last_error = error
            if source.param is None:
                break
    raise last_error if last_error is not None else NoRootExists(
        f"no admissible specialization modulo {prime}")


def _specialized_minpoly(source, minpoly, bindings, prime):
    coeffs = []
    for c_terms in minpoly:
        total = 0
        for key, (num, den) in dict(c_terms).items():
            num_val = _eval_upoly_mod(num, bindings.get(source.param), prime)
            den_val = _eval_upoly_mod(den, bindings.get(source.param), prime)
            if den_val % prime == 0:
                raise DenominatorVanishes("denominator vanishes in minimal polynomial")
            value = num_val * pow(den_val, prime - 2, prime) % prime
            for e, gen_name in zip(key, source.gen_names):
                if e:
                    value = value * pow(bindings[gen_name], e, prime) % prime
            total = (total + value) % prime
        coeffs.append(total)
    return coeffs


def _eval_upoly_mod(coeffs, x, prime):
    total = 0
    x = 0 if x is None else x % prime
    for c in reversed(coeffs):
        c_int = (c.numerator * pow(c.denominator, prime - 2, prime)) % prime \
            if isinstance(c, Fraction) else c % prime
        total = (total * x + c_int) % prime
    return total
