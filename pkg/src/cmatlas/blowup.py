"""Blow-up charts for orders over ctx[u, v].

Blowing up the origin gives two affine charts: on the first, u = xi * v and
the exceptional coordinate v becomes invertible off the exceptional locus;
on the second, v = eta * u.  A chart algebra is built from the pulled-back
order together with explicitly adjoined Laurent combinations of the original
basis (the enlarged order of the resolution); closure of its table over the
chart polynomial ring is the checked correctness proxy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .linalg import invert_unit_pivot
from .polyring import Polynomial, PolyRing
from .structalg import (AlgebraError, ClosureFailure, StructureConstantAlgebra)


class GluingError(AlgebraError):
    pass


@dataclass(frozen=True)
class Chart:
    """One affine chart of the blow-up of the origin."""

    name: str
    ring: PolyRing                      # chart coordinate ring, e.g. ctx[xi, v]
    substitution: Mapping[str, Polynomial]   # source vars -> chart polynomials
    exceptional_var: str                # invertible when adjoining generators
    slope_var: str
    overlap_exponents: Mapping[str, tuple]   # chart vars as monomials in (u, v)

    def laurent_ring(self) -> PolyRing:
        return self.ring.laurent((self.exceptional_var,))


def standard_charts(ring: PolyRing, slope1: str = "xi",
                    slope2: str = "eta") -> tuple[Chart, Chart]:
    """The two charts of the blow-up of the origin of Spec ctx[u, v]."""
    u_name, v_name = ring.variables
    ctx = ring.ctx
    ring1 = PolyRing(ctx, (slope1, v_name))
    ring2 = PolyRing(ctx, (slope2, u_name))
    chart1 = Chart(
        name="U1",
        ring=ring1,
        substitution={u_name: ring1.var(slope1) * ring1.var(v_name),
                      v_name: ring1.var(v_name)},
        exceptional_var=v_name,
        slope_var=slope1,
        overlap_exponents={slope1: (1, -1), v_name: (0, 1)},
    )
    chart2 = Chart(
        name="U2",
        ring=ring2,
        substitution={u_name: ring2.var(u_name),
                      v_name: ring2.var(slope2) * ring2.var(u_name)},
        exceptional_var=u_name,
        slope_var=slope2,
        overlap_exponents={slope2: (-1, 1), u_name: (1, 0)},
    )
    return chart1, chart2


def pullback_relations(alg: StructureConstantAlgebra,
                       chart: Chart) -> StructureConstantAlgebra:
    """Substitute the chart equations into every table coefficient."""
    bindings = dict(chart.substitution)
    missing = [v for v in alg.ring.variables if v not in bindings]
    if missing:
        raise AlgebraError(f"chart substitution misses variables {missing}")
    return alg.substitute_base(bindings, chart.ring)


@dataclass
class ChartAlgebra:
    """An order on a blow-up chart: polynomial table plus the Laurent
    embedding of its basis into the original order."""

    chart: Chart
    algebra: StructureConstantAlgebra
    original_basis: tuple[str, ...]
    embedding: tuple[tuple[Polynomial, ...], ...]   # rows over original basis

    def embedding_of(self, label: str) -> tuple[Polynomial, ...]:
        return self.embedding[self.algebra._index[label]]


def adjoin_generators(pulled: StructureConstantAlgebra, chart: Chart,
                      new_basis: Sequence[tuple[str, Mapping[str, str]]],
                      ) -> ChartAlgebra:
    """Build the chart order on the given basis.

    ``new_basis`` lists (label, combination) pairs; each combination maps an
    original basis label to a Laurent-coefficient expression (a string parsed
    in the chart's Laurent ring).  The derived table must have polynomial
    coefficients; otherwise the proposed generators do not span an order on
    the chart and :class:`ClosureFailure` is raised.
    """
    laurent = chart.laurent_ring()
    n = pulled.dimension
    if len(new_basis) != n:
        raise ClosureFailure("new basis must have the same rank")
    rows = []
    labels = []
    for label, combo in new_basis:
        row = [laurent.zero()] * n
        for old_label, text in combo.items():
            coeff = text if isinstance(text, Polynomial) else laurent.parse(text)
            row[pulled._index[old_label]] = coeff
        rows.append(tuple(row))
        labels.append(label)
    inverse = invert_unit_pivot(rows, laurent)
    if inverse is None:
        raise ClosureFailure("embedding matrix is not invertible over the "
                             "chart Laurent ring")

    def to_new(coords):
        out = [laurent.zero()] * n
        for a, c in enumerate(coords):
            if c.is_zero():
                continue
            for k in range(n):
                if not inverse[a][k].is_zero():
                    out[k] = out[k] + c * inverse[a][k]
        return out

    lifted_table = [[tuple(
        entry.map_coefficients(lambda s: s, laurent)
        for entry in pulled.table[i][j]) for j in range(n)] for i in range(n)]

    def multiply_old(left, right):
        out = [laurent.zero()] * n
        for i, ci in enumerate(left):
            if ci.is_zero():
                continue
            for j, cj in enumerate(right):
                if cj.is_zero():
                    continue
                scale = ci * cj
                row = lifted_table[i][j]
                for k in range(n):
                    if not row[k].is_zero():
                        out[k] = out[k] + scale * row[k]
        return out

    table = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            product = multiply_old(rows[i], rows[j])
            coords = to_new(product)
            entry = []
            for k, c in enumerate(coords):
                poly = _demote(c, chart.ring)
                if poly is None:
                    raise ClosureFailure(
                        f"product {labels[i]}*{labels[j]} needs negative "
                        f"exponents in coordinate {labels[k]}: {c}")
                entry.append(poly)
            table[i][j] = entry
    algebra = StructureConstantAlgebra(chart.ring, labels, table,
                                       unit_index=_unit_row(rows, pulled))
    if not algebra.check_associativity():  # pragma: no cover - defensive
        raise ClosureFailure("chart table is not associative")
    _check_embedding_consistency(rows, lifted_table, table, labels, laurent)
    return ChartAlgebra(chart=chart, algebra=algebra,
                        original_basis=pulled.basis, embedding=tuple(rows))


def _unit_row(rows, pulled) -> int:
    laurent_one_index = pulled.unit_index
    for i, row in enumerate(rows):
        if all((k == laurent_one_index and c == 1) or (k != laurent_one_index and c.is_zero())
               for k, c in enumerate(row)):
            return i
    raise ClosureFailure("new basis does not contain the unit")


def _demote(c: Polynomial, target: PolyRing) -> Optional[Polynomial]:
    for exps in c.terms:
        if any(e < 0 for e in exps):
            return None
    return target.polynomial(dict(c.terms))


def _check_embedding_consistency(rows, lifted_table, table, labels, laurent):
    """product-via-table must equal product-via-embedding, coordinate-wise."""
    n = len(rows)
    for i in range(n):
        for j in range(n):
            via_embedding = [laurent.zero()] * n
            for a, ca in enumerate(rows[i]):
                if ca.is_zero():
                    continue
                for b, cb in enumerate(rows[j]):
                    if cb.is_zero():
                        continue
                    scale = ca * cb
                    row = lifted_table[a][b]
                    for k in range(n):
                        if not row[k].is_zero():
                            via_embedding[k] = via_embedding[k] + scale * row[k]
            via_table = [laurent.zero()] * n
            for k, coeff in enumerate(table[i][j]):
                if coeff.is_zero():
                    continue
                lifted = coeff.map_coefficients(lambda s: s, laurent)
                for a, c in enumerate(rows[k]):
                    if not c.is_zero():
                        via_table[a] = via_table[a] + lifted * c
            if via_embedding != via_table:
                raise ClosureFailure(
                    f"embedding inconsistent at {labels[i]}*{labels[j]}")


# ---------------------------------------------------------------------------
# bounded search for a pure-monomial chart basis (used by the rank-9 order)


def find_chart_basis(pulled: StructureConstantAlgebra, chart: Chart,
                     extra_generators: Sequence[tuple[str, Mapping[str, str]]],
                     bound: int = 3) -> list[tuple[str, Mapping[str, str]]]:
    """Search for the maximal basis of shape  w^-k * (original basis element)
    inside the subalgebra generated by the original basis and the extra
    generators, where w is the chart's exceptional variable and k <= bound.

    Works for orders whose defining relations are monomial-like, so products
    of "pure" elements (a unit scalar times w^m times one original basis
    element) stay pure whenever no slope-variable factor appears; impure
    products are ignored, and final closure is re-checked by
    :func:`adjoin_generators`.
    """
    laurent = chart.laurent_ring()
    n = pulled.dimension
    w_index = laurent._index[chart.exceptional_var]

    def purity(coords) -> Optional[tuple[int, int]]:
        support = [(k, c) for k, c in enumerate(coords) if not c.is_zero()]
        if len(support) != 1:
            return None
        k, c = support[0]
        if len(c.terms) != 1:
            return None
        (exps, scalar), = c.terms.items()
        if any(e != 0 for i, e in enumerate(exps) if i != w_index):
            return None
        return (k, exps[w_index])

    lifted_table = [[tuple(
        entry.map_coefficients(lambda s: s, laurent)
        for entry in pulled.table[i][j]) for j in range(n)] for i in range(n)]

    def multiply(left, right):
        out = [laurent.zero()] * n
        for i, ci in enumerate(left):
            if ci.is_zero():
                continue
            for j, cj in enumerate(right):
                if cj.is_zero():
                    continue
                scale = ci * cj
                row = lifted_table[i][j]
                for k in range(n):
                    if not row[k].is_zero():
                        out[k] = out[k] + scale * row[k]
        return out

    def monomial_vector(k, power):
        row = [laurent.zero()] * n
        exps = [0] * len(laurent.variables)
        exps[w_index] = power
        row[k] = laurent.monomial(tuple(exps))
        return row

    best: dict[int, int] = {k: 0 for k in range(n)}
    named: dict[tuple[int, int], str] = {}
    for label, combo in extra_generators:
        row = [laurent.zero()] * n
        for old_label, text in combo.items():
            row[pulled._index[old_label]] = laurent.parse(text)
        pure = purity(row)
        if pure is None:
            raise ClosureFailure(
                f"extra generator {label} is not a pure monomial element")
        k, power = pure
        named[(k, power)] = label
        if power < best[k]:
            best[k] = power

    while True:
        current = [monomial_vector(k, p) for k, p in best.items()]
        improved = False
        for left in current:
            for right in current:
                pure = purity(multiply(left, right))
                if pure is None:
                    continue
                k, power = pure
                if power < best[k] and -power <= bound:
                    best[k] = power
                    improved = True
        if not improved:
            break

    basis = []
    for k in range(n):
        if best[k] == 0:
            label = pulled.basis[k]
        else:
            label = named.get((k, best[k]), f"{pulled.basis[k]}_{-best[k]}")
        exps = [0] * len(laurent.variables)
        exps[w_index] = best[k]
        basis.append((label, {pulled.basis[k]: laurent.monomial(tuple(exps))}))
    return basis


# ---------------------------------------------------------------------------
# gluing on the chart overlap


@dataclass
class GluingReport:
    ok: bool
    transition: Optional[list[list[Polynomial]]]
    witness: Optional[str]
    failures: tuple[str, ...] = ()

    def entry(self, label2: str, label1: str, chart2: "ChartAlgebra",
              chart1: "ChartAlgebra") -> Polynomial:
        i = chart2.algebra._index[label2]
        j = chart1.algebra._index[label1]
        return self.transition[i][j]


def _overlap_embedding(chart_alg: ChartAlgebra, overlap: PolyRing):
    chart = chart_alg.chart
    bindings = {}
    for name, exps in chart.overlap_exponents.items():
        bindings[name] = overlap.monomial(tuple(exps))
    return [tuple(c.substitute(bindings) for c in row)
            for row in chart_alg.embedding]


def check_gluing(a1: ChartAlgebra, a2: ChartAlgebra, original_ring: PolyRing,
                 claims: Optional[Mapping[str, tuple[str, str]]] = None,
                 ) -> GluingReport:
    """Compare the two chart orders on the overlap.

    Both embeddings are rewritten over the overlap ring (all original
    variables invertible).  The transition matrix T with
    ``basis2 = T * basis1`` must exist with Laurent entries and unit-pivot
    inverse; optional ``claims`` assert specific entries, given as
    ``{label2: (label1, coefficient expression)}`` where the coefficient is
    parsed over the overlap ring extended by the slope variables.
    """
    overlap = original_ring.laurent(original_ring.variables)
    m1 = _overlap_embedding(a1, overlap)
    m2 = _overlap_embedding(a2, overlap)
    inv1 = invert_unit_pivot(m1, overlap)
    if inv1 is None:
        return GluingReport(False, None, witness="<first chart embedding>")
    n = len(m1)
    transition = [[sum((m2[i][a] * inv1[a][j] for a in range(n)),
                       overlap.zero()) for j in range(n)] for i in range(n)]
    if invert_unit_pivot(transition, overlap) is None:
        return GluingReport(False, transition, witness="<transition not invertible>")
    failures = []
    if claims:
        env = {name: overlap.var(name) for name in overlap.variables}
        env[a1.chart.slope_var] = overlap.monomial(
            tuple(a1.chart.overlap_exponents[a1.chart.slope_var]))
        env[a2.chart.slope_var] = overlap.monomial(
            tuple(a2.chart.overlap_exponents[a2.chart.slope_var]))
        for name, value in overlap.ctx._scalar_env().items():
            env.setdefault(name, overlap.from_scalar(value))
        from . import expr as _expr
        for label2, (label1, text) in claims.items():
            expected = _expr.parse_eval(text, env, overlap.from_int)
            i = a2.algebra._index[label2]
            j = a1.algebra._index[label1]
            row_ok = transition[i][j] == expected and all(
                transition[i][k].is_zero() for k in range(n) if k != j)
            if not row_ok:
                failures.append(label2)
    if failures:
        return GluingReport(False, transition, witness=failures[0],
                            failures=tuple(failures))
    return GluingReport(True, transition, witness=None)
