"""The two built-in singularities, with everything the verification
pipeline needs: field tower, defining identities, chart generators,
reduction ideals, expected curve relations, gluing transitions and divisor
factor lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .scalars import FieldDescriptor


@dataclass(frozen=True)
class ChartRecipe:
    adjoined: tuple[tuple[str, Mapping[str, str]], ...]  # explicit new basis rows
    searched: tuple[tuple[str, Mapping[str, str]], ...]  # generators for basis search
    kill: tuple[str, ...]                # reduction-ideal generators on this chart
    curve_rhs: str                       # expected w^n value in chart coordinates
    relations: tuple[tuple[str, str], ...]   # identities of the pulled-back order
    divisor_factors: tuple[str, ...]     # ramification components, chart coordinates


@dataclass(frozen=True)
class SingularityModel:
    key: str
    title: str
    descriptor: FieldDescriptor
    forbidden_parameter_values: tuple[int, ...]
    identities: tuple[tuple[str, str], ...]       # lhs, rhs over the main order
    discriminant_factors: tuple[str, ...]         # over ctx[u, v]
    chart1: ChartRecipe
    chart2: ChartRecipe
    gluing: tuple[tuple[str, tuple[str, str]], ...]   # label2 -> (label1, factor)
    unchecked: tuple[str, ...] = ()

    def prime_descriptor(self, prime: int, lam: Optional[int]) -> FieldDescriptor:
        bindings = tuple()
        if self.descriptor.transcendentals:
            if lam is None:
                raise ValueError("parameter binding required in prime mode")
            bindings = ((self.descriptor.transcendentals[0], lam),)
        return FieldDescriptor(base=prime,
                               transcendentals=self.descriptor.transcendentals,
                               extensions=self.descriptor.extensions,
                               bindings=bindings)


_COMMON_UNCHECKED = (
    "maximality of the order is assumed, not verified",
    "first cohomology of the resolution structure sheaf is assumed to be "
    "one-dimensional (sheaf cohomology is out of scope)",
    "ramification indices at the nodes of the exceptional divisor are not "
    "verified (needs completion-local data)",
)


EX1 = SingularityModel(
    key="ex1",
    title="quaternion-type order with quadrilateral ramification",
    descriptor=FieldDescriptor(
        base="Q",
        transcendentals=("lam",),
        extensions=(("eps", "T^2 - (1 + lam)"),),
    ),
    forbidden_parameter_values=(0, 1),
    identities=(
        ("x*x", "v"),
        ("y*y", "u*(u^2 + lam*v^2)"),
        ("x*y + y*x", "2*eps*u*v"),
        ("z*z", "2*eps*u*v*z - u*v*(u^2 + lam*v^2)"),
        ("(z - eps*u*v)^2", "u*v*(u - v)*(lam*v - u)"),
    ),
    discriminant_factors=("u", "v", "u - v", "u - lam*v"),
    chart1=ChartRecipe(
        adjoined=(
            ("1", {"1": "1"}),
            ("x", {"x": "1"}),
            ("y1", {"y": "v^-1"}),
            ("z1", {"z": "v^-2", "1": "-eps*xi"}),
        ),
        searched=(),
        kill=("x",),
        curve_rhs="xi*(xi - 1)*(lam - xi)",
        relations=(
            ("x*x", "v"),
            ("y*y", "xi*(xi^2 + lam)*v^3"),
            ("x*y + y*x", "2*eps*xi*v^2"),
            ("z*z", "2*eps*xi*v^2*z - xi*v^4*(xi^2 + lam)"),
        ),
        divisor_factors=("xi", "v", "xi - 1", "xi - lam"),
    ),
    chart2=ChartRecipe(
        adjoined=(
            ("1", {"1": "1"}),
            ("x", {"x": "1"}),
            ("y2", {"y": "u^-1"}),
            ("z2", {"z": "u^-2", "1": "-eps*eta"}),
        ),
        searched=(),
        kill=("x", "y2"),
        curve_rhs="eta*(1 - eta)*(lam*eta - 1)",
        relations=(
            ("x*x", "eta*u"),
            ("y*y", "u^3*(1 + lam*eta^2)"),
            ("x*y + y*x", "2*eps*eta*u^2"),
            ("z*z", "2*eps*eta*u^2*z - eta*u^4*(1 + eta^2*lam)"),
        ),
        divisor_factors=("u", "eta", "1 - eta", "1 - lam*eta"),
    ),
    gluing=(
        ("1", ("1", "1")),
        ("x", ("x", "1")),
        ("y2", ("y1", "eta")),
        ("z2", ("z1", "eta^2")),
    ),
    unchecked=_COMMON_UNCHECKED,
)


EX2 = SingularityModel(
    key="ex2",
    title="cubic symbol-type order with triangular ramification",
    descriptor=FieldDescriptor(
        base="Q",
        extensions=(("zeta", "T^2 + T + 1"),),
    ),
    forbidden_parameter_values=(),
    identities=(
        ("x^3", "v"),
        ("y^3", "u*(u - v)"),
        ("x*y", "zeta*y*x"),
        ("(x*y)^3", "x^3*y^3"),
        ("(x*y)^3", "u*v*(u - v)"),
    ),
    discriminant_factors=("u", "v", "u - v"),
    chart1=ChartRecipe(
        adjoined=(),
        searched=(
            ("w1", {"y2": "v^-1"}),
            ("z1", {"xy": "v^-1"}),
        ),
        kill=("x",),
        curve_rhs="xi*(xi - 1)",
        relations=(
            ("x^3", "v"),
            ("y^3", "xi*(xi - 1)*v^2"),
            ("x*y", "zeta*y*x"),
        ),
        divisor_factors=("xi", "v", "xi - 1"),
    ),
    chart2=ChartRecipe(
        adjoined=(),
        searched=(
            ("w2", {"y2": "u^-1"}),
            ("z2", {"xy": "u^-1"}),
        ),
        kill=("x", "w2"),
        curve_rhs="eta*(1 - eta)",
        relations=(
            ("x^3", "eta*u"),
            ("y^3", "u^2*(1 - eta)"),
            ("x*y", "zeta*y*x"),
        ),
        divisor_factors=("u", "eta", "1 - eta"),
    ),
    gluing=(
        ("1", ("1", "1")),
        ("x", ("x", "1")),
        ("x2", ("x2", "1")),
        ("y", ("y", "1")),
        ("z2", ("z1", "eta")),
        ("x2y_1", ("x2y_1", "eta")),
        ("w2", ("w1", "eta")),
        ("xy2_1", ("xy2_1", "eta")),
        ("x2y2_2", ("x2y2_2", "eta^2")),
    ),
    unchecked=_COMMON_UNCHECKED + (
        "terminality of the resolved order is only verified through the "
        "divisor-geometry conditions in scope",
    ),
)


MODELS = {"ex1": EX1, "ex2": EX2}


def get_model(key: str) -> SingularityModel:
    if key not in MODELS:
        raise KeyError(f"unknown example {key!r}; choose from {sorted(MODELS)}")
    return MODELS[key]
