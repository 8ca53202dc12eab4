"""cmatlas: exact verification of two non-commutative surface singularities
and the classification atlas of their Cohen-Macaulay modules."""

from .scalars import FieldDescriptor, FieldContext, ScalarElement, make_field
from .polyring import PolyRing, Polynomial
from .structalg import (StructureConstantAlgebra, AlgebraElement,
                        build_example_algebra, verify_identity)
from .bundles import (AtiyahBundle, BundleSum, CMClass, PicPoint, INFINITY,
                      TRIVIAL, enumerate_cm, brute_force_full)
from .excurve import CurveDescriptor, PlaneCurveChart, classify_tameness
from .verify import VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "FieldDescriptor", "FieldContext", "ScalarElement", "make_field",
    "PolyRing", "Polynomial",
    "StructureConstantAlgebra", "AlgebraElement", "build_example_algebra",
    "verify_identity",
    "AtiyahBundle", "BundleSum", "CMClass", "PicPoint", "INFINITY", "TRIVIAL",
    "enumerate_cm", "brute_force_full",
    "CurveDescriptor", "PlaneCurveChart", "classify_tameness",
    "VerificationReport", "run_verification",
    "__version__",
]
