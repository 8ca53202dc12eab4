import pytest

from cmatlas import blowup, structalg
from cmatlas.catalog import EX1, EX2
from cmatlas.scalars import make_field


@pytest.fixture(scope="session")
def ex1_ctx():
    return make_field(EX1.descriptor)


@pytest.fixture(scope="session")
def ex2_ctx():
    return make_field(EX2.descriptor)


@pytest.fixture(scope="session")
def ex1_algebra(ex1_ctx):
    return structalg.build_example_algebra("ex1", ex1_ctx)


@pytest.fixture(scope="session")
def ex2_algebra(ex2_ctx):
    return structalg.build_example_algebra("ex2", ex2_ctx)


def _charts(algebra, model):
    chart1, chart2 = blowup.standard_charts(algebra.ring)
    out = []
    for chart, recipe in ((chart1, model.chart1), (chart2, model.chart2)):
        pulled = blowup.pullback_relations(algebra, chart)
        if recipe.adjoined:
            chart_alg = blowup.adjoin_generators(pulled, chart,
                                                 list(recipe.adjoined))
        else:
            basis = blowup.find_chart_basis(pulled, chart,
                                            list(recipe.searched))
            chart_alg = blowup.adjoin_generators(pulled, chart, basis)
        out.append((chart, pulled, chart_alg, recipe))
    return out


@pytest.fixture(scope="session")
def ex1_charts(ex1_algebra):
    return _charts(ex1_algebra, EX1)


@pytest.fixture(scope="session")
def ex2_charts(ex2_algebra):
    return _charts(ex2_algebra, EX2)


@pytest.fixture(scope="session")
def ex1_quotients(ex1_charts):
    return [structalg.quotient_by_generators(chart_alg.algebra, recipe.kill)
            for (_, _, chart_alg, recipe) in ex1_charts]


@pytest.fixture(scope="session")
def ex2_quotients(ex2_charts):
    return [structalg.quotient_by_generators(chart_alg.algebra, recipe.kill)
            for (_, _, chart_alg, recipe) in ex2_charts]
