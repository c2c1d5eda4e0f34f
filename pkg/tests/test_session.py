import pytest
from hypothesis import given, settings, strategies as st

from rlab.groebner import Ideal, PrimeSpec
from rlab.modres import FreeComplex, ModulePresentation
from rlab.session import ParseError, UnitIdeal, parse_session, render_session

EXAMPLE = """\
# depth zero ring of dimension 1
field F101
ring R = poly(x1, x2) / ideal(x1^2, x1*x2)
module N = coker(rows=1, [[x1]])
prime m = ideal(x1, x2)
"""


def test_example_session():
    S = parse_session(EXAMPLE)
    assert S.declarations == 4
    assert S.field.name == "F101"
    assert isinstance(S.get("N"), ModulePresentation)
    assert isinstance(S.get("m"), PrimeSpec)
    assert S.get("m").is_maximal_graded()


def test_all_object_kinds():
    S = parse_session(
        """field QQ
ring R = poly(x, y)
ideal a = ideal(x)
prime p = ideal(x, y)
module K = coker(rows=2, [[x, 0],
                          [0, y]], degrees=[0, 1])
module F = free(2)
complex C = { bottom=0, ranks=[1, 1], d1=[[y]] }
"""
    )
    assert isinstance(S.get("a"), Ideal)
    assert list(S.get("K").degrees) == [0, 1]
    assert S.get("F").rank == 2
    assert isinstance(S.get("C"), FreeComplex)
    assert S.declarations == 7


def test_unit_ideal():
    with pytest.raises(UnitIdeal):
        parse_session("ring R = poly(x)/ideal(1)\n")


def test_duplicate_name():
    with pytest.raises(ParseError) as e:
        parse_session(EXAMPLE + "prime m = ideal(x1)\n")
    assert e.value.line == 6


@pytest.mark.parametrize(
    "text",
    [
        "field F100\nring R = poly(x)\n",
        "ring R = poly(x)\nring S = poly(y)\n",
        "module N = free(1)\n",
        "ring R = poly(x)\nmodule N = coker(rows=2, [[x]])\n",
        "ring R = poly(x, y)\nmodule N = coker(rows=1, [[x + y^2]], degrees=[0])\n",
        "ring R = poly(x)\ncomplex C = { bottom=0, ranks=[1, 1, 1], d1=[[x]], d2=[[x]] }\n",
        "ring R = poly(x)\nwidget w = ideal(x)\n",
        "",
    ],
)
def test_errors_carry_location(text):
    with pytest.raises(ParseError) as e:
        parse_session(text)
    assert e.value.line >= 1 and e.value.col >= 1


def test_round_trip_example():
    S = parse_session(EXAMPLE)
    T = parse_session(render_session(S))
    assert S == T
    assert S.content_hash() == T.content_hash()


_mono = st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(lambda e: sum(e) > 0)


def _mtext(e):
    return "*".join(f"{v}^{k}" for v, k in zip("xy", e) if k)


@st.composite
def sessions(draw):
    field = draw(st.sampled_from(["F101", "F7", "QQ"]))
    gens = draw(st.lists(_mono.filter(lambda e: sum(e) >= 2), max_size=2, unique=True))
    ring = "ring R = poly(x, y)" + (f" / ideal({', '.join(_mtext(g) for g in gens)})" if gens else "")
    lines = [f"field {field}", ring]
    for k in range(draw(st.integers(0, 3))):
        ncols = draw(st.integers(1, 3))
        cols = []
        for _ in range(ncols):
            a = draw(st.integers(1, 9))
            e = draw(_mono)
            cols.append(f"{a}*{_mtext(e)}")
        lines.append(f"module M{k} = coker(rows=1, [[{', '.join(cols)}]])")
    pg = draw(st.sampled_from(["x", "y", "x, y"]))
    lines.append(f"prime p = ideal({pg})")
    return "\n".join(lines) + "\n"


@settings(max_examples=40, deadline=None)
@given(sessions())
def test_round_trip_property(text):
    S = parse_session(text)
    once = render_session(S)
    T = parse_session(once)
    assert S == T
    assert render_session(T) == once
