import pytest

from gsft.groupring import GRElem, u_element
from gsft.polymat import GRPoly, MatGRPoly
from gsft.parsing import ParseError, parse_document, render_document


def test_simple_document():
    doc = parse_document("group cyclic 2\nA = [[e+g]]\n")
    assert doc.group.order == 2
    a = doc.matrices["A"]
    assert a.rows == 1
    assert a.entries[0][0] == GRPoly.const(u_element(doc.group))


def test_nzc_example_document():
    doc = parse_document("group cyclic 1\nA = [[t, 3+t^3],[2*t^5, t]]\n")
    a = doc.matrices["A"]
    g = doc.group
    assert a.entries[0][1] == GRPoly.const(GRElem.basis(g, 0, 3)) + GRPoly.t(g, 3)
    assert a.entries[1][0] == GRPoly.t(g, 5).scale(2)


def test_coefficients_words_powers():
    doc = parse_document("group cyclic 4\nA = [[2*e + g - 3*g^2, g^5*t]]\n")
    g = doc.group
    entry = doc.matrices["A"].entries[0][0]
    assert entry == GRPoly.const(GRElem(g, [2, 1, -3, 0]))
    # g^5 = g over C4
    assert doc.matrices["A"].entries[0][1] == GRPoly.term(GRElem.basis(g, 1), 1)


def test_word_products():
    doc = parse_document("group dihedral 4\nA = [[s*r^2]]\n")
    g = doc.group
    assert doc.matrices["A"].entries[0][0] == GRPoly.const(
        GRElem.basis(g, g.index_of("s*r^2"))
    )


def test_cycle_names():
    doc = parse_document("group symmetric 4\nA = [[(143)*(123)*(12)(34)]]\n")
    g = doc.group
    # abc = e
    assert doc.matrices["A"].entries[0][0] == GRPoly.one(g)


def test_product_group_pairs():
    doc = parse_document("group product(cyclic 2, cyclic 2)\nA = [[(g,e) + (e,g)]]\n")
    g = doc.group
    entry = doc.matrices["A"].entries[0][0]
    assert entry.coeff(0).coeffs.count(1) == 2


def test_params():
    doc = parse_document("group cyclic 2\nn = 8\ntol = 1e-6\ntwist = g\n")
    assert doc.params["n"] == 8
    assert doc.params["tol"] == 1e-6
    assert doc.params["twist"] == "g"


def test_multiline_matrices_and_comments():
    text = """# a comment
group cyclic 2
A = [[e, g],
     [g, e]]  # trailing comment
"""
    doc = parse_document(text)
    assert doc.matrices["A"].rows == 2


def test_malformed_bracket_has_position():
    with pytest.raises(ParseError) as exc:
        parse_document("group cyclic 2\nA = [[e, g],\n[g]]\n")
    assert "line" in str(exc.value)


def test_unknown_element():
    with pytest.raises(ParseError) as exc:
        parse_document("group cyclic 2\nA = [[h]]\n")
    assert "unknown group element" in str(exc.value)


def test_missing_group():
    with pytest.raises(ParseError):
        parse_document("A = [[e]]\n")


def test_roundtrip_render_parse():
    text = """group cyclic 4
A = [[2*e+g-3*g^3, g*t],[0, 5*e*t^2]]
n = 6
"""
    doc = parse_document(text)
    rendered = render_document(doc)
    doc2 = parse_document(rendered)
    assert doc2.group_spec == doc.group_spec
    assert doc2.params == doc.params
    for name in doc.matrices:
        assert doc2.matrices[name] == doc.matrices[name]
    # canonical text is a fixed point of the round trip
    assert render_document(doc2) == rendered


def test_roundtrip_symmetric_group():
    text = "group symmetric 3\nB = [[(12)+2*(123)*t^2]]\n"
    doc = parse_document(text)
    rendered = render_document(doc)
    assert parse_document(rendered).matrices["B"] == doc.matrices["B"]


def test_negative_entries():
    doc = parse_document("group cyclic 2\nA = [[-e+2*g, -3*g*t]]\n")
    g = doc.group
    assert doc.matrices["A"].entries[0][0] == GRPoly.const(GRElem(g, [-1, 2]))
    assert doc.matrices["A"].entries[0][1] == GRPoly.term(GRElem.basis(g, 1, -3), 1)
