"""Decision-frame lattice tests, exhaustive against set-based oracles."""

import itertools

import pytest

from ermcda.errors import ExpressionError, FrameError
from ermcda.frame import Atom, FrameMode, build_frame, frame_from_labels

from conftest import dsmt_frame, dst_frame
from oracles import family_from_terms, free_lattice_families


def element_family(el, n):
    """Region family of an engine element, built only from its DNF terms."""
    terms = [
        frozenset(i for i in range(n) if mask >> i & 1) for mask in el.terms
    ]
    return family_from_terms(terms, n)


# ---------------------------------------------------------------------------
# enumeration


def test_dst_element_counts():
    for n in range(2, 5):
        assert len(dst_frame(n).elements) == 2**n - 1


@pytest.mark.parametrize("n,expected", [(2, 4), (3, 18), (4, 166)])
def test_dsmt_element_counts_match_brute_force(n, expected):
    families = free_lattice_families(n)
    assert len(families) == expected
    frame = dsmt_frame(n)
    assert len(frame.elements) == expected
    assert {element_family(el, n) for el in frame.elements} == families


def test_element_order_is_by_generalized_cardinality():
    for frame in (dst_frame(3), dsmt_frame(3)):
        cards = [el.dsm_cardinality() for el in frame.elements]
        assert cards == sorted(cards)
        assert frame.elements[-1] == frame.theta


def test_atom_limits():
    frame_from_labels(list("abcdef"), "DST")
    with pytest.raises(FrameError):
        frame_from_labels(list("abcdefg"), "DST")
    frame_from_labels(list("abcd"), "DSmT")
    with pytest.raises(FrameError):
        frame_from_labels(list("abcde"), "DSmT")


def test_atom_validation():
    with pytest.raises(FrameError):
        frame_from_labels(["a", "a"], "DST")
    with pytest.raises(FrameError):
        frame_from_labels(["a+b", "c"], "DST")
    with pytest.raises(FrameError):
        build_frame([], FrameMode.DST)


# ---------------------------------------------------------------------------
# lattice operations vs the oracle, exhaustively for n <= 3


@pytest.mark.parametrize("n", [2, 3])
def test_dst_ops_exhaustive(n):
    frame = dst_frame(n)
    sets = {el: el.atom_ids() for el in frame.elements}
    for a, b in itertools.product(frame.elements, repeat=2):
        assert frame.includes(a, b) == (sets[b] <= sets[a])
        assert frame.intersects(a, b) == bool(sets[a] & sets[b])
        c = frame.intersect(a, b)
        if sets[a] & sets[b]:
            assert sets[c] == sets[a] & sets[b]
        else:
            assert c.is_empty
        assert sets[frame.union(a, b)] == sets[a] | sets[b]


@pytest.mark.parametrize("n", [2, 3])
def test_dsmt_ops_exhaustive(n):
    frame = dsmt_frame(n)
    fams = {el: element_family(el, n) for el in frame.elements}
    for a, b in itertools.product(frame.elements, repeat=2):
        assert frame.includes(a, b) == (fams[b] <= fams[a])
        c = frame.intersect(a, b)
        assert not c.is_empty
        assert fams[c] == fams[a] & fams[b]
        assert fams[frame.union(a, b)] == fams[a] | fams[b]
        assert frame.intersects(a, b)


@pytest.mark.parametrize("make", [dst_frame, dsmt_frame])
def test_intersection_table_matches_intersect(make):
    frame = make(3)
    table = frame.intersection_table()
    for i, a in enumerate(frame.elements):
        for j, b in enumerate(frame.elements):
            c = frame.intersect(a, b)
            assert table[i][j] == (-1 if c.is_empty else c.index)
    ti = frame.theta.index
    for j, el in enumerate(frame.elements):
        assert table[ti][j] == j == table[j][ti]
    rows = frame.intersection_rows()
    assert [list(r) for r in rows] == table.tolist()


# ---------------------------------------------------------------------------
# expressions


@pytest.mark.parametrize("make", [dst_frame, dsmt_frame])
def test_expression_round_trip_exhaustive(make):
    frame = make(3)
    for el in frame.elements:
        assert frame.parse(el.expression()) == el


def test_expression_canonicalization():
    frame = dsmt_frame(3)
    assert frame.parse("t0 + t0.t1") == frame.parse("t0")
    assert frame.parse("t1.t0") == frame.parse("t0.t1")
    assert frame.parse("(t0 + t1).t2") == frame.parse("t0.t2 + t1.t2")
    assert frame.parse("t0+t1+t2") == frame.theta


def test_expression_errors():
    frame = dst_frame(2)
    with pytest.raises(ExpressionError):
        frame.parse("nope")
    with pytest.raises(ExpressionError):
        frame.parse("t0 +")
    with pytest.raises(ExpressionError):
        frame.parse("")
    with pytest.raises(ExpressionError):
        frame.parse("t0.t1")  # empty in an exclusive frame


def test_dst_binding_precedence():
    frame = dsmt_frame(3)
    assert frame.parse("t0 + t1.t2") == frame.union(
        frame.atom_element("t0"),
        frame.intersect(frame.atom_element("t1"), frame.atom_element("t2")),
    )


# ---------------------------------------------------------------------------
# frame identity and cross-frame safety


def test_signature_and_cross_frame_rejection():
    a = dst_frame(2)
    b = dst_frame(2)
    c = dsmt_frame(2)
    assert a.signature == b.signature
    assert a.signature != c.signature
    with pytest.raises(FrameError):
        a.intersect(a.elements[0], c.elements[0])


def test_complement_dst():
    frame = dst_frame(3)
    t0 = frame.atom_element("t0")
    assert frame.complement(t0).atom_ids() == frozenset({1, 2})
    assert frame.complement(frame.theta).is_empty


def test_atoms_carry_severity_order():
    frame = frame_from_labels(["low", "mid", "high"], "DST")
    assert [a.severity_rank for a in frame.atoms] == [0, 1, 2]
    assert isinstance(frame.atoms[0], Atom)
