import pytest

from grasslines.errors import GeometryError, NotMemberError
from grasslines.projective import line_through, meet, random_vector, span
from grasslines.section_model import (
    OrbitLabel,
    SectionPoint,
    check_meets_all_V,
    classify_orbit,
    membership,
    sample_member,
    sample_member_through,
    sample_orbit,
)
from grasslines.verify import EVEN_REPRESENTATIVES, ODD_REPRESENTATIVES

from conftest import e

O1, O2, O3, O4 = OrbitLabel


def test_representatives_are_classified(X, Y):
    for reps, s in ((ODD_REPRESENTATIVES, X), (EVEN_REPRESENTATIVES, Y)):
        for label, pq in reps.items():
            assert classify_orbit(s, s.point(pq)) is label


def test_exceptional_lines_are_not_members(Y):
    for li in Y.lines:
        assert not membership(Y, li)
        assert Y.pairings(li) != (0, 0)


def test_point_rejects_non_member(Y):
    with pytest.raises(NotMemberError) as info:
        Y.point((e(6, 0), e(6, 1)))
    assert info.value.pairings == (-1, -1)


def test_V_spaces(Y):
    assert Y.V[0] == span(e(6, 2), e(6, 3), e(6, 4), e(6, 5))
    assert meet(Y.V[0], Y.V[1]) == Y.lines[2]


def test_conic_and_plane(X):
    assert X.plane == span(e(5, 2), e(5, 3), e(5, 4))
    assert X.conic.contains(e(5, 2)) and X.conic.contains(e(5, 4))
    assert not X.conic.contains(e(5, 3))
    assert X.conic.is_tangent(span(e(5, 2), e(5, 3)))
    assert not X.conic.is_tangent(span(e(5, 2), e(5, 4)))


def test_sampled_orbits_round_trip(X, Y, rng):
    for s in (X, Y):
        for label in OrbitLabel:
            for _ in range(10):
                x = sample_orbit(s, label, rng)
                assert s.contains(x.line)
                assert x.orbit is label and classify_orbit(s, x) is label


def test_sample_member_covers_all_orbits(Y, rng):
    seen = {sample_member(Y, rng).orbit for _ in range(60)}
    assert seen == set(OrbitLabel)


def test_sample_through_point(Y, rng):
    p = (1, 2, 0, -1, 3, 1)
    for _ in range(10):
        x = sample_member_through(Y, p, rng)
        assert Y.contains(x.line) and x.line.contains(p)


def test_general_point_is_usually_o4(Y, rng):
    # o4 is open and dense: lines through a random point land there almost always
    labels = [classify_orbit(Y, sample_member_through(Y, random_vector(rng, 6), rng)) for _ in range(40)]
    assert labels.count(O4) >= 36


def test_meets_all_V_on_members(Y, rng):
    for label in OrbitLabel:
        for _ in range(10):
            assert check_meets_all_V(Y, sample_orbit(Y, label, rng))


def test_meets_all_V_needs_membership(Y):
    # meets V_1 but neither V_2 nor V_3; it is not on the section
    line = line_through(e(6, 2, 4), e(6, 0, 3, 5))
    assert not Y.contains(line)
    assert not check_meets_all_V(Y, line)


def test_meets_all_V_is_even_only(X):
    with pytest.raises(GeometryError):
        check_meets_all_V(X, X.point(ODD_REPRESENTATIVES[O1]))


def test_odd_members_meet_plane_on_conic(X, rng):
    for _ in range(30):
        x = sample_orbit(X, O3, rng)
        m = meet(x.line, X.plane)
        assert m is not None and m.dim == 0 and X.conic.contains(m.rows[0])


def test_section_point_equality_ignores_label():
    ln = line_through(e(6, 0), e(6, 2))
    assert SectionPoint(ln, O1) == SectionPoint(ln)
