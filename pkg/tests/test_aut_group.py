import random
from fractions import Fraction

import pytest

from grasslines.aut_group import (
    BASE_OFF_V,
    EvenGenerator,
    ProjectiveMap,
    compensated_permutation,
    is_automorphism,
    o4_unipotent_blocks,
    rational_block_permutations,
    sample_automorphism,
    sample_odd_generator,
    sym2,
    transport_line,
    transport_point_in_V,
    transport_point_off_V,
)
from grasslines.errors import GeometryError
from grasslines.exact_algebra import RatMatrix
from grasslines.pencil import EQ2_A, EQ2_B, EQ3_A, EQ3_B, AntisymPencil
from grasslines.projective import ProjPoint, random_in, random_vector
from grasslines.section_model import OrbitLabel, SectionSpace, classify_orbit, sample_orbit
from grasslines.verify import random_invertible

I2 = ((1, 0), (0, 1))


def perm_matrix(sigma, scalars=(1, 1, 1)):
    return EvenGenerator((I2, I2, I2), sigma, tuple(Fraction(d) for d in scalars)).matrix()


@pytest.fixture(scope="module")
def Yc():
    """A non-standard even section: a random conjugate of the block form."""
    T = random_invertible(random.Random(99), 6)
    return SectionSpace(AntisymPencil(T.T() @ EQ2_A @ T, T.T() @ EQ2_B @ T))


def test_identity_and_scalars(Y):
    assert is_automorphism(Y, RatMatrix.identity(6))
    assert is_automorphism(Y, RatMatrix.identity(6).scale(-5))


def test_pure_block_swap_is_not_an_automorphism(Y):
    assert not is_automorphism(Y, perm_matrix((0, 2, 1)))


def test_compensated_swap_is_an_automorphism(Y):
    d = compensated_permutation((0, 2, 1))
    assert d == (1, Fraction(-1, 2), -2)
    assert is_automorphism(Y, perm_matrix((0, 2, 1), d))


def test_all_of_S3_is_realizable(Y):
    perms = rational_block_permutations()
    assert len(perms) == 6
    for sigma, d in perms.items():
        assert is_automorphism(Y, perm_matrix(sigma, d))


def test_rescaling_invariance(Y, rng):
    for _ in range(10):
        T = sample_automorphism(Y, rng).matrix
        for c in (2, Fraction(-1, 3)):
            assert is_automorphism(Y, T.scale(c))
    M = random_invertible(rng, 6)
    assert is_automorphism(Y, M) == is_automorphism(Y, M.scale(7))


def test_random_matrix_is_rarely_an_automorphism(Y, rng):
    assert sum(is_automorphism(Y, random_invertible(rng, 6)) for _ in range(20)) == 0


@pytest.mark.parametrize("which", ["Y", "Yc", "X"])
def test_group_closure(which, request, rng):
    s = request.getfixturevalue(which)
    for _ in range(5):
        T1, T2 = sample_automorphism(s, rng), sample_automorphism(s, rng)
        assert is_automorphism(s, T1 @ T2)
        assert is_automorphism(s, T1.inverse())


def test_odd_generators_checked(X, rng):
    for _ in range(10):
        M = sample_odd_generator(rng).matrix()
        if M is not None:
            assert is_automorphism(X, M)


def test_odd_sampler_needs_standard_form(rng):
    T = random_invertible(random.Random(4), 5)
    s = SectionSpace(AntisymPencil(T.T() @ EQ3_A @ T, T.T() @ EQ3_B @ T))
    with pytest.raises(GeometryError):
        sample_automorphism(s, rng)


def test_sym2_of_diagonal():
    g = RatMatrix([[2, 0], [0, 3]])
    # coordinates ordered (mu^2, mu*lam, lam^2)
    assert sym2(g) == RatMatrix([[9, 0, 0], [0, 6, 0], [0, 0, 4]])


def test_sym2_is_multiplicative():
    g, h = RatMatrix([[1, 2], [0, 1]]), RatMatrix([[2, -1], [3, 1]])
    assert sym2(g @ h) == sym2(g) @ sym2(h)


def test_projective_map_normalizes():
    T = ProjectiveMap(RatMatrix([[0, 2], [4, 6]]))
    assert T.matrix == RatMatrix([[0, 1], [2, 3]])
    with pytest.raises(GeometryError):
        ProjectiveMap(RatMatrix([[1, 2], [2, 4]]))


def test_orbit_preserved_by_sampled_automorphisms(Y, rng):
    for label in OrbitLabel:
        for _ in range(5):
            x = sample_orbit(Y, label, rng)
            T = sample_automorphism(Y, rng)
            assert classify_orbit(Y, T.apply_line(x)) is label


def test_transport_off_V(Y, rng):
    q = (2, -1, 1, 3, -2, 5)
    T = transport_point_off_V(Y, q)
    assert T.apply_point(BASE_OFF_V) == ProjPoint.of(q)
    with pytest.raises(GeometryError):
        transport_point_off_V(Y, (0, 0, 1, 2, 3, 4))


def test_transport_in_V(Yc, rng):
    for _ in range(5):
        a, b = Yc.lines[0], Yc.lines[1]
        p = tuple(x + y for x, y in zip(random_in(a, rng), random_in(b, rng)))
        q = tuple(x + y for x, y in zip(random_in(b, rng), random_in(Yc.lines[2], rng)))
        T = transport_point_in_V(Yc, p, q)
        assert T.apply_point(p) == ProjPoint.of(q)


@pytest.mark.parametrize("label", list(OrbitLabel))
def test_transport_line_each_orbit(label, Y, Yc, rng):
    for s in (Y, Yc):
        for _ in range(3):
            x, x2 = sample_orbit(s, label, rng), sample_orbit(s, label, rng)
            T = transport_line(s, x, x2)
            assert is_automorphism(s, T) and T.apply_line(x) == x2.line


def test_transport_rejects_mixed_orbits(Y, rng):
    with pytest.raises(GeometryError):
        transport_line(Y, sample_orbit(Y, "o1", rng), sample_orbit(Y, "o4", rng))


def test_o4_unipotent_blocks():
    q = (3, 1, Fraction(1, 2), -2, -4, 1)
    B = RatMatrix.block_diag(*[RatMatrix(b) for b in o4_unipotent_blocks(q)])
    assert B.apply((1, 1, 1, -2, 1, 1)) == tuple(Fraction(x) for x in q)
    assert B.apply(BASE_OFF_V) == tuple(Fraction(x) for x in BASE_OFF_V)
    with pytest.raises(GeometryError):
        o4_unipotent_blocks((1, 2, 1, -2, 1, 1))


def test_unipotent_blocks_give_automorphisms(Y):
    rng = random.Random(3)
    for _ in range(10):
        v = random_vector(rng, 3)
        B = RatMatrix.block_diag(*[RatMatrix(b) for b in o4_unipotent_blocks((v[0], 1, v[1], -2, v[2], 1))])
        assert is_automorphism(Y, B)
