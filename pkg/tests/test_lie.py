import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torusbound import lie
from torusbound.exactnum import DomainError


def test_weyl_orders():
    assert lie.weyl_order(lie.Simple("A", 1)) == 2
    assert lie.weyl_order(lie.Simple("B", 2)) == 8
    assert lie.weyl_order(lie.Simple("D", 3)) == 24
    assert lie.weyl_order(lie.GroupDescriptor.parse("B:2,T:1,A:1")) == 16


def test_descriptor_validation():
    with pytest.raises(DomainError):
        lie.Simple("D", 1)
    with pytest.raises(DomainError):
        lie.Simple("E", 6)
    with pytest.raises(DomainError):
        lie.GroupDescriptor.parse("B2")


def test_chi_examples():
    assert lie.euler_characteristic(lie.ComplexProjective(5)) == 6
    assert lie.euler_characteristic(lie.RealGrassmannian(2, 4)) == 6
    assert lie.grassmannian_weyl_quotient(2, 4) == 24 // (1 * 4)
    assert lie.euler_characteristic(lie.RealGrassmannian(2, 3)) == 4
    assert lie.grassmannian_weyl_quotient(2, 3) == 8 // 2
    assert lie.euler_characteristic(lie.Sphere(2)) == 2
    assert lie.euler_characteristic(lie.CayleyPlane()) == 3


def _so_weyl(k: int) -> int:
    # independent: |W(SO(2j))| = 2^(j-1) j!, |W(SO(2j+1))| = 2^j j!
    if k <= 2:
        return 1
    j = k // 2
    return 2**j * math.factorial(j) if k % 2 else 2 ** (j - 1) * math.factorial(j)


def test_grassmannians_dual_computation_up_to_200():
    disagreements = []
    for m in range(1, 201):
        for p in (2, 3):
            if p == 3 and m % 2:
                continue
            closed = lie.grassmannian_closed_form(p, m)
            weyl = lie.grassmannian_weyl_quotient(p, m)
            oracle = _so_weyl(p + m) // (_so_weyl(p) * _so_weyl(m))
            expected = m + 2 if m % 2 == 0 else m + 1
            if not (closed == weyl == oracle == expected == lie.euler_characteristic(lie.RealGrassmannian(p, m))):
                disagreements.append((p, m, closed, weyl, oracle))
            assert lie.dimension(lie.RealGrassmannian(p, m)) == p * m
    assert disagreements == []


def test_odd_rank_three_grassmannian_rejected():
    with pytest.raises(DomainError):
        lie.euler_characteristic(lie.RealGrassmannian(3, 5))
    with pytest.raises(DomainError):
        lie.euler_characteristic(lie.RealGrassmannian(4, 4))


def test_projective_spaces_via_weyl_quotient():
    for m in range(0, 30):
        assert lie.weyl_quotient(lie.ComplexProjective(m)) == m + 1
        assert lie.weyl_quotient(lie.QuaternionicProjective(m)) == m + 1
    for d in range(0, 40, 2):
        assert lie.weyl_quotient(lie.Sphere(d)) == 2
    assert lie.weyl_quotient(lie.Sphere(3)) is None


spaces = st.one_of(
    st.builds(lie.Sphere, st.integers(0, 12)),
    st.builds(lie.ComplexProjective, st.integers(0, 12)),
    st.builds(lie.QuaternionicProjective, st.integers(0, 6)),
    st.just(lie.CayleyPlane()),
    st.builds(lie.RealGrassmannian, st.just(2), st.integers(1, 40)),
)


@given(st.lists(spaces, min_size=1, max_size=4))
def test_chi_and_dimension_multiplicative(factors):
    product = lie.Product(tuple(factors))
    assert lie.euler_characteristic(product) == math.prod(lie.euler_characteristic(f) for f in factors)
    assert lie.dimension(product) == sum(lie.dimension(f) for f in factors)


def test_parse_space():
    sp = lie.parse_space("GR:2:4xS:2xCaP2")
    assert lie.euler_characteristic(sp) == 6 * 2 * 3
    assert lie.dimension(sp) == 8 + 2 + 16
    assert lie.describe(lie.parse_space("CP:3")) == "CP^3"
    with pytest.raises(DomainError):
        lie.parse_space("GR:2")
    with pytest.raises(DomainError):
        lie.parse_space("T:3")
