import numpy as np
import pytest

from cayley_wrap.algebra import CdNumber, cd_inverse, cd_mul, generator
from cayley_wrap.bar import VectorWord
from cayley_wrap.errors import ContractViolation, DivisionByZeroError
from cayley_wrap.simplicial_forms import (
    FormFamily,
    TangentWord,
    canonical_A_family,
    canonical_B_family,
    check_compatibility,
    codegeneracy_times,
    coface_times,
    eval_canonical_A,
    eval_canonical_AB1,
    eval_canonical_B,
    eval_canonical_B2,
    perturbed_family,
    random_tangent_word,
    vector_word_residual,
)

from .conftest import dyadic


def _cd(rng, level):
    return CdNumber(level, rng.normal(size=1 << level))


def test_zero_velocities_give_zero_word(rng):
    x = random_tangent_word(rng, "A", 3, 3, 3)
    zero = x.scaled(0.0)
    assert eval_canonical_A(zero).is_zero
    y = random_tangent_word(rng, "B", 2, 2, 2)
    assert eval_canonical_B(y.scaled(0.0)).is_zero


def test_identity_head_returns_velocity():
    h = CdNumber(3, np.arange(8.0))
    x = TangentWord("A", 3, (), (), (), CdNumber.one(3), h)
    assert eval_canonical_A(x) == VectorWord("A", 3, (), (), h)


def test_single_b_letter_at_i1():
    x = TangentWord("B", 2, (0.5,), (generator(2, 1),), (CdNumber.one(2),))
    assert eval_canonical_B(x) == VectorWord("B", 2, (0.5,), (-generator(2, 1),))


def test_projection_compatibility_by_hand():
    z = [CdNumber(2, [1.0, 1.0, 0.0, 0.0]), CdNumber(2, [0.0, 0.0, 2.0, 0.0])]
    v = [CdNumber(2, [0.0, 1.0, 1.0, 0.0]), CdNumber(2, [1.0, 0.0, 0.0, 1.0])]
    a = TangentWord("A", 2, (0.25, 0.5), z, v, CdNumber(2, [0.0, 0.0, 0.0, 4.0]), CdNumber.one(2))
    b = TangentWord("B", 2, (0.25, 0.5), z, v)
    va, vb = eval_canonical_A(a), eval_canonical_B(b)
    assert vb == VectorWord("B", 2, va.times, va.letters)
    # (1 + i1)^{-1}(i1 + i2) = (1 - i1)(i1 + i2)/2 = (1 + i1 + i2 - i3)/2
    assert vb.letters[0] == CdNumber(2, [0.5, 0.5, 0.5, -0.5])


def test_linear_in_velocities_exactly(rng):
    # base letters with |z|^2 a power of two and dyadic data keep every step exact
    level = 3
    for _ in range(50):
        z = [CdNumber(level, rng.choice([-1.0, 1.0], size=8)) for _ in range(3)]
        v = [CdNumber(level, dyadic(rng, 8)) for _ in range(3)]
        w = [CdNumber(level, dyadic(rng, 8)) for _ in range(3)]
        a, b = dyadic(rng), dyadic(rng)
        t = (0.25, 0.5, 0.75)
        combo = [a * vi + b * wi for vi, wi in zip(v, w)]
        lhs = eval_canonical_B(TangentWord("B", level, t, z, combo))
        ev = eval_canonical_B(TangentWord("B", level, t, z, v))
        ew = eval_canonical_B(TangentWord("B", level, t, z, w))
        rhs = [a * p + b * q for p, q in zip(ev.letters, ew.letters)]
        assert list(lhs.letters) == [r for r in rhs if not r.is_zero()]


def test_equivariance_quaternions(rng):
    for _ in range(200):
        h, z, v = (_cd(rng, 2) for _ in range(3))
        lhs = cd_mul(cd_inverse(cd_mul(h, z)), cd_mul(h, v))
        assert lhs.allclose(cd_mul(cd_inverse(z), v), 1e-12 * (1 + v.norm() / z.norm()))


def _two_generated(rng):
    """Three random elements of the (associative) subalgebra generated by two octonions."""
    a, b = (CdNumber(3, np.r_[0.0, rng.normal(size=7)]) for _ in range(2))
    ab = cd_mul(a, b)
    basis = [CdNumber.one(3), a, b, ab]
    return [sum((c * e for c, e in zip(rng.normal(size=4), basis)), CdNumber.zero(3))
            for _ in range(3)]


def test_equivariance_octonions_in_associative_subalgebra(rng):
    for _ in range(200):
        h, z, v = _two_generated(rng)
        lhs = cd_mul(cd_inverse(cd_mul(h, z)), cd_mul(h, v))
        assert lhs.allclose(cd_mul(cd_inverse(z), v), 1e-11 * max(1.0, v.norm() / z.norm()))
        # two successive translations
        s1, s2 = h, z
        g, dg = v, cd_mul(h, z)
        inv = cd_mul(cd_mul(cd_inverse(g), cd_inverse(s1)), cd_inverse(s2))
        moved = cd_mul(s2, cd_mul(s1, dg))
        assert cd_mul(inv, moved).allclose(cd_mul(cd_inverse(g), dg), 1e-10)


def test_equivariance_fails_for_generic_octonions(rng):
    worst = 0.0
    for _ in range(50):
        h, z, v = (_cd(rng, 3) for _ in range(3))
        lhs = cd_mul(cd_inverse(cd_mul(h, z)), cd_mul(h, v))
        worst = max(worst, (lhs - cd_mul(cd_inverse(z), v)).norm())
    assert worst > 0.1


def test_zero_base_letter():
    x = TangentWord("B", 2, (0.5,), (CdNumber.zero(2),), (CdNumber.one(2),))
    with pytest.raises(DivisionByZeroError):
        eval_canonical_B(x)
    with pytest.raises(ContractViolation):
        eval_canonical_A(x)
    with pytest.raises(ContractViolation):
        TangentWord("A", 2, (), (), ())
    with pytest.raises(ContractViolation):
        eval_canonical_B(TangentWord("B", 2, (0.5, 0.6), (CdNumber.one(2),), (CdNumber.one(2),)))


def test_simplex_maps():
    assert coface_times(0, (0.25, 0.5), 3) == (0.0, 0.25, 0.5)
    assert coface_times(1, (0.25, 0.5), 3) == (0.25, 0.25, 0.5)
    assert coface_times(2, (0.25, 0.5), 3) == (0.25, 0.5, 0.5)
    assert coface_times(3, (0.25, 0.5), 3) == (0.25, 0.5, 1.0)
    assert codegeneracy_times(1, (0.25, 0.5, 0.75)) == (0.25, 0.75)
    with pytest.raises(ContractViolation):
        coface_times(4, (0.25, 0.5), 3)


@pytest.mark.parametrize("level", [2, 3])
def test_canonical_families_are_compatible(level):
    for fam in (canonical_A_family(level), canonical_B_family(level)):
        report = check_compatibility(fam, n_max=5, samples=4, rng=np.random.default_rng(level))
        assert report.passed, str(report)
        assert report.max_residual < 1e-10
        assert {n for _, n, _ in report.residuals} == set(range(6))


def test_perturbed_family_is_localized():
    report = check_compatibility(perturbed_family(canonical_A_family(2), degree=2),
                                 rng=np.random.default_rng(5))
    assert not report.passed
    assert all(2 in (n, n + 1, n - 1) for _, n, _ in report.failures)
    assert ("coface/face", 2, 1) in report.failures
    assert ("coface/face", 5, 2) not in report.failures
    assert "FAIL" in str(report)


def test_family_contracts():
    fam = canonical_B_family(2)
    with pytest.raises(ContractViolation):
        fam(7, TangentWord("B", 2, (), (), ()))
    with pytest.raises(ContractViolation):
        fam(1, TangentWord("B", 2, (), (), ()))
    assert isinstance(fam, FormFamily)


def test_iterated_forms(rng):
    g = [random_tangent_word(rng, "B", 2, 2, 2) for _ in range(3)]
    ab = eval_canonical_AB1((0.25, 0.5), g[0], g[1:])
    assert ab.head == eval_canonical_B(g[0])
    assert ab.letters == (eval_canonical_B(g[1]), eval_canonical_B(g[2]))
    b2 = eval_canonical_B2((0.5,), g[:1])
    assert b2.letters == (eval_canonical_B(g[0]),)
    with pytest.raises(ContractViolation):
        eval_canonical_B2((0.5,), g)


def test_residual_shape_mismatch():
    a = VectorWord("B", 2, (0.5,), (CdNumber.one(2),))
    b = VectorWord("B", 2, (0.25,), (CdNumber.one(2),))
    assert vector_word_residual(a, b) == float("inf")
    assert vector_word_residual(a, a) == 0.0
