import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cayley_wrap.algebra import CdNumber, cd_mul, generator, parse_cd, structure_tensor
from cayley_wrap.errors import ContractViolation, DivisionByZeroError
from cayley_wrap.twisted import (
    COMPLEX,
    REAL,
    PureState,
    ZCrElement,
    assemble,
    component_decompose,
    format_zcr,
    parse_zcr,
    random_pure_states,
    verify_twisted_axioms,
    zcr_add,
)


# --- block decomposition ------------------------------------------------------

def _coeff_read(g):
    return [CdNumber.real(g.level, c) for c in g.coeffs]


def test_decompose_examples():
    blocks = component_decompose(CdNumber(2, [2.0, 3.0, 0.0, 0.0]))
    assert [b.re for b in blocks] == [2.0, 3.0, 0.0, 0.0]
    blocks = component_decompose(generator(3, 5))
    assert [b.re for b in blocks] == [0, 0, 0, 0, 0, 1.0, 0, 0]
    assert all(b.is_zero() for b in component_decompose(CdNumber.zero(3)))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([0, 1, 2, 3]), st.data())
def test_decompose_is_exact_and_assemble_inverts(level, data):
    c = data.draw(arrays(np.float64, 1 << level,
                         elements=st.floats(-1e8, 1e8, allow_subnormal=False)))
    g = CdNumber(level, c)
    blocks = component_decompose(g)
    assert blocks == _coeff_read(g)
    assert assemble(blocks) == g


def test_assemble_rejects_non_central_blocks():
    with pytest.raises(ContractViolation):
        assemble([generator(2, 1)] * 4)
    with pytest.raises(ContractViolation):
        assemble([CdNumber.one(2)] * 3)


# --- pure states -------------------------------------------------------------

def test_pure_state_product_matches_algebra(rng):
    for level in range(4):
        for a in random_pure_states(rng, level, 30):
            for b in random_pure_states(rng, level, 3):
                assert (a * b).to_cd().allclose(cd_mul(a.to_cd(), b.to_cd()), 1e-15)
                assert (a * a.inverse()).is_close_to_identity(1e-15)
                assert a.conj().to_cd() == a.to_cd().conj()


def test_pure_state_product_generator_is_product_of_generators():
    a = PureState(3, 3, 2.0)
    b = PureState(3, 6, -0.5)
    p = a * b
    assert p.to_cd() == cd_mul(a.to_cd(), b.to_cd())
    assert abs(p.value) == 1.0 and p.generator == 3 ^ 6


def test_complex_component_group(rng):
    states = random_pure_states(rng, 2, 20, group=COMPLEX)
    for a, b in zip(states, states[1:]):
        p = a * b
        assert p.group is COMPLEX
        assert np.allclose(p.to_array()[p.generator], p.value)
        # conj is an anti-homomorphism on the complexified pure states as well
        lhs = (a * b).conj()
        rhs = b.conj() * a.conj()
        assert lhs.generator == rhs.generator and np.isclose(lhs.value, rhs.value)
    with pytest.raises(ContractViolation):
        states[0] * PureState(2, 1, 1.0, REAL)
    with pytest.raises(ContractViolation):
        states[0].to_cd()


def test_pure_state_contracts():
    with pytest.raises(ContractViolation):
        PureState(2, 4, 1.0)
    with pytest.raises(DivisionByZeroError):
        PureState(2, 1, 0.0).inverse()
    with pytest.raises(AttributeError):
        PureState(2, 1).value = 3.0
    with pytest.raises(ContractViolation):
        PureState.from_cd(CdNumber(2, [1.0, 1.0, 0.0, 0.0]))
    assert PureState.from_cd(CdNumber(2, [0.0, 0.0, -3.0, 0.0])) == PureState(2, 2, -3.0)


# --- axioms ----------------------------------------------------------------------

def test_axioms_hold_on_random_octonion_pure_states(rng):
    states = random_pure_states(rng, 3, 300)
    triples = list(zip(states[::3], states[1::3], states[2::3]))
    report = verify_twisted_axioms(triples)
    assert report.passed, str(report)
    assert all(r.residual < 1e-11 for r in report.results.values())


def test_axioms_hold_on_general_octonions(rng):
    triples = [tuple(CdNumber(3, rng.normal(size=8)) for _ in range(3)) for _ in range(200)]
    report = verify_twisted_axioms(triples)
    assert report.passed, str(report)


def test_identity_only_sample():
    e = PureState.identity(3)
    assert verify_twisted_axioms([(e, e, e)]).passed


def test_corrupted_table_fails_grading_closure():
    t = structure_tensor(2).copy()
    t[1, 2, 0] = 0.5  # i_1 i_2 now leaks into the real block
    states = [PureState(2, 1, 1.0), PureState(2, 2, 1.0), PureState(2, 3, 1.0)]
    report = verify_twisted_axioms([tuple(states)], tensor=t)
    assert not report.results["grading_closure"].passed
    assert not report.passed
    assert "FAIL" in str(report)


def test_axioms_need_samples():
    with pytest.raises(ContractViolation):
        verify_twisted_axioms([])


# --- Z(C_r) ------------------------------------------------------------------------

U = CdNumber(2, [0.0, 1.0, 0.0, 0.0])
V = CdNumber(2, [0.0, 0.0, 0.6, 0.8])
SAMPLE = [U, V]


def test_zcr_examples():
    a = ZCrElement(2, [(3, U), (-2, V)], SAMPLE)
    zero = ZCrElement.zero(2, SAMPLE)
    assert a + zero == a
    assert a + (-a) == zero
    two_u = ZCrElement(2, [(2, U)], SAMPLE)
    one_minus_u = ZCrElement(2, [(1, -U)], SAMPLE)
    assert zcr_add(two_u, one_minus_u) == ZCrElement(2, [(1, U)], SAMPLE)
    assert one_minus_u.coefficient(U) == -1 and one_minus_u.coefficient(-U) == 1


@settings(max_examples=100, deadline=None)
@given(*[st.lists(st.integers(-50, 50), min_size=2, max_size=2) for _ in range(3)])
def test_zcr_group_laws(ka, kb, kc):
    a, b, c = (ZCrElement(2, list(zip(k, SAMPLE)), SAMPLE) for k in (ka, kb, kc))
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a


def test_zcr_mismatched_samples():
    a = ZCrElement(2, [(1, U)], SAMPLE)
    b = ZCrElement(2, [(1, U)], [U])
    with pytest.raises(ContractViolation):
        a + b
    with pytest.raises(ContractViolation):
        ZCrElement(2, [(1, generator(2, 3))], SAMPLE)
    with pytest.raises(ContractViolation):
        ZCrElement(2, [(1.5, U)], SAMPLE)
    with pytest.raises(ContractViolation):
        ZCrElement(2, [(1, CdNumber.one(2))])
    with pytest.raises(ContractViolation):
        ZCrElement(2, [(1, 2 * U)])


def test_zcr_maps_into_exp_kernel():
    from cayley_wrap.algebra import cd_exp
    a = ZCrElement(2, [(3, U)], SAMPLE)
    assert cd_exp(a.to_cd()).allclose(CdNumber.one(2), 1e-13)


def test_zcr_literal_roundtrip():
    a = ZCrElement(2, [(3, U), (-2, V)], SAMPLE)
    text = format_zcr(a)
    assert text == "[3*level:2;0.0,1.0,0.0,0.0; -2*level:2;0.0,0.0,0.6,0.8]"
    assert parse_zcr(text, SAMPLE) == a
    assert parse_zcr("[2*level:2;0,-1,0,0]") == ZCrElement(2, [(-2, U)])
    assert parse_zcr("[]", SAMPLE) == ZCrElement.zero(2, SAMPLE)
    with pytest.raises(ContractViolation):
        parse_zcr("3*level:2;0,1,0,0")
    with pytest.raises(ContractViolation):
        parse_zcr("[x*level:2;0,1,0,0]")
    assert parse_cd("level:2;0,1,0,0") == U
