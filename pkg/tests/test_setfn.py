import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clckit import (
    BudgetAdditive,
    CoverageInstance,
    CoverageWeights,
    LinearFunction,
    SetFunctionTable,
    UniformMatroid,
    combine,
    contract,
    homogeneous_restrict,
    level_sequence,
    materialize,
    mobius_coverage_weights,
    predicates,
    to_setfunction,
)
from clckit.bitsets import labels_of, mask_of
from clckit.errors import CapExceededError

from conftest import coverage_example, rand_coverage_instance


def test_table_invariants():
    with pytest.raises(ValueError):
        SetFunctionTable(1, (Fraction(1), Fraction(0)))  # f(empty) != 0
    with pytest.raises(ValueError):
        SetFunctionTable(1, (Fraction(0), Fraction(-1)))
    with pytest.raises(CapExceededError):
        SetFunctionTable(25, tuple())


def test_table_rejects_floats():
    with pytest.raises(TypeError):
        SetFunctionTable.from_entries(2, {(1,): 0.5})


def test_materialize_cap():
    with pytest.raises(CapExceededError):
        materialize(LinearFunction(25, (Fraction(1),) * 25))


def test_materialize_coverage_example():
    f = materialize(coverage_example())
    assert f.value_of([1]) == 1
    assert f.value_of([2]) == 2
    assert f.value_of([1, 3]) == 2
    assert f.value_of([1, 2, 3]) == 2


def test_materialize_linear_is_cardinality():
    f = materialize(LinearFunction(2, (Fraction(1), Fraction(1))))
    for mask in range(4):
        assert f[mask] == mask.bit_count()


def test_materialize_budget_additive_values():
    ba = BudgetAdditive((1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 0, 0), 2)
    f = materialize(ba)
    assert f.value_of([7, 8]) == 2
    assert f.value_of([11, 12]) == 0
    assert f.value_of([1]) == 1


def test_materialize_rejects_unknown_elements():
    with pytest.raises(ValueError, match="malformed"):
        CoverageInstance.build([("a", 1)], [["a", "z"]])


def test_contract_cardinality():
    f = materialize(LinearFunction(3, (Fraction(1),) * 3))
    c = contract(f, [1])
    assert c.base == 1
    assert c.elements == (2, 3)
    # g(S) = f(S + tau): positions 1,2 of the contracted table are labels 2,3
    assert c.table.value_of([1]) == 2
    assert c.table.value_of([1, 2]) == 3


def test_contract_empty_is_identity():
    f = materialize(coverage_example())
    c = contract(f, [])
    assert c.base == 0
    assert c.table.values == f.values


def test_contract_uniform_rank():
    rk = to_setfunction(UniformMatroid(2, 3))
    c = contract(rk, [1])
    assert c.base == 1
    assert c.table.value_of([1]) == 2  # rk({1,2})
    assert c.table.value_of([1, 2]) == 2


def test_homogeneous_restrict():
    f = materialize(LinearFunction(3, (Fraction(1),) * 3))
    f1 = homogeneous_restrict(f, 1)
    assert all(
        f1[m] == (1 if m.bit_count() == 1 else 0) for m in range(8)
    )
    assert homogeneous_restrict(f, 0).is_zero()
    f2 = homogeneous_restrict(materialize(coverage_example()), 2)
    assert [f2.value_of(s) for s in ([1, 2], [1, 3], [2, 3])] == [2, 2, 2]
    assert f2.value_of([1]) == 0


def test_predicates_budget_additive():
    report = predicates(materialize(BudgetAdditive((1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 0, 0), 2)))
    assert report.monotone and report.submodular


def test_predicates_square_cardinality_not_submodular():
    vals = tuple(Fraction(m.bit_count() ** 2) for m in range(8))
    report = predicates(SetFunctionTable(3, vals))
    assert report.monotone
    assert not report.submodular
    s, i, j = report.witnesses["submodular"]
    # witness really violates f(S+i) + f(S+j) >= f(S+i+j) + f(S)
    f = vals
    sm = mask_of(s)
    assert f[sm | mask_of([i])] + f[sm | mask_of([j])] < f[sm | mask_of([i, j])] + f[sm]


def test_predicates_coverage_example_almost_log_submodular():
    report = predicates(materialize(coverage_example()))
    assert report.almost_log_submodular


def test_mobius_uniform_rank_examples():
    r12 = mobius_coverage_weights(to_setfunction(UniformMatroid(1, 2)))
    assert r12.weights.x == {0b11: Fraction(1)}
    assert r12.is_coverage

    r23 = mobius_coverage_weights(to_setfunction(UniformMatroid(2, 3)))
    assert r23.weights.x == {
        0b011: Fraction(1),
        0b101: Fraction(1),
        0b110: Fraction(1),
        0b111: Fraction(-1),
    }
    assert not r23.is_coverage
    assert r23.min_weight == -1


def test_mobius_brute_force_cross_check():
    # independently solve the linear system by enumerating it for U_{2,3}
    rk = to_setfunction(UniformMatroid(2, 3))
    mob = mobius_coverage_weights(rk)
    for s in range(8):
        total = sum(
            (v for t, v in mob.weights.x.items() if t & s), Fraction(0)
        )
        assert total == rk[s]


def test_mobius_linear_singletons():
    f = materialize(LinearFunction(3, (Fraction(1),) * 3))
    mob = mobius_coverage_weights(f)
    assert mob.weights.x == {0b001: 1, 0b010: 1, 0b100: 1}
    assert mob.is_coverage


def test_combine():
    f = materialize(coverage_example())
    zero = combine([f], [0])
    assert zero.is_zero()
    assert combine([f], [1]).values == f.values
    r12 = to_setfunction(UniformMatroid(1, 2))
    r22 = to_setfunction(UniformMatroid(2, 2))
    s = combine([r12, r22], [1, 1])
    assert s.value_of([1]) == 2
    assert s.value_of([1, 2]) == 3
    with pytest.raises(ValueError):
        combine([f, r12], [1, 1])
    with pytest.raises(ValueError):
        combine([f], [-1])


def test_level_sequence():
    assert level_sequence(materialize(coverage_example())) == (0, 4, 6, 2)
    zero = SetFunctionTable(3, (Fraction(0),) * 8)
    assert level_sequence(zero) == (0, 0, 0, 0)
    ones = SetFunctionTable(3, tuple(Fraction(0 if m == 0 else 1) for m in range(8)))
    assert level_sequence(ones) == (0, 3, 3, 1)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 6).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(
                st.tuples(st.integers(1, 2**n - 1), st.integers(0, 5)),
                max_size=8,
            ),
        )
    )
)
def test_mobius_round_trip_is_identity(case):
    # materializing nonnegative weights and inverting recovers them exactly
    n, entries = case
    x = {}
    for mask, v in entries:
        x[mask] = x.get(mask, 0) + Fraction(v)
    w = CoverageWeights(n, x)
    mob = mobius_coverage_weights(materialize(w))
    assert mob.is_coverage
    assert mob.weights.x == w.x


def test_mobius_of_coverage_instances_is_nonnegative():
    rng = random.Random(11)
    for _ in range(50):
        inst = rand_coverage_instance(rng, rng.randint(1, 5))
        assert mobius_coverage_weights(materialize(inst)).is_coverage


def test_monotone_submodular_tables_are_log_submodular():
    # rejection sampling at n=3 plus constructed families at larger n
    rng = random.Random(5)
    found = 0
    while found < 25:
        vals = [Fraction(0)] + [Fraction(rng.randint(0, 4)) for _ in range(7)]
        f = SetFunctionTable(3, tuple(vals))
        report = predicates(f)
        if report.monotone and report.submodular:
            found += 1
            assert report.log_submodular, f.values
    for _ in range(25):
        inst = rand_coverage_instance(rng, rng.randint(1, 6))
        report = predicates(materialize(inst))
        assert report.monotone and report.submodular and report.log_submodular


def test_contract_commutes_with_derivative():
    # table-level contraction + degree slice vs polynomial-level derivative
    from clckit import derive, generating_poly

    rng = random.Random(23)
    for _ in range(30):
        n = rng.randint(2, 6)
        vals = [Fraction(0)] + [Fraction(rng.randint(0, 3)) for _ in range(2**n - 1)]
        f = SetFunctionTable(n, tuple(vals))
        tau = [i for i in range(1, n + 1) if rng.random() < 0.4]
        c = contract(f, tau)
        q = derive(generating_poly(f), tau)
        assert c.base == q.coeffs.get(0, Fraction(0))
        for d in range(1, n - len(tau) + 1):
            sliced = homogeneous_restrict(c.table, d)
            for mask, coeff in q.coeffs.items():
                if mask.bit_count() != d:
                    continue
                compact = mask_of(
                    c.elements.index(lab) + 1 for lab in labels_of(mask)
                )
                assert c.table[compact] == coeff
                assert sliced[compact] == coeff
