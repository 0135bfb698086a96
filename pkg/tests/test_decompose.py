import pytest
from hypothesis import given, strategies as st

from hkderived.actions import Action, ActionError, admissible_actions, compose, equivalent
from hkderived.decompose import (
    RSL,
    DecompositionChain,
    DecompositionError,
    b0_candidates,
    b1_candidates,
    coprime_splits,
    decompose,
    decompose_div1,
    decompose_div2,
    fallback_search,
)
from hkderived.actions import predicted_rho_action


def test_coprime_splits():
    assert coprime_splits(10) == [(1, 10), (2, 5), (5, 2), (10, 1)]
    assert coprime_splits(1) == [(1, 1)]
    assert coprime_splits(8) == [(1, 8), (8, 1)]
    with pytest.raises(ValueError):
        coprime_splits(0)


def test_examples_div1():
    c = decompose_div1(10, Action(1, 10, 9))
    assert [s.as_tuple() for s in c.steps] == [(2, 7, 2)] and c.negated
    c = decompose_div1(5, Action(1, 5, 4, 1))
    assert [s.as_tuple() for s in c.steps] == [(2, 3, 1)]
    c = decompose_div1(1, Action(1, 1, 1))
    assert [s.as_tuple() for s in c.steps] == [(1, 2, 1)] and not c.negated


def test_examples_div2():
    c = decompose_div2(15, Action(2, 15, 4))
    assert [s.as_tuple() for s in c.steps] == [(3, 2, 3)]
    assert c.verified_actions == (Action(2, 15, 11),)
    assert [s.as_tuple() for s in decompose_div2(3, Action(2, 3, 2)).steps] == [(1, 1, 1)]
    # a = 1 takes r = gcd(0, 3) = 3, k = 1
    assert [s.as_tuple() for s in decompose_div2(3, Action(2, 3, 1)).steps] == [(3, 1, 3)]
    with pytest.raises(ActionError):
        decompose_div2(5, Action(2, 5, 1))


def test_inadmissible_target():
    with pytest.raises(ActionError):
        decompose_div1(10, Action(1, 5, 1))
    assert fallback_search(10, Action(1, 5, 1), 10) is None


def test_fallback_search():
    assert fallback_search(5, Action(1, 5, 4, 1), 5).as_tuple() == (2, 3, 1)
    assert fallback_search(10, Action(1, 10, 1), 3) is None
    found = fallback_search(10, Action(1, 10, 1), 12)
    assert found.as_tuple() == (1, 10, 0)
    assert (1, 11, 1) == RSL(1, 11, 1).as_tuple() and RSL(1, 11, 1).d == 10
    with pytest.raises(ValueError):
        fallback_search(10, Action(1, 10, 1), 0)


def test_recipe_parity():
    for d in range(1, 101):
        assert all(st.t == 2 for st in b0_candidates(d))
        assert all(st.t == 1 for st in b1_candidates(d))


def test_distinct_splits_give_distinct_actions():
    for d in range(2, 101):
        preds = [predicted_rho_action(*s.as_tuple(), 1).a for s in b0_candidates(d)]
        assert len(set(preds)) == len(preds)


def test_chain_rejects_wrong_action():
    with pytest.raises(DecompositionError):
        DecompositionChain((RSL(2, 7, 2),), Action(1, 10, 1), (Action(1, 10, 11),))
    with pytest.raises(DecompositionError):
        RSL(2, 4, 1)


def test_twist_free_chains_only_when_b1_exists():
    with pytest.raises(DecompositionError):
        decompose_div1(10, Action(1, 10, 9), twist_free=True, fallback_bound=20)
    c = decompose_div1(13, Action(1, 13, 25), twist_free=True)
    assert c.twist_free and len(c.steps) == 2


@given(st.integers(1, 100), st.data())
def test_every_admissible_action_is_realized(d, data):
    target = data.draw(st.sampled_from(admissible_actions(d, 1)))
    c = decompose(d, target)
    assert len(c.steps) <= 2
    assert equivalent(c.composed(), target)
    for step, act in zip(c.steps, c.verified_actions):
        assert step.action() == act and step.d == d


@given(st.integers(0, 49), st.data())
def test_every_div2_action_is_realized(k, data):
    d = 4 * k + 3
    target = data.draw(st.sampled_from(admissible_actions(d, 2)))
    c = decompose(d, target)
    assert len(c.steps) == 1 and equivalent(c.composed(), target)
