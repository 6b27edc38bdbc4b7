import time

import numpy as np
import pytest

from conftest import proj
from corpus import cabello_poset, cabello_rays, corpus
from oracles import all_sections, any_section_by_maximal_product
from toposq.context import Context, basis_context, build_poset
from toposq.errors import EmptyPoset, InconsistentSection, OperatorNotCovered
from toposq.ks import find_global_section, is_global_section, section_to_valuation
from toposq.linalg import random_unitary
from toposq.presheaf import GelfandPoint


def test_single_context(poset3):
    result = find_global_section(poset3)
    assert result.status == "found" and result.exhaustive
    assert is_global_section(poset3, result.section)


def test_two_contexts_sharing_an_atom():
    r = np.array([[1, 0, 0], [0, 1, 1], [0, 1, -1]], dtype=float) / np.array([1, np.sqrt(2), np.sqrt(2)])
    poset = build_poset([basis_context(np.eye(3)), basis_context(r)])
    result = find_global_section(poset)
    assert result.status == "found"
    assert is_global_section(poset, result.section)


def test_empty_poset():
    with pytest.raises(EmptyPoset):
        find_global_section(build_poset([]))


def test_is_global_section_rejects_incompatible(poset3, named3):
    v, v3 = named3["V"], named3["V3"]
    good = find_global_section(poset3).section
    bad = dict(good)
    bad[v3] = GelfandPoint(v3, 1 - good[v3].atom)
    assert not is_global_section(poset3, bad)
    partial = {k: x for k, x in good.items() if k != v}
    assert not is_global_section(poset3, partial)


def test_cabello_set_has_no_section():
    assert len(cabello_rays()) == 18
    poset = cabello_poset()
    assert len(poset.maximal()) == 9
    start = time.perf_counter()
    result = find_global_section(poset)
    elapsed = time.perf_counter() - start
    assert result.status == "none" and result.exhaustive
    assert result.leaves <= 4**9
    assert elapsed < 5


def test_budget_makes_search_inconclusive():
    result = find_global_section(cabello_poset(), leaf_budget=10)
    assert result.status == "inconclusive" and not result.exhaustive


def _small_multi_posets(rng):
    posets = []
    for dim in (3, 4):
        for _ in range(4):
            seeds = [basis_context(np.eye(dim))]
            for _ in range(2):
                u = random_unitary(dim, rng)
                # share one ray with the standard basis so the contexts overlap
                u[:, 0] = np.eye(dim)[:, int(rng.integers(dim))]
                u = np.linalg.qr(u)[0]
                seeds.append(basis_context(u))
            posets.append(build_poset(seeds))
    return posets


def test_backtracking_agrees_with_brute_force(rng):
    for poset in _small_multi_posets(rng) + [c.poset for c in corpus()[:10]]:
        result = find_global_section(poset)
        assert (result.status == "found") == any_section_by_maximal_product(poset)
        if len(poset) <= 12:
            assert (result.status == "found") == bool(all_sections(poset))


def test_brute_force_finds_no_section_on_cabello_maximals():
    assert not any_section_by_maximal_product(cabello_poset(), limit=4**9)


def test_dim2_always_has_a_section(rng):
    seeds = [basis_context(random_unitary(2, rng)) for _ in range(5)]
    assert find_global_section(build_poset(seeds)).status == "found"


def test_section_to_valuation_single_context(poset3, named3):
    v = named3["V"]
    section = {w: GelfandPoint(w, poset3.restriction(v, w)[1]) for w in poset3.ids}
    assert section_to_valuation(poset3, section, [np.diag([1.0, 2.0, 3.0])]) == [pytest.approx(2)]
    values = section_to_valuation(poset3, section, {"p": proj(1), "q": proj(0, 2)})
    assert values == {"p": pytest.approx(1), "q": pytest.approx(0)}


def test_section_to_valuation_is_multiplicative_and_consistent(rng):
    poset = build_poset([basis_context(np.eye(3)), basis_context(np.eye(3)[:, [0, 2, 1]])])
    section = find_global_section(poset).section
    for _ in range(10):
        a = np.diag(rng.standard_normal(3))
        b = np.diag(rng.standard_normal(3))
        va, vb, vab = section_to_valuation(poset, section, [a, b, a @ b])
        assert vab == pytest.approx(va * vb)
        assert section_to_valuation(poset, section, [a + b])[0] == pytest.approx(va + vb)


def test_section_to_valuation_errors(poset3, named3):
    section = find_global_section(poset3).section
    x = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
    with pytest.raises(OperatorNotCovered):
        section_to_valuation(poset3, section, [x])
    bad = dict(section)
    v3 = named3["V3"]
    bad[v3] = GelfandPoint(v3, 1 - section[v3].atom)
    with pytest.raises(InconsistentSection):
        section_to_valuation(poset3, bad, [proj(2)])


def test_valuation_respects_functional_relations_on_found_sections():
    # A section gives a value assignment that picks exactly one ray per basis
    ctx = Context((proj(0), proj(1), proj(2)))
    poset = build_poset([ctx])
    section = find_global_section(poset).section
    values = section_to_valuation(poset, section, [proj(0), proj(1), proj(2)])
    assert sorted(values) == [pytest.approx(0), pytest.approx(0), pytest.approx(1)]
