"""Acceptance criteria.  Each test records its counts as user properties; the
conftest summary hook prints one PASS/FAIL line per criterion.

Run alone with ``python3 -m pytest tests/test_acceptance.py``.
"""

import time
from itertools import combinations, product

import numpy as np
import pytest

from corpus import cabello_poset, corpus
from oracles import brute_daseinise, distinct_eigenvalues
from toposq.context import Context, basis_context, build_poset
from toposq.daseinisation import atom_values, inner_sa, outer_sa
from toposq.linalg import random_state, random_unitary, spectral_leq
from toposq.presheaf import ClopenSubset, OmegaElement, Sieve, enumerate_sieves, heyting_on_omega, heyting_on_sieves
from toposq.quantity import IntervalWindow, daseinisation_table, daseinised_proposition, naturality_check
from toposq.truth import compare_truth_values, member, membership_characterisations, truth_object, valuate

R2 = np.sqrt(2)


def test_criterion_1_daseinisation_oracle(record_property):
    cases = corpus()
    assert len(cases) == 200
    start = time.perf_counter()
    pairs = mismatches = 0
    worst = 0.0
    for case in cases:
        assert case.a.shape[0] in (3, 4) and len(distinct_eigenvalues(case.a)) <= 4
        for _, ctx in case.poset.contexts():
            inner, outer = brute_daseinise(case.a, ctx)
            err = max(
                np.abs(outer_sa(case.a, ctx) - ctx.operator(outer)).max(),
                np.abs(inner_sa(case.a, ctx) - ctx.operator(inner)).max(),
            )
            worst = max(worst, err)
            mismatches += err > 1e-7
            pairs += 1
    elapsed = time.perf_counter() - start
    record_property("pairs", pairs)
    record_property("max_err", f"{worst:.1e}")
    record_property("seconds", f"{elapsed:.1f}")
    assert mismatches == 0
    assert elapsed < 60


def test_criterion_2_sandwich_monotone_spectrum(record_property):
    violations = checks = 0
    for case in corpus():
        a, poset = case.a, case.poset
        sp = np.array(distinct_eigenvalues(a))
        table = daseinisation_table(a, poset)
        for v, ctx in poset.contexts():
            inner, outer = table[v]
            checks += 3
            violations += not spectral_leq(ctx.operator(inner), a)
            violations += not spectral_leq(a, ctx.operator(outer))
            values = np.concatenate([inner, outer])
            violations += not np.all(np.min(np.abs(values[:, None] - sp[None, :]), axis=1) < 1e-8)
        # within one abelian algebra the spectral order is the pointwise one
        for sub, sup in poset.order_pairs():
            r = np.array(poset.restriction(sup, sub))
            checks += 2
            violations += not np.all(table[sup][1] <= table[sub][1][r] + 1e-9)
            violations += not np.all(table[sub][0][r] <= table[sup][0] + 1e-9)
    record_property("checks", checks)
    record_property("violations", violations)
    assert violations == 0


def test_criterion_3_membership_characterisations(record_property):
    rng = np.random.default_rng(31)
    cases = corpus()
    disagreements = members = 0
    for i in range(100):
        case = cases[int(rng.integers(len(cases)))]
        n = case.a.shape[0]
        psi = random_state(n, rng) if i % 2 else case.eigvecs[:, int(rng.integers(n))]
        vid = case.poset.ids[int(rng.integers(len(case.poset)))]
        t = truth_object(psi, case.poset)
        k = len(case.poset[vid])
        atoms = frozenset(int(j) for j in np.flatnonzero(rng.random(k) < 0.5))
        if i % 3 == 0:
            atoms |= t.thresholds[vid]  # make sure members occur
        verdicts = membership_characterisations(t, ClopenSubset(vid, atoms))
        disagreements += len(set(verdicts.values())) != 1
        members += verdicts["contains_threshold_set"]
    record_property("triples", 100)
    record_property("members", members)
    record_property("disagreements", disagreements)
    assert disagreements == 0
    assert 0 < members < 100


def _valuation_from_definition(s, t):
    poset = s.poset
    return {
        v: frozenset(w for w in poset.down(v) if member(t, ClopenSubset(w, s.sets[w])))
        for v in poset.ids
    }


def test_criterion_4_valuations_are_sieves_and_global_elements(record_property):
    rng = np.random.default_rng(41)
    checked = violations = 0
    for case in corpus():
        poset = case.poset
        assert len(poset) <= 50
        lams = sorted(set(np.round(case.spectrum, 9)))
        windows = [IntervalWindow(x, x) for x in lams] + [IntervalWindow(lams[0], lams[0] + 1.5)]
        props = [daseinised_proposition(poset, case.a, w) for w in windows]
        states = [case.eigvecs[:, 0], random_state(case.a.shape[0], rng)]
        for s, psi in product(props, states):
            t = truth_object(psi, poset)
            value = valuate(s, t)
            expected = _valuation_from_definition(s, t)
            for v in poset.ids:
                checked += 1
                violations += value[v] != expected[v]
                violations += not Sieve(poset, v, value[v]).is_valid()
                for w in poset.down(v):
                    violations += value[w] != value[v] & poset.down(w)
    record_property("stage_checks", checked)
    record_property("violations", violations)
    assert violations == 0


def _heyting_posets():
    rng = np.random.default_rng(51)
    u = random_unitary(4, rng)
    e = [np.outer(u[:, i], u[:, i].conj()) for i in range(4)]
    mixed = Context((e[0] + e[1], e[2], e[3]))
    other = Context((e[0] + e[2], e[1] + e[3]))
    d3 = np.eye(3)
    two_max = [Context((np.diag(d3[0]), np.diag(d3[1] + d3[2]))), Context((np.diag(d3[1]), np.diag(d3[0] + d3[2])))]
    return {
        "dim2": build_poset([basis_context(np.eye(2))]),
        "dim3": build_poset([basis_context(np.eye(3))]),
        "dim3-two-maximal": build_poset(two_max),
        "dim4-mixed": build_poset([mixed]),
        "dim4-two-maximal": build_poset([mixed, other]),
    }


def _down_sets(poset):
    ids = poset.ids
    for r in range(len(ids) + 1):
        for d in combinations(ids, r):
            d = set(d)
            if all(poset.down(x) <= d for x in d):
                yield OmegaElement.from_top(poset, d)


def test_criterion_5_heyting_suite(record_property):
    failures = triples = 0
    for poset in _heyting_posets().values():
        assert len(poset) <= 6
        for base in poset.ids:
            sieves = enumerate_sieves(poset, base)
            for a, b in product(sieves, repeat=2):
                imp = heyting_on_sieves("implies", a, b)
                failures += not heyting_on_sieves("meet", a, imp) <= b
                for c in sieves:
                    triples += 1
                    lhs = heyting_on_sieves("meet", a, heyting_on_sieves("join", b, c))
                    rhs = heyting_on_sieves("join", heyting_on_sieves("meet", a, b), heyting_on_sieves("meet", a, c))
                    failures += lhs != rhs
            for a in sieves:
                failures += not a <= heyting_on_sieves("not", heyting_on_sieves("not", a))
        elems = list(_down_sets(poset))
        for a, b in product(elems, repeat=2):
            failures += not (a & (a >> b)) <= b
            for c in elems:
                failures += (a & (b | c)) != ((a & b) | (a & c))
        for a in elems:
            failures += not a <= ~~a

    poset = _heyting_posets()["dim3"]
    assert len(poset) == 4
    top = poset.maximal()[0]
    witness = None
    for d in _down_sets(poset):
        if heyting_on_omega("join", d, ~d) != OmegaElement.total_true(poset):
            witness = sorted(d[top])
            break
    sieve = Sieve(poset, top, set(witness))
    lem = heyting_on_sieves("join", sieve, heyting_on_sieves("not", sieve))
    record_property("triples", triples)
    record_property("failures", failures)
    record_property("lem_witness", f"{top}:{'+'.join(witness)}")
    assert failures == 0
    assert witness is not None and lem != Sieve.maximal(poset, top)


def test_criterion_6_eigenstate_total_truth(record_property):
    exceptions = true_checks = below_checks = 0
    for case in corpus():
        poset, a = case.poset, case.a
        true = OmegaElement.total_true(poset)
        lams = sorted(set(np.round(case.spectrum, 9)))
        for j in range(a.shape[0]):
            psi = case.eigvecs[:, j]
            lam = round(float(case.spectrum[j]), 9)
            t = truth_object(psi, poset)
            for w in (IntervalWindow(lam, lam), IntervalWindow(lam - 0.5, lam + 0.5), IntervalWindow(lam - 1, 10)):
                true_checks += 1
                exceptions += valuate(daseinised_proposition(poset, a, w), t) != true
            for other in lams:
                if other == lam:
                    continue
                # windows that miss lam: a single other eigenvalue and a half-line
                half = IntervalWindow(other, 10) if other > lam else IntervalWindow(-10, other)
                for w in (IntervalWindow(other, other), half):
                    value = valuate(daseinised_proposition(poset, a, w), t)
                    below_checks += 1
                    exceptions += case.own in value[case.own]
                    exceptions += not value <= true or value == true
    record_property("total_true_checks", true_checks)
    record_property("strictly_below_checks", below_checks)
    record_property("exceptions", exceptions)
    assert exceptions == 0


def test_criterion_7_ks(record_property):
    from toposq.ks import find_global_section, is_global_section

    rng = np.random.default_rng(71)
    single = 0
    seeds = [c.poset[c.own] for c in corpus()[:50]]
    seeds += [basis_context(random_unitary(n, rng)) for n in (2, 3, 4, 5)]
    for ctx in seeds:
        poset = build_poset([ctx])
        result = find_global_section(poset)
        assert result.status == "found" and is_global_section(poset, result.section)
        single += 1
    poset = cabello_poset()
    start = time.perf_counter()
    result = find_global_section(poset)
    elapsed = time.perf_counter() - start
    record_property("single_context_posets", single)
    record_property("cabello_contexts", len(poset))
    record_property("cabello_status", result.status)
    record_property("leaves", result.leaves)
    record_property("seconds", f"{elapsed:.3f}")
    assert result.status == "none" and result.exhaustive
    assert elapsed < 5


def test_criterion_8_incomparable_truth_values(record_property):
    poset = build_poset([basis_context(np.eye(3))])
    a = np.array([[1, 1, 0], [1, 1, 0], [0, 0, 5]], dtype=float)
    s = daseinised_proposition(poset, a, IntervalWindow(4, 6))
    e = np.eye(3)
    v1 = valuate(s, truth_object((e[1] + e[2]) / R2, poset))
    v2 = valuate(s, truth_object((e[0] + e[2]) / R2, poset))
    top = poset.maximal()[0]
    verdict = compare_truth_values(v1, v2)
    record_property("v1_at_top", "+".join(sorted(v1[top])))
    record_property("v2_at_top", "+".join(sorted(v2[top])))
    record_property("verdict", verdict)
    assert verdict == "incomparable"


def test_criterion_9_naturality(record_property):
    edges = failures = 0
    for case in corpus():
        table = daseinisation_table(case.a, case.poset)
        for sub, sup in case.poset.order_pairs():
            edges += 1
            failures += not naturality_check(case.poset, case.a, sup, sub, table)
    record_property("edges", edges)
    record_property("failures", failures)
    assert failures == 0


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
