"""The nine acceptance criteria, one test each.

Every test records a PASS/FAIL line that the terminal summary prints.
"""

import time
from contextlib import contextmanager

import numpy as np

import conftest
import oracles
from cohomology_cases import actions
from formation_cases import fiber_products, short_exact_sequences, subgroups
from projpairs import catalog
from projpairs.cohomology import (cocycle_to_section, enumerate_cocycles, restriction_surjective,
                                  section_to_cocycle)
from projpairs.constructions import fiber_power, semidirect_product
from projpairs.dep import (canonical_solution, check_solution, dominate_split, induced_solution,
                           is_split, lift_via_fiber, lower_solutions, semidirect_complement,
                           solve_weak, solve_weak_prescribed, split_over_subgroup,
                           sylow_obstruction_check, wreath_obstruction_dep)
from projpairs.formations import FormationSpec, formation_member
from projpairs.groups import FinitePair, Subgroup, normal_subgroups, subgroup_closure
from projpairs.homs import HomConstraints, enumerate_homs, identity_hom, quotient, sections_of
from projpairs.sampler import ExperimentSpec, kernel_independence_check, run_experiment
from suite import default_suite


@contextmanager
def criterion(k, text):
    """Record PASS when the block finishes and FAIL with the reason otherwise."""
    start = time.perf_counter()
    info = {}
    try:
        yield info
    except BaseException as exc:
        conftest.ACCEPTANCE_RESULTS[k] = ("FAIL", f"{text}: {type(exc).__name__}: {exc}")
        raise
    extra = f" ({info['detail']})" if "detail" in info else ""
    conftest.ACCEPTANCE_RESULTS[k] = ("PASS", f"{text}{extra} in {time.perf_counter() - start:.2f}s")


def test_criterion_1_oracle_equivalence():
    with criterion(1, "solve_weak agrees with brute force on the generated suite") as info:
        suite = default_suite()
        start = time.perf_counter()
        assert len(suite) >= 200
        assert max(max(d.L.order, d.H.order) for d in suite) <= 24
        agree = 0
        for dep in suite:
            brute = oracles.weak_solutions(dep)
            found = solve_weak(dep)
            if (found is None) == (not brute):
                if found is None or tuple(found.theta.map.tolist()) in brute:
                    agree += 1
        elapsed = time.perf_counter() - start
        info["detail"] = f"{agree}/{len(suite)} agree"
        assert agree == len(suite)
        assert elapsed <= 120


def test_criterion_2_dual_lifting():
    with criterion(2, "prescribed search and fiber lifting agree for every lower solution") as info:
        pairs = agree = 0
        for dep in default_suite():
            for eta in lower_solutions(dep):
                pairs += 1
                a = solve_weak_prescribed(dep, eta)
                b = lift_via_fiber(dep, eta)
                ok = (a is None) == (b is None)
                for s in (a, b):
                    if s is not None:
                        check_solution(dep, s)
                        ok = ok and s.eta == eta
                agree += ok
        info["detail"] = f"{agree}/{pairs} (dep, eta) pairs"
        assert pairs > 0 and agree == pairs


def test_criterion_3_split_domination():
    with criterion(3, "split domination pushes solutions down") as info:
        solvable = passed = 0
        for dep in default_suite():
            sol = solve_weak(dep)
            if sol is None:
                continue
            solvable += 1
            w = dominate_split(dep, sol.theta, sol.eta)
            if not is_split(w.dominating)[0]:
                continue
            upstairs = canonical_solution(w) or solve_weak(w.dominating)
            assert upstairs is not None
            check_solution(dep, induced_solution(w, upstairs))
            passed += 1
        info["detail"] = f"{passed}/{solvable} solvable instances"
        assert solvable > 0 and passed == solvable


def _wreath_cases(A, G):
    for name in catalog.CATALOG_NAMES:
        L = catalog.get(name)
        for Gm in normal_subgroups(L):
            if Gm.order in (1, L.order):
                continue
            pair = FinitePair(L, Gm)
            etas = list(enumerate_homs(Gm.group, A, surjective_only=True))
            nus = list(enumerate_homs(L, G, HomConstraints(image_in=(Gm, G.trivial_subgroup)),
                                      surjective_only=True))
            for eta in etas:
                for nu in nus:
                    yield pair, eta, nu


def test_criterion_4_wreath_obstruction():
    with criterion(4, "wreath-product problems have no prescribed lift") as info:
        names = ("C2", "C3")
        total = 0
        slowest = 0.0
        for a in names:
            for g in names:
                A, G = catalog.get(a), catalog.get(g)
                count = 0
                for pair, eta, nu in _wreath_cases(A, G):
                    start = time.perf_counter()
                    dep, eta1 = wreath_obstruction_dep(pair, eta, nu)
                    assert dep.H.order == A.order ** G.order * G.order
                    assert solve_weak_prescribed(dep, eta1) is None, (pair, a, g)
                    took = time.perf_counter() - start
                    if (a, g) == ("C3", "C3"):
                        assert dep.H.order == 81
                        slowest = max(slowest, took)
                        assert took <= 10
                    count += 1
                assert count > 0, (a, g)
                total += count
        info["detail"] = f"{total} instances, slowest C3 wr C3 {slowest:.2f}s"


def test_criterion_5_cocycle_section_bijection():
    with criterion(5, "cocycles and sections correspond bijectively") as info:
        cases = actions()
        assert len(cases) >= 10
        level_differences = []
        for label, action in cases:
            sd = semidirect_product(action)
            assert sd.group.order <= 100
            cocycles = list(enumerate_cocycles(action))
            secs = list(sections_of(sd.quot))
            assert len(cocycles) == len(secs) == len(oracles.sections(sd.quot)), label
            for x in cocycles:
                assert section_to_cocycle(cocycle_to_section(x, sd), sd) == x
            for s in secs:
                assert cocycle_to_section(section_to_cocycle(s, sd), sd) == s
            Q = action.actor
            for members in oracles.all_subgroups(Q.mul):
                sub = Subgroup(Q, tuple(sorted(members)))
                c = restriction_surjective(action, sub).surjective
                k = restriction_surjective(action, sub, level="class").surjective
                if c != k:
                    level_differences.append((label, sub.members))
        info["detail"] = (f"{len(cases)} actions, cocycle and class restriction verdicts differ "
                          f"in {len(level_differences)} cases")


def test_criterion_6_sampler_calibration():
    with criterion(6, "sampler calibration for sign: S3 -> C2, e = 1, n = 3") as info:
        start = time.perf_counter()
        S3, C2 = catalog.get("S3"), catalog.get("C2")
        beta = next(enumerate_homs(S3, C2, surjective_only=True))
        h = next(x for x in range(S3.order) if beta(x) == 0 and x != 0)
        within = 0
        exact = None
        for seed in range(100):
            rep = run_experiment(ExperimentSpec(beta, 1, 3, (0,), (h,), trials=10_000, seed=seed))
            exact = rep.exact_fraction
            assert rep.model_order == 54
            assert rep.independence_verified
            assert exact >= rep.lower_bound
            if abs(rep.estimate - float(exact)) <= 3 * rep.standard_error:
                within += 1
        fp = fiber_power(beta, 3)
        assert kernel_independence_check(fp.projections, fp.beta_hat)
        elapsed = time.perf_counter() - start
        info["detail"] = f"exact {exact} >= 19/27, {within}/100 seeds within 3 SE"
        assert within >= 99
        assert elapsed <= 60


def _set_product(L, X, Y):
    return {int(L.mul[x, y]) for x in X for y in Y}


def test_criterion_7_splitting():
    with criterion(7, "complements and split postconditions") as info:
        S3, C4 = catalog.get("S3"), catalog.get("C4")
        t = next(x for x in range(S3.order) if x and S3.mul[x, x] == 0)
        M = semidirect_complement(FinitePair(S3, subgroup_closure(S3, [t])))
        assert M is not None and M.order == 3
        assert any(set(M.members) == set(s) for s in oracles.normal_subgroups(S3.mul))
        g = C4.generators[0]
        assert semidirect_complement(FinitePair(C4, subgroup_closure(C4, [int(C4.mul[g, g])]))) is None

        seen = set()
        successes = 0
        for dep in default_suite():
            L, Gm = dep.L, dep.Gm
            key = (L.name, Gm.members)
            if key in seen:
                continue
            seen.add(key)
            gm = set(Gm.members)
            for members in oracles.all_subgroups(L.mul):
                if not set(members) <= gm:
                    continue
                N = Subgroup(L, tuple(sorted(members)))
                M = split_over_subgroup(dep.pair, N)
                if M is None:
                    continue
                successes += 1
                ms = set(M.members)
                assert gm & ms == set(members)
                assert len(_set_product(L, gm, ms)) == L.order
                if oracles.is_normal_set(Gm.group.mul, [int(Gm.local_index[x]) for x in members]):
                    assert oracles.is_normal_set(L.mul, ms)
        info["detail"] = f"{successes} successful splits over {len(seen)} suite pairs"
        assert successes > 0


def test_criterion_8_sylow():
    with criterion(8, "Sylow obstruction for A5") as info:
        start = time.perf_counter()
        A5 = catalog.get("A5")
        ident = identity_hom(A5)
        assert sylow_obstruction_check(A5, 2, ident) is True
        assert sylow_obstruction_check(A5, 5, ident) is True
        # A5 is simple: only 1 and A5 are normal
        assert sorted(len(s) for s in oracles.normal_subgroups(A5.mul)) == [1, 60]
        info["detail"] = "p = 2 and p = 5 obstructed"
        assert time.perf_counter() - start <= 5


def _is_power_of(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def _solvable_oracle(group):
    mul = np.asarray(group.mul)
    inv = oracles.inverse_table(mul)
    current = frozenset(range(group.order))
    while len(current) > 1:
        comms = {int(mul[mul[inv[a], inv[b]], mul[a, b]]) for a in current for b in current}
        nxt = oracles.naive_closure(mul, comms)
        if nxt == current:
            return False
        current = nxt
    return True


ORACLES = {"p2": lambda g: _is_power_of(g.order, 2), "solvable": _solvable_oracle}


def test_criterion_9_formations():
    with criterion(9, "formation closure for 2-groups and solvable groups") as info:
        specs = {"p2": FormationSpec.p_group(2), "solvable": FormationSpec.solvable()}
        small = [n for n in catalog.CATALOG_NAMES if catalog.get(n).order <= 16]
        seqs = short_exact_sequences()
        fps = fiber_products()
        assert len(seqs) == 10 and len(fps) == 5
        checks = 0
        for key, spec in specs.items():
            member = lambda g: formation_member(g, spec)  # noqa: E731
            for name in small:
                G = catalog.get(name)
                assert member(G) == ORACLES[key](G), (key, name)
                if not member(G):
                    continue
                for S in subgroups(G):
                    assert member(S.group), (key, name, S.members)
                    checks += 1
                for N in normal_subgroups(G):
                    assert member(quotient(G, N)[0]), (key, name, N.members)
                    checks += 1
            for N, E, Q in seqs:
                assert member(E) == (member(N) and member(Q)), (key, E.name)
                checks += 1
            for H, G, T in fps:
                assert member(T) == (member(H) and member(G)), (key, H.name, G.name)
                checks += 1
        info["detail"] = f"{checks} closure checks on {len(small)} groups"
