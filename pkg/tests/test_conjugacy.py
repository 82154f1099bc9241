import itertools

import pytest

from geowidth.conjugacy import (
    POLICY_BOUND,
    VERDICT_CONJUGATE,
    VERDICT_NOT_CONJUGATE,
    VERDICT_NOT_CONJUGATE_UP_TO,
    ConjugacyInstance,
    free_group_oracle,
    orbit_bound_report,
    search_radius,
    solve,
    verify,
)
from geowidth.errors import CapabilityError, ConfigError, DomainError
from geowidth.isometries import HyperbolicIsometry, Representation
from geowidth.spaces import HyperbolicPlane
from geowidth.words import (
    conjugate,
    enumerate_ball,
    inverse,
    multiply,
    parse_word,
    shortlex_key,
    word_length,
)


def brute_force_least_conjugator(inst, radius):
    """Exhaustive shortlex scan, the independent reference for solve()."""
    for g in enumerate_ball(inst.alphabet_size, radius):
        if all(conjugate(g, a) == b for a, b in zip(inst.lists_a, inst.lists_b)):
            return g
    return None


def free_instance(a_strs, b_strs, **kw):
    return ConjugacyInstance(
        alphabet_size=2,
        lists_a=tuple(parse_word(s) for s in a_strs),
        lists_b=tuple(parse_word(s) for s in b_strs),
        **kw,
    )


class TestVerify:
    def test_positive(self):
        inst = free_instance(["ab"], ["Babb"])  # b^-1 (ab) b
        ok, transcript = verify(parse_word("b"), inst)
        assert ok
        assert transcript[0]["match"]

    def test_negative(self):
        inst = free_instance(["ab"], ["ba"])
        ok, _ = verify(parse_word("e"), inst)
        assert not ok


class TestInstanceValidation:
    def test_mismatched_lists(self):
        with pytest.raises(DomainError):
            free_instance(["a"], ["a", "b"])

    def test_empty_lists(self):
        with pytest.raises(DomainError):
            free_instance([], [])

    def test_bad_policy(self):
        with pytest.raises(ConfigError):
            free_instance(["a"], ["a"], policy="wild")


class TestSearchRadius:
    def test_bound_policy(self):
        inst = free_instance(["ab"], ["ba"], policy=POLICY_BOUND, c_star=1.0, c=2.0)
        assert search_radius(inst) == 6  # ceil(1.0 * 4 + 2)

    def test_bound_requires_constants(self):
        inst = free_instance(["a"], ["a"], policy=POLICY_BOUND)
        with pytest.raises(ConfigError):
            search_radius(inst)

    def test_incremental_doubles(self):
        inst = free_instance(["a"], ["a"])
        r = search_radius(inst)
        assert r == 1
        assert search_radius(inst, r) == 2
        assert search_radius(inst, 8) == 16
        assert search_radius(inst, 16) == 16  # capped at max_radius


class TestSolveFree:
    def test_identity_instance(self):
        cert = solve(free_instance(["ab", "a"], ["ab", "a"]))
        assert cert.verdict == VERDICT_CONJUGATE
        assert cert.conjugator == ()
        assert cert.exit_code == 0

    def test_single_pair(self):
        cert = solve(free_instance(["ab"], ["ba"]))
        assert cert.verdict == VERDICT_CONJUGATE
        # both a and B work; shortlex prefers a
        assert cert.conjugator == parse_word("a")

    def test_pair_forcing_longer_conjugator(self):
        g = parse_word("ab")
        a_list = [parse_word("aab"), parse_word("ba")]
        b_list = [conjugate(g, w) for w in a_list]
        inst = ConjugacyInstance(2, tuple(a_list), tuple(b_list))
        cert = solve(inst)
        assert cert.verdict == VERDICT_CONJUGATE
        assert cert.conjugator == brute_force_least_conjugator(inst, 4)
        ok, _ = verify(cert.conjugator, inst)
        assert ok

    def test_not_conjugate_definite(self):
        cert = solve(free_instance(["a"], ["b"]))
        assert cert.verdict == VERDICT_NOT_CONJUGATE
        assert cert.exit_code == 3

    def test_list_breaks_single_conjugacy(self):
        # a ~ a and b ~ B separately, but no common conjugator
        cert = solve(free_instance(["a", "b"], ["a", "B"]))
        assert cert.verdict == VERDICT_NOT_CONJUGATE

    def test_shortlex_least_among_coset(self):
        # conjugators of (a, a): the centralizer <a>; least is e
        cert = solve(free_instance(["a"], ["a"]))
        assert cert.conjugator == ()

    def test_random_instances_match_brute_force(self):
        import random

        rng = random.Random(5)
        pool = [w for w in enumerate_ball(2, 3) if w]
        for _ in range(60):
            a_list = tuple(rng.choice(pool) for _ in range(2))
            g = rng.choice(list(enumerate_ball(2, 2)))
            if rng.random() < 0.5:
                b_list = tuple(conjugate(g, a) for a in a_list)
            else:
                b_list = tuple(rng.choice(pool) for _ in range(2))
            inst = ConjugacyInstance(2, a_list, b_list)
            cert = solve(inst)
            ref = brute_force_least_conjugator(inst, 7)
            if ref is None:
                assert cert.verdict == VERDICT_NOT_CONJUGATE
            else:
                assert cert.verdict == VERDICT_CONJUGATE
                assert shortlex_key(cert.conjugator) <= shortlex_key(ref)
                ok, _ = verify(cert.conjugator, inst)
                assert ok


class TestOracle:
    def test_all_trivial(self):
        cert = free_group_oracle(free_instance(["e"], ["e"]))
        assert cert.verdict == VERDICT_CONJUGATE and cert.conjugator == ()
        cert = free_group_oracle(free_instance(["e"], ["a"]))
        assert cert.verdict == VERDICT_NOT_CONJUGATE

    def test_core_length_mismatch(self):
        cert = free_group_oracle(free_instance(["ab"], ["abab"]))
        assert cert.verdict == VERDICT_NOT_CONJUGATE

    def test_never_up_to(self):
        # long conjugator: oracle must still settle it definitely
        g = parse_word("ababab")
        a = parse_word("aab")
        inst = ConjugacyInstance(2, (a,), (conjugate(g, a),))
        cert = free_group_oracle(inst)
        assert cert.verdict == VERDICT_CONJUGATE
        ok, _ = verify(cert.conjugator, inst)
        assert ok

    def test_centralizer_powers(self):
        # conjugator deep in the centralizer coset of the pivot
        a1, a2 = parse_word("ab"), parse_word("a")
        g = multiply(parse_word("ab"), parse_word("ababab"))  # (ab)^4
        inst = ConjugacyInstance(2, (a1, a2), (conjugate(g, a1), conjugate(g, a2)))
        cert = free_group_oracle(inst)
        assert cert.verdict == VERDICT_CONJUGATE
        ok, _ = verify(cert.conjugator, inst)
        assert ok

    def test_requires_free_context(self):
        rho = Representation(
            HyperbolicPlane(),
            [
                HyperbolicIsometry([[2.0, 1.0], [1.0, 1.0]]),
                HyperbolicIsometry([[5.0, 2.0], [2.0, 1.0]]),
            ],
            check_samples=10,
        )
        inst = free_instance(["a"], ["a"], rep=rho)
        with pytest.raises(CapabilityError):
            free_group_oracle(inst)


class TestMatrixContext:
    def rep(self):
        return Representation(
            HyperbolicPlane(),
            [
                HyperbolicIsometry([[1.0, 2.0], [0.0, 1.0]]),
                HyperbolicIsometry([[1.0, 0.0], [2.0, 1.0]]),
            ],
            check_samples=10,
        )

    def test_matrix_conjugate_found(self):
        rho = self.rep()
        inst = free_instance(["ab"], ["ba"], rep=rho, max_radius=3)
        cert = solve(inst)
        assert cert.verdict == VERDICT_CONJUGATE
        ok, _ = verify(cert.conjugator, inst)
        assert ok

    def test_up_to_verdict_without_oracle(self):
        rho = self.rep()
        inst = free_instance(["aabb"], ["bbaa"], rep=rho, max_radius=1)
        cert = solve(inst)
        # conjugator ab has length 2 > radius 1; matrix context cannot upgrade
        if cert.verdict != VERDICT_CONJUGATE:
            assert cert.verdict == VERDICT_NOT_CONJUGATE_UP_TO
            assert cert.exit_code == 4
            assert cert.radius_searched == 1


class TestOrbitReport:
    def test_word_length_on_cayley_tree(self):
        rho = Representation.free_on_cayley_tree(2)
        inst = free_instance(["ab"], ["ba"], rep=rho)
        y = rho.space.vertex_point(())
        rpt = orbit_bound_report(inst, y, g=parse_word("a"))
        assert rpt.orbit_sum == pytest.approx(4.0)
        assert rpt.word_sum == 4
        assert rpt.ratio == pytest.approx(1.0 / 4.0)

    def test_requires_rep(self):
        with pytest.raises(ConfigError):
            orbit_bound_report(free_instance(["a"], ["a"]), None)
