"""Field context, discrete logs, subgroups, and root extraction."""

import math

import pytest

from powerprobe.ff_core import (MAX_MODULUS, DomainError, PrimeFieldCtx,
                                factorize, find_primitive_root, iroot,
                                is_prime)


def brute_roots(p, value, e, n=1):
    # reference implementation by full scan
    g = find_primitive_root(p)
    out = []
    for z in range(1, p):
        if pow(z, e, p) != value % p:
            continue
        ind = 0
        acc = 1
        for k in range(1, p):
            acc = acc * g % p
            if acc == z:
                ind = k
                break
        if ind % n == 0:
            out.append(z)
    return tuple(sorted(out))


class TestPrimality:
    def test_small_knowns(self):
        primes = {2, 3, 5, 7, 11, 13, 31, 101, 1009, 10007}
        for n in range(2, 110):
            assert is_prime(n) == (n in primes or all(n % q for q in range(2, n)))

    def test_carmichael_and_strong_pseudoprimes(self):
        for n in (561, 1105, 1729, 25326001, 3215031751):
            assert not is_prime(n)

    def test_large_prime(self):
        assert is_prime((1 << 61) - 1)
        assert not is_prime((1 << 62) - 1)

    def test_edge_values(self):
        assert not is_prime(0)
        assert not is_prime(1)
        assert not is_prime(-7)


class TestFactorize:
    def test_round_trip_small_range(self):
        for n in range(2, 400):
            fac = factorize(n)
            prod = 1
            for q in fac:
                assert is_prime(q)
                prod *= q
            assert prod == n
            assert fac == sorted(fac)

    def test_large_semiprime(self):
        n = 1000003 * 1000033
        assert factorize(n) == [1000003, 1000033]

    def test_prime_power(self):
        assert factorize(3 ** 7) == [3] * 7


class TestIroot:
    def test_matches_isqrt(self):
        for x in list(range(200)) + [10 ** 12, 10 ** 12 + 7]:
            assert iroot(x, 2) == math.isqrt(x)

    def test_bracketing(self):
        for x in (0, 1, 7, 26, 27, 28, 3 ** 30 - 1, 3 ** 30, 5 ** 21):
            for r in (1, 2, 3, 5, 7):
                k = iroot(x, r)
                assert k ** r <= x < (k + 1) ** r


class TestPrimitiveRoot:
    def test_frozen_values(self):
        assert find_primitive_root(13) == 2
        assert find_primitive_root(7) == 3
        assert find_primitive_root(2) == 1

    def test_is_smallest_generator(self):
        for p in (3, 5, 11, 13, 31, 101, 1009):
            g = find_primitive_root(p)
            for cand in range(1, g):
                assert len({pow(cand, k, p) for k in range(p - 1)}) < p - 1
            assert len({pow(g, k, p) for k in range(p - 1)}) == p - 1


class TestCtxValidation:
    def test_rejects_composite(self):
        with pytest.raises(DomainError):
            PrimeFieldCtx(12)

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            PrimeFieldCtx(1)
        big = MAX_MODULUS + 3
        while not is_prime(big):
            big += 2
        with pytest.raises(DomainError):
            PrimeFieldCtx(big)

    def test_rejects_non_primitive_generator(self):
        with pytest.raises(DomainError):
            PrimeFieldCtx(13, g=3)  # order of 3 mod 13 is 3

    def test_accepts_alternative_primitive_root(self):
        ctx = PrimeFieldCtx(13, g=6)
        assert ctx.g == 6
        assert ctx.discrete_log(6) == 1


class TestModularOps:
    def test_arithmetic(self):
        ctx = PrimeFieldCtx(13)
        assert ctx.add_mod(9, 9) == 5
        assert ctx.sub_mod(3, 9) == 7
        assert ctx.mul_mod(5, 8) == 1
        assert ctx.inv_mod(5) == 8
        assert ctx.pow_mod(2, 12) == 1

    def test_inverse_of_zero(self):
        ctx = PrimeFieldCtx(13)
        with pytest.raises(DomainError):
            ctx.inv_mod(0)


class TestDiscreteLog:
    def test_frozen_values(self):
        ctx = PrimeFieldCtx(13)
        assert ctx.g == 2
        assert ctx.discrete_log(3) == 4
        assert ctx.discrete_log(2) == 1
        assert ctx.discrete_log(1) == 12

    def test_bijection_table_path(self):
        ctx = PrimeFieldCtx(101)
        logs = [ctx.discrete_log(x) for x in range(1, 101)]
        assert sorted(logs) == list(range(1, 101))
        for x in range(1, 101):
            assert pow(ctx.g, ctx.discrete_log(x), 101) == x

    def test_bsgs_path_above_table_limit(self):
        p = 1048583  # prime just above 2**20, forces baby-step giant-step
        ctx = PrimeFieldCtx(p)
        for x in (1, 2, 3, 500000, p - 1, 999983):
            z = ctx.discrete_log(x)
            assert 1 <= z <= p - 1
            assert pow(ctx.g, z, p) == x
        assert ctx.discrete_log(1) == p - 1

    def test_rejects_zero(self):
        ctx = PrimeFieldCtx(13)
        with pytest.raises(DomainError):
            ctx.discrete_log(0)


class TestSubgroups:
    def test_frozen_values(self):
        ctx = PrimeFieldCtx(13)
        assert ctx.subgroup_elements(3) == (1, 3, 9)
        assert ctx.subgroup_elements(4) == (1, 5, 8, 12)

    def test_structure(self):
        for p in (13, 31, 101):
            ctx = PrimeFieldCtx(p)
            for e in range(1, p):
                if (p - 1) % e:
                    continue
                sub = ctx.subgroup_elements(e)
                assert len(sub) == e
                assert sub == tuple(sorted(sub))
                elems = set(sub)
                assert 1 in elems
                for a in elems:
                    assert pow(a, e, p) == 1
                    for b in elems:
                        assert a * b % p in elems
                gen = ctx.subgroup_generator(e)
                assert len({pow(gen, k, p) for k in range(e)}) == e

    def test_rejects_non_divisor_order(self):
        ctx = PrimeFieldCtx(13)
        with pytest.raises(DomainError):
            ctx.subgroup_elements(5)


class TestExtractRoots:
    def test_frozen_values(self):
        ctx = PrimeFieldCtx(13)
        assert ctx.extract_roots(8, 3) == (2, 5, 6)
        assert ctx.extract_roots(3, 4) == (2, 3, 10, 11)
        assert ctx.extract_roots(2, 3) == ()

    def test_matches_brute_force(self):
        for p in (13, 31):
            ctx = PrimeFieldCtx(p)
            for e in (1, 2, 3, 5, 6):
                if (p - 1) % e:
                    continue
                for value in range(1, p):
                    assert ctx.extract_roots(value, e) == brute_roots(p, value, e)

    def test_index_multiple_filter_matches_brute(self):
        ctx = PrimeFieldCtx(13)
        for e in (1, 2, 3, 4):
            for n in (1, 2, 3, 4, 6):
                if (13 - 1) % (e * 1) or (13 - 1) % n:
                    continue
                for value in range(1, 13):
                    got = ctx.extract_roots(value, e, index_multiple=n)
                    assert got == brute_roots(13, value, e, n)

    def test_root_count_is_zero_or_e(self):
        ctx = PrimeFieldCtx(101)
        for e in (2, 4, 5):
            counts = {len(ctx.extract_roots(v, e)) for v in range(1, 101)}
            assert counts == {0, e}

    def test_zero_value_needs_allow_zero(self):
        ctx = PrimeFieldCtx(13)
        with pytest.raises(DomainError):
            ctx.extract_roots(0, 3)
        assert ctx.extract_roots(0, 3, allow_zero=True) == (0,)
        with pytest.raises(DomainError):
            ctx.extract_roots(0, 3, allow_zero=True, index_multiple=2)

    def test_rejects_bad_orders(self):
        ctx = PrimeFieldCtx(13)
        with pytest.raises(DomainError):
            ctx.extract_roots(8, 5)
        with pytest.raises(DomainError):
            ctx.extract_roots(8, 3, index_multiple=5)

    def test_index_normalization_for_one(self):
        # ind 1 = p - 1, so the trivial filter keeps 1 exactly when n | p - 1
        ctx = PrimeFieldCtx(13)
        assert 1 in ctx.extract_roots(1, 3, index_multiple=4)
        assert 1 in ctx.extract_roots(1, 3, index_multiple=6)
