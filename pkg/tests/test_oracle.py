"""Oracle implementations, instance generation, file round trips."""

import json

import pytest

from powerprobe.ff_core import DomainError
from powerprobe.oracle import (CachingOracle, InstanceSpec, LocalPowerOracle,
                               ReplayOracle, TranscriptIncompleteError,
                               gen_instance, instance_from_json,
                               instance_to_json, make_oracle, read_instance,
                               read_transcript, replay_oracle_from_file,
                               transcript_to_jsonl, write_instance,
                               write_transcript)
from powerprobe.poly_algebra import (Poly, RationalFn, is_square_free,
                                     perfect_power_decompose)


class TestInstanceSpec:
    def test_validation(self):
        f = Poly(13, [1, 1])
        with pytest.raises(DomainError):
            InstanceSpec(12, 3, 1, f)
        with pytest.raises(DomainError):
            InstanceSpec(13, 5, 1, f)  # 5 does not divide 12
        with pytest.raises(DomainError):
            InstanceSpec(13, 3, 0, f)
        with pytest.raises(DomainError):
            InstanceSpec(13, 3, 2, f)  # degree mismatch
        with pytest.raises(DomainError):
            InstanceSpec(13, 3, 1, Poly(13, [1, 2]))  # not monic
        with pytest.raises(DomainError):
            InstanceSpec(13, 3, 1, f, g=Poly(13, [1, 2, 1]))

    def test_accepts_valid(self):
        spec = InstanceSpec(13, 3, 2, Poly(13, [1, 0, 1]), g=Poly(13, [2, 0, 1]), seed=9)
        assert spec.p == 13 and spec.e == 3 and spec.d == 2


class TestLocalOracle:
    def test_frozen_answers(self):
        o = LocalPowerOracle(13, 3, Poly(13, [1, 1]))
        assert o.query(1) == 8
        assert o.query(12) == 0
        o2 = LocalPowerOracle(13, 4, Poly(13, [1, 0, 1]))
        assert o2.query(2) == 1

    def test_transcript_and_counting(self):
        o = LocalPowerOracle(13, 3, Poly(13, [1, 1]))
        assert o.query_count == 0
        o.query(3)
        o.query(4)
        assert o.query_count == 2
        assert o.transcript == ((3, 12), (4, 8))
        assert not o.has_repeated_queries
        o.query(3)
        assert o.has_repeated_queries
        assert o.query_count == 3

    def test_pure_function_of_input(self):
        o = LocalPowerOracle(101, 5, Poly(101, [7, 3, 1]))
        assert o.query(42) == o.query(42)

    def test_rejects_out_of_range(self):
        o = LocalPowerOracle(13, 3, Poly(13, [1, 1]))
        with pytest.raises(DomainError):
            o.query(13)
        with pytest.raises(DomainError):
            o.query(-1)


class TestReplayOracle:
    def test_answers_and_gap(self):
        o = ReplayOracle(13, 3, {1: 8, 2: 1})
        assert o.query(1) == 8
        with pytest.raises(TranscriptIncompleteError) as err:
            o.query(5)
        assert "x = 5" in str(err.value)

    def test_round_trip_through_file(self, tmp_path):
        inner = LocalPowerOracle(13, 3, Poly(13, [1, 1]))
        for x in range(6):
            inner.query(x)
        path = tmp_path / "t.jsonl"
        write_transcript(inner, path)
        replay = replay_oracle_from_file(path)
        assert replay.p == 13 and replay.e == 3
        for x in range(6):
            assert replay.query(x) == pow(x + 1, 3, 13)

    def test_header_and_count_validation(self, tmp_path):
        lines = transcript_to_jsonl(13, 3, [])
        header = json.loads(lines.splitlines()[0])
        assert header == {"p": 13, "e": 3, "query_count": 0}
        bad = '{"p": 13, "e": 3, "query_count": 2}\n{"x": 1, "answer": 8}\n'
        path = tmp_path / "bad.jsonl"
        path.write_text(bad)
        with pytest.raises(Exception):
            read_transcript(path)


class TestCachingOracle:
    def test_dedup(self):
        inner = LocalPowerOracle(13, 3, Poly(13, [1, 1]))
        o = CachingOracle(inner)
        assert o.query(4) == 8
        assert o.query(4) == 8
        assert o.query(5) == pow(6, 3, 13)
        assert o.query_count == 2  # distinct points only
        assert inner.query_count == 2  # repeat served from cache
        assert not inner.has_repeated_queries


class TestGenInstance:
    def test_deterministic(self):
        a = gen_instance(13, 3, 2, seed=1)
        b = gen_instance(13, 3, 2, seed=1)
        assert a == b
        c = gen_instance(13, 3, 2, seed=2)
        assert a != c

    def test_monic_degree(self):
        for seed in range(10):
            spec = gen_instance(101, 5, 3, seed=seed)
            assert spec.f.is_monic and spec.f.degree == 3
            assert spec.g is None

    def test_require_square_free(self):
        for seed in range(10):
            spec = gen_instance(13, 3, 2, seed=seed, require_square_free=True)
            assert is_square_free(spec.f)

    def test_with_g_variants(self):
        spec = gen_instance(101, 5, 2, seed=3, with_g=True)
        assert spec.g is not None and spec.g.is_monic and spec.g.degree == 2
        eq = gen_instance(101, 5, 2, seed=3, equal_g=True)
        assert eq.g == eq.f
        npp = gen_instance(101, 4, 4, seed=5, with_g=True,
                           require_non_perfect_power_ratio=True)
        assert npp.f != npp.g
        _, k = perfect_power_decompose(RationalFn(npp.f, npp.g))
        assert k == 1

    def test_degree_bound(self):
        with pytest.raises(DomainError):
            gen_instance(13, 3, 13, seed=1)

    def test_bad_e(self):
        with pytest.raises(DomainError):
            gen_instance(13, 5, 2, seed=1)


class TestMakeOracle:
    def test_f_and_g(self):
        spec = gen_instance(101, 5, 2, seed=3, with_g=True)
        of = make_oracle(spec)
        og = make_oracle(spec, which="g")
        assert of.query(7) == pow(spec.f(7), 5, 101)
        assert og.query(7) == pow(spec.g(7), 5, 101)

    def test_missing_g_rejected(self):
        spec = gen_instance(101, 5, 2, seed=3)
        with pytest.raises(DomainError):
            make_oracle(spec, which="g")


class TestInstanceFiles:
    def test_json_shape(self):
        spec = gen_instance(13, 3, 2, seed=1)
        text = instance_to_json(spec)
        data = json.loads(text)
        assert list(data) == ["p", "e", "d", "f", "seed"]
        assert data["f"] == [str(c) for c in spec.f.coeffs]
        assert text.endswith("\n")
        assert instance_from_json(text) == spec

    def test_optional_keys_omitted(self):
        spec = InstanceSpec(13, 3, 2, Poly(13, [1, 0, 1]))
        data = json.loads(instance_to_json(spec))
        assert "g" not in data and "seed" not in data

    def test_write_read_write_byte_identical(self, tmp_path):
        for seed in range(8):
            spec = gen_instance(101, 5, 3, seed=seed, with_g=True)
            p1 = tmp_path / ("a%d.json" % seed)
            p2 = tmp_path / ("b%d.json" % seed)
            write_instance(spec, p1)
            write_instance(read_instance(p1), p2)
            assert p1.read_bytes() == p2.read_bytes()

    def test_redact_drops_hidden_polys(self, tmp_path):
        spec = gen_instance(13, 3, 2, seed=1, with_g=True)
        path = tmp_path / "r.json"
        write_instance(spec, path, redact=True)
        data = json.loads(path.read_text())
        assert "f" not in data and "g" not in data
        back = read_instance(path)
        assert back.f is None
        assert (back.p, back.e, back.d) == (13, 3, 2)


class TestTranscriptFiles:
    def test_round_trip(self, tmp_path):
        o = LocalPowerOracle(101, 5, Poly(101, [7, 3, 1]))
        for x in (0, 5, 9, 5):
            o.query(x)
        path = tmp_path / "t.jsonl"
        write_transcript(o, path)
        p, e, entries = read_transcript(path)
        assert (p, e) == (101, 5)
        assert entries == list(o.transcript)

    def test_write_read_write_byte_identical(self, tmp_path):
        o = LocalPowerOracle(101, 5, Poly(101, [7, 3, 1]))
        for x in range(7):
            o.query(x)
        p1 = tmp_path / "t1.jsonl"
        write_transcript(o, p1)
        p_, e_, entries = read_transcript(p1)
        replay = ReplayOracle(p_, e_, dict(entries))
        for x, _ in entries:
            replay.query(x)
        p2 = tmp_path / "t2.jsonl"
        write_transcript(replay, p2)
        assert p1.read_bytes() == p2.read_bytes()
