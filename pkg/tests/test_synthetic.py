import math

import numpy as np
import pytest

from jetrope.features import mixed_value, scaled_jet_value
from jetrope.synthetic import (
    TIE_EPS,
    QuerySequence,
    TeacherKernel,
    format_line,
    generate,
    oracle_label,
    parse_line,
    read_dataset,
    sign_with_tie,
    write_dataset,
)


class TestTeacherKernel:
    def test_formulas_shared_with_feature_targets(self):
        lags = np.arange(1.0, 300.0)
        first = TeacherKernel(kind="first_jet")
        second = TeacherKernel(kind="second_jet")
        third = TeacherKernel(kind="third_jet")
        np.testing.assert_array_equal(first.values(lags), mixed_value(lags))
        np.testing.assert_array_equal(second.values(lags),
                                      scaled_jet_value(lags, 2))
        np.testing.assert_array_equal(third.values(lags),
                                      scaled_jet_value(lags, 3))

    def test_validation(self):
        with pytest.raises(ValueError):
            TeacherKernel(kind="zeroth_jet")
        with pytest.raises(ValueError):
            TeacherKernel(L=0.0)


class TestGenerate:
    def test_single_bit_sequence(self):
        # T=2: one bit at lag 1; K(1) = (1/1024) cos(0.05) > 0
        kernel = TeacherKernel(kind="first_jet", L=1024.0, omega=0.05)
        for seed in range(32):
            seq = generate(kernel, 2, seed)
            assert seq.length == 2
            assert seq.query_position == 1
            assert seq.bits.shape == (1,)
            assert seq.label == (1 if seq.bits[0] > 0 else -1)

    def test_all_ones_label_matches_brute_force_sum(self):
        kernel = TeacherKernel(kind="first_jet", L=1024.0, omega=0.05)
        T = 64
        total = sum((d / 1024.0) * math.cos(0.05 * d) for d in range(1, T))
        expected = 1 if total > 0 else -1  # direct summation gives -0.8225
        assert total == pytest.approx(-0.8225023040773137)
        assert oracle_label(np.ones(T - 1, dtype=int), kernel) == expected

    def test_flipping_bits_flips_label(self):
        kernel = TeacherKernel(kind="second_jet")
        for seed in range(64):
            seq = generate(kernel, 96, seed)
            if not seq.tie:
                assert oracle_label(-seq.bits, kernel) == -seq.label

    def test_determinism(self):
        kernel = TeacherKernel(kind="third_jet")
        a, b = generate(kernel, 256, 99), generate(kernel, 256, 99)
        np.testing.assert_array_equal(a.bits, b.bits)
        assert a.label == b.label

    def test_rejects_short_sequences(self):
        with pytest.raises(ValueError):
            generate(TeacherKernel(), 1, 0)


class TestOracleAgreement:
    @pytest.mark.parametrize("kind", ["first_jet", "second_jet", "third_jet"])
    def test_generator_oracle_agreement(self, kind):
        kernel = TeacherKernel(kind=kind)
        for seed in range(300):
            seq = generate(kernel, 128, seed)
            assert oracle_label(seq.bits, kernel) == seq.label

    def test_label_balance_logged(self):
        kernel = TeacherKernel(kind="third_jet")
        labels = [generate(kernel, 256, seed).label for seed in range(2000)]
        fraction = sum(1 for x in labels if x > 0) / len(labels)
        print(f"third_jet T=256 positive fraction over 2000 seeds: {fraction:.4f}")
        assert 0.45 <= fraction <= 0.55


class TestTieRule:
    def test_sign_with_tie(self):
        assert sign_with_tie(0.0) == (1, True)
        assert sign_with_tie(TIE_EPS / 2) == (1, True)
        assert sign_with_tie(-TIE_EPS / 2) == (1, True)
        assert sign_with_tie(1e-9) == (1, False)
        assert sign_with_tie(-1e-9) == (-1, False)

    def test_engineered_tie_by_bisection_on_omega(self):
        # alternating bits: the weighted sum crosses zero as a continuous
        # function of the kernel frequency; bisect it below the tie gate
        T = 64
        bits = np.array([1 if j % 2 == 0 else -1 for j in range(T - 1)])

        def weighted_sum(omega):
            kernel = TeacherKernel(kind="first_jet", omega=omega)
            lags = np.arange(T - 1, 0, -1, dtype=float)
            return float(np.dot(kernel.values(lags), bits))

        grid = np.linspace(0.02, 0.2, 400)
        values = [weighted_sum(w) for w in grid]
        idx = next(i for i in range(len(grid) - 1)
                   if values[i] * values[i + 1] < 0)
        lo, hi = grid[idx], grid[idx + 1]
        omega_tie = None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            value = weighted_sum(mid)
            if abs(value) < TIE_EPS / 10:
                omega_tie = mid
                break
            if weighted_sum(lo) * value <= 0:
                hi = mid
            else:
                lo = mid
        assert omega_tie is not None
        assert abs(weighted_sum(omega_tie)) < TIE_EPS
        kernel = TeacherKernel(kind="first_jet", omega=omega_tie)
        assert oracle_label(bits, kernel) == 1  # tie resolves to +1


class TestDatasetExport:
    def test_line_format(self):
        seq = QuerySequence(bits=np.array([1, -1, 1]), label=-1, seed=7)
        assert format_line(seq) == "7,4,-1,+-+"
        back = parse_line("7,4,-1,+-+")
        np.testing.assert_array_equal(back.bits, seq.bits)
        assert back.label == -1 and back.seed == 7

    def test_round_trip(self, tmp_path):
        kernel = TeacherKernel(kind="first_jet")
        sequences = [generate(kernel, 32, seed) for seed in range(20)]
        path = tmp_path / "data.txt"
        write_dataset(path, sequences)
        loaded = read_dataset(path)
        assert len(loaded) == 20
        for a, b in zip(sequences, loaded):
            np.testing.assert_array_equal(a.bits, b.bits)
            assert a.label == b.label and a.seed == b.seed

    def test_export_is_byte_stable(self, tmp_path):
        kernel = TeacherKernel(kind="second_jet")
        sequences = [generate(kernel, 48, seed) for seed in range(10)]
        p1, p2 = tmp_path / "a.txt", tmp_path / "b.txt"
        write_dataset(p1, sequences)
        write_dataset(p2, sequences)
        assert p1.read_bytes() == p2.read_bytes()

    def test_parse_line_validates_length(self):
        with pytest.raises(ValueError):
            parse_line("0,5,+1,+-")
