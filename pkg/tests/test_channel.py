import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cholkit import (
    ChannelParams,
    ChannelRealization,
    RangeError,
    exact_correlation,
    exact_correlation_stream,
    generate_channel,
    receive,
    sample_correlation_stream,
    write_stream_csv,
)
from oracles import block_correlation_sum


def lag1_correlation(taps):
    num = np.mean(taps[1:] * taps[:-1].conj())
    return (num / np.mean(np.abs(taps) ** 2)).real


def fixed_channel(taps, symbols, noise=None):
    T, Lc, M = taps.shape
    noise = np.zeros((T, M), dtype=complex) if noise is None else noise
    p = ChannelParams(M=M, Lc=Lc, T=T, alpha=1.0, noise_var=0.0)
    return ChannelRealization(p, np.asarray(taps, dtype=complex), np.asarray(symbols, dtype=complex), noise)


class TestGenerate:
    def test_alpha_one_freezes_taps(self):
        ch = generate_channel(ChannelParams(alpha=1.0, T=50))
        assert np.all(ch.taps == ch.taps[0])

    def test_seeded(self):
        a = generate_channel(ChannelParams(seed=9, T=100))
        b = generate_channel(ChannelParams(seed=9, T=100))
        c = generate_channel(ChannelParams(seed=10, T=100))
        np.testing.assert_array_equal(a.taps, b.taps)
        np.testing.assert_array_equal(a.noise, b.noise)
        assert not np.array_equal(a.taps, c.taps)

    @pytest.mark.parametrize("alpha", [0.0, 0.99])
    def test_lag1_correlation(self, alpha):
        ch = generate_channel(ChannelParams(M=1, Lc=1, T=100_000, alpha=alpha, seed=11))
        assert abs(lag1_correlation(ch.taps[:, 0, 0]) - alpha) <= 0.02

    def test_tap_power_is_stationary(self):
        ch = generate_channel(ChannelParams(M=2, Lc=4, T=100_000, alpha=0.9, seed=12))
        total = np.sum(np.abs(ch.taps) ** 2, axis=1).mean(axis=0)
        np.testing.assert_allclose(total, 1.0, rtol=0.05)

    def test_symbol_alphabets(self):
        q = generate_channel(ChannelParams(T=200)).symbols
        np.testing.assert_allclose(np.abs(q), 1.0)
        b = generate_channel(ChannelParams(T=200, constellation="BPSK")).symbols
        assert set(np.unique(b.real)) <= {-1.0, 1.0} and not np.any(b.imag)

    def test_param_validation(self):
        for bad in (dict(M=0), dict(alpha=1.5), dict(noise_var=-1), dict(constellation="8PSK")):
            with pytest.raises(ValueError):
                ChannelParams(**bad)


class TestReceive:
    def test_noiseless_single_tap(self):
        ch = generate_channel(ChannelParams(Lc=1, noise_var=0.0, T=30))
        np.testing.assert_array_equal(receive(ch), ch.taps[:, 0, :] * ch.symbols[:, None])

    def test_zero_channel_passes_noise(self):
        ch = generate_channel(ChannelParams(T=30))
        zero = ChannelRealization(ch.params, np.zeros_like(ch.taps), ch.symbols, ch.noise)
        np.testing.assert_array_equal(receive(zero), ch.noise)

    def test_hand_convolution(self):
        taps = np.tile(np.array([[1.0], [0.5]]), (4, 1, 1))
        y = receive(fixed_channel(taps, [1, -1, 1, -1]))
        assert y[2, 0] == pytest.approx(0.5)
        assert y[0, 0] == pytest.approx(1.0)


class TestExactCorrelation:
    def test_memoryless(self):
        h = np.array([1.0 + 1j, 0.5])
        ch = fixed_channel(np.tile(h, (10, 1, 1)), np.ones(10))
        snap = exact_correlation(ch, 3, 5, noise_var=0.2)
        expected = np.kron(np.eye(3), np.outer(h, h.conj()) + 0.2 * np.eye(2))
        np.testing.assert_allclose(snap.R, expected, atol=1e-15)

    def test_two_tap_scalar(self):
        ch = fixed_channel(np.tile(np.array([[1.0], [0.5]]), (10, 1, 1)), np.ones(10))
        snap = exact_correlation(ch, 2, 5, noise_var=0.0)
        assert snap.obs.blocks[0, 0, 0] == pytest.approx(1.25)
        assert snap.obs.blocks[1, 0, 0] == pytest.approx(0.5)

    @given(N=st.integers(1, 5), Lc=st.integers(1, 4), seed=st.integers(0, 1000))
    def test_matches_double_sum(self, N, Lc, seed):
        ch = generate_channel(ChannelParams(M=2, Lc=Lc, T=20, alpha=0.9, seed=seed))
        n = 15
        snap = exact_correlation(ch, N, n)
        for i in range(N):
            for j in range(N):
                blk = snap.R[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
                np.testing.assert_allclose(blk, block_correlation_sum(ch.taps, n, i, j, 0.01), atol=1e-13)
        np.testing.assert_allclose(snap.obs.tilde_d, block_correlation_sum(ch.taps, n, 1, 1, 0.01), atol=1e-13)

    def test_shift_structure(self):
        ch = generate_channel(ChannelParams(M=2, Lc=3, T=40, alpha=0.95, seed=3))
        R0 = exact_correlation(ch, 5, 20).R
        R1 = exact_correlation(ch, 5, 21).R
        np.testing.assert_allclose(R1[2:, 2:], R0[:-2, :-2], atol=1e-14)

    def test_range(self):
        ch = generate_channel(ChannelParams(Lc=3, T=40))
        with pytest.raises(RangeError):
            exact_correlation(ch, 4, 4)
        with pytest.raises(RangeError):
            exact_correlation(ch, 4, 40)
        exact_correlation(ch, 4, 5)

    def test_sample_mean_oracle(self):
        T = 100_000
        ch = generate_channel(ChannelParams(M=2, Lc=2, T=T, alpha=1.0, seed=21))
        y = receive(ch)
        N = 3
        Y = np.concatenate([y[N - 1 - i : T - i] for i in range(N)], axis=1)
        emp = Y.T @ Y.conj() / Y.shape[0]
        R = exact_correlation(ch, N, T - 1).R
        assert np.abs(emp - R).max() <= 5 / np.sqrt(T) * np.abs(R).max()

    def test_stream_window(self):
        ch = generate_channel(ChannelParams(Lc=3, T=30))
        s = exact_correlation_stream(ch, 4)
        assert s.start == 5 and len(s) == 25
        np.testing.assert_array_equal(s.matrix(7), exact_correlation(ch, 4, 7).R)
        with pytest.raises(RangeError):
            s.obs(4)


class TestSampleCorrelation:
    def test_forgetting_one_is_frozen(self):
        y = np.ones((20, 2), dtype=complex)
        s = sample_correlation_stream(y, 3, 1.0)
        assert all(not np.any(o.blocks) for o in s.observations)

    def test_constant_input_geometric_error(self):
        c = np.array([1.0 + 2j, -0.5j])
        lam = 0.9
        s = sample_correlation_stream(np.tile(c, (40, 1)), 2, lam)
        cc = np.outer(c, c.conj())
        for n in range(40):
            err = np.linalg.norm(s.obs(n).blocks[0] - cc)
            assert err == pytest.approx(lam ** (n + 1) * np.linalg.norm(cc), rel=1e-9)

    def test_late_window_average(self):
        T = 10_000
        ch = generate_channel(ChannelParams(M=2, Lc=3, T=T, alpha=1.0, seed=5))
        s = sample_correlation_stream(receive(ch), 4, 0.98)
        avg = np.mean([s.obs(n).blocks[0] for n in range(T // 2, T)], axis=0)
        r00 = exact_correlation(ch, 4, T - 1).obs.blocks[0]
        assert np.linalg.norm(avg - r00) <= 0.1 * np.linalg.norm(r00)

    def test_lambda_range(self):
        with pytest.raises(ValueError):
            sample_correlation_stream(np.ones((5, 1)), 2, 0.0)


def test_stream_csv_round_trip():
    y = generate_channel(ChannelParams(T=6)).noise
    buf = io.StringIO()
    write_stream_csv(y, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,y0_re,y0_im,y1_re,y1_im"
    back = np.loadtxt(lines[1:], delimiter=",")
    np.testing.assert_array_equal(back[:, 0], np.arange(6))
    np.testing.assert_array_equal(back[:, 1::2] + 1j * back[:, 2::2], y)
