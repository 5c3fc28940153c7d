import math

import numpy as np
import pytest

from sdof_lab import infotheory as it
from sdof_lab.errors import CapExceeded, InvalidPmf, UndefinedEquivocation
from sdof_lab.ria import BinningCodebook
from sdof_lab.rng import RngHandle


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def make_codebook(sequences, bin_of, num_bins, n=1):
    seqs = np.array(sequences, dtype=np.int64)
    return BinningCodebook(n=n, rate_bits=math.log2(num_bins) / n,
                           sequences=seqs, bin_of=np.array(bin_of, dtype=np.int64),
                           num_bins=num_bins, rng=RngHandle(0))


class TestEntropy:
    def test_uniform(self):
        assert it.entropy_bits([0.25] * 4) == pytest.approx(2.0, abs=1e-12)

    def test_degenerate(self):
        assert it.entropy_bits([1.0, 0.0]) == 0.0

    def test_dyadic(self):
        assert it.entropy_bits([0.5, 0.25, 0.25]) == pytest.approx(1.5, abs=1e-12)


class TestMutualInformation:
    def test_independent_is_zero(self):
        joint = np.outer([0.3, 0.7], [0.25, 0.25, 0.5])
        assert it.mutual_information(joint) == pytest.approx(0.0, abs=1e-12)

    def test_identity_channel(self):
        assert it.mutual_information(np.eye(4) / 4) == pytest.approx(2.0, abs=1e-12)

    def test_bsc(self):
        p = 0.1
        joint = 0.5 * np.array([[1 - p, p], [p, 1 - p]])
        assert it.mutual_information(joint) == pytest.approx(1 - h2(p), abs=1e-12)

    def test_invalid_pmf(self):
        with pytest.raises(InvalidPmf):
            it.mutual_information(np.array([[0.6, 0.6], [-0.1, -0.1]]))
        with pytest.raises(InvalidPmf):
            it.mutual_information(np.full((2, 2), 0.3))


def binary_users(K):
    return tuple(np.array([0.5, 0.5]) for _ in range(K)), tuple(np.eye(2) for _ in range(K))


def xor_channel(z_mode):
    """Y = X1 xor X2; Z is constant, a copy of Y, or a BSC(0.3) view of Y."""
    ch = np.zeros((2, 2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            y = x1 ^ x2
            if z_mode == "constant":
                ch[x1, x2, y, 0] = 1.0
            elif z_mode == "copy":
                ch[x1, x2, y, y] = 1.0
            else:
                ch[x1, x2, y, y] = 0.7
                ch[x1, x2, y, 1 - y] = 0.3
    return ch


class TestRegion:
    def test_xor_blind_eavesdropper(self):
        pu, pxu = binary_users(2)
        dm = it.DiscreteMac(pu=pu, px_given_u=pxu, channel=xor_channel("constant"))
        rep = it.thm1_region(dm)
        for s in (frozenset([0]), frozenset([1]), frozenset([0, 1])):
            assert rep.subset_rates[s] == pytest.approx(1.0, abs=1e-12)
        assert rep.sum_bound == pytest.approx(1.0, abs=1e-12)

    def test_xor_perfect_eavesdropper(self):
        pu, pxu = binary_users(2)
        dm = it.DiscreteMac(pu=pu, px_given_u=pxu, channel=xor_channel("copy"))
        rep = it.thm1_region(dm)
        assert rep.sum_bound == 0.0

    def test_single_user_bsc_wiretap(self):
        ch = np.zeros((2, 2, 2))
        for x in range(2):
            for y in range(2):
                for z in range(2):
                    py = 0.9 if y == x else 0.1
                    pz = 0.7 if z == y else 0.3
                    # z is a further degraded view of y
                    ch[x, y, z] = py * pz
        dm = it.DiscreteMac(pu=(np.array([0.5, 0.5]),),
                            px_given_u=(np.eye(2),), channel=ch)
        rep = it.thm1_region(dm)
        assert rep.subset_rates[frozenset([0])] == pytest.approx(1 - h2(0.1), abs=1e-12)
        q = 0.9 * 0.3 + 0.1 * 0.7  # crossover of the cascaded eavesdropper channel
        assert rep.sum_bound == pytest.approx(h2(q) - h2(0.1), abs=1e-12)

    def test_cap_guard(self):
        big = np.array([1.0 / 300] * 300)
        ch = np.full((1, 200, 200), 1.0 / 40000)
        with pytest.raises(CapExceeded):
            it._joint_uyz(it.DiscreteMac(pu=(big,),
                                         px_given_u=(np.ones((300, 1)),),
                                         channel=ch))


def one_hot_channel(nz):
    def f(xs):
        p = np.zeros(nz)
        p[xs[0] % nz] = 1.0
        return p
    return f


class TestEquivocation:
    def test_blind_eavesdropper_is_perfect(self):
        cb = make_codebook([[0], [1]], [0, 1], 2)
        delta, h = it.equivocation_exact([cb], lambda xs: np.array([0.5, 0.5]))
        assert delta == pytest.approx(1.0, abs=1e-12)
        assert h == pytest.approx(1.0, abs=1e-12)

    def test_transparent_uncoded_is_zero(self):
        cb = make_codebook([[0], [1]], [0, 1], 2)
        delta, _ = it.equivocation_exact([cb], one_hot_channel(2))
        assert delta == pytest.approx(0.0, abs=1e-12)

    def test_binning_hides_message(self):
        # two sequences per bin; the eavesdropper sees x mod 2, which is
        # uniform within every bin, so the bin index stays fully hidden
        cb = make_codebook([[0], [1], [2], [3]], [0, 0, 1, 1], 2)
        delta, _ = it.equivocation_exact([cb], lambda xs: one_hot_channel(2)((xs[0] % 2,)))
        assert delta == pytest.approx(1.0, abs=1e-12)

    def test_binning_aligned_with_leak_is_zero(self):
        cb = make_codebook([[0], [1], [2], [3]], [0, 0, 1, 1], 2)
        delta, _ = it.equivocation_exact([cb], lambda xs: one_hot_channel(2)((xs[0] // 2,)))
        assert delta == pytest.approx(0.0, abs=1e-12)

    def test_joint_is_pmf(self):
        cb = make_codebook([[0, 1], [1, 0], [2, 2], [3, 1]], [0, 1, 0, 1], 2, n=2)
        joint = it.message_output_joint([cb], lambda xs: it.quantized_gaussian_pmf(xs[0], cells=8))
        assert joint.sum() == pytest.approx(1.0, abs=1e-9)
        assert joint.shape == (2, 64)
        assert np.allclose(joint.sum(axis=-1), 0.5)

    def test_two_user_subsets(self):
        cbs = [make_codebook([[0], [1], [2], [3]], [0, 1, 0, 1], 2)
               for _ in range(2)]
        eve = lambda xs: it.quantized_gaussian_pmf(xs[0] + 0.5 * xs[1], cells=16, span=8.0)
        subs = it.equivocation_subsets(cbs, eve)
        assert set(subs) == {frozenset([0]), frozenset([1]), frozenset([0, 1])}
        for v in subs.values():
            assert 0.0 <= v <= 1.0 + 1e-12
        full = it.equivocation_exact(cbs, eve)[0]
        assert subs[frozenset([0, 1])] == pytest.approx(full, abs=1e-12)
        # per-user leakage cannot exceed total leakage (uniform messages)
        leak = 2 * (1 - full)
        assert 1 - subs[frozenset([0])] <= leak + 1e-12
        assert 1 - subs[frozenset([1])] <= leak + 1e-12

    def test_single_bin_undefined(self):
        cb = make_codebook([[0], [1]], [0, 0], 1)
        with pytest.raises(UndefinedEquivocation):
            it.equivocation_exact([cb], lambda xs: np.array([1.0]))

    def test_cap_guard(self):
        cb = make_codebook([[0] * 12, [1] * 12], [0, 1], 2, n=12)
        with pytest.raises(CapExceeded):
            it.message_output_joint([cb], lambda xs: it.quantized_gaussian_pmf(xs[0], cells=16))


class TestQuantizedGaussian:
    def test_normalized(self):
        p = it.quantized_gaussian_pmf(0.7)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(p >= 0)

    def test_mean_recovered(self):
        p = it.quantized_gaussian_pmf(1.3, cells=256, span=10.0)
        centers = 0.5 * (np.linspace(-10, 10, 257)[:-1] + np.linspace(-10, 10, 257)[1:])
        assert float(p @ centers) == pytest.approx(1.3, abs=1e-3)

    def test_shift_symmetry(self):
        a = it.quantized_gaussian_pmf(0.5, cells=64)
        b = it.quantized_gaussian_pmf(-0.5, cells=64)
        assert np.allclose(a, b[::-1])
