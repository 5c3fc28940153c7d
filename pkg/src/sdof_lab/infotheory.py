"""Finite-alphabet information measures: mutual information, the K-user
secrecy rate-region constraints, and exact equivocation of small binning
codebooks.

All entropies and rates are in bits. Joint pmfs are built by full
enumeration, so alphabet sizes are capped; the point of this module is exact
desk-scale verification, not asymptotics.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InvalidPmf, UndefinedEquivocation

STATE_CAP = 10**7
PMF_ATOL = 1e-12


def _check_pmf(p, name="pmf"):
    p = np.asarray(p, dtype=float)
    if np.any(p < -PMF_ATOL):
        raise InvalidPmf(f"{name} has negative entries")
    if abs(p.sum() - 1.0) > 1e-9:
        raise InvalidPmf(f"{name} sums to {p.sum()}, not 1")
    return np.clip(p, 0.0, None)


def entropy_bits(p):
    p = np.asarray(p, dtype=float).ravel()
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def mutual_information(joint):
    """I(A;B) in bits from a joint pmf over A x B, with 0 log 0 = 0."""
    joint = _check_pmf(joint, "joint")
    if joint.ndim != 2:
        raise InvalidPmf("joint pmf must be two-dimensional")
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    return entropy_bits(pa) + entropy_bits(pb) - entropy_bits(joint)


@dataclass(frozen=True)
class DiscreteMac:
    pu: tuple  # K marginal pmfs P(u_k)
    px_given_u: tuple  # K arrays, shape (|U_k|, |X_k|)
    channel: np.ndarray  # shape (|X_1|, ..., |X_K|, |Y|, |Z|)

    def __post_init__(self):
        object.__setattr__(self, "pu", tuple(_check_pmf(p, "pu") for p in self.pu))
        pxu = []
        for k, mat in enumerate(self.px_given_u):
            mat = np.asarray(mat, dtype=float)
            for u in range(mat.shape[0]):
                _check_pmf(mat[u], f"px_given_u[{k}][{u}]")
            pxu.append(mat)
        object.__setattr__(self, "px_given_u", tuple(pxu))
        ch = np.asarray(self.channel, dtype=float)
        flat = ch.reshape(-1, ch.shape[-2] * ch.shape[-1])
        for row in flat:
            _check_pmf(row, "channel row")
        object.__setattr__(self, "channel", ch)

    @property
    def K(self):
        return len(self.pu)


@dataclass(frozen=True)
class RegionReport:
    subset_rates: dict  # frozenset S -> I(U_S; Y | U_{S^c}) in bits
    sum_bound: float  # [I(U_K;Y) - I(U_K;Z)]+


def _joint_uyz(dm):
    """Joint pmf over (u_1, ..., u_K, y, z) under the product factorization."""
    K = dm.K
    u_sizes = [p.size for p in dm.pu]
    ny, nz = dm.channel.shape[-2], dm.channel.shape[-1]
    total = int(np.prod(u_sizes)) * ny * nz
    if total > STATE_CAP:
        raise CapExceeded(f"{total} joint states exceed the cap {STATE_CAP}")
    joint = np.zeros(tuple(u_sizes) + (ny, nz))
    x_ranges = [range(m.shape[1]) for m in dm.px_given_u]
    for us in itertools.product(*[range(s) for s in u_sizes]):
        pu = math.prod(dm.pu[k][us[k]] for k in range(K))
        if pu == 0:
            continue
        cond = np.zeros((ny, nz))
        for xs in itertools.product(*x_ranges):
            px = math.prod(dm.px_given_u[k][us[k], xs[k]] for k in range(K))
            if px == 0:
                continue
            cond += px * dm.channel[xs]
        joint[us] = pu * cond
    return joint


def thm1_region(dm):
    """Evaluate every secrecy-region constraint at the given auxiliaries.

    Returns I(U_S;Y|U_{S^c}) for each nonempty S and the clamped sum bound
    [I(U_K;Y) - I(U_K;Z)]+.
    """
    joint = _joint_uyz(dm)
    K = dm.K
    y_axis, z_axis = K, K + 1
    p_uy = joint.sum(axis=z_axis)
    p_uz = joint.sum(axis=y_axis)
    h_y_given_all = entropy_bits(p_uy) - entropy_bits(p_uy.sum(axis=y_axis))
    rates = {}
    for r in range(1, K + 1):
        for subset in itertools.combinations(range(K), r):
            comp = tuple(k for k in range(K) if k not in subset)
            # I(U_S;Y|U_Sc) = H(Y|U_Sc) - H(Y|U_K)
            p_cy = p_uy.sum(axis=subset)
            h_y_given_comp = entropy_bits(p_cy) - entropy_bits(p_cy.sum(axis=len(comp)))
            rates[frozenset(subset)] = max(h_y_given_comp - h_y_given_all, 0.0)
    i_uy = mutual_information(p_uy.reshape(-1, p_uy.shape[-1]))
    i_uz = mutual_information(p_uz.reshape(-1, p_uz.shape[-1]))
    return RegionReport(subset_rates=rates, sum_bound=max(i_uy - i_uz, 0.0))


def message_output_joint(codebooks, eve_channel, n=None):
    """Exact joint pmf over (W_1, ..., W_K, Z^n) for a binning-codebook stack.

    codebooks: one BinningCodebook per user; messages are independent uniform
    bin indices. eve_channel(x_tuple) must return the per-symbol pmf of the
    eavesdropper output given the K transmitted symbols. Codeword choices are
    uniform within each bin; the channel is memoryless across the block.
    """
    K = len(codebooks)
    if n is None:
        n = codebooks[0].n
    if any(cb.n != n for cb in codebooks):
        raise InvalidPmf("codebooks must share one blocklength")
    nz = len(np.asarray(eve_channel(tuple(int(cb.sequences[0][0]) for cb in codebooks))))
    bins = tuple(cb.num_bins for cb in codebooks)
    num_messages = math.prod(bins)
    if num_messages * nz**n > STATE_CAP:
        raise CapExceeded("joint message/output enumeration exceeds the cap")

    bin_lists = [[cb.bin_members(w) for w in range(cb.num_bins)] for cb in codebooks]
    joint = np.zeros(bins + (nz**n,))
    z_words = list(itertools.product(range(nz), repeat=n))
    for ws in itertools.product(*[range(b) for b in bins]):
        pw = 1.0 / num_messages
        members = [bin_lists[k][ws[k]] for k in range(K)]
        choice_weight = pw / math.prod(len(mm) for mm in members)
        for picks in itertools.product(*members):
            # per-symbol pmfs for this codeword combination
            symbol_pmfs = []
            for t in range(n):
                xs = tuple(int(codebooks[k].sequences[picks[k]][t]) for k in range(K))
                symbol_pmfs.append(np.asarray(eve_channel(xs), dtype=float))
            for zi, zw in enumerate(z_words):
                pz = math.prod(symbol_pmfs[t][zw[t]] for t in range(n))
                joint[ws + (zi,)] += choice_weight * pz
    return joint


def _delta_from_joint(joint, axes):
    """Normalized equivocation of the message coordinates in `axes`."""
    K = joint.ndim - 1
    drop = tuple(k for k in range(K) if k not in axes)
    sub = joint.sum(axis=drop) if drop else joint
    pw = sub.sum(axis=-1)
    hw = entropy_bits(pw)
    if hw <= 0:
        raise UndefinedEquivocation("message entropy is zero")
    pz = sub.reshape(-1, sub.shape[-1]).sum(axis=0)
    h_w_given_z = entropy_bits(sub) - entropy_bits(pz)
    return h_w_given_z / hw


def equivocation_exact(codebooks, eve_channel, n=None):
    """Exact normalized equivocation H(W_K|Z^n)/H(W_K); also the raw
    conditional entropy. Returns (delta, h_w_given_z)."""
    joint = message_output_joint(codebooks, eve_channel, n)
    K = joint.ndim - 1
    delta = _delta_from_joint(joint, tuple(range(K)))
    pw = joint.sum(axis=-1)
    return delta, delta * entropy_bits(pw)


def equivocation_subsets(codebooks, eve_channel, n=None):
    """Delta_S for every nonempty subset S of users, from one exact joint."""
    joint = message_output_joint(codebooks, eve_channel, n)
    K = joint.ndim - 1
    out = {}
    for r in range(1, K + 1):
        for subset in itertools.combinations(range(K), r):
            out[frozenset(subset)] = _delta_from_joint(joint, subset)
    return out


def quantized_gaussian_pmf(mean, cells=64, span=6.0):
    """Unit-variance Gaussian centred at mean, quantized to a uniform grid.

    The grid spans +-span standard deviations around zero; the end cells
    absorb the tails. Quantization can only reduce the eavesdropper's
    information, so equivocations computed on it are conservative.
    """
    edges = np.linspace(-span, span, cells + 1)
    cdf = 0.5 * (1.0 + np.array([math.erf((e - mean) / math.sqrt(2)) for e in edges]))
    pmf = np.diff(cdf)
    pmf[0] += cdf[0]
    pmf[-1] += 1.0 - cdf[-1]
    return pmf
