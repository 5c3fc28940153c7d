"""Single-antenna integer-constellation scheme with random binning.

Users transmit scaled integers from [-Q, Q]; the receiver sees
A * (h1*v1 + ... + h_{K-1}*v_{K-1} + vK) and hard-decodes to the nearest
point of the received constellation. For rationally independent gains every
received point decomposes uniquely (property Gamma), and a Diophantine
lower bound controls the minimum distance:

    d_min > A*c / Q**(K-1+eps)

which drives the error probability to zero as the power budget grows.
"""
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (CapExceeded, DecompositionNotUnique, DomainError)
from .rng import RngHandle

ENUM_CAP = 10**7
COLLISION_RTOL = 1e-12


@dataclass(frozen=True)
class RiaParams:
    h_tilde: tuple  # normalized gains, last entry 1
    eps: float
    P_tilde: float
    Q: int
    A: float
    c_kg: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "h_tilde", tuple(float(h) for h in self.h_tilde))
        if abs(self.h_tilde[-1] - 1.0) > 1e-12:
            raise DomainError("last normalized gain must be 1")
        if self.Q < 1:
            raise DomainError("Q must be at least 1")
        if self.A <= 0:
            raise DomainError("A must be positive")
        if self.A**2 * self.Q**2 > self.P_tilde * (1 + 1e-9):
            raise DomainError("A^2 Q^2 exceeds the power budget")

    @property
    def K(self):
        return len(self.h_tilde)


@dataclass(frozen=True)
class ReceivedConstellation:
    values: np.ndarray  # sorted
    labels: np.ndarray  # (len(values), K) integer rows, parallel to values
    d_min: float
    unique: bool

    def label(self, index):
        return tuple(int(v) for v in self.labels[index])


def scale_params(K, P_tilde, eps):
    """Constellation half-width Q and amplitude A for a power budget P_tilde.

    Q = floor(P^((1-eps)/(2(K+eps)))), A = P^((K-1+2eps)/(2(K+eps))); the pair
    satisfies A^2 Q^2 <= P_tilde.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps={eps} out of (0, 1)")
    if P_tilde < 1:
        raise DomainError(f"P_tilde={P_tilde} must be >= 1")
    if K < 2:
        raise DomainError("scheme needs at least two users")
    Q = max(1, int(np.floor(P_tilde ** ((1 - eps) / (2 * (K + eps))))))
    A = P_tilde ** ((K - 1 + 2 * eps) / (2 * (K + eps)))
    return Q, A


def build_received_constellation(params, per_user_Q=None):
    """Exhaustively enumerate A * sum_k h_k v_k over v in prod_k [-Q_k, Q_k]."""
    K = params.K
    qs = list(per_user_Q) if per_user_Q is not None else [params.Q] * K
    count = 1
    for q in qs:
        count *= 2 * q + 1
    if count > ENUM_CAP:
        raise CapExceeded(f"{count} points exceed the enumeration cap {ENUM_CAP}")
    axes = [np.arange(-q, q + 1, dtype=np.int64) for q in qs]
    grids = np.meshgrid(*axes, indexing="ij")
    labels = np.stack([g.ravel() for g in grids], axis=1)
    values = params.A * (labels @ np.asarray(params.h_tilde))
    order = np.argsort(values, kind="stable")
    values = values[order]
    labels = labels[order]
    gaps = np.diff(values)
    collision_tol = COLLISION_RTOL * params.A
    unique = bool(np.all(gaps > collision_tol)) if gaps.size else True
    distinct = gaps[gaps > collision_tol]
    d_min = float(distinct.min()) if distinct.size else 0.0
    return ReceivedConstellation(values=values, labels=labels,
                                 d_min=d_min, unique=unique)


def nearest_index(values, y):
    """Index of the value nearest to y in a sorted array; ties toward smaller."""
    pos = int(np.searchsorted(values, y))
    if pos == 0:
        return 0
    if pos == len(values):
        return len(values) - 1
    return pos - 1 if y - values[pos - 1] <= values[pos] - y else pos


def hard_decode(y, vr):
    """Nearest-point label for a received sample; requires property Gamma."""
    if not vr.unique:
        raise DecompositionNotUnique("received constellation has colliding points")
    return vr.label(nearest_index(vr.values, y))


@dataclass(frozen=True)
class KgBound:
    d_min_bound: float
    pe_bound: float


def kg_distance_bound(params):
    """Diophantine lower bound on d_min and the induced error-probability bound."""
    K, eps, A, Q, c = params.K, params.eps, params.A, params.Q, params.c_kg
    d = A * c / Q ** (K - 1 + eps)
    pe = float(np.exp(-(A * c) ** 2 / (8.0 * Q ** (2 * K - 2 + 2 * eps))))
    return KgBound(d_min_bound=d, pe_bound=min(pe, 1.0))


def calibrate_c_kg(params, vr):
    """Empirical constant making the distance bound tight on this instance."""
    return vr.d_min * params.Q ** (params.K - 1 + params.eps) / params.A


def rational_dependence(gains, coeff_bound, tol):
    """Search for an integer relation p + sum_k q_k * g_k = 0 (within tol).

    Scans q vectors in increasing max-abs-coefficient order and returns the
    first (p, q_1, ..., q_n) found, or None. gains excludes the trailing
    normalized gain of 1, whose integer multiple is the free term p.
    """
    gains = np.asarray(gains, dtype=float)
    n = gains.size
    if coeff_bound < 1:
        raise DomainError("coeff_bound must be >= 1")
    if (2 * coeff_bound + 1) ** n > ENUM_CAP:
        raise CapExceeded("coefficient search space exceeds the enumeration cap")
    for level in range(1, coeff_bound + 1):
        ladder = [0]
        for v in range(1, level + 1):
            ladder += [v, -v]
        for q in itertools.product(ladder, repeat=n):
            if max(abs(v) for v in q) != level:
                continue
            s = float(np.dot(q, gains))
            p = int(np.round(-s))
            if abs(p + s) <= tol:
                return (p,) + q
    return None


@dataclass(frozen=True)
class BinningCodebook:
    n: int
    rate_bits: float
    sequences: np.ndarray  # (num_sequences, n) integers in [-Q, Q]
    bin_of: np.ndarray  # sequence index -> bin index
    num_bins: int
    rng: RngHandle = field(repr=False)

    def bin_members(self, w):
        return np.flatnonzero(self.bin_of == w)

    def encode(self, w, rng=None):
        """Uniformly random codeword from bin w."""
        members = self.bin_members(w)
        g = (rng or self.rng.substream(0xE)).generator()
        return self.sequences[g.choice(members)]


def build_binning_codebook(params, n, rate_bits, rng, num_sequences=None):
    """i.i.d. uniform sequences over [-Q, Q]^n, distributed into 2^(n*R) bins.

    The bin assignment is redrawn until every bin is nonempty, so every
    message is encodable. The sequence count is a free parameter at desk
    scale (defaults to 4x the bin count).
    """
    num_bins = int(round(2 ** (n * rate_bits)))
    if num_bins < 1:
        raise DomainError("need at least one bin")
    if num_sequences is None:
        num_sequences = 4 * num_bins
    if num_sequences < num_bins:
        raise DomainError(f"{num_sequences} sequences cannot fill {num_bins} bins")
    g = rng.generator()
    sequences = g.integers(-params.Q, params.Q + 1, size=(num_sequences, n))
    while True:
        bin_of = g.integers(0, num_bins, size=num_sequences)
        if len(np.unique(bin_of)) == num_bins:
            break
    return BinningCodebook(n=n, rate_bits=rate_bits, sequences=sequences,
                           bin_of=bin_of, num_bins=num_bins, rng=rng)


def sum_rate_lower_bound(K, Q, Pe):
    """Fano-style secrecy sum-rate lower bound in bits; returns (raw, clamped)."""
    if Q < 1:
        raise DomainError("Q must be at least 1")
    ent = np.log2(2 * Q + 1)
    raw = K * ent - np.log2(2 * K * Q + 1) - 1.0 - Pe * K * ent
    return raw, max(raw, 0.0)
