"""Two-user layered constellations for rational gain h1 = n/m.

Digits b_l in {0..a-1} are stacked positionally in base W, with (a, W) picked
per the case table below so that the received combination
(1/m) * sum_l (n*b_l + m*b'_l) W^l is injective over digit-word pairs
(property Gamma), despite carries between layers:

    case 1: 2n >= m             -> a = n,   W = n(2n-1)
    case 2: 2n <  m, m = 2s+1   -> a = s+1, W = (s+1)(2s+1)
    case 3: 2n <  m, m = 2s     -> a = s,   W = 2s^2 - n

All Gamma checks run in exact integer arithmetic (values scaled by m).
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, DigitOutOfRange, DomainError, GammaViolated

PAIR_CAP = 10**8


@dataclass(frozen=True)
class LayeredParams:
    n: int
    m: int
    case_id: int
    a: int
    W: int
    L: int
    A: float
    P_tilde: float
    degenerate: bool = False

    def __post_init__(self):
        if math.gcd(self.n, self.m) != 1 or self.m < 1 or self.n < 1:
            raise DomainError("n/m must be a positive fraction in lowest terms")
        if not self.degenerate and not 1 <= self.a < self.W:
            raise DomainError("need 1 <= a < W")
        if self.L < 1:
            raise DomainError("need at least one layer")
        if self.A <= 0:
            raise DomainError("A must be positive")


def select_constellation_params(n, m):
    """Digit alphabet size a and base W for gain n/m; returns (case_id, a, W, degenerate)."""
    if n < 1 or m < 1 or math.gcd(n, m) != 1:
        raise DomainError(f"gains must be coprime positive integers, got {n}/{m}")
    if 2 * n >= m:
        case_id, a, W = 1, n, n * (2 * n - 1)
    elif m % 2 == 1:
        s = (m - 1) // 2
        case_id, a, W = 2, s + 1, (s + 1) * (2 * s + 1)
    else:
        s = m // 2
        case_id, a, W = 3, s, 2 * s * s - n
    return case_id, a, W, a < 2


def layer_count(P_tilde, eps, W):
    """L = floor((0.5 - eps) log P / log W), clamped to at least one layer."""
    if W < 2:
        raise DomainError("base W must be at least 2")
    L = int(np.floor((0.5 - eps) * np.log(P_tilde) / np.log(W)))
    return max(L, 1)


def power_scale(a, W, L, P_tilde):
    """Amplitude making the layered transmit power admissible: sqrt((W^2-1)P)/(a W^L)."""
    if not 1 <= a < W:
        raise DomainError("need 1 <= a < W")
    return math.sqrt((W * W - 1) * P_tilde) / (a * W**L)


def _word_values(a, W, L):
    """All sum_l b_l W^l over digit words, as exact integers."""
    vals = np.zeros(1, dtype=object)
    for l in range(L):
        layer = np.arange(a, dtype=object) * (W**l)
        vals = (vals[:, None] + layer[None, :]).ravel()
    return vals


def verify_gamma(n, m, a, W, L):
    """True iff n*v(b) + m*v(b') is injective over all digit-word pairs."""
    if a**(2 * L) > PAIR_CAP:
        raise CapExceeded(f"{a**(2*L)} pairs exceed the cap {PAIR_CAP}")
    if a == 1:
        return True
    words = _word_values(a, W, L)
    received = (words * n)[:, None] + (words * m)[None, :]
    return len(set(received.ravel().tolist())) == len(words) ** 2


def constellation_mean(a, W, L):
    return (a - 1) / 2.0 * sum(W**l for l in range(L))


def word_value(b, a, W):
    v = 0
    for l, d in enumerate(b):
        if not 0 <= d < a:
            raise DigitOutOfRange(f"digit {d} outside [0, {a})")
        v += d * W**l
    return v


def layered_encode(params, b, user=1):
    """Transmit value A*(v(b) - mean); DC removal shifts power, not distances."""
    if user not in (1, 2):
        raise DomainError("user must be 1 or 2")
    if len(b) != params.L:
        raise DigitOutOfRange(f"word length {len(b)} != L={params.L}")
    v = word_value(b, params.a, params.W)
    return params.A * (v - constellation_mean(params.a, params.W, params.L))


@dataclass(frozen=True)
class LayeredDecoder:
    params: LayeredParams
    values: np.ndarray  # sorted received values (floats, DC removed)
    words: np.ndarray  # (count, 2) indices into the word table
    word_digits: tuple  # index -> digit word

    def decode(self, y):
        from .ria import nearest_index
        i = nearest_index(self.values, y)
        b_idx, bp_idx = self.words[i]
        return self.word_digits[b_idx], self.word_digits[bp_idx]


def build_layered_decoder(params):
    """Exact inverse table over all a^(2L) digit-word pairs.

    Verifies property Gamma and that the enumerated minimum gap equals A/m.
    """
    n, m, a, W, L, A = params.n, params.m, params.a, params.W, params.L, params.A
    if not verify_gamma(n, m, a, W, L):
        raise GammaViolated(f"gamma fails for n={n} m={m} a={a} W={W} L={L}")
    words = _word_values(a, W, L)
    count = len(words)
    digits = []
    for idx in range(count):
        v = int(words[idx])
        digits.append(tuple((v // W**l) % W for l in range(L)))
    # integer-scaled received values: m*v_r/A = n*v(b) + m*v(b')
    scaled = ((words * n)[:, None] + (words * m)[None, :]).ravel()
    pairs = np.indices((count, count)).reshape(2, -1).T
    order = np.argsort(np.asarray(scaled, dtype=np.float64), kind="stable")
    scaled = scaled[order]
    pairs = pairs[order]
    mu = constellation_mean(a, W, L)
    values = (A / m) * (np.asarray(scaled, dtype=np.float64) - (n + m) * mu)
    if a > 1:
        gaps = np.diff(values)
        d_min = float(gaps.min())
        if abs(d_min - A / m) > 1e-9 * (A / m):
            raise GammaViolated(
                f"enumerated min gap {d_min} != A/m = {A/m}")
    return LayeredDecoder(params=params, values=values, words=pairs,
                          word_digits=tuple(digits))


def layered_decode(params, y, decoder=None):
    """Nearest received-constellation point mapped back to both digit words."""
    if decoder is None:
        decoder = build_layered_decoder(params)
    return decoder.decode(y)


def multilayer_sdof(n, m):
    """Secure degrees of freedom log(a)/log(W) for gain n/m; 0 when degenerate."""
    case_id, a, W, degenerate = select_constellation_params(n, m)
    if degenerate:
        return 0.0
    if case_id == 1:
        eta = math.log(n) / math.log(n * (2 * n - 1))
    elif case_id == 2:
        s = (m - 1) // 2
        eta = math.log(s + 1) / math.log((s + 1) * (2 * s + 1))
    else:
        s = m // 2
        eta = math.log(s) / math.log(2 * s * s - n)
    assert abs(eta - math.log(a) / math.log(W)) < 1e-12
    return eta


def make_layered_params(n, m, P_tilde, eps=0.05):
    """Full parameter bundle for a power budget; degenerate schemes are flagged."""
    case_id, a, W, degenerate = select_constellation_params(n, m)
    if degenerate:
        return LayeredParams(n=n, m=m, case_id=case_id, a=a, W=max(W, 2), L=1,
                             A=math.sqrt(P_tilde), P_tilde=P_tilde, degenerate=True)
    L = layer_count(P_tilde, eps, W)
    A = power_scale(a, W, L, P_tilde)
    return LayeredParams(n=n, m=m, case_id=case_id, a=a, W=W, L=L, A=A,
                         P_tilde=P_tilde)
