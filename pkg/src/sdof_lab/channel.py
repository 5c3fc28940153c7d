"""K-user real Gaussian MIMO multiple-access channel with an eavesdropper.

The physical model is

    y = sum_k H_k x_k + n1        (intended receiver, N antennas)
    z = sum_k He_k x_k + n2       (eavesdropper, Ne antennas)

with unit-covariance Gaussian noise and a per-user power budget
Tr(Q_k) <= P. Channels are real-valued and immutable after construction.
"""
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonPositivePower
from .rng import RngHandle

# Singular values below RANK_RCOND * sigma_max are treated as zero.
RANK_RCOND = 1e-12


@dataclass(frozen=True)
class MimoMacChannel:
    H: tuple  # K matrices, each N x M_k
    He: tuple  # K matrices, each Ne x M_k
    P: float

    def __post_init__(self):
        object.__setattr__(self, "H", tuple(np.atleast_2d(np.asarray(h, dtype=float)) for h in self.H))
        object.__setattr__(self, "He", tuple(np.atleast_2d(np.asarray(h, dtype=float)) for h in self.He))

    @property
    def K(self):
        return len(self.H)

    @property
    def M(self):
        return [h.shape[1] for h in self.H]

    @property
    def N(self):
        return self.H[0].shape[0]

    @property
    def Ne(self):
        return self.He[0].shape[0]

    def h_cat(self):
        return np.hstack(self.H)

    def he_cat(self):
        return np.hstack(self.He)

    @classmethod
    def from_json(cls, path):
        """Load {"K":int, "P":float, "H":[[[...]]], "He":[[[...]]]} (row-major)."""
        with open(path) as f:
            doc = json.load(f)
        ch = cls(H=tuple(np.array(m, dtype=float) for m in doc["H"]),
                 He=tuple(np.array(m, dtype=float) for m in doc["He"]),
                 P=float(doc["P"]))
        if "K" in doc and int(doc["K"]) != ch.K:
            raise DimensionMismatch(f"declared K={doc['K']} but {ch.K} matrices given")
        validate_channel(ch)
        return ch


@dataclass(frozen=True)
class DegradednessWitness:
    D: np.ndarray  # Ne x N
    residual: float
    spectral_norm: float


def validate_channel(ch):
    """Raise unless the channel invariants hold."""
    if ch.K < 1:
        raise DimensionMismatch("need at least one user")
    if len(ch.H) != len(ch.He):
        raise DimensionMismatch(f"{len(ch.H)} legitimate vs {len(ch.He)} eavesdropper matrices")
    N, Ne = ch.N, ch.Ne
    for k, (h, he) in enumerate(zip(ch.H, ch.He)):
        if h.ndim != 2 or he.ndim != 2:
            raise DimensionMismatch(f"user {k}: matrices must be 2-D")
        if h.shape[0] != N:
            raise DimensionMismatch(f"user {k}: H has {h.shape[0]} rows, expected {N}")
        if he.shape[0] != Ne:
            raise DimensionMismatch(f"user {k}: He has {he.shape[0]} rows, expected {Ne}")
        if h.shape[1] != he.shape[1]:
            raise DimensionMismatch(f"user {k}: H has {h.shape[1]} columns but He has {he.shape[1]}")
        if not (np.all(np.isfinite(h)) and np.all(np.isfinite(he))):
            raise DimensionMismatch(f"user {k}: non-finite channel entries")
    if not (np.isfinite(ch.P) and ch.P > 0):
        raise NonPositivePower(f"P={ch.P} must be positive")


def degradedness_witness(ch, tol_eq=None, tol_psd=1e-9):
    """Find D with D @ H_cat == He_cat and sigma_max(D) <= 1, if one exists.

    Returns a DegradednessWitness, or None when the eavesdropper output is not
    a contraction of the legitimate output (a normal result, not an error).
    """
    validate_channel(ch)
    hc, hec = ch.h_cat(), ch.he_cat()
    if tol_eq is None:
        tol_eq = 1e-9 * (1.0 + np.max(np.abs(hec)))
    D = hec @ np.linalg.pinv(hc, rcond=RANK_RCOND)
    residual = float(np.max(np.abs(D @ hc - hec)))
    spectral_norm = float(np.linalg.norm(D, 2)) if D.size else 0.0
    if residual <= tol_eq and spectral_norm <= 1.0 + tol_psd:
        return DegradednessWitness(D=D, residual=residual, spectral_norm=spectral_norm)
    return None


def sample_outputs(ch, inputs, rng: RngHandle, noiseless=False):
    """One channel use: returns (y, z) for the given per-user input vectors."""
    if len(inputs) != ch.K:
        raise DimensionMismatch(f"got {len(inputs)} inputs for {ch.K} users")
    y = np.zeros(ch.N)
    z = np.zeros(ch.Ne)
    for k, x in enumerate(inputs):
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != ch.M[k]:
            raise DimensionMismatch(f"user {k}: input length {x.shape[0]}, expected {ch.M[k]}")
        y += ch.H[k] @ x
        z += ch.He[k] @ x
    if not noiseless:
        g = rng.generator()
        y = y + g.standard_normal(ch.N)
        z = z + g.standard_normal(ch.Ne)
    return y, z
