"""Precoder design that separates streams at the intended receiver while
aligning them into a low-dimensional subspace at the eavesdropper.

Stream assignment is greedy: users with a nontrivial eavesdropper nullspace
first send along it (invisible to the eavesdropper), then remaining capacity
is spent on directions that collapse onto the standard basis vectors of the
eavesdropper's signal space, one basis direction at a time. The secure
degrees of freedom follow as [min(sum M_k, N) - r]+ where r is the rank the
eavesdropper actually sees.
"""
from dataclasses import dataclass

import numpy as np

from .channel import validate_channel
from .errors import AlignmentInfeasible

RANK_TOL = 1e-9
ALIGN_TOL = 1e-8


@dataclass(frozen=True)
class PrecoderPlan:
    F: tuple  # per-user M_k x s_k matrices, unit-norm columns
    r: int  # rank of the stacked eavesdropper stream matrix
    eta: int  # achieved secure degrees of freedom
    legit_rank: int
    complete: bool  # all min(sum M_k, N) streams assigned


def _rank(mat):
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > RANK_TOL * s[0]))


def _nullspace_column(mat):
    """Unit vector in null(mat), or None."""
    u, s, vt = np.linalg.svd(mat)
    smax = s[0] if s.size else 0.0
    ncols = mat.shape[1]
    rank = int(np.sum(s > RANK_TOL * smax)) if smax > 0 else 0
    if rank >= ncols:
        return None
    return vt[rank]


def sdof_upper_bound(ch):
    """Cooperative (wiretap) upper bound on the total S-DoF."""
    return min(sum(ch.M), ch.N)


def achieved_sdof(plan, ch):
    eta = max(min(sum(ch.M), ch.N) - plan.r, 0)
    assert eta == plan.eta, "plan eta is inconsistent with the rank formula"
    return eta


def design_aligned_precoders(ch):
    """Greedy nullspace-then-alignment stream assignment.

    Raises AlignmentInfeasible (carrying the partial plan) when streams remain
    unassigned but no user can realize the current alignment direction.
    """
    validate_channel(ch)
    target = min(sum(ch.M), ch.N)
    cols = [[] for _ in range(ch.K)]
    total = 0

    for k in range(ch.K):
        if total >= target:
            break
        f = _nullspace_column(ch.He[k])
        if f is not None:
            cols[k].append(f)
            total += 1

    # Align remaining capacity onto psi_i, one eavesdropper basis direction
    # at a time; every able user piles onto the same direction.
    for i in range(ch.Ne):
        if total >= target:
            break
        psi = np.zeros(ch.Ne)
        psi[i] = 1.0
        progressed = False
        for k in range(ch.K):
            if total >= target:
                break
            if len(cols[k]) >= ch.M[k]:
                continue
            f, _, _, _ = np.linalg.lstsq(ch.He[k], psi, rcond=RANK_TOL)
            norm = np.linalg.norm(f)
            if norm <= ALIGN_TOL or np.linalg.norm(ch.He[k] @ f) <= ALIGN_TOL:
                continue  # psi is orthogonal to this user's reachable space
            cols[k].append(f / norm)
            total += 1
            progressed = True
        if not progressed and total < target:
            break

    F = tuple(np.column_stack(c) if c else np.zeros((ch.M[k], 0))
              for k, c in enumerate(cols))
    eve = [ch.He[k] @ F[k] for k in range(ch.K) if F[k].shape[1]]
    legit = [ch.H[k] @ F[k] for k in range(ch.K) if F[k].shape[1]]
    r = _rank(np.hstack(eve)) if eve else 0
    legit_rank = _rank(np.hstack(legit)) if legit else 0
    plan = PrecoderPlan(F=F, r=r, eta=max(target - r, 0),
                        legit_rank=legit_rank, complete=total >= target)
    if not plan.complete:
        raise AlignmentInfeasible(
            f"only {total} of {target} streams assignable", plan=plan)
    return plan
