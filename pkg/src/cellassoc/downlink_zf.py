"""One-shot zero-forcing oracle for the downlink.

A set of active users is feasible when every active message admits a
precoder over its own association set that is heard at full gain by its
user and contributes zero interference at every other active user.  The
messages decouple, so feasibility is a per-message rank condition, checked
exactly over a prime field.  Witness precoders are nullspace vectors and
re-verify by direct evaluation, independent of the solver path.

Rank decisions on a random realization can in principle be degenerate, so
search entry points evaluate several seeds and take a majority, warning
via GenericityWarning when the seeds split.  In this topology the split
is actually unreachable for honestly drawn channels: each user hears only
base stations i-1 and i, so the support graph of any interference
subsystem is a path forest, every square minor expands to a single
monomial of nonzero draws, and every rank decision is value-independent.
The vote stays in place as a cheap guard on that reasoning.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from . import _kernels
from ._encode import cells_masks, channel_arrays, set_to_mask
from .errors import EmptyCellError, GenericityWarning, InternalCheckError, ValidationError
from .model import (
    DEFAULT_PRIME,
    DEFAULT_SEEDS,
    CellAssociation,
    ChannelRealization,
    draw_channels,
)

DEFAULT_EXACT_LIMIT = 16


@dataclass(frozen=True)
class ZfWitness:
    """Explicit precoders certifying one feasible active set.

    precoders[m][j] is the coefficient message m places on base station j;
    every j in the user's association set appears, possibly with value 0.
    """

    seed: int
    prime: int
    precoders: dict[int, dict[int, int]]

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "prime": self.prime,
            "precoders": {
                str(m): {str(j): v for j, v in sorted(vec.items())}
                for m, vec in sorted(self.precoders.items())
            },
        }

    @classmethod
    def from_json(cls, data: object) -> "ZfWitness":
        if not isinstance(data, dict) or {"seed", "prime", "precoders"} - set(data):
            raise ValidationError("witness JSON must have seed, prime, precoders")
        precoders = {}
        for m, vec in data["precoders"].items():
            precoders[int(m)] = {int(j): int(v) for j, v in vec.items()}
        return cls(seed=int(data["seed"]), prime=int(data["prime"]), precoders=precoders)


@dataclass(frozen=True)
class DlEvaluation:
    """Result of a downlink maximization."""

    sum_dof: int
    active_users: frozenset[int]
    witness: Optional[ZfWitness]
    seeds: tuple[int, ...]
    exact: bool
    disagreements: int

    def to_json(self) -> dict:
        return {
            "sum_dof": self.sum_dof,
            "active_users": sorted(self.active_users),
            "witness": None if self.witness is None else self.witness.to_json(),
            "seeds": list(self.seeds),
            "exact": self.exact,
            "disagreements": self.disagreements,
        }


def strip_silent(assoc: CellAssociation, silent_bs) -> CellAssociation:
    """Remove silenced base stations from every association set."""
    silent = frozenset(silent_bs)
    return CellAssociation(
        k=assoc.k,
        nc=assoc.nc,
        cells=tuple(cell - silent for cell in assoc.cells),
    )


def _check_active(assoc: CellAssociation, active) -> frozenset[int]:
    active = frozenset(active)
    for m in active:
        if not isinstance(m, int) or not 1 <= m <= assoc.k:
            raise ValidationError(f"active user {m!r} out of range [1..{assoc.k}]")
        if not assoc.cells[m - 1]:
            raise EmptyCellError(f"active user {m} has an empty association set")
    return active


def _gain(ch: ChannelRealization, i: int, j: int) -> int:
    if j == i or j == i - 1:
        return ch.coeffs.get((i, j), 0)
    return 0


def _message_witness(assoc, active, ch, m):
    """Nullspace precoder for message m, or None when forced to zero gain."""
    p = ch.prime
    cols = sorted(j for j in assoc.cells[m - 1] if 1 <= j <= assoc.k)
    if not cols:
        return None
    ncols = len(cols)

    rows = []
    for r in sorted(active):
        if r == m:
            continue
        if any(j in (r - 1, r) for j in cols):
            rows.append([_gain(ch, r, j) for j in cols])

    # Reduced row echelon form, tracking pivot columns.
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = -1
        for i in range(rank, len(rows)):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        prow = rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        pivots.append((rank, c))
        rank += 1
        if rank == len(rows):
            break

    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    desired = [_gain(ch, m, j) for j in cols]

    for f in free_cols:
        vec = [0] * ncols
        vec[f] = 1
        for r_i, c in pivots:
            vec[c] = (-rows[r_i][f]) % p
        if sum(d * v for d, v in zip(desired, vec)) % p != 0:
            return {j: vec[idx] for idx, j in enumerate(cols)}
    return None


def zf_feasible(assoc, active, ch) -> Optional[ZfWitness]:
    """Witness for the active set under one realization, or None.

    Every active user must have a nonempty association set; an empty one
    raises EmptyCellError since such a user can never be served.
    """
    active = _check_active(assoc, active)
    if ch.k != assoc.k:
        raise ValidationError(f"realization has k={ch.k}, association has k={assoc.k}")
    precoders = {}
    for m in sorted(active):
        vec = _message_witness(assoc, active, ch, m)
        if vec is None:
            return None
        precoders[m] = vec
    return ZfWitness(seed=ch.seed, prime=ch.prime, precoders=precoders)


def verify_witness(witness: ZfWitness, assoc, active, ch) -> bool:
    """Re-check a witness by direct evaluation of all gains and interference."""
    active = frozenset(active)
    if ch.prime != witness.prime:
        return False
    if set(witness.precoders) != set(active):
        return False
    p = ch.prime
    for m, vec in witness.precoders.items():
        if not set(vec) <= set(assoc.cells[m - 1]):
            return False
        gain = sum(_gain(ch, m, j) * v for j, v in vec.items()) % p
        if gain == 0:
            return False
        for r in active:
            if r == m:
                continue
            leak = sum(_gain(ch, r, j) * v for j, v in vec.items()) % p
            if leak != 0:
                return False
    return True


def _warn_disagreements(count: int, seeds, context: str) -> None:
    if count:
        warnings.warn(
            f"channel seeds {tuple(seeds)} disagreed on {count} feasibility "
            f"decision(s) during {context}; majority vote was used",
            GenericityWarning,
            stacklevel=3,
        )


def zf_feasible_majority(assoc, active, *, seeds=DEFAULT_SEEDS, prime=DEFAULT_PRIME):
    """Majority-vote feasibility over independent seeds.

    Returns (feasible, witness_or_None).  The witness comes from the first
    seed that agrees with the majority.
    """
    active = _check_active(assoc, active)
    realizations = [draw_channels(assoc.k, s, prime) for s in seeds]
    witnesses = [zf_feasible(assoc, active, ch) for ch in realizations]
    votes = sum(1 for w in witnesses if w is not None)
    if 0 < votes < len(seeds):
        _warn_disagreements(1, seeds, "plan certification")
    feasible = votes >= len(seeds) // 2 + 1
    witness = next((w for w in witnesses if w is not None), None) if feasible else None
    return feasible, witness


def _kernel_inputs(assoc, seeds, prime):
    cells = cells_masks(assoc)
    h0s, h1s = [], []
    for s in seeds:
        h0, h1 = channel_arrays(draw_channels(assoc.k, s, prime))
        h0s.append(h0)
        h1s.append(h1)
    return cells, h0s, h1s


def max_downlink_dof(
    assoc: CellAssociation,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
    *,
    seeds: Sequence[int] = DEFAULT_SEEDS,
    prime: int = DEFAULT_PRIME,
) -> DlEvaluation:
    """Maximum simultaneously feasible active-user count for the downlink.

    Exact branch and bound up to exact_limit users, returning the
    lexicographically smallest maximizer; larger instances fall back to a
    greedy ascending pass and are flagged exact=False.
    """
    if not seeds:
        raise ValidationError("at least one channel seed is required")
    cells, h0s, h1s = _kernel_inputs(assoc, seeds, prime)
    candidates = [i for i in range(1, assoc.k + 1) if cells[i - 1]]

    if assoc.k <= exact_limit:
        best_mask, disagreements = _kernels.dl_max_active(
            assoc.k, cells, h0s, h1s, prime, candidates
        )
        exact = True
    else:
        best_mask = 0
        disagreements = 0
        nseeds = len(seeds)
        for u in candidates:
            trial = best_mask | (1 << (u - 1))
            votes = sum(
                1
                for h0, h1 in zip(h0s, h1s)
                if _kernels.dl_set_feasible(assoc.k, cells, h0, h1, prime, trial)
            )
            if 0 < votes < nseeds:
                disagreements += 1
            if votes >= nseeds // 2 + 1:
                best_mask = trial
        exact = False

    _warn_disagreements(disagreements, seeds, "downlink maximization")
    active = frozenset(
        i for i in range(1, assoc.k + 1) if (best_mask >> (i - 1)) & 1
    )

    witness = None
    for s in seeds:
        witness = zf_feasible(assoc, active, draw_channels(assoc.k, s, prime))
        if witness is not None:
            break
    if active and witness is None:
        raise InternalCheckError(
            "majority vote accepted an active set but no seed yields a witness"
        )
    if witness is None:
        witness = ZfWitness(seed=seeds[0], prime=prime, precoders={})
    if not verify_witness(witness, assoc, active, draw_channels(assoc.k, witness.seed, prime)):
        raise InternalCheckError("downlink witness failed independent re-verification")

    return DlEvaluation(
        sum_dof=len(active),
        active_users=active,
        witness=witness,
        seeds=tuple(seeds),
        exact=exact,
        disagreements=disagreements,
    )
