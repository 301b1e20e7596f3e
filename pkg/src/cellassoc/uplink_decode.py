"""Decode-and-pass oracle for the uplink.

An active set is feasible when the messages can be decoded one at a time:
message m decodes at one of its own connected, associated base stations b
provided every other active user heard at b was already decoded and passed
its message to b (b must lie in that user's association set).  Decoding is
monotone, so feasibility is a fixpoint computation; the canonical order
returned here schedules the smallest eligible (message, bs) pair first.

Associations to base stations a user cannot hear never help this session;
prune() removes them without changing any feasibility decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from . import _kernels
from ._encode import cells_masks
from .errors import InternalCheckError, ValidationError
from .model import CellAssociation, connected_bs, heard_mts

DEFAULT_EXACT_LIMIT = 20


@dataclass(frozen=True)
class DecodingOrder:
    """Sequence of (message, decoding bs) steps, one per active user."""

    steps: tuple[tuple[int, int], ...]

    def to_json(self) -> dict:
        return {"steps": [{"m": m, "bs": b} for m, b in self.steps]}

    @classmethod
    def from_json(cls, data: object) -> "DecodingOrder":
        if not isinstance(data, dict) or "steps" not in data:
            raise ValidationError("order JSON must be an object with steps")
        steps = []
        for step in data["steps"]:
            if not isinstance(step, dict) or {"m", "bs"} - set(step):
                raise ValidationError("order step must have m and bs")
            steps.append((int(step["m"]), int(step["bs"])))
        return cls(steps=tuple(steps))


@dataclass(frozen=True)
class UlEvaluation:
    """Result of an uplink maximization."""

    sum_dof: int
    active_users: frozenset[int]
    order: Optional[DecodingOrder]
    exact: bool

    def to_json(self) -> dict:
        return {
            "sum_dof": self.sum_dof,
            "active_users": sorted(self.active_users),
            "order": None if self.order is None else self.order.to_json(),
            "exact": self.exact,
        }


def prune(assoc: CellAssociation) -> CellAssociation:
    """Drop association entries to base stations the user cannot hear."""
    cells = tuple(
        cell & connected_bs(i, assoc.k)
        for i, cell in enumerate(assoc.cells, start=1)
    )
    return CellAssociation(k=assoc.k, nc=assoc.nc, cells=cells)


def _check_active(assoc: CellAssociation, active) -> frozenset[int]:
    active = frozenset(active)
    for m in active:
        if not isinstance(m, int) or not 1 <= m <= assoc.k:
            raise ValidationError(f"active user {m!r} out of range [1..{assoc.k}]")
    return active


def _step_allowed(assoc, active, decoded, m, b):
    if b not in assoc.cells[m - 1] or b not in connected_bs(m, assoc.k):
        return False
    for mp in heard_mts(b, assoc.k):
        if mp == m or mp not in active:
            continue
        if mp not in decoded or b not in assoc.cells[mp - 1]:
            return False
    return True


def uplink_feasible(assoc, active) -> Optional[DecodingOrder]:
    """Canonical decoding order for the active set, or None if infeasible.

    At every step the smallest eligible (message, bs) pair is scheduled, so
    the order is deterministic and independent of internal data layout.
    """
    active = _check_active(assoc, active)
    decoded: set[int] = set()
    steps = []
    while len(decoded) < len(active):
        chosen = None
        for m in sorted(active - decoded):
            for b in sorted(assoc.cells[m - 1] & connected_bs(m, assoc.k)):
                if _step_allowed(assoc, active, decoded, m, b):
                    chosen = (m, b)
                    break
            if chosen:
                break
        if chosen is None:
            return None
        decoded.add(chosen[0])
        steps.append(chosen)
    return DecodingOrder(steps=tuple(steps))


def verify_order(order: DecodingOrder, assoc, active) -> bool:
    """Independent re-check of a decoding order against the model rules."""
    active = frozenset(active)
    decoded: set[int] = set()
    for m, b in order.steps:
        if m not in active or m in decoded:
            return False
        if not 1 <= b <= assoc.k:
            return False
        if not _step_allowed(assoc, active, decoded, m, b):
            return False
        decoded.add(m)
    return decoded == active


def max_uplink_dof(
    assoc: CellAssociation,
    exact_limit: int = DEFAULT_EXACT_LIMIT,
) -> UlEvaluation:
    """Maximum simultaneously decodable active-user count for the uplink.

    Exact branch and bound up to exact_limit users (lexicographically
    smallest maximizer); larger instances use a greedy ascending pass and
    are flagged exact=False.
    """
    cells = cells_masks(assoc)
    candidates = []
    for i in range(1, assoc.k + 1):
        conn = 1 << (i - 1)
        if i >= 2:
            conn |= 1 << (i - 2)
        if cells[i - 1] & conn:
            candidates.append(i)

    if assoc.k <= exact_limit:
        best_mask = _kernels.ul_max_active(assoc.k, cells, candidates)
        exact = True
    else:
        best_mask = 0
        for u in candidates:
            trial = best_mask | (1 << (u - 1))
            if _kernels.ul_set_feasible(assoc.k, cells, trial):
                best_mask = trial
        exact = False

    active = frozenset(
        i for i in range(1, assoc.k + 1) if (best_mask >> (i - 1)) & 1
    )
    order = uplink_feasible(assoc, active)
    if active and order is None:
        raise InternalCheckError("kernel accepted an uplink set with no decoding order")
    if order is None:
        order = DecodingOrder(steps=())
    if not verify_order(order, assoc, active):
        raise InternalCheckError("uplink order failed independent re-verification")

    return UlEvaluation(
        sum_dof=len(active),
        active_users=active,
        order=order,
        exact=exact,
    )
