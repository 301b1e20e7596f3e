"""Pure-Python feasibility kernels over bitmask-encoded instances.

Shared encoding (identical in the compiled backend):

  * user/bs index i is bit (i-1) of a mask;
  * cells[i-1] is the association set of user i as a bs mask;
  * h0[i-1] = coefficient from bs i-1 to user i (0 when i = 1);
  * h1[i-1] = coefficient from bs i to user i.

The subset searches are include-first depth-first branch and bound over
candidate users in ascending order, updating the incumbent only on strict
improvement.  With downward-closed feasibility this returns the
lexicographically smallest maximum-size set, and both backends visit
nodes in the same order so disagreement counts match exactly.
"""

from __future__ import annotations

BACKEND = "pure"


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length())
        mask ^= low
    return out


def _dl_message_feasible(k, cells, h0, h1, p, active_mask, m):
    """Zero-forcing feasibility of message m against the active set.

    Builds the interference rows (channels from C_m to every other active
    user that hears any of C_m), eliminates, then checks that the desired
    row is outside their span.
    """
    cmask = cells[m - 1]
    if not cmask:
        return False
    cols = _bits(cmask)
    ncols = len(cols)

    rows = []
    rest = active_mask & ~(1 << (m - 1))
    while rest:
        low = rest & -rest
        r = low.bit_length()
        rest ^= low
        hear = 1 << (r - 1)
        if r >= 2:
            hear |= 1 << (r - 2)
        if hear & cmask:
            row = []
            for j in cols:
                if j == r:
                    row.append(h1[r - 1])
                elif j == r - 1:
                    row.append(h0[r - 1])
                else:
                    row.append(0)
            rows.append(row)

    # Eliminate interference rows to row-echelon form.
    pivots = []  # (row, col) pairs
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
        prow = rows[rank]
        for i in range(rank + 1, len(rows)):
            f = rows[i][c]
            if f:
                f = f * inv % p
                ri = rows[i]
                for jj in range(c, ncols):
                    ri[jj] = (ri[jj] - f * prow[jj]) % p
        pivots.append((rank, c))
        rank += 1
        if rank == len(rows):
            break

    # Reduce the desired row against the pivots; a nonzero residue means
    # some nullspace direction keeps the desired gain alive.
    d = []
    for j in cols:
        if j == m:
            d.append(h1[m - 1])
        elif j == m - 1:
            d.append(h0[m - 1])
        else:
            d.append(0)
    for r_i, c in pivots:
        f = d[c]
        if f:
            prow = rows[r_i]
            f = f * pow(prow[c], p - 2, p) % p
            for jj in range(c, ncols):
                d[jj] = (d[jj] - f * prow[jj]) % p
    return any(d)


def dl_set_feasible(k, cells, h0, h1, p, active_mask):
    """All-active zero-forcing feasibility under one channel realization."""
    rest = active_mask
    while rest:
        low = rest & -rest
        m = low.bit_length()
        rest ^= low
        if not _dl_message_feasible(k, cells, h0, h1, p, active_mask, m):
            return False
    return True


def dl_max_active(k, cells, h0s, h1s, p, candidates):
    """Largest zero-forcing-feasible active set, majority over seeds.

    Returns (best_mask, disagreements) where disagreements counts queried
    sets on which the seeds split.
    """
    nseeds = len(h0s)
    majority = nseeds // 2 + 1
    disagreements = 0

    def check(mask):
        nonlocal disagreements
        votes = 0
        for h0, h1 in zip(h0s, h1s):
            if dl_set_feasible(k, cells, h0, h1, p, mask):
                votes += 1
        if 0 < votes < nseeds:
            disagreements += 1
        return votes >= majority

    best_mask = 0
    best_size = 0
    n = len(candidates)

    def rec(idx, mask, size):
        nonlocal best_mask, best_size
        if size > best_size:
            best_size = size
            best_mask = mask
        if idx == n or size + (n - idx) <= best_size:
            return
        bit = 1 << (candidates[idx] - 1)
        with_bit = mask | bit
        if check(with_bit):
            rec(idx + 1, with_bit, size + 1)
        rec(idx + 1, mask, size)

    rec(0, 0, 0)
    return best_mask, disagreements


def ul_set_feasible(k, cells, active_mask):
    """Decode-and-pass feasibility: monotone closure over decodable messages.

    Message m decodes at bs b when b is one of m's own connected, associated
    base stations and every other active user heard at b is already decoded
    with b in its association set (so the decoded message reached b).
    """
    undecoded = active_mask
    progress = True
    while undecoded and progress:
        progress = False
        scan = undecoded
        while scan:
            low = scan & -scan
            m = low.bit_length()
            scan ^= low
            conn = 1 << (m - 1)
            if m >= 2:
                conn |= 1 << (m - 2)
            decoders = cells[m - 1] & conn
            ok = False
            while decoders:
                dlow = decoders & -decoders
                b = dlow.bit_length()
                decoders ^= dlow
                good = True
                for mp in (b, b + 1):
                    if mp == m or mp > k:
                        continue
                    mp_bit = 1 << (mp - 1)
                    if not (active_mask & mp_bit):
                        continue
                    if (undecoded & mp_bit) or not (cells[mp - 1] >> (b - 1)) & 1:
                        good = False
                        break
                if good:
                    ok = True
                    break
            if ok:
                undecoded ^= low
                progress = True
    return undecoded == 0


def ul_max_active(k, cells, candidates):
    """Largest decode-and-pass-feasible active set (lex-least maximizer)."""
    best_mask = 0
    best_size = 0
    n = len(candidates)

    def rec(idx, mask, size):
        nonlocal best_mask, best_size
        if size > best_size:
            best_size = size
            best_mask = mask
        if idx == n or size + (n - idx) <= best_size:
            return
        bit = 1 << (candidates[idx] - 1)
        with_bit = mask | bit
        if ul_set_feasible(k, cells, with_bit):
            rec(idx + 1, with_bit, size + 1)
        rec(idx + 1, mask, size)

    rec(0, 0, 0)
    return best_mask
