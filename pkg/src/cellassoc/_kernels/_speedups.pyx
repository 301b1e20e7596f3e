# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mirrors of the pure kernels.

Same encoding and node-visit order as _pure.py, restricted to k <= 62 so
every mask fits a 64-bit word; the backend selector enforces the limit.
Disagreement counts match the pure backend exactly because the branch
and bound explores identical nodes in identical order.
"""

from libc.stdint cimport int64_t, uint64_t

BACKEND = "compiled"
MAX_K = 62

cdef enum:
    MAXN = 64
    MAXSEEDS = 32


cdef uint64_t _modpow(uint64_t base, uint64_t exp, uint64_t p):
    cdef uint64_t result = 1
    base %= p
    while exp:
        if exp & 1:
            result = result * base % p
        base = base * base % p
        exp >>= 1
    return result


cdef struct DlCtx:
    int k
    int ncand
    int nseeds
    int majority
    uint64_t p
    uint64_t cells[MAXN]
    uint64_t h0[MAXSEEDS][MAXN]
    uint64_t h1[MAXSEEDS][MAXN]
    int candidates[MAXN]
    uint64_t best_mask
    int best_size
    int64_t disagreements


cdef bint _dl_message_feasible(DlCtx* ctx, int s, uint64_t active, int m):
    cdef uint64_t cmask = ctx.cells[m - 1]
    if cmask == 0:
        return False

    cdef int cols[MAXN]
    cdef int ncols = 0
    cdef uint64_t scan = cmask
    cdef uint64_t low
    while scan:
        low = scan & (~scan + 1)
        cols[ncols] = _bit_index(low) + 1
        ncols += 1
        scan ^= low

    cdef uint64_t rows[MAXN][MAXN]
    cdef int nrows = 0
    cdef uint64_t rest = active & ~(<uint64_t> 1 << (m - 1))
    cdef uint64_t hear
    cdef int r, c, j
    while rest:
        low = rest & (~rest + 1)
        r = _bit_index(low) + 1
        rest ^= low
        hear = <uint64_t> 1 << (r - 1)
        if r >= 2:
            hear |= <uint64_t> 1 << (r - 2)
        if hear & cmask:
            for c in range(ncols):
                j = cols[c]
                if j == r:
                    rows[nrows][c] = ctx.h1[s][r - 1]
                elif j == r - 1:
                    rows[nrows][c] = ctx.h0[s][r - 1]
                else:
                    rows[nrows][c] = 0
            nrows += 1

    cdef int pivot_row[MAXN]
    cdef int pivot_col[MAXN]
    cdef int rank = 0
    cdef int piv, i, jj
    cdef uint64_t inv, f, tmp
    cdef uint64_t p = ctx.p
    for c in range(ncols):
        piv = -1
        for i in range(rank, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for jj in range(ncols):
                tmp = rows[rank][jj]
                rows[rank][jj] = rows[piv][jj]
                rows[piv][jj] = tmp
        inv = _modpow(rows[rank][c], p - 2, p)
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f:
                f = f * inv % p
                for jj in range(c, ncols):
                    rows[i][jj] = (rows[i][jj] + p - f * rows[rank][jj] % p) % p
        pivot_row[rank] = rank
        pivot_col[rank] = c
        rank += 1
        if rank == nrows:
            break

    cdef uint64_t d[MAXN]
    for c in range(ncols):
        j = cols[c]
        if j == m:
            d[c] = ctx.h1[s][m - 1]
        elif j == m - 1:
            d[c] = ctx.h0[s][m - 1]
        else:
            d[c] = 0
    cdef int t
    for t in range(rank):
        i = pivot_row[t]
        c = pivot_col[t]
        f = d[c]
        if f:
            f = f * _modpow(rows[i][c], p - 2, p) % p
            for jj in range(c, ncols):
                d[jj] = (d[jj] + p - f * rows[i][jj] % p) % p
    for c in range(ncols):
        if d[c]:
            return True
    return False


cdef inline int _bit_index(uint64_t low):
    cdef int idx = 0
    while low > 1:
        low >>= 1
        idx += 1
    return idx


cdef bint _dl_set_feasible_one(DlCtx* ctx, int s, uint64_t active):
    cdef uint64_t rest = active
    cdef uint64_t low
    cdef int m
    while rest:
        low = rest & (~rest + 1)
        m = _bit_index(low) + 1
        rest ^= low
        if not _dl_message_feasible(ctx, s, active, m):
            return False
    return True


cdef bint _dl_check(DlCtx* ctx, uint64_t mask):
    cdef int votes = 0
    cdef int s
    for s in range(ctx.nseeds):
        if _dl_set_feasible_one(ctx, s, mask):
            votes += 1
    if 0 < votes < ctx.nseeds:
        ctx.disagreements += 1
    return votes >= ctx.majority


cdef void _dl_rec(DlCtx* ctx, int idx, uint64_t mask, int size):
    if size > ctx.best_size:
        ctx.best_size = size
        ctx.best_mask = mask
    if idx == ctx.ncand or size + (ctx.ncand - idx) <= ctx.best_size:
        return
    cdef uint64_t bit = <uint64_t> 1 << (ctx.candidates[idx] - 1)
    cdef uint64_t with_bit = mask | bit
    if _dl_check(ctx, with_bit):
        _dl_rec(ctx, idx + 1, with_bit, size + 1)
    _dl_rec(ctx, idx + 1, mask, size)


cdef void _fill_dl_ctx(DlCtx* ctx, k, cells, h0s, h1s, p, candidates) except *:
    if k > MAX_K:
        raise ValueError(f"compiled backend supports k <= {MAX_K}")
    if len(h0s) > MAXSEEDS:
        raise ValueError(f"compiled backend supports at most {MAXSEEDS} seeds")
    ctx.k = k
    ctx.nseeds = len(h0s)
    ctx.majority = ctx.nseeds // 2 + 1
    ctx.p = p
    cdef int i, s
    for i in range(k):
        ctx.cells[i] = cells[i]
    for s in range(ctx.nseeds):
        for i in range(k):
            ctx.h0[s][i] = h0s[s][i]
            ctx.h1[s][i] = h1s[s][i]
    ctx.ncand = len(candidates)
    for i in range(ctx.ncand):
        ctx.candidates[i] = candidates[i]
    ctx.best_mask = 0
    ctx.best_size = 0
    ctx.disagreements = 0


def dl_set_feasible(k, cells, h0, h1, p, active_mask):
    """All-active zero-forcing feasibility under one channel realization."""
    cdef DlCtx ctx
    _fill_dl_ctx(&ctx, k, cells, [h0], [h1], p, [])
    return bool(_dl_set_feasible_one(&ctx, 0, <uint64_t> active_mask))


def dl_max_active(k, cells, h0s, h1s, p, candidates):
    """Largest zero-forcing-feasible active set, majority over seeds.

    Returns (best_mask, disagreements), matching the pure backend bit for
    bit and count for count.
    """
    cdef DlCtx ctx
    _fill_dl_ctx(&ctx, k, cells, h0s, h1s, p, candidates)
    _dl_rec(&ctx, 0, 0, 0)
    return int(ctx.best_mask), int(ctx.disagreements)


cdef struct UlCtx:
    int k
    int ncand
    uint64_t cells[MAXN]
    int candidates[MAXN]
    uint64_t best_mask
    int best_size


cdef bint _ul_feasible(UlCtx* ctx, uint64_t active):
    cdef uint64_t undecoded = active
    cdef bint progress = True
    cdef uint64_t scan, low, conn, decoders, dlow, mp_bit
    cdef int m, b, mp, t
    cdef bint ok, good
    while undecoded and progress:
        progress = False
        scan = undecoded
        while scan:
            low = scan & (~scan + 1)
            m = _bit_index(low) + 1
            scan ^= low
            conn = <uint64_t> 1 << (m - 1)
            if m >= 2:
                conn |= <uint64_t> 1 << (m - 2)
            decoders = ctx.cells[m - 1] & conn
            ok = False
            while decoders:
                dlow = decoders & (~decoders + 1)
                b = _bit_index(dlow) + 1
                decoders ^= dlow
                good = True
                for t in range(2):
                    mp = b + t
                    if mp == m or mp > ctx.k:
                        continue
                    mp_bit = <uint64_t> 1 << (mp - 1)
                    if not (active & mp_bit):
                        continue
                    if (undecoded & mp_bit) or not (ctx.cells[mp - 1] >> (b - 1)) & 1:
                        good = False
                        break
                if good:
                    ok = True
                    break
            if ok:
                undecoded ^= low
                progress = True
    return undecoded == 0


cdef void _ul_rec(UlCtx* ctx, int idx, uint64_t mask, int size):
    if size > ctx.best_size:
        ctx.best_size = size
        ctx.best_mask = mask
    if idx == ctx.ncand or size + (ctx.ncand - idx) <= ctx.best_size:
        return
    cdef uint64_t bit = <uint64_t> 1 << (ctx.candidates[idx] - 1)
    cdef uint64_t with_bit = mask | bit
    if _ul_feasible(ctx, with_bit):
        _ul_rec(ctx, idx + 1, with_bit, size + 1)
    _ul_rec(ctx, idx + 1, mask, size)


cdef void _fill_ul_ctx(UlCtx* ctx, k, cells, candidates) except *:
    if k > MAX_K:
        raise ValueError(f"compiled backend supports k <= {MAX_K}")
    ctx.k = k
    cdef int i
    for i in range(k):
        ctx.cells[i] = cells[i]
    ctx.ncand = len(candidates)
    for i in range(ctx.ncand):
        ctx.candidates[i] = candidates[i]
    ctx.best_mask = 0
    ctx.best_size = 0


def ul_set_feasible(k, cells, active_mask):
    """Decode-and-pass feasibility, identical closure as the pure kernel."""
    cdef UlCtx ctx
    _fill_ul_ctx(&ctx, k, cells, [])
    return bool(_ul_feasible(&ctx, <uint64_t> active_mask))


def ul_max_active(k, cells, candidates):
    """Largest decode-and-pass-feasible active set (lex-least maximizer)."""
    cdef UlCtx ctx
    _fill_ul_ctx(&ctx, k, cells, candidates)
    _ul_rec(&ctx, 0, 0, 0)
    return int(ctx.best_mask)
