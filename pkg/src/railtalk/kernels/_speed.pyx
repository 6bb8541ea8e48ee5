# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: edit-distance alignment and lattice Viterbi.

Same contracts and float arithmetic as kernels.pure; keep the two in
lockstep (the backend-equivalence test compares them op for op).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

MATCH, SUB, DEL, INS, SPLIT = 0, 1, 2, 3, 4

cdef int _MATCH = 0, _SUB = 1, _DEL = 2, _INS = 3, _SPLIT = 4


def align_ops(ref, hyp, double split_cost=-1.0):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] r = np.ascontiguousarray(ref, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] h = np.ascontiguousarray(hyp, dtype=np.int64)
    cdef int n = r.shape[0], m = h.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] dp = np.zeros((n + 1, m + 1), dtype=np.float64)
    cdef int i, j
    cdef double best, cand, here
    cdef bint use_split = split_cost > 0
    for i in range(n + 1):
        dp[i, 0] = i
    for j in range(m + 1):
        dp[0, j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = dp[i - 1, j - 1] + (0.0 if r[i - 1] == h[j - 1] else 1.0)
            cand = dp[i - 1, j] + 1.0
            if cand < best:
                best = cand
            cand = dp[i, j - 1] + 1.0
            if cand < best:
                best = cand
            if use_split and j >= 2:
                cand = dp[i - 1, j - 2] + split_cost
                if cand < best:
                    best = cand
            dp[i, j] = best
    ops = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dp[i, j]
        if i > 0 and j > 0 and r[i - 1] == h[j - 1] and dp[i - 1, j - 1] == here:
            ops.append(_MATCH)
            i -= 1
            j -= 1
        elif use_split and i > 0 and j > 1 and dp[i - 1, j - 2] + split_cost == here:
            ops.append(_SPLIT)
            i -= 1
            j -= 2
        elif i > 0 and j > 0 and dp[i - 1, j - 1] + 1.0 == here:
            ops.append(_SUB)
            i -= 1
            j -= 1
        elif i > 0 and dp[i - 1, j] + 1.0 == here:
            ops.append(_DEL)
            i -= 1
        else:
            ops.append(_INS)
            j -= 1
    ops.reverse()
    return ops


cdef inline double _lm_logprob(long hist, long word,
                               cnp.int64_t[:] row_start, cnp.int64_t[:] follower,
                               cnp.float64_t[:] logp, cnp.float64_t[:] backoff,
                               cnp.float64_t[:] unigram) nogil:
    cdef long lo = row_start[hist]
    cdef long hi = row_start[hist + 1]
    cdef long mid
    while lo < hi:
        mid = (lo + hi) // 2
        if follower[mid] < word:
            lo = mid + 1
        else:
            hi = mid
    if lo < row_start[hist + 1] and follower[lo] == word:
        return logp[lo]
    return backoff[hist] + unigram[word]


def decode_lattice(int n_obs, cand_pos, cand_src, cand_lm, cand_span, cand_chan,
                   lm_row_start, lm_follower, lm_logp, lm_backoff, lm_unigram,
                   long bos, long eos, int beam_width):
    cdef cnp.int64_t[:] cpos = np.ascontiguousarray(cand_pos, dtype=np.int64)
    cdef cnp.int64_t[:] csrc = np.ascontiguousarray(cand_src, dtype=np.int64)
    cdef cnp.int64_t[:] clm = np.ascontiguousarray(cand_lm, dtype=np.int64)
    cdef cnp.int64_t[:] cspan = np.ascontiguousarray(cand_span, dtype=np.int64)
    cdef cnp.float64_t[:] cchan = np.ascontiguousarray(cand_chan, dtype=np.float64)
    cdef cnp.int64_t[:] row_start = np.ascontiguousarray(lm_row_start, dtype=np.int64)
    cdef cnp.int64_t[:] follower = np.ascontiguousarray(lm_follower, dtype=np.int64)
    cdef cnp.float64_t[:] logp = np.ascontiguousarray(lm_logp, dtype=np.float64)
    cdef cnp.float64_t[:] backoff = np.ascontiguousarray(lm_backoff, dtype=np.float64)
    cdef cnp.float64_t[:] unigram = np.ascontiguousarray(lm_unigram, dtype=np.float64)
    cdef int n_cand = cpos.shape[0]
    cdef int pos, k
    cdef long hist
    cdef double score, s

    levels = [dict() for _ in range(n_obs + 1)]
    levels[0][bos] = (0.0, ())
    by_pos = [[] for _ in range(n_obs)]
    for k in range(n_cand):
        by_pos[cpos[k]].append(k)

    for pos in range(n_obs):
        states = levels[pos]
        if not states:
            continue
        items = list(states.items())
        if beam_width > 0 and len(items) > beam_width:
            items.sort(key=_beam_key)
            items = items[:beam_width]
        for hist, (score, path) in items:
            for k in by_pos[pos]:
                s = score + cchan[k] + _lm_logprob(hist, clm[k], row_start,
                                                   follower, logp, backoff, unigram)
                newpath = path + (csrc[k],)
                target = levels[pos + cspan[k]]
                old = target.get(clm[k])
                if old is None or s > old[0] or (s == old[0]
                        and (len(newpath), newpath) < (len(old[1]), old[1])):
                    target[clm[k]] = (s, newpath)

    final = None
    for hist, (score, path) in levels[n_obs].items():
        s = score + _lm_logprob(hist, eos, row_start, follower, logp, backoff, unigram)
        if final is None or s > final[0] or (s == final[0]
                and (len(path), path) < (len(final[1]), final[1])):
            final = (s, path)
    if final is None:
        raise ValueError("lattice has no complete path")
    return list(final[1]), final[0]


def _beam_key(kv):
    return (-kv[1][0], len(kv[1][1]), kv[1][1])
