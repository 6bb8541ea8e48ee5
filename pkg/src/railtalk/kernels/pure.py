"""Pure-Python twins of the compiled kernels.

Same contracts and identical arithmetic as ``_speed``; used when the
extension is unavailable or when RAILTALK_PURE=1.
"""

from __future__ import annotations

from bisect import bisect_left

# Edit ops, shared encoding with the compiled kernel.
MATCH, SUB, DEL, INS, SPLIT = 0, 1, 2, 3, 4


def align_ops(ref: list[int], hyp: list[int], split_cost: float = -1.0) -> list[int]:
    """Minimal-cost edit script between two id sequences.

    Unit costs for SUB/INS/DEL. When split_cost > 0, a SPLIT op aligning
    one ref id against two consecutive hyp ids is also allowed at that
    cost. Ties are broken during backtrace preferring
    MATCH > SPLIT > SUB > DEL > INS.
    """
    n, m = len(ref), len(hyp)
    big = float(n + m + 10)
    dp = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = float(i)
    for j in range(m + 1):
        dp[0][j] = float(j)
    use_split = split_cost > 0
    for i in range(1, n + 1):
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, m + 1):
            best = prev[j - 1] + (0.0 if ref[i - 1] == hyp[j - 1] else 1.0)
            cand = prev[j] + 1.0  # DEL
            if cand < best:
                best = cand
            cand = row[j - 1] + 1.0  # INS
            if cand < best:
                best = cand
            if use_split and j >= 2:
                cand = prev[j - 2] + split_cost
                if cand < best:
                    best = cand
            row[j] = best
    ops: list[int] = []
    i, j = n, m
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dp[i - 1][j - 1] == here:
            ops.append(MATCH)
            i -= 1
            j -= 1
        elif use_split and i > 0 and j > 1 and dp[i - 1][j - 2] + split_cost == here:
            ops.append(SPLIT)
            i -= 1
            j -= 2
        elif i > 0 and j > 0 and dp[i - 1][j - 1] + 1.0 == here:
            ops.append(SUB)
            i -= 1
            j -= 1
        elif i > 0 and dp[i - 1][j] + 1.0 == here:
            ops.append(DEL)
            i -= 1
        else:
            ops.append(INS)
            j -= 1
    ops.reverse()
    return ops


def decode_lattice(
    n_obs: int,
    cand_pos: list[int],
    cand_src: list[int],
    cand_lm: list[int],
    cand_span: list[int],
    cand_chan: list[float],
    lm_row_start: list[int],
    lm_follower: list[int],
    lm_logp: list[float],
    lm_backoff: list[float],
    lm_unigram: list[float],
    bos: int,
    eos: int,
    beam_width: int,
) -> tuple[list[int], float]:
    """Viterbi beam search over a sub/fertility candidate lattice.

    Candidates are given flat: candidate k starts at observed position
    cand_pos[k], proposes local source id cand_src[k] (global LM id
    cand_lm[k]), consumes cand_span[k] observed tokens and contributes
    channel log-prob cand_chan[k]. The LM is encoded CSR-style over
    global ids. Returns (best local-id path, log score); ties prefer
    the shorter source sequence, then the lexicographically smaller
    local-id path (valid per-state because future transitions depend
    only on the LM history). beam_width <= 0 means unbounded (exact
    Viterbi).
    """

    def lm_logprob(hist: int, word: int) -> float:
        lo = lm_row_start[hist]
        hi = lm_row_start[hist + 1]
        k = bisect_left(lm_follower, word, lo, hi)
        if k < hi and lm_follower[k] == word:
            return lm_logp[k]
        return lm_backoff[hist] + lm_unigram[word]

    def better(s: float, path: tuple[int, ...],
               old: tuple[float, tuple[int, ...]] | None) -> bool:
        if old is None:
            return True
        if s != old[0]:
            return s > old[0]
        return (len(path), path) < (len(old[1]), old[1])

    # states per position: dict lm-history id -> (score, path of local ids)
    levels: list[dict[int, tuple[float, tuple[int, ...]]]] = [
        {bos: (0.0, ())} if p == 0 else {} for p in range(n_obs + 1)
    ]
    by_pos: list[list[int]] = [[] for _ in range(n_obs)]
    for k in range(len(cand_pos)):
        by_pos[cand_pos[k]].append(k)
    for pos in range(n_obs):
        states = levels[pos]
        if not states:
            continue
        items = list(states.items())
        if beam_width > 0 and len(items) > beam_width:
            items.sort(key=lambda kv: (-kv[1][0], len(kv[1][1]), kv[1][1]))
            items = items[:beam_width]
        for hist, (score, path) in items:
            for k in by_pos[pos]:
                nxt = pos + cand_span[k]
                s = score + cand_chan[k] + lm_logprob(hist, cand_lm[k])
                newpath = path + (cand_src[k],)
                if better(s, newpath, levels[nxt].get(cand_lm[k])):
                    levels[nxt][cand_lm[k]] = (s, newpath)
    final: tuple[float, tuple[int, ...]] | None = None
    for hist, (score, path) in levels[n_obs].items():
        s = score + lm_logprob(hist, eos)
        if final is None or better(s, path, final):
            final = (s, path)
    if final is None:
        raise ValueError("lattice has no complete path")
    return list(final[1]), final[0]
