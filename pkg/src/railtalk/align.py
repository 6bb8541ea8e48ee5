"""Edit alignment of reference/hypothesis token sequences and word error rate."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import kernels


class Op(enum.Enum):
    MATCH = "MATCH"
    SUB = "SUB"
    INS = "INS"
    DEL = "DEL"


_OP_BY_CODE = {
    kernels.MATCH: Op.MATCH,
    kernels.SUB: Op.SUB,
    kernels.DEL: Op.DEL,
    kernels.INS: Op.INS,
}


@dataclass(frozen=True)
class AlignedPair:
    """A ref/hyp pair plus a minimal edit script between them.

    Each op carries its operands: (op, ref_token | None, hyp_token | None).
    Replaying the script over ref reproduces hyp.
    """

    ref: tuple[str, ...]
    hyp: tuple[str, ...]
    ops: tuple[tuple[Op, str | None, str | None], ...]

    def errors(self) -> int:
        return sum(1 for op, _, _ in self.ops if op is not Op.MATCH)

    def counts(self) -> tuple[int, int, int]:
        """(substitutions, insertions, deletions)."""
        s = sum(1 for op, _, _ in self.ops if op is Op.SUB)
        i = sum(1 for op, _, _ in self.ops if op is Op.INS)
        d = sum(1 for op, _, _ in self.ops if op is Op.DEL)
        return s, i, d

    def replay(self) -> tuple[str, ...]:
        """Apply ops to ref; must equal hyp."""
        out: list[str] = []
        for op, _r, h in self.ops:
            if op in (Op.MATCH, Op.SUB, Op.INS):
                assert h is not None
                out.append(h)
        return tuple(out)


@dataclass(frozen=True)
class WerReport:
    substitutions: int
    insertions: int
    deletions: int
    ref_words: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def rate(self) -> float:
        return self.errors / self.ref_words


def _intern_ids(ref: list[str] | tuple[str, ...], hyp: list[str] | tuple[str, ...]):
    table: dict[str, int] = {}
    for t in ref:
        table.setdefault(t, len(table))
    for t in hyp:
        table.setdefault(t, len(table))
    return [table[t] for t in ref], [table[t] for t in hyp]


def align(ref: list[str] | tuple[str, ...], hyp: list[str] | tuple[str, ...]) -> AlignedPair:
    """Minimal-cost alignment, unit costs, MATCH > SUB > DEL > INS tie-break.

    The tie-break is applied during backtrace from the end of both
    sequences, so it resolves ties right-to-left.
    """
    rids, hids = _intern_ids(ref, hyp)
    codes = kernels.align_ops(rids, hids)
    ops: list[tuple[Op, str | None, str | None]] = []
    i = j = 0
    for code in codes:
        op = _OP_BY_CODE[code]
        if op is Op.MATCH or op is Op.SUB:
            ops.append((op, ref[i], hyp[j]))
            i += 1
            j += 1
        elif op is Op.DEL:
            ops.append((op, ref[i], None))
            i += 1
        else:
            ops.append((op, None, hyp[j]))
            j += 1
    return AlignedPair(tuple(ref), tuple(hyp), tuple(ops))


def wer(pairs: list[AlignedPair]) -> WerReport:
    """Pooled word error rate: (S+I+D) / total reference words."""
    if not pairs:
        raise ValueError("wer() needs at least one aligned pair")
    subs = ins = dels = ref_words = 0
    for p in pairs:
        s, i, d = p.counts()
        subs += s
        ins += i
        dels += d
        ref_words += len(p.ref)
    if ref_words == 0:
        raise ValueError("wer() undefined for zero reference words")
    return WerReport(subs, ins, dels, ref_words)
