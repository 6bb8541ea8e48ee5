"""Kernel backend selection.

The hot loops (edit-distance alignment, lattice Viterbi) have a
compiled Cython implementation and a pure-Python twin with identical
arithmetic. The compiled one is used when importable; set
RAILTALK_PURE=1 to force the fallback (the benchmark and the
backend-equivalence test rely on this switch).
"""

from __future__ import annotations

import os

from . import pure

MATCH, SUB, DEL, INS, SPLIT = pure.MATCH, pure.SUB, pure.DEL, pure.INS, pure.SPLIT

if os.environ.get("RAILTALK_PURE") == "1":
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _speed as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

align_ops = _impl.align_ops
decode_lattice = _impl.decode_lattice
PREFERS_NUMPY = BACKEND == "compiled"
