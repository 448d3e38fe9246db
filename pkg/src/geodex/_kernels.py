"""Backend selection for the hot iteration kernel.

The compiled extension is preferred when present; GEODEX_BACKEND=py forces
the pure-Python twin.  Both backends produce identical tables; the compiled
one is only ever asked questions whose intermediate values fit in int64
(the caller checks bounds and otherwise stays on the exact path).
"""

from __future__ import annotations

import os

if os.environ.get("GEODEX_BACKEND", "").lower() in {"py", "python", "pure"}:
    from . import _iterkern_py as _impl
else:
    try:
        from . import _iterkern as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _iterkern_py as _impl  # type: ignore[no-redef]

rational_iteration_table = _impl.rational_iteration_table


def backend_id() -> str:
    return _impl.BACKEND


INT64_GUARD = 1 << 60


def table_fits_int64(mmax: int, k_lin: int, rot_nums, q_weight: int) -> bool:
    """Conservative bound check before dispatching to the compiled kernel."""
    biggest_num = max(rot_nums, default=1)
    per_m = abs(k_lin) + 2 * len(rot_nums) + abs(q_weight) + 8
    return mmax * biggest_num < INT64_GUARD and mmax * per_m < INT64_GUARD
