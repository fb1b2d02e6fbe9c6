"""Kernel selection: compiled extension when built, pure Python otherwise.

Set BBLAB_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
tests that compare the two implementations).
"""

import os

if os.environ.get("BBLAB_PURE_PYTHON"):
    from ._kernel_py import (  # noqa: F401
        IMPLEMENTATION,
        first_violated_mask,
        pivot_update,
        violated_indices,
    )
else:
    try:
        from ._speedups import (  # noqa: F401
            IMPLEMENTATION,
            first_violated_mask,
            pivot_update,
            violated_indices,
        )
    except ImportError:
        from ._kernel_py import (  # noqa: F401
            IMPLEMENTATION,
            first_violated_mask,
            pivot_update,
            violated_indices,
        )
