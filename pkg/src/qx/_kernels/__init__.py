"""Kernel loader: compiled extension if present, pure Python otherwise.

Set QX_PURE=1 to force the pure implementation (used by the benchmark
and by tests that want to compare the two).
"""

import os

if os.environ.get("QX_PURE") == "1":
    from . import _pure as impl
else:
    try:
        from . import _fast as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as impl

IMPL_NAME = "fast" if impl.__name__.endswith("_fast") else "pure"

poch_prod = impl.poch_prod
poch_inf = impl.poch_inf
eq_product = impl.eq_product
Eq_product = impl.Eq_product
theta_bilateral = impl.theta_bilateral
paired_ratio_product = impl.paired_ratio_product
