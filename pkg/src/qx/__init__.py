"""q-analysis toolkit.

Subpackages are imported lazily where heavy; the common entry points are
re-exported here.
"""

from .context import QContext, QTruncation
from . import errors

__version__ = "0.1.0"

__all__ = ["QContext", "QTruncation", "errors", "__version__"]
