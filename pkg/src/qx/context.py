"""Evaluation context: the deformation parameter and truncation policy.

Every numeric routine in the package takes a QContext rather than a bare
q so that truncation depth and tolerance travel together with the
parameter.  q > 1 and q < 1 are both legal; individual operations check
ctx.regime and refuse combinations that cannot converge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError

# q this close to 1 makes every (q;q)_n denominator useless
_UNITY_GAP = 1e-9


@dataclass(frozen=True)
class QTruncation:
    """Stopping policy for truncated series and infinite products."""

    max_terms: int = 500
    tail_tol: float = 1e-14

    def __post_init__(self) -> None:
        if self.max_terms < 1:
            raise DomainError("max_terms must be positive")
        if not (0.0 < self.tail_tol < 1.0):
            raise DomainError("tail_tol must lie in (0, 1)")


@dataclass(frozen=True)
class QContext:
    """Deformation parameter plus truncation policy.

    regime is 'sub-unit' for 0 < q < 1 and 'super-unit' for q > 1.
    lam is the symmetric ladder constant q - 1/q.
    """

    q: float
    trunc: QTruncation = field(default_factory=QTruncation)

    def __post_init__(self) -> None:
        q = self.q
        if not isinstance(q, (int, float)):
            raise DomainError("q must be a real number")
        if not (q > 0.0):
            raise DomainError("q must be positive")
        if abs(q - 1.0) < _UNITY_GAP:
            raise DomainError("q too close to 1; the calculus degenerates")

    @property
    def lam(self) -> float:
        return self.q - 1.0 / self.q

    @property
    def regime(self) -> str:
        return "sub-unit" if self.q < 1.0 else "super-unit"

    @property
    def q2(self) -> float:
        return self.q * self.q

    def base(self, name: str) -> float:
        """Resolve a base keyword ('q' or 'q2') to its numeric value."""
        if name == "q":
            return self.q
        if name == "q2":
            return self.q2
        raise DomainError(f"unknown base {name!r}")

    def sub_unit(self) -> "QContext":
        """The context with q mapped into (0,1), same truncation."""
        if self.q < 1.0:
            return self
        return QContext(1.0 / self.q, self.trunc)
