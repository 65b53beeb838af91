"""
Contexte de session (d, t_order) partagé par toutes les valeurs du moteur.
"""

from dataclasses import dataclass
from functools import lru_cache

from app.core.errors import SessionMismatchError


@dataclass(frozen=True, slots=True)
class Session:
    """Paramètres figés d'une session de calcul."""

    d: int
    t_order: int = 2

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"d must be positive, got {self.d}")
        if self.t_order < 1:
            raise ValueError(f"t_order must be at least 1, got {self.t_order}")

    @property
    def m(self) -> int:
        """Ordre du corps cyclotomique Q(ζ_{2d})."""
        return 2 * self.d

    def with_t_order(self, t_order: int) -> "Session":
        return get_session(self.d, t_order)

    def check(self, other: "Session") -> None:
        """Refuse les opérations entre sessions différentes."""
        if other is not self and other != self:
            raise SessionMismatchError(f"session mismatch: {self} vs {other}")


@lru_cache(maxsize=None)
def get_session(d: int, t_order: int = 2) -> Session:
    """Session partagée (une instance par couple (d, t_order))."""
    return Session(d, t_order)
