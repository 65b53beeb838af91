"""
Exceptions du moteur de calcul.
Les échecs de vérification ne passent pas par ici : ils produisent des rapports.
"""


class EngineError(Exception):
    """Erreur de base du moteur."""


class SessionMismatchError(EngineError, ValueError):
    """Opération entre valeurs de sessions (d, t_order) différentes."""


class CyclotomicZeroDivisionError(EngineError, ZeroDivisionError):
    """Inversion de l'élément nul du corps cyclotomique."""


class NonExactDivisionError(EngineError, ArithmeticError):
    """Division polynomiale non exacte (signale une erreur de convention)."""


class ConventionError(EngineError, RuntimeError):
    """Un auto-test de démarrage a détecté une dérive de convention."""


class NotCentralError(EngineError, ValueError):
    """Élément non central transmis au crochet de Poisson de Z_c."""


class DeformationError(EngineError, RuntimeError):
    """Partie t⁰ non nulle d'un commutateur relevé."""


class DegreeError(EngineError, ValueError):
    """Entrée non homogène ou degré incompatible."""


class OutsideKernelError(EngineError, ValueError):
    """Élément hors du noyau de ε_{2,d}."""


class LinearizationError(EngineError, ArithmeticError):
    """Crochet sans classe linéaire dans m_0/m_0² ou décomposition Π + a²Φ en échec."""
