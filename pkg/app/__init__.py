"""
CM Dihedral - Banc de vérification exact pour H_c(W) et Z_c.
"""

from app.config import settings

__version__ = settings.APP_VERSION
