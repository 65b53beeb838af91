"""
CM Dihedral - Services de vérification.
"""

from app.services.cuspidal import CuspidalAnalyzer, cuspidal_analyzer
from app.services.sl2 import Sl2Layer, sl2_layer
from app.services.tau import TauAnalyzer, tau_analyzer
from app.services.verifier import CheckReport, CheckStatus, PresentationVerifier, verifier

__all__ = [
    "CheckReport",
    "CheckStatus",
    "PresentationVerifier",
    "verifier",
    "CuspidalAnalyzer",
    "cuspidal_analyzer",
    "Sl2Layer",
    "sl2_layer",
    "TauAnalyzer",
    "tau_analyzer",
]
