"""
Configuration centralisée du banc de vérification.
Utilise pydantic-settings pour charger les variables d'environnement.
"""

from functools import lru_cache
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuration de l'application."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    # ─────────────────────────────────────────────────────────────────────────
    # Application
    # ─────────────────────────────────────────────────────────────────────────
    APP_NAME: str = "CM Dihedral"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: Literal["development", "testing", "production"] = "development"

    # ─────────────────────────────────────────────────────────────────────────
    # Moteur
    # ─────────────────────────────────────────────────────────────────────────
    # Plafond dur sur d ; un avertissement est émis au-delà de WARN_D
    MAX_D: int = Field(default=8, ge=2)
    WARN_D: int = Field(default=6, ge=2)
    DEFAULT_T_ORDER: int = Field(default=2, ge=1)
    DEFAULT_JOBS: int = Field(default=1, ge=1)
    DEFAULT_A_VALUE: str = "1"
    SELF_TEST_ON_STARTUP: bool = True

    # ─────────────────────────────────────────────────────────────────────────
    # Rapports
    # ─────────────────────────────────────────────────────────────────────────
    WITNESS_MAX_TERMS: int = Field(default=50, ge=1)
    REPORT_SCHEMA: str = "cm-report/1"
    REPORT_INCLUDE_TIMINGS: bool = False

    # ─────────────────────────────────────────────────────────────────────────
    # Échantillonnage
    # ─────────────────────────────────────────────────────────────────────────
    QUADRIC_SAMPLES: int = Field(default=20, ge=1)
    RANDOM_SEED: int = 0

    # ─────────────────────────────────────────────────────────────────────────
    # Logging
    # ─────────────────────────────────────────────────────────────────────────
    LOG_LEVEL: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    LOG_FORMAT: str = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"


@lru_cache
def get_settings() -> Settings:
    """
    Récupère les settings (singleton caché).

    Returns:
        Settings: Instance des paramètres de configuration.
    """
    return Settings()


# Raccourci pour import facile
settings = get_settings()
