"""Configuration settings for the Nilmetric Workbench"""

from pathlib import Path
import os
from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).parent.parent
env_path = PROJECT_ROOT / '.env'
load_dotenv(env_path, override=False)


def _resolve(path: str) -> Path:
    p = Path(path)
    return p if p.is_absolute() else PROJECT_ROOT / p


class Config:
    """Application configuration"""

    # Data directories
    DATA_DIR = PROJECT_ROOT / "data"
    CATALOG_DIR = _resolve(os.getenv("LIE_CATALOG_DIR", "data/catalog"))
    PROOF_DIR = _resolve(os.getenv("LIE_PROOF_DIR", "data/proofs"))
    CATALOG_INDEX = "index.json"

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

    # Property suites
    FINGERPRINT_BASIS_CHANGES = int(os.getenv("FINGERPRINT_BASIS_CHANGES", "50"))
    RANDOM_SEED = int(os.getenv("RANDOM_SEED", "20240"))

    # Report range for the g_k family
    FAMILY_MIN_K = 12
    FAMILY_MAX_K = int(os.getenv("FAMILY_MAX_K", "24"))

    # Free nilpotent instances covered by the report
    FREE_INSTANCES = [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)]

    # App settings
    APP_NAME = os.getenv("APP_NAME", "Nilmetric Workbench")
    APP_VERSION = os.getenv("APP_VERSION", "1.0.0")

    # Call-time accessors re-read the environment so overrides apply after import

    @classmethod
    def catalog_dir(cls) -> Path:
        value = os.getenv("LIE_CATALOG_DIR")
        return _resolve(value) if value else cls.CATALOG_DIR

    @classmethod
    def proof_dir(cls) -> Path:
        value = os.getenv("LIE_PROOF_DIR")
        return _resolve(value) if value else cls.PROOF_DIR

    @classmethod
    def log_level(cls) -> str:
        return os.getenv("LOG_LEVEL", cls.LOG_LEVEL).upper()

    @classmethod
    def family_max_k(cls) -> int:
        return int(os.getenv("FAMILY_MAX_K", str(cls.FAMILY_MAX_K)))
