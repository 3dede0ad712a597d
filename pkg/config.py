import os
from dataclasses import dataclass

@dataclass
class Config:
    # Enumeration guards
    ENUMERATION_CAPACITY: int = int(os.getenv("QOC_ENUMERATION_CAPACITY", "100000000"))
    FREENESS_CAPACITY: int = int(os.getenv("QOC_FREENESS_CAPACITY", "1000000"))
    ORACLE_CAPACITY: int = int(os.getenv("QOC_ORACLE_CAPACITY", "100000"))

    # Linear algebra
    LINALG_CAPACITY: int = int(os.getenv("QOC_LINALG_CAPACITY", "4096"))
    PROBABILITY_TOLERANCE: float = float(os.getenv("QOC_PROBABILITY_TOLERANCE", "1e-9"))
    MATRIX_TOLERANCE: float = float(os.getenv("QOC_MATRIX_TOLERANCE", "1e-8"))
    EIGENVALUE_FLOOR: float = float(os.getenv("QOC_EIGENVALUE_FLOOR", "-1e-9"))
    RANK_TOLERANCE: float = float(os.getenv("QOC_RANK_TOLERANCE", "1e-8"))
    UNITARY_TOLERANCE: float = float(os.getenv("QOC_UNITARY_TOLERANCE", "1e-9"))
    NORM_TOLERANCE: float = float(os.getenv("QOC_NORM_TOLERANCE", "1e-12"))

    # Runs
    WORKERS: int = int(os.getenv("QOC_WORKERS", "1"))
    DEFAULT_SEED: int = int(os.getenv("QOC_SEED", "0"))
    DEFAULT_TRIALS: int = int(os.getenv("QOC_TRIALS", "100"))
    SHIFT_TRIALS: int = int(os.getenv("QOC_SHIFT_TRIALS", "20"))

    # Output
    LOG_LEVEL: str = os.getenv("QOC_LOG_LEVEL", "WARNING")
    DECIMAL_DIGITS: int = 12

config = Config()
