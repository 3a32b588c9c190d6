import os
from typing import Optional

from polyprod.polyprod_types import ConfigError


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}")
    if value < 0:
        raise ConfigError(f"{name} must be non-negative, got {value}")
    return value


class PolyprodSetup:
    def __init__(self, embed_cap: Optional[int] = None, canonical_max_n: int = 32,
                 family_max_param: int = 64, workers: int = 1, lenient: bool = False):
        # brute-force embedding regime; beyond it the subgraph search delegates to the oracle
        self.embed_cap = embed_cap if embed_cap is not None else _env_int("POLYPROD_EMBED_CAP", 10)
        self.canonical_max_n = canonical_max_n
        self.family_max_param = family_max_param
        self.workers = max(1, workers)
        self.lenient = lenient

    def __repr__(self) -> str:
        return (f"PolyprodSetup(embed_cap={self.embed_cap}, canonical_max_n={self.canonical_max_n}, "
                f"family_max_param={self.family_max_param}, workers={self.workers}, lenient={self.lenient})")


_POLYPROD_SETUP_: Optional[PolyprodSetup] = None


def default_setup() -> PolyprodSetup:
    """Module default, built on first use so a bad POLYPROD_EMBED_CAP surfaces at call time."""
    global _POLYPROD_SETUP_
    if _POLYPROD_SETUP_ is None:
        _POLYPROD_SETUP_ = PolyprodSetup()
    return _POLYPROD_SETUP_
