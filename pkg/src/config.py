"""
Runtime configuration read from the environment.

Environment variables:
    DIOPH_BRUTE_BOUND: Largest d**f the brute-force oracle will enumerate
    DIOPH_SEED: Seed for the randomised search fallback in the lift procedures
    DIOPH_SEARCH_ATTEMPTS: Number of randomised combinations tried per search
"""

import os
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from .exceptions import InvalidArgument

DEFAULT_BRUTE_FORCE_BOUND = 10**6
DEFAULT_SEED = 0
DEFAULT_SEARCH_ATTEMPTS = 256


@dataclass(frozen=True)
class Settings:
    """Tunable limits shared by the oracles and the lift procedures.

    Attributes:
        brute_force_bound: Maximum number of residue vectors to enumerate
        seed: Seed for reproducible randomised searches
        search_attempts: Randomised attempts before the deterministic CRT layer
    """
    brute_force_bound: int = DEFAULT_BRUTE_FORCE_BOUND
    seed: int = DEFAULT_SEED
    search_attempts: int = DEFAULT_SEARCH_ATTEMPTS

    def with_seed(self, seed: Optional[int]) -> "Settings":
        """Return a copy with the seed replaced, unless seed is None."""
        if seed is None:
            return self
        return replace(self, seed=seed)


def _read_int(environ: Mapping[str, str], name: str, default: int, minimum: int) -> int:
    raw = environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        raise InvalidArgument(f"{name} must be an integer, got {raw!r}") from None
    if value < minimum:
        raise InvalidArgument(f"{name} must be at least {minimum}, got {value}")
    return value


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """Build Settings from environment variables.

    Args:
        environ: Mapping to read from, defaults to os.environ

    Returns:
        Settings with every unset variable at its default

    Raises:
        InvalidArgument: If a variable is set but is not a valid integer
    """
    env = os.environ if environ is None else environ
    return Settings(
        brute_force_bound=_read_int(env, "DIOPH_BRUTE_BOUND", DEFAULT_BRUTE_FORCE_BOUND, 1),
        seed=_read_int(env, "DIOPH_SEED", DEFAULT_SEED, 0),
        search_attempts=_read_int(env, "DIOPH_SEARCH_ATTEMPTS", DEFAULT_SEARCH_ATTEMPTS, 0),
    )
