"""Reference models. Importing this package registers all three."""

from . import institutions, life, pastoral  # noqa: F401
from .institutions import MODEL as INSTITUTIONS
from .life import MODEL as GAME_OF_LIFE
from .pastoral import MODEL as PASTORAL

__all__ = ["GAME_OF_LIFE", "PASTORAL", "INSTITUTIONS"]
