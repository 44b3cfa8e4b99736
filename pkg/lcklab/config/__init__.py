"""Config package for LCK Lab"""

from .conventions import CONVENTIONS, ConventionsRecord
from .settings import Settings, settings

__all__ = ["settings", "Settings", "CONVENTIONS", "ConventionsRecord"]
