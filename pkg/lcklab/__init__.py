"""LCK Lab: numerical verification of locally conformally Kähler geometry on Hopf manifolds."""

from lcklab.config.settings import settings

__version__ = settings.VERSION

__all__ = ["__version__"]
