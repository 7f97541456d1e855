"""
Integration module for brlab.

Ties the bounds layer to the outside world:
- settings: config/defaults.json plus BRLAB_* environment overrides
- cache: on-disk store of exhausted Zarankiewicz searches
- verifier: independent certificate checker
- cli: the ``python -m integration.cli`` entry point
"""

from .settings import RunSettings

__all__ = ["RunSettings"]
