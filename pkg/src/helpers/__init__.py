# Helpers module: placement enumeration and census
from .census import census, iter_valid_placements, valid_placements

__all__ = ["census", "iter_valid_placements", "valid_placements"]
