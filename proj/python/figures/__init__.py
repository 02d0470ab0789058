"""Figure recipes over gct-sim CSV tables."""

from .schema import SchemaError
from .recipes import RECIPES

__all__ = ["RECIPES", "SchemaError"]
