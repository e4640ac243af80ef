"""HTTP service wrapping the guardnet core."""

from .app import app, create_app

__all__ = ["app", "create_app"]
