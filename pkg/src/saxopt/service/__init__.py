"""HTTP service wrapping the library; run with ``uvicorn saxopt.service:app``."""

from .app import app, create_app

__all__ = ["app", "create_app"]
