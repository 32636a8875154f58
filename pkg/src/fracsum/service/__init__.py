"""HTTP service exposing the fractional-sum library.

The FastAPI application in :mod:`fracsum.service.app` wraps the library
operations behind JSON endpoints; the CLI talks to it in process.
"""

from .app import create_app

__all__ = ["create_app"]
