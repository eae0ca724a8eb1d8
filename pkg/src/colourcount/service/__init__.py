"""HTTP service exposing the verification pipelines.

The app is a stateless wrapper: every endpoint parses an instance out of the
request body, runs the corresponding pipeline and returns the report as JSON.
The CLI talks to this app in-process by default, so the service and the
command line cannot drift apart.
"""
from .app import app, create_app

__all__ = ["app", "create_app"]
