"""Pydantic models for lab inputs and results."""

from src.models.enums import ArcLabel, GKind, SiteKind

__all__ = ["ArcLabel", "GKind", "SiteKind"]
