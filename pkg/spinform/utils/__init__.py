"""Shared utilities package initialization."""

__all__ = []
