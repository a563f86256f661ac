"""Unit tests for spinform components."""
