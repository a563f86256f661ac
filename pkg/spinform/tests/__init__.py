"""Test suite for spinform."""
