"""Tests for wireframe geometry and export."""
