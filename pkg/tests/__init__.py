"""Test suite for fastsize."""
