"""Tests for contigforge."""
