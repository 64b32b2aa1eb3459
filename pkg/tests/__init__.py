"""Tests for innoviterbi."""
