"""Tests for wronski."""
