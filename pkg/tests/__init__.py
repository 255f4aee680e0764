"""Test suite for ergavg."""
