"""Utility modules for tsocausal."""
