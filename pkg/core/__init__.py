"""
Core app - Shared utilities and base classes.
"""
