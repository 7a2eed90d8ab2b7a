"""
Root package initialization.
"""
