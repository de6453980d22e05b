"""
Utility functions and helpers
"""