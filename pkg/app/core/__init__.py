"""
Core application components
"""