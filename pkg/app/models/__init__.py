"""
Data models and database entities
"""