"""
API endpoints and routes
"""