"""
Domain models: pydantic parameter types and the function catalog.
"""
