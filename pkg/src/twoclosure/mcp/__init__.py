"""
MCP service exposing the closure computations as tools.
"""
