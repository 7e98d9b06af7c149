"""
Configuration and the exception hierarchy shared by every mibench package.
"""
