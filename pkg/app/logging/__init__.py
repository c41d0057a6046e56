"""
Logging package for Ordinal-RL.
Contains logging configuration and utilities.
"""
