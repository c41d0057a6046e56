"""Replay-based deep learners"""
