"""Table-based learners"""
