""" Basic utilities.
"""
