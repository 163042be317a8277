"""Modules for reading from and writing to file."""
