""" Contains statistics tools for long-run variance estimation and structural break testing. """
