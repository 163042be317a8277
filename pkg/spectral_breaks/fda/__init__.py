""" Representing functional data in a basis and computing covariance operators and their spectra. """
