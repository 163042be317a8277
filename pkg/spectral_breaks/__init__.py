""" Tools for detecting, testing and dating structural breaks in the spectrum and trace of covariance operators. """

__version__ = '0.1.0'
