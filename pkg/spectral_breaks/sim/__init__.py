""" Tools for simulating functional time series and running Monte-Carlo studies. """
