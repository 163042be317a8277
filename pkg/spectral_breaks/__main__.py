from spectral_breaks.cli import run

run()
