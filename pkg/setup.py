from setuptools import find_packages, setup

with open("README.md", "r") as fh:
    long_description = fh.read()

setup(
    name='spectral_breaks',
    version='0.1.0',
    author='spectral_breaks developers',
    packages=find_packages(include=['spectral_breaks', 'spectral_breaks.*']),
    python_requires='>=3.8.0',
    description='Structural break tests for the spectrum and trace of the covariance operator of functional time '
                'series.',
    long_description = long_description,
    long_description_content_type='text/markdown',
    install_requires=[
    "h5py",
    "numpy",
    "pandas",
    "psutil",
    "scipy",
    "tqdm",
    ],
    extras_require={
        'test': ['pytest'],
        'docs': ['sphinx', 'sphinx-autoapi', 'sphinx-rtd-theme'],
    },
    entry_points={
        'console_scripts': ['spectral-breaks=spectral_breaks.cli:main'],
    },
)
