from setuptools import setup, find_packages

from pyenergy._version import __version__

with open('requirements.txt') as f:
    requirements = f.read().splitlines()

requirements = ['setuptools'] + requirements

setup(
    name='pyenergy',
    version=__version__,
    author='pyenergy developers',
    packages=find_packages(),
    entry_points={'console_scripts': ['pyenergy = pyenergy.cli:main']},
    package_data={'configs': ['*.json']},
    include_package_data=True,
    install_requires=requirements,
    python_requires='>=3.7',
    license='BSD',
    classifiers=['Development Status :: 3 - Alpha',
                 "License :: OSI Approved :: BSD License",
                 "Programming Language :: Python :: 3.7",
                 "Programming Language :: Python :: 3.8",
                 "Topic :: Scientific/Engineering :: Mathematics",
                 "Intended Audience :: Science/Research"]
)
