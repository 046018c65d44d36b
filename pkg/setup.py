"""build setup for physprop
"""

from setuptools import setup, find_packages
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

# Get the long description from the README file
with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

# Single source for the version
about = {}
with open(path.join(here, 'physprop', '__init__.py'), encoding='utf-8') as f:
    for line in f:
        if line.startswith('__version__'):
            exec(line, about)

setup(
    name='physprop',
    version=about['__version__'],
    description=('Synthetic physics videos and oracle estimators for '
                 'elasticity, viscosity and friction'),
    long_description=long_description,
    author='The physprop developers',
    license='MIT',

    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'Topic :: Scientific/Engineering :: Image Recognition',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],

    keywords='physics video elasticity viscosity friction homography gru',

    packages=find_packages(exclude=['contrib', 'docs', 'tests']),
    python_requires='>=3.8',

    install_requires=['numpy>=1.17.0', 'scipy>=1.4.0', 'pandas>=1.0.0',
                      'rich>=10.0.0'],

    entry_points={
        'console_scripts': ['physprop=physprop.cli:main'],
    },

    # $ pip install -e .[dev,test]
    extras_require={
        'dev': ['check-manifest'],
        'test': ['pytest', 'pytest-benchmark', 'coverage'],
    }
)
