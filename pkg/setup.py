# Copyright 2026 The npspec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import io
import re

from setuptools import find_packages, setup

NAME = 'npspec'


def version():
    with io.open('npspec/__init__.py', 'r', encoding='utf-8') as f:
        return re.search(r"^__version__ = '([^']+)'", f.read(), re.M).group(1)


def long_description():
    with io.open('README.rst', 'r', encoding='utf-8') as f:
        return f.read()


setup(
    name=NAME,
    version=version(),
    description='Neumann-Poincare spectra of spheroids and thin flat domains',
    long_description=long_description(),
    author='The npspec Authors',
    license='Apache License 2.0',
    packages=find_packages(exclude=['tests', 'tests.*', 'benchmarks']),
    python_requires='>=3.8',
    install_requires=[
        'numpy>=1.20',
        'scipy>=1.8',
        'tabulate',
    ],
    extras_require={
        'test': ['mpmath'],
    },
    tests_require=['mpmath'],
    entry_points={
        'console_scripts': ['npspec=npspec.cli:main'],
    },
    classifiers=[
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics'],

    keywords='Neumann-Poincare operator spectrum spheroid plasmon',
)
