# Copyright 2023 The Royalty-Cmd Contributors

# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at

#    https://www.apache.org/licenses/LICENSE-2.0

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Royalty-Cmd -- music royalty catalog valuation command processor
"""
from setuptools import find_packages, setup

from royalty_cmd import __pkg_metadata__

python_classifiers = [
    'Programming Language :: Python :: {0}'.format(py_version)
    for py_version in ['3', '3.9', '3.10', '3.11']
]
other_classifiers = [
    'Development Status :: ' + __pkg_metadata__.DEV_STATUS,
    'License :: OSI Approved :: Apache Software License',
    'Programming Language :: Python :: Implementation :: CPython',
    'Operating System :: MacOS :: MacOS X',
    'Operating System :: POSIX :: Linux',
    'Operating System :: Unix',
    'Environment :: Console',
    'Intended Audience :: Financial and Insurance Industry',
    'Intended Audience :: Science/Research',
    'Intended Audience :: Developers',
    'Topic :: Office/Business :: Financial',
]
try:
    long_description = open('README.rst', 'rt').read()
except IOError:
    long_description = ''
install_requires = [
    # see environment-dev.yaml for conda environment dev installation
    # see requirements.txt for package versions used during recent development
    'arrow',
    'attrs',
    'cliff',
    'numpy',
    'pandas',
    'PyYAML',
    'scipy',
]

setup(
    name=__pkg_metadata__.PROJECT,
    version=__pkg_metadata__.VERSION,
    description=__pkg_metadata__.DESCRIPTION,
    long_description=long_description,
    author='The Royalty-Cmd Contributors',
    license='Apache License, Version 2.0',
    classifiers=python_classifiers + other_classifiers,
    platforms=['MacOS X', 'Linux'],
    python_requires='>=3.9',
    install_requires=install_requires,
    packages=find_packages(exclude=['tests', 'tests.*']),
    entry_points={
        # The royalty command:
        'console_scripts': ['royalty = royalty_cmd.main:main'],
        # Sub-command plug-ins:
        'royalty.app': [
            'compare = royalty_cmd.compare:Compare',
            'curves = royalty_cmd.curves:Curves',
            'multipliers = royalty_cmd.multipliers:Multipliers',
            'synth = royalty_cmd.synth:Synth',
            'validate = royalty_cmd.validate:Validate',
            'value = royalty_cmd.value:Value',
        ],
    },
)
