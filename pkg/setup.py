import os

from setuptools import setup, find_packages

from steiner.version_info import Version

Version.generate()

with open(os.path.abspath(os.path.join(os.path.dirname(__file__), 'requirements.txt')), encoding='utf-8') as f:
    install_reqs = [line for line in f.read().splitlines() if line and not line.startswith('#')]

setup(
    name='steiner-loops',
    version=Version.get(),
    description='Symbolic engine for free Steiner loops, their automorphisms and finite Steiner triple systems.',
    long_description='Symbolic engine for free Steiner loops, their automorphisms and finite Steiner triple systems.',
    license='MIT',
    packages=find_packages(exclude=['tests', 'tests.*']),
    install_requires=install_reqs,
    entry_points={
        'console_scripts': ['steiner = steiner.cli:main'],
    },
)
