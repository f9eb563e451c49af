from setuptools import setup, find_packages
from codecs import open

__version__ = '0.1.0'

# Get the long description from the README file
with open('README.rst', encoding='utf-8') as f:
    long_description = f.read()

# Get the dependencies and installs
with open('requirements.txt', encoding='utf-8') as f:
    all_reqs = f.read().split('\n')

install_requires = [x.strip() for x in all_reqs if x.strip()]

setup(
    name='online_unit_clustering',
    version=__version__,
    description='Verification and search of lower bounds for one-dimensional online unit clustering.',
    long_description=long_description,
    packages=find_packages(exclude=['tests', 'docs', 'examples']),
    license='Apache License 2.0',
    install_requires=install_requires,
    extras_require={'test': ['pytest>=6.0']},
    entry_points={
        'console_scripts': ['online-unit-clustering=online_unit_clustering.cli:main'],
    },
    python_requires='>=3.7',
    classifiers=[
        "Programming Language :: Python :: 3.7",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: OS Independent"
    ]
)
