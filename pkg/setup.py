#!/usr/bin/env python3
"""
Setup script for wzbarnes
"""

from setuptools import setup, find_packages
from pathlib import Path

this_directory = Path(__file__).parent
long_description = (this_directory / "README.md").read_text()

setup(
    name="wzbarnes",
    version="1.0.0",
    author="wzbarnes Contributors",
    description="Exact WZ-pair verification and arbitrary-precision Barnes integrals for Ramanujan-type series",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests", "benchmarks"]),
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: POSIX",
    ],
    python_requires=">=3.8",
    install_requires=["mpmath>=1.3", "sympy>=1.12", "lark>=1.1"],
    extras_require={
        "dev": ["pytest>=7.0", "pytest-cov>=4.0"],
    },
    entry_points={"console_scripts": ["wzb=wzbarnes.cli:main"]},
    keywords="wilf-zeilberger hypergeometric barnes-integral ramanujan pi",
)
