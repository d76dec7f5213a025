#!/usr/bin/env python

from setuptools import setup, find_packages

# Hack to prevent "TypeError: 'NoneType' object is not callable" error
# in multiprocessing/util.py _exit_function when setup.py exits
# (see http://www.eby-sarna.com/pipermail/peak/2010-May/003357.html)
try:
    import multiprocessing
except ImportError:
    pass


setup(
    name="wez-surrogate",
    version="0.1.0",
    description="Missile launch-envelope simulation and neural-network surrogate of its maximum range",
    url="",
    packages=find_packages(exclude=["examples", "examples.*"]),
    include_package_data=True,
    license="BSD",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Framework :: Django",
        "Framework :: Django :: 3.2",
        "Framework :: Django :: 4.2",
    ],
    install_requires=[
        "Django>=3.2,<5.0",
        "numpy>=1.22,<2.0",
        "scipy>=1.8,<2.0",
        "pandas>=1.5,<3.0",
    ],
    extras_require={
        "testing": ["coverage"],
    },
    entry_points={
        "console_scripts": [
            "wez=wez_surrogate.cli:main",
        ],
    },
    zip_safe=False,
)
