#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup

setup(name='eropy',
		version='1.0.0',
		description='Sets similar to their own erosions: exact polytopes, exact 1-D sets and raster morphology',
		packages=['eropy'],
		license="Simplified BSD",
		test_suite='test',
		python_requires='>=3.6',
		install_requires=[
			'numpy>=1.17',
			'scipy>=1.6',
			'Pillow>=6.0',
			],
		entry_points={
			'console_scripts': ['eropy = eropy.cli:main'],
			},
		long_description="""'eropy' decides whether a set is similar to its erosion by a ball and builds sets that are. Convex polytopes are classified exactly (inscribed ball, exscribed point or translation), 1-D sets with rational endpoints are eroded exactly, and curved, fractal or unbounded sets are handled on grids with exact distance transforms.

Usage instructions are included in the package docstring. Works with python >=3.6.""",
		classifiers=[
			"Development Status :: 4 - Beta",
			"License :: OSI Approved :: BSD License",
			"Programming Language :: Python :: 3.6",
			"Programming Language :: Python :: 3.7",
			"Programming Language :: Python :: 3.8",
			"Programming Language :: Python :: 3.9",
			"Programming Language :: Python :: 3.10",
			"Programming Language :: Python :: 3.11",
			"Programming Language :: Python :: Implementation :: CPython",
			"Topic :: Scientific/Engineering :: Mathematics",
			]
		)
