import setuptools

with open("README.md", "r", encoding="utf8") as fh:
    long_description = fh.read()

extras = {
    'test': ['scipy'],
}

def _get_version():
    with open('rlsupply/__init__.py') as f:
        for line in f:
            if line.startswith('__version__'):
                g = {}
                exec(line, g)
                return g['__version__']
        raise ValueError('`__version__` not defined')

VERSION = _get_version()

setuptools.setup(
    name="rlsupply",
    version=VERSION,
    description="Multi-agent reinforcement learning for a two-echelon supply chain with information sharing",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords=["Reinforcement Learning", "supply chain", "multi-agent", "SAC", "RL"],
    packages=setuptools.find_packages(exclude=('tests', 'tests.*')),
    install_requires=[
        'numpy>=1.16.3',
        'termcolor',
        'torch',
        'GitPython',
        'matplotlib',
    ],
    extras_require=extras,
    entry_points={
        'console_scripts': ['rlsupply=rlsupply.cli:main'],
    },
    python_requires='>=3.8',
    classifiers=[
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.8",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
