from setuptools import setup, find_packages

setup(
    name="compton-ledger",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    package_data={"src": ["data/*.txt"]},
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.8",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "compton-ledger=src.main:main",
        ],
    },
)
