"""
兼容旧版 pip 的 setup.py
"""

from setuptools import setup, find_packages

setup(
    name="gini-qudit",
    version="1.0.0",
    packages=find_packages(include=["giniqudit", "giniqudit.*"]),
    install_requires=[
        "click>=8.0.0",
        "numpy>=1.22.0",
    ],
    extras_require={
        "dev": ["pytest>=7.0.0", "pytest-cov>=4.0.0"],
    },
    entry_points={
        "console_scripts": [
            "gini-qudit=giniqudit.cli:cli",
        ],
    },
    python_requires=">=3.9",
)
