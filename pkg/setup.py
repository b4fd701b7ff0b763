"""
Setup script for the gridlocal package.
"""
from setuptools import setup, find_packages

setup(
    name="gridlocal",
    version="0.1.0",
    packages=find_packages(include=["src"]),
    install_requires=[
        "click==8.1.8",
        "PyYAML==6.0.1",
        "python-dotenv==1.0.0",
        "typer==0.12.5",
        "typing_extensions==4.13.2",
    ],
    entry_points={
        "console_scripts": [
            "gridlocal=src.xlabCli:app",
        ],
    },
    python_requires=">=3.8",
)
