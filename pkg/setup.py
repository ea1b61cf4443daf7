"""Setup file for the ckam package."""

from setuptools import setup

# All configuration is in pyproject.toml
# This file exists to enable editable installs with older pip versions
setup()
