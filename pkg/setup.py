# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from setuptools import setup

if __name__ == '__main__':
    setup()
