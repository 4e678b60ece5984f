"""
Main entry point for ``python -m detrep``.
"""

from .main import main

if __name__ == "__main__":
    main()
