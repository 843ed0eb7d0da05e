"""Main entry point for the contigforge application."""

from .cli.main import main

if __name__ == "__main__":
    main()
