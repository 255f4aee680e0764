"""ergavg main entry point."""

from ergavg.cli import main

if __name__ == "__main__":
    main()
