"""
Run the command-line tool: python -m cli <command> ...
"""

from cli.commands import main

if __name__ == "__main__":
    raise SystemExit(main())
