"""
friendrun main entry point
"""
from friendrun.cli.main import cli

if __name__ == "__main__":
    cli()
