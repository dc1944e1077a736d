import os

from orbitlab import create_cli

cli = create_cli(os.environ.get("ORBITLAB_CONFIG", "default"))

if __name__ == '__main__':
    cli()
