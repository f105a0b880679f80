"""
Punto de entrada del banco de trabajo de decodificadores del código tórico
"""
import sys

from config.config import config
from utils.logger import logger


def main():
    """Función principal"""
    try:
        config.validate()
    except ValueError as e:
        logger.error(str(e))
        return 1

    from cli.commands import main as run_cli
    return run_cli(sys.argv[1:])


if __name__ == '__main__':
    sys.exit(main())
