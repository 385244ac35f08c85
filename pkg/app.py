#!/usr/bin/env python3
"""
csrr-rec
Robust cost-sensitive recommendation from positive-only feedback
"""
import sys

from src.utils.logger import logger
from src.views.command_line import main as run_cli


def main():
    """Main application entry point"""
    logger.info("csrr-rec starting")
    try:
        sys.exit(run_cli(sys.argv[1:]))
    except KeyboardInterrupt:
        logger.warning("Interrupted")
        sys.exit(130)
    except Exception as e:
        logger.critical(f"Application crashed: {str(e)}")
        raise


if __name__ == "__main__":
    main()
