import argparse
import logging
import sys

from dotenv import load_dotenv

# Load environment variables before the config layer reads them
load_dotenv()

import cli  # noqa: E402
from config import load_settings, log_level  # noqa: E402
from errors import ZqError  # noqa: E402

# Setup logging
logging.basicConfig(
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    level=log_level()
)
logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="zq",
        description="Numerical toolkit for Zygmund-class quasiconformal theory and its verification suites.",
    )
    return cli.setup_parser(parser)


def main(argv=None):
    """Parse the command line, resolve the configuration and dispatch the verb."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)
    try:
        settings = load_settings(args.config, args.seed)
    except ZqError as e:
        logger.error(f"Configuration error: {e}")
        return e.exit_code
    logger.debug(f"Running {args.verb} with {settings.threads} threads, seed {settings.seed}")
    return args.handler(args, settings)


if __name__ == '__main__':
    sys.exit(main())
