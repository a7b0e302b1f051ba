"""
Command-line entry point
`okounkov <command>`: the application CLI with a --verbose switch
"""
import logging

import click
from flask.cli import FlaskGroup

from app import create_app


def make_app():
    return create_app('default')


@click.group(
    cls=FlaskGroup,
    create_app=make_app,
    add_default_commands=False,
    add_version_option=False,
    load_dotenv=False,
    set_debug_flag=False
)
@click.option('--verbose', '-v', is_flag=True, help='Log debug events to stderr')
def cli(verbose):
    """Exact Zariski decompositions, Okounkov polygons and slice bodies"""
    if verbose:
        logging.getLogger('app').setLevel(logging.DEBUG)


def main() -> None:
    """Exit 0 on success, 1 on domain errors, 2 on malformed input or usage"""
    cli.main(prog_name='okounkov')


if __name__ == '__main__':
    main()
