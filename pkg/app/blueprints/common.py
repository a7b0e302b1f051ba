"""
Shared CLI plumbing
Argument parsing, JSON output and the error-to-exit-code mapping
"""
import functools
import logging
from pathlib import Path

import click
from pydantic import ValidationError

from app.exceptions import InputError, OkounkovError
from app.models.numbers import to_rational
from app.models.surface import SurfaceModel
from app.services.export_service import ExportService
from app.services.surface_service import SURFACE_DIR, SurfaceService, pydantic_errors


logger = logging.getLogger(__name__)

EXIT_DOMAIN_ERROR = 1
EXIT_MALFORMED_INPUT = 2


def json_errors(command):
    """
    Report domain errors as {"error": code, "detail": ...} on stdout and exit
    with 1, or with 2 for malformed input
    """
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ValidationError as e:
            error = InputError("Invalid input", detail=pydantic_errors(e))
            click.echo(ExportService.dumps(error.to_dict()))
            click.get_current_context().exit(EXIT_MALFORMED_INPUT)
        except OkounkovError as e:
            logger.debug("Command failed: %s", e.message)
            click.echo(ExportService.dumps(e.to_dict()))
            code = EXIT_MALFORMED_INPUT if isinstance(e, InputError) else EXIT_DOMAIN_ERROR
            click.get_current_context().exit(code)
    return wrapper


output_option = click.option(
    '-o', '--output', type=click.Path(dir_okay=False, writable=True),
    default=None, help='Write the JSON result to this file instead of stdout'
)


def emit(data, output=None) -> None:
    text = ExportService.dumps(data)
    if output:
        Path(output).write_text(text + '\n')
        logger.info("Wrote %s", output)
    else:
        click.echo(text)


def load_surface_arg(source: str) -> SurfaceModel:
    """A bundled model name, a JSON file path or inline JSON"""
    if (SURFACE_DIR / f'{source}.json').exists():
        return SurfaceService.load_fixture(source)
    return SurfaceService.load_surface(ExportService.read_json(source))


def parse_vector(text: str) -> list:
    """JSON list such as '[2, "-1/2"]', or comma-separated rationals"""
    stripped = text.strip()
    if stripped.startswith('['):
        values = ExportService.parse_json(stripped)
        if not isinstance(values, list):
            raise InputError(f"Expected a JSON list, got {text!r}")
    else:
        values = [part for part in stripped.split(',') if part.strip()]
    return [to_rational(v) for v in values]
