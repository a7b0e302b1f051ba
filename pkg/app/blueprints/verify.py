"""
Verify Blueprint
Runs the acceptance suite and reports every check
"""
import click
from flask import Blueprint, current_app

from app.blueprints.common import emit, json_errors, output_option
from app.services.verification_service import VerificationService

verify_bp = Blueprint('verify', __name__, cli_group=None)


@verify_bp.cli.command('verify')
@click.option('--seed', type=int, default=None, help='Seed for the randomized checks')
@click.option('--cases', type=int, default=None, help='Randomized property cases')
@output_option
@json_errors
def verify(seed, cases, output):
    """Run every acceptance check; exit 0 iff all pass"""
    settings = dict(current_app.config)
    if seed is not None:
        settings['VERIFY_SEED'] = seed
    if cases is not None:
        settings['VERIFY_RANDOM_CASES'] = cases
    report = VerificationService.run_all(settings)
    for check in report['checks']:
        status = 'pass' if check['passed'] else 'FAIL'
        click.echo(f"{status} {check['name']} ({check['seconds']}s)", err=True)
    emit(report, output)
    if not report['valid']:
        click.get_current_context().exit(1)
