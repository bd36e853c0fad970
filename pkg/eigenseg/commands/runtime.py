"""
Command runtime
Shared pieces of every subcommand: the @report_errors decorator that turns
library exceptions into exit codes and error JSON, input loading, and the
run manifest
"""

import json
import os
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from functools import wraps
from typing import Dict, Optional, Tuple

import click

import config
from eigenspace import (ARITHMETIC, HARMONIC, LORENTZIAN, PENALIZED_TV, ContractError, ConvergenceError,
                        DegenerateThresholdError, DomainMask, EigenspaceError, ImageFormatError, PipelineConfig,
                        ScalarField, check_dims, file_digest, read_image, read_mask, write_json)
from logging_config import get_logger

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONVERGENCE = 2
EXIT_DEGENERATE = 3
EXIT_ORACLE = 4


class OracleMismatchError(EigenspaceError):
    """Iterative and dense eigenvalues disagree beyond the oracle tolerance"""
    kind = 'oracle_mismatch'

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation

    def details(self) -> Dict:
        return {'max_relative_deviation': self.deviation}


_EXIT_CODES = (
    (ImageFormatError, EXIT_INPUT),
    (ContractError, EXIT_INPUT),
    (ConvergenceError, EXIT_CONVERGENCE),
    (DegenerateThresholdError, EXIT_DEGENERATE),
    (OracleMismatchError, EXIT_ORACLE),
)


def exit_code_for(error: Exception) -> int:
    for error_type, code in _EXIT_CODES:
        if isinstance(error, error_type):
            return code
    return EXIT_INPUT


def emit_error(kind: str, message: str, **details):
    """Machine-readable error on stderr"""
    payload = {'success': False, 'error': kind, 'message': message}
    payload.update(details)
    click.echo(json.dumps(payload), err=True)


def emit_result(payload: Dict):
    click.echo(json.dumps(dict({'success': True}, **payload)))


def report_errors(f):
    """
    Decorator for subcommands
    Maps EigenspaceError and OSError to an exit code and an error JSON line on stderr
    """
    @wraps(f)
    def decorated(*args, **kwargs):
        logger = get_logger()
        try:
            return f(*args, **kwargs)
        except EigenspaceError as e:
            logger.error('%s: %s', e.kind, e)
            emit_error(e.kind, str(e), **e.details())
            raise click.exceptions.Exit(exit_code_for(e))
        except OSError as e:
            logger.error('io: %s', e)
            emit_error('io', f'{e.strerror or e}: {e.filename}' if e.filename else str(e))
            raise click.exceptions.Exit(EXIT_INPUT)

    return decorated


def load_inputs(input_path: str, mask_path: Optional[str]) -> Tuple[ScalarField, DomainMask]:
    """Image plus its domain: the ROI mask when given, otherwise the full rectangle"""
    image = read_image(input_path)
    if mask_path is None:
        return image, DomainMask.full(image.width, image.height)
    mask = read_mask(mask_path)
    check_dims(image, mask)
    return image, mask


@dataclass
class RunManifest:
    """Record of one successful run, written as JSON next to its outputs"""
    command: str
    config: Dict = field(default_factory=dict)
    gamma: Optional[float] = None
    weight_law: Optional[Dict] = None
    timings: Dict[str, float] = field(default_factory=dict)
    inputs: Dict[str, str] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    extra: Dict = field(default_factory=dict)

    @contextmanager
    def timer(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = time.perf_counter() - start

    def add_input(self, path: Optional[str]):
        if path is not None:
            self.inputs[os.fspath(path)] = file_digest(path)

    def add_output(self, path: str):
        self.outputs[os.fspath(path)] = file_digest(path)

    def to_dict(self) -> Dict:
        payload = {
            'command': self.command,
            'config': self.config,
            'gamma': self.gamma,
            'weight_law': self.weight_law,
            'timings': self.timings,
            'inputs': self.inputs,
            'outputs': self.outputs,
        }
        payload.update(self.extra)
        return payload

    def write(self, path: str) -> str:
        write_json(self.to_dict(), path)
        get_logger().info('%s finished; manifest %s', self.command, path)
        return path


def manifest_path_for(output: str) -> str:
    """Manifest location for single-file outputs: <output>.manifest.json"""
    return f'{output}.manifest.json'


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


WEIGHT_CHOICES = {'lorentzian': LORENTZIAN, 'tv': PENALIZED_TV}


def operator_options(f):
    """--weight/--epsilon/--avg/--tol/--seed shared by every command that builds an operator"""
    options = [
        click.option('--weight', type=click.Choice(sorted(WEIGHT_CHOICES)), default='lorentzian', show_default=True,
                     help='Weight law'),
        click.option('--epsilon', type=float, default=None, help='Smoothing for the tv weight'),
        click.option('--avg', 'face_average', type=click.Choice([HARMONIC, ARITHMETIC]), default=HARMONIC,
                     show_default=True, help='Face averaging of the weight'),
        click.option('--tol', type=float, default=config.EIGEN_TOL, show_default=True,
                     help='Eigen-residual tolerance'),
        click.option('--seed', type=click.IntRange(0, config.SEED_LIMIT - 1), default=config.DEFAULT_SEED,
                     show_default=True, help='Seed for the eigensolver start vector'),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def input_options(f):
    f = click.option('--mask', 'mask_path', type=click.Path(dir_okay=False), default=None,
                     help='PGM region of interest (0 = excluded)')(f)
    return click.option('--input', 'input_path', type=click.Path(dir_okay=False), required=True,
                        help='Input PGM image')(f)


def pipeline_config(weight: str, epsilon: Optional[float], face_average: str, tol: float, seed: int,
                    **kwargs) -> PipelineConfig:
    """PipelineConfig from the shared operator options plus command-specific fields"""
    return PipelineConfig(weight=WEIGHT_CHOICES[weight], epsilon=epsilon, face_average=face_average,
                          tol=tol, seed=seed, **kwargs)
