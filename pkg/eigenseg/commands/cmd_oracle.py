"""
oracle-check command
Compares the iterative eigenvalues with a dense decomposition of the same operator
"""

import click
import numpy as np

import config
from eigenspace import build_eigenspace, dense_eigs_oracle

from .runtime import (OracleMismatchError, RunManifest, emit_result, input_options, load_inputs, operator_options,
                      pipeline_config, report_errors)


@click.command('oracle-check')
@input_options
@click.option('--k', type=click.IntRange(min=1), default=config.DEFAULT_K, show_default=True)
@operator_options
@click.option('--oracle-tol', type=float, default=config.ORACLE_TOL, show_default=True,
              help='Largest accepted relative deviation')
@click.option('--manifest', 'manifest_file', type=click.Path(dir_okay=False), default=None,
              help='Also write the run manifest here')
@report_errors
def oracle_command(input_path, mask_path, k, weight, epsilon, face_average, tol, seed, oracle_tol, manifest_file):
    """Check iterative eigenvalues against the dense oracle"""
    cfg = pipeline_config(weight, epsilon, face_average, tol, seed, k=k)
    manifest = RunManifest('oracle-check', config=cfg.to_dict())
    manifest.add_input(input_path)
    manifest.add_input(mask_path)
    image, mask = load_inputs(input_path, mask_path)

    with manifest.timer('iterative'):
        space = build_eigenspace(image, mask, cfg)
    with manifest.timer('dense'):
        dense = dense_eigs_oracle(space.operator)

    iterative = space.basis.eigenvalues
    reference = dense.eigenvalues[:len(iterative)]
    deviation = float(np.max(np.abs(iterative - reference) / np.abs(reference)))
    manifest.gamma = space.weight.gamma
    manifest.weight_law = space.weight.law.to_dict()
    manifest.extra.update({'max_relative_deviation': deviation, 'tolerance': oracle_tol})
    if manifest_file is not None:
        manifest.write(manifest_file)
    if deviation > oracle_tol:
        raise OracleMismatchError(f'max relative deviation {deviation:.3g} exceeds {oracle_tol:g}', deviation)
    emit_result({'k': len(iterative), 'max_relative_deviation': deviation, 'tolerance': oracle_tol,
                 'manifest': manifest.to_dict()})
