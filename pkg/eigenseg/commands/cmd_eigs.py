"""
eigs command
Computes the k smallest eigenpairs of an image's operator and writes
phi_0001.pfm ... plus spectrum.json
"""

import os

import click

import config
from eigenspace import build_eigenspace, sparsify, spectrum_payload, write_field, write_json, write_matrix_market

from .runtime import (RunManifest, emit_result, ensure_dir, input_options, load_inputs, operator_options,
                      pipeline_config, report_errors)


@click.command('eigs')
@input_options
@click.option('--k', type=click.IntRange(min=1), default=config.DEFAULT_K, show_default=True,
              help='Number of eigenpairs')
@operator_options
@click.option('--out-dir', type=click.Path(file_okay=False), required=True)
@click.option('--dump-matrix', type=click.Path(dir_okay=False), default=None,
              help='Also write the operator in Matrix Market format')
@click.option('--sparsify', 'tau', type=float, default=None,
              help='Zero eigenfunction entries below TAU * max|phi| before writing')
@report_errors
def eigs_command(input_path, mask_path, k, weight, epsilon, face_average, tol, seed, out_dir, dump_matrix, tau):
    """Smallest eigenpairs of the adaptive operator"""
    cfg = pipeline_config(weight, epsilon, face_average, tol, seed, k=k)
    manifest = RunManifest('eigs', config=cfg.to_dict())
    manifest.add_input(input_path)
    manifest.add_input(mask_path)

    image, mask = load_inputs(input_path, mask_path)
    with manifest.timer('eigensolve'):
        space = build_eigenspace(image, mask, cfg)
    basis = space.basis
    if tau is not None:
        basis, report = sparsify(basis, tau)
        manifest.extra['sparsity'] = report.to_dict()

    ensure_dir(out_dir)
    for m, phi in enumerate(basis.eigenfields, start=1):
        path = os.path.join(out_dir, f'phi_{m:04d}.pfm')
        write_field(phi, path)
        manifest.add_output(path)
    spectrum_file = os.path.join(out_dir, 'spectrum.json')
    write_json(spectrum_payload(basis), spectrum_file)
    manifest.add_output(spectrum_file)
    if dump_matrix is not None:
        write_matrix_market(space.operator, dump_matrix)
        manifest.add_output(dump_matrix)

    manifest.gamma = basis.gamma
    manifest.weight_law = space.weight.law.to_dict()
    manifest.extra['solver'] = basis.solver
    manifest.write(os.path.join(out_dir, 'manifest.json'))
    emit_result({'k': basis.k, 'gamma': basis.gamma, 'eigenvalues': [float(v) for v in basis.eigenvalues],
                 'out_dir': out_dir})
