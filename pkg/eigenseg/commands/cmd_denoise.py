"""
denoise command
Truncated eigenexpansion I0 + sum_{m<=K} beta_m phi_m of an image
"""

import click

import config
from eigenspace import run_denoise, write_field, write_image

from .runtime import (RunManifest, emit_result, input_options, load_inputs, manifest_path_for, operator_options,
                      pipeline_config, report_errors)


def parse_sides(ctx, param, value):
    if not value:
        return ()
    return tuple(side.strip() for side in value.split(',') if side.strip())


@click.command('denoise')
@input_options
@click.option('--k', type=click.IntRange(min=1), default=config.DEFAULT_K, show_default=True,
              help='Number of eigenpairs computed')
@click.option('--K', 'K', type=click.IntRange(min=0), default=None,
              help=f'Eigenfunctions kept [default: min(k, {config.K_CEILING})]')
@click.option('--zero-boundary', is_flag=True, help='Use zero boundary data for I0')
@click.option('--zero-sides', callback=parse_sides, default=None,
              help='Zero boundary data on some sides only, e.g. top,left')
@operator_options
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True, help='Output PGM')
@click.option('--out-field', type=click.Path(dir_okay=False), default=None, help='Also write unclamped PFM')
@report_errors
def denoise_command(input_path, mask_path, k, K, zero_boundary, zero_sides, weight, epsilon, face_average, tol,
                    seed, out_path, out_field):
    """Denoise by truncating the adaptive eigenexpansion"""
    cfg = pipeline_config(weight, epsilon, face_average, tol, seed, k=k, K=K, zero_boundary=zero_boundary,
                          zero_sides=zero_sides)
    manifest = RunManifest('denoise', config=cfg.to_dict())
    manifest.add_input(input_path)
    manifest.add_input(mask_path)

    image, mask = load_inputs(input_path, mask_path)
    with manifest.timer('denoise'):
        result = run_denoise(image, mask, cfg)

    write_image(result.image, out_path)
    manifest.add_output(out_path)
    if out_field is not None:
        write_field(result.image, out_field)
        manifest.add_output(out_field)

    manifest.gamma = result.space.weight.gamma
    manifest.weight_law = result.space.weight.law.to_dict()
    manifest.extra['coefficients'] = [float(b) for b in result.expansion.coefficients[:cfg.K]]
    manifest.write(manifest_path_for(out_path))
    emit_result({'K': cfg.K, 'k': cfg.k, 'gamma': manifest.gamma, 'out': out_path})
