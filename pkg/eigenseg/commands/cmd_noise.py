"""
add-noise command
Multiplicative noise I * (1 + delta * xi) with a seeded generator
"""

import click

import config
from eigenspace import GAUSSIAN, UNIFORM, NoiseSpec, add_noise, read_image, write_field, write_image

from .runtime import RunManifest, emit_result, manifest_path_for, report_errors

DISTRIBUTIONS = {'uniform': UNIFORM, 'gaussian': GAUSSIAN}


@click.command('add-noise')
@click.option('--input', 'input_path', type=click.Path(dir_okay=False), required=True, help='Input PGM image')
@click.option('--delta', type=click.FloatRange(min=0.0), required=True, help='Noise level')
@click.option('--dist', type=click.Choice(sorted(DISTRIBUTIONS)), default='gaussian', show_default=True)
@click.option('--seed', type=click.IntRange(0, config.SEED_LIMIT - 1), default=config.DEFAULT_SEED,
              show_default=True, help='Seed for the noise stream')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True, help='Output PGM')
@click.option('--out-field', type=click.Path(dir_okay=False), default=None, help='Also write unclamped PFM')
@report_errors
def noise_command(input_path, delta, dist, seed, out_path, out_field):
    """Add multiplicative noise to an image"""
    spec = NoiseSpec(delta, DISTRIBUTIONS[dist], seed)
    manifest = RunManifest('add-noise', config=spec.to_dict())
    manifest.add_input(input_path)

    with manifest.timer('noise'):
        noisy = add_noise(read_image(input_path), spec)
    write_image(noisy, out_path)
    manifest.add_output(out_path)
    if out_field is not None:
        write_field(noisy, out_field)
        manifest.add_output(out_field)

    manifest.write(manifest_path_for(out_path))
    emit_result({'out': out_path, 'delta': delta, 'distribution': spec.distribution, 'seed': seed})
