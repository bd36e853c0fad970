"""
phantom command
Writes a synthetic phantom (PGM and PFM) and its ground-truth object masks
"""

import os

import click

from eigenspace import (BLOB_WITH_BLUR, PROFILE1D, STEP1D, TWO_DISKS, PhantomSpec, make_phantom, write_field,
                        write_image)

from .runtime import RunManifest, emit_result, ensure_dir, report_errors


@click.command('phantom')
@click.option('--kind', type=click.Choice([PROFILE1D, STEP1D, TWO_DISKS, BLOB_WITH_BLUR]), required=True)
@click.option('--n', type=click.IntRange(min=3), required=True, help='Nodes per axis')
@click.option('--blur', type=click.FloatRange(min=0.0), default=0.0, show_default=True,
              help=f'Gaussian blur radius in pixels ({BLOB_WITH_BLUR} only)')
@click.option('--out-dir', type=click.Path(file_okay=False), required=True)
@report_errors
def phantom_command(kind, n, blur, out_dir):
    """Generate a synthetic phantom"""
    spec = PhantomSpec(kind, n, blur=blur)
    manifest = RunManifest('phantom', config=spec.to_dict())
    with manifest.timer('phantom'):
        phantom = make_phantom(spec)

    ensure_dir(out_dir)
    outputs = [os.path.join(out_dir, 'phantom.pgm'), os.path.join(out_dir, 'phantom.pfm')]
    write_image(phantom.image, outputs[0])
    write_field(phantom.image, outputs[1])
    for i, obj in enumerate(phantom.objects, start=1):
        path = os.path.join(out_dir, f'object_{i:02d}.pgm')
        write_image(obj, path)
        outputs.append(path)
    for path in outputs:
        manifest.add_output(path)

    manifest.write(os.path.join(out_dir, 'manifest.json'))
    emit_result({'kind': kind, 'width': phantom.image.width, 'height': phantom.image.height,
                 'objects': len(phantom.objects), 'out_dir': out_dir})
