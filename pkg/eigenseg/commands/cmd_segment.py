"""
segment command
Thresholds eigenfunction magnitudes into binary masks mask_0001.pgm ...
With --denoise-K the image is first filtered by a truncated expansion
"""

import os
from dataclasses import replace

import click

import config
from eigenspace import denoise_then_segment, parse_threshold, segment, write_image

from .runtime import (WEIGHT_CHOICES, RunManifest, emit_result, ensure_dir, input_options, load_inputs,
                      operator_options, pipeline_config, report_errors)


def parse_indices(ctx, param, value):
    """'all' or a comma-separated list of 1-based indices"""
    if value is None or value == 'all':
        return None
    try:
        indices = tuple(int(part) for part in value.split(',') if part.strip())
    except ValueError:
        raise click.BadParameter(f'expected "all" or comma-separated integers, got {value!r}')
    if not indices:
        raise click.BadParameter('no indices given')
    return indices


@click.command('segment')
@input_options
@click.option('--k', type=click.IntRange(min=1), default=None,
              help=f'Number of eigenpairs [default: {config.DEFAULT_K}, or the largest index]')
@click.option('--indices', callback=parse_indices, default='all', show_default=True,
              help='Eigenfunctions to threshold, e.g. 1,5')
@click.option('--threshold', default='otsu', show_default=True, help='otsu or fixed:T')
@click.option('--denoise-K', 'denoise_K', type=click.IntRange(min=0), default=None,
              help='Denoise with K eigenfunctions, then segment the filtered image')
@click.option('--denoise-weight', type=click.Choice(sorted(WEIGHT_CHOICES)), default=None,
              help='Weight law of the filter stage [default: --weight]')
@click.option('--denoise-epsilon', type=float, default=None, help='Smoothing for a tv filter stage')
@operator_options
@click.option('--out-dir', type=click.Path(file_okay=False), required=True)
@report_errors
def segment_command(input_path, mask_path, k, indices, threshold, denoise_K, denoise_weight, denoise_epsilon,
                    weight, epsilon, face_average, tol, seed, out_dir):
    """Binary masks from eigenfunctions"""
    if k is None:
        k = max(config.DEFAULT_K, max(indices) if indices else 0, denoise_K or 0)
    cfg = pipeline_config(weight, epsilon, face_average, tol, seed, k=k, K=denoise_K, indices=indices,
                          threshold=parse_threshold(threshold))
    filter_cfg = None
    if denoise_weight is not None:
        filter_cfg = replace(cfg, weight=WEIGHT_CHOICES[denoise_weight], epsilon=denoise_epsilon)

    manifest = RunManifest('segment', config=dict(cfg.to_dict(), denoise=denoise_K is not None))
    if filter_cfg is not None:
        manifest.config['filter'] = filter_cfg.to_dict()
    manifest.add_input(input_path)
    manifest.add_input(mask_path)

    image, mask = load_inputs(input_path, mask_path)
    with manifest.timer('segment'):
        if denoise_K is None:
            masks, basis = segment(image, mask, cfg)
        else:
            masks, basis = denoise_then_segment(image, mask, cfg, filter_cfg)

    ensure_dir(out_dir)
    written = []
    for result in masks:
        path = os.path.join(out_dir, f'mask_{result.index:04d}.pgm')
        write_image(result.mask, path)
        manifest.add_output(path)
        written.append({'index': result.index, 'threshold': result.threshold, 'method': result.method,
                        'pixels': result.pixels, 'path': path})

    manifest.gamma = basis.gamma
    manifest.weight_law = basis.weight_law.to_dict()
    manifest.extra['masks'] = written
    manifest.write(os.path.join(out_dir, 'manifest.json'))
    emit_result({'masks': written, 'gamma': basis.gamma})
