"""
File input/output
PGM (P5, 8-bit) for images and masks, PFM (grayscale, little-endian) for float
fields, Matrix Market for operator dumps, JSON for spectra and manifests
"""

import hashlib
import json
import os
from typing import Dict, Tuple, Union

import numpy as np
import scipy.io

from .ae_errors import ContractError, ImageFormatError
from .ae_field import DomainMask, ScalarField

PathLike = Union[str, os.PathLike]

_WHITESPACE = b' \t\n\r\v\f'


def _next_token(data: bytes, pos: int) -> Tuple[bytes, int]:
    """Skip whitespace and '#' comments, then read one header token"""
    while pos < len(data):
        byte = data[pos:pos + 1]
        if byte in _WHITESPACE and byte:
            pos += 1
        elif byte == b'#':
            while pos < len(data) and data[pos:pos + 1] != b'\n':
                pos += 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos:pos + 1] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise ImageFormatError('truncated header', offset=start)
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> Tuple[int, int]:
    token, end = _next_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise ImageFormatError(f'malformed header: {what} {token!r} is not an integer', offset=end - len(token))
    if value <= 0:
        raise ImageFormatError(f'malformed header: {what} must be positive', offset=end - len(token))
    return value, end


def _payload_start(data: bytes, pos: int) -> int:
    # exactly one whitespace byte separates the header from the raster
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise ImageFormatError('malformed header: missing separator before payload', offset=pos)
    return pos + 1


def _parse_pgm(data: bytes) -> np.ndarray:
    if data[:2] != b'P5':
        raise ImageFormatError(f'bad magic {data[:2]!r}, expected P5', offset=0)
    width, pos = _header_int(data, 2, 'width')
    height, pos = _header_int(data, pos, 'height')
    maxval, pos = _header_int(data, pos, 'maxval')
    if maxval != 255:
        raise ImageFormatError(f'unsupported maxval {maxval}', offset=pos)
    start = _payload_start(data, pos)
    count = width * height
    if len(data) - start < count:
        raise ImageFormatError(f'truncated payload: expected {count} bytes, got {len(data) - start}', offset=len(data))
    pixels = np.frombuffer(data, dtype=np.uint8, count=count, offset=start)
    return pixels.reshape(height, width)


def read_image(path: PathLike) -> ScalarField:
    """Read a binary PGM (maxval 255); intensities are divided by 255"""
    with open(path, 'rb') as f:
        pixels = _parse_pgm(f.read())
    try:
        return ScalarField.from_array(pixels.astype(np.float64) / 255.0)
    except ContractError as e:
        raise ImageFormatError(f'unusable image: {e}')


def read_mask(path: PathLike) -> DomainMask:
    """Read a PGM mask: 0 is excluded background, anything else is foreground"""
    with open(path, 'rb') as f:
        pixels = _parse_pgm(f.read())
    return DomainMask.from_foreground(pixels > 0)


def _as_array(field) -> np.ndarray:
    values = field.values if isinstance(field, ScalarField) else np.asarray(field, dtype=np.float64)
    if values.ndim == 1:
        values = values.reshape(1, -1)
    if not np.all(np.isfinite(values)):
        raise ContractError('refusing to write non-finite values')
    return values


def quantize(values) -> np.ndarray:
    """Clamp to [0, 1], scale by 255 and round half up"""
    clipped = np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0)
    return np.floor(clipped * 255.0 + 0.5).astype(np.uint8)


def write_image(field, path: PathLike):
    """Write values as 8-bit PGM; values are clamped to [0, 1] here and nowhere else"""
    values = _as_array(field)
    height, width = values.shape
    with open(path, 'wb') as f:
        f.write(f'P5\n{width} {height}\n255\n'.encode('ascii'))
        f.write(quantize(values).tobytes())


def read_field(path: PathLike) -> ScalarField:
    """Read a grayscale PFM; negative scale means little-endian, rows stored bottom first"""
    with open(path, 'rb') as f:
        data = f.read()
    magic, pos = _next_token(data, 0)
    if magic != b'Pf':
        raise ImageFormatError(f'bad magic {magic!r}, expected Pf', offset=0)
    width, pos = _header_int(data, pos, 'width')
    height, pos = _header_int(data, pos, 'height')
    token, pos = _next_token(data, pos)
    try:
        scale = float(token)
    except ValueError:
        raise ImageFormatError(f'malformed header: scale {token!r}', offset=pos - len(token))
    if scale == 0.0:
        raise ImageFormatError('malformed header: scale must be non-zero', offset=pos - len(token))
    start = _payload_start(data, pos)
    expected = width * height * 4
    if len(data) - start != expected:
        raise ImageFormatError(f'byte count mismatch: expected {expected} payload bytes, got {len(data) - start}',
                               offset=start)
    dtype = '<f4' if scale < 0 else '>f4'
    raster = np.frombuffer(data, dtype=dtype, count=width * height, offset=start).reshape(height, width)
    values = np.flipud(raster).astype(np.float64)
    if not np.all(np.isfinite(values)):
        raise ImageFormatError('field contains non-finite values', offset=start)
    return ScalarField.from_array(values)


def write_field(field, path: PathLike):
    """Write a grayscale little-endian PFM (32-bit floats, bottom row first)"""
    values = _as_array(field)
    raster = np.flipud(values).astype('<f4')
    if not np.all(np.isfinite(raster)):
        raise ContractError('values overflow 32-bit float')
    height, width = values.shape
    with open(path, 'wb') as f:
        f.write(f'Pf\n{width} {height}\n-1.0\n'.encode('ascii'))
        f.write(raster.tobytes())


def write_matrix_market(op, path: PathLike):
    """Debug dump of the operator in Matrix Market coordinate format (symmetric storage)"""
    scipy.io.mmwrite(os.fspath(path), op.matrix, comment=f'eigenseg operator, n={op.n}, face_average={op.face_average}',
                     symmetry='symmetric')


def write_json(payload: Dict, path: PathLike):
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2)
        f.write('\n')


def read_json(path: PathLike) -> Dict:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def file_digest(path: PathLike) -> str:
    """SHA-256 hex digest of a file"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 20), b''):
            digest.update(chunk)
    return digest.hexdigest()
