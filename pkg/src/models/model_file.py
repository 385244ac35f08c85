#!/usr/bin/env python3
"""Binary model persistence.

Layout: magic ``CSRR``, one version byte, a little-endian uint32 header length, a UTF-8
JSON header, then one block per matrix: a little-endian uint64 value count followed by
that many little-endian float64 values in row-major order.
"""
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ModelFormatError
from ..utils.logger import logger

MAGIC = b'CSRR'
VERSION = 1

_NNM_KINDS = ('csrr-i', 'csrr-ii', 'csrr-i-v0')


def matrix_layout(kind: str, rows: int, cols: int,
                  latent_dim: Optional[int] = None) -> List[Tuple[str, Tuple[int, int]]]:
    """Names and shapes of the payload matrices for a solver kind"""
    if kind in _NNM_KINDS:
        return [('u', (rows, cols)), ('v', (rows, cols))]
    if kind == 'csrr-e':
        if not latent_dim:
            raise ValueError("csrr-e models need a latent dimension")
        return [('p', (latent_dim, rows)), ('q', (latent_dim, cols)), ('v', (rows, cols))]
    if kind == 'poprank':
        return [('popularity', (rows, 1))]
    raise ValueError(f"unknown solver kind '{kind}'")


@dataclass
class ModelFile:
    kind: str
    rows: int
    cols: int
    seed: int
    matrices: Dict[str, np.ndarray]
    latent_dim: Optional[int] = None
    config: Dict[str, Any] = field(default_factory=dict)

    def header(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'rows': self.rows, 'cols': self.cols,
                'latent_dim': self.latent_dim, 'seed': self.seed, 'config': self.config}


def save_model(model: ModelFile, path: Union[str, Path]) -> Path:
    """Write a model file; matrices must match the kind's layout"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = json.dumps(model.header(), sort_keys=True, default=str).encode('utf-8')

    with open(path, 'wb') as f:
        f.write(MAGIC)
        f.write(struct.pack('<B', VERSION))
        f.write(struct.pack('<I', len(header)))
        f.write(header)
        for name, shape in matrix_layout(model.kind, model.rows, model.cols, model.latent_dim):
            values = np.ascontiguousarray(model.matrices[name], dtype='<f8')
            if values.shape != shape:
                raise ValueError(f"matrix '{name}' has shape {values.shape}, expected {shape}")
            f.write(struct.pack('<Q', values.size))
            f.write(values.tobytes(order='C'))

    logger.info(f"Saved {model.kind} model ({model.rows}x{model.cols}) to {path}")
    return path


def load_model(path: Union[str, Path]) -> ModelFile:
    """Read a model file, checking every length against the header"""
    data = Path(path).read_bytes()
    offset = 0

    def take(size: int, what: str) -> bytes:
        nonlocal offset
        if offset + size > len(data):
            raise ModelFormatError(f"truncated file while reading {what}", offset)
        chunk = data[offset:offset + size]
        offset += size
        return chunk

    if take(4, 'magic') != MAGIC:
        raise ModelFormatError("bad magic bytes", 0)
    version, = struct.unpack('<B', take(1, 'version'))
    if version != VERSION:
        raise ModelFormatError(f"unsupported version {version}", offset - 1)
    header_length, = struct.unpack('<I', take(4, 'header length'))
    header_offset = offset
    try:
        header = json.loads(take(header_length, 'header').decode('utf-8'))
        layout = matrix_layout(header['kind'], int(header['rows']), int(header['cols']),
                               header.get('latent_dim'))
        seed = int(header['seed'])
    except (ValueError, KeyError, TypeError) as e:
        raise ModelFormatError(f"corrupt header: {e}", header_offset) from e

    matrices = {}
    for name, shape in layout:
        count_offset = offset
        count, = struct.unpack('<Q', take(8, f"length of '{name}'"))
        if count != shape[0] * shape[1]:
            raise ModelFormatError(
                f"matrix '{name}' holds {count} values but a {header['kind']} model needs "
                f"{shape[0] * shape[1]}", count_offset)
        raw = take(8 * count, f"values of '{name}'")
        matrices[name] = np.frombuffer(raw, dtype='<f8').reshape(shape).astype(np.float64)

    if offset != len(data):
        raise ModelFormatError(f"{len(data) - offset} trailing bytes after payload", offset)

    return ModelFile(kind=header['kind'], rows=int(header['rows']), cols=int(header['cols']),
                     seed=seed, matrices=matrices,
                     latent_dim=header.get('latent_dim'), config=header.get('config', {}))
