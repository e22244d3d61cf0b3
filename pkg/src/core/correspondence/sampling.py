"""
Block Sampling
Spatial subsampling of correspondences on a regular image grid.
"""

import logging
from typing import List, Sequence

import numpy as np
import pandas as pd

from shared.errors import InvalidArgumentError
from shared.models import Correspondence

logger = logging.getLogger(__name__)


def correspondences_to_frame(corrs: Sequence[Correspondence]) -> pd.DataFrame:
    """
    Tabulate correspondences, one row each, keeping their input position.

    Args:
        corrs: Correspondences

    Returns:
        DataFrame with position, frame_id, u, v, x, y, z columns
    """
    return pd.DataFrame({
        'position': np.arange(len(corrs), dtype=int),
        'frame_id': [c.frame_id for c in corrs],
        'u': [c.pixel.u for c in corrs],
        'v': [c.pixel.v for c in corrs],
        'x': [c.radar.x for c in corrs],
        'y': [c.radar.y for c in corrs],
        'z': [c.radar.z for c in corrs],
    })


def _assign_blocks(df: pd.DataFrame, image_w: float, image_h: float, block_size: int) -> pd.DataFrame:
    """Drop out-of-image pixels and attach each row's block indices."""
    if block_size < 1:
        raise InvalidArgumentError(f"block_size must be >= 1, got {block_size}")
    in_image = (df['u'] >= 0) & (df['u'] < image_w) & (df['v'] >= 0) & (df['v'] < image_h)
    df_in = df.loc[in_image].copy()
    df_in['bx'] = np.floor(df_in['u'] / block_size).astype(int)
    df_in['by'] = np.floor(df_in['v'] / block_size).astype(int)
    return df_in


def block_sample(corrs: Sequence[Correspondence], image_w: float, image_h: float,
                 block_size: int = 20, stride_blocks: int = 2) -> List[Correspondence]:
    """
    Keep at most one correspondence per selected grid cell.

    The image is split into block_size x block_size cells; cell (bx, by) is
    selected when both indices are multiples of stride_blocks. In each
    selected cell the correspondence nearest the cell center wins, ties going
    to the lowest frame_id, then the lowest u.

    Args:
        corrs: Correspondences (out-of-image pixels are dropped)
        image_w: Image width in pixels
        image_h: Image height in pixels
        block_size: Cell edge in pixels
        stride_blocks: Keep every stride_blocks-th cell along each axis

    Returns:
        Selected correspondences sorted by (frame_id, u, v)
    """
    if stride_blocks < 1:
        raise InvalidArgumentError(f"stride_blocks must be >= 1, got {stride_blocks}")
    if block_size < 1:
        raise InvalidArgumentError(f"block_size must be >= 1, got {block_size}")
    if not corrs:
        return []

    df = _assign_blocks(correspondences_to_frame(corrs), image_w, image_h, block_size)
    df = df.loc[(df['bx'] % stride_blocks == 0) & (df['by'] % stride_blocks == 0)].copy()

    center_u = (df['bx'] + 0.5) * block_size
    center_v = (df['by'] + 0.5) * block_size
    df['distance'] = np.hypot(df['u'] - center_u, df['v'] - center_v)

    df = df.sort_values(['bx', 'by', 'distance', 'frame_id', 'u', 'v', 'x', 'y', 'z', 'position'],
                        kind='mergesort')
    picked = df.groupby(['bx', 'by'], sort=False).head(1)

    selected = sorted((corrs[i] for i in picked['position']), key=Correspondence.sort_key)
    logger.info("Block sampling (%d px blocks, stride %d) kept %d of %d correspondences",
                block_size, stride_blocks, len(selected), len(corrs))
    return selected


def spatial_coverage(corrs: Sequence[Correspondence], image_w: float, image_h: float,
                     block_size: int = 20) -> float:
    """
    Fraction of grid cells holding at least one correspondence.

    Args:
        corrs: Correspondences
        image_w: Image width in pixels
        image_h: Image height in pixels
        block_size: Cell edge in pixels

    Returns:
        Occupied cells divided by total cells, in [0, 1]
    """
    if block_size < 1:
        raise InvalidArgumentError(f"block_size must be >= 1, got {block_size}")
    total = int(np.ceil(image_w / block_size)) * int(np.ceil(image_h / block_size))
    if not corrs or total == 0:
        return 0.0
    df = _assign_blocks(correspondences_to_frame(corrs), image_w, image_h, block_size)
    occupied = len(df[['bx', 'by']].drop_duplicates())
    return occupied / total
