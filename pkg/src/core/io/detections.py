"""
Detection Streams
CSV ingestion and export of camera and radar detections.

camera: frame_id,timestamp,u,v,object_id,class
radar:  frame_id,timestamp,x,y,z,object_id,doppler

Empty optional fields mean "absent".
"""

import logging
import math
import os
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import pandas as pd

from shared.errors import InvalidArgumentError, ParseError, SchemaError, ValidationError
from shared.models import CameraDetection, Detection, PixelPoint, RadarDetection, RadarPoint

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CAMERA_COLUMNS = ['frame_id', 'timestamp', 'u', 'v', 'object_id', 'class']
RADAR_COLUMNS = ['frame_id', 'timestamp', 'x', 'y', 'z', 'object_id', 'doppler']
SCHEMAS: Dict[str, List[str]] = {'camera': CAMERA_COLUMNS, 'radar': RADAR_COLUMNS}

# Data row i (0-based) sits on this line of the file
FIRST_DATA_LINE = 2


def format_float(value: Optional[float]) -> str:
    """Shortest decimal that parses back to the same double; '' for None."""
    if value is None:
        return ''
    return repr(float(value))


def _schema(kind: str) -> List[str]:
    if kind not in SCHEMAS:
        raise InvalidArgumentError(f"Unknown detection kind '{kind}', expected one of {sorted(SCHEMAS)}")
    return SCHEMAS[kind]


class _RowParser:
    """Typed field access for one CSV row, reporting the offending line and column."""

    def __init__(self, row: pd.Series, line: int):
        self.row = row
        self.line = line

    def _convert(self, column: str, cast: Callable, type_name: str):
        text = self.row[column].strip()
        try:
            return cast(text)
        except ValueError:
            raise ParseError(f"expected {type_name}, got '{text}'", line=self.line, column=column)

    def integer(self, column: str) -> int:
        return self._convert(column, int, "an integer")

    def real(self, column: str) -> float:
        value = self._convert(column, float, "a number")
        if not math.isfinite(value):
            raise ValidationError(f"value must be finite, got {value}", line=self.line, column=column)
        return value

    def optional_integer(self, column: str) -> Optional[int]:
        return self.integer(column) if self.row[column].strip() else None

    def optional_real(self, column: str) -> Optional[float]:
        return self.real(column) if self.row[column].strip() else None

    def optional_text(self, column: str) -> Optional[str]:
        return self.row[column].strip() or None


def _camera_row(p: _RowParser) -> CameraDetection:
    return CameraDetection(
        frame_id=p.integer('frame_id'),
        timestamp=p.real('timestamp'),
        center=PixelPoint(p.real('u'), p.real('v')),
        object_id=p.optional_integer('object_id'),
        class_label=p.optional_text('class'),
    )


def _radar_row(p: _RowParser) -> RadarDetection:
    return RadarDetection(
        frame_id=p.integer('frame_id'),
        timestamp=p.real('timestamp'),
        point=RadarPoint(p.real('x'), p.real('y'), p.real('z')),
        object_id=p.optional_integer('object_id'),
        doppler=p.optional_real('doppler'),
    )


def read_detections(path: PathLike, kind: str) -> List[Detection]:
    """
    Parse a detection CSV in row order.

    Args:
        path: CSV file
        kind: 'camera' or 'radar'

    Returns:
        List of CameraDetection or RadarDetection

    Raises:
        SchemaError: Missing or mismatched header
        ParseError: The file is not UTF-8 CSV, or a field is not of the expected type
        ValidationError: A row violates a detection invariant (e.g. frame_id < 0)
    """
    columns = _schema(kind)
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, skip_blank_lines=False, encoding='utf-8')
    except pd.errors.EmptyDataError:
        raise SchemaError(f"missing header, expected {','.join(columns)}", line=1)
    except pd.errors.ParserError as e:
        raise ParseError(f"malformed CSV: {e}")
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8 text: {e}")

    header = [c.strip() for c in df.columns]
    if header != columns:
        raise SchemaError(f"header {','.join(header)} does not match {','.join(columns)}", line=1)
    df.columns = header
    df = df.fillna('')

    build = _camera_row if kind == 'camera' else _radar_row
    detections = []
    for i, (_, row) in enumerate(df.iterrows()):
        # Blank lines stay in the frame so positions match file lines
        if not ''.join(row.values).strip():
            continue
        line = i + FIRST_DATA_LINE
        parser = _RowParser(row, line)
        try:
            detections.append(build(parser))
        except InvalidArgumentError as e:
            raise ValidationError(str(e), line=line)

    logger.info("Read %d %s detections from %s", len(detections), kind, path)
    return detections


def _camera_record(d: CameraDetection) -> Dict[str, str]:
    return {
        'frame_id': str(d.frame_id),
        'timestamp': format_float(d.timestamp),
        'u': format_float(d.center.u),
        'v': format_float(d.center.v),
        'object_id': '' if d.object_id is None else str(d.object_id),
        'class': d.class_label or '',
    }


def _radar_record(d: RadarDetection) -> Dict[str, str]:
    return {
        'frame_id': str(d.frame_id),
        'timestamp': format_float(d.timestamp),
        'x': format_float(d.point.x),
        'y': format_float(d.point.y),
        'z': format_float(d.point.z),
        'object_id': '' if d.object_id is None else str(d.object_id),
        'doppler': format_float(d.doppler),
    }


def write_detections(detections: Sequence[Detection], path: PathLike, kind: str) -> None:
    """Write detections in the schema of `kind`, one row each, in the given order."""
    columns = _schema(kind)
    to_record = _camera_record if kind == 'camera' else _radar_record
    df = pd.DataFrame([to_record(d) for d in detections], columns=columns)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    df.to_csv(path, index=False, lineterminator='\n')
    logger.info("Wrote %d %s detections to %s", len(df), kind, path)
