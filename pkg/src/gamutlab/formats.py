"""Raster image and measurement-file formats.

Binary portable pixmap (P6, maxval 255) for images and a CGATS-style
text grammar for measurement data. Both parsers report positioned
errors: byte offsets for PPM, 1-based line numbers for CGATS. The
grammar details live in docs/formats.md.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .colorspace import LabColor, RGBColor
from .errors import DomainError, ParseError


@dataclass
class RasterImage:
    """Row-major float image, shape (height, width, 3), sRGB-encoded [0, 1]."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError(f"image dimensions {self.width}x{self.height} must be positive")
        self.pixels = np.asarray(self.pixels, dtype=float)
        if self.pixels.shape != (self.height, self.width, 3):
            raise DomainError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )

    def pixel(self, row: int, col: int) -> RGBColor:
        r, g, b = self.pixels[row, col]
        return RGBColor(float(r), float(g), float(b))

    @classmethod
    def filled(cls, width: int, height: int, color: RGBColor) -> "RasterImage":
        px = np.empty((height, width, 3), dtype=float)
        px[..., 0] = color.r
        px[..., 1] = color.g
        px[..., 2] = color.b
        return cls(width, height, px)


@dataclass
class MeasurementSet:
    """Device RGB -> measured Lab pairs plus free-form metadata."""

    entries: list[tuple[RGBColor, LabColor]]
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.entries:
            raise DomainError("measurement set must contain at least one entry")


def read_ppm(data: bytes) -> RasterImage:
    """Parse a binary portable pixmap (P6, maxval 255)."""
    if not isinstance(data, (bytes, bytearray)):
        raise ParseError("expected bytes")
    if data[:2] != b"P6":
        raise ParseError("not a P6 portable pixmap", 0)
    pos = 2
    tokens = []
    token_offsets = []
    while len(tokens) < 3:
        if pos >= len(data):
            raise ParseError("unexpected end of header", pos)
        ch = data[pos:pos + 1]
        if ch.isspace():
            pos += 1
        elif ch == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            start = pos
            while pos < len(data) and not data[pos:pos + 1].isspace():
                pos += 1
            tok = data[start:pos]
            if not tok.isdigit():
                raise ParseError(f"expected integer, got {tok!r}", start)
            tokens.append(int(tok))
            token_offsets.append(start)
    width, height, maxval = tokens
    if width < 1 or height < 1:
        raise ParseError(f"bad dimensions {width}x{height}", token_offsets[0])
    if maxval != 255:
        raise ParseError(f"unsupported maxval {maxval}, only 255", token_offsets[2])
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ParseError("missing whitespace after maxval", pos)
    pos += 1
    need = width * height * 3
    raw = data[pos:pos + need]
    if len(raw) < need:
        raise ParseError(f"truncated pixel data, need {need} bytes got {len(raw)}", pos + len(raw))
    px = np.frombuffer(raw, dtype=np.uint8).astype(float).reshape(height, width, 3) / 255.0
    return RasterImage(width, height, px)


def write_ppm(img: RasterImage) -> bytes:
    """Serialize to canonical P6: 'P6\\n{w} {h}\\n255\\n' + raw samples."""
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    samples = np.clip(np.rint(img.pixels * 255.0), 0, 255).astype(np.uint8)
    return header + samples.tobytes()


REQUIRED_CGATS_COLUMNS = ("RGB_R", "RGB_G", "RGB_B", "LAB_L", "LAB_A", "LAB_B")


def parse_cgats(text: str) -> MeasurementSet:
    """Parse the CGATS-style measurement grammar.

    Requires RGB_R/RGB_G/RGB_B (0-255 scale) and LAB_L/LAB_A/LAB_B format
    columns; extra columns are tolerated and their names recorded in
    metadata. Keyword lines outside the blocks become metadata entries.
    Accepts LF and CRLF line endings.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")

    columns: list[str] | None = None
    metadata: dict[str, str] = {}
    entries: list[tuple[RGBColor, LabColor]] = []
    in_format = False
    in_data = False
    saw_data_block = False

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "BEGIN_DATA_FORMAT":
            in_format = True
            columns = []
            continue
        if line == "END_DATA_FORMAT":
            if not in_format:
                raise ParseError("END_DATA_FORMAT without BEGIN_DATA_FORMAT", lineno)
            in_format = False
            for required in REQUIRED_CGATS_COLUMNS:
                if required not in columns:
                    raise ParseError(f"missing required column {required}", lineno)
            continue
        if line == "BEGIN_DATA":
            if columns is None or in_format:
                raise ParseError("BEGIN_DATA before a complete data format", lineno)
            in_data = True
            saw_data_block = True
            continue
        if line == "END_DATA":
            if not in_data:
                raise ParseError("END_DATA without BEGIN_DATA", lineno)
            in_data = False
            continue
        if in_format:
            columns.extend(line.split())
            continue
        if in_data:
            fields = line.split()
            if len(fields) != len(columns):
                raise ParseError(
                    f"row has {len(fields)} fields, format declares {len(columns)}", lineno
                )
            row: dict[str, float] = {}
            for name, value in zip(columns, fields):
                if name not in REQUIRED_CGATS_COLUMNS:
                    continue
                try:
                    row[name] = float(value)
                except ValueError:
                    raise ParseError(f"non-numeric field {value!r} in column {name}", lineno)
            for chan in ("RGB_R", "RGB_G", "RGB_B"):
                if not 0.0 <= row[chan] <= 255.0:
                    raise ParseError(f"{chan}={row[chan]} outside [0, 255]", lineno)
            device = RGBColor(row["RGB_R"] / 255.0, row["RGB_G"] / 255.0, row["RGB_B"] / 255.0)
            measured = LabColor(row["LAB_L"], row["LAB_A"], row["LAB_B"])
            entries.append((device, measured))
            continue
        # keyword line: KEY or KEY value (value may be quoted)
        key, _, value = line.partition(" ")
        metadata[key] = value.strip().strip('"')

    if in_format:
        raise ParseError("unterminated BEGIN_DATA_FORMAT", len(lines))
    if in_data:
        raise ParseError("unterminated BEGIN_DATA", len(lines))
    if columns is None:
        raise ParseError("missing BEGIN_DATA_FORMAT block", len(lines))
    if not saw_data_block or not entries:
        raise ParseError("no data rows", len(lines))

    extras = [c for c in columns if c not in REQUIRED_CGATS_COLUMNS]
    if extras:
        metadata.setdefault("EXTRA_COLUMNS", " ".join(extras))
    return MeasurementSet(entries, metadata)
