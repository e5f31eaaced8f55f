import numpy as np
import pytest

from gamutlab import (
    DomainError,
    ParseError,
    RasterImage,
    RGBColor,
    parse_cgats,
    read_ppm,
    write_ppm,
)

from .conftest import cgats_text


def test_read_single_white_pixel():
    img = read_ppm(b"P6\n1 1\n255\n\xff\xff\xff")
    assert (img.width, img.height) == (1, 1)
    assert np.allclose(img.pixels[0, 0], [1.0, 1.0, 1.0])


def test_rejects_p3():
    with pytest.raises(ParseError):
        read_ppm(b"P3\n1 1\n255\n255 255 255\n")


def test_header_comments_parse_identically():
    body = bytes(range(12))
    plain = b"P6\n2 2\n255\n" + body
    commented = b"P6\n# made by hand\n2 # width\n2\n# maxval next\n255\n" + body
    a = read_ppm(plain)
    b = read_ppm(commented)
    assert np.array_equal(a.pixels, b.pixels)


def test_round_trip_quantization(rng):
    px = rng.random((8, 8, 3))
    img = RasterImage(8, 8, px)
    back = read_ppm(write_ppm(img))
    assert np.abs(back.pixels - px).max() <= 1.0 / 255.0 + 1e-12


def test_canonical_header_and_length():
    img = RasterImage(4, 2, np.zeros((2, 4, 3)))
    data = write_ppm(img)
    assert data.startswith(b"P6\n")
    header = b"P6\n4 2\n255\n"
    assert data[: len(header)] == header
    assert len(data) == len(header) + 3 * 4 * 2


def test_truncated_data_positions_error():
    with pytest.raises(ParseError) as exc:
        read_ppm(b"P6\n2 2\n255\n\x00\x00\x00")
    assert exc.value.position is not None


def test_bad_maxval():
    with pytest.raises(ParseError):
        read_ppm(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")


def test_raster_image_invariants():
    with pytest.raises(DomainError):
        RasterImage(0, 0, np.zeros((0, 0, 3)))
    with pytest.raises(DomainError):
        RasterImage(2, 2, np.zeros((2, 3, 3)))


def test_cgats_minimal():
    ms = parse_cgats(cgats_text([(255, 255, 255, 100, 0, 0)]))
    assert len(ms.entries) == 1
    device, lab = ms.entries[0]
    assert (device.r, device.g, device.b) == (1.0, 1.0, 1.0)
    assert (lab.l, lab.a, lab.b) == (100.0, 0.0, 0.0)
    assert ms.metadata["ORIGINATOR"] == "gamutlab tests"


def test_cgats_missing_column_named():
    text = "\n".join([
        "BEGIN_DATA_FORMAT",
        "RGB_R RGB_G RGB_B LAB_L LAB_A",
        "END_DATA_FORMAT",
        "BEGIN_DATA",
        "0 0 0 0 0",
        "END_DATA",
    ])
    with pytest.raises(ParseError, match="LAB_B"):
        parse_cgats(text)


def test_cgats_crlf_equivalent():
    entries = [(0, 0, 0, 0, 0, 0), (128, 64, 32, 40, 10, -5)]
    lf = parse_cgats(cgats_text(entries, line_ending="\n"))
    crlf = parse_cgats(cgats_text(entries, line_ending="\r\n"))
    assert lf.entries == crlf.entries
    assert lf.metadata == crlf.metadata


def test_cgats_row_arity_error_carries_line():
    text = cgats_text([(0, 0, 0, 0, 0, 0)]).replace("0 0 0 0 0 0", "0 0 0 0 0")
    with pytest.raises(ParseError) as exc:
        parse_cgats(text)
    assert "declares" in str(exc.value)
    assert exc.value.position == 8


def test_cgats_non_numeric_field():
    text = cgats_text([(0, 0, 0, 0, 0, 0)]).replace("0 0 0 0 0 0", "0 0 x 0 0 0")
    with pytest.raises(ParseError, match="non-numeric"):
        parse_cgats(text)


def test_cgats_extra_columns_preserved():
    ms = parse_cgats(cgats_text([(10, 20, 30, 5, 1, -1)], extra_columns=True))
    assert ms.metadata["EXTRA_COLUMNS"] == "SAMPLE_ID"
    assert len(ms.entries) == 1


def test_cgats_rgb_range_checked():
    with pytest.raises(ParseError, match="RGB_R"):
        parse_cgats(cgats_text([(300, 0, 0, 0, 0, 0)]))


def test_cgats_no_data_rows():
    text = "\n".join([
        "BEGIN_DATA_FORMAT",
        "RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B",
        "END_DATA_FORMAT",
        "BEGIN_DATA",
        "END_DATA",
    ])
    with pytest.raises(ParseError, match="no data rows"):
        parse_cgats(text)


def test_parsers_total_over_garbage(rng):
    # every input yields a result or a positioned error, never a crash
    from gamutlab import MeasurementSet

    tokens = ["BEGIN_DATA", "END_DATA", "BEGIN_DATA_FORMAT", "END_DATA_FORMAT",
              "RGB_R", "LAB_L", "0", "1.5", "x", '"q"', "#c", ""]
    for _ in range(300):
        n = rng.integers(0, 12)
        lines = [
            " ".join(tokens[i] for i in rng.integers(0, len(tokens), rng.integers(0, 6)))
            for _ in range(n)
        ]
        text = "\n".join(lines)
        try:
            result = parse_cgats(text)
            assert isinstance(result, MeasurementSet)
        except ParseError:
            pass
    for _ in range(300):
        blob = bytes(rng.integers(0, 256, rng.integers(0, 64), dtype=np.uint8))
        try:
            read_ppm(b"P6" + blob)
        except ParseError:
            pass
