"""8-bit PGM image I/O (binary P5 and ASCII P2 on read, canonical P5 on write).

Grey values map to [0, 1] by v / 255 on read; writing clamps to [0, 1] and
rounds half away from zero. Files written here round-trip byte-identically.
"""

import numpy as np


def _tokenize_header(data, n_tokens):
    """Return (tokens, offset past the single whitespace after the last one)."""
    tokens = []
    pos = 0
    while len(tokens) < n_tokens:
        if pos >= len(data):
            raise ValueError("truncated PGM header")
        ch = data[pos : pos + 1]
        if ch in b" \t\r\n":
            pos += 1
        elif ch == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        else:
            end = pos
            while end < len(data) and data[end : end + 1] not in b" \t\r\n#":
                end += 1
            tokens.append(data[pos:end])
            pos = end
    if pos >= len(data):
        raise ValueError("truncated PGM file")
    if data[pos : pos + 1] not in b" \t\r\n":
        raise ValueError("malformed PGM header: missing whitespace after maxval")
    return tokens, pos + 1


def read_pgm(path):
    """Read a P5/P2 PGM file as a (H, W) uint8 array of raw grey levels."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] not in (b"P5", b"P2"):
        raise ValueError(f"{path}: not a PGM file (magic {data[:2]!r})")
    magic = data[:2]
    tokens, offset = _tokenize_header(data[2:], 3)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError as exc:
        raise ValueError(f"{path}: malformed PGM header") from exc
    if width < 1 or height < 1:
        raise ValueError(f"{path}: invalid dimensions {width}x{height}")
    if not 0 < maxval <= 255:
        raise ValueError(f"{path}: only 8-bit PGM supported, maxval={maxval}")
    body = data[2 + offset :]
    if magic == b"P5":
        expected = width * height
        if len(body) < expected:
            raise ValueError(f"{path}: truncated pixel data")
        levels = np.frombuffer(body[:expected], dtype=np.uint8)
    else:
        lines = [line.split(b"#", 1)[0] for line in body.splitlines()]
        values = b" ".join(lines).split()
        if len(values) < width * height:
            raise ValueError(f"{path}: truncated pixel data")
        levels = np.array([int(v) for v in values[: width * height]], dtype=np.int64)
        if levels.min() < 0 or levels.max() > maxval:
            raise ValueError(f"{path}: pixel value out of range")
        levels = levels.astype(np.uint8)
    return levels.reshape(height, width)


def write_pgm(path, levels):
    """Write raw uint8 grey levels as canonical binary P5."""
    levels = np.asarray(levels)
    if levels.dtype != np.uint8 or levels.ndim != 2:
        raise ValueError("levels must be a 2-D uint8 array")
    height, width = levels.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(levels.tobytes())


def read_image(path):
    """Read a PGM file as a float image with grey values in [0, 1]."""
    return read_pgm(path).astype(np.float64) / 255.0


def quantize(img):
    """Clamp to [0, 1] and round half away from zero to 8-bit levels."""
    clamped = np.clip(np.asarray(img, dtype=np.float64), 0.0, 1.0)
    return np.floor(clamped * 255.0 + 0.5).astype(np.uint8)


def write_image(path, img):
    """Write a float image (clamped, quantized) as binary P5."""
    write_pgm(path, quantize(img))


def read_known_mask(path):
    """Read a mask PGM; any level >= 128 counts as a known pixel."""
    return read_pgm(path) >= 128


def write_known_mask(path, known):
    """Write a boolean known mask as 255 (known) / 0 (unknown)."""
    known = np.asarray(known)
    if known.dtype != np.bool_:
        raise ValueError("known mask must be boolean")
    write_pgm(path, np.where(known, 255, 0).astype(np.uint8))
