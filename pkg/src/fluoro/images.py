"""Minimal PPM (P6) and PFM image I/O.

Both formats are written with fixed headers and row order so identical
pixel data produces byte-identical files, which the deterministic-output
tests rely on.  PFM rows are stored bottom-to-top with a negative scale
(little-endian), following the common convention.
"""

from __future__ import annotations

import numpy as np

from .spectral import SpectralError


def write_ppm(path, rgb: np.ndarray) -> None:
    rgb = np.asarray(rgb)
    if rgb.dtype != np.uint8 or rgb.ndim != 3 or rgb.shape[2] != 3:
        raise SpectralError("PPM writer expects an HxWx3 uint8 array")
    h, w = rgb.shape[:2]
    with open(path, "wb") as f:
        f.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        f.write(rgb.tobytes())


def ppm_bytes(rgb: np.ndarray) -> bytes:
    rgb = np.asarray(rgb)
    if rgb.dtype != np.uint8 or rgb.ndim != 3 or rgb.shape[2] != 3:
        raise SpectralError("PPM writer expects an HxWx3 uint8 array")
    h, w = rgb.shape[:2]
    return f"P6\n{w} {h}\n255\n".encode("ascii") + rgb.tobytes()


def _read_token(f) -> bytes:
    """Next whitespace-delimited token, skipping '#' comments."""
    tok = b""
    while True:
        c = f.read(1)
        if not c:
            break
        if c == b"#":
            f.readline()
            continue
        if c.isspace():
            if tok:
                break
            continue
        tok += c
    if not tok:
        raise SpectralError("truncated image header")
    return tok


def read_ppm(path) -> np.ndarray:
    with open(path, "rb") as f:
        if _read_token(f) != b"P6":
            raise SpectralError(f"{path}: not a binary PPM (P6) file")
        w = int(_read_token(f))
        h = int(_read_token(f))
        maxval = int(_read_token(f))
        if maxval != 255:
            raise SpectralError(f"{path}: unsupported maxval {maxval}")
        data = f.read(w * h * 3)
    if len(data) != w * h * 3:
        raise SpectralError(f"{path}: truncated pixel data")
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w, 3)


def write_pfm(path, img: np.ndarray) -> None:
    img = np.asarray(img, dtype=np.float32)
    if img.ndim == 2:
        header = "Pf"
        h, w = img.shape
    elif img.ndim == 3 and img.shape[2] == 3:
        header = "PF"
        h, w = img.shape[:2]
    else:
        raise SpectralError("PFM writer expects HxW or HxWx3 float data")
    with open(path, "wb") as f:
        f.write(f"{header}\n{w} {h}\n-1.0\n".encode("ascii"))
        f.write(np.flipud(img).astype("<f4").tobytes())


def read_pfm(path) -> np.ndarray:
    with open(path, "rb") as f:
        header = _read_token(f)
        if header not in (b"PF", b"Pf"):
            raise SpectralError(f"{path}: not a PFM file")
        w = int(_read_token(f))
        h = int(_read_token(f))
        scale = float(_read_token(f))
        channels = 3 if header == b"PF" else 1
        count = w * h * channels
        dtype = "<f4" if scale < 0 else ">f4"
        data = np.frombuffer(f.read(count * 4), dtype=dtype)
    if data.size != count:
        raise SpectralError(f"{path}: truncated pixel data")
    shape = (h, w, 3) if channels == 3 else (h, w)
    return np.flipud(data.reshape(shape)).astype(np.float32)
