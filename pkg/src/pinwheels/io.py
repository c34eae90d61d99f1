"""
File formats: CSV tables, PGM/PNG images, JSON documents and SVG polylines.

Floats are written with ``repr`` so a rerun with the same inputs is
byte-identical and round-trips exactly.
"""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .operators import CircleFunction


def _f(x):
    return repr(float(x))


def _write_rows(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def write_circle_csv(path, f):
    return _write_rows(path, ["phi", "re", "im"],
                       ([_f(p), _f(v.real), _f(v.imag)] for p, v in zip(f.phi, f.samples)))


def read_circle_csv(path):
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) != {"phi", "re", "im"}:
        raise ValueError(f"{path}: expected columns phi, re, im")
    phi = np.array([float(r["phi"]) for r in rows])
    samples = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    expected = np.arange(phi.size) * np.pi / phi.size
    if not np.allclose(phi, expected, atol=1e-12):
        raise ValueError(f"{path}: phi column is not the uniform grid j*pi/M")
    return CircleFunction(samples)


def write_fan_csv(path, curves, s):
    rows = ([str(cid), _f(sv), _f(p[0]), _f(p[1])]
            for cid, c in enumerate(curves) for sv, p in zip(s, c))
    return _write_rows(path, ["curve_id", "s", "x1", "x2"], rows)


def write_fan_svg(path, curves, size=400, margin=10):
    pts = np.concatenate(curves)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    scale = (size - 2 * margin) / max(float((hi - lo).max()), 1e-12)
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">']
    for c in curves:
        # svg y grows downward
        xy = " ".join(f"{margin + (p[0] - lo[0]) * scale:.3f},{size - margin - (p[1] - lo[1]) * scale:.3f}"
                      for p in c)
        lines.append(f'<polyline fill="none" stroke="black" stroke-width="1" points="{xy}"/>')
    lines.append("</svg>")
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_field_csv(path, fld):
    x1, x2 = fld.grid.mesh()
    v = fld.values
    rows = ([_f(a), _f(b), _f(c.real), _f(c.imag)]
            for a, b, c in zip(x1.ravel(), x2.ravel(), v.ravel()))
    return _write_rows(path, ["x1", "x2", "re", "im"], rows)


def write_orientation_csv(path, omap):
    x1, x2 = omap.grid.mesh()
    rows = ([_f(a), _f(b), _f(p), _f(s)] for a, b, p, s in
            zip(x1.ravel(), x2.ravel(), omap.preferred.ravel(), omap.selectivity.ravel()))
    return _write_rows(path, ["x1", "x2", "preferred", "selectivity"], rows)


def write_spectrum_csv(path, spec):
    rows = [["0.0", _f(spec.dc)]] + [[_f(k), _f(p)] for k, p in zip(spec.bin_centers, spec.power)]
    return _write_rows(path, ["bin_center_k", "power"], rows)


def pinwheels_to_json(pinwheels):
    return [{"x": p.x, "y": p.y, "charge": p.charge} for p in pinwheels]


def dumps(obj):
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.write_text(dumps(obj))
    return path


def grid_to_image(a):
    """``[i_x1, i_x2]`` array to image layout (top row = largest ``x2``)."""
    return np.asarray(a).T[::-1]


def to_gray8(a):
    """Linear min-max map to 0..255. Returns ``(image, lo, hi)``."""
    a = np.asarray(a, dtype=float)
    lo, hi = float(a.min()), float(a.max())
    if hi > lo:
        g = np.floor((a - lo) / (hi - lo) * 255.0 + 0.5)
    else:
        g = np.zeros_like(a)
    return g.astype(np.uint8), lo, hi


def write_pgm(path, img):
    img = np.asarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("PGM needs a 2-D image")
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(np.ascontiguousarray(img).tobytes())
    return path


def read_pgm(path):
    data = Path(path).read_bytes()
    parts = data.split(maxsplit=4)
    if parts[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM")
    w, h = int(parts[1]), int(parts[2])
    return np.frombuffer(parts[4][: w * h], dtype=np.uint8).reshape(h, w)


def write_png(path, img):
    import matplotlib.image as mimage

    img = np.asarray(img, dtype=np.uint8)
    path = Path(path)
    if img.ndim == 2:
        # equal channels keep gray levels exact; a colormap lookup can shift them by one
        img = np.repeat(img[..., None], 3, axis=2)
    mimage.imsave(path, img, format="png", metadata={"Software": None})
    return path


def read_png(path, gray=False):
    """8-bit pixels; an opaque alpha channel is dropped, ``gray`` keeps one channel."""
    import matplotlib.image as mimage

    a = np.floor(mimage.imread(str(path)) * 255.0 + 0.5).astype(np.uint8)
    if a.ndim == 3 and a.shape[2] == 4 and np.all(a[..., 3] == 255):
        a = a[..., :3]
    if gray and a.ndim == 3:
        a = a[..., 0]
    return a


def sha256_file(path):
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def sha256_array(a):
    a = np.ascontiguousarray(a)
    h = hashlib.sha256(str(a.dtype).encode() + str(a.shape).encode())
    h.update(a.tobytes())
    return h.hexdigest()
