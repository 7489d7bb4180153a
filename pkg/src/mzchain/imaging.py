"""Per-pixel dose maps for spatially inhomogeneous objects.

Each pixel of a transmissivity map is treated as an independent sub-beam:
the same chain configuration acts on every pixel separately and deposits
dose = r(eta_pixel) * I0 there.  Tuning the configuration so the absorption
peak sits on a chosen transmissivity lets one region of the object soak up
most of the radiation even when a direct beam would favour another.

Maps are read from CSV (rows of comma-separated reals in [0, 1]) or PGM
(P2/P5, pixel value v mapping to eta = v / maxval).  Dose maps are written
as CSV with a two-line ``#`` header recording the configuration, or as a
lossy P2 preview rescaled to maxval 255.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .chain import ChainConfig, effective_absorption
from .curves import TuneResult, tune_for_target

__all__ = [
    "MapFormatError",
    "BandError",
    "TransmissivityMap",
    "DoseMap",
    "load_map",
    "irradiate",
    "selective_plan",
    "direct_selectivity",
    "save_dose_csv",
    "save_dose_pgm",
    "BAND_HALF_WIDTH",
]

BAND_HALF_WIDTH = 0.02  # |eta - eta_bar| tolerance defining the target region


class MapFormatError(ValueError):
    """A map file failed to parse or holds values outside [0, 1]."""


class BandError(ValueError):
    """The target band is empty, or it swallows the whole map."""


@dataclass(frozen=True)
class TransmissivityMap:
    """Row-major grid of per-pixel transmissivities, all in [0, 1]."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("values must be a non-empty 2-d grid")
        if not np.all(np.isfinite(arr)):
            raise ValueError("transmissivities must be finite")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("transmissivities must lie in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class DoseMap:
    """Absorbed intensity per pixel, in the units of the input intensity i0."""

    values: np.ndarray
    n_steps: int
    phi: float
    i0: float

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("values must be a non-empty 2-d grid")
        if arr.min() < 0.0 or arr.max() > self.i0 * (1.0 + 1e-12):
            raise ValueError("doses must lie in [0, i0]")
        object.__setattr__(self, "values", arr)

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def config_used(self) -> tuple[int, float]:
        return (self.n_steps, self.phi)


def _parse_csv_map(text: str) -> np.ndarray:
    rows: list[list[float]] = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        row = []
        for colno, token in enumerate(line.split(","), start=1):
            try:
                value = float(token)
            except ValueError:
                raise MapFormatError(
                    f"row {lineno}, column {colno}: cannot parse {token.strip()!r} as a real"
                ) from None
            if not np.isfinite(value) or not 0.0 <= value <= 1.0:
                raise MapFormatError(
                    f"row {lineno}, column {colno}: value {value!r} outside [0, 1]"
                )
            row.append(value)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise MapFormatError(
                f"row {lineno}: expected {width} columns, found {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise MapFormatError("no data rows found")
    return np.array(rows, dtype=float)


def _parse_pgm_map(data: bytes) -> np.ndarray:
    # Tokenize the header; '#' starts a comment running to end of line.
    pos = 0

    def next_token() -> bytes:
        nonlocal pos
        while pos < len(data):
            c = data[pos : pos + 1]
            if c == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif c.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            if data[pos : pos + 1] == b"#":
                break
            pos += 1
        if start == pos:
            raise MapFormatError("truncated header")
        return data[start:pos]

    magic = next_token()
    if magic not in (b"P2", b"P5"):
        raise MapFormatError(f"unsupported magic {magic!r}; expected P2 or P5")
    try:
        width = int(next_token())
        height = int(next_token())
        maxval = int(next_token())
    except ValueError:
        raise MapFormatError("header fields must be integers") from None
    if width <= 0 or height <= 0:
        raise MapFormatError(f"dimensions must be positive, got {width}x{height}")
    if not 0 < maxval <= 65535:
        raise MapFormatError(f"maxval {maxval} outside [1, 65535]")

    count = width * height
    if magic == b"P2":
        tokens = data[pos:].split()
        if len(tokens) < count:
            raise MapFormatError(
                f"expected {count} pixel values, found {len(tokens)}"
            )
        try:
            flat = np.array([int(t) for t in tokens[:count]], dtype=np.int64)
        except ValueError:
            raise MapFormatError("pixel values must be integers") from None
    else:
        pos += 1  # the single whitespace byte after maxval
        bytes_per = 1 if maxval < 256 else 2
        raw = data[pos : pos + count * bytes_per]
        if len(raw) < count * bytes_per:
            raise MapFormatError(
                f"expected {count * bytes_per} raster bytes, found {len(raw)}"
            )
        dtype = np.uint8 if bytes_per == 1 else np.dtype(">u2")
        flat = np.frombuffer(raw, dtype=dtype, count=count).astype(np.int64)

    grid = flat.reshape(height, width)
    bad = np.argwhere(grid > maxval)
    if bad.size:
        i, j = bad[0]
        raise MapFormatError(
            f"row {i + 1}, column {j + 1}: pixel {grid[i, j]} exceeds maxval {maxval}"
        )
    return grid / float(maxval)


def load_map(path, fmt: str | None = None) -> TransmissivityMap:
    """Read a transmissivity map from a CSV or PGM file.

    When fmt is omitted it is inferred from the filename extension.  Parse
    failures, ragged rows, and out-of-range values raise MapFormatError
    naming the offending row and column (1-based).
    """
    p = Path(path)
    if fmt is None:
        suffix = p.suffix.lower()
        if suffix == ".csv":
            fmt = "csv"
        elif suffix == ".pgm":
            fmt = "pgm"
        else:
            raise MapFormatError(
                f"cannot infer map format from {p.name!r}; pass fmt='csv' or 'pgm'"
            )
    if fmt not in ("csv", "pgm"):
        raise ValueError(f"fmt must be 'csv' or 'pgm', got {fmt!r}")
    try:
        if fmt == "csv":
            values = _parse_csv_map(p.read_text(encoding="utf-8"))
        else:
            values = _parse_pgm_map(p.read_bytes())
    except MapFormatError as exc:
        raise MapFormatError(f"{p.name}: {exc}") from None
    return TransmissivityMap(values)


def irradiate(tmap: TransmissivityMap, config: ChainConfig) -> DoseMap:
    """Dose deposited in every pixel by one run of the configured chain.

    Pixels are independent sub-beams: dose = r(eta_pixel) * i0 with
    i0 = |input amplitude|^2.
    """
    i0 = abs(config.input_amplitude) ** 2
    r = effective_absorption(config.phi, config.n_steps, tmap.values)
    return DoseMap(values=r * i0, n_steps=config.n_steps, phi=config.phi, i0=i0)


def _band_masks(tmap: TransmissivityMap, eta_bar: float, band: float):
    inside = np.abs(tmap.values - eta_bar) <= band
    if not inside.any():
        raise BandError(
            f"no pixels within {band:g} of eta={eta_bar:g}; nothing to target"
        )
    if inside.all():
        raise BandError(
            f"every pixel lies within {band:g} of eta={eta_bar:g}; "
            "selectivity needs a non-empty complement"
        )
    return inside, ~inside


def selective_plan(
    tmap: TransmissivityMap,
    eta_bar: float,
    n_max: int,
    band: float = BAND_HALF_WIDTH,
) -> tuple[TuneResult, DoseMap, float]:
    """Tune the chain so its absorption peak sits on eta_bar, then irradiate.

    Returns the tuning result, the dose map, and the selectivity: mean dose
    over pixels with |eta - eta_bar| <= band divided by the mean dose over
    all other pixels (inf when the complement absorbs nothing).
    """
    inside, outside = _band_masks(tmap, eta_bar, band)
    tune = tune_for_target(eta_bar, n_max)
    dose = irradiate(tmap, ChainConfig(tune.phi, tune.n_steps))
    mean_in = float(dose.values[inside].mean())
    mean_out = float(dose.values[outside].mean())
    selectivity = np.inf if mean_out == 0.0 else mean_in / mean_out
    return tune, dose, float(selectivity)


def direct_selectivity(
    tmap: TransmissivityMap, eta_bar: float, band: float = BAND_HALF_WIDTH
) -> float:
    """Same dose ratio under direct illumination, where dose = (1 - eta) * i0."""
    inside, outside = _band_masks(tmap, eta_bar, band)
    mean_in = float((1.0 - tmap.values[inside]).mean())
    mean_out = float((1.0 - tmap.values[outside]).mean())
    return float(np.inf) if mean_out == 0.0 else mean_in / mean_out


def _format_real(x: float) -> str:
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def save_dose_csv(dose: DoseMap, path) -> None:
    """Write a dose map as CSV under a two-line header naming the configuration."""
    lines = [f"# N={dose.n_steps} phi={_format_real(dose.phi)}", f"# I0={_format_real(dose.i0)}"]
    for row in dose.values:
        lines.append(",".join(_format_real(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_dose_pgm(dose: DoseMap, path) -> None:
    """Write a dose map as ASCII PGM (P2), rescaled to maxval 255.

    The rescaling v = round(255 * dose / i0) quantizes the doses; use the
    CSV writer when the exact values matter.
    """
    v = np.rint(255.0 * dose.values / dose.i0).astype(int)
    v = np.clip(v, 0, 255)
    lines = [f"P2", f"{dose.width} {dose.height}", "255"]
    for row in v:
        lines.append(" ".join(str(int(x)) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
