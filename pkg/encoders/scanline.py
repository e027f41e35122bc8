"""
Scanline encoding: fixed oriented lines read image pixels bottom-up as a
time-varying current into fast LIF encoder neurons, one neuron per line.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from network.topology import SpikeTrain

logger = logging.getLogger(__name__)

Point = Tuple[float, float]

# t-parameter slack when deciding that the traversal reached the segment end
_EPS = 1e-12


@dataclass(frozen=True)
class ScanlineEncoderParams:
    tau_m: float = 3.0
    resistance: float = 10.0
    theta: float = 1.0
    reset: float = 0.0
    refractory: float = 1.0
    duration: float = 9.0

    def __post_init__(self):
        if self.tau_m <= 0 or self.resistance <= 0 or self.duration <= 0:
            raise ValueError("tau_m, resistance and duration must be positive")
        if self.theta <= self.reset:
            raise ValueError("theta must exceed the reset potential")
        if self.refractory < 0:
            raise ValueError("refractory period must be non-negative")


@dataclass(frozen=True)
class Scanline:
    """A line through (x0, y0) in pixel units (x = column, y = row downwards), angle from the horizontal."""

    angle: float
    x0: float
    y0: float

    @property
    def direction(self) -> Point:
        # angles open anticlockwise on screen, so rows run against sin
        return math.cos(self.angle), -math.sin(self.angle)


@dataclass
class ScanlineSet:
    lines: Tuple[Scanline, ...]
    width: int
    height: int
    params: ScanlineEncoderParams = field(default_factory=ScanlineEncoderParams)
    _tables: Dict[float, np.ndarray] = field(default_factory=dict, init=False, repr=False, compare=False)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def pixel_paths(self) -> List[List[Tuple[int, int]]]:
        return [line_pixels(line, self.width, self.height) for line in self.lines]

    def step_table(self, dt: float) -> np.ndarray:
        """
        Flat pixel index read by each line at each step of the scan window,
        shape (steps, n_lines); -1 where a line misses the image.
        """
        key = round(dt, 12)
        if key not in self._tables:
            n_steps = int(round(self.params.duration / dt))
            table = np.full((n_steps, self.n_lines), -1, dtype=int)
            t = np.arange(n_steps) * dt
            for i, path in enumerate(self.pixel_paths()):
                if not path:
                    continue
                flat = np.array([r * self.width + c for r, c in path])
                slot = self.params.duration / len(path)
                pos = np.minimum(np.floor(t / slot + 1e-9).astype(int), len(path) - 1)
                table[:, i] = flat[pos]
            self._tables[key] = table
        return self._tables[key]

    def to_dict(self) -> Dict:
        return {
            "width": self.width,
            "height": self.height,
            "lines": [[l.angle, l.x0, l.y0] for l in self.lines],
            "params": self.params.__dict__.copy(),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ScanlineSet":
        return cls(
            lines=tuple(Scanline(*map(float, l)) for l in data["lines"]),
            width=int(data["width"]),
            height=int(data["height"]),
            params=ScanlineEncoderParams(**data.get("params", {})),
        )


def scanline_generate(n_s: int, width: int, height: int, rng: np.random.Generator,
                      params: Optional[ScanlineEncoderParams] = None) -> ScanlineSet:
    """Angles ~ U[0, pi); intercept points ~ Normal(image centre, width / 4) in both coordinates."""
    if n_s < 1:
        raise ValueError(f"Need at least one scanline (got {n_s})")
    angles = rng.uniform(0.0, math.pi, size=n_s)
    x0 = rng.normal(width / 2.0, width / 4.0, size=n_s)
    y0 = rng.normal(height / 2.0, width / 4.0, size=n_s)
    lines = tuple(Scanline(float(a), float(x), float(y)) for a, x, y in zip(angles, x0, y0))
    misses = sum(1 for line in lines if clip_line(line, width, height) is None)
    if misses:
        logger.debug("%d of %d scanlines miss the %dx%d image and stay silent", misses, n_s, width, height)
    return ScanlineSet(lines=lines, width=width, height=height,
                       params=params or ScanlineEncoderParams())


def clip_line(line: Scanline, width: int, height: int) -> Optional[Tuple[Point, Point]]:
    """Liang-Barsky clip of the infinite line to the image box; None when it misses."""
    dx, dy = line.direction
    s_lo, s_hi = -math.inf, math.inf
    for p, d, limit in ((line.x0, dx, width), (line.y0, dy, height)):
        if abs(d) < 1e-15:
            if not 0.0 <= p <= limit:
                return None
            continue
        a, b = (0.0 - p) / d, (limit - p) / d
        s_lo, s_hi = max(s_lo, min(a, b)), min(s_hi, max(a, b))
    if s_hi - s_lo <= 1e-12:
        return None
    return ((line.x0 + s_lo * dx, line.y0 + s_lo * dy),
            (line.x0 + s_hi * dx, line.y0 + s_hi * dy))


def _start_cell(coord: float, step: int, size: int) -> int:
    cell = math.floor(coord)
    # sitting on a cell boundary and moving backwards means starting in the lower cell
    if step < 0 and coord == cell:
        cell -= 1
    return min(max(cell, 0), size - 1)


def line_pixels(line: Scanline, width: int, height: int) -> List[Tuple[int, int]]:
    """
    (row, col) of every pixel the line crosses, from the bottom of the image
    upwards (left to right for a horizontal line). Grid traversal after
    Amanatides and Woo.
    """
    segment = clip_line(line, width, height)
    if segment is None:
        return []
    a, b = segment
    # bottom = larger row index
    if (a[1], -a[0]) < (b[1], -b[0]):
        a, b = b, a
    (x, y), (x1, y1) = a, b
    dx, dy = x1 - x, y1 - y

    step_x = 1 if dx > 0 else -1 if dx < 0 else 0
    step_y = -1 if dy < 0 else 0
    cx, cy = _start_cell(x, step_x, width), _start_cell(y, step_y, height)

    if step_x:
        boundary = cx + 1 if step_x > 0 else cx
        t_max_x, t_delta_x = (boundary - x) / dx, 1.0 / abs(dx)
    else:
        t_max_x, t_delta_x = math.inf, math.inf
    if step_y:
        t_max_y, t_delta_y = (cy - y) / dy, 1.0 / abs(dy)
    else:
        t_max_y, t_delta_y = math.inf, math.inf

    pixels = [(cy, cx)]
    while True:
        if step_x and step_y and abs(t_max_x - t_max_y) < _EPS:
            # through a corner: cover the side cell as well as the diagonal one
            t = min(t_max_x, t_max_y)
            if t >= 1.0 - _EPS:
                break
            if 0 <= cx + step_x < width:
                pixels.append((cy, cx + step_x))
            cx, t_max_x = cx + step_x, t_max_x + t_delta_x
            cy, t_max_y = cy + step_y, t_max_y + t_delta_y
        elif t_max_x < t_max_y:
            t, cx, t_max_x = t_max_x, cx + step_x, t_max_x + t_delta_x
        else:
            t, cy, t_max_y = t_max_y, cy + step_y, t_max_y + t_delta_y
        if t >= 1.0 - _EPS or not (0 <= cx < width and 0 <= cy < height):
            break
        pixels.append((cy, cx))
    return pixels


def scanline_encode(image: np.ndarray, lines: ScanlineSet, dt: float = 0.1) -> List[SpikeTrain]:
    """
    Integrate each line's encoder neuron over the scan window. A normalised
    pixel value p drives a current of p nA; spikes are stamped at the end of
    the step in which the potential reaches threshold.
    """
    image = np.asarray(image, dtype=float)
    if image.shape != (lines.height, lines.width):
        raise ValueError(f"Image shape {image.shape} does not match scanlines ({lines.height}, {lines.width})")
    if image.size and (image.min() < 0.0 or image.max() > 1.0):
        raise ValueError("Scanline encoding expects pixel values normalised to [0, 1]")

    p = lines.params
    table = lines.step_table(dt)
    # index -1 reads the trailing zero
    pixels = np.append(image.ravel(), 0.0)
    currents = pixels[table]

    decay = math.exp(-dt / p.tau_m)
    refractory_steps = int(round(p.refractory / dt))
    u = np.full(lines.n_lines, p.reset)
    hold = np.zeros(lines.n_lines, dtype=int)
    trains: List[SpikeTrain] = [[] for _ in range(lines.n_lines)]

    for n in range(table.shape[0]):
        u = np.where(hold > 0, p.reset, u * decay + p.resistance * currents[n] * (1.0 - decay))
        hold = np.maximum(hold - 1, 0)
        fired = u >= p.theta
        for i in np.flatnonzero(fired):
            trains[i].append(float((n + 1) * dt))
        u = np.where(fired, p.reset, u)
        hold = np.where(fired, refractory_steps, hold)
    return trains
