"""Run configuration: the `key = value` document format and its validation.

Grammar: one `key = value` pair per line; `#` starts a comment; blank lines
ignored; keys exactly as named in RunConfig; scalars are decimal reals; lists
are comma-separated. Unknown keys are errors, not warnings, and every
diagnostic names the offending key and line.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import ConfigError
from .model import Scheme, SystemParams
from .output_mode import BadCavityParams
from .tolerances import STIFFNESS_FACTOR

SCHEMES = ("sm", "bogoliubov")
REGIMES = ("intracavity", "badcavity")
MODES = ("series", "sweep")

# key -> (converter, description)
_FLOAT_KEYS = ("g1", "g2", "kappa1", "kappa2", "delta", "G1", "G2", "t_max", "dt", "tau_max")
_INT_KEYS = ("tau_points", "sample_stride")
_STR_KEYS = ("scheme", "regime", "mode", "output")
_LIST_KEYS = ("n_th",)
ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS + _LIST_KEYS

_COMMON_REQUIRED = ("scheme", "regime", "n_th", "output")
_REQUIRED_BY_REGIME = {
    "intracavity": ("g1", "g2", "kappa1", "kappa2", "delta", "t_max", "dt"),
    "badcavity": ("G1", "G2", "kappa1", "kappa2", "delta", "tau_max", "tau_points"),
}
_OPTIONAL_BY_REGIME = {
    "intracavity": ("mode", "sample_stride"),
    "badcavity": ("mode",),
}


@dataclass(frozen=True)
class RunConfig:
    """One experiment: a scheme/regime pairing, its physical parameters, a time
    or duration grid, the n_th list, and the output CSV name.

    mode selects the CSV schema: `series` emits one negativity-vs-time row per
    sample (per n_th), `sweep` emits one (max E_N, argmax) row per n_th.
    """

    scheme: str
    regime: str
    mode: str
    n_th: tuple[float, ...]
    output: str
    g1: float | None = None
    g2: float | None = None
    kappa1: float | None = None
    kappa2: float | None = None
    delta: float | None = None
    G1: float | None = None
    G2: float | None = None
    t_max: float | None = None
    dt: float | None = None
    sample_stride: int = 1
    tau_max: float | None = None
    tau_points: int | None = None

    def system_params(self, n_th: float) -> SystemParams:
        return SystemParams(
            g1=self.g1, g2=self.g2, kappa1=self.kappa1, kappa2=self.kappa2,
            delta=self.delta, n_th=n_th,
        )

    def bad_cavity_params(self, n_th: float) -> BadCavityParams:
        return BadCavityParams(
            G1=self.G1, G2=self.G2, kappa1=self.kappa1, kappa2=self.kappa2,
            delta=self.delta, n_th=n_th,
        )

    @property
    def scheme_enum(self) -> Scheme:
        return Scheme(self.scheme)


def _fail(key: str, line: int | None, msg: str):
    at = f" (line {line})" if line is not None else ""
    raise ConfigError(f"key {key!r}{at}: {msg}")


def validate_config(cfg: RunConfig, lines: dict[str, int] | None = None) -> RunConfig:
    """Cross-field validation shared by the parser and the frozen presets."""
    lines = lines or {}

    def fail(key, msg):
        _fail(key, lines.get(key), msg)

    if cfg.scheme not in SCHEMES:
        fail("scheme", f"must be one of {SCHEMES}, got {cfg.scheme!r}")
    if cfg.regime not in REGIMES:
        fail("regime", f"must be one of {REGIMES}, got {cfg.regime!r}")
    if cfg.mode not in MODES:
        fail("mode", f"must be one of {MODES}, got {cfg.mode!r}")
    if cfg.regime == "badcavity" and cfg.scheme == "bogoliubov":
        fail("scheme", "the bad-cavity pipeline models the detuned scheme only; use scheme = sm")
    for key in _REQUIRED_BY_REGIME[cfg.regime]:
        if getattr(cfg, key) is None:
            fail(key, f"required for regime {cfg.regime!r} but missing")
    defaults = {f.name: f.default for f in fields(RunConfig)}
    for key in _FLOAT_KEYS + _INT_KEYS:
        allowed = _REQUIRED_BY_REGIME[cfg.regime] + _OPTIONAL_BY_REGIME[cfg.regime]
        if key not in allowed and getattr(cfg, key) != defaults[key]:
            fail(key, f"not used by regime {cfg.regime!r}")
    if not cfg.n_th:
        fail("n_th", "list must contain at least one value")
    for v in cfg.n_th:
        if v < 0:
            fail("n_th", f"entries must be >= 0, got {v}")
    if not cfg.output:
        fail("output", "must be a nonempty file name")
    for key in ("g1", "g2", "kappa1", "kappa2", "G1", "G2"):
        val = getattr(cfg, key)
        if val is not None and val < 0:
            fail(key, f"must be >= 0, got {val}")
    for key in ("t_max", "dt", "tau_max"):
        val = getattr(cfg, key)
        if val is not None and val <= 0:
            fail(key, f"must be > 0, got {val}")
    if cfg.tau_points is not None and cfg.tau_points < 1:
        fail("tau_points", f"must be >= 1, got {cfg.tau_points}")
    if cfg.sample_stride < 1:
        fail("sample_stride", f"must be >= 1, got {cfg.sample_stride}")
    if cfg.scheme == "sm" and cfg.delta is not None and cfg.delta <= 0:
        fail("delta", f"the detuned scheme requires delta > 0, got {cfg.delta}")
    if cfg.scheme == "bogoliubov" and cfg.delta != 0:
        fail("delta", f"the resonant scheme is modeled at delta = 0 only, got {cfg.delta}")
    if cfg.regime == "intracavity":
        max_rate = max(cfg.g1, cfg.g2, cfg.kappa1, cfg.kappa2, abs(cfg.delta), 1.0)
        guard = STIFFNESS_FACTOR / max_rate
        if cfg.dt > guard * (1.0 + 1e-12):
            fail("dt", f"violates the stiffness guard dt <= {STIFFNESS_FACTOR}/max_rate = {guard:.6g}")
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config document; every error names key and line."""
    entries: dict[str, str] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: key {key!r} has no value")
        entries[key] = value
        lines[key] = lineno

    for key in _COMMON_REQUIRED:
        if key not in entries:
            raise ConfigError(f"key {key!r}: required but missing")

    kwargs: dict = {}
    for key, value in entries.items():
        if key in _STR_KEYS:
            kwargs[key] = value
        elif key in _INT_KEYS:
            try:
                kwargs[key] = int(value)
            except ValueError:
                _fail(key, lines[key], f"expected an integer, got {value!r}")
        elif key in _FLOAT_KEYS:
            try:
                kwargs[key] = float(value)
            except ValueError:
                _fail(key, lines[key], f"expected a decimal real, got {value!r}")
        else:  # n_th list
            try:
                kwargs[key] = tuple(float(item.strip()) for item in value.split(","))
            except ValueError:
                _fail(key, lines[key], f"expected comma-separated decimal reals, got {value!r}")
    kwargs.setdefault("mode", "series")
    cfg = RunConfig(**kwargs)
    return validate_config(cfg, lines)
