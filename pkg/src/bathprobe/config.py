"""Experiment configuration: flat `key = value` files, typed fields,
unknown keys rejected (catches typos in physics parameters)."""
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

EXPERIMENTS = ("fig3", "fig4", "fig5", "measure", "custom")
PULSE_OPS = ("sx", "sy", "sz", "none")
MODELS = ("full", "markovian")

# experiment-specific t_end defaults (the common default is 5)
_T_END_DEFAULTS = {"fig5": 3.0, "measure": 6.0}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "custom"
    omega_q: float = 1.0
    delta: float = 1.0
    g: float = 1.0
    gamma: float = 2.0
    cavity_dim: int = 2
    dt: float = 1e-3
    t_end: float = 5.0
    pulse_time: float = 1.0
    pulse_op: str = "sz"
    decouple_interval: float = 0.02
    decouple_delay: float = 0.1
    model: str = "full"
    out_dir: str = "."

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.pulse_op not in PULSE_OPS:
            raise ConfigError(f"pulse_op must be one of {PULSE_OPS}, got {self.pulse_op!r}")
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if not self.g > 0:
            raise ConfigError("g must be positive")
        if self.gamma < 0:
            raise ConfigError("gamma must be nonnegative")
        if self.cavity_dim < 2:
            raise ConfigError("cavity_dim must be >= 2")
        if not self.dt > 0:
            raise ConfigError("dt must be positive")
        for name in ("t_end", "pulse_time", "decouple_interval", "decouple_delay"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be nonnegative")
        for name in ("pulse_time", "decouple_interval"):
            value = getattr(self, name)
            if abs(round(value / self.dt) * self.dt - value) > 1e-12:
                raise ConfigError(f"dt={self.dt} does not divide {name}={value}")
        if abs(round(self.t_end / self.dt) * self.dt - self.t_end) > 1e-9:
            raise ConfigError(f"t_end={self.t_end} is not an integer number of dt steps")
        return self


def default_config(experiment):
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}")
    return ExperimentConfig(
        experiment=experiment,
        t_end=_T_END_DEFAULTS.get(experiment, 5.0),
    )


_FIELD_TYPES = {
    f.name: (f.type if isinstance(f.type, type) else {"int": int, "float": float}.get(f.type, str))
    for f in fields(ExperimentConfig)
}


def _coerce(key, raw):
    kind = _FIELD_TYPES[key]
    try:
        return kind(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config(text, base=None):
    """Parse `key = value` lines ('#' starts a comment) on top of a base
    config; unknown keys are an error."""
    cfg = base if base is not None else ExperimentConfig()
    updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        updates[key] = _coerce(key, raw)
    return replace(cfg, **updates)


def load_config(path, base=None):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), base=base)


def serialize_config(cfg):
    # bare values (strings unquoted); floats via repr, which round-trips exactly
    lines = [f"{f.name} = {getattr(cfg, f.name)}" for f in fields(ExperimentConfig)]
    return "\n".join(lines) + "\n"


def apply_overrides(cfg, pairs):
    """Apply --set style `key=value` strings."""
    updates = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        key, raw = (part.strip() for part in pair.split("=", 1))
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown key {key!r}")
        updates[key] = _coerce(key, raw)
    return replace(cfg, **updates)
