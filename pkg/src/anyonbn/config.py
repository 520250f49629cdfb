"""key = value configuration files with dotted sections."""

from dataclasses import dataclass, field

from .dynamics import StepControl
from .errors import ConfigError
from .grids import build_angular_grid, build_spatial_grid, build_velocity_grid
from .kernel import KernelSpec
from .physics import AlphaParam


def _floats(text):
    return tuple(float(tok) for tok in str(text).split(",") if tok.strip())


# key -> (converter, default); None default means the key is required.
SCHEMA = {
    "grid.n_x": (int, 16),
    "grid.n_per_axis": (int, 32),
    "grid.vmax": (float, 4.0),
    "grid.n_theta": (int, 16),
    "kernel.B0": (float, 1.0),
    "kernel.gamma": (float, 0.1),
    "kernel.gamma_prime": (float, 0.1),
    "step.cfl": (float, 0.2),
    "step.dt_min": (float, 1e-8),
    "step.dt_max": (float, 0.05),
    "step.ceiling_margin": (float, 1e-6),
    "ic.kind": (str, None),
    "ic.A": (float, 1.0),
    "ic.u0x": (float, 0.0),
    "ic.u0y": (float, 0.0),
    "ic.sigma": (float, 1.0),
    "ic.eps": (float, 0.0),
    "ic.T": (float, 0.5),
    "ic.mu": (float, -0.5),
    "ic.A2": (float, None),
    "ic.u0x2": (float, None),
    "ic.u0y2": (float, None),
    "ic.sigma2": (float, None),
    "run.alpha": (float, 0.0),
    "run.t_end": (float, None),
    "run.cadence": (int, 1),
    "run.lambdas": (_floats, (2.0, 3.0)),
    "run.blowup_mode": (str, "ladder"),
    # first monitor rung 2^e; default (unset) is e = L + 1 with
    # sup f0 <= 2^L, one doubling above the initial data
    "run.threshold_exponent": (int, None),
    "run.seed": (int, 0),
    "sweep.alphas": (_floats, (2 ** -4, 2 ** -5, 2 ** -6, 2 ** -7, 2 ** -8, 0.0)),
    "sweep.dt": (float, 0.0125),
    "out.dir": (str, "out"),
}

REQUIRED = ("ic.kind", "run.t_end")

IC_KEYS = {
    "gaussian_bump": {"A", "u0x", "u0y", "sigma", "eps"},
    "bose_einstein": {"T", "mu"},
    "two_beam": {"A", "u0x", "u0y", "sigma", "eps",
                 "A2", "u0x2", "u0y2", "sigma2"},
}


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def grids(self):
        vg = build_velocity_grid(self["grid.vmax"], self["grid.n_per_axis"])
        ang = build_angular_grid(self["grid.n_theta"])
        sg = build_spatial_grid(self["grid.n_x"])
        return vg, ang, sg

    def kernel(self):
        return KernelSpec(B0=self["kernel.B0"], gamma=self["kernel.gamma"],
                          gamma_prime=self["kernel.gamma_prime"])

    def step_control(self):
        return StepControl(cfl_collision=self["step.cfl"],
                           dt_min=self["step.dt_min"],
                           dt_max=self["step.dt_max"],
                           ceiling_margin=self["step.ceiling_margin"])

    def alpha(self):
        return AlphaParam(self["run.alpha"])

    def ic_params(self):
        kind = self["ic.kind"]
        keys = IC_KEYS.get(kind)
        if keys is None:
            raise ConfigError(f"unknown initial condition kind: {kind!r}")
        out = {}
        for k in keys:
            v = self.values.get(f"ic.{k}")
            if v is not None:
                out[k] = v
        return out


def from_mapping(mapping):
    """Build a RunConfig from a plain {key: value} mapping (typed values
    pass through, strings are converted per schema)."""
    values = {key: default for key, (_, default) in SCHEMA.items()}
    for key, raw in mapping.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key: {key!r}")
        conv, _ = SCHEMA[key]
        if isinstance(raw, str) or conv in (int, float):
            values[key] = conv(raw)
        else:
            values[key] = raw
    for key in REQUIRED:
        if values[key] is None:
            raise ConfigError(f"missing required config key: {key!r}")
    return RunConfig(values=values)


def parse_config(path):
    """Parse a key = value file; unknown keys and bad values are rejected
    with the offending line number."""
    mapping = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(
                    f"{path}:{lineno}: expected 'key = value', got {line!r}")
            key, _, raw = text.partition("=")
            key = key.strip()
            raw = raw.strip()
            if key not in SCHEMA:
                raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
            if key in mapping:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            conv, _ = SCHEMA[key]
            try:
                mapping[key] = conv(raw)
            except ValueError as exc:
                raise ConfigError(
                    f"{path}:{lineno}: bad value for {key!r}: {exc}")
    for key in REQUIRED:
        if key not in mapping:
            raise ConfigError(f"{path}: missing required config key {key!r}")
    return from_mapping(mapping)
