"""Scenario configuration: declarative JSON files driving the CLI commands."""

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import ConfigError
from .spectral import TWO_PI, FourierField
from .symbols import symbol_from_config


@dataclass
class Scenario:
    name: str
    symbol_spec: dict
    n_modes: int
    sobolev_index: float
    horizon: float
    bump: dict
    initial: dict
    target: dict
    feedback: str = "ggstar"
    decay_rate: float = 1.0
    gramian_horizon: float = None
    t_max: float = 50.0
    dt_out: float = 0.1
    seed: int = 0
    cluster_tol: float = 1e-9
    divergence_threshold: float = 1e3
    raw: dict = field(default_factory=dict)

    def symbol(self):
        try:
            return symbol_from_config(self.symbol_spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc


def _require(data, key, kind, where):
    if key not in data:
        raise ConfigError(f"{where}: missing required key {key!r}")
    value = data[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return int(value)
    if kind is dict and isinstance(value, dict):
        return value
    if kind is str and isinstance(value, str):
        return value
    raise ConfigError(f"{where}: key {key!r} must be a {kind.__name__}")


def scenario_from_dict(data, name="scenario"):
    """Validate a configuration mapping; every failure is one actionable line."""
    if not isinstance(data, dict):
        raise ConfigError("scenario file must hold a JSON object")
    name = data.get("name", name)
    symbol_spec = _require(data, "symbol", dict, name)
    n_modes = _require(data, "n_modes", int, name)
    if n_modes < 4:
        raise ConfigError(f"{name}: n_modes must be at least 4, got {n_modes}")
    horizon = _require(data, "horizon", float, name)
    if horizon <= 0:
        raise ConfigError(f"{name}: horizon must be positive, got {horizon:g}")
    s = float(data.get("sobolev_index", 0.0))
    bump = _require(data, "bump", dict, name)
    half_width = _require(bump, "half_width", float, f"{name}.bump")
    if not 0.0 < half_width < np.pi:
        raise ConfigError(
            f"{name}: bump.half_width must lie in (0, pi), got {half_width:g}")
    if "center" not in bump:
        raise ConfigError(f"{name}: bump.center is required")
    stab = data.get("stabilize", {})
    feedback = stab.get("feedback", "ggstar")
    if feedback not in ("ggstar", "gramian", "none"):
        raise ConfigError(
            f"{name}: stabilize.feedback must be ggstar, gramian, or none")
    decay_rate = float(stab.get("decay_rate", 1.0))
    if feedback == "gramian" and decay_rate <= 0:
        raise ConfigError(f"{name}: stabilize.decay_rate must be positive")
    scenario = Scenario(
        name=name,
        symbol_spec=symbol_spec,
        n_modes=n_modes,
        sobolev_index=s,
        horizon=horizon,
        bump=bump,
        initial=data.get("initial", {"kind": "zero"}),
        target=data.get("target", {"kind": "zero"}),
        feedback=feedback,
        decay_rate=decay_rate,
        gramian_horizon=float(stab["gramian_horizon"]) if "gramian_horizon" in stab else None,
        t_max=float(stab.get("t_max", data.get("t_max", 50.0))),
        dt_out=float(data.get("dt_out", stab.get("dt_out", 0.1))),
        seed=int(data.get("seed", 0)),
        cluster_tol=float(data.get("cluster_tol", 1e-9)),
        divergence_threshold=float(data.get("divergence_threshold", 1e3)),
        raw=dict(data),
    )
    scenario.symbol()  # validate the family eagerly
    return scenario


def preset_names():
    root = resources.files("dispctl").joinpath("presets")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_scenario(path_or_preset):
    """Load a scenario from a file path, falling back to a packaged preset."""
    text = None
    try:
        with open(path_or_preset, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError:
        preset = resources.files("dispctl").joinpath(
            "presets", f"{path_or_preset}.json")
        if preset.is_file():
            text = preset.read_text(encoding="utf-8")
    if text is None:
        raise ConfigError(
            f"no scenario file at {path_or_preset!r} and no preset of that "
            f"name (presets: {', '.join(preset_names())})")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path_or_preset}: invalid JSON ({exc})") from exc
    return scenario_from_dict(data, name=str(path_or_preset))


def build_field(spec, n_modes, s=0.0, seed=0):
    """Construct a field from a declarative spec.

    Kinds: zero; single_mode (mode, amplitude, hermitian adds the mirrored
    conjugate so the field is real); gaussian_packet (center_mode, width,
    amplitude, zero_mean); random_seeded (seed, profile_exponent, amplitude)
    with complex Gaussian coefficients, zero mean, unit H^s norm scaling.
    """
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ConfigError("field spec must be an object with a 'kind' key")
    kind = spec["kind"]
    coeffs = np.zeros(2 * n_modes + 1, dtype=complex)
    if kind == "zero":
        pass
    elif kind == "single_mode":
        mode = int(spec.get("mode", 1))
        if not 0 < abs(mode) <= n_modes:
            raise ConfigError(
                f"single_mode: mode must satisfy 0 < |mode| <= {n_modes}")
        amplitude = complex(spec.get("amplitude", 1.0))
        coeffs[mode + n_modes] = amplitude / np.sqrt(TWO_PI)
        if spec.get("hermitian", True):
            coeffs[-mode + n_modes] = np.conj(amplitude) / np.sqrt(TWO_PI)
    elif kind == "gaussian_packet":
        center = float(spec.get("center_mode", 0.0))
        width = float(spec.get("width", n_modes / 4.0))
        if width <= 0:
            raise ConfigError("gaussian_packet: width must be positive")
        amplitude = complex(spec.get("amplitude", 1.0))
        k = np.arange(-n_modes, n_modes + 1)
        coeffs = amplitude * np.exp(-((k - center) ** 2) / (2.0 * width ** 2))
        coeffs = coeffs.astype(complex)
        if spec.get("zero_mean", True):
            coeffs[n_modes] = 0.0
    elif kind == "random_seeded":
        rng = np.random.default_rng(int(spec.get("seed", seed)))
        expo = float(spec.get("profile_exponent", s))
        amplitude = float(spec.get("amplitude", 1.0))
        size = 2 * n_modes + 1
        k = np.arange(-n_modes, n_modes + 1)
        dist = spec.get("distribution", "gaussian")
        if dist == "gaussian":
            raw = rng.standard_normal(size) + 1j * rng.standard_normal(size)
        elif dist == "lognormal_phase":
            # Random phases with moderate magnitude spread: same coefficient
            # profile, but without the occasional near-zero draws of a
            # complex Gaussian, so derived ratios stay comparable across
            # seeds.
            sigma = float(spec.get("sigma", 0.35))
            raw = np.exp(sigma * rng.standard_normal(size)) * np.exp(
                2j * np.pi * rng.random(size))
        else:
            raise ConfigError(
                "random_seeded: distribution must be gaussian or "
                "lognormal_phase")
        coeffs = raw * (1.0 + np.abs(k)) ** (-expo)
        coeffs[n_modes] = 0.0
        norm = np.sqrt(TWO_PI * np.sum(
            (1.0 + np.abs(k)) ** (2.0 * s) * np.abs(coeffs) ** 2))
        if norm > 0:
            coeffs *= amplitude / norm
    else:
        raise ConfigError(
            f"unknown field kind {kind!r}; use zero, single_mode, "
            f"gaussian_packet, or random_seeded")
    return FourierField(coeffs, n_modes, s)
