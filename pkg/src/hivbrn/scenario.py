"""Scenario files: INI-style parameter sets with embedded baseline defaults.

A scenario has five optional sections, ``[female]``, ``[male]``,
``[population]``, ``[quadrature]`` and ``[simulation]``.  Every key is
optional; missing keys fall back to the built-in baseline, so an empty file
(or no file at all) reproduces the baseline analysis exactly.  Unknown
sections or keys are rejected with the offending line number.

Per-sex keys: ia1, M1, m, tau1, M2, alpha1, alpha2, alpha3 (viral-load
trajectory), ptr_hi, ptr_lo (transmission anchors), delta, phi (activity),
median, beta (survival).  Population keys: omega, pop_female, pop_male.
Quadrature keys: order, tol, max_refine.  Simulation keys: samples, seed,
act_process.
"""

from __future__ import annotations

import configparser
import hashlib
import re
from dataclasses import dataclass
from pathlib import Path

from .behavior import ActivityParams
from .errors import DomainError, ScenarioError
from .mc_oracle import SimulationSpec
from .natural_history import TransmissionParams, ViralLoadParams
from .reproduction import PopulationConfig, QuadratureSpec, SexProfile
from .survival import SurvivalParams

__all__ = [
    "Scenario",
    "parse_scenario",
    "load_scenario",
    "default_values",
    "baseline_profile",
    "baseline_population",
]

_SEX_KEYS = (
    "ia1", "M1", "m", "tau1", "M2", "alpha1", "alpha2", "alpha3",
    "ptr_hi", "ptr_lo", "delta", "phi", "median", "beta",
)
_SECTION_KEYS = {
    "female": _SEX_KEYS,
    "male": _SEX_KEYS,
    "population": ("omega", "pop_female", "pop_male"),
    "quadrature": ("order", "tol", "max_refine"),
    "simulation": ("samples", "seed", "act_process"),
}
_INT_KEYS = {"order", "max_refine", "samples", "seed"}
_STR_KEYS = {"act_process"}


def default_values() -> dict[str, dict]:
    """Fully resolved baseline scenario values, by section."""
    sex = dict(
        ia1=0.4, M1=5.0, m=3.0, tau1=1.0, M2=4.8,
        alpha1=1.3, alpha2=0.2, alpha3=0.7,
        ptr_hi=0.008, ptr_lo=0.001,
        delta=82.0, phi=0.61, beta=2.5,
    )
    return {
        "female": dict(sex, median=8.6),
        "male": dict(sex, median=9.4),
        "population": dict(omega=40.0, pop_female=None, pop_male=None),
        "quadrature": dict(order=24, tol=1e-6, max_refine=8),
        "simulation": dict(
            samples=100_000, seed=20260810, act_process="poisson_thinning"
        ),
    }


def _build_profile(label: str, v: dict) -> SexProfile:
    viral = ViralLoadParams(
        peak_time=v["ia1"],
        peak_log_vl=v["M1"],
        plateau_log_vl=v["m"],
        terminal_lead=v["tau1"],
        terminal_log_vl=v["M2"],
        rise_shape=v["alpha1"],
        warp_rate=v["alpha2"],
        terminal_width=v["alpha3"],
    )
    transmission = TransmissionParams.from_anchors(
        v["ptr_hi"], v["ptr_lo"], v["M1"], v["m"]
    )
    activity = ActivityParams(
        annual_acts=v["delta"],
        residual_fraction=v["phi"],
        terminal_lead=v["tau1"],
    )
    return SexProfile(
        label=label,
        viral=viral,
        transmission=transmission,
        activity=activity,
        survival=SurvivalParams(median=v["median"], shape=v["beta"]),
    )


def baseline_profile(label: str) -> SexProfile:
    """The built-in baseline profile for one sex."""
    return _build_profile(label, default_values()[label])


def baseline_population() -> PopulationConfig:
    """The built-in baseline two-sex configuration."""
    return parse_scenario("").population


@dataclass
class Scenario:
    """A fully resolved scenario ready to run."""

    population: PopulationConfig
    quadrature: QuadratureSpec
    simulation: SimulationSpec
    resolved: dict

    def config_hash(self) -> str:
        lines = []
        for section in sorted(self.resolved):
            for key in sorted(self.resolved[section]):
                lines.append(f"{section}.{key}={self.resolved[section][key]!r}")
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()

    def replace_simulation(self, **changes) -> "Scenario":
        """New scenario with simulation fields overridden (seed, samples, ...)."""
        merged = {
            "samples": self.simulation.samples,
            "seed": self.simulation.seed,
            "act_process": self.simulation.act_process,
        }
        merged.update(changes)
        try:
            sim = SimulationSpec(**merged)
        except DomainError as exc:
            raise ScenarioError(str(exc)) from exc
        resolved = {k: dict(v) for k, v in self.resolved.items()}
        resolved["simulation"].update(merged)
        return Scenario(self.population, self.quadrature, sim, resolved)


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    """1-based line of a section header, or of a key within that section."""
    in_section = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        header = re.match(r"\s*\[([^\]]+)\]", line)
        if header:
            if key is None and header.group(1) == section:
                return lineno
            in_section = header.group(1) == section
            continue
        if key is not None and in_section:
            if re.match(rf"\s*{re.escape(key)}\s*=", line):
                return lineno
    return None


def _convert(section: str, key: str, raw: str, line: int | None):
    if key in _STR_KEYS:
        return raw.strip()
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError as exc:
        kind = "an integer" if key in _INT_KEYS else "a number"
        raise ScenarioError(
            f"value {raw!r} for {key!r} in [{section}] is not {kind}", line
        ) from exc


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text, merge with baseline defaults, and validate."""
    parser = configparser.ConfigParser(
        delimiters=("=",), interpolation=None, comment_prefixes=("#", ";")
    )
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ScenarioError(str(exc), line) from exc

    values = default_values()
    for section in parser.sections():
        if section not in _SECTION_KEYS:
            raise ScenarioError(
                f"unknown section [{section}]", _line_of(text, section)
            )
        allowed = _SECTION_KEYS[section]
        for key, raw in parser.items(section):
            line = _line_of(text, section, key)
            if key not in allowed:
                raise ScenarioError(
                    f"unknown key {key!r} in [{section}]", line
                )
            values[section][key] = _convert(section, key, raw, line)

    try:
        female = _build_profile("female", values["female"])
        male = _build_profile("male", values["male"])
        population = PopulationConfig(
            female=female,
            male=male,
            omega=values["population"]["omega"],
            pop_female=values["population"]["pop_female"],
            pop_male=values["population"]["pop_male"],
        )
        quadrature = QuadratureSpec(
            order=values["quadrature"]["order"],
            tol=values["quadrature"]["tol"],
            max_refine=values["quadrature"]["max_refine"],
        )
        simulation = SimulationSpec(
            samples=values["simulation"]["samples"],
            seed=values["simulation"]["seed"],
            act_process=values["simulation"]["act_process"],
        )
    except DomainError as exc:
        raise ScenarioError(str(exc)) from exc
    return Scenario(population, quadrature, simulation, values)


def load_scenario(path: str | Path | None) -> Scenario:
    """Read and parse a scenario file; None gives the pure baseline."""
    if path is None:
        return parse_scenario("")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text)
