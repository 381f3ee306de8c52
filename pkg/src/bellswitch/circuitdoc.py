"""JSON circuit description: version-gated, strict, round-trippable.

Example::

    {
      "version": 1,
      "epsilon": {"re": 0.01, "im": 0.0},
      "elements": [
        {"kind": "waveplate", "theta_degrees": 22.5, "mode": 1},
        {"kind": "waveplate", "theta_degrees": 22.5, "mode": 2},
        {"kind": "switch", "injection": {"re": -0.01, "im": 0.0}, "target": "HH"},
        {"kind": "waveplate", "theta_degrees": 22.5, "mode": 1}
      ],
      "input": {"kind": "rectilinear", "label": "HH"}
    }

Input kinds: ``rectilinear`` gives ``|0> + eps|label>``; ``bell`` gives
``|0> - eps|label>`` (the form the creator emits and the analyzer expects);
``raw`` takes ``amplitudes: {"vacuum": c, "pairs": [c, c, c, c]}``.
Complex numbers are always ``{"re": x, "im": y}`` objects.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Union

from .circuits import Circuit
from .elements import Modes, SwitchSettings, TwoModeGate, hadamard_gate, waveplate_gate
from .state import BellLabel, PairState, RectLabel, bell_vector, make_downconversion_state, rect_vector

__all__ = [
    "CircuitDocError",
    "WaveplateSpec",
    "SwitchSpec",
    "InputSpec",
    "CircuitDoc",
    "parse_doc",
    "load_doc",
    "circuit_to_doc",
    "complex_to_json",
    "SUPPORTED_VERSION",
]

SUPPORTED_VERSION = 1


class CircuitDocError(ValueError):
    """Parse or validation failure; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    # adding 0.0 turns -0.0 into 0.0 so equal values serialize identically
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


@dataclass(frozen=True)
class WaveplateSpec:
    theta_degrees: float
    mode: int

    def to_json(self) -> dict:
        return {"kind": "waveplate", "theta_degrees": self.theta_degrees, "mode": self.mode}

    def build(self) -> TwoModeGate:
        return waveplate_gate(math.radians(self.theta_degrees), self.mode)


@dataclass(frozen=True)
class SwitchSpec:
    injection: complex
    target: RectLabel = RectLabel.HH

    def to_json(self) -> dict:
        return {"kind": "switch", "injection": complex_to_json(self.injection),
                "target": self.target.name}

    def build(self) -> SwitchSettings:
        return SwitchSettings(self.injection, self.target)


ElementSpec = Union[WaveplateSpec, SwitchSpec]


@dataclass(frozen=True)
class InputSpec:
    kind: str
    label: str | None = None
    vacuum: complex | None = None
    pairs: tuple[complex, ...] | None = None

    def to_json(self) -> dict:
        if self.kind == "raw":
            return {"kind": "raw", "amplitudes": {
                "vacuum": complex_to_json(self.vacuum),
                "pairs": [complex_to_json(z) for z in self.pairs]}}
        return {"kind": self.kind, "label": self.label}

    def build(self, epsilon: complex) -> PairState:
        if self.kind == "rectilinear":
            return make_downconversion_state(epsilon, rect_vector(RectLabel[self.label]))
        if self.kind == "bell":
            return make_downconversion_state(-epsilon, bell_vector(BellLabel(self.label)))
        return PairState(self.vacuum, list(self.pairs))


@dataclass(frozen=True)
class CircuitDoc:
    epsilon: complex
    elements: tuple[ElementSpec, ...]
    input: InputSpec
    version: int = SUPPORTED_VERSION

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "epsilon": complex_to_json(self.epsilon),
            "elements": [el.to_json() for el in self.elements],
            "input": self.input.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def build_circuit(self) -> Circuit:
        """Build the elements, reusing the exact Hadamard gates where the plates match.

        Runs of 22.5 degree plates that spell out a built-in Hadamard gate are
        replaced by that gate, so a document exported from a built-in circuit
        reproduces it bit for bit (two separate plates would round differently).
        """
        built: list = []
        specs = list(self.elements)
        i = 0
        while i < len(specs):
            for width in (2, 1):
                run = specs[i:i + width]
                if len(run) == width and all(isinstance(el, WaveplateSpec) for el in run):
                    gate = _HADAMARD_BY_PLATES.get(
                        tuple((math.radians(el.theta_degrees), el.mode) for el in run))
                    if gate is not None:
                        built.append(gate)
                        i += width
                        break
            else:
                built.append(specs[i].build())
                i += 1
        return Circuit(tuple(built), name="doc")

    def build_input(self) -> PairState:
        return self.input.build(self.epsilon)


_HADAMARD_BY_PLATES = {g.plates: g for g in map(hadamard_gate, Modes)}


class _Reader:
    """Schema checks that report the source line of the offending key."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def line_of(self, token: str) -> int | None:
        needle = json.dumps(token)
        for i, line in enumerate(self.lines, 1):
            if needle in line:
                return i
        return None

    def fail(self, path: str, message: str, token: str | None = None):
        line = self.line_of(token) if token else None
        raise CircuitDocError(f"{path}: {message}", line)

    def obj(self, value: Any, path: str, required: set, optional: set = frozenset(),
            token: str | None = None) -> dict:
        if not isinstance(value, dict):
            self.fail(path, "expected an object", token)
        unknown = set(value) - required - set(optional)
        if unknown:
            key = sorted(unknown)[0]
            self.fail(path, f"unknown field {key!r}", key)
        missing = required - set(value)
        if missing:
            self.fail(path, f"missing field {sorted(missing)[0]!r}", token)
        return value

    def number(self, value: Any, path: str, token: str) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(path, "expected a number", token)
        if not math.isfinite(value):
            self.fail(path, "expected a finite number", token)
        return float(value)

    def complex(self, value: Any, path: str, token: str) -> complex:
        self.obj(value, path, {"re", "im"}, token=token)
        return complex(self.number(value["re"], path + ".re", token),
                       self.number(value["im"], path + ".im", token))

    def element(self, value: Any, path: str) -> ElementSpec:
        if not isinstance(value, dict) or "kind" not in value:
            self.fail(path, "element needs a 'kind'", "elements")
        kind = value["kind"]
        if kind == "waveplate":
            self.obj(value, path, {"kind", "theta_degrees", "mode"}, token="waveplate")
            mode = value["mode"]
            if mode not in (1, 2) or isinstance(mode, bool):
                self.fail(path + ".mode", "mode must be 1 or 2", "mode")
            return WaveplateSpec(self.number(value["theta_degrees"], path + ".theta_degrees",
                                             "theta_degrees"), int(mode))
        if kind == "switch":
            self.obj(value, path, {"kind", "injection", "target"}, token="switch")
            target = value["target"]
            if target not in RectLabel.__members__:
                self.fail(path + ".target", f"target must be one of HH, HV, VH, VV, got {target!r}",
                          "target")
            return SwitchSpec(self.complex(value["injection"], path + ".injection", "injection"),
                              RectLabel[target])
        self.fail(path + ".kind", f"unknown element kind {kind!r}", str(kind))

    def input(self, value: Any, path: str) -> InputSpec:
        if not isinstance(value, dict) or "kind" not in value:
            self.fail(path, "input needs a 'kind'", "input")
        kind = value["kind"]
        if kind == "rectilinear":
            self.obj(value, path, {"kind", "label"}, token="input")
            if value["label"] not in RectLabel.__members__:
                self.fail(path + ".label", f"unknown rectilinear label {value['label']!r}", "label")
            return InputSpec("rectilinear", value["label"])
        if kind == "bell":
            self.obj(value, path, {"kind", "label"}, token="input")
            try:
                label = BellLabel.parse(str(value["label"])).value
            except ValueError as exc:
                self.fail(path + ".label", str(exc), "label")
            return InputSpec("bell", label)
        if kind == "raw":
            self.obj(value, path, {"kind", "amplitudes"}, token="input")
            amps = self.obj(value["amplitudes"], path + ".amplitudes", {"vacuum", "pairs"},
                            token="amplitudes")
            pairs = amps["pairs"]
            if not isinstance(pairs, list) or len(pairs) != 4:
                self.fail(path + ".amplitudes.pairs", "expected a list of 4 complex numbers", "pairs")
            return InputSpec(
                "raw",
                vacuum=self.complex(amps["vacuum"], path + ".amplitudes.vacuum", "vacuum"),
                pairs=tuple(self.complex(z, f"{path}.amplitudes.pairs[{i}]", "pairs")
                            for i, z in enumerate(pairs)),
            )
        self.fail(path + ".kind", f"unknown input kind {kind!r}", "input")


def parse_doc(text: str) -> CircuitDoc:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CircuitDocError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    reader = _Reader(text)
    if not isinstance(raw, dict) or "version" not in raw:
        reader.fail("$", "document must be an object with a 'version' field")
    version = raw["version"]
    if version != SUPPORTED_VERSION or isinstance(version, bool):
        reader.fail("$.version", f"unsupported version {version!r} (expected {SUPPORTED_VERSION})",
                    "version")
    reader.obj(raw, "$", {"version", "epsilon", "elements", "input"})
    elements = raw["elements"]
    if not isinstance(elements, list):
        reader.fail("$.elements", "expected a list", "elements")
    return CircuitDoc(
        epsilon=reader.complex(raw["epsilon"], "$.epsilon", "epsilon"),
        elements=tuple(reader.element(el, f"$.elements[{i}]") for i, el in enumerate(elements)),
        input=reader.input(raw["input"], "$.input"),
        version=version,
    )


def load_doc(path) -> CircuitDoc:
    with open(path, encoding="utf-8") as fh:
        return parse_doc(fh.read())


def circuit_to_doc(circuit: Circuit, epsilon: complex, input_spec: InputSpec) -> CircuitDoc:
    """Describe a built circuit; gates must record the wave plates behind them."""
    specs: list[ElementSpec] = []
    for el in circuit:
        if isinstance(el, SwitchSettings):
            specs.append(SwitchSpec(el.injection, el.target))
        elif el.plates:
            specs.extend(WaveplateSpec(math.degrees(theta), mode) for theta, mode in el.plates)
        else:
            raise ValueError(f"gate {el.name or '?'} has no wave-plate description")
    return CircuitDoc(complex(epsilon), tuple(specs), input_spec)
