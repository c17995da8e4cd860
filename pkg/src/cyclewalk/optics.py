"""Operator models of the optical elements realizing one cycle-walk step,
and verification that their composition equals the abstract step operator.

States here live on an open range of OAM labels rather than the folded
k-dimensional position space: a state is a dict mapping an integer OAM
label to an amplitude, where the amplitude is either a complex scalar
(polarization-independent contexts, e.g. the sorting tree) or a length-2
complex vector holding the (H, V) components.

Elements are ideal: lossless, perfectly aligned, with exact fiber
recombination.  Sorter efficiencies and other imperfections are out of
scope; the layouts exist to check realizability, not to model hardware.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .walk import OamLabelMap, WalkConfig, coin_block, step_operator

_PORT_TOL = 1e-9


class LayoutError(ValueError):
    """Layout does not compose to a valid operator on the walk space."""


class SorterInterferenceError(ValueError):
    """A mode hit a Mach-Zehnder sorter with non-binary interference phase."""


def hwp_operator(rho: float) -> np.ndarray:
    """2x2 Jones matrix of a half-waveplate rotated through beta/2 with
    beta = arctan(sqrt((1-rho)/rho)); equals the walk's coin matrix."""
    if rho == 0.0:
        raise ValueError("rho=0 makes the waveplate angle undefined")
    if not 0.0 < rho <= 1.0:
        raise ValueError(f"rho must lie in (0, 1], got {rho}")
    beta = math.atan(math.sqrt((1.0 - rho) / rho))
    c, s = math.cos(beta), math.sin(beta)
    return np.array([[c, s], [s, -c]], dtype=complex)


def _as_vec(amp) -> np.ndarray:
    vec = np.asarray(amp, dtype=complex)
    if vec.shape != (2,):
        raise ValueError("this element needs per-polarization amplitudes (shape (2,))")
    return vec


def hwp_apply(state: dict, rho: float) -> dict:
    """Apply the waveplate to the polarization of every mode."""
    m = hwp_operator(rho)
    return {ell: m @ _as_vec(amp) for ell, amp in state.items()}


def jplate_action(state: dict, k: int, m_h: int = -1, m_v: int = 1, theta: float = 0.0) -> dict:
    """Polarization-conditioned azimuthal winding: H gains m_h, V gains m_v.

    Input must lie within the cycle's OAM window extended by one unit on
    each side, and the shifted output must stay inside that extended
    window too (the wraparound happens downstream).
    """
    lmap = OamLabelMap(k)
    lo, hi = lmap.ell_min - 1, lmap.ell_max + 1
    rot = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]],
        dtype=complex,
    )
    out: dict = {}
    for ell, amp in state.items():
        if not lo <= ell <= hi:
            raise LayoutError(f"input mode {ell} outside extended window [{lo}, {hi}]")
        vec = rot.conj().T @ _as_vec(amp)
        for comp, m in ((0, m_h), (1, m_v)):
            if vec[comp] == 0:
                continue
            target = ell + m
            if not lo <= target <= hi:
                raise LayoutError(f"mode {ell} would shift to {target}, outside [{lo}, {hi}]")
            dst = out.setdefault(target, np.zeros(2, dtype=complex))
            dst += rot[:, comp] * vec[comp]
    return out


def spp(state: dict, m: int) -> dict:
    """Spiral phase plate: add m to every OAM label."""
    return {ell + m: amp for ell, amp in state.items()}


def mz_sort(state: dict, alpha: float, offset: float = 0.0) -> tuple[dict, dict]:
    """Dove-prism Mach-Zehnder sorter with relative rotation alpha and a
    fixed arm phase offset.

    A mode with label ell interferes with phase exp(i(ell*alpha + offset));
    +1 exits the plus port, -1 the minus port, anything else means the
    layout routed a mode here that this sorter cannot split.
    """
    plus: dict = {}
    minus: dict = {}
    for ell, amp in state.items():
        phase = np.exp(1j * (ell * alpha + offset))
        if abs(phase - 1.0) < _PORT_TOL:
            plus[ell] = amp
        elif abs(phase + 1.0) < _PORT_TOL:
            minus[ell] = amp
        else:
            raise SorterInterferenceError(
                f"mode {ell} interferes with phase {phase:.3f}, not +-1 "
                f"(alpha={alpha}, offset={offset})"
            )
    return plus, minus


def combine_states(*states: dict) -> dict:
    """Coherent fiber recombination: sum of amplitudes per label."""
    out: dict = {}
    for state in states:
        for ell, amp in state.items():
            if ell in out:
                out[ell] = out[ell] + amp
            else:
                out[ell] = amp
    return out


def sorter_bank_route(state: dict, k: int, high: int | None = None, low: int | None = None) -> dict:
    """Fig-2(a) style sorter bank: in-window modes pass, the mode one above
    the window gets a spiral plate of `high` (default -k), the mode one
    below gets `low` (default +k)."""
    lmap = OamLabelMap(k)
    if high is None:
        high = -k
    if low is None:
        low = k
    out: dict = {}
    for ell, amp in state.items():
        if ell > lmap.ell_max:
            ell = ell + high
        elif ell < lmap.ell_min:
            ell = ell + low
        if ell in out:
            out[ell] = out[ell] + amp
        else:
            out[ell] = amp
    return out


# --- element descriptors ----------------------------------------------------

@dataclass(frozen=True)
class HalfWavePlate:
    rho: float | None = None  # None: use the walk config's coin parameter


@dataclass(frozen=True)
class JPlate:
    m_h: int = -1
    m_v: int = 1
    theta: float = 0.0


@dataclass(frozen=True)
class SpiralPhasePlate:
    m: int
    beam: str | None = None


@dataclass(frozen=True)
class ModeSorter:
    alpha: float
    offset: float = 0.0
    beam: str | None = None
    plus: str = "plus"
    minus: str = "minus"


@dataclass(frozen=True)
class OamSorterBank:
    high: int | None = None
    low: int | None = None


@dataclass(frozen=True)
class FiberCombine:
    pass


Element = HalfWavePlate | JPlate | SpiralPhasePlate | ModeSorter | OamSorterBank | FiberCombine


@dataclass(frozen=True)
class OpticalLayout:
    """Ordered optical elements acting on a k-cycle's OAM window."""

    elements: tuple[Element, ...]
    k: int

    @property
    def oam_window(self) -> tuple[int, int]:
        lmap = OamLabelMap(self.k)
        return lmap.ell_min, lmap.ell_max


def _resolve_beam(beams: dict, name: str | None, element: str) -> str:
    if name is not None:
        if name not in beams:
            raise LayoutError(f"{element} refers to unknown beam {name!r}")
        return name
    if len(beams) == 1:
        return next(iter(beams))
    raise LayoutError(f"{element} needs beam= when {len(beams)} beams are present")


def run_layout(layout: OpticalLayout, state: dict, rho_default: float | None = None) -> dict:
    """Propagate a polarization-resolved optical state through the layout.

    Returns the recombined output state.
    """
    beams: dict[str, dict] = {"in": dict(state)}
    for el in layout.elements:
        if isinstance(el, HalfWavePlate):
            rho = el.rho if el.rho is not None else rho_default
            if rho is None:
                raise LayoutError("hwp element needs rho (none in layout or config)")
            beams = {name: hwp_apply(b, rho) for name, b in beams.items()}
        elif isinstance(el, JPlate):
            beams = {
                name: jplate_action(b, layout.k, el.m_h, el.m_v, el.theta)
                for name, b in beams.items()
            }
        elif isinstance(el, SpiralPhasePlate):
            if el.beam is None:
                beams = {name: spp(b, el.m) for name, b in beams.items()}
            else:
                name = _resolve_beam(beams, el.beam, "spp")
                beams[name] = spp(beams[name], el.m)
        elif isinstance(el, ModeSorter):
            name = _resolve_beam(beams, el.beam, "mz")
            for port in (el.plus, el.minus):
                if port in beams:
                    raise LayoutError(f"mz output beam name {port!r} already in use")
            src = beams.pop(name)
            plus, minus = mz_sort(src, el.alpha, el.offset)
            beams[el.plus] = plus
            beams[el.minus] = minus
        elif isinstance(el, OamSorterBank):
            beams = {
                name: sorter_bank_route(b, layout.k, el.high, el.low)
                for name, b in beams.items()
            }
        elif isinstance(el, FiberCombine):
            beams = {"in": combine_states(*beams.values())}
        else:
            raise LayoutError(f"unknown element {el!r}")
    return combine_states(*beams.values())


def compose_cycle_step(layout: OpticalLayout, config: WalkConfig) -> np.ndarray:
    """Compose the layout into one operator on the 2k-dimensional walk space.

    Raises LayoutError if any output mode falls outside the OAM window or
    the composition is not unitary within 1e-10.
    """
    if layout.k != config.k:
        raise LayoutError(f"layout is for k={layout.k}, config has k={config.k}")
    k = config.k
    lmap = OamLabelMap(k)
    matrix = np.zeros((2 * k, 2 * k), dtype=complex)
    for coin in range(2):
        for x in range(k):
            amp = np.zeros(2, dtype=complex)
            amp[coin] = 1.0
            out = run_layout(layout, {lmap.position_to_oam(x): amp}, config.rho)
            col = coin * k + x
            for ell, vec in out.items():
                if not lmap.ell_min <= ell <= lmap.ell_max:
                    raise LayoutError(f"composed output mode {ell} outside window {layout.oam_window}")
                pos = lmap.oam_to_position(ell)
                vec = _as_vec(vec)
                matrix[pos, col] += vec[0]
                matrix[k + pos, col] += vec[1]
    deviation = np.max(np.abs(matrix.conj().T @ matrix - np.eye(2 * k)))
    if deviation > 1e-10:
        raise LayoutError(f"composition is not unitary (deviation {deviation:.3e})")
    return matrix


def operator_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def verify_step_layout(layout: OpticalLayout, config: WalkConfig, target: np.ndarray | None = None,
                       tol: float = 1e-10) -> tuple[bool, float]:
    """Compose the layout and compare against the step operator (or `target`)."""
    if target is None:
        target = step_operator(config)
    composed = compose_cycle_step(layout, config)
    distance = operator_distance(composed, target)
    return distance < tol, distance


# --- canonical layouts -------------------------------------------------------

def five_cycle_mz_elements() -> tuple[Element, ...]:
    """The canonical 5-cycle step: waveplate, J-plate, then a tree of four
    Mach-Zehnder sorters with spiral plates arranging the mod-5 wrap."""
    pi = math.pi
    return (
        HalfWavePlate(),
        JPlate(m_h=-1, m_v=1),
        ModeSorter(alpha=pi, beam="in", plus="even", minus="odd"),
        SpiralPhasePlate(m=-1, beam="odd"),
        ModeSorter(alpha=pi / 2, beam="odd", plus="residue0", minus="residue2"),
        ModeSorter(alpha=pi / 4, beam="residue0", plus="keep0", minus="wrap_low"),
        ModeSorter(alpha=pi / 4, offset=pi / 2, beam="residue2", plus="keep2", minus="wrap_high"),
        SpiralPhasePlate(m=1, beam="keep0"),
        SpiralPhasePlate(m=6, beam="wrap_low"),
        SpiralPhasePlate(m=1, beam="keep2"),
        SpiralPhasePlate(m=-4, beam="wrap_high"),
        FiberCombine(),
    )


def canonical_step_layout(k: int) -> OpticalLayout:
    """Canonical one-step layout: the MZ tree for k=5, the sorter-bank
    model for every other cycle length."""
    if k == 5:
        return OpticalLayout(five_cycle_mz_elements(), k=5)
    return OpticalLayout(
        (HalfWavePlate(), JPlate(m_h=-1, m_v=1), OamSorterBank(), FiberCombine()),
        k=k,
    )


def five_cycle_sorter_trace(coeffs: dict) -> list[tuple[str, dict]]:
    """Trace a pure OAM state through the 5-cycle sorting tree.

    `coeffs` maps labels in [-3, 3] (the post-J-plate window) to scalar
    amplitudes.  Returns the labeled intermediate states in propagation
    order: the two first-sorter ports, the two second-sorter ports, the
    four sorted single-mode outputs, and the recombined state.
    """
    for ell in coeffs:
        if not -3 <= ell <= 3:
            raise ValueError(f"input label {ell} outside [-3, 3]")
    pi = math.pi
    state = {ell: complex(amp) for ell, amp in coeffs.items() if amp != 0}
    even, odd = mz_sort(state, pi)
    odd_shifted = spp(odd, -1)
    residue0, residue2 = mz_sort(odd_shifted, pi / 2)
    keep0, wrap_low = mz_sort(residue0, pi / 4)
    keep2, wrap_high = mz_sort(residue2, pi / 4, offset=pi / 2)
    out_m1 = spp(keep2, 1)    # c_{-1} -> |-1>
    out_m2 = spp(wrap_high, -4)  # c_{3} -> |-2>
    out_p2 = spp(wrap_low, 6)    # c_{-3} -> |2>
    out_p1 = spp(keep0, 1)    # c_{1} -> |1>
    # the five output fibers (even bypass plus four sorted modes) together
    # carry the full input norm; they are merged coherently only in the
    # polarization-resolved composition, where colliding labels carry
    # orthogonal polarizations
    return [
        ("odd", odd),
        ("even", even),
        ("residue2", residue2),
        ("residue0", residue0),
        ("sorted_-1", out_m1),
        ("sorted_-2", out_m2),
        ("sorted_2", out_p2),
        ("sorted_1", out_p1),
    ]


# --- layout files -------------------------------------------------------------

_ANGLE_RE = re.compile(r"^(-?)(\d+(?:\.\d+)?)?\s*(pi)?(?:/(\d+(?:\.\d+)?))?$")


def _parse_angle(text: str) -> float:
    """Parse '0.5', 'pi', '-pi/4', '3pi/4' style angle literals."""
    m = _ANGLE_RE.match(text.strip())
    if not m or (m.group(2) is None and m.group(3) is None):
        raise ValueError(f"cannot parse angle {text!r}")
    sign = -1.0 if m.group(1) == "-" else 1.0
    value = float(m.group(2)) if m.group(2) else 1.0
    if m.group(3):
        value *= math.pi
    if m.group(4):
        value /= float(m.group(4))
    return sign * value


def _kv(parts: list[str], spec_name: str) -> dict:
    out = {}
    for part in parts:
        if "=" not in part:
            raise ValueError(f"{spec_name}: expected key=value, got {part!r}")
        key, val = part.split("=", 1)
        out[key] = val
    return out


def parse_layout(text: str, k: int) -> OpticalLayout:
    """Parse the plain-text layout format: one element per line, '#' comments.

    Elements: hwp [rho=], jplate [mh=] [mv=] [theta=], spp m= [beam=],
    mz alpha= [offset=] [beam=] plus= minus=, sorter_bank [high=] [low=],
    combine.
    """
    elements: list[Element] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, *parts = line.split()
        try:
            kv = _kv(parts, name)
            if name == "hwp":
                elements.append(HalfWavePlate(rho=float(kv["rho"]) if "rho" in kv else None))
            elif name == "jplate":
                elements.append(JPlate(
                    m_h=int(kv.get("mh", -1)),
                    m_v=int(kv.get("mv", 1)),
                    theta=_parse_angle(kv["theta"]) if "theta" in kv else 0.0,
                ))
            elif name == "spp":
                elements.append(SpiralPhasePlate(m=int(kv["m"]), beam=kv.get("beam")))
            elif name == "mz":
                elements.append(ModeSorter(
                    alpha=_parse_angle(kv["alpha"]),
                    offset=_parse_angle(kv["offset"]) if "offset" in kv else 0.0,
                    beam=kv.get("beam"),
                    plus=kv.get("plus", "plus"),
                    minus=kv.get("minus", "minus"),
                ))
            elif name == "sorter_bank":
                elements.append(OamSorterBank(
                    high=int(kv["high"]) if "high" in kv else None,
                    low=int(kv["low"]) if "low" in kv else None,
                ))
            elif name == "combine":
                elements.append(FiberCombine())
            else:
                raise ValueError(f"unknown element {name!r}")
        except (KeyError, ValueError) as exc:
            raise ValueError(f"layout line {lineno}: {exc}") from exc
    return OpticalLayout(tuple(elements), k=k)


def canonical_layout_text(k: int) -> str:
    """Text form of canonical_step_layout(k), writable to a layout file."""
    if k == 5:
        return (
            "# one step of the 5-cycle walk: coin, polarization-conditioned\n"
            "# OAM shift, Mach-Zehnder sorting tree with wraparound phase plates\n"
            "hwp\n"
            "jplate mh=-1 mv=1\n"
            "mz alpha=pi beam=in plus=even minus=odd\n"
            "spp m=-1 beam=odd\n"
            "mz alpha=pi/2 beam=odd plus=residue0 minus=residue2\n"
            "mz alpha=pi/4 beam=residue0 plus=keep0 minus=wrap_low\n"
            "mz alpha=pi/4 offset=pi/2 beam=residue2 plus=keep2 minus=wrap_high\n"
            "spp m=1 beam=keep0\n"
            "spp m=6 beam=wrap_low\n"
            "spp m=1 beam=keep2\n"
            "spp m=-4 beam=wrap_high\n"
            "combine\n"
        )
    return (
        f"# one step of the {k}-cycle walk via the wraparound sorter bank\n"
        "hwp\n"
        "jplate mh=-1 mv=1\n"
        "sorter_bank\n"
        "combine\n"
    )
