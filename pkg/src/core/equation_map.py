#!/usr/bin/env python3
"""
Equation Map
Registry binding every implemented equation tag to the operation that carries it,
with the generated markdown reference and its coverage gate
"""

import importlib
import logging
import os
from dataclasses import dataclass
from typing import List, Optional, Sequence

# Configure logging
logger = logging.getLogger(__name__)

OUT_OF_SCOPE = "out of scope"


@dataclass(frozen=True)
class EquationEntry:
    tag: str
    target: str
    note: str = ""

    @property
    def in_scope(self) -> bool:
        return not self.target.startswith(OUT_OF_SCOPE)


def _appendix_tags() -> List[str]:
    return [f"b.{n}" for n in range(1, 24)] + ["b.29"]


# Tags that must each be mapped onto an operation
IN_SCOPE_TAGS = tuple(
    _appendix_tags() + [f"4.{n}" for n in range(17, 33)] + ["5.1", "VI"]
)

REGISTRY = (
    EquationEntry("b.1", "model.steady_state", "steady-state Bloch solution, zero branch at rabi = 0"),
    EquationEntry("b.2", "model.saturation", "saturation parameter; inverted by model.rabi_from_saturation"),
    EquationEntry("b.3", "oracle.drift_matrix", "main channel on (d sigma_+, d sigma_-, d sigma_Z)"),
    EquationEntry("b.4", "oracle.drift_matrix", "satellite channel at -omega; conjugate via oracle.conjugate_satellite_matrix"),
    EquationEntry("b.5", "contour.chi_residue", "kerr-z retarded integral, also contour.chi_quadrature"),
    EquationEntry("b.6", "contour.chi_residue", "parametric-z, prefactor pole at -omega"),
    EquationEntry("b.7", "contour.chi_residue", "transverse, chi_xx = chi_yy"),
    EquationEntry("b.8", "spectra.build_kernel", "kerr-z denominator, factored poles with constant 1"),
    EquationEntry("b.9", "spectra.build_kernel", "parametric-z denominator, factored poles with constant -1"),
    EquationEntry("b.10", "triplet.mollow_poly", "Mollow cubic; equals oracle.determinant of the main drift matrix"),
    EquationEntry("b.11", "spectra.build_kernel", "kerr-z numerator, six terms"),
    EquationEntry("b.12", "spectra.build_kernel", "parametric-z numerator, seven terms"),
    EquationEntry("b.13", "spectra.transverse_quadratic", "transverse denominator |Q|^2"),
    EquationEntry("b.14", "spectra.build_kernel", "transverse numerator, four terms"),
    EquationEntry("b.15", "triplet.triplet_roots", "roots and regime classification"),
    EquationEntry("b.16", "asymptotics.chi_weak", "kerr-z; corrections from asymptotics.weak_field_corrections"),
    EquationEntry("b.17", "asymptotics.chi_weak", "parametric-z"),
    EquationEntry("b.18", "asymptotics.chi_weak", "transverse, rabi^2/4 corrections"),
    EquationEntry("b.19", "triplet.triplet_roots_saturation", "saturation asymptote; triplet.asymptote_deviation"),
    EquationEntry("b.20", "asymptotics.chi_saturation_center", "kerr-z"),
    EquationEntry("b.21", "asymptotics.chi_saturation_center", "parametric-z"),
    EquationEntry("b.22", "asymptotics.chi_saturation_sideband", "kerr-z, blue sideband"),
    EquationEntry("b.23", "asymptotics.chi_saturation_sideband", "parametric-z; red by Lambda -> -conj(Lambda)"),
    EquationEntry("b.29", "asymptotics.chi_saturation_transverse", "Autler-Townes doublet"),
    EquationEntry("4.17", "spectra.Component", "TRANSVERSE commutator <[sigma_-^(x), sigma_+^(x)]>"),
    EquationEntry("4.18", "spectra.Component", "z response split into KERR_Z and PARAMETRIC_Z; phase factor not propagated"),
    EquationEntry("4.19", "oracle.commutator_spectrum", "kerr-z pairing (d sigma_-, d sigma_+)"),
    EquationEntry("4.20", "oracle.commutator_spectrum", "parametric-z pairing (d sigma_-, d sigma_-)"),
    EquationEntry("4.21", "contour.evaluate", "transverse retarded transform"),
    EquationEntry("4.22", "contour.evaluate", "kerr-z retarded transform"),
    EquationEntry("4.23", "contour.evaluate", "parametric-z retarded transform, sign from Component.sign"),
    EquationEntry("4.24", "oracle.resolvent_row", "Fourier-domain solve of the linearized equations"),
    EquationEntry("4.25", "oracle.commutator_spectrum", "kerr-z spectral identity"),
    EquationEntry("4.26", "oracle.commutator_spectrum", "parametric-z identity, solves at +w and -w"),
    EquationEntry("4.27", "quadrature.plemelj_integral", "retarded branch; residue form in contour.upper_residue_sum"),
    EquationEntry("4.28", "oracle.commutator_spectrum", "conventional Fourier image"),
    EquationEntry("4.29", "oracle.DiffusionMatrix", "adjoint index map used by DiffusionMatrix.moment"),
    EquationEntry("4.30", "oracle.DiffusionMatrix", "<F_q^dagger F_q'> = 2 D_qq'"),
    EquationEntry("4.31", "oracle.diffusion_matrix", "main channel, indices (+, -, Z)"),
    EquationEntry("4.32", "oracle.diffusion_matrix", "satellite channel, indices (+x, -x, xb, bx)"),
    EquationEntry("5.1", "model.density_scale", "scale = 0.75 n0 lambdabar^3"),
    EquationEntry("VI", "model.renormalize_dense", "gamma -> sqrt(epsilon) gamma in the transparency domain"),
    EquationEntry("2.6", f"{OUT_OF_SCOPE} (propagation)"),
    EquationEntry("3.17-3.26", f"{OUT_OF_SCOPE} (multi-atom Kubo derivation)"),
    EquationEntry("6.1-6.2", f"{OUT_OF_SCOPE} (dense-medium local-field dynamics)"),
    EquationEntry("a.1-a.*", f"{OUT_OF_SCOPE} (Hamiltonian derivation)"),
)

NOTES = {
    "Units": (
        "Frequencies are in units of gamma unless --gamma is given. chi is reported in units "
        "of n0 d0^2 / (hbar gamma); --density-lambda3 sets the scale to 0.75 n0 lambdabar^3."
    ),
    "Sign convention": (
        "chi = -scale * int dw/2pi K(w) / (sign*omega - w + i0), sign = -1 for parametric-z. "
        "At rabi = 0 the kerr-z and transverse components reduce to -scale / (omega + delta + i gamma/2)."
    ),
    "Determinant identity": (
        "Expanding the main drift determinant gives (delta^2 - z^2)(z + i gamma/2) + rabi^2 z "
        "with z = omega + i gamma/2, which is the Mollow cubic term for term."
    ),
    "Mixed moments": (
        "Only <F_q^dagger F_q'> is tabulated. Other moments follow from <F_q F_q'> = 2 D_(adj q)q' "
        "with the adjoint map + <-> -, Z <-> Z, +x <-> -x, xb <-> bx."
    ),
}

TRANSCRIPTION = {
    "kerr-z numerator": (
        "gamma |M|^2",
        "-gamma rabi^4 delta w",
        "(gamma/2) rabi^2 (delta - w - i gamma/2) M*",
        "(gamma/2) rabi^2 (delta - w + i gamma/2) M",
        "gamma s_- rabi (delta + w - i gamma/2)[(delta - w + i gamma/2) M - rabi^2 w (delta - w - i gamma/2)]",
        "gamma s_+ rabi (delta + w + i gamma/2)[(delta - w - i gamma/2) M* - rabi^2 w (delta - w + i gamma/2)]",
    ),
    "parametric-z numerator": (
        "(gamma/2) rabi^2 (delta - w + i gamma/2) M",
        "(gamma/2) rabi^2 (delta + w + i gamma/2) M*",
        "-gamma rabi^4 delta w",
        "gamma s_- rabi (delta + w - i gamma/2)(delta - w + i gamma/2) M",
        "gamma s_- rabi (delta - w - i gamma/2)(delta + w + i gamma/2) M*",
        "-gamma s_- rabi^3 w (delta + w - i gamma/2)(delta - w - i gamma/2)",
        "-gamma s_+ rabi^3 w (delta + w + i gamma/2)(delta - w + i gamma/2)",
    ),
    "transverse numerator": (
        "16 gamma (w^2 + gamma^2)",
        "4 rabi^2 gamma (1/2 + s_Z)",
        "8 rabi gamma (w + i gamma) s_-",
        "8 rabi gamma (w - i gamma) s_+",
    ),
}


def coverage_gaps(registry: Sequence[EquationEntry] = REGISTRY) -> List[str]:
    """In-scope tags with no mapped operation"""
    mapped = {entry.tag for entry in registry if entry.in_scope}
    return [tag for tag in IN_SCOPE_TAGS if tag not in mapped]


def unresolved_targets(registry: Sequence[EquationEntry] = REGISTRY) -> List[str]:
    """Mapped targets that do not name an attribute of a core module"""
    missing = []
    for entry in registry:
        if not entry.in_scope:
            continue
        module_name, _, attribute = entry.target.partition(".")
        try:
            module = importlib.import_module(f".{module_name}", __package__)
        except ImportError:
            missing.append(entry.target)
            continue
        if not hasattr(module, attribute):
            missing.append(entry.target)
    return missing


def equation_map(registry: Sequence[EquationEntry] = REGISTRY) -> str:
    """Render the registry, notes and transcription tables as markdown"""
    lines = ["# Equation map", "", "| Equation | Implementation | Notes |", "|---|---|---|"]
    for entry in registry:
        lines.append(f"| ({entry.tag}) | {entry.target} | {entry.note} |")

    for title, body in NOTES.items():
        lines.extend(["", f"## {title}", "", body])

    for title, terms in TRANSCRIPTION.items():
        lines.extend(["", f"## {title.capitalize()}", "", "| Term | Expression |", "|---|---|"])
        for index, term in enumerate(terms, start=1):
            lines.append(f"| {index} | {term} |")
    return "\n".join(lines) + "\n"


def write_equation_map(output_path: str, registry: Optional[Sequence[EquationEntry]] = None) -> List[str]:
    """
    Write the markdown map and return the coverage problems

    Args:
        output_path: Markdown file to write
        registry: Registry to render, defaults to REGISTRY

    Returns:
        Uncovered tags and unresolved targets; empty when the gate passes
    """
    entries = REGISTRY if registry is None else registry
    directory = os.path.dirname(output_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(output_path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(equation_map(entries))
    logger.info(f"Equation map written to {output_path}")

    problems = [f"unmapped ({tag})" for tag in coverage_gaps(entries)]
    problems += [f"unresolved {target}" for target in unresolved_targets(entries)]
    for problem in problems:
        logger.error(f"Equation map coverage: {problem}")
    return problems
