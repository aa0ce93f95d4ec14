"""Rigorous counting of relative equilibria in a planar four-body problem.

The package certifies, with outward-rounded interval arithmetic, how many
central configurations a small fourth body admits when three primaries sit
at the vertices of a rotating equilateral triangle.  The public surface is
re-exported lazily here; the heavy lifting lives in the submodules:

``interval``
    Scalar interval arithmetic with directed rounding and an explicit
    empty set.
``taylor``
    Interval Taylor series in one and two variables, plus jets of curves
    defined implicitly by one equation of a two-component map.
``potential``
    The amended potential of the problem, its gradient in desingularised
    form, and coarse exclusion estimates near and far from the primaries.
``solve``
    The interval Krawczyk operator and adaptive bisection counting of
    gradient zeros for a fixed mass parameter.
``bifurcation``
    Certification of solution-count transitions: nondegeneracy, fold
    normal forms, and Miranda-style existence on candidate clusters.
``small_masses``
    Closed-form perturbation bounds that settle the count when one or two
    primaries are arbitrarily light.
``search``
    The top-level parameter-space searches and the combined run that
    yields the global count partition.
``cli``
    Command-line entry point (``pcr4bp``).
"""

from typing import Any

__version__ = "0.1.0"

_EXPORTS = {
    "EMPTY": "interval",
    "IBox": "interval",
    "Interval": "interval",
    "ParamRect": "potential",
    "KrawczykOutcome": "solve",
    "count_solutions": "solve",
    "krawczyk": "solve",
    "Classification": "bifurcation",
    "ClassKind": "bifurcation",
    "ComponentCertificate": "bifurcation",
    "EquilibriumField": "bifurcation",
    "Mechanism": "bifurcation",
    "VectorField": "bifurcation",
    "certify_single_component": "bifurcation",
    "classify_inner": "bifurcation",
    "max_k_solutions": "bifurcation",
    "miranda_exists": "bifurcation",
    "no_bifurcation": "bifurcation",
    "AuditRow": "small_masses",
    "BranchEnclosure": "small_masses",
    "Case1Bounds": "small_masses",
    "CertificationError": "small_masses",
    "DISK_RADIUS": "small_masses",
    "DeltaCertificate": "small_masses",
    "EigenBounds": "small_masses",
    "HigherOrderBounds": "small_masses",
    "Phi0Enclosure": "small_masses",
    "PolarDerivativeBounds": "small_masses",
    "SMALL_MASS_LIMIT": "small_masses",
    "SectorCertificate": "small_masses",
    "branch_expansions": "small_masses",
    "case1_bounds": "small_masses",
    "certify_small_mass_region": "small_masses",
    "constants_audit": "small_masses",
    "delta_bounds": "small_masses",
    "eigen_audit": "small_masses",
    "eigen_bounds": "small_masses",
    "format_constants_audit": "small_masses",
    "g_r33_bounds": "small_masses",
    "h_bounds": "small_masses",
    "higher_order_bounds": "small_masses",
    "phi0_branches": "small_masses",
    "polar_derivative_bounds": "small_masses",
    "radial_nondegeneracy_case1": "small_masses",
    "sector_curves": "small_masses",
    "RunReport": "search",
    "full_proof": "search",
    "run_strategy": "search",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name: str) -> Any:
    try:
        module_name = _EXPORTS[name]
    except KeyError:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}") from None
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    value = getattr(module, name)
    globals()[name] = value
    return value


def __dir__() -> list[str]:
    return __all__
