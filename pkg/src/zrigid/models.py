"""Ready-made model specs used by the demos, tests and acceptance suite."""

from __future__ import annotations

from . import realspan as rs
from .profinite import from_prime_component
from .zgroup import DDim, LGen, Model, ModelSpec, ORDERED, UNORDERED, build_model

# 1 at the prime 2, 0 at every other prime
U_TWO = from_prime_component(2, 1, 0)


def g_exm_spec(mode: str = ORDERED) -> ModelSpec:
    """D'' = Q, L'' = Q*sqrt(2): rigid in ordered mode since D'' is finite-dimensional."""
    name = "G_exm" if mode == ORDERED else "G_exm_unordered"
    return ModelSpec(mode, (DDim("d0", rs.rational(1)),),
                     (LGen("u", U_TWO, rs.sqrt_rational(2)),), rs.FINITE, name)


def g_laurent_spec(l_value: str = "inv(pi-1)") -> ModelSpec:
    """D'' = Q[pi, 1/pi], L'' = Q*l_value; gamma = pi is admissible for inv(pi-1)."""
    name = "G_laurent" if l_value == "inv(pi-1)" else f"G_laurent[{l_value}]"
    return ModelSpec(ORDERED, (), (LGen("u", U_TWO, rs.parse_real(l_value)),), rs.LAURENT, name)


def leibnizian_spec() -> ModelSpec:
    return ModelSpec(ORDERED, (), (LGen("u", U_TWO, rs.sqrt_rational(2)),), rs.FINITE,
                     "leibnizian")


def l_not_cofinal_spec() -> ModelSpec:
    return ModelSpec(ORDERED, (DDim("d0", rs.rational(1)),),
                     (LGen("u", U_TWO, rs.ZERO, rs.sqrt_rational(2)),), rs.FINITE, "l_not_cofinal")


def d_not_cofinal_spec() -> ModelSpec:
    return ModelSpec(ORDERED, (DDim("d0", rs.ZERO, rs.rational(1)),),
                     (LGen("u", U_TWO, rs.sqrt_rational(2)),), rs.FINITE, "d_not_cofinal")


def d_non_archimedean_spec() -> ModelSpec:
    return ModelSpec(ORDERED, (DDim("d0", rs.rational(1)), DDim("d1", rs.ZERO, rs.rational(1))),
                     (LGen("u", U_TWO, rs.sqrt_rational(2)),), rs.FINITE, "d_non_archimedean")


CATALOG = {
    "G_exm": g_exm_spec,
    "G_exm_unordered": lambda: g_exm_spec(UNORDERED),
    "G_laurent": g_laurent_spec,
    "G_laurent_sqrt2": lambda: g_laurent_spec("sqrt(2)"),
    "leibnizian": leibnizian_spec,
    "l_not_cofinal": l_not_cofinal_spec,
    "d_not_cofinal": d_not_cofinal_spec,
    "d_non_archimedean": d_non_archimedean_spec,
}


def builtin(name: str) -> Model:
    return build_model(CATALOG[name]())
