"""Published reference values used by the reproduce-* commands.

Values are kept as strings so the number of printed decimals (and hence the
"one unit in the last digit" tolerance) is known.
"""

from __future__ import annotations

from dataclasses import dataclass


def last_digit_unit(text: str) -> float:
    """10^-d where d is the number of decimals printed in ``text``."""
    _, _, frac = text.strip().lstrip("+-").partition(".")
    return 10.0 ** -len(frac)


# Bound spectrum for (u0, u1, u2) = (1, -50, 2), units of -lambda^2, by basis size.
TABLE1_U = (1.0, -50.0, 2.0)
TABLE1 = {
    4: ["27.878950096075", "14.799140053549", "5.854540858323", "0.994844848888"],
    6: ["27.878950096074", "14.799140053574", "5.854541479288", "0.996376819202"],
    10: ["27.878950096074", "14.799140053574", "5.854541479288", "0.996376819225"],
    100: ["27.878950096074", "14.799140053574", "5.854541479288", "0.996376819225"],
}

# Same potential at N = 50, one column per method (units of -lambda^2).
TABLE2_N = 50
TABLE2 = {
    "PPS": ["27.878950096074", "14.799140053574", "5.854541479288", "0.996376819225"],
    "HD": ["27.878950096074", "14.79914005357", "5.85454148", "0.9967"],
    "CS": ["27.878950096074", "14.799140053574", "5.854541479288", "0.996376819"],
}
# basis scale for the CS column (not tabulated; any rho in roughly 8..15 works)
TABLE2_CS_RHO = 10.0


@dataclass(frozen=True)
class Table3Row:
    ell: int
    bound: list[str]
    rho_bound: float
    resonances: list[tuple[str, str]]  # (Re E, -Im E)
    rho_resonance: float


# (u0, u1, u2) = (2, -80, 120), units of lambda^2, N = 50,
# theta = 0 for bound states and 0.8 for resonances.
TABLE3_U = (2.0, -80.0, 120.0)
TABLE3_N = 50
TABLE3_THETA = 0.8
# Gauss-Laguerre order that reproduces every printed resonance digit
TABLE3_KQUAD = TABLE3_N + 1
TABLE3 = [
    Table3Row(0, ["-27.66703017245", "-4.96995355885"], 40.0,
              [("5.1432", "1.73656"), ("5.7767", "12.3187"), ("1.61", "29.27")], 40.0),
    Table3Row(1, ["-21.21593606495", "-0.8517865495"], 25.0,
              [("6.2706", "3.4478"), ("6.038", "15.8152"), ("1.154", "33.87")], 40.0),
    Table3Row(2, ["-11.585302647445"], 50.0,
              [("4.3251234", "0.244407"), ("7.998469", "7.512996"), ("6.5784", "22.0054"), ("0.53", "41.6")], 50.0),
    Table3Row(3, ["-1.44701935596"], 30.0,
              [("8.59697", "2.2622"), ("10.2802", "13.407"), ("7.414", "29.9473")], 35.0),
]

# V1 sweep at fixed (V0, V2) = (2, 120) lambda^2, ell = 0
SWEEP_V0_V2 = (2.0, 120.0)
SWEEP_N = 100
SWEEP_THETA = 0.875  # 2 theta = 7/4
SWEEP_RHO = 40.0
SWEEP_RANGE = (-100.0, -40.0)
