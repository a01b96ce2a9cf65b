"""Reference values, kept as the printed strings.

The spectrum table lists lambda_n for n = 1..6 (rows) and N = 2..8, inf (columns);
the ground-state table compares a trial-function ground state with the numerical one.
"""

from __future__ import annotations

import math

TABLE2_PRINTED: dict[float, tuple[str, ...]] = {
    2: ("1", "3", "5", "7", "9", "11"),
    3: ("1.023", "3.451", "6.370", "9.522", "12.87", "16.37"),
    4: ("1.060", "3.800", "7.456", "11.64", "16.26", "21.24"),
    5: ("1.102", "4.089", "8.337", "13.43", "19.19", "25.54"),
    6: ("1.145", "4.339", "9.073", "14.94", "21.71", "29.30"),
    7: ("1.186", "4.559", "9.700", "16.23", "23.90", "32.60"),
    8: ("1.226", "4.756", "10.25", "17.34", "25.81", "35.50"),
    math.inf: ("2.467", "9.870", "22.21", "39.48", "61.69", "88.83"),
}

TABLE1_TRIAL_PRINTED: dict[int, str] = {
    2: "1", 3: "1.053", 4: "1.157", 5: "1.288", 6: "1.434", 7: "1.592", 8: "1.758",
}
TABLE1_NUMERICAL_PRINTED: dict[int, str] = {
    2: "1.000", 3: "1.023", 4: "1.060", 5: "1.102", 6: "1.145", 7: "1.186", 8: "1.226",
}

REFERENCE_N_VALUES: tuple[float, ...] = (2, 3, 4, 5, 6, 7, 8, math.inf)
REFERENCE_LEVELS = 6


def table2_value(N: float, n: int) -> float:
    return float(TABLE2_PRINTED[N][n - 1])


def last_digit_unit(printed: str, sig_figs: int = 4) -> float:
    """Size of one unit in the last digit at ``sig_figs`` significant figures.

    The N = 2 column is printed as bare integers; it is compared at the same
    four-figure precision as the rest of the table.
    """
    x = float(printed)
    return 10.0 ** (math.floor(math.log10(abs(x))) - (sig_figs - 1))
