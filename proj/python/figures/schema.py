"""Column schemas of the tables written by gct-sim."""

from pathlib import Path

import pandas as pd

PARAMS = ["point", "dim", "L", "N", "alpha", "chi", "epsilon", "realization"]
OBSERVABLES = [
    "t", "Sx_mean", "Sy_mean", "Sz_mean", "var_min", "var_max", "theta_min", "xi2", "qfi_sens",
    "Sx_err", "Sy_err", "Sz_err", "var_min_err", "var_max_err", "theta_min_err", "xi2_err", "qfi_sens_err", "valid",
]

SCHEMAS = {
    "dtwa.csv": PARAMS + OBSERVABLES,
    "exact.csv": PARAMS + OBSERVABLES,
    "floquet.csv": PARAMS + ["delta", "dt_step"] + OBSERVABLES,
    "spinwave_variances.csv": PARAMS + ["t", "var_min", "var_max", "hp_valid"],
    "spinwave_correlators.csv": PARAMS + ["t", "r_x", "r_y", "C_min", "C_max"],
    "chi_c.csv": ["dim", "L", "N", "alpha", "chi_c"],
    "gap.csv": ["N", "alpha", "dE_gp", "dE_sw"],
}


class SchemaError(Exception):
    pass


def load(data_dir, name, optional=False):
    """Read a table and check its header exactly. Returns None for a missing optional table."""
    path = Path(data_dir) / name
    if not path.exists():
        if optional:
            return None
        raise SchemaError(f"{path}: missing input")
    frame = pd.read_csv(path)
    expected = SCHEMAS[name]
    if list(frame.columns) != expected:
        raise SchemaError(f"{path}: columns {list(frame.columns)} do not match {expected}")
    return frame
