import numpy as np
import pytest


@pytest.fixture
def power_table(tmp_path):
    """Tabulated survival function sampled from x^(-0.3), 8 points per decade."""
    path = tmp_path / "power.csv"
    xs = 10.0 ** (np.arange(0, 13 * 8 + 1) / 8.0)
    lines = ["x,tail"]
    lines += [f"{float(x)!r},{float(x) ** -0.3!r}" for x in xs]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def table_factory(tmp_path):
    """Write an x,tail CSV from rows of (x, tail) pairs and return its path."""
    counter = [0]

    def write(rows, header="x,tail"):
        counter[0] += 1
        path = tmp_path / f"table{counter[0]}.csv"
        body = "\n".join(f"{x},{t}" for x, t in rows)
        path.write_text(f"{header}\n{body}\n" if body else f"{header}\n")
        return str(path)

    return write
