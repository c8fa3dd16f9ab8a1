"""Naive pure-Python steppers used as an oracle for the compiled kernels.

Written independently of the package: plain nested loops over lists, the
update formulas evaluated term by term in the order they are written.
"""

import math


def _to_lists(a):
    return [list(map(float, row)) for row in a]


def _dry_border(new, ny, nx):
    for j in range(nx):
        new[0][j] = 0.0
        new[ny - 1][j] = 0.0
    for i in range(ny):
        new[i][0] = 0.0
        new[i][nx - 1] = 0.0
    return new


def incremental_step(h, w, eta):
    ny, nx = len(h), len(h[0])
    new = [[0.0] * nx for _ in range(ny)]
    for i in range(1, ny - 1):
        hu, hc_row, hd = h[i - 1], h[i], h[i + 1]
        wu, wc_row, wd = w[i - 1], w[i], w[i + 1]
        for j in range(1, nx - 1):
            hc = hc_row[j]
            wc = wc_row[j]
            # G(x+1) + G(x-1) + G(y+1) + G(y-1) - 4 G as a sum of differences.
            lap = (hc_row[j + 1] - hc) + (wc_row[j + 1] - wc)
            lap = lap + ((hc_row[j - 1] - hc) + (wc_row[j - 1] - wc))
            lap = lap + ((hd[j] - hc) + (wd[j] - wc))
            lap = lap + ((hu[j] - hc) + (wu[j] - wc))
            new[i][j] = max(wc + eta * lap, 0.0)
    return _dry_border(new, ny, nx)


def flood_effuse_step(h, w, t, eta):
    ny, nx = len(h), len(h[0])
    peak = max(max(row) for row in h)
    decay = math.exp(-t)
    new = [[0.0] * nx for _ in range(ny)]
    for i in range(1, ny - 1):
        hu, hc_row, hd = h[i - 1], h[i], h[i + 1]
        wu, wc_row, wd = w[i - 1], w[i], w[i + 1]
        for j in range(1, nx - 1):
            hc = hc_row[j]
            wc = wc_row[j]
            flood = ((peak - hc) - wc) * decay
            eff = 0.0
            eff = eff + min((hc_row[j + 1] - hc) + (wc_row[j + 1] - wc), 0.0)
            eff = eff + min((hc_row[j - 1] - hc) + (wc_row[j - 1] - wc), 0.0)
            eff = eff + min((hd[j] - hc) + (wd[j] - wc), 0.0)
            eff = eff + min((hu[j] - hc) + (wu[j] - wc), 0.0)
            new[i][j] = max((wc + flood) + eta * eff, 0.0)
    return _dry_border(new, ny, nx)


def run(h, method, eta, iterations, w0=None):
    """Return the list of water levels after each of ``iterations`` steps."""
    h = _to_lists(h)
    ny, nx = len(h), len(h[0])
    w = _to_lists(w0) if w0 is not None else [[0.0] * nx for _ in range(ny)]
    history = []
    for t in range(iterations):
        if method == "incremental":
            w = incremental_step(h, w, eta)
        else:
            w = flood_effuse_step(h, w, t, eta)
        history.append(w)
    return history
