"""Pure-Python tridiagonal sweeps, used when the compiled extension is absent.

Both functions mirror the compiled kernels exactly: same in/out conventions,
same zero-pivot detection (returning the failing row index, -1 on success).
The dtype of the inputs is respected, so the block sweep runs in extended
precision when handed ``np.longdouble`` arrays.
"""

from __future__ import annotations

import numpy as np


def thomas_solve(sub, diag, sup, rhs, out) -> int:
    """Single forward/backward Thomas sweep for a scalar tridiagonal system.

    sub[i], diag[i], sup[i] are the coefficients of row i (sub[0] and
    sup[n-1] are ignored).  Returns -1 on success, or the row index of a
    zero pivot.
    """
    n = diag.shape[0]
    cp = np.empty_like(diag)
    dp = np.empty_like(diag)
    if diag[0] == 0.0:
        return 0
    cp[0] = sup[0] / diag[0]
    dp[0] = rhs[0] / diag[0]
    for i in range(1, n):
        piv = diag[i] - sub[i] * cp[i - 1]
        if piv == 0.0:
            return i
        cp[i] = sup[i] / piv
        dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / piv
    out[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = dp[i] - cp[i] * out[i + 1]
    return -1


def block_thomas_solve(sub, diag, sup, rhs, out) -> int:
    """Block Thomas sweep for a tridiagonal system of 2x2 blocks.

    sub, diag, sup have shape (n, 2, 2); rhs and out have shape (n, 2).
    Returns -1 on success, or the row index where a pivot block is singular.
    """
    n = diag.shape[0]
    cp = np.empty_like(diag)
    dp = np.empty_like(rhs)

    m00, m01, m10, m11 = diag[0, 0, 0], diag[0, 0, 1], diag[0, 1, 0], diag[0, 1, 1]
    det = m00 * m11 - m01 * m10
    if det == 0.0:
        return 0
    # inv(M) = [[m11, -m01], [-m10, m00]] / det
    cp[0, 0, 0] = (m11 * sup[0, 0, 0] - m01 * sup[0, 1, 0]) / det
    cp[0, 0, 1] = (m11 * sup[0, 0, 1] - m01 * sup[0, 1, 1]) / det
    cp[0, 1, 0] = (-m10 * sup[0, 0, 0] + m00 * sup[0, 1, 0]) / det
    cp[0, 1, 1] = (-m10 * sup[0, 0, 1] + m00 * sup[0, 1, 1]) / det
    dp[0, 0] = (m11 * rhs[0, 0] - m01 * rhs[0, 1]) / det
    dp[0, 1] = (-m10 * rhs[0, 0] + m00 * rhs[0, 1]) / det

    for i in range(1, n):
        s00, s01, s10, s11 = sub[i, 0, 0], sub[i, 0, 1], sub[i, 1, 0], sub[i, 1, 1]
        # M = diag[i] - sub[i] @ cp[i-1]
        m00 = diag[i, 0, 0] - (s00 * cp[i - 1, 0, 0] + s01 * cp[i - 1, 1, 0])
        m01 = diag[i, 0, 1] - (s00 * cp[i - 1, 0, 1] + s01 * cp[i - 1, 1, 1])
        m10 = diag[i, 1, 0] - (s10 * cp[i - 1, 0, 0] + s11 * cp[i - 1, 1, 0])
        m11 = diag[i, 1, 1] - (s10 * cp[i - 1, 0, 1] + s11 * cp[i - 1, 1, 1])
        det = m00 * m11 - m01 * m10
        if det == 0.0:
            return i
        if i < n - 1:
            cp[i, 0, 0] = (m11 * sup[i, 0, 0] - m01 * sup[i, 1, 0]) / det
            cp[i, 0, 1] = (m11 * sup[i, 0, 1] - m01 * sup[i, 1, 1]) / det
            cp[i, 1, 0] = (-m10 * sup[i, 0, 0] + m00 * sup[i, 1, 0]) / det
            cp[i, 1, 1] = (-m10 * sup[i, 0, 1] + m00 * sup[i, 1, 1]) / det
        r0 = rhs[i, 0] - (s00 * dp[i - 1, 0] + s01 * dp[i - 1, 1])
        r1 = rhs[i, 1] - (s10 * dp[i - 1, 0] + s11 * dp[i - 1, 1])
        dp[i, 0] = (m11 * r0 - m01 * r1) / det
        dp[i, 1] = (-m10 * r0 + m00 * r1) / det

    out[n - 1, 0] = dp[n - 1, 0]
    out[n - 1, 1] = dp[n - 1, 1]
    for i in range(n - 2, -1, -1):
        out[i, 0] = dp[i, 0] - (cp[i, 0, 0] * out[i + 1, 0] + cp[i, 0, 1] * out[i + 1, 1])
        out[i, 1] = dp[i, 1] - (cp[i, 1, 0] * out[i + 1, 0] + cp[i, 1, 1] * out[i + 1, 1])
    return -1
