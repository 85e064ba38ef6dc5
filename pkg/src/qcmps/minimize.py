"""Dense-inverse-Hessian BFGS with a strong Wolfe line search.

Self-contained so optimization runs are deterministic bit for bit.  The line
search follows the bracket-and-zoom scheme with cubic interpolation and
bisection safeguards; accepted steps satisfy both the sufficient-decrease and
the strong curvature condition (c1 = 1e-4, c2 = 0.9).
"""

import dataclasses

import numpy as np

_C1 = 1e-4
_C2 = 0.9


@dataclasses.dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    n_iter: int
    status: str
    trace: list


def _cubic_step(a_lo, f_lo, d_lo, a_hi, f_hi):
    """Minimizer of the cubic through (a_lo, f_lo, d_lo) and (a_hi, f_hi); None if ill-posed."""
    h = a_hi - a_lo
    if h == 0.0:
        return None
    # quadratic fallback built into the cubic when curvature degenerates
    denom = f_hi - f_lo - d_lo * h
    if denom == 0.0:
        return None
    a_quad = a_lo - 0.5 * d_lo * h * h / denom
    if not np.isfinite(a_quad):
        return None
    return a_quad


def _zoom(phi, a_lo, a_hi, f_lo, d_lo, f0, d0, max_iter=30):
    f_hi, _ = phi(a_hi, need_grad=False)
    for _ in range(max_iter):
        a_j = _cubic_step(a_lo, f_lo, d_lo, a_hi, f_hi)
        lo, hi = min(a_lo, a_hi), max(a_lo, a_hi)
        width = hi - lo
        if a_j is None or not (lo + 0.1 * width <= a_j <= hi - 0.1 * width):
            a_j = 0.5 * (a_lo + a_hi)
        f_j, _ = phi(a_j, need_grad=False)
        if f_j > f0 + _C1 * a_j * d0 or f_j >= f_lo:
            a_hi, f_hi = a_j, f_j
        else:
            _, d_j = phi(a_j, need_grad=True)
            if abs(d_j) <= -_C2 * d0:
                return a_j
            if d_j * (a_hi - a_lo) >= 0.0:
                a_hi, f_hi = a_lo, f_lo
            a_lo, f_lo, d_lo = a_j, f_j, d_j
        if abs(a_hi - a_lo) < 1e-14:
            break
    return a_lo if f_lo < f0 else None


def _line_search(phi, f0, d0, alpha0=1.0, alpha_max=64.0, max_iter=12):
    """Strong Wolfe step size, or None when the search fails."""
    a_prev, f_prev, d_prev = 0.0, f0, d0
    a = alpha0
    for i in range(max_iter):
        f_a, _ = phi(a, need_grad=False)
        if f_a > f0 + _C1 * a * d0 or (i > 0 and f_a >= f_prev):
            return _zoom(phi, a_prev, a, f_prev, d_prev, f0, d0)
        _, d_a = phi(a, need_grad=True)
        if abs(d_a) <= -_C2 * d0:
            return a
        if d_a >= 0.0:
            return _zoom(phi, a, a_prev, f_a, d_a, f0, d0)
        a_prev, f_prev, d_prev = a, f_a, d_a
        a = min(2.0 * a, alpha_max)
        if a == a_prev:
            break
    return None


def _make_phi(fun, grad, x, p):
    cache = {}

    def phi(a, need_grad):
        if a not in cache:
            xa = x + a * p
            cache[a] = [float(fun(xa)), None, xa]
        entry = cache[a]
        if need_grad and entry[1] is None:
            entry[1] = np.asarray(grad(entry[2]), dtype=float)
        return entry[0], None if entry[1] is None else float(entry[1] @ p)

    return phi, cache


def minimize_bfgs(fun, grad, x0, max_iter=500, grad_tol=1e-5, f_tol=1e-10, callback=None):
    """Minimize fun with analytic-quality grad; both take one ndarray argument.

    The trace records (iteration, f, inf-norm of gradient) at the start point
    and after every accepted step; the objective column is non-increasing.
    A failed line search or a sub-f_tol step first retries from a reset
    (identity) inverse Hessian; the run only stops when the steepest-descent
    retry fails too.
    """
    x = np.asarray(x0, dtype=float).copy()
    n = x.size
    f = float(fun(x))
    g = np.asarray(grad(x), dtype=float)
    hinv = np.eye(n)
    h_identity = True
    trace = [(0, f, float(np.abs(g).max()))]
    if callback is not None:
        callback(0, x, f, g)
    status = "max_iter"
    it = 0

    def first_alpha():
        return min(1.0, 1.0 / max(1.0, float(np.abs(g).sum())))

    for it in range(1, max_iter + 1):
        g_inf = float(np.abs(g).max())
        if g_inf < grad_tol:
            status = "grad_tol"
            it -= 1
            break
        p = -(hinv @ g)
        d0 = float(g @ p)
        if d0 >= 0.0 and not h_identity:
            # stale curvature; restart from steepest descent
            hinv = np.eye(n)
            h_identity = True
            p = -g
            d0 = float(g @ p)

        phi, cache = _make_phi(fun, grad, x, p)
        alpha0 = first_alpha() if h_identity else 1.0
        alpha = _line_search(phi, f, d0, alpha0=alpha0)
        if (alpha is None or alpha <= 0.0) and not h_identity:
            hinv = np.eye(n)
            h_identity = True
            p = -g
            d0 = float(g @ p)
            phi, cache = _make_phi(fun, grad, x, p)
            alpha = _line_search(phi, f, d0, alpha0=first_alpha())
        if alpha is None or alpha <= 0.0:
            status = "line_search"
            break
        was_fresh = h_identity
        f_new, _ = phi(alpha, need_grad=False)
        entry = cache[alpha]
        if entry[1] is None:
            entry[1] = np.asarray(grad(entry[2]), dtype=float)
        g_new, x_new = entry[1], entry[2]

        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-10 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            if h_identity:
                hinv *= sy / float(y @ y)
            rho = 1.0 / sy
            v = np.eye(n) - rho * np.outer(s, y)
            hinv = v @ hinv @ v.T + rho * np.outer(s, s)
            h_identity = False
        df = f - f_new
        x, f, g = x_new, f_new, g_new
        trace.append((it, f, float(np.abs(g).max())))
        if callback is not None:
            callback(it, x, f, g)
        if df < f_tol:
            if was_fresh:
                status = "f_tol"
                break
            hinv = np.eye(n)
            h_identity = True
    return MinimizeResult(x=x, fun=f, grad=g, n_iter=it, status=status, trace=trace)
