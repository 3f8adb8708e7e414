import numpy as np

from ..errors import NumericalBlowupError, ConfigurationError


'''
Vectorized integrators of the canonical equations augmented with the action
equation dS/dt = L(q, p). States are component-first arrays (dim, ...); the
action has the trailing shape only. Steps may be negative (backward in time).
'''

# fourth order Yoshida composition weights
_CBRT2 = 2.0 ** (1.0 / 3.0)
_W1 = 1.0 / (2.0 - _CBRT2)
_W0 = -_CBRT2 / (2.0 - _CBRT2)


def rk4_step(H, q, p, s, h):
    def rhs(q, p):
        return H.velocity_map(p), H.force(q), H.lagrangian(q, p)

    dq1, dp1, ds1 = rhs(q, p)
    dq2, dp2, ds2 = rhs(q + 0.5 * h * dq1, p + 0.5 * h * dp1)
    dq3, dp3, ds3 = rhs(q + 0.5 * h * dq2, p + 0.5 * h * dp2)
    dq4, dp4, ds4 = rhs(q + h * dq3, p + h * dp3)

    q = q + (h / 6.0) * (dq1 + 2 * dq2 + 2 * dq3 + dq4)
    p = p + (h / 6.0) * (dp1 + 2 * dp2 + 2 * dp3 + dp4)
    if s is not None:
        s = s + (h / 6.0) * (ds1 + 2 * ds2 + 2 * ds3 + ds4)
    return q, p, s


def verlet_step(H, q, p, s, h):
    '''Stormer-Verlet kick-drift-kick; the action uses the trapezoid rule.'''
    L0 = H.lagrangian(q, p) if s is not None else None
    p_half = p + 0.5 * h * H.force(q)
    q = q + h * H.velocity_map(p_half)
    p = p_half + 0.5 * h * H.force(q)
    if s is not None:
        s = s + 0.5 * h * (L0 + H.lagrangian(q, p))
    return q, p, s


def yoshida4_step(H, q, p, s, h):
    for weight in (_W1, _W0, _W1):
        q, p, s = verlet_step(H, q, p, s, weight * h)
    return q, p, s


STEPPERS = {'rk4': rk4_step, 'verlet': verlet_step, 'yoshida4': yoshida4_step}


def step_count(t, dt):
    '''Number of equal steps of size at most dt covering |t|.'''
    return max(1, int(np.ceil(abs(t) / dt - 1e-9)))


def integrate(H, q, p, t, dt, method='rk4', s=None):
    '''
    Advance (q, p[, s]) by time t (any sign) in equal steps no larger than dt.

    Arguments:
    - H (Hamiltonian): separable Hamiltonian
    - q, p (ndarray): component-first positions and momenta
    - t (float): signed integration time
    - dt (float): maximal step size
    - method (str): rk4 | verlet | yoshida4
    - s (ndarray or None): action carried along, if any

    Returns:
    - (q, p, s) at time t
    '''
    if method not in STEPPERS:
        raise ConfigurationError(f"unknown integrator '{method}', use one of {tuple(STEPPERS)}")
    q = np.array(q, dtype=float)
    p = np.array(p, dtype=float)
    s = None if s is None else np.array(s, dtype=float)
    if t == 0:
        return q, p, s

    n = step_count(t, dt)
    h = t / n
    stepper = STEPPERS[method]
    for _ in range(n):
        q, p, s = stepper(H, q, p, s, h)
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
            raise NumericalBlowupError(f'non-finite phase state after integrating towards t = {t}')
    return q, p, s
