'''
Exception and warning types raised across quasiquantal.

Configuration problems derive from ValueError, numerical breakdowns from
RuntimeError, so callers that only care about the broad category can keep
catching the builtin types.
'''


class QuasiquantalError(Exception):
    '''Base class for every error raised by this package.'''


## CONFIGURATION ==============================================================
class ConfigurationError(QuasiquantalError, ValueError):
    '''Invalid grid, numerics or argument values.'''


class PreconditionError(QuasiquantalError, ValueError):
    '''An operation was called outside of its declared preconditions.'''


class ScenarioError(ConfigurationError):
    '''
    Schema violation in a scenario file.

    Arguments:
    - message (str): human readable description
    - key (str): dotted path of the offending key, e.g. `hamiltonian.omega`
    - valid (iterable): valid entries when an unknown catalog name was given
    '''

    def __init__(self, message, key=None, valid=None):
        self.key = key
        self.valid = tuple(valid) if valid is not None else None
        if key is not None:
            message = f'{key}: {message}'
        if self.valid:
            message = f"{message} (valid entries: {', '.join(self.valid)})"
        super().__init__(message)


class UnsupportedDimensionError(ScenarioError):
    '''A tier was requested for a dimension it does not support.'''
## [END] CONFIGURATION ========================================================


## NUMERICAL BREAKDOWN ========================================================
class NumericalBlowupError(QuasiquantalError, RuntimeError):
    '''Non-finite state encountered during time integration.'''


class CausticError(QuasiquantalError, RuntimeError):
    '''
    The characteristic map became singular before the requested time.

    Arguments:
    - message (str): description
    - report (CausticReport): diagnostic of the breakdown
    '''

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class TrajectoryUndefinedError(CausticError):
    '''A projected trajectory was requested at or beyond the caustic time.'''


class SingularAmplitudeError(QuasiquantalError, RuntimeError):
    '''The density vanished inside the support of a classical-wave run.'''


class AmplitudeBlowupError(NumericalBlowupError):
    '''
    The quantum potential grew beyond the blowup bound.

    Arguments:
    - message (str): description
    - time (float): time at which the bound was exceeded
    '''

    def __init__(self, message, time=None):
        self.time = time
        super().__init__(message)


class AdvectionError(QuasiquantalError, RuntimeError):
    '''A contour vertex left the region where the velocity is evaluable.'''


class CirculationUndefinedError(QuasiquantalError, RuntimeError):
    '''The momentum field is masked somewhere along the contour.'''


class UnreliableWindingError(QuasiquantalError, RuntimeError):
    '''The accumulated phase is too far from an integer multiple of 2π.'''


class DivergenceUndefinedError(QuasiquantalError, ValueError):
    '''The reference density vanishes where the density does not.'''


class IdentityViolationError(QuasiquantalError, AssertionError):
    '''An internal algebraic identity failed to hold numerically.'''
## [END] NUMERICAL BREAKDOWN ==================================================


class UnreliableFunctionalWarning(UserWarning):
    '''More than half of the probability mass lies under the density mask.'''
