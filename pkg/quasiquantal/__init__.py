from .errors import *
from .grid import *
from .hamiltonian import *
from .phase_ensemble import *
from .projection import *
from .clebsch import *
from .quantum import *
from .fisher import *
from .invariants import *
from .paths import *
from .plotting import *
from .scenario import *
from .sweep import *
