"""Substructural logics as sequent calculi and Frege systems: formula
families, proof builders, a checker, cut-free search and cut elimination."""

from .formula import *          # noqa: F401,F403
from .families import *         # noqa: F401,F403
from .calculus import *         # noqa: F401,F403
from .proof import *            # noqa: F401,F403
from .construct import *        # noqa: F401,F403
from .search import *           # noqa: F401,F403
from .cutelim import *          # noqa: F401,F403
from .frege import *            # noqa: F401,F403
from . import formula, families, calculus, proof, construct, search, cutelim, frege

__version__ = "0.1.0"
