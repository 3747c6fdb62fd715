"""Utilities package"""

from .errors import AccuracyError as AccuracyError
from .errors import ConfigurationError as ConfigurationError
from .errors import DataError as DataError
from .errors import DomainError as DomainError
from .errors import GreenStripError as GreenStripError
from .errors import NonConvergenceError as NonConvergenceError
from .errors import PoleError as PoleError
from .errors import ScenarioError as ScenarioError
