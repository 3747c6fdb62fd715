# Vulture whitelist - functions/variables that appear unused but are actually used

# BaseRunner methods called through the RUNNERS registry
from runners.base import BaseRunner

BaseRunner.run
BaseRunner.kind

# Runner classes instantiated by kind
from runners.operator_runners import (  # noqa: E402
    DecayStudyRunner,
    KernelValidateRunner,
    SolveLinearRunner,
    SolveNonlinearRunner,
)
from runners.junction_runners import EquivalenceRunner, SolveEsjjRunner  # noqa: E402

KernelValidateRunner
SolveLinearRunner
SolveNonlinearRunner
DecayStudyRunner
SolveEsjjRunner
EquivalenceRunner

# Library API used by tests and callers
from solvers.kernel import kernel_bound  # noqa: E402
from junction.params import JunctionParams  # noqa: E402

kernel_bound
JunctionParams.is_sine_gordon

# Config values used by other modules
from config import VERSION  # noqa: E402

VERSION
