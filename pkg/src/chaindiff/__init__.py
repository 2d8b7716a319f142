"""Higher-order differentials of compositions by partition sums."""

from .algebra import MultiDual, extract_coefficient, md_add, md_apply_univariate, md_mul
from .differentials import (
    DirectionSet,
    gateaux_fd,
    gateaux_md,
    partial_differential,
    total_differential_check,
)
from .errors import CapExceededError, ChainDiffError, ContractError, DomainError, ParseError
from .faadibruno import (
    CompositeProblem,
    DifferentialReport,
    faa_di_bruno_eval,
    induction_step_check,
    inner_differentials,
    outer_differential,
    symbolic_expansion,
)
from .functions import ExprFunction, eval_function, parse_function
from .partitions import (
    PARTITION_CAP,
    Partition,
    bell_number,
    enumerate_partitions,
    extend_partitions,
    stirling2,
)

__version__ = "0.1.0"
