from .config import BfConfig, ExperimentConfig, SolverConfig
from .costs import CostModel, LossVariant
from .matrices import ObservationMatrix

__all__ = ['BfConfig', 'CostModel', 'ExperimentConfig', 'LossVariant', 'ObservationMatrix',
           'SolverConfig']
