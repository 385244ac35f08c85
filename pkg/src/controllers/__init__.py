from .download_controller import DownloadController
from .experiment_controller import ExperimentController, ExperimentResult

__all__ = ['DownloadController', 'ExperimentController', 'ExperimentResult']
