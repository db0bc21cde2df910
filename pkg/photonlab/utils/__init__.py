from photonlab.utils.functional import *  # noqa: F401, F403
from photonlab.utils.inspectors import *  # noqa: F401, F403
from photonlab.utils.readers import *  # noqa: F401, F403
from photonlab.utils.plotting import EnsembleFigure, HistogramFigure, plot_ensemble, plot_histogram  # noqa: F401
