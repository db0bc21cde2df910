import photonlab.adapters  # noqa: F401
import photonlab.analysis  # noqa: F401
import photonlab.circuit  # noqa: F401
import photonlab.cli  # noqa: F401
import photonlab.core  # noqa: F401
import photonlab.correlator  # noqa: F401
import photonlab.defaults  # noqa: F401
import photonlab.emitter  # noqa: F401
import photonlab.experiments  # noqa: F401
import photonlab.info  # noqa: F401
import photonlab.loggers  # noqa: F401
import photonlab.utils  # noqa: F401
