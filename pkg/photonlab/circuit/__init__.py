from photonlab.circuit.detector import dead_time_mask, detect  # noqa: F401
from photonlab.circuit.elements import (  # noqa: F401
    RoutedPhoton,
    RoutedPhotons,
    attenuate,
    fiber_bs_single,
    mmi_split,
    survive,
    transmission,
)
from photonlab.circuit.interference import (  # noqa: F401
    coincidence_probability,
    fiber_bs_two_photon,
    hom_overlap,
    pair_overlap,
    stream_overlap,
)
from photonlab.circuit.ledger import PhotonLedger  # noqa: F401
from photonlab.circuit.topology import interference_windows, run_hom_topology, split_on_chip  # noqa: F401
