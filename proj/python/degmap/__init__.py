"""Battery degradation maps, convex PWA cost surfaces, and a dispatch demo."""

import os

from ._core import *  # noqa: F401,F403
from ._core import __version__, set_reference_data_dir  # noqa: F401

# Point the reference-table loader at the packaged data unless the caller
# already chose a location (DEGMAP_DATA_DIR always wins inside the core).
_packaged_data = os.path.join(os.path.dirname(__file__), "data")
if os.path.isdir(_packaged_data):
    set_reference_data_dir(_packaged_data)
del os, _packaged_data
