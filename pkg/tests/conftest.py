"""Public fixtures for unit tests."""
from __future__ import annotations

# Import fixtures from testing/ so they are known by pytest
# and can be used with
from testing.configs import run_config
from testing.devices import coarse_mesh
from testing.devices import default_device
