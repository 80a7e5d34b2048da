"""Workplace bidirectional EV charging: station simulator and hierarchical multi-agent control.

The package is split by concern:

- `pilepilot.simenv`: station physics, EV population, demand-charge penalty.
- `pilepilot.netcore`: small numpy MLPs, exact backprop, Adam, soft target updates.
- `pilepilot.hicontrol`: the high-level charge/discharge agent.
- `pilepilot.locontrol`: the per-pile power agents with uncertainty-aware critic augmentation.
- `pilepilot.trainer`: rollouts, replay buffers and the two-tier training loop.
- `pilepilot.evalkit`: metrics, evaluation and the price-greedy oracle.
- `pilepilot.cli`: the `pilepilot` command.
"""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("pilepilot")
except PackageNotFoundError:  # pragma: no cover - running from a source checkout
    __version__ = "0.0.0"

from .errors import PilePilotError

__all__ = ["PilePilotError", "__version__"]
