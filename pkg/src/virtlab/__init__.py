"""virtlab: X3D-subset scene engine, virtual haptics, and interactive
physics/chemistry simulations served over HTTP/WebSocket."""

__version__ = "0.1.0"
