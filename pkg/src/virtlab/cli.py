"""Command-line entry point: run the service, or act as a thin client."""
from __future__ import annotations

import json
import time
from pathlib import Path

import click
import httpx


def _load_config(path):
    text = Path(path).read_text()
    if path.endswith((".yaml", ".yml")):
        import yaml
        return yaml.safe_load(text) or {}
    return json.loads(text)


@click.group()
def main():
    """virtlab: 3D + haptics e-learning simulations over HTTP."""


@main.command()
@click.option("--port", default=8080, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--scenes-dir", type=click.Path(), default=None)
@click.option("--attachments-dir", type=click.Path(), default=None)
@click.option("--tick-hz", default=1000, show_default=True)
@click.option("--publish-hz", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Optional config file (json/yaml) mirroring the flags.")
def serve(port, host, scenes_dir, attachments_dir, tick_hz, publish_hz, seed,
          config_path):
    """Run the simulation service."""
    import uvicorn

    from .server import create_app
    from .simloop import SimulationLoop

    if config_path:
        cfg = _load_config(config_path)
        port = cfg.get("port", port)
        host = cfg.get("host", host)
        scenes_dir = cfg.get("scenes_dir", scenes_dir)
        attachments_dir = cfg.get("attachments_dir", attachments_dir)
        tick_hz = cfg.get("tick_hz", tick_hz)
        publish_hz = cfg.get("publish_hz", publish_hz)
        seed = cfg.get("seed", seed)

    loop = SimulationLoop(scenes_dir=scenes_dir, attachments_dir=attachments_dir,
                          tick_hz=tick_hz, publish_hz=publish_hz, seed=seed)
    app = create_app(loop)
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
def attachments(url):
    """List attachments available on the server."""
    names = httpx.get(f"{url}/api/attachments").raise_for_status().json()
    for name in names:
        click.echo(name)


@main.command("set-axis")
@click.argument("axis")
@click.argument("value", type=float)
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
def set_axis(axis, value, url):
    """Set a linac axis, e.g. `virtlab set-axis gantry 190`."""
    resp = httpx.post(f"{url}/api/command",
                      json={"target": "linac_axis", "axis": axis, "value": value})
    click.echo(resp.text)


@main.command()
@click.argument("payload")
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
def command(payload, url):
    """Send a raw JSON command, e.g. '{"target":"electrolysis","action":"start"}'."""
    resp = httpx.post(f"{url}/api/command", json=json.loads(payload))
    click.echo(resp.text)


@main.command()
@click.option("--url", default="http://127.0.0.1:8080", show_default=True)
@click.option("--interval", default=1.0, show_default=True)
@click.option("--count", default=0, help="Stop after N snapshots (0 = forever).")
def watch(url, interval, count):
    """Poll and print state snapshots."""
    seen = 0
    while count == 0 or seen < count:
        snapshot = httpx.get(f"{url}/api/state").raise_for_status().json()
        click.echo(json.dumps({
            "tick": snapshot["tick"],
            "colliding": snapshot["linac"]["colliding"],
            "bulb": snapshot["electrolysis"]["bulb_intensity"],
        }))
        seen += 1
        if count == 0 or seen < count:
            time.sleep(interval)


@main.command()
@click.argument("scene_file", type=click.Path(exists=True))
def check(scene_file):
    """Parse and validate a scene file, printing diagnostics."""
    from .x3d import parse_x3d, validate

    doc = parse_x3d(Path(scene_file).read_text())
    issues = list(doc.diagnostics) + validate(doc)
    for diag in issues:
        click.echo(f"{diag.code.value}: {diag.message}")
    click.echo(f"{doc.node_count()} nodes, {len(doc.routes)} routes, "
               f"{len(issues)} diagnostics")


if __name__ == "__main__":
    main()
