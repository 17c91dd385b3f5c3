"""Serve the scoring bridge: equnova-bridge [--port N] [--backend echo]."""

from __future__ import annotations

import argparse
import os

import uvicorn

from .app import BACKENDS, create_app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="equnova-bridge", description=__doc__)
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("EQUNOVA_BRIDGE_PORT", "8787")),
        help="listen port (env: EQUNOVA_BRIDGE_PORT)",
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--backend", choices=sorted(BACKENDS), default="echo")
    parser.add_argument("--max-batch", type=int, default=64)
    args = parser.parse_args(argv)

    app = create_app(BACKENDS[args.backend](), max_batch=args.max_batch)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
