"""Terminal entry points: an interactive REPL and the HTTP service."""

from __future__ import annotations

import argparse
import sys

from .dialogue import QUESTIONNAIRE_ITEMS, DialogueState
from .errors import TourdeskError
from .persistence import SessionLog
from .service import build_engine, create_app, load_config


def _print_reply(text: str, state: str, event: str | None) -> None:
    print(f"robot> {text}")
    print(f"[state: {state}] [expression: {event or 'neutral'}]")
    sys.stdout.flush()


def _questionnaire_prompt() -> None:
    print("Before you go: please rate the following from 1 to 5, and tell "
          "us which spot you chose.")
    for item in QUESTIONNAIRE_ITEMS:
        print(f"  - {item.replace('_', ' ')}")
    sys.stdout.flush()


def run_repl(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
        engine = build_engine(config)
    except TourdeskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    spots = [s.strip() for s in args.spots.split(",") if s.strip()]
    if len(spots) != 2:
        print(f"error: --spots needs two comma-separated ids, got {args.spots!r}",
              file=sys.stderr)
        return 2
    log = SessionLog(config.log_dir)
    try:
        session, reply = engine.new_session(spots[0], spots[1],
                                            recommended_id=args.recommend)
    except TourdeskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    log.log_session_start(session)
    _print_reply(reply.text, session.state.value, reply.expression_event)

    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            try:
                line = input("visitor> ")
            except EOFError:
                line = ":quit"
        else:
            line = sys.stdin.readline()
            if not line:
                line = ":quit"
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            if session.state is not DialogueState.CLOSED:
                engine.close_session(session)
                log.log_close(session)
            _questionnaire_prompt()
            return 0
        try:
            reply = engine.advance(session, line)
        except TourdeskError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        log.log_turn(session, session.transcript[-2])
        log.log_turn(session, session.transcript[-1])
        _print_reply(reply.text, reply.new_state.value, reply.expression_event)
        if reply.new_state is DialogueState.CLOSED:
            _questionnaire_prompt()
            return 0


def run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    try:
        config = load_config(args.config)
        app = create_app(config)
    except TourdeskError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    host = args.host or config.host
    port = args.port or config.port
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="tourdesk",
                                     description="tourist-recommendation dialogue engine")
    sub = parser.add_subparsers(dest="command", required=True)

    repl = sub.add_parser("repl", help="interactive terminal session")
    repl.add_argument("--config", required=True, help="service config JSON")
    repl.add_argument("--spots", required=True,
                      help="two attraction ids, comma separated (idA,idB)")
    repl.add_argument("--recommend", default=None,
                      help="force the recommended spot id (default: policy)")
    repl.set_defaults(func=run_repl)

    serve = sub.add_parser("serve", help="run the HTTP + streaming service")
    serve.add_argument("--config", required=True, help="service config JSON")
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    serve.set_defaults(func=run_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
