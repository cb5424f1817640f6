"""
Expression frames from dialogue events
======================================

Robot replies carry expression events (smile, faint_smile, surprise,
neutral); each event becomes a four-parameter frame that a face renderer
holds until the next one, ending with neutral when the session closes.

Run from the repository root:  python3 demos/04_expression_frames.py
"""

from pathlib import Path

from tourdesk import frame_stream, load_expression_table

DATA = Path(__file__).resolve().parents[1] / "data"

table = load_expression_table(DATA / "expression.json")

print("expression table:")
for event in table.events():
    params = table.params_for(event)
    print(f"  {event:<12} valence {params.valence:>5.2f}  arousal {params.arousal:>5.2f}  "
          f"dominance {params.dominance:>5.2f}  realIntention {params.realIntention:>5.2f}")

# a plausible session: greeting, recommendation, two answers, one stumble
events = [
    (0.0, "smile"),         # greeting
    (8.0, "smile"),         # recommendation
    (12.0, "faint_smile"),  # answered the entrance fee
    (17.0, "surprise"),     # did not understand
    (21.0, "faint_smile"),  # answered opening hours
]

print("\nframes (stream closes at t=30):")
for frame in frame_stream(table, events, close_at=30.0):
    payload = frame.to_json()
    bar = "#" * int((payload["valence"] + 1) * 10)
    print(f"  t={payload['t']:>5.1f}  {payload['event']:<12} "
          f"v={payload['valence']:>5.2f} a={payload['arousal']:>5.2f} "
          f"d={payload['dominance']:>5.2f}  {bar}")
