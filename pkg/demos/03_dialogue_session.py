"""
A scripted recommendation session
=================================

The engine greets the visitor, captures a name, presents both spots
(recommended one second), grounds the recommendation in the visitor's
transport mode, answers category questions, and wraps up when the
session deadline passes.

Run from the repository root:  python3 demos/03_dialogue_session.py
"""

from pathlib import Path

from tourdesk import (
    QUESTIONNAIRE_ITEMS,
    DialogueConfig,
    DialogueEngine,
    FixturePlacesProvider,
    load_attractions,
    load_categories,
    load_embeddings,
)

DATA = Path(__file__).resolve().parents[1] / "data"

store = load_embeddings(DATA / "embeddings_demo.txt")
engine = DialogueEngine(
    store=store,
    registry=load_categories(DATA / "categories.json", store),
    attractions=load_attractions(DATA / "attractions.json"),
    places_provider=FixturePlacesProvider(DATA / "restaurants_fixture.json"),
    config=DialogueConfig(deadline_seconds=30.0),
)

t = 0.0
session, reply = engine.new_session("asahiyama_zoo", "lavender_farm", now=t)
print(f"[{session.state.value:>12}] robot> {reply.text}")

script = [
    ("Hi, my name is Sato", 2.0),
    ("they both sound wonderful", 4.0),
    ("we will come by car", 6.0),
    ("how much is the entrance fee?", 9.0),
    ("it's okay", 12.0),                       # assent to the pending offer
    ("are there restaurants nearby?", 15.0),
    ("can I park my car there?", 18.0),
    ("hmm, I think we have decided", 31.0),    # past the 30 s deadline
    ("the zoo, thank you!", 33.0),
]

for text, when in script:
    print(f"[{'visitor':>12}]      > {text}")
    reply = engine.advance(session, text, now=when)
    face = f" ({reply.expression_event})" if reply.expression_event else ""
    print(f"[{reply.new_state.value:>12}] robot> {reply.text}{face}")

record = engine.record_questionnaire(
    session,
    {item: 5 for item in QUESTIONNAIRE_ITEMS},
    chosen_spot_id="asahiyama_zoo",
)
print(f"\nquestionnaire recorded; chose the recommended spot: "
      f"{record.matched_recommendation}")
