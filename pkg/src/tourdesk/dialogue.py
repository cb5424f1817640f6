"""Recommendation dialogue flow.

A session walks a visitor through: greeting and name capture, an
overview of their two chosen spots (the recommended one described
second, so it sticks), a car-or-train question that grounds the
recommendation (parking for drivers, rail access for train riders), a
question-answering loop over the attraction categories, and a
deadline-driven wrap-up asking for the final choice.

States move forward only:

    Greeting -> AskName -> Overview -> AskTransport -> Recommend -> QA
             -> Closing -> Closed

with Closing reachable from anywhere once the deadline fires.  The
transport answer emits the recommendation itself and leaves the session
in Recommend; the first follow-up question moves it into the QA loop.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .attractions import Attraction, AttractionDataset, answer_for, nearby_restaurants
from .embeddings import EmbeddingStore, Segmenter, tokenize
from .errors import (
    InvalidSessionError,
    ProviderError,
    SessionClosedError,
    UnknownAttractionError,
    ValidationError,
)
from .intent import CategoryRegistry, Classification, Matched, NoMatch, classify
from .similarity import Method, Thresholds


class DialogueState(str, Enum):
    GREETING = "Greeting"
    ASK_NAME = "AskName"
    OVERVIEW = "Overview"
    ASK_TRANSPORT = "AskTransport"
    RECOMMEND = "Recommend"
    QA = "QA"
    CLOSING = "Closing"
    CLOSED = "Closed"


STATE_ORDER = tuple(DialogueState)

# Rating items collected after the dialogue, each on a 1-5 scale.
QUESTIONNAIRE_ITEMS = (
    "choice_satisfaction",
    "information_sufficiency",
    "dialogue_naturalness",
    "response_adequacy",
    "response_likability",
    "dialogue_satisfaction",
    "robot_reliability",
    "referentiality",
    "desire_to_return",
)

# Bare affirmations get resolved against the robot's last yes/no offer.
DEFAULT_AFFIRMATIONS = (
    "ok", "okay", "its okay", "it is okay", "fine", "its fine", "sure",
    "yes", "yes please", "alright", "all right", "thats fine",
)

# Tokens ignored while hunting for a name in the visitor's reply.
NAME_STOPWORDS = frozenset(
    "hello hi hey good morning afternoon evening im i am my name is call me "
    "you can its it this please thanks thank mr mrs ms dr san the a an "
    "well uh um yes no nice to meet glad happy there everyone".split()
)

OFFER_PROMPTS = {
    "PriceRemark": "Shall I tell you the entrance fee?",
    "TimeRemark": "Shall I tell you the hours of operation?",
    "Parking": "Shall I tell you about parking?",
    "Access": "Shall I tell you how to get there?",
    "Restaurants": "Shall I tell you about restaurants nearby?",
    "Overview": "Shall I tell you more about it?",
}

CAR_WORDS = frozenset("car cars drive driving auto automobile".split())
TRAIN_WORDS = frozenset("train trains rail railway subway metro".split())


@dataclass(frozen=True)
class DialogueConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    deadline_seconds: float = 300.0
    name_prefix_period: int = 3
    restaurant_limit: int = 2
    restaurant_radius_m: float = 1000.0
    affirmations: tuple[str, ...] = DEFAULT_AFFIRMATIONS
    reply_events: dict[str, str] = field(default_factory=lambda: {
        "greeting": "smile",
        "recommend": "smile",
        "qa_answer": "faint_smile",
        "clarify": "surprise",
        "default": "neutral",
    })


@dataclass
class Turn:
    speaker: str  # "visitor" | "robot"
    text: str
    state_at_emit: DialogueState
    t: float
    expression_event: str | None = None
    classified: Classification | None = None

    def to_json(self) -> dict:
        classified = None
        if isinstance(self.classified, Matched):
            classified = {
                "outcome": "Matched",
                "category_id": self.classified.category_id,
                "score": self.classified.score,
                "method": self.classified.method.value,
            }
        elif isinstance(self.classified, NoMatch):
            classified = {"outcome": "NoMatch", "best_score": self.classified.best_score}
        return {
            "speaker": self.speaker,
            "text": self.text,
            "state_at_emit": self.state_at_emit.value,
            "t": self.t,
            "expression_event": self.expression_event,
            "classified": classified,
        }

    @staticmethod
    def from_json(payload: dict) -> "Turn":
        classified = None
        raw = payload.get("classified")
        if raw:
            if raw.get("outcome") == "Matched":
                classified = Matched(
                    category_id=raw["category_id"],
                    score=raw["score"],
                    method=Method(raw["method"]),
                )
            else:
                classified = NoMatch(best_score=raw.get("best_score"))
        return Turn(
            speaker=payload["speaker"],
            text=payload["text"],
            state_at_emit=DialogueState(payload["state_at_emit"]),
            t=payload["t"],
            expression_event=payload.get("expression_event"),
            classified=classified,
        )


@dataclass(frozen=True)
class Reply:
    text: str
    expression_event: str
    new_state: DialogueState
    debug: dict | None = None


@dataclass
class Session:
    id: str
    spot_a: Attraction
    spot_b: Attraction
    recommended_id: str
    deadline: float
    created_at: float
    greeting: str = ""
    visitor_name: str | None = None
    transport: str = "unknown"  # car | train | unknown
    state: DialogueState = DialogueState.ASK_NAME
    transcript: list[Turn] = field(default_factory=list)
    qa_turn_count: int = 0
    pending_offer: str | None = None
    answered_categories: set[str] = field(default_factory=set)
    name_reprompted: bool = False
    transport_reprompted: bool = False

    @property
    def recommended(self) -> Attraction:
        return self.spot_a if self.spot_a.id == self.recommended_id else self.spot_b

    @property
    def other(self) -> Attraction:
        return self.spot_b if self.spot_a.id == self.recommended_id else self.spot_a

    def snapshot(self) -> dict:
        """Mutable progress fields, enough to resume after a restart."""
        return {
            "visitor_name": self.visitor_name,
            "transport": self.transport,
            "state": self.state.value,
            "qa_turn_count": self.qa_turn_count,
            "pending_offer": self.pending_offer,
            "answered_categories": sorted(self.answered_categories),
            "name_reprompted": self.name_reprompted,
            "transport_reprompted": self.transport_reprompted,
        }

    def restore(self, snapshot: dict) -> None:
        self.visitor_name = snapshot.get("visitor_name")
        self.transport = snapshot.get("transport", "unknown")
        self.state = DialogueState(snapshot.get("state", "AskName"))
        self.qa_turn_count = snapshot.get("qa_turn_count", 0)
        self.pending_offer = snapshot.get("pending_offer")
        self.answered_categories = set(snapshot.get("answered_categories", ()))
        self.name_reprompted = snapshot.get("name_reprompted", False)
        self.transport_reprompted = snapshot.get("transport_reprompted", False)


@dataclass(frozen=True)
class QuestionnaireRecord:
    session_id: str
    ratings: dict[str, int]
    chosen_spot_id: str
    matched_recommendation: bool
    t: float

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "ratings": dict(self.ratings),
            "chosen_spot_id": self.chosen_spot_id,
            "matched_recommendation": self.matched_recommendation,
            "t": self.t,
        }


def default_recommend_policy(spot_a: Attraction, spot_b: Attraction) -> str:
    """Prefer the spot with more populated data slots (more answerable QA)."""

    def richness(a: Attraction) -> int:
        return sum([
            a.price_yen is not None,
            bool(a.open_hours),
            bool(a.description),
            a.parking,
            a.access.car,
            a.access.train,
            a.access.nearest_station is not None,
            a.photo_url is not None,
        ])

    return spot_b.id if richness(spot_b) > richness(spot_a) else spot_a.id


class DialogueEngine:
    """Stateless engine over shared immutable stores; Session carries all
    per-visitor state, so one engine serves any number of sessions."""

    def __init__(
        self,
        store: EmbeddingStore,
        registry: CategoryRegistry,
        attractions: AttractionDataset,
        config: DialogueConfig | None = None,
        places_provider=None,
        segmenter: Segmenter | None = None,
        recommend_policy: Callable[[Attraction, Attraction], str] | None = None,
    ):
        self.store = store
        self.registry = registry
        self.attractions = attractions
        self.config = config or DialogueConfig()
        self.places_provider = places_provider
        self.segmenter = segmenter
        self.recommend_policy = recommend_policy or default_recommend_policy
        self._affirmations = {
            tuple(tokenize(text, segmenter).tokens) for text in self.config.affirmations
        }

    # -- session lifecycle ---------------------------------------------------

    def new_session(
        self,
        spot_a_id: str,
        spot_b_id: str,
        recommended_id: str | None = None,
        now: float | None = None,
        session_id: str | None = None,
    ) -> tuple[Session, Reply]:
        now = time.time() if now is None else now
        if spot_a_id == spot_b_id:
            raise InvalidSessionError(f"both spots are {spot_a_id}; pick two different ones")
        spot_a = self.attractions.get(spot_a_id)
        spot_b = self.attractions.get(spot_b_id)
        if spot_a is None:
            raise UnknownAttractionError(f"unknown attraction id {spot_a_id}")
        if spot_b is None:
            raise UnknownAttractionError(f"unknown attraction id {spot_b_id}")
        if recommended_id is None:
            recommended_id = self.recommend_policy(spot_a, spot_b)
        if recommended_id not in (spot_a_id, spot_b_id):
            raise InvalidSessionError(
                f"recommended id {recommended_id} is not one of the chosen spots"
            )
        greeting = ("Hello, welcome to the travel desk! I will help you decide "
                    "which spot to visit today. May I ask your name?")
        session = Session(
            id=session_id or uuid.uuid4().hex[:12],
            spot_a=spot_a,
            spot_b=spot_b,
            recommended_id=recommended_id,
            deadline=now + self.config.deadline_seconds,
            created_at=now,
            greeting=greeting,
            state=DialogueState.ASK_NAME,
        )
        reply = Reply(
            text=greeting,
            expression_event=self._event("greeting"),
            new_state=DialogueState.ASK_NAME,
        )
        return session, reply

    def advance(self, session: Session, visitor_text: str, now: float | None = None) -> Reply:
        """Process one visitor utterance and append the turn pair."""
        if session.state is DialogueState.CLOSED:
            raise SessionClosedError(f"session {session.id} is closed")
        now = time.time() if now is None else now
        session.transcript.append(
            Turn(speaker="visitor", text=visitor_text, state_at_emit=session.state, t=now)
        )

        classified: Classification | None = None
        if session.state is DialogueState.CLOSING:
            reply = self._farewell(session)
        elif now >= session.deadline:
            reply = self._wrap_up(session)
        elif session.state in (DialogueState.GREETING, DialogueState.ASK_NAME):
            reply = self._handle_name(session, visitor_text)
        elif session.state is DialogueState.OVERVIEW:
            reply = self._ask_transport(session)
        elif session.state is DialogueState.ASK_TRANSPORT:
            reply = self._handle_transport(session, visitor_text)
        else:  # Recommend / QA
            reply, classified = self._handle_qa(session, visitor_text)

        session.transcript.append(
            Turn(
                speaker="robot",
                text=reply.text,
                state_at_emit=reply.new_state,
                t=now,
                expression_event=reply.expression_event,
                classified=classified,
            )
        )
        session.state = reply.new_state
        return reply

    def close_session(self, session: Session) -> None:
        """Administrative close (REPL quit); not a dialogue transition."""
        session.state = DialogueState.CLOSED

    def record_questionnaire(
        self,
        session: Session,
        ratings: dict[str, int],
        chosen_spot_id: str,
        now: float | None = None,
    ) -> QuestionnaireRecord:
        if session.state not in (DialogueState.CLOSING, DialogueState.CLOSED):
            raise ValidationError("questionnaire is only accepted once the dialogue is closing")
        missing = [item for item in QUESTIONNAIRE_ITEMS if item not in ratings]
        if missing:
            raise ValidationError(f"missing questionnaire items: {missing}")
        for item, value in ratings.items():
            if item not in QUESTIONNAIRE_ITEMS:
                raise ValidationError(f"unknown questionnaire item {item!r}")
            if not isinstance(value, int) or not 1 <= value <= 5:
                raise ValidationError(f"rating {item}={value!r} outside 1-5")
        if chosen_spot_id not in (session.spot_a.id, session.spot_b.id):
            raise ValidationError(f"chosen spot {chosen_spot_id!r} was not part of this session")
        return QuestionnaireRecord(
            session_id=session.id,
            ratings={item: ratings[item] for item in QUESTIONNAIRE_ITEMS},
            chosen_spot_id=chosen_spot_id,
            matched_recommendation=(chosen_spot_id == session.recommended_id),
            t=time.time() if now is None else now,
        )

    # -- state handlers --------------------------------------------------------

    def _event(self, kind: str) -> str:
        events = self.config.reply_events
        return events.get(kind, events.get("default", "neutral"))

    def _wrap_up(self, session: Session) -> Reply:
        text = (f"Our time is almost up. So, which of the two would you like "
                f"to visit — {session.other.name}, or {session.recommended.name}?")
        return Reply(text=text, expression_event=self._event("default"),
                     new_state=DialogueState.CLOSING)

    def _farewell(self, session: Session) -> Reply:
        name = f", {session.visitor_name}" if session.visitor_name else ""
        text = (f"Thank you for stopping by{name}! I hope you have a wonderful "
                f"trip. Goodbye!")
        return Reply(text=text, expression_event=self._event("default"),
                     new_state=DialogueState.CLOSED)

    def _handle_name(self, session: Session, visitor_text: str) -> Reply:
        tokens = tokenize(visitor_text, self.segmenter).tokens
        runs: list[list[str]] = [[]]
        for token in tokens:
            if token in NAME_STOPWORDS:
                runs.append([])
            else:
                runs[-1].append(token)
        best_run = max(runs, key=len)
        if not best_run and not session.name_reprompted:
            session.name_reprompted = True
            return Reply(
                text="I'm sorry, I didn't catch your name. Could you tell me once more?",
                expression_event=self._event("clarify"),
                new_state=DialogueState.ASK_NAME,
            )
        if best_run:
            session.visitor_name = " ".join(token.capitalize() for token in best_run)
        return self._overview_reply(session)

    def _overview_reply(self, session: Session) -> Reply:
        other, rec = session.other, session.recommended
        nice = f"Nice to meet you, {session.visitor_name}! " if session.visitor_name else ""
        text = (
            f"{nice}Today we are looking at {other.name} and {rec.name}. "
            f"First, {other.name}: {other.description} "
            f"And then there is {rec.name}, the one I would keep an eye on: {rec.description}"
        )
        return Reply(text=text, expression_event=self._event("default"),
                     new_state=DialogueState.OVERVIEW)

    def _ask_transport(self, session: Session) -> Reply:
        return Reply(
            text="By the way, how will you be traveling — by car, or by train?",
            expression_event=self._event("default"),
            new_state=DialogueState.ASK_TRANSPORT,
        )

    def _handle_transport(self, session: Session, visitor_text: str) -> Reply:
        tokens = set(tokenize(visitor_text, self.segmenter).tokens)
        saw_car = bool(tokens & CAR_WORDS)
        saw_train = bool(tokens & TRAIN_WORDS)
        if saw_car == saw_train:  # neither, or contradictory
            if not session.transport_reprompted:
                session.transport_reprompted = True
                return Reply(
                    text="Sorry, I didn't catch that — will you come by car, or by train?",
                    expression_event=self._event("clarify"),
                    new_state=DialogueState.ASK_TRANSPORT,
                )
            session.transport = "unknown"
        else:
            session.transport = "car" if saw_car else "train"
        return self._recommend_reply(session)

    def _recommend_reply(self, session: Session) -> Reply:
        rec = session.recommended
        if session.transport == "car":
            if rec.parking:
                reason = "a parking lot is available for cars there"
            elif rec.access.car:
                reason = "it is easy to reach by car"
            else:
                reason = "it has plenty to enjoy"
            text = f"Since you are coming by car, I especially recommend {rec.name} — {reason}."
        elif session.transport == "train":
            if rec.access.train:
                reason = "it can be reached by train"
                if rec.access.nearest_station:
                    reason += f"; the nearest station is {rec.access.nearest_station}"
            else:
                reason = "it is well worth the trip"
            text = f"Since you are coming by train, I recommend {rec.name} — {reason}."
        else:
            text = (f"Either way, my recommendation is {rec.name} — "
                    f"it is the spot I can tell you the most about.")
        offer_id, offer_text = self._next_offer(session)
        if offer_text:
            text += f" Feel free to ask me anything. {offer_text}"
        session.pending_offer = offer_id
        return Reply(text=text, expression_event=self._event("recommend"),
                     new_state=DialogueState.RECOMMEND)

    def _next_offer(self, session: Session) -> tuple[str | None, str | None]:
        for category in self.registry:
            if category.id in session.answered_categories:
                continue
            prompt = OFFER_PROMPTS.get(category.id)
            if prompt:
                return category.id, prompt
        return None, None

    def _classification_text(self, session: Session, visitor_text: str) -> str:
        """Utterance with the spot names stripped, so naming an attraction
        does not dilute the similarity to the category exemplars."""
        tokens = tokenize(visitor_text, self.segmenter).tokens
        name_tokens: set[str] = set()
        for spot in (session.spot_a, session.spot_b):
            name_tokens |= set(tokenize(spot.name, self.segmenter).tokens)
        kept = [t for t in tokens if t not in name_tokens]
        return " ".join(kept) if kept else visitor_text

    def _named_attraction(self, session: Session, visitor_text: str) -> Attraction:
        """The spot the utterance names, defaulting to the recommended one."""
        tokens = set(tokenize(visitor_text, self.segmenter).tokens)
        scores = []
        for spot in (session.recommended, session.other):
            name_tokens = set(tokenize(spot.name, self.segmenter).tokens) - NAME_STOPWORDS
            scores.append((len(tokens & name_tokens), spot))
        scores.sort(key=lambda pair: pair[0], reverse=True)
        if scores[0][0] > 0 and scores[0][0] > scores[1][0]:
            return scores[0][1]
        return session.recommended

    def _answer_category(self, session: Session, category_id: str,
                         target: Attraction) -> str:
        restaurants = None
        if self.registry[category_id].answer_slot == "restaurants":
            if self.places_provider is not None:
                try:
                    restaurants = nearby_restaurants(
                        self.places_provider, target, self.config.restaurant_radius_m
                    )[: self.config.restaurant_limit]
                except ProviderError:
                    restaurants = None
        session.answered_categories.add(category_id)
        return answer_for(target, category_id, restaurants)

    def _handle_qa(self, session: Session, visitor_text: str) -> tuple[Reply, Classification]:
        session.qa_turn_count += 1
        classified = classify(self._classification_text(session, visitor_text),
                              self.registry, self.store,
                              self.config.thresholds, self.segmenter)
        tokens = tuple(tokenize(visitor_text, self.segmenter).tokens)
        debug: dict = {}

        if tokens in self._affirmations:
            if session.pending_offer is not None:
                category_id = session.pending_offer
                target = session.recommended
                text = self._answer_category(session, category_id, target)
                debug = {"resolved": "assent", "category": category_id}
                event = self._event("qa_answer")
                offer_id, offer_text = self._next_offer(session)
                if offer_text:
                    text += f" {offer_text}"
                session.pending_offer = offer_id
            else:
                text = ("Okay! What would you like to know — for example the "
                        "entrance fee, opening hours, or how to get there?")
                debug = {"resolved": "disambiguate"}
                event = self._event("clarify")
                session.pending_offer = None
        elif isinstance(classified, Matched):
            target = self._named_attraction(session, visitor_text)
            text = self._answer_category(session, classified.category_id, target)
            debug = {
                "category": classified.category_id,
                "score": classified.score,
                "method": classified.method.value,
                "attraction": target.id,
            }
            event = self._event("qa_answer")
            offer_id, offer_text = self._next_offer(session)
            if offer_text:
                text += f" {offer_text}"
            session.pending_offer = offer_id
        else:
            text = ("I'm sorry, I'm not sure I understood. You can ask me about "
                    "prices, opening hours, parking, access, or nearby restaurants.")
            debug = {"category": None, "best_score": classified.best_score}
            event = self._event("clarify")
            session.pending_offer = None

        if session.visitor_name and session.qa_turn_count % self.config.name_prefix_period == 0:
            text = f"{session.visitor_name}, {text}"
        reply = Reply(text=text, expression_event=event,
                      new_state=DialogueState.QA, debug=debug)
        return reply, classified
