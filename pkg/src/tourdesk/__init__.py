"""Tourist-recommendation dialogue engine.

Core pieces: word-vector loading and tokenization, sentence similarity
by exact optimal transport (Word Rotator's Distance) with a cosine
fallback, exemplar-based intent classification, attraction answers with
a pluggable nearby-places provider, a recommendation dialogue state
machine with expression events, and an HTTP/WebSocket session service
with a terminal REPL.
"""

from .embeddings import (
    EmbeddedUtterance,
    EmbeddingStore,
    TokenizedUtterance,
    embed,
    load_embeddings,
    save_embeddings,
    tokenize,
)
from .similarity import (
    MassDistribution,
    Method,
    SimilarityResult,
    Thresholds,
    TransportPlan,
    cosine_mean_similarity,
    cost_matrix,
    norm_masses,
    solve_ot,
    two_stage_similarity,
    wrd_similarity,
)
from .intent import (
    CategoryRegistry,
    Classification,
    IntentCategory,
    Matched,
    NoMatch,
    classify,
    load_categories,
)
from .attractions import (
    Access,
    Attraction,
    AttractionDataset,
    FixturePlacesProvider,
    GeoPoint,
    LivePlacesProvider,
    Restaurant,
    answer_for,
    haversine_m,
    load_attractions,
    nearby_restaurants,
)
from .dialogue import (
    QUESTIONNAIRE_ITEMS,
    DialogueConfig,
    DialogueEngine,
    DialogueState,
    QuestionnaireRecord,
    Reply,
    Session,
    Turn,
    default_recommend_policy,
)
from .expression import (
    ExpressionFrame,
    ExpressionParams,
    ExpressionTable,
    frame_stream,
    load_expression_table,
    params_for,
)
from .persistence import SessionLog
from .service import ServiceConfig, build_engine, create_app, load_config

__version__ = "0.1.0"
