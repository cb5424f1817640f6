"""Tourist-attraction records, answer templates, and nearby restaurants.

The attraction schema replaces the proprietary dataset fields with our
own: opening hours, entry price, parking, and access by car or train.
Restaurant lookups go through a pluggable places provider; the fixture
provider reads a local JSON file so everything runs offline, and the
live provider speaks a generic nearby-search HTTP interface.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import requests

from .errors import (
    ConfigurationError,
    InvalidInputError,
    LoadError,
    ProviderError,
    TemplateError,
)

EARTH_RADIUS_M = 6371000.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lng: float


@dataclass(frozen=True)
class Access:
    car: bool
    train: bool
    nearest_station: str | None = None


@dataclass(frozen=True)
class Attraction:
    id: str
    name: str
    description: str
    open_hours: str
    parking: bool
    access: Access
    location: GeoPoint
    price_yen: int | None = None
    photo_url: str | None = None


@dataclass(frozen=True)
class Restaurant:
    name: str
    distance_m: float
    location: GeoPoint
    rating: float | None = None


def haversine_m(lat1: float, lng1: float, lat2: float, lng2: float) -> float:
    """Great-circle distance in meters."""
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lng2 - lng1)
    h = math.sin(dphi / 2) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2) ** 2
    return 2 * EARTH_RADIUS_M * math.asin(math.sqrt(h))


def _parse_attraction(entry: dict, path: Path) -> Attraction:
    ident = entry.get("id")
    if not ident:
        raise LoadError(f"{path}: attraction without id")
    try:
        loc = entry["location"]
        lat, lng = float(loc["lat"]), float(loc["lng"])
    except (KeyError, TypeError, ValueError):
        raise LoadError(f"{path}: attraction {ident}: missing or malformed location") from None
    if not -90.0 <= lat <= 90.0:
        raise LoadError(f"{path}: attraction {ident}: latitude {lat} outside [-90, 90]")
    if not -180.0 <= lng <= 180.0:
        raise LoadError(f"{path}: attraction {ident}: longitude {lng} outside [-180, 180]")
    price = entry.get("price_yen")
    if price is not None:
        if not isinstance(price, int) or price < 0:
            raise LoadError(f"{path}: attraction {ident}: price_yen must be a nonnegative integer")
    raw_access = entry.get("access") or {}
    return Attraction(
        id=ident,
        name=entry.get("name", ident),
        description=entry.get("description", ""),
        open_hours=entry.get("open_hours", ""),
        price_yen=price,
        parking=bool(entry.get("parking", False)),
        access=Access(
            car=bool(raw_access.get("car", False)),
            train=bool(raw_access.get("train", False)),
            nearest_station=raw_access.get("nearest_station"),
        ),
        location=GeoPoint(lat=lat, lng=lng),
        photo_url=entry.get("photo_url"),
    )


class AttractionDataset:
    """Immutable id-keyed collection of attractions."""

    def __init__(self, attractions: list[Attraction]):
        self._by_id: dict[str, Attraction] = {}
        for a in attractions:
            if a.id in self._by_id:
                raise LoadError(f"duplicate attraction id {a.id}")
            self._by_id[a.id] = a

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, ident: str) -> bool:
        return ident in self._by_id

    def __getitem__(self, ident: str) -> Attraction:
        return self._by_id[ident]

    def get(self, ident: str) -> Attraction | None:
        return self._by_id.get(ident)

    def all(self) -> tuple[Attraction, ...]:
        return tuple(self._by_id.values())


def load_attractions(path: str | Path) -> AttractionDataset:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise LoadError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise LoadError(f"{path}: expected a list of attractions")
    return AttractionDataset([_parse_attraction(e, path) for e in raw])


# --- Places providers -------------------------------------------------------

class FixturePlacesProvider:
    """Offline provider reading a local JSON list of places."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        try:
            raw = json.loads(self.path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigurationError(f"places fixture not found: {self.path}") from None
        except json.JSONDecodeError as exc:
            raise LoadError(f"{self.path}: invalid JSON: {exc}") from None
        if not isinstance(raw, list):
            raise LoadError(f"{self.path}: expected a JSON list of places")
        for place in raw:
            if "name" not in place or "lat" not in place or "lng" not in place:
                raise LoadError(f"{self.path}: place missing name/lat/lng: {place!r}")
        self._places = raw

    def nearby(self, lat: float, lng: float, radius_m: float) -> list[dict]:
        return list(self._places)


class LivePlacesProvider:
    """Generic nearby-search HTTP client.

    GET <base_url>?lat=..&lng=..&radius=..&key=.. returning a JSON list
    of ``{name, lat, lng, rating}`` objects.  Base URL and key come from
    configuration or the PLACES_BASE_URL / PLACES_API_KEY env vars.
    """

    def __init__(self, base_url: str | None = None, api_key: str | None = None,
                 timeout_s: float = 3.0):
        self.base_url = base_url or os.environ.get("PLACES_BASE_URL")
        self.api_key = api_key or os.environ.get("PLACES_API_KEY")
        self.timeout_s = timeout_s
        if not self.base_url:
            raise ConfigurationError("live places mode requires a base URL "
                                     "(config or PLACES_BASE_URL)")
        if not self.api_key:
            raise ConfigurationError("live places mode requires an API key "
                                     "(config or PLACES_API_KEY)")

    def nearby(self, lat: float, lng: float, radius_m: float) -> list[dict]:
        params = {"lat": lat, "lng": lng, "radius": radius_m, "key": self.api_key}
        try:
            response = requests.get(self.base_url, params=params, timeout=self.timeout_s)
        except requests.RequestException as exc:
            raise ProviderError(f"places request failed: {exc}") from exc
        if response.status_code != 200:
            raise ProviderError(
                f"places request returned HTTP {response.status_code}",
                status=response.status_code,
            )
        try:
            payload = response.json()
        except ValueError as exc:
            raise ProviderError(f"places response is not JSON: {exc}") from exc
        if not isinstance(payload, list):
            raise ProviderError("places response is not a JSON list")
        return payload


def nearby_restaurants(provider, attraction: Attraction, radius_m: float) -> list[Restaurant]:
    """Restaurants within ``radius_m`` of the attraction, nearest first.

    Distances are recomputed here (haversine) no matter what the
    provider claims, and the radius filter plus stable distance sort is
    applied identically in fixture and live modes.
    """
    if radius_m <= 0:
        raise InvalidInputError(f"radius_m must be positive, got {radius_m}")
    origin = attraction.location
    results: list[Restaurant] = []
    for place in provider.nearby(origin.lat, origin.lng, radius_m):
        lat, lng = float(place["lat"]), float(place["lng"])
        distance = haversine_m(origin.lat, origin.lng, lat, lng)
        if distance > radius_m:
            continue
        rating = place.get("rating")
        results.append(
            Restaurant(
                name=str(place["name"]),
                distance_m=round(distance, 2),
                rating=float(rating) if rating is not None else None,
                location=GeoPoint(lat=lat, lng=lng),
            )
        )
    results.sort(key=lambda r: r.distance_m)
    return results


# --- Answer templates --------------------------------------------------------

def _unavailable(topic: str, a: Attraction) -> str:
    return f"I'm sorry, {topic} information for {a.name} is unavailable."


def _answer_price(a: Attraction, restaurants) -> str:
    if a.price_yen is None:
        return _unavailable("price", a)
    if a.price_yen == 0:
        return f"{a.name} is free to enter: the entrance fee is 0 yen."
    return f"The entrance fee for {a.name} is {a.price_yen} yen."


def _answer_hours(a: Attraction, restaurants) -> str:
    if not a.open_hours:
        return _unavailable("opening-hours", a)
    return f"{a.name} is open {a.open_hours}."


def _answer_parking(a: Attraction, restaurants) -> str:
    if a.parking:
        return f"Yes, a parking lot is available for cars at {a.name}."
    return f"I'm afraid there is no parking lot at {a.name}."


def _answer_access(a: Attraction, restaurants) -> str:
    modes = []
    if a.access.car:
        modes.append("by car")
    if a.access.train:
        modes.append("by train")
    if not modes:
        return _unavailable("access", a)
    text = f"You can reach {a.name} {' or '.join(modes)}."
    if a.access.train and a.access.nearest_station:
        text += f" The nearest station is {a.access.nearest_station}."
    return text


def _answer_restaurants(a: Attraction, restaurants) -> str:
    if restaurants is None:
        return _unavailable("restaurant", a)
    if not restaurants:
        return f"I could not find any restaurants near {a.name}."
    parts = []
    for r in restaurants:
        piece = f"{r.name} about {r.distance_m:g} meters away"
        if r.rating is not None:
            piece += f" (rated {r.rating:g})"
        parts.append(piece)
    return f"Near {a.name} you will find {' and '.join(parts)}."


def _answer_overview(a: Attraction, restaurants) -> str:
    if not a.description:
        return _unavailable("overview", a)
    return f"{a.name}: {a.description}"


_TEMPLATES = {
    "PriceRemark": _answer_price,
    "TimeRemark": _answer_hours,
    "Parking": _answer_parking,
    "Access": _answer_access,
    "Restaurants": _answer_restaurants,
    "Overview": _answer_overview,
}


def answer_for(a: Attraction, category_id: str,
               restaurants: list[Restaurant] | None = None) -> str:
    """Fill the category's template from the record; never fabricates values."""
    template = _TEMPLATES.get(category_id)
    if template is None:
        raise TemplateError(f"no answer template for category {category_id!r}")
    return template(a, restaurants)
