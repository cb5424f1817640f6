import json
import re

import pytest

from tourdesk.attractions import (
    Access,
    Attraction,
    FixturePlacesProvider,
    GeoPoint,
    LivePlacesProvider,
    answer_for,
    haversine_m,
    load_attractions,
    nearby_restaurants,
)
from tourdesk.errors import (
    ConfigurationError,
    InvalidInputError,
    LoadError,
    ProviderError,
    TemplateError,
)

from conftest import DATA_DIR


def make_attraction(**overrides):
    base = dict(
        id="zoo",
        name="Asahiyama Zoo",
        description="A famous zoo.",
        open_hours="9:30 to 17:15",
        price_yen=1000,
        parking=True,
        access=Access(car=True, train=True, nearest_station="Asahikawa Station"),
        location=GeoPoint(lat=43.767, lng=142.482),
    )
    base.update(overrides)
    return Attraction(**base)


def write_dataset(tmp_path, records):
    path = tmp_path / "attractions.json"
    path.write_text(json.dumps(records), encoding="utf-8")
    return path


class TestLoadAttractions:
    def test_shipped_dataset(self):
        dataset = load_attractions(DATA_DIR / "attractions.json")
        assert len(dataset) == 3
        zoo = dataset["asahiyama_zoo"]
        assert zoo.parking is True
        assert zoo.price_yen == 1000
        assert zoo.access.nearest_station == "Asahikawa Station"

    def test_two_valid_records(self, tmp_path):
        path = write_dataset(tmp_path, [
            {"id": "a", "name": "A", "location": {"lat": 0, "lng": 0}},
            {"id": "b", "name": "B", "location": {"lat": 1, "lng": 1}},
        ])
        assert len(load_attractions(path)) == 2

    def test_out_of_range_latitude(self, tmp_path):
        path = write_dataset(tmp_path, [
            {"id": "a", "name": "A", "location": {"lat": 123, "lng": 0}},
        ])
        with pytest.raises(LoadError, match=r"latitude 123.* outside"):
            load_attractions(path)

    def test_out_of_range_longitude(self, tmp_path):
        path = write_dataset(tmp_path, [
            {"id": "a", "name": "A", "location": {"lat": 0, "lng": -200}},
        ])
        with pytest.raises(LoadError, match="longitude"):
            load_attractions(path)

    def test_duplicate_id(self, tmp_path):
        record = {"id": "a", "name": "A", "location": {"lat": 0, "lng": 0}}
        path = write_dataset(tmp_path, [record, record])
        with pytest.raises(LoadError, match="duplicate attraction id a"):
            load_attractions(path)

    def test_negative_price_rejected(self, tmp_path):
        path = write_dataset(tmp_path, [
            {"id": "a", "name": "A", "price_yen": -5, "location": {"lat": 0, "lng": 0}},
        ])
        with pytest.raises(LoadError, match="price_yen"):
            load_attractions(path)


class TestAnswerFor:
    def test_parking_available(self):
        text = answer_for(make_attraction(parking=True), "Parking")
        assert "Asahiyama Zoo" in text
        assert "parking lot is available" in text

    def test_parking_absent(self):
        text = answer_for(make_attraction(parking=False), "Parking")
        assert "no parking lot" in text

    def test_price_filled(self):
        text = answer_for(make_attraction(price_yen=500), "PriceRemark")
        assert "500" in text

    def test_price_absent(self):
        text = answer_for(make_attraction(price_yen=None), "PriceRemark")
        assert "unavailable" in text
        assert "Asahiyama Zoo" in text

    def test_hours(self):
        text = answer_for(make_attraction(), "TimeRemark")
        assert "9:30 to 17:15" in text

    def test_access_names_station(self):
        text = answer_for(make_attraction(), "Access")
        assert "by train" in text and "Asahikawa Station" in text

    def test_restaurants_listing(self):
        restaurants = nearby_restaurants(
            FixturePlacesProvider(DATA_DIR / "restaurants_fixture.json"),
            make_attraction(), radius_m=1000,
        )[:2]
        text = answer_for(make_attraction(), "Restaurants", restaurants)
        assert "Zoo Garden Cafe" in text

    def test_unknown_category(self):
        with pytest.raises(TemplateError, match="Bogus"):
            answer_for(make_attraction(), "Bogus")

    def test_never_fabricates_numbers(self):
        a = make_attraction()
        restaurants = nearby_restaurants(
            FixturePlacesProvider(DATA_DIR / "restaurants_fixture.json"), a, 2500,
        )
        allowed = {str(a.price_yen)}
        allowed.update(re.findall(r"\d+(?:\.\d+)?", a.open_hours))
        for r in restaurants:
            allowed.add(f"{r.distance_m:g}")
            if r.rating is not None:
                allowed.add(f"{r.rating:g}")
        for category in ("PriceRemark", "TimeRemark", "Parking", "Access", "Overview"):
            for number in re.findall(r"\d+(?:\.\d+)?", answer_for(a, category)):
                assert number in allowed, (category, number)
        for number in re.findall(r"\d+(?:\.\d+)?",
                                 answer_for(a, "Restaurants", restaurants)):
            assert number in allowed


class TestNearbyRestaurants:
    def test_radius_filter(self, tmp_path):
        # hand-built fixture: ~120 m and ~800 m due north of the query point
        fixture = tmp_path / "places.json"
        fixture.write_text(json.dumps([
            {"name": "Close", "lat": 43.7680792, "lng": 142.482, "rating": 4.0},
            {"name": "Far", "lat": 43.7741945, "lng": 142.482, "rating": 4.5},
        ]), encoding="utf-8")
        provider = FixturePlacesProvider(fixture)
        results = nearby_restaurants(provider, make_attraction(), radius_m=500)
        assert [r.name for r in results] == ["Close"]
        assert results[0].distance_m == pytest.approx(120, rel=0.01)

    def test_sorted_by_distance(self, tmp_path):
        fixture = tmp_path / "places.json"
        fixture.write_text(json.dumps([
            {"name": "Far", "lat": 43.7741945, "lng": 142.482},
            {"name": "Close", "lat": 43.7680792, "lng": 142.482},
        ]), encoding="utf-8")
        results = nearby_restaurants(FixturePlacesProvider(fixture),
                                     make_attraction(), radius_m=1000)
        assert [r.name for r in results] == ["Close", "Far"]
        assert results[0].distance_m == pytest.approx(120, rel=0.01)
        assert results[1].distance_m == pytest.approx(800, rel=0.01)

    def test_distance_consistent_with_haversine(self):
        provider = FixturePlacesProvider(DATA_DIR / "restaurants_fixture.json")
        a = make_attraction()
        for r in nearby_restaurants(provider, a, 5000):
            expected = haversine_m(a.location.lat, a.location.lng,
                                   r.location.lat, r.location.lng)
            assert abs(r.distance_m - expected) <= 0.01 * max(expected, 1.0)

    def test_subset_of_provider_results(self):
        provider = FixturePlacesProvider(DATA_DIR / "restaurants_fixture.json")
        raw_names = {p["name"] for p in provider.nearby(0, 0, 0)}
        results = nearby_restaurants(provider, make_attraction(), 1000)
        assert {r.name for r in results} <= raw_names

    def test_rejects_nonpositive_radius(self):
        provider = FixturePlacesProvider(DATA_DIR / "restaurants_fixture.json")
        with pytest.raises(InvalidInputError):
            nearby_restaurants(provider, make_attraction(), 0)

    def test_missing_fixture_is_configuration_error(self, tmp_path):
        with pytest.raises(ConfigurationError):
            FixturePlacesProvider(tmp_path / "nope.json")

    def test_malformed_fixture_is_load_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(LoadError):
            FixturePlacesProvider(bad)


class TestLiveProvider:
    def test_missing_key_is_configuration_error(self, monkeypatch):
        monkeypatch.delenv("PLACES_API_KEY", raising=False)
        monkeypatch.delenv("PLACES_BASE_URL", raising=False)
        with pytest.raises(ConfigurationError, match="API key"):
            LivePlacesProvider(base_url="http://places.local/search")

    def test_missing_base_url_is_configuration_error(self, monkeypatch):
        monkeypatch.delenv("PLACES_BASE_URL", raising=False)
        with pytest.raises(ConfigurationError, match="base URL"):
            LivePlacesProvider(api_key="k")

    def test_env_vars_configure_provider(self, monkeypatch):
        monkeypatch.setenv("PLACES_BASE_URL", "http://places.local/search")
        monkeypatch.setenv("PLACES_API_KEY", "secret")
        provider = LivePlacesProvider()
        assert provider.base_url == "http://places.local/search"
        assert provider.api_key == "secret"

    def test_http_error_carries_status(self, monkeypatch):
        provider = LivePlacesProvider(base_url="http://places.local/search", api_key="k")

        class FakeResponse:
            status_code = 503

        monkeypatch.setattr("tourdesk.attractions.requests.get",
                            lambda *a, **k: FakeResponse())
        with pytest.raises(ProviderError) as err:
            provider.nearby(0, 0, 100)
        assert err.value.status == 503

    def test_wire_format_query_params(self, monkeypatch):
        provider = LivePlacesProvider(base_url="http://places.local/search", api_key="k")
        captured = {}

        class FakeResponse:
            status_code = 200

            def json(self):
                return [{"name": "X", "lat": 0.001, "lng": 0.0, "rating": 4.0}]

        def fake_get(url, params=None, timeout=None):
            captured.update(url=url, params=params, timeout=timeout)
            return FakeResponse()

        monkeypatch.setattr("tourdesk.attractions.requests.get", fake_get)
        results = provider.nearby(43.7, 142.4, 250.0)
        assert captured["url"] == "http://places.local/search"
        assert captured["params"] == {"lat": 43.7, "lng": 142.4, "radius": 250.0, "key": "k"}
        assert captured["timeout"] == 3.0
        assert results[0]["name"] == "X"
