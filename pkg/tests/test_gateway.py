import json
import threading
import time

import pytest

from sastwb.gateway import (
    AuthError,
    ChatMessage,
    ChatRequest,
    FinishReason,
    Gateway,
    GatewayError,
    LiveProvider,
    RateLimited,
    ReplayMiss,
    ReplayProvider,
    Role,
    ScriptedProvider,
    TransientFailure,
    request_hash,
)


def make_request(content="hello", tag="t1", model="gpt-4o"):
    return ChatRequest(
        model_id=model,
        messages=(ChatMessage(Role.SYSTEM, "sys"), ChatMessage(Role.USER, content)),
        request_tag=tag,
    )


class FlakyProvider:
    """Fails transiently n times, then succeeds."""

    name = "flaky"

    def __init__(self, failures):
        self.failures = failures
        self.attempts = 0

    def send(self, request):
        self.attempts += 1
        if self.attempts <= self.failures:
            raise TransientFailure("HTTP 429")
        return ScriptedProvider(lambda r: "ok").send(request)


def test_request_hash_stable_and_sensitive():
    a = request_hash(make_request("x"))
    assert a == request_hash(make_request("x"))
    assert a != request_hash(make_request("y"))
    assert a != request_hash(make_request("x", model="other"))
    # tag does not participate in the replay key
    assert a == request_hash(make_request("x", tag="different"))


def test_replay_provider_round_trip(tmp_path):
    request = make_request()
    transcript = tmp_path / "t.json"
    transcript.write_text(json.dumps([
        {"request_hash": request_hash(request), "content": "recorded", "model_id": "gpt-4o"}
    ]))
    response = Gateway(ReplayProvider(transcript)).complete(request)
    assert response.content == "recorded"
    assert response.latency_ms == 0
    assert response.finish_reason == FinishReason.STOP


def test_replay_miss(tmp_path):
    transcript = tmp_path / "t.json"
    transcript.write_text("[]")
    with pytest.raises(ReplayMiss):
        Gateway(ReplayProvider(transcript)).complete(make_request())


def test_retry_succeeds_after_transient_failures():
    provider = FlakyProvider(failures=2)
    sleeps = []
    gateway = Gateway(provider, sleep=sleeps.append)
    response = gateway.complete(make_request())
    assert response.content == "ok"
    assert provider.attempts == 3
    assert len(sleeps) == 2
    # backoff base 1s then 2s, +/-20% jitter
    assert 0.8 <= sleeps[0] <= 1.2
    assert 1.6 <= sleeps[1] <= 2.4


def test_retries_exhausted_raises_rate_limited():
    provider = FlakyProvider(failures=10)
    gateway = Gateway(provider, sleep=lambda s: None)
    with pytest.raises(RateLimited):
        gateway.complete(make_request())
    assert provider.attempts == 4  # initial + 3 retries


def test_auth_error_not_retried():
    class DenyProvider:
        name = "deny"
        attempts = 0

        def send(self, request):
            self.attempts += 1
            raise AuthError("provider rejected the credential")

    provider = DenyProvider()
    with pytest.raises(AuthError):
        Gateway(provider, sleep=lambda s: None).complete(make_request())
    assert provider.attempts == 1


def test_live_provider_requires_credential_before_network():
    provider = LiveProvider("http://127.0.0.1:1", api_key=None)
    with pytest.raises(AuthError):
        provider.send(make_request())


def test_no_credential_in_error_messages():
    secret = "sk-SECRET-VALUE-123"
    provider = LiveProvider("http://127.0.0.1:1", api_key=secret, timeout=0.2)
    try:
        Gateway(provider, sleep=lambda s: None).complete(make_request())
    except GatewayError as exc:
        assert secret not in str(exc)
        assert secret not in repr(exc)
    else:
        pytest.fail("expected a gateway error against a closed port")


def test_batch_preserves_order():
    provider = ScriptedProvider(lambda r: f"answer:{r.request_tag}")
    gateway = Gateway(provider)
    requests = [make_request(tag=f"r{i}") for i in range(5)]
    responses = gateway.complete_batch(requests, parallelism=2)
    assert [r.content for r in responses] == [f"answer:r{i}" for i in range(5)]


def test_batch_isolates_per_item_errors(tmp_path):
    good = make_request("present", tag="a")
    bad = make_request("absent", tag="b")
    transcript = tmp_path / "t.json"
    transcript.write_text(json.dumps([
        {"request_hash": request_hash(good), "content": "yes", "model_id": "gpt-4o"}
    ]))
    gateway = Gateway(ReplayProvider(transcript))
    results = gateway.complete_batch([good, bad, good], parallelism=2)
    assert results[0].content == "yes"
    assert isinstance(results[1], ReplayMiss)
    assert results[2].content == "yes"


def test_batch_parallelism_speedup():
    def slow(request):
        time.sleep(0.1)
        return "done"

    gateway = Gateway(ScriptedProvider(slow))
    requests = [make_request(tag=f"r{i}") for i in range(8)]
    started = time.monotonic()
    gateway.complete_batch(requests, parallelism=4)
    elapsed = time.monotonic() - started
    assert elapsed < 0.4  # sequential would be ~0.8s


def test_batch_bounds_in_flight_requests():
    lock = threading.Lock()
    state = {"current": 0, "peak": 0}

    def tracked(request):
        with lock:
            state["current"] += 1
            state["peak"] = max(state["peak"], state["current"])
        time.sleep(0.02)
        with lock:
            state["current"] -= 1
        return "ok"

    Gateway(ScriptedProvider(tracked)).complete_batch(
        [make_request(tag=f"r{i}") for i in range(12)], parallelism=3
    )
    assert state["peak"] <= 3
