"""Backend behavior: fixture/replay directories and the live HTTP client."""

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import pytest

from exoar.backends import (
    FixtureBackend,
    KeyedBackend,
    LiveBackend,
    ReplayBackend,
    backend_from_spec,
)
from exoar.errors import AuthRejected, BudgetExceeded, Transport
from exoar.prompts import ChatRequest

from conftest import WALKTHROUGH

REQUEST = ChatRequest(system_text="s", user_text="u", model_id="m")


# --- fixture / replay -------------------------------------------------------


def test_fixture_serves_step_responses():
    backend = FixtureBackend(WALKTHROUGH / "responses")
    response = backend.complete(REQUEST, step=1, attempt=1)
    assert json.loads(response.text)[0] == "students"
    assert response.prompt_tokens == 150
    assert response.completion_tokens == 120


def test_fixture_falls_back_to_attempt_one():
    backend = FixtureBackend(WALKTHROUGH / "responses")
    first = backend.complete(REQUEST, step=2, attempt=1)
    second = backend.complete(REQUEST, step=2, attempt=2)
    assert first.text == second.text


def test_fixture_missing_step_is_transport_error():
    backend = FixtureBackend(WALKTHROUGH / "responses")
    with pytest.raises(Transport):
        backend.complete(REQUEST, step=5, attempt=1)


def test_fixture_missing_directory():
    with pytest.raises(Transport):
        FixtureBackend("/nonexistent/dir")


def test_replay_is_strict_about_attempts(tmp_path):
    (tmp_path / "step1_attempt1.txt").write_text('["a"]')
    backend = ReplayBackend(tmp_path)
    assert backend.complete(REQUEST, step=1, attempt=1).text == '["a"]'
    with pytest.raises(Transport):
        backend.complete(REQUEST, step=1, attempt=2)
    with pytest.raises(Transport):
        backend.complete(REQUEST, step=2, attempt=1)


def test_backend_from_spec():
    assert isinstance(backend_from_spec(f"fixture:{WALKTHROUGH / 'responses'}"), FixtureBackend)
    assert isinstance(backend_from_spec(f"replay:{WALKTHROUGH / 'responses'}"), ReplayBackend)
    assert isinstance(backend_from_spec("live", base_url="http://x"), LiveBackend)
    with pytest.raises(ValueError):
        backend_from_spec("wat")


# --- live HTTP --------------------------------------------------------------


class _Script:
    """Shared state telling the stub server how to answer each request."""

    def __init__(self, plan):
        self.plan = list(plan)
        self.requests = []


def _make_server(script: _Script):
    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("Content-Length", 0))
            body = json.loads(self.rfile.read(length) or b"{}")
            script.requests.append(
                {"path": self.path, "auth": self.headers.get("Authorization"), "body": body}
            )
            status, payload = script.plan.pop(0) if script.plan else (200, None)
            if payload is None:
                payload = {
                    "choices": [{"message": {"content": '["ok"]'}}],
                    "usage": {"prompt_tokens": 7, "completion_tokens": 3},
                }
            data = json.dumps(payload).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *args):
            pass

    server = HTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


@pytest.fixture
def live_server():
    servers = []

    def start(plan):
        script = _Script(plan)
        server = _make_server(script)
        servers.append(server)
        return f"http://127.0.0.1:{server.server_address[1]}", script

    yield start
    for server in servers:
        server.shutdown()


def test_live_success_and_request_shape(live_server):
    url, script = live_server([(200, None)])
    backend = LiveBackend(base_url=url, api_key="sk-test")
    response = backend.complete(REQUEST, step=1, attempt=1)
    assert response.text == '["ok"]'
    assert response.prompt_tokens == 7
    sent = script.requests[0]
    assert sent["path"] == "/v1/chat/completions"
    assert sent["auth"] == "Bearer sk-test"
    assert sent["body"]["model"] == "m"
    assert sent["body"]["messages"][0]["role"] == "system"
    assert backend.tokens_used == 10


def test_live_retries_transient_failures(live_server):
    url, script = live_server([(503, {"error": "busy"}), (200, None)])
    backend = LiveBackend(base_url=url, backoff_seconds=0.01)
    assert backend.complete(REQUEST, step=1, attempt=1).text == '["ok"]'
    assert len(script.requests) == 2


def test_live_transport_after_exhausted_retries(live_server):
    url, script = live_server([(500, {}), (500, {}), (500, {})])
    backend = LiveBackend(base_url=url, backoff_seconds=0.01, max_retries=2)
    with pytest.raises(Transport) as excinfo:
        backend.complete(REQUEST, step=1, attempt=1)
    assert excinfo.value.status == 500
    assert excinfo.value.details["attempts"] == 3
    assert len(script.requests) == 3


def test_live_auth_rejected_not_retried(live_server):
    url, script = live_server([(401, {"error": "bad key"})])
    backend = LiveBackend(base_url=url, api_key="bad")
    with pytest.raises(AuthRejected):
        backend.complete(REQUEST, step=1, attempt=1)
    assert len(script.requests) == 1


def test_live_budget_ceiling(live_server):
    url, _script = live_server([(200, None), (200, None)])
    backend = LiveBackend(base_url=url, token_ceiling=9)
    backend.complete(REQUEST, step=1, attempt=1)  # uses 10 tokens
    with pytest.raises(BudgetExceeded):
        backend.complete(REQUEST, step=1, attempt=1)


def test_keyed_backend_overrides_key(live_server):
    url, script = live_server([(200, None)])
    backend = KeyedBackend(LiveBackend(base_url=url, api_key="default"), "per-session")
    backend.complete(REQUEST, step=1, attempt=1)
    assert script.requests[0]["auth"] == "Bearer per-session"
