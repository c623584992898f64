"""Protocol bytes and config validation, pinned against the documented contract."""

import pytest

from aspen_adapter import (
    AdapterConfig,
    ERR_BAD_ID,
    ERR_BAD_NL,
    ERR_NOT_JSON,
    ERR_NOT_OBJECT,
    handshake_line,
    parse_request,
    response_line,
)


class TestHandshake:
    def test_exact_bytes(self):
        assert handshake_line("aspen-adapter") == (
            '{"hello":{"name":"aspen-adapter","protocol":1}}'
        )

    def test_name_is_caller_chosen(self):
        assert handshake_line("x") == '{"hello":{"name":"x","protocol":1}}'


class TestParseRequest:
    def test_good_request(self):
        assert parse_request('{"id": 3, "nl": "A b c."}') == (3, "A b c.", None)

    def test_not_json(self):
        assert parse_request("not json") == (None, None, ERR_NOT_JSON)

    def test_not_an_object(self):
        assert parse_request('"bare"') == (None, None, ERR_NOT_OBJECT)
        assert parse_request("[1,2]") == (None, None, ERR_NOT_OBJECT)

    def test_missing_id(self):
        assert parse_request('{"nl": "x"}') == (None, None, ERR_BAD_ID)

    def test_boolean_id_is_not_an_integer(self):
        assert parse_request('{"id": true, "nl": "x"}') == (None, None, ERR_BAD_ID)

    def test_float_id_rejected(self):
        assert parse_request('{"id": 1.5, "nl": "x"}') == (None, None, ERR_BAD_ID)

    def test_bad_nl_keeps_readable_id(self):
        assert parse_request('{"id": 4, "nl": 9}') == (4, None, ERR_BAD_NL)
        assert parse_request('{"id": 4}') == (4, None, ERR_BAD_NL)


class TestResponseLine:
    def test_cnl_bytes(self):
        assert response_line(3, cnl="A b c.") == '{"cnl":"A b c.","id":3}'

    def test_error_bytes(self):
        assert response_line(None, error=ERR_NOT_JSON) == (
            '{"error":"malformed request: not valid JSON","id":null}'
        )

    def test_non_ascii_is_escaped(self):
        assert response_line(1, cnl="café") == '{"cnl":"caf\\u00e9","id":1}'

    def test_exactly_one_payload(self):
        with pytest.raises(ValueError):
            response_line(1)
        with pytest.raises(ValueError):
            response_line(1, cnl="x", error="y")


class TestAdapterConfig:
    def test_defaults_are_valid(self):
        config = AdapterConfig()
        assert config.max_length > 0 and config.beams >= 1

    def test_max_length_must_be_positive(self):
        with pytest.raises(ValueError):
            AdapterConfig(max_length=0)

    def test_beams_must_be_at_least_one(self):
        with pytest.raises(ValueError):
            AdapterConfig(beams=0)
