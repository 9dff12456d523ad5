import json
from fractions import Fraction as F

import pytest

from torifan import catalog, jsonio
from torifan.errors import ParseError, ValidationError


def test_format_and_parse_rational_round_trip():
    values = [F(0), F(3), F(-7, 2), F(288, 49), F(1, 12)]
    for x in values:
        assert jsonio.parse_rational(jsonio.format_rational(x)) == x
    assert jsonio.format_rational(5) == "5/1"
    assert jsonio.parse_rational("6/8") == F(3, 4)
    assert jsonio.parse_rational("-2") == -2
    assert jsonio.parse_rational(4) == 4


def test_parse_rational_rejects_garbage():
    for bad in ("", "x", "1/0", "1/2/3", "3.5", None, [1]):
        with pytest.raises(ParseError):
            jsonio.parse_rational(bad)


def test_decimal_string_is_deterministic():
    assert jsonio.decimal_string(F(1, 3)) == "0.333333333333"
    assert jsonio.decimal_string(F(288, 49)) == "5.87755102041"
    assert jsonio.decimal_string(F(9)) == "9"
    assert jsonio.decimal_string(F(-1, 8)) == "-0.125"


def test_fan_round_trip():
    for v in catalog.bundled_catalog():
        data = jsonio.fan_to_dict(v)
        again = jsonio.fan_from_dict(json.loads(json.dumps(data)))
        assert again.rays == v.rays
        assert again.max_cones == v.max_cones
        assert again.name == v.name


def test_fan_from_dict_errors():
    with pytest.raises(ParseError, match="object"):
        jsonio.fan_from_dict([1, 2])
    with pytest.raises(ParseError, match="lacks keys"):
        jsonio.fan_from_dict({"dim": 2})
    with pytest.raises(ParseError, match="malformed"):
        jsonio.fan_from_dict(
            {"dim": 2, "rays": [["a", 0]], "max_cones": [[0]]}
        )
    with pytest.raises(ParseError, match="name"):
        jsonio.fan_from_dict(
            {"dim": 2, "rays": [[1, 0]], "max_cones": [[0]], "name": 7}
        )
    # structural problems surface as fan validation errors, not parse errors
    with pytest.raises(ValidationError):
        jsonio.fan_from_dict({"dim": 2, "rays": [[2, 0]], "max_cones": [[0]]})


def test_load_fan_and_divisor(tmp_path):
    v = catalog.hirzebruch_one()
    fan_path = tmp_path / "fan.json"
    fan_path.write_text(jsonio.dumps(jsonio.fan_to_dict(v)))
    loaded = jsonio.load_fan(str(fan_path))
    assert loaded.rays == v.rays

    div_path = tmp_path / "div.json"
    div_path.write_text(jsonio.dumps({"coeffs": ["1", "1/2", "3", "-1/3"]}))
    d = jsonio.load_divisor(str(div_path), loaded)
    assert d.coeffs == (1, F(1, 2), 3, F(-1, 3))

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError, match="not valid JSON"):
        jsonio.load_fan(str(bad))
    with pytest.raises(ParseError, match="not valid JSON"):
        jsonio.load_divisor(str(bad), loaded)


def test_divisor_dict_round_trip():
    v = catalog.projective_space(2)
    d = v.divisor([F(-1, 2), 1, 1])
    data = jsonio.divisor_to_dict(d)
    assert data == {"coeffs": ["-1/2", "1/1", "1/1"]}
    assert jsonio.divisor_from_dict(data, v) == d


def test_divisor_from_dict_errors():
    v = catalog.projective_space(2)
    with pytest.raises(ParseError):
        jsonio.divisor_from_dict({"rays": []}, v)
    with pytest.raises(ParseError):
        jsonio.divisor_from_dict({"coeffs": ["1/0"]}, v)
    # wrong arity is a divisor validation problem
    with pytest.raises(ValidationError):
        jsonio.divisor_from_dict({"coeffs": ["1", "2"]}, v)


def test_dumps_layout():
    text = jsonio.dumps({"a": 1})
    assert text == '{\n  "a": 1\n}\n'
    assert text.endswith("\n")
