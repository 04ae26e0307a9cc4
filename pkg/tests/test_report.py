"""Report serialization."""
import pytest

from thetanorm.core.report import (
    CSV_HEADER, canonical_dumps, format_float, parse_report, rows_to_csv, write_output,
)


class TestFloatFormat:

    @pytest.mark.parametrize("x,text", [
        (1.0, "1.0"),
        (0.0, "0.0"),
        (0.1, "0.10000000000000001"),
        (1e-12, "9.9999999999999998e-13"),
        (1e20, "1e+20"),
        (-2.5, "-2.5"),
        (float("nan"), "NaN"),
        (float("-inf"), "-Infinity"),
    ])
    def test_format(self, x, text):
        assert format_float(x) == text


class TestCanonicalJson:

    def test_layout(self):
        text = canonical_dumps({"b": 1, "a": [1.5, None, True], "c": {}, "d": "θ"})
        assert text == (
            '{\n'
            '  "b": 1,\n'
            '  "a": [\n'
            '    1.5,\n'
            '    null,\n'
            '    true\n'
            '  ],\n'
            '  "c": {},\n'
            '  "d": "θ"\n'
            '}\n'
        )

    def test_reserialization_is_byte_identical(self):
        doc = {"sigma": [1.0, 0.1, 1e-17, 3.0000000000000004], "rank": 2, "nested": {"gap": 2.0 / 3.0}}
        text = canonical_dumps(doc)
        assert canonical_dumps(parse_report(text)) == text

    def test_rejects_unknown_objects(self):
        with pytest.raises(TypeError):
            canonical_dumps({"x": object()})


class TestCsv:

    ROW = {
        "type": "(1,2,8)",
        "h0": 16,
        "predicates": {"necessary": True, "fail1": False, "fail2": True, "iyer": False},
        "numeric": [
            {"rank": 8, "status": "full", "gap": 0.25},
            {"rank": 7, "status": "deficient", "gap": 1e-17},
        ],
        "verdict": "never_normally_generated",
        "error": None,
        "wall_time": 0.5,
    }

    def test_rows(self):
        text = rows_to_csv([self.ROW])
        lines = text.split("\n")
        assert lines[0] == ",".join(CSV_HEADER)
        assert lines[1] == '"(1,2,8)",16,true,false,true,false,never_normally_generated,8;7,full;deficient,1.0000000000000001e-17,'
        assert "\r" not in text
        assert text.endswith("\n")

    def test_timings_column(self):
        lines = rows_to_csv([self.ROW], timings=True).splitlines()
        assert lines[0].endswith(",wall_time")
        assert lines[1].endswith(",0.5")

    def test_row_without_numerics(self):
        row = dict(self.ROW, numeric=[], verdict=None, error="DomainError: bad")
        assert rows_to_csv([row]).splitlines()[1].endswith(",,,,,DomainError: bad")


class TestWriteOutput:

    def test_to_file_creates_parents(self, tmp_path):
        target = tmp_path / "nested" / "out.json"
        write_output("x\n", target)
        assert target.read_bytes() == b"x\n"

    def test_to_stdout(self, capsys):
        write_output("hello\n")
        assert capsys.readouterr().out == "hello\n"
