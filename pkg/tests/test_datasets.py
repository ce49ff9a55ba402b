import pytest

from edmfit import DatasetFormatError
from edmfit.datasets import (
    BUILTINS,
    fingerprint,
    get_builtin,
    load_dataset_file,
    parse_dataset,
    verify_builtins,
)


class TestBuiltins:
    def test_six_datasets(self):
        assert sorted(BUILTINS) == [f"set{i}" for i in range(1, 7)]

    def test_fingerprints_clean(self):
        assert verify_builtins() == []

    def test_set6_is_open_tail(self):
        assert BUILTINS["set6"].data.open_tail
        assert not BUILTINS["set1"].data.open_tail

    def test_pooling_pins(self):
        assert BUILTINS["set1"].explicit_cut == 5
        assert BUILTINS["set4"].explicit_cut == 7
        assert BUILTINS["set6"].explicit_cut is None

    def test_known_totals(self):
        assert BUILTINS["set1"].data.n_obs == 119853
        assert BUILTINS["set2"].data.n_obs == 4000
        assert BUILTINS["set3"].data.n_obs == 23589
        assert BUILTINS["set4"].data.n_obs == 150
        assert BUILTINS["set5"].data.n_obs == 414
        assert BUILTINS["set6"].data.n_obs == 2924

    def test_unknown_name(self):
        with pytest.raises(DatasetFormatError):
            get_builtin("set7")

    def test_fingerprint_detects_drift(self):
        ds = BUILTINS["set1"].data
        tweaked = type(ds)(ds.name, (103705,) + ds.frequencies[1:], ds.open_tail)
        assert fingerprint(tweaked) != BUILTINS["set1"].sha256


class TestParsing:
    def test_basic(self):
        ds = parse_dataset("# claims\n0,10\n1,5\n2,1\n", name="t")
        assert ds.frequencies == (10, 5, 1)
        assert not ds.open_tail

    def test_crlf_and_blank_lines(self):
        ds = parse_dataset("0,10\r\n\r\n1,5\r\n", name="t")
        assert ds.frequencies == (10, 5)

    def test_open_tail_marker(self):
        ds = parse_dataset("0,10\n1,5\n2+,0\n")
        assert ds.open_tail
        assert ds.frequencies == (10, 5, 0)

    def test_empty_file(self):
        with pytest.raises(DatasetFormatError):
            parse_dataset("# nothing here\n")

    def test_bad_field_count_reports_line(self):
        with pytest.raises(DatasetFormatError) as err:
            parse_dataset("0,10\n1;5\n")
        assert err.value.line == 2
        assert "line 2" in str(err.value)

    def test_non_integer_reports_line(self):
        with pytest.raises(DatasetFormatError) as err:
            parse_dataset("0,10\n1,ten\n")
        assert err.value.line == 2

    def test_negative_frequency(self):
        with pytest.raises(DatasetFormatError):
            parse_dataset("0,10\n1,-5\n")

    def test_non_contiguous_counts(self):
        with pytest.raises(DatasetFormatError) as err:
            parse_dataset("0,10\n2,5\n")
        assert err.value.line == 2

    def test_plus_only_on_last(self):
        with pytest.raises(DatasetFormatError):
            parse_dataset("0+,10\n1,5\n")

    def test_load_file(self, tmp_path):
        path = tmp_path / "claims.csv"
        path.write_text("0,7\n1,2\n", encoding="utf-8")
        ds = load_dataset_file(path)
        assert ds.name == "claims"
        assert ds.frequencies == (7, 2)
