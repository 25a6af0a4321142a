import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordineq import ConfigError, CountData, ParseError
from ordineq.io import load_config, load_counts, load_microdata, parse_config, write_counts

from .conftest import DATA_DIR, REFERENCE_MEANS


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCounts:
    def test_simple(self, tmp_path):
        data, labels = load_counts(write(tmp_path, "c.csv", "category,count\n1,3\n2,1\n"))
        assert data.counts.tolist() == [3, 1] and data.K == 2 and labels == ["1", "2"]

    def test_unsorted_with_labels_and_tabs(self, tmp_path):
        path = write(tmp_path, "c.tsv", "category\tcount\tlabel\n2\t5\tYear 12\n1\t7\tYear 11\n")
        data, labels = load_counts(path)
        assert data.counts.tolist() == [7, 5] and labels == ["Year 11", "Year 12"]

    def test_shipped_reference_dataset(self):
        data, labels = load_counts(DATA_DIR / "indigenous_2001.csv")
        assert data.K == 7 and data.N == 10_000
        np.testing.assert_allclose(data.counts / data.N, REFERENCE_MEANS[2001], atol=1e-12)
        assert labels[0] == "Year 11 or below"

    @pytest.mark.parametrize(
        "text, line, fragment",
        [
            ("category,count\n1,3\n2,-1\n", 3, "negative"),
            ("category,count\n1,3\n2,x\n", 3, "not an integer"),
            ("category,count\n1,3\n1,4\n", 3, "duplicate"),
            ("category,count\n1,3\n3,4\n", 3, "without gaps"),
            ("cat,count\n1,3\n", 1, "missing"),
            ("category,count,extra\n1,3,4\n", 1, "unexpected"),
            ("category,count\n1,3,4\n2,2\n", 2, "fields"),
            ("category,count\n1,3\n", 2, "at least 2"),
            ("category,count\n1,0\n2,0\n", 1, "total count"),
            ("", 1, "empty"),
        ],
    )
    def test_errors_name_file_and_line(self, tmp_path, text, line, fragment):
        path = write(tmp_path, "bad.csv", text)
        with pytest.raises(ParseError) as err:
            load_counts(path)
        assert err.value.line == line
        assert str(err.value).startswith(f"{path}:{line}:")
        assert fragment in str(err.value)

    @settings(max_examples=50)
    @given(st.lists(st.integers(0, 10**9), min_size=2, max_size=12).filter(lambda c: sum(c) > 0))
    def test_round_trip(self, tmp_path_factory, counts):
        path = tmp_path_factory.mktemp("rt") / "c.csv"
        write_counts(path, CountData(counts))
        back, _ = load_counts(path)
        assert back.counts.tolist() == counts


class TestLoadMicrodata:
    ROWS = "unit_id,category,weight\na,1,1\nb,1,1\nc,2,1\nd,3,1\n"

    def test_single_dataset(self, tmp_path):
        sets = load_microdata(write(tmp_path, "m.csv", self.ROWS))
        assert list(sets) == ["all"]
        assert sets["all"].N == 4 and sets["all"].K == 3

    def test_group_split(self, tmp_path):
        text = "unit_id,category,weight,group\na,1,1,ind\nb,1,1,ind\nc,2,1,nonind\nd,3,1,nonind\n"
        sets = load_microdata(write(tmp_path, "m.csv", text))
        assert list(sets) == ["ind", "nonind"]
        assert sets["ind"].N == 2 and sets["nonind"].N == 2
        # K comes from the whole file
        assert sets["ind"].K == 3

    @pytest.mark.parametrize(
        "row, fragment",
        [("e,1,0", "positive"), ("e,1,-2", "positive"), ("e,0,1", "outside"), ("e,1", "fields"),
         ("e,1,abc", "not a number"), ("a,1,1", "duplicate"), (",1,1", "empty unit_id")],
    )
    def test_errors(self, tmp_path, row, fragment):
        path = write(tmp_path, "m.csv", self.ROWS + row + "\n")
        with pytest.raises(ParseError) as err:
            load_microdata(path)
        assert err.value.line == 6 and fragment in str(err.value)

    def test_category_above_declared_k(self, tmp_path):
        with pytest.raises(ParseError):
            load_microdata(write(tmp_path, "m.csv", self.ROWS), n_categories=2)


def base_config(**over):
    cfg = {"groups": {"a": {"counts": [3, 1]}, "b": {"counts": [1, 3]}},
           "comparisons": [{"x": "a", "y": "b"}]}
    cfg.update(over)
    return cfg


class TestConfig:
    def test_defaults(self):
        cfg = parse_config(base_config())
        assert cfg.draws == 10_000 and cfg.alphas == (0.1, 0.9) and cfg.gld_grid_step == 0.01
        assert cfg.prior == 1.0
        assert cfg.comparisons[0].criteria == ("FSD", "restricted-FSD", "GLD")

    @pytest.mark.parametrize(
        "over",
        [
            {"bogus": 1},
            {"groups": {"a": {"counts": [3, 1], "colour": "red"}}},
            {"comparisons": [{"x": "a", "y": "b", "z": 1}]},
            {"comparisons": [{"x": "a", "y": "missing"}]},
            {"comparisons": [{"x": "a", "y": "a"}]},
            {"comparisons": [{"x": "a", "y": "b", "criteria": ["SSD"]}]},
            {"gld_grid_step": 0.0},
            {"gld_grid_step": 0.6},
            {"alphas": [1.0]},
            {"draws": 0},
            {"draws": 2.5},
            {"seed": -1},
            {"groups": {}},
            {"groups": {"a": {"counts": [3, 1], "microdata": "x.csv"}}},
            {"groups": {"a": {"counts": [3, -1]}}},
            {"groups": {"a": {"counts": [3, 1]}, "b": {"counts": [1, 1, 1]}}},
        ],
    )
    def test_rejected(self, over):
        with pytest.raises(ConfigError):
            parse_config(base_config(**over))

    def test_duplicate_group_names(self, tmp_path):
        path = write(tmp_path, "c.json", '{"groups": {"a": {"counts": [1, 1]}, "a": {"counts": [2, 2]}}}')
        with pytest.raises(ConfigError):
            load_config(path)

    def test_invalid_json_reports_line(self, tmp_path):
        path = write(tmp_path, "c.json", '{\n"groups": \n}')
        with pytest.raises(ParseError) as err:
            load_config(path)
        assert err.value.line == 3

    def test_relative_paths_and_microdata(self, tmp_path):
        write(tmp_path, "a.csv", "category,count\n1,3\n2,1\n3,0\n")
        write(tmp_path, "m.csv", "unit_id,category,weight,group\na,1,1,g1\nb,3,2,g1\nc,2,1,g2\n")
        cfg = {"groups": {"A": {"counts": "a.csv"},
                          "G1": {"microdata": "m.csv", "group": "g1"},
                          "G2": {"microdata": "m.csv", "group": "g2"}},
               "comparisons": [{"x": "A", "y": "G1", "criteria": ["GLD"]}]}
        path = write(tmp_path, "c.json", json.dumps(cfg))
        loaded = load_config(path)
        assert loaded.groups["A"].data.counts.tolist() == [3, 1, 0]
        assert loaded.groups["G1"].data.N == 2 and loaded.groups["G2"].K == 3

    def test_microdata_group_required_when_ambiguous(self, tmp_path):
        write(tmp_path, "m.csv", "unit_id,category,weight,group\na,1,1,g1\nc,2,1,g2\n")
        with pytest.raises(ConfigError):
            parse_config({"groups": {"A": {"microdata": "m.csv"}}}, tmp_path)
        with pytest.raises(ConfigError):
            parse_config({"groups": {"A": {"microdata": "m.csv", "group": "g3"}}}, tmp_path)

    def test_shipped_configs_load(self):
        cfg = load_config(DATA_DIR / "indigenous.json")
        assert list(cfg.groups) == ["2001", "2006", "2014", "2017"] and len(cfg.comparisons) == 6
        micro = load_config(DATA_DIR / "microdata_example.json")
        assert micro.groups["2001"].data.K == 7
