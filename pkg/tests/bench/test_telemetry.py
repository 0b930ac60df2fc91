# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

import numpy as np
import pytest

from dslab.bench.telemetry import (
    fmt, read_csv, read_history, read_manifest, read_outcomes, write_csv,
    write_manifest, write_seed_telemetry
)
from dslab.exceptions import AbsentDataError, ArtifactError
from dslab.metrics import GenerationRecord, RunTelemetry


class TestCsv:

    def test_reals_keep_every_digit(self):
        assert float(fmt(0.1 + 0.2)) == 0.1 + 0.2
        assert fmt(3) == "3"

    def test_comment_is_skipped(self, tmp_path):
        path = tmp_path / "a.csv"
        write_csv(path, ("a", "b"), [(1, 0.5)], comment="note")

        assert path.read_text().splitlines()[0] == "# note"
        assert read_csv(path) == (["a", "b"], [["1", "0.5"]])

    def test_missing(self, tmp_path):
        with pytest.raises(AbsentDataError):
            read_csv(tmp_path / "nope.csv")

    def test_unwritable(self, tmp_path):
        with pytest.raises(ArtifactError):
            write_csv(tmp_path / "no" / "dir.csv", ("a",), [])


class TestManifest:

    def test_sorted_keys(self, tmp_path):
        path = tmp_path / "manifest.json"
        write_manifest(path, {"b": 1, "a": [1.5, 2]})

        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert read_manifest(path) == {"a": [1.5, 2], "b": 1}

    def test_missing(self, tmp_path):
        with pytest.raises(AbsentDataError):
            read_manifest(tmp_path / "manifest.json")


class TestSeedTelemetry:

    def test_files(self, tmp_path):
        telemetry = RunTelemetry("run", 2)
        telemetry.record(GenerationRecord(0, 0.25, 1, 1, 1, 3.5))
        telemetry.record_selection(0, [[0.1, -0.2], [0.3, 0.4]])

        write_seed_telemetry(tmp_path, telemetry, np.array([[0.5, 0.5]]))

        header, rows = read_csv(tmp_path / "generations.csv")
        assert rows == [["0", "0.25", "1", "1", "1"]]
        assert read_history(tmp_path) == [(0, 0.1, -0.2), (0, 0.3, 0.4)]
        assert read_outcomes(tmp_path) == [(0.5, 0.5)]
        assert (tmp_path / "timing.csv").exists()
