import tempfile
import unittest
from pathlib import Path

import numpy as np

from ssmlab.errors import ShapeMismatchError, ValidationError
from ssmlab.models.sweep_rows import ConditionRow
from ssmlab.serialization import (
    dumps_csv,
    dumps_json,
    dumps_matrix,
    format_value,
    loads_csv,
    loads_json,
    loads_matrix,
    parse_value,
    read_text,
    write_text,
)

METADATA = {"seed": "0", "version": "0+unknown"}


class TestValues(unittest.TestCase):
    def test_format(self):
        """Floats keep full precision, other cells print plainly."""
        self.assertEqual(format_value(0.1), "0.1")
        self.assertEqual(format_value(np.float64(1 / 3)), repr(1 / 3))
        self.assertEqual(format_value(np.int64(4)), "4")
        self.assertEqual(format_value(True), "True")
        self.assertEqual(format_value("iid"), "iid")

    def test_parse(self):
        """Integers first, then floats, then text."""
        self.assertEqual(parse_value("4"), 4)
        self.assertEqual(parse_value("4.0"), 4.0)
        self.assertIsInstance(parse_value("4.0"), float)
        self.assertEqual(parse_value("inf"), float("inf"))
        self.assertEqual(parse_value("s4d-lin"), "s4d-lin")


class TestCsv(unittest.TestCase):
    """Row tables with metadata comments."""

    def test_layout(self):
        """Metadata lines come first, then the header."""
        text = dumps_csv(("kind", "L"), [("iid", 8)], METADATA)

        self.assertEqual(text, "# seed=0\n# version=0+unknown\nkind,L\niid,8\n")

    def test_reserialization_is_identical(self):
        """Reading and writing again reproduces the same bytes."""
        rows = [
            ConditionRow("s4d-lin", 4, 1.0, 0.4123456789, 0.61, 1.479),
            ConditionRow("s4d-real", 12, 0.5, 1e-17, 1.8, float("inf")),
        ]
        text = dumps_csv(ConditionRow.columns(), [row.values() for row in rows], METADATA)
        table = loads_csv(text)

        self.assertEqual(table.metadata, METADATA)
        self.assertEqual(table.columns, ConditionRow.columns())
        self.assertEqual(table.rows[0], rows[0].values())
        self.assertEqual(dumps_csv(table.columns, table.rows, table.metadata), text)

    def test_row_length(self):
        """Every row has one value per column."""
        with self.assertRaises(ShapeMismatchError):
            dumps_csv(("a", "b"), [(1,)], {})

    def test_malformed(self):
        """Metadata lines need a key and a value; tables need a header."""
        with self.assertRaises(ValidationError):
            loads_csv("# nothing here\na\n1\n")

        with self.assertRaises(ValidationError):
            loads_csv("# seed=0\n")


class TestJson(unittest.TestCase):
    def test_reserialization_is_identical(self):
        """Metadata sits under meta and the text is stable."""
        payload = {"loss_test": [1.0, 0.5], "diverged": False, "kernel": [0.25, 0.125]}
        text = dumps_json(payload, METADATA)
        metadata, data = loads_json(text)

        self.assertEqual(metadata, METADATA)
        self.assertEqual(data, payload)
        self.assertEqual(dumps_json(data, metadata), text)

    def test_reserved_key(self):
        """The payload cannot shadow the metadata."""
        with self.assertRaises(ValidationError):
            dumps_json({"meta": 1}, METADATA)

        with self.assertRaises(ValidationError):
            loads_json("[1, 2]")


class TestMatrix(unittest.TestCase):
    def test_round_trip(self):
        """Values read back exactly."""
        matrix = np.array([[1.0, 1 / 3], [-2.5, 1e-300]])
        metadata, values = loads_matrix(dumps_matrix(matrix, METADATA))

        self.assertEqual(metadata, METADATA)
        np.testing.assert_array_equal(values, matrix)

    def test_vector_is_a_column(self):
        """Vectors are written as one column."""
        _, values = loads_matrix(dumps_matrix([1.0, 2.0, 3.0], {}))

        self.assertEqual(values.shape, (3, 1))

    def test_declared_shape(self):
        """The dimension line must match the rows."""
        with self.assertRaises(ShapeMismatchError):
            loads_matrix("2,2\n1.0,2.0\n")

        with self.assertRaises(ValidationError):
            loads_matrix("two,2\n")


class TestFiles(unittest.TestCase):
    def test_write_and_read(self):
        """Parent directories are created on write."""
        with tempfile.TemporaryDirectory() as folder:
            path = Path(folder) / "nested" / "out.csv"
            write_text(path, "a\n1\n")

            self.assertEqual(read_text(path), "a\n1\n")

    def test_missing_file(self):
        """Unreadable paths raise a validation error."""
        with tempfile.TemporaryDirectory() as folder:
            with self.assertRaises(ValidationError):
                read_text(Path(folder) / "missing.csv")


if __name__ == "__main__":
    unittest.main()
