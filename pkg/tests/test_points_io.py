"""
Tests for the points file format.
"""

import numpy as np
import pytest

from app.errors import InputError, PointsFileError
from app.points_io import read_points, write_points


class TestPointsFile:
    """Reading and writing points files."""

    def test_round_trip_is_bit_exact(self, tmp_path, make_random):
        """Test written coordinates read back bit for bit."""
        ps = make_random(200, dim=3, seed=11)
        path = tmp_path / "pts.txt"
        write_points(ps, path)
        back = read_points(path)
        assert np.array_equal(back.points, ps.points)
        assert back.label == "pts"

    def test_header_line(self, tmp_path, make_random):
        """Test the header line names d and n."""
        path = tmp_path / "pts.txt"
        write_points(make_random(5, dim=2, seed=1), path)
        assert path.read_text().splitlines()[0] == "# ppc-points d=2 n=5"

    def test_single_point(self, tmp_path):
        """Test a one-point file round-trips."""
        path = tmp_path / "one.txt"
        path.write_text("# ppc-points d=2 n=1\n0.25,0.5\n")
        ps = read_points(path)
        assert ps.points.tolist() == [[0.25, 0.5]]

    def test_count_mismatch(self, tmp_path):
        """Test a header count that disagrees with the body is rejected."""
        path = tmp_path / "bad.txt"
        path.write_text("# ppc-points d=1 n=3\n0.1\n0.2\n")
        with pytest.raises(PointsFileError, match="count 3 but 2 rows"):
            read_points(path)

    def test_dimension_mismatch(self, tmp_path):
        """Test rows with the wrong width are rejected."""
        path = tmp_path / "bad.txt"
        path.write_text("# ppc-points d=3 n=2\n0.1,0.2\n0.3,0.4\n")
        with pytest.raises(PointsFileError, match="dimension 3"):
            read_points(path)

    def test_missing_header(self, tmp_path):
        """Test a file without a header is rejected."""
        path = tmp_path / "bad.txt"
        path.write_text("0.1\n0.2\n")
        with pytest.raises(PointsFileError, match="malformed header"):
            read_points(path)

    def test_out_of_range_coordinate(self, tmp_path):
        """Test coordinates outside [0, 1) are rejected."""
        path = tmp_path / "bad.txt"
        path.write_text("# ppc-points d=1 n=2\n0.1\n1.5\n")
        with pytest.raises(PointsFileError):
            read_points(path)

    def test_garbage_body(self, tmp_path):
        """Test non-numeric rows are rejected."""
        path = tmp_path / "bad.txt"
        path.write_text("# ppc-points d=1 n=2\n0.1\nabc\n")
        with pytest.raises(PointsFileError, match="unparsable"):
            read_points(path)

    def test_missing_file(self, tmp_path):
        """Test a missing path raises PointsFileError."""
        with pytest.raises(PointsFileError, match="cannot open"):
            read_points(tmp_path / "nope.txt")

    def test_errors_are_input_errors(self, tmp_path):
        """Test every read failure is an InputError."""
        with pytest.raises(InputError):
            read_points(tmp_path / "nope.txt")
