import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reidtrack import io
from reidtrack.types import BBox, Detection


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestParseDetections:
    def test_center_conversion(self, tmp_path):
        p = write(tmp_path, "det.txt", "1,-1,10,20,30,40,0.9,-1,-1,-1\n")
        (d,) = io.parse_detections(p)
        assert d.frame == 1
        assert (d.box.cx, d.box.cy, d.box.w, d.box.h) == (25.0, 40.0, 30.0, 40.0)
        assert d.confidence == 0.9

    def test_empty_file(self, tmp_path):
        p = write(tmp_path, "det.txt", "")
        assert io.parse_detections(p) == []

    def test_non_positive_box(self, tmp_path):
        p = write(tmp_path, "det.txt", "1,-1,10,20,-5,40,0.9,-1,-1,-1\n")
        with pytest.raises(ValueError, match="non-positive box"):
            io.parse_detections(p)

    def test_malformed_line_names_line_number(self, tmp_path):
        p = write(tmp_path, "det.txt", "1,-1,10,20,30,40,0.9,-1,-1,-1\nbogus\n")
        with pytest.raises(ValueError, match=":2"):
            io.parse_detections(p)

    def test_confidence_threshold(self, tmp_path):
        p = write(
            tmp_path,
            "det.txt",
            "1,-1,10,20,30,40,0.9,-1,-1,-1\n1,-1,50,20,30,40,0.2,-1,-1,-1\n",
        )
        dets = io.parse_detections(p, conf_threshold=0.5)
        assert len(dets) == 1
        # dropped lines still consume an index so sidecars stay aligned
        assert dets[0].index_in_frame == 0
        dets_all = io.parse_detections(p)
        assert [d.index_in_frame for d in dets_all] == [0, 1]


class TestParseGroundTruth:
    def test_basic(self, tmp_path):
        p = write(tmp_path, "gt.txt", "3,7,0,0,10,10,1,1,1.0\n")
        (g,) = io.parse_ground_truth(p)
        assert (g.frame, g.gt_id) == (3, 7)

    def test_flag_zero_excluded(self, tmp_path):
        p = write(tmp_path, "gt.txt", "3,7,0,0,10,10,0,1,1.0\n")
        assert io.parse_ground_truth(p) == []

    def test_non_pedestrian_class_excluded(self, tmp_path):
        p = write(tmp_path, "gt.txt", "3,7,0,0,10,10,1,11,1.0\n")
        assert io.parse_ground_truth(p) == []

    def test_duplicate_identity_rejected(self, tmp_path):
        p = write(
            tmp_path, "gt.txt", "3,7,0,0,10,10,1,1,1.0\n3,7,5,5,10,10,1,1,1.0\n"
        )
        with pytest.raises(ValueError, match="duplicate ground-truth identity"):
            io.parse_ground_truth(p)


class TestLoadFeatures:
    def make_dets(self):
        return [Detection(1, 0, BBox(25, 40, 30, 40), 0.9)]

    def test_three_four_five(self, tmp_path):
        p = write(tmp_path, "f.txt", "D 2\n1,0,3.0,4.0\n")
        (d,) = io.load_features(p, self.make_dets())
        assert np.allclose(d.feature, [0.6, 0.8])

    def test_header_only(self, tmp_path):
        p = write(tmp_path, "f.txt", "D 2\n")
        (d,) = io.load_features(p, self.make_dets())
        assert d.feature is None

    def test_dimension_mismatch(self, tmp_path):
        p = write(tmp_path, "f.txt", "D 2\n1,0,1.0\n")
        with pytest.raises(ValueError, match="dimension 2"):
            io.load_features(p, self.make_dets())

    def test_unknown_detection(self, tmp_path):
        p = write(tmp_path, "f.txt", "D 2\n5,0,1.0,2.0\n")
        with pytest.raises(ValueError, match="unknown detection"):
            io.load_features(p, self.make_dets())

    def test_zero_feature(self, tmp_path):
        p = write(tmp_path, "f.txt", "D 2\n1,0,0.0,0.0\n")
        with pytest.raises(ValueError, match="zero feature"):
            io.load_features(p, self.make_dets())


class TestWriteResults:
    def test_format(self, tmp_path):
        p = tmp_path / "res.txt"
        io.write_results(p, [(1, 2, BBox(25, 40, 30, 40))])
        assert p.read_text() == "1,2,10.00,20.00,30.00,40.00,1,-1,-1,-1\n"

    def test_empty(self, tmp_path):
        p = tmp_path / "res.txt"
        io.write_results(p, [])
        assert p.read_text() == ""

    def test_non_positive_id_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="non-positive track id"):
            io.write_results(tmp_path / "res.txt", [(1, 0, BBox(25, 40, 30, 40))])

    @given(
        rows=st.lists(
            st.tuples(
                st.integers(1, 500),
                st.integers(1, 99),
                st.tuples(
                    st.floats(-500, 2500),
                    st.floats(-500, 2500),
                    st.floats(0.1, 400),
                    st.floats(0.1, 400),
                ),
            ),
            max_size=30,
            unique_by=lambda r: (r[0], r[1]),
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip_within_print_precision(self, rows, tmp_path_factory):
        p = tmp_path_factory.mktemp("rt") / "res.txt"
        boxes = [(f, t, BBox(*b)) for f, t, b in rows]
        io.write_results(p, boxes)
        back = io.parse_results(p)
        assert len(back) == len(boxes)
        for (f, t, b), (f2, t2, b2) in zip(
            sorted(boxes, key=lambda r: (r[0], r[1])), back
        ):
            assert (f, t) == (f2, t2)
            for a, c in ((b.cx, b2.cx), (b.cy, b2.cy), (b.w, b2.w), (b.h, b2.h)):
                # left/top and w/h each rounded to 0.005; centers compound to 0.01
                assert abs(a - c) <= 0.011


class TestOrderInsensitivity:
    def test_shuffled_detection_lines_same_sequence(self, tmp_path):
        lines = [
            "2,-1,50,20,30,40,0.8,-1,-1,-1",
            "1,-1,10,20,30,40,0.9,-1,-1,-1",
            "1,-1,90,20,30,40,0.7,-1,-1,-1",
        ]
        a = write(tmp_path, "a.txt", "\n".join(lines) + "\n")
        # frame order shuffled; within-frame line order preserved (it defines
        # index_in_frame)
        b = write(tmp_path, "b.txt", "\n".join([lines[1], lines[2], lines[0]]) + "\n")
        da = io.SequenceData(detections=tuple(io.parse_detections(a)))
        db = io.SequenceData(detections=tuple(io.parse_detections(b)))
        assert da.detections == db.detections


class TestSynthWriters:
    def test_det_gt_feature_round_trip(self, tmp_path):
        from reidtrack.synth import ScenarioKind, ScenarioSpec, generate

        gt, dets = generate(
            ScenarioSpec(kind=ScenarioKind.PARALLEL, frames=5, feature_dim=4, seed=2)
        )
        io.write_detections(tmp_path / "det.txt", dets)
        io.write_ground_truth(tmp_path / "gt.txt", gt)
        io.write_features(tmp_path / "features.txt", dets, dim=4)
        dets2 = io.parse_detections(tmp_path / "det.txt")
        dets2 = io.load_features(tmp_path / "features.txt", dets2)
        gt2 = io.parse_ground_truth(tmp_path / "gt.txt")
        assert len(dets2) == len(dets) and len(gt2) == len(gt)
        for d, d2 in zip(dets, dets2):
            assert abs(d.box.cx - d2.box.cx) <= 0.011
            assert np.allclose(d.feature, d2.feature, atol=1e-6)
