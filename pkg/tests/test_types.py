import pickle

import numpy as np
import pytest

from reidtrack.types import (
    AssociationMatrix,
    BBox,
    Detection,
    Particle,
    TrackState,
    TrackStatus,
    normalize_feature,
)


def make_track(tid=1, **kw):
    defaults = dict(
        id=tid,
        mean=np.array([25.0, 40.0, 0.0, 0.0, 30.0, 40.0]),
        cov=np.eye(6),
    )
    defaults.update(kw)
    return TrackState(**defaults)


class TestBBox:
    def test_valid(self):
        b = BBox(25.0, 40.0, 30.0, 40.0)
        assert b.left == 10.0 and b.top == 20.0

    @pytest.mark.parametrize("w,h", [(-5.0, 40.0), (0.0, 40.0), (30.0, -1.0)])
    def test_rejects_non_positive_size(self, w, h):
        with pytest.raises(ValueError, match="non-positive"):
            BBox(10.0, 20.0, w, h)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            BBox(np.nan, 20.0, 30.0, 40.0)

    def test_ltwh_round_trip(self):
        b = BBox.from_ltwh(10.0, 20.0, 30.0, 40.0)
        assert (b.cx, b.cy) == (25.0, 40.0)


class TestNormalizeFeature:
    def test_unit_norm(self):
        f = normalize_feature([3.0, 4.0])
        assert np.allclose(f, [0.6, 0.8])
        assert abs(np.linalg.norm(f) - 1.0) <= 1e-9

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError, match="zero feature"):
            normalize_feature([0.0, 0.0])

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            normalize_feature([1.0, np.inf])


class TestDetection:
    def test_negative_frame_rejected(self):
        with pytest.raises(ValueError):
            Detection(-1, 0, BBox(1, 1, 1, 1), 1.0)

    def test_feature_made_readonly(self):
        d = Detection(0, 0, BBox(1, 1, 1, 1), 1.0, feature=np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            d.feature[0] = 2.0


class TestTrackState:
    def test_asymmetric_cov_rejected(self):
        cov = np.eye(6)
        cov[0, 1] = 1e-3
        with pytest.raises(ValueError, match="symmetric"):
            make_track(cov=cov)

    def test_non_pd_cov_rejected(self):
        cov = np.eye(6)
        cov[0, 0] = -1.0
        with pytest.raises(ValueError, match="positive-definite"):
            make_track(cov=cov)

    def test_ref_feature_count_consistency(self):
        with pytest.raises(ValueError, match="feature_count"):
            make_track(ref_feature=np.array([1.0, 0.0]), feature_count=0)
        with pytest.raises(ValueError, match="feature_count"):
            make_track(ref_feature=None, feature_count=1)

    def test_non_positive_id_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            make_track(tid=0)


class TestAssociationMatrix:
    def test_rows_must_sum_to_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            AssociationMatrix(1, np.array([[0.5, 0.4]]), track_ids=(7,))

    def test_entries_must_be_probabilities(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            AssociationMatrix(1, np.array([[1.5, -0.5]]), track_ids=(7,))

    def test_shape_consistency(self):
        with pytest.raises(ValueError, match="inconsistent"):
            AssociationMatrix(1, np.array([[1.0]]), track_ids=(7,))


class TestParticle:
    def test_duplicate_ids_rejected(self):
        t1, t2 = make_track(3), make_track(3)
        with pytest.raises(ValueError, match="duplicate"):
            Particle(tracks=(t1, t2), log_weight=0.0, next_id=4)

    def test_non_finite_weight_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            Particle(tracks=(), log_weight=np.inf, next_id=1)


class TestSerializationRoundTrip:
    def test_pickle_preserves_values(self):
        det = Detection(
            3, 1, BBox(25.0, 40.0, 30.0, 40.0), 0.9, feature=normalize_feature([3.0, 4.0])
        )
        track = make_track(ref_feature=np.array([0.6, 0.8]), feature_count=2, hits=5)
        for obj in (det, track):
            copy = pickle.loads(pickle.dumps(obj))
            assert copy == obj

    def test_status_transitions_table(self):
        from reidtrack.types import status_transition_allowed

        assert status_transition_allowed(TrackStatus.TENTATIVE, TrackStatus.CONFIRMED)
        assert status_transition_allowed(TrackStatus.TENTATIVE, TrackStatus.DELETED)
        assert status_transition_allowed(TrackStatus.CONFIRMED, TrackStatus.DELETED)
        assert not status_transition_allowed(TrackStatus.CONFIRMED, TrackStatus.TENTATIVE)
        assert not status_transition_allowed(TrackStatus.DELETED, TrackStatus.CONFIRMED)
