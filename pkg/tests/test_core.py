import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from heapseg.core.camera import CameraIntrinsics, CameraModel, deproject, project
from heapseg.core.geometry import RigidTransform, rotation_about_z, rotation_between
from heapseg.core.image import DepthImage
from heapseg.core.masks import InstanceMask, iou_matrix, mask_iou, rle_decode, rle_encode

INTR = CameraIntrinsics(fx=500, fy=500, cx=256, cy=192, width=512, height=384)


class TestProject:
    def test_principal_ray(self):
        assert project(INTR, np.array([0.0, 0.0, 1.0])) == (256.0, 192.0, 1.0)

    def test_unit_offset(self):
        assert project(INTR, np.array([1.0, 0.0, 1.0])) == (756.0, 192.0, 1.0)

    def test_hand_case(self):
        u, v, d = project(INTR, np.array([0.2, -0.1, 2.0]))
        assert (u, v, d) == (306.0, 167.0, 2.0)

    def test_behind_camera_rejected(self):
        with pytest.raises(ValueError, match="behind camera"):
            project(INTR, np.array([0.0, 0.0, -1.0]))
        with pytest.raises(ValueError, match="behind camera"):
            project(INTR, np.array([0.0, 0.0, 0.0]))


class TestDeproject:
    def test_principal_point(self):
        np.testing.assert_allclose(
            deproject(INTR, 256.0, 192.0, 1.5), [0.0, 0.0, 1.5]
        )

    def test_unit_focal_offset(self):
        np.testing.assert_allclose(
            deproject(INTR, 256.0 + 500.0, 192.0, 2.0), [2.0, 0.0, 2.0]
        )

    def test_invalid_depth_rejected(self):
        with pytest.raises(ValueError, match="invalid depth"):
            deproject(INTR, 10.0, 10.0, 0.0)

    def test_round_trip_random_points(self):
        rng = np.random.default_rng(0)
        pts = np.column_stack(
            [
                rng.uniform(-1, 1, 1000),
                rng.uniform(-1, 1, 1000),
                rng.uniform(0.01, 10.0, 1000),
            ]
        )
        for p in pts:
            u, v, d = project(INTR, p)
            np.testing.assert_allclose(deproject(INTR, u, v, d), p, atol=1e-9)


class TestIntrinsicsValidation:
    def test_invalid_focal(self):
        with pytest.raises(ValueError):
            CameraIntrinsics(fx=0, fy=500, cx=1, cy=1, width=4, height=4)

    def test_principal_point_outside(self):
        with pytest.raises(ValueError):
            CameraIntrinsics(fx=5, fy=5, cx=4.0, cy=1, width=4, height=4)


def random_rotation(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


class TestRigidTransform:
    def test_orthonormality_enforced(self):
        with pytest.raises(ValueError):
            RigidTransform(np.eye(3) * 2.0, np.zeros(3))

    def test_reflection_rejected(self):
        r = np.diag([1.0, 1.0, -1.0])
        with pytest.raises(ValueError):
            RigidTransform(r, np.zeros(3))

    def test_compose_associative(self):
        rng = np.random.default_rng(1)
        xf = [
            RigidTransform(random_rotation(rng), rng.normal(size=3))
            for _ in range(3)
        ]
        a, b, c = xf
        left = a.compose(b.compose(c))
        right = a.compose(b).compose(c)
        np.testing.assert_allclose(left.rotation, right.rotation, atol=1e-9)
        np.testing.assert_allclose(left.translation, right.translation, atol=1e-9)

    def test_inverse_round_trip(self):
        rng = np.random.default_rng(2)
        t = RigidTransform(random_rotation(rng), rng.normal(size=3))
        pts = rng.normal(size=(50, 3))
        np.testing.assert_allclose(t.inverse().apply(t.apply(pts)), pts, atol=1e-9)

    def test_identity(self):
        pts = np.arange(12.0).reshape(4, 3)
        np.testing.assert_array_equal(RigidTransform.identity().apply(pts), pts)

    def test_rotation_between(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = rng.normal(size=3)
            b = rng.normal(size=3)
            r = rotation_between(a, b)
            got = r @ (a / np.linalg.norm(a))
            np.testing.assert_allclose(got, b / np.linalg.norm(b), atol=1e-9)

    def test_rotation_about_z(self):
        r = rotation_about_z(np.pi / 2)
        np.testing.assert_allclose(r @ [1, 0, 0], [0, 1, 0], atol=1e-12)


class TestDepthImage:
    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            DepthImage(np.full((2, 2), -1.0, dtype=np.float32))

    def test_valid_mask(self):
        img = DepthImage(np.array([[0.0, 1.5]], dtype=np.float32))
        np.testing.assert_array_equal(img.valid, [[False, True]])
        assert img.width == 2 and img.height == 1

    def test_all_invalid(self):
        img = DepthImage.all_invalid(3, 2)
        assert img.data.shape == (2, 3)
        assert not img.valid.any()


class TestMaskRle:
    def test_round_trip_hand_case(self):
        bm = np.array([[1, 0], [0, 1]], dtype=bool)
        mask = InstanceMask.from_bitmap(bm)
        np.testing.assert_array_equal(mask.decode(), bm)
        assert mask.area == 2

    def test_rle_is_column_major_starting_with_zeros(self):
        # column-major scan of [[0,1],[1,0]] reads 0,1,1,0 -> runs 1,2,1
        bm = np.array([[0, 1], [1, 0]], dtype=bool)
        np.testing.assert_array_equal(rle_encode(bm), [1, 2, 1])

    def test_all_ones_leading_zero_run(self):
        bm = np.ones((2, 2), dtype=bool)
        np.testing.assert_array_equal(rle_encode(bm), [0, 4])

    def test_runs_sum_invariant(self):
        with pytest.raises(ValueError):
            InstanceMask(height=2, width=2, rle=np.array([1, 1]), area=1)

    def test_area_must_match(self):
        with pytest.raises(ValueError):
            InstanceMask(height=2, width=2, rle=np.array([1, 2, 1]), area=1)

    @given(
        hnp.arrays(
            dtype=bool,
            shape=st.tuples(
                st.integers(min_value=1, max_value=64),
                st.integers(min_value=1, max_value=64),
            ),
        )
    )
    def test_round_trip_property(self, bm):
        mask = InstanceMask.from_bitmap(bm)
        np.testing.assert_array_equal(mask.decode(), bm)
        assert mask.area == int(bm.sum())
        assert int(mask.rle.sum()) == bm.size

    @settings(max_examples=25)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_round_trip_large_random(self, seed):
        rng = np.random.default_rng(seed)
        h, w = rng.integers(1, 513, size=2)
        bm = rng.random((h, w)) < rng.random()
        np.testing.assert_array_equal(
            rle_decode(rle_encode(bm), int(h), int(w)), bm
        )

    def test_bbox(self):
        bm = np.zeros((5, 7), dtype=bool)
        bm[1:3, 2:6] = True
        assert InstanceMask.from_bitmap(bm).bbox() == (2, 1, 4, 2)


class TestMaskIou:
    def test_self_iou(self):
        bm = np.eye(4, dtype=bool)
        m = InstanceMask.from_bitmap(bm)
        assert mask_iou(m, m) == 1.0

    def test_disjoint(self):
        a = InstanceMask.from_bitmap(np.array([[1, 0]], dtype=bool))
        b = InstanceMask.from_bitmap(np.array([[0, 1]], dtype=bool))
        assert mask_iou(a, b) == 0.0

    def test_hand_case_one_third(self):
        grid = np.zeros((4, 4), dtype=bool)
        a = grid.copy()
        a[0:2, 0:2] = True
        b = grid.copy()
        b[0:2, 1:3] = True
        assert mask_iou(
            InstanceMask.from_bitmap(a), InstanceMask.from_bitmap(b)
        ) == pytest.approx(1 / 3)

    def test_empty_union(self):
        e = InstanceMask.from_bitmap(np.zeros((2, 2), dtype=bool))
        assert mask_iou(e, e) == 0.0

    def test_dimension_mismatch(self):
        a = InstanceMask.from_bitmap(np.ones((2, 2), dtype=bool))
        b = InstanceMask.from_bitmap(np.ones((2, 3), dtype=bool))
        with pytest.raises(ValueError):
            mask_iou(a, b)

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_symmetric_and_bounded(self, seed):
        rng = np.random.default_rng(seed)
        a = InstanceMask.from_bitmap(rng.random((6, 6)) < 0.4)
        b = InstanceMask.from_bitmap(rng.random((6, 6)) < 0.4)
        ab = mask_iou(a, b)
        assert ab == mask_iou(b, a)
        assert 0.0 <= ab <= 1.0

    def test_iou_matrix_matches_pairwise(self):
        rng = np.random.default_rng(9)
        preds = [InstanceMask.from_bitmap(rng.random((5, 5)) < 0.5) for _ in range(3)]
        gts = [InstanceMask.from_bitmap(rng.random((5, 5)) < 0.5) for _ in range(4)]
        mat = iou_matrix(preds, gts)
        for i, p in enumerate(preds):
            for j, g in enumerate(gts):
                assert mat[i, j] == pytest.approx(mask_iou(p, g))


class TestCameraModel:
    def test_pose_is_camera_to_world(self):
        pose = RigidTransform(rotation_about_z(0.3), np.array([1.0, 2.0, 3.0]))
        cam = CameraModel(intrinsics=INTR, pose=pose)
        origin_world = cam.pose.apply(np.zeros((1, 3)))[0]
        np.testing.assert_allclose(origin_world, [1.0, 2.0, 3.0])
